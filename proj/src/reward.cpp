#include "armed/reward.hpp"

#include <array>

#include "armed/error.hpp"
#include "armed/text_metrics.hpp"

namespace armed {
namespace {

constexpr std::string_view kThinkOpen = "<think>";
constexpr std::string_view kThinkClose = "</think>";
constexpr std::string_view kAnswerOpen = "<answer>";
constexpr std::string_view kAnswerClose = "</answer>";

std::size_t count(std::string_view haystack, std::string_view needle) {
  std::size_t n = 0;
  for (auto pos = haystack.find(needle); pos != std::string_view::npos;
       pos = haystack.find(needle, pos + needle.size())) {
    ++n;
  }
  return n;
}

struct Blocks {
  std::string_view think;
  std::string_view answer;
};

std::optional<Blocks> parse_blocks(std::string_view s) {
  for (auto tag : std::array{kThinkOpen, kThinkClose, kAnswerOpen, kAnswerClose}) {
    if (count(s, tag) != 1) return std::nullopt;
  }
  const auto to = s.find(kThinkOpen);
  const auto tc = s.find(kThinkClose);
  const auto ao = s.find(kAnswerOpen);
  const auto ac = s.find(kAnswerClose);
  if (!(to < tc && tc < ao && ao < ac)) return std::nullopt;
  Blocks b;
  b.think = s.substr(to + kThinkOpen.size(), tc - to - kThinkOpen.size());
  b.answer = s.substr(ao + kAnswerOpen.size(), ac - ao - kAnswerOpen.size());
  if (b.think.empty() || b.answer.empty()) return std::nullopt;
  return b;
}

}  // namespace

void RewardWeights::validate() const {
  if (!(lambda1 >= 0.0 && lambda1 <= 1.0)) throw InvalidArgument("lambda1 must lie in [0,1]");
  if (!(lambda2 >= 0.0 && lambda2 <= 1.0)) throw InvalidArgument("lambda2 must lie in [0,1]");
  if (!(gamma1 >= 0.0 && gamma2 >= 0.0 && gamma3 >= 0.0)) {
    throw InvalidArgument("reward gammas must be non-negative");
  }
  if (!(gamma1 + gamma2 + gamma3 > 0.0)) throw InvalidArgument("reward gammas sum to zero");
}

double format_reward(std::string_view response) {
  return parse_blocks(response) ? 1.0 : 0.0;
}

std::optional<std::string> extract_answer(std::string_view response) {
  if (auto b = parse_blocks(response)) return std::string(b->answer);
  return std::nullopt;
}

double combine_total(double r_c, double r_as, double r_f, const RewardWeights& w) {
  return (w.gamma1 * r_c + w.gamma2 * r_as + w.gamma3 * r_f) /
         (w.gamma1 + w.gamma2 + w.gamma3);
}

ScoredPair total_reward(std::string_view response, std::string_view reference,
                        double r_as, const RewardWeights& weights) {
  weights.validate();
  if (!(r_as >= 0.0 && r_as <= 1.0)) throw InvalidArgument("r_as must lie in [0,1]");
  ScoredPair out;
  const auto answer = extract_answer(response);
  out.candidate = answer ? *answer : std::string(response);
  out.reference = std::string(reference);
  out.r_f = answer ? 1.0 : 0.0;
  out.r_c = textual_correctness(out.candidate, reference, weights.lambda1).r_c;
  out.r_as = r_as;
  out.r_total = combine_total(out.r_c, out.r_as, out.r_f, weights);
  return out;
}

}  // namespace armed
