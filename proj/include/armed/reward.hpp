#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace armed {

struct RewardWeights {
  double lambda1 = 0.5;
  double lambda2 = 0.2;
  double gamma1 = 0.4;
  double gamma2 = 0.4;
  double gamma3 = 0.2;

  void validate() const;
};

struct ScoredPair {
  std::string candidate;
  std::string reference;
  double r_c = 0.0;
  double r_as = 0.0;
  double r_f = 0.0;
  double r_total = 0.0;
};

// 1.0 iff the response is `<think>…</think>` followed by `<answer>…</answer>`,
// both bodies non-empty, and no other think/answer tag appears anywhere.
// Text outside the two blocks is allowed. Case-sensitive.
double format_reward(std::string_view response);

// Body of the `<answer>` block when the response is well formed.
std::optional<std::string> extract_answer(std::string_view response);

// (g1 * r_c + g2 * r_as + g3 * r_f) / (g1 + g2 + g3).
double combine_total(double r_c, double r_as, double r_f, const RewardWeights& w);

// Scores R_c on the extracted answer (or the whole response when the format
// check fails) and combines it with the supplied adaptive semantic reward.
ScoredPair total_reward(std::string_view response, std::string_view reference,
                        double r_as, const RewardWeights& weights);

}  // namespace armed
