#include <doctest.h>

#include <sstream>

#include "armed/error.hpp"
#include "armed/simulation.hpp"
#include "trend.hpp"

using namespace armed;

namespace {

double mean_adv_var(const SimResult& r, std::size_t from, std::size_t to) {
  double s = 0.0;
  for (std::size_t i = from; i < to; ++i) s += r.telemetry[i].adv_var;
  return s / static_cast<double>(to - from);
}

SimConfig make(RewardScheme scheme, std::size_t steps, std::uint64_t seed) {
  SimConfig cfg;
  cfg.scheme = scheme;
  cfg.steps = steps;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("scheme names round trip") {
  for (auto s : {RewardScheme::kRaw, RewardScheme::kAdaptive, RewardScheme::kLexicalOnly})
    CHECK(parse_scheme(scheme_name(s)) == s);
  CHECK_THROWS_AS(parse_scheme("semantic"), InvalidArgument);
  CHECK_THROWS_AS(task_by_name("nope"), InvalidArgument);
}

TEST_CASE("paraphrase semantic scores are clustered near one") {
  for (const auto& q : paraphrase_task().queries) {
    for (const auto& a : q.answers) {
      CHECK(a.bert > 0.9);
      CHECK(a.cos > 0.9);
    }
  }
}

TEST_CASE("equal lexical rewards leave the policy untouched") {
  const auto r = simulate_training(paraphrase_task(), make(RewardScheme::kLexicalOnly, 30, 1));
  CHECK(r.final_logits == r.initial_logits);
  for (const auto& row : r.telemetry) {
    CHECK(row.adv_var == 0.0);
    CHECK(row.reward_var == 0.0);
  }
}

TEST_CASE("adaptive mapping keeps advantage variance above raw on clustered scores") {
  for (std::uint64_t seed : {7u, 11u}) {
    const auto raw = simulate_training(paraphrase_task(), make(RewardScheme::kRaw, 400, seed));
    const auto ad = simulate_training(paraphrase_task(), make(RewardScheme::kAdaptive, 400, seed));
    CHECK(mean_adv_var(ad, 200, 400) > mean_adv_var(raw, 200, 400));
  }
}

TEST_CASE("lexical-only training raises p_correct") {
  const auto r = simulate_training(overlap_task(), make(RewardScheme::kLexicalOnly, 200, 7));
  std::vector<double> pc;
  for (const auto& row : r.telemetry) pc.push_back(row.p_correct);
  CHECK(trend::mann_kendall_z(pc) > 2.33);
  CHECK(pc.back() > pc.front());
}

TEST_CASE("simulation is deterministic for a seed") {
  const auto cfg = make(RewardScheme::kAdaptive, 50, 3);
  const auto a = simulate_training(paraphrase_task(), cfg);
  const auto b = simulate_training(paraphrase_task(), cfg);
  std::ostringstream sa, sb;
  write_telemetry_csv(sa, a.telemetry);
  write_telemetry_csv(sb, b.telemetry);
  CHECK(sa.str() == sb.str());
  CHECK(a.final_logits == b.final_logits);
  CHECK(sa.str().rfind("step,scheme,reward_mean,reward_var,adv_var,p_correct\n", 0) == 0);
}

TEST_CASE("simulation rejects bad configs") {
  auto cfg = make(RewardScheme::kRaw, 0, 1);
  CHECK_THROWS_AS(simulate_training(overlap_task(), cfg), InvalidArgument);
  cfg.steps = 5;
  cfg.grpo.group_size = 1;
  CHECK_THROWS_AS(simulate_training(overlap_task(), cfg), InvalidArgument);
}
