#pragma once

// Desk-scale GRPO loop: a tabular policy picks among canned answers, the
// reward pipeline scores them, and group-relative advantages drive
// gradient ascent on the logits.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "armed/adaptive.hpp"
#include "armed/grpo.hpp"
#include "armed/reward.hpp"

namespace armed {

enum class RewardScheme { kRaw, kAdaptive, kLexicalOnly };

// Throws InvalidArgument for anything but "raw", "adaptive", "lexical-only".
RewardScheme parse_scheme(std::string_view tag);
std::string_view scheme_name(RewardScheme scheme);

struct SimAnswer {
  std::string text;
  double bert = 0.0;  // mean raw token-level semantic score vs the reference
  double cos = 0.0;   // mean raw sentence cosine vs the reference
};

struct SimQuery {
  std::string reference;
  std::vector<SimAnswer> answers;
  std::size_t correct = 0;
};

struct SimTask {
  std::string name;
  std::vector<SimQuery> queries;
};

// Answers share tokens with their references; the correct one matches
// exactly.
SimTask overlap_task();
// Answers are lexically disjoint from the references (synonyms), so only
// the semantic reward separates them, and its raw scores cluster near 1.
SimTask paraphrase_task();
// Throws InvalidArgument for an unknown name.
SimTask task_by_name(std::string_view name);

struct SimConfig {
  RewardScheme scheme = RewardScheme::kAdaptive;
  std::size_t steps = 400;
  std::uint64_t seed = 0;
  double learning_rate = 1.0;
  std::size_t inner_iterations = 1;
  // Per-sample Gaussian jitter on the semantic scores, clipped to [0,1].
  double semantic_noise = 0.005;
  GrpoConfig grpo = default_sim_grpo();
  RewardWeights weights;
  AdaptConfig adapt;

  // The simulation floors the advantage denominator at 0.01: two rewards
  // closer than the scorer's noise are not a learning signal.
  static GrpoConfig default_sim_grpo() {
    GrpoConfig g;
    g.std_eps = 1e-2;
    return g;
  }
};

struct TelemetryRow {
  std::size_t step = 0;
  RewardScheme scheme = RewardScheme::kAdaptive;
  double reward_mean = 0.0;
  double reward_var = 0.0;
  double adv_var = 0.0;    // mean within-group population variance of advantages
  double p_correct = 0.0;  // mean policy mass on the correct answer after the step
};

struct SimResult {
  std::vector<TelemetryRow> telemetry;
  LogitsTable initial_logits;
  LogitsTable final_logits;
};

SimResult simulate_training(const SimTask& task, const SimConfig& cfg);

void write_telemetry_csv(std::ostream& out, const std::vector<TelemetryRow>& rows);

}  // namespace armed
