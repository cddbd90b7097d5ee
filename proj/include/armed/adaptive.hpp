#pragma once

// History-quantile threshold tracking and the asymmetric tanh mapping that
// turns a clustered semantic score into a discriminative reward.

#include <cstdint>
#include <deque>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace armed {

struct AdaptConfig {
  double rho = 0.8;         // minimum valid-reward ratio of the threshold
  std::size_t l_max = 2000; // history cap
  double p = 0.5;           // quantile fraction (0.5 is the median)
  double delta_max = 0.01;  // max threshold change per update
  double t_min = 0.0;
  double t_max = 0.995;
  double eps = 1e-8;
  double alpha_pos = 5.0;
  double alpha_neg = 2.0;
  double initial_threshold = 0.0;

  // Throws InvalidArgument on any violated invariant.
  void validate() const;
};

struct ThresholdState {
  double threshold = 0.0;
  std::deque<double> history;  // most recent last
  std::uint64_t step = 0;

  static ThresholdState initial(const AdaptConfig& cfg);
  bool operator==(const ThresholdState&) const = default;
};

struct AdaptedBatch {
  std::vector<double> raw;
  std::vector<double> mapped;
  double threshold_used = 0.0;
  double threshold_after = 0.0;
};

// Rewards strictly above max(0, rho * threshold), order preserved.
std::vector<double> filter_valid(std::span<const double> rewards,
                                 const ThresholdState& state,
                                 const AdaptConfig& cfg);

// Appends `valid`, truncates to the newest l_max entries and moves the
// threshold toward the p-quantile of the history by at most delta_max,
// clamped to [t_min, t_max]. An empty history leaves the threshold as is.
// `step` counts every call.
ThresholdState update_threshold(ThresholdState state, std::span<const double> valid,
                                const AdaptConfig& cfg);

// Maps one raw reward against a threshold into [0, 1]; equals 0.5 exactly
// at the threshold.
double adapt_map(double reward, double threshold, const AdaptConfig& cfg);

// One full controller step for a single metric: filter against the current
// threshold, update, then map the whole batch against the updated one.
AdaptedBatch adapt_batch(std::span<const double> raw, ThresholdState& state,
                         const AdaptConfig& cfg);

struct AdaptiveSemanticResult {
  std::vector<double> rewards;
  ThresholdState state_bert;
  ThresholdState state_cos;
};

// R_as = lambda2 * Adapt(bert) + (1 - lambda2) * Adapt(cos), each metric
// with its own threshold state.
AdaptiveSemanticResult adaptive_semantic(std::span<const double> batch_bert,
                                         std::span<const double> batch_cos,
                                         ThresholdState state_bert,
                                         ThresholdState state_cos, double lambda2,
                                         const AdaptConfig& cfg);

// Snapshot file: versioned key=value text with the config echoed, the
// threshold, the step counter and the history (hex-float encoded so the
// round trip is exact).
void save_state(std::ostream& out, const ThresholdState& state, const AdaptConfig& cfg);
ThresholdState load_state(std::istream& in);

}  // namespace armed
