#pragma once

// Group-relative advantages and the clipped-surrogate GRPO objective over a
// small tabular policy.
//
// The toy policy is a per-query categorical distribution over canned answers.
// Each answer is a token-id sequence; the set of sequences for one query is
// prefix-free, so the answer-level distribution factorizes exactly into
// token conditionals
//
//   pi(o_t | q, o_<t) = S(o_<=t) / S(o_<t),
//
// where S(prefix) is the total probability of answers starting with that
// prefix. Token-level ratios, clipping and KL terms are evaluated on these
// conditionals.

#include <cstdint>
#include <span>
#include <vector>

namespace armed {

enum class KlEstimator {
  kUnbiasedPositive,  // x - log x - 1 with x = pi_ref / pi_theta
  kLogRatio,          // log(pi_theta / pi_ref)
};

struct GrpoConfig {
  std::size_t group_size = 8;
  double clip_eps = 0.2;
  double kl_beta = 0.04;
  double temperature = 0.7;
  double std_eps = 1e-8;
  KlEstimator kl = KlEstimator::kUnbiasedPositive;

  void validate() const;
};

using TokenIds = std::vector<int>;

// Canned answers for every query. Throws InvalidArgument if an answer list
// is empty, an answer is empty, or one answer is a prefix of another.
class ResponseSpace {
 public:
  explicit ResponseSpace(std::vector<std::vector<TokenIds>> answers);

  std::size_t queries() const { return answers_.size(); }
  std::size_t answers(std::size_t query) const { return answers_[query].size(); }
  const TokenIds& tokens(std::size_t query, std::size_t answer) const {
    return answers_[query][answer];
  }

 private:
  std::vector<std::vector<TokenIds>> answers_;
};

// One logits row per query.
using LogitsTable = std::vector<std::vector<double>>;

class ToyPolicy {
 public:
  // Zero logits: uniform over every query's answers.
  explicit ToyPolicy(const ResponseSpace& space);
  ToyPolicy(const ResponseSpace& space, LogitsTable logits);

  const ResponseSpace& space() const { return *space_; }
  const LogitsTable& logits() const { return logits_; }
  LogitsTable& logits() { return logits_; }

  // Softmax of logits / temperature for one query.
  std::vector<double> probabilities(std::size_t query, double temperature = 1.0) const;

  // log pi(o_t | q, o_<t) for token t of the given answer.
  double token_log_prob(std::size_t query, std::size_t answer, std::size_t t) const;

  // d log pi(o_t | q, o_<t) / d logits[query][k] for every k.
  std::vector<double> token_log_prob_grad(std::size_t query, std::size_t answer,
                                          std::size_t t) const;

 private:
  const ResponseSpace* space_;
  LogitsTable logits_;
};

struct CandidateGroup {
  std::size_t query_id = 0;
  std::vector<std::size_t> responses;  // answer indices into the response space
  std::vector<double> rewards;
  std::vector<double> advantages;
};

// (r_i - mean) / (population std + std_eps). A group whose rewards are all
// equal gets exact zeros. Throws on fewer than two rewards.
std::vector<double> group_advantages(std::span<const double> rewards, double std_eps);

// Per-token KL estimate for ratio x = pi_ref / pi_theta.
double kl_estimate(double ref_over_theta, KlEstimator estimator);

struct ObjectiveEval {
  double value = 0.0;
  LogitsTable gradient;  // d value / d policy logits
};

// Mean over groups of (1/G) sum_i (1/|o_i|) sum_t [min(rA, clip(r)A) - beta KL].
// Throws InvalidArgument on an empty group list or malformed groups.
double grpo_objective(const ToyPolicy& policy, const ToyPolicy& old, const ToyPolicy& ref,
                      std::span<const CandidateGroup> groups, const GrpoConfig& cfg);

// Value plus analytic gradient with respect to the policy logits. Where a
// ratio sits exactly on a clip boundary the unclipped branch is used.
ObjectiveEval grpo_objective_with_grad(const ToyPolicy& policy, const ToyPolicy& old,
                                       const ToyPolicy& ref,
                                       std::span<const CandidateGroup> groups,
                                       const GrpoConfig& cfg);

}  // namespace armed
