#include "armed/grpo.hpp"

#include <algorithm>
#include <cmath>

#include "armed/error.hpp"
#include "armed/stats.hpp"

namespace armed {
namespace {

bool starts_with(const TokenIds& seq, const TokenIds& prefix, std::size_t len) {
  if (seq.size() < len) return false;
  return std::equal(prefix.begin(), prefix.begin() + static_cast<std::ptrdiff_t>(len),
                    seq.begin());
}

}  // namespace

void GrpoConfig::validate() const {
  if (group_size < 2) throw InvalidArgument("group size must be >= 2");
  if (!(clip_eps > 0.0 && clip_eps < 1.0)) throw InvalidArgument("clip_eps must lie in (0,1)");
  if (!(kl_beta >= 0.0)) throw InvalidArgument("kl_beta must be >= 0");
  if (!(temperature > 0.0)) throw InvalidArgument("temperature must be > 0");
  if (!(std_eps >= 0.0)) throw InvalidArgument("std_eps must be >= 0");
}

ResponseSpace::ResponseSpace(std::vector<std::vector<TokenIds>> answers)
    : answers_(std::move(answers)) {
  for (const auto& set : answers_) {
    if (set.empty()) throw InvalidArgument("query has no canned answers");
    for (std::size_t a = 0; a < set.size(); ++a) {
      if (set[a].empty()) throw InvalidArgument("canned answer has no tokens");
      for (std::size_t b = 0; b < set.size(); ++b) {
        if (a != b && starts_with(set[b], set[a], set[a].size())) {
          throw InvalidArgument("canned answers must be prefix-free");
        }
      }
    }
  }
}

ToyPolicy::ToyPolicy(const ResponseSpace& space) : space_(&space) {
  logits_.resize(space.queries());
  for (std::size_t q = 0; q < space.queries(); ++q) logits_[q].assign(space.answers(q), 0.0);
}

ToyPolicy::ToyPolicy(const ResponseSpace& space, LogitsTable logits)
    : space_(&space), logits_(std::move(logits)) {
  if (logits_.size() != space.queries()) throw InvalidArgument("logits table has wrong row count");
  for (std::size_t q = 0; q < space.queries(); ++q) {
    if (logits_[q].size() != space.answers(q)) {
      throw InvalidArgument("logits row does not match answer count");
    }
  }
}

std::vector<double> ToyPolicy::probabilities(std::size_t query, double temperature) const {
  const auto& z = logits_[query];
  const double zmax = *std::max_element(z.begin(), z.end());
  std::vector<double> p(z.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k) {
    p[k] = std::exp((z[k] - zmax) / temperature);
    sum += p[k];
  }
  for (double& v : p) v /= sum;
  return p;
}

double ToyPolicy::token_log_prob(std::size_t query, std::size_t answer, std::size_t t) const {
  const auto p = probabilities(query);
  const auto& seq = space_->tokens(query, answer);
  double before = 0.0;
  double after = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const auto& other = space_->tokens(query, k);
    if (starts_with(other, seq, t)) {
      before += p[k];
      if (starts_with(other, seq, t + 1)) after += p[k];
    }
  }
  return std::log(after) - std::log(before);
}

std::vector<double> ToyPolicy::token_log_prob_grad(std::size_t query, std::size_t answer,
                                                   std::size_t t) const {
  // d log S(A) / dz_k = p_k [k in A] / S(A) - p_k; the -p_k terms cancel
  // between numerator and denominator prefixes.
  const auto p = probabilities(query);
  const auto& seq = space_->tokens(query, answer);
  std::vector<bool> in_before(p.size());
  std::vector<bool> in_after(p.size());
  double before = 0.0;
  double after = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const auto& other = space_->tokens(query, k);
    in_before[k] = starts_with(other, seq, t);
    in_after[k] = in_before[k] && starts_with(other, seq, t + 1);
    if (in_before[k]) before += p[k];
    if (in_after[k]) after += p[k];
  }
  std::vector<double> g(p.size(), 0.0);
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (in_after[k]) g[k] += p[k] / after;
    if (in_before[k]) g[k] -= p[k] / before;
  }
  return g;
}

std::vector<double> group_advantages(std::span<const double> rewards, double std_eps) {
  if (rewards.size() < 2) throw InvalidArgument("group must contain at least 2 rewards");
  std::vector<double> out(rewards.size(), 0.0);
  if (std::all_of(rewards.begin(), rewards.end(),
                  [&](double r) { return r == rewards.front(); })) {
    return out;
  }
  const auto m = moments(rewards);
  const double denom = std::sqrt(m.variance) + std_eps;
  for (std::size_t i = 0; i < rewards.size(); ++i) out[i] = (rewards[i] - m.mean) / denom;
  return out;
}

double kl_estimate(double ref_over_theta, KlEstimator estimator) {
  switch (estimator) {
    case KlEstimator::kUnbiasedPositive:
      return ref_over_theta - std::log(ref_over_theta) - 1.0;
    case KlEstimator::kLogRatio:
      return -std::log(ref_over_theta);
  }
  return 0.0;
}

namespace {

ObjectiveEval evaluate(const ToyPolicy& policy, const ToyPolicy& old, const ToyPolicy& ref,
                       std::span<const CandidateGroup> groups, const GrpoConfig& cfg,
                       bool want_grad) {
  if (groups.empty()) throw InvalidArgument("objective needs at least one group");
  const auto& space = policy.space();
  ObjectiveEval out;
  if (want_grad) {
    out.gradient.resize(space.queries());
    for (std::size_t q = 0; q < space.queries(); ++q) {
      out.gradient[q].assign(space.answers(q), 0.0);
    }
  }
  const double group_weight = 1.0 / static_cast<double>(groups.size());
  for (const auto& g : groups) {
    if (g.responses.empty()) throw InvalidArgument("objective received an empty group");
    if (g.advantages.size() != g.responses.size()) {
      throw InvalidArgument("group advantages and responses differ in length");
    }
    if (g.query_id >= space.queries()) throw InvalidArgument("group query id out of range");
    const double response_weight =
        group_weight / static_cast<double>(g.responses.size());
    for (std::size_t i = 0; i < g.responses.size(); ++i) {
      const std::size_t answer = g.responses[i];
      if (answer >= space.answers(g.query_id)) {
        throw InvalidArgument("response index outside the query's answers");
      }
      const std::size_t len = space.tokens(g.query_id, answer).size();
      const double w = response_weight / static_cast<double>(len);
      const double adv = g.advantages[i];
      for (std::size_t t = 0; t < len; ++t) {
        const double lp = policy.token_log_prob(g.query_id, answer, t);
        const double lp_old = old.token_log_prob(g.query_id, answer, t);
        const double lp_ref = ref.token_log_prob(g.query_id, answer, t);
        const double ratio = std::exp(lp - lp_old);
        const double clipped = std::clamp(ratio, 1.0 - cfg.clip_eps, 1.0 + cfg.clip_eps);
        const double unclipped_term = ratio * adv;
        const double clipped_term = clipped * adv;
        const bool unclipped_active = unclipped_term <= clipped_term;
        const double ref_ratio = std::exp(lp_ref - lp);
        const double kl = kl_estimate(ref_ratio, cfg.kl);
        out.value += w * (std::min(unclipped_term, clipped_term) - cfg.kl_beta * kl);

        if (!want_grad) continue;
        // d/dz [ratio * A] = A * ratio * dlogpi; clipped branch is constant.
        double coeff = unclipped_active ? adv * ratio : 0.0;
        // d/dz [-beta KL]: k3 gives beta (x - 1) dlogpi, log-ratio gives -beta dlogpi.
        coeff += cfg.kl == KlEstimator::kUnbiasedPositive ? cfg.kl_beta * (ref_ratio - 1.0)
                                                          : -cfg.kl_beta;
        if (coeff == 0.0) continue;
        const auto dlp = policy.token_log_prob_grad(g.query_id, answer, t);
        auto& row = out.gradient[g.query_id];
        for (std::size_t k = 0; k < dlp.size(); ++k) row[k] += w * coeff * dlp[k];
      }
    }
  }
  return out;
}

}  // namespace

double grpo_objective(const ToyPolicy& policy, const ToyPolicy& old, const ToyPolicy& ref,
                      std::span<const CandidateGroup> groups, const GrpoConfig& cfg) {
  return evaluate(policy, old, ref, groups, cfg, false).value;
}

ObjectiveEval grpo_objective_with_grad(const ToyPolicy& policy, const ToyPolicy& old,
                                       const ToyPolicy& ref,
                                       std::span<const CandidateGroup> groups,
                                       const GrpoConfig& cfg) {
  return evaluate(policy, old, ref, groups, cfg, true);
}

}  // namespace armed
