#include "armed/adaptive.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

#include "armed/error.hpp"
#include "armed/stats.hpp"

namespace armed {

void AdaptConfig::validate() const {
  if (!(t_min >= 0.0 && t_min < t_max && t_max <= 1.0)) {
    throw InvalidArgument("adaptive config requires 0 <= t_min < t_max <= 1");
  }
  if (!(delta_max > 0.0)) throw InvalidArgument("delta_max must be > 0");
  if (l_max < 1) throw InvalidArgument("l_max must be >= 1");
  if (!(alpha_pos > 0.0 && alpha_neg > 0.0)) throw InvalidArgument("alphas must be > 0");
  if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("p must lie in (0,1)");
  if (!(eps >= 0.0)) throw InvalidArgument("eps must be >= 0");
  if (!(rho >= 0.0)) throw InvalidArgument("rho must be >= 0");
  if (!(initial_threshold >= t_min && initial_threshold <= t_max)) {
    throw InvalidArgument("initial_threshold must lie in [t_min, t_max]");
  }
}

ThresholdState ThresholdState::initial(const AdaptConfig& cfg) {
  ThresholdState s;
  s.threshold = cfg.initial_threshold;
  return s;
}

std::vector<double> filter_valid(std::span<const double> rewards,
                                 const ThresholdState& state,
                                 const AdaptConfig& cfg) {
  const double cutoff = std::max(0.0, cfg.rho * state.threshold);
  std::vector<double> out;
  for (double r : rewards) {
    if (r > cutoff) out.push_back(r);
  }
  return out;
}

ThresholdState update_threshold(ThresholdState state, std::span<const double> valid,
                                const AdaptConfig& cfg) {
  state.history.insert(state.history.end(), valid.begin(), valid.end());
  while (state.history.size() > cfg.l_max) state.history.pop_front();
  ++state.step;
  if (state.history.empty()) return state;

  const std::vector<double> h(state.history.begin(), state.history.end());
  const double target = quantile(h, cfg.p);
  const double delta = std::clamp(target - state.threshold, -cfg.delta_max, cfg.delta_max);
  state.threshold = std::clamp(state.threshold + delta, cfg.t_min, cfg.t_max);
  return state;
}

double adapt_map(double reward, double threshold, const AdaptConfig& cfg) {
  const double scaled =
      std::clamp((reward - threshold) / (1.0 - threshold + cfg.eps), -1.0, 1.0);
  const double alpha = scaled >= 0.0 ? cfg.alpha_pos : cfg.alpha_neg;
  return std::clamp(0.5 * (1.0 + std::tanh(alpha * scaled)), 0.0, 1.0);
}

AdaptedBatch adapt_batch(std::span<const double> raw, ThresholdState& state,
                         const AdaptConfig& cfg) {
  AdaptedBatch out;
  out.raw.assign(raw.begin(), raw.end());
  out.threshold_used = state.threshold;
  const auto valid = filter_valid(raw, state, cfg);
  state = update_threshold(std::move(state), valid, cfg);
  out.threshold_after = state.threshold;
  out.mapped.reserve(raw.size());
  for (double r : raw) out.mapped.push_back(adapt_map(r, state.threshold, cfg));
  return out;
}

AdaptiveSemanticResult adaptive_semantic(std::span<const double> batch_bert,
                                         std::span<const double> batch_cos,
                                         ThresholdState state_bert,
                                         ThresholdState state_cos, double lambda2,
                                         const AdaptConfig& cfg) {
  if (batch_bert.size() != batch_cos.size()) {
    throw InvalidArgument("bert and cosine batches differ in length");
  }
  if (!(lambda2 >= 0.0 && lambda2 <= 1.0)) {
    throw InvalidArgument("lambda2 must lie in [0,1]");
  }
  const auto bert = adapt_batch(batch_bert, state_bert, cfg);
  const auto cos = adapt_batch(batch_cos, state_cos, cfg);
  AdaptiveSemanticResult out;
  out.rewards.reserve(batch_bert.size());
  for (std::size_t i = 0; i < batch_bert.size(); ++i) {
    out.rewards.push_back(lambda2 * bert.mapped[i] + (1.0 - lambda2) * cos.mapped[i]);
  }
  out.state_bert = std::move(state_bert);
  out.state_cos = std::move(state_cos);
  return out;
}

namespace {

constexpr const char* kStateMagic = "armed-threshold-state";
constexpr int kStateVersion = 1;

std::string hexfloat(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

double parse_double(const std::string& s, const std::string& key) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0') throw ParseError("state file: bad number for " + key);
  return v;
}

}  // namespace

void save_state(std::ostream& out, const ThresholdState& state, const AdaptConfig& cfg) {
  out << kStateMagic << ' ' << kStateVersion << '\n';
  out << "rho=" << hexfloat(cfg.rho) << '\n';
  out << "l_max=" << cfg.l_max << '\n';
  out << "p=" << hexfloat(cfg.p) << '\n';
  out << "delta_max=" << hexfloat(cfg.delta_max) << '\n';
  out << "t_min=" << hexfloat(cfg.t_min) << '\n';
  out << "t_max=" << hexfloat(cfg.t_max) << '\n';
  out << "eps=" << hexfloat(cfg.eps) << '\n';
  out << "alpha_pos=" << hexfloat(cfg.alpha_pos) << '\n';
  out << "alpha_neg=" << hexfloat(cfg.alpha_neg) << '\n';
  out << "threshold=" << hexfloat(state.threshold) << '\n';
  out << "step=" << state.step << '\n';
  out << "history=";
  bool first = true;
  for (double h : state.history) {
    if (!first) out << ',';
    out << hexfloat(h);
    first = false;
  }
  out << '\n';
}

ThresholdState load_state(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("state file is empty");
  std::istringstream header(line);
  std::string magic;
  int version = 0;
  header >> magic >> version;
  if (magic != kStateMagic) throw ParseError("not a threshold state file");
  if (version != kStateVersion) {
    throw ParseError("unsupported state file version " + std::to_string(version));
  }
  ThresholdState state;
  bool have_threshold = false;
  bool have_step = false;
  bool have_history = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("state file: malformed line '" + line + "'");
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    if (key == "threshold") {
      state.threshold = parse_double(value, key);
      have_threshold = true;
    } else if (key == "step") {
      state.step = std::stoull(value);
      have_step = true;
    } else if (key == "history") {
      std::istringstream items(value);
      std::string item;
      while (std::getline(items, item, ',')) state.history.push_back(parse_double(item, key));
      have_history = true;
    }
    // Config echo lines are informational.
  }
  if (!have_threshold || !have_step || !have_history) {
    throw ParseError("state file missing threshold, step or history");
  }
  return state;
}

}  // namespace armed
