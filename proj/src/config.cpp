#include "armed/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <type_traits>

#include "armed/error.hpp"

namespace armed {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (v.empty() || *end != '\0') throw ParseError("config: '" + key + "' expects a number");
  return d;
}

std::size_t to_count(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const auto n = std::strtoull(v.c_str(), &end, 10);
  if (v.empty() || *end != '\0' || v[0] == '-') {
    throw ParseError("config: '" + key + "' expects a non-negative integer");
  }
  return static_cast<std::size_t>(n);
}

using Setter = std::function<void(PipelineConfig&, const std::string&, const std::string&)>;


template <typename Section, typename Field>
Setter make_setter(Section PipelineConfig::*section, Field Section::*field) {
  return [section, field](PipelineConfig& c, const std::string& k, const std::string& v) {
    if constexpr (std::is_same_v<Field, double>) {
      (c.*section).*field = to_double(k, v);
    } else {
      (c.*section).*field = to_count(k, v);
    }
  };
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"rho", make_setter(&PipelineConfig::adapt, &AdaptConfig::rho)},
      {"l_max", make_setter(&PipelineConfig::adapt, &AdaptConfig::l_max)},
      {"p", make_setter(&PipelineConfig::adapt, &AdaptConfig::p)},
      {"delta_max", make_setter(&PipelineConfig::adapt, &AdaptConfig::delta_max)},
      {"t_min", make_setter(&PipelineConfig::adapt, &AdaptConfig::t_min)},
      {"t_max", make_setter(&PipelineConfig::adapt, &AdaptConfig::t_max)},
      {"eps", make_setter(&PipelineConfig::adapt, &AdaptConfig::eps)},
      {"alpha_pos", make_setter(&PipelineConfig::adapt, &AdaptConfig::alpha_pos)},
      {"alpha_neg", make_setter(&PipelineConfig::adapt, &AdaptConfig::alpha_neg)},
      {"initial_threshold", make_setter(&PipelineConfig::adapt, &AdaptConfig::initial_threshold)},
      {"lambda1", make_setter(&PipelineConfig::weights, &RewardWeights::lambda1)},
      {"lambda2", make_setter(&PipelineConfig::weights, &RewardWeights::lambda2)},
      {"gamma1", make_setter(&PipelineConfig::weights, &RewardWeights::gamma1)},
      {"gamma2", make_setter(&PipelineConfig::weights, &RewardWeights::gamma2)},
      {"gamma3", make_setter(&PipelineConfig::weights, &RewardWeights::gamma3)},
      {"group_size", make_setter(&PipelineConfig::grpo, &GrpoConfig::group_size)},
      {"clip_eps", make_setter(&PipelineConfig::grpo, &GrpoConfig::clip_eps)},
      {"kl_beta", make_setter(&PipelineConfig::grpo, &GrpoConfig::kl_beta)},
      {"temperature", make_setter(&PipelineConfig::grpo, &GrpoConfig::temperature)},
      {"std_eps", make_setter(&PipelineConfig::grpo, &GrpoConfig::std_eps)},
      {"hss_w_bleu", make_setter(&PipelineConfig::hss, &HssWeights::w_bleu)},
      {"hss_w_rouge", make_setter(&PipelineConfig::hss, &HssWeights::w_rouge)},
      {"hss_w_bert", make_setter(&PipelineConfig::hss, &HssWeights::w_bert)},
      {"hss_w_cos", make_setter(&PipelineConfig::hss, &HssWeights::w_cos)},
      {"kl_estimator",
       [](PipelineConfig& c, const std::string& k, const std::string& v) {
         if (v == "k3") {
           c.grpo.kl = KlEstimator::kUnbiasedPositive;
         } else if (v == "log_ratio") {
           c.grpo.kl = KlEstimator::kLogRatio;
         } else {
           throw ParseError("config: '" + k + "' expects k3 or log_ratio");
         }
       }},
      {"mock_dim",
       [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.mock_dim = to_count(k, v);
       }},
  };
  return table;
}

// Shortest representation that round-trips.
std::string num(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

void PipelineConfig::validate() const {
  adapt.validate();
  weights.validate();
  grpo.validate();
  if (hss.w_bleu < 0 || hss.w_rouge < 0 || hss.w_bert < 0 || hss.w_cos < 0) {
    throw InvalidArgument("HSS weights must be non-negative");
  }
  if (mock_dim < 2) throw InvalidArgument("mock_dim must be >= 2");
}

void apply_config(PipelineConfig& cfg, std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ParseError("config line " + std::to_string(lineno) + ": expected key=value");
    }
    const auto key = trim(t.substr(0, eq));
    const auto value = trim(t.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) {
      throw ParseError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    it->second(cfg, key, value);
  }
  cfg.validate();
}

PipelineConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file '" + path + "'");
  PipelineConfig cfg;
  apply_config(cfg, in);
  return cfg;
}

std::string dump_config(const PipelineConfig& c) {
  std::ostringstream os;
  os << "# adaptive semantic reward\n"
     << "rho=" << num(c.adapt.rho) << '\n'
     << "l_max=" << c.adapt.l_max << '\n'
     << "p=" << num(c.adapt.p) << '\n'
     << "delta_max=" << num(c.adapt.delta_max) << '\n'
     << "t_min=" << num(c.adapt.t_min) << '\n'
     << "t_max=" << num(c.adapt.t_max) << '\n'
     << "eps=" << num(c.adapt.eps) << '\n'
     << "alpha_pos=" << num(c.adapt.alpha_pos) << '\n'
     << "alpha_neg=" << num(c.adapt.alpha_neg) << '\n'
     << "initial_threshold=" << num(c.adapt.initial_threshold) << '\n'
     << "# reward weights\n"
     << "lambda1=" << num(c.weights.lambda1) << '\n'
     << "lambda2=" << num(c.weights.lambda2) << '\n'
     << "gamma1=" << num(c.weights.gamma1) << '\n'
     << "gamma2=" << num(c.weights.gamma2) << '\n'
     << "gamma3=" << num(c.weights.gamma3) << '\n'
     << "# grpo\n"
     << "group_size=" << c.grpo.group_size << '\n'
     << "temperature=" << num(c.grpo.temperature) << '\n'
     << "clip_eps=" << num(c.grpo.clip_eps) << '\n'
     << "kl_beta=" << num(c.grpo.kl_beta) << '\n'
     << "std_eps=" << num(c.grpo.std_eps) << '\n'
     << "kl_estimator=" << (c.grpo.kl == KlEstimator::kLogRatio ? "log_ratio" : "k3") << '\n'
     << "# hybrid semantic score\n"
     << "hss_w_bleu=" << num(c.hss.w_bleu) << '\n'
     << "hss_w_rouge=" << num(c.hss.w_rouge) << '\n'
     << "hss_w_bert=" << num(c.hss.w_bert) << '\n'
     << "hss_w_cos=" << num(c.hss.w_cos) << '\n'
     << "# mock embedder\n"
     << "mock_dim=" << c.mock_dim << '\n';
  return os.str();
}

}  // namespace armed
