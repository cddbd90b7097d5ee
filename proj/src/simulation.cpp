#include "armed/simulation.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <ostream>

#include "armed/error.hpp"
#include "armed/random.hpp"
#include "armed/semantic.hpp"
#include "armed/stats.hpp"
#include "armed/text_metrics.hpp"

namespace armed {

RewardScheme parse_scheme(std::string_view tag) {
  if (tag == "raw") return RewardScheme::kRaw;
  if (tag == "adaptive") return RewardScheme::kAdaptive;
  if (tag == "lexical-only") return RewardScheme::kLexicalOnly;
  throw InvalidArgument("unknown reward scheme '" + std::string(tag) + "'");
}

std::string_view scheme_name(RewardScheme scheme) {
  switch (scheme) {
    case RewardScheme::kRaw: return "raw";
    case RewardScheme::kAdaptive: return "adaptive";
    case RewardScheme::kLexicalOnly: return "lexical-only";
  }
  return "?";
}

SimTask overlap_task() {
  return {"overlap",
          {
              {"left lung opacity",
               {{"left lung opacity", 0.990, 0.975},
                {"right lung opacity", 0.985, 0.960},
                {"left lung", 0.982, 0.955},
                {"pleural effusion", 0.970, 0.930},
                {"cardiomegaly", 0.965, 0.920},
                {"no acute finding", 0.960, 0.910}},
               0},
              {"sacroiliac joint",
               {{"sacroiliac joint", 0.990, 0.980},
                {"hip joint", 0.978, 0.945},
                {"sacrum", 0.975, 0.950},
                {"femoral head", 0.968, 0.925},
                {"lumbar spine", 0.966, 0.920},
                {"pubic symphysis", 0.962, 0.915}},
               0},
              {"gastrointestinal tract",
               {{"gastrointestinal tract", 0.992, 0.978},
                {"respiratory tract", 0.975, 0.930},
                {"urinary tract", 0.974, 0.928},
                {"liver", 0.970, 0.935},
                {"pancreas", 0.971, 0.940},
                {"digestive system", 0.980, 0.965}},
               0},
              {"yes",
               {{"yes", 0.995, 0.990},
                {"no", 0.985, 0.960},
                {"unclear", 0.970, 0.930},
                {"not visible", 0.968, 0.925}},
               0},
          }};
}

SimTask paraphrase_task() {
  return {"paraphrase",
          {
              {"enlarged heart",
               {{"cardiomegaly", 0.985, 0.975},
                {"cardiac tamponade", 0.975, 0.955},
                {"pericardial effusion", 0.972, 0.950},
                {"normal cardiac silhouette", 0.965, 0.940},
                {"aortic dissection", 0.962, 0.935},
                {"mitral stenosis", 0.960, 0.930}},
               0},
              {"fluid in the pleural space",
               {{"hydrothorax", 0.984, 0.972},
                {"pneumothorax", 0.976, 0.955},
                {"atelectasis", 0.970, 0.945},
                {"consolidation", 0.966, 0.938},
                {"pulmonary nodule", 0.961, 0.930},
                {"emphysema", 0.960, 0.928}},
               0},
              {"kidney stone",
               {{"nephrolithiasis", 0.986, 0.976},
                {"hydronephrosis", 0.975, 0.955},
                {"renal cyst", 0.972, 0.948},
                {"cholelithiasis", 0.970, 0.945},
                {"ureteral stricture", 0.965, 0.938},
                {"bladder diverticulum", 0.961, 0.930}},
               0},
              {"bleeding in the brain",
               {{"intracranial hemorrhage", 0.987, 0.978},
                {"ischemic stroke", 0.976, 0.958},
                {"cerebral edema", 0.972, 0.950},
                {"glioma", 0.965, 0.938},
                {"hydrocephalus", 0.963, 0.935},
                {"meningioma", 0.960, 0.930}},
               0},
          }};
}

SimTask task_by_name(std::string_view name) {
  if (name == "overlap") return overlap_task();
  if (name == "paraphrase") return paraphrase_task();
  throw InvalidArgument("unknown simulation task '" + std::string(name) + "'");
}

namespace {

// Token ids over the task vocabulary, each answer terminated by an end
// marker so the answer set is prefix-free.
ResponseSpace build_space(const SimTask& task) {
  std::map<std::string, int> vocab;
  const int eos = 0;
  std::vector<std::vector<TokenIds>> answers;
  for (const auto& q : task.queries) {
    auto& set = answers.emplace_back();
    for (const auto& a : q.answers) {
      TokenIds ids;
      for (const auto& tok : tokenize(a.text)) {
        auto [it, inserted] = vocab.try_emplace(tok, static_cast<int>(vocab.size()) + 1);
        ids.push_back(it->second);
      }
      ids.push_back(eos);
      set.push_back(std::move(ids));
    }
  }
  return ResponseSpace(std::move(answers));
}

std::size_t sample_index(Rng& rng, const std::vector<double>& probs) {
  const double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    acc += probs[k];
    if (u < acc) return k;
  }
  return probs.size() - 1;
}

std::string format_response(const std::string& answer) {
  return "<think>The findings point to this answer.</think><answer>" + answer + "</answer>";
}

}  // namespace

SimResult simulate_training(const SimTask& task, const SimConfig& cfg) {
  if (cfg.steps < 1) throw InvalidArgument("simulation needs at least one step");
  if (task.queries.empty()) throw InvalidArgument("simulation task has no queries");
  cfg.grpo.validate();
  cfg.weights.validate();
  cfg.adapt.validate();

  const ResponseSpace space = build_space(task);
  ToyPolicy policy(space);
  const ToyPolicy ref = policy;
  Rng rng(cfg.seed);
  ThresholdState state_bert = ThresholdState::initial(cfg.adapt);
  ThresholdState state_cos = ThresholdState::initial(cfg.adapt);

  // Lexical and format rewards are fixed per answer.
  std::vector<std::vector<ScoredPair>> fixed(task.queries.size());
  for (std::size_t q = 0; q < task.queries.size(); ++q) {
    const auto& query = task.queries[q];
    if (query.correct >= query.answers.size()) {
      throw InvalidArgument("simulation query has an out-of-range correct index");
    }
    for (const auto& a : query.answers) {
      fixed[q].push_back(total_reward(format_response(a.text), query.reference, 0.0, cfg.weights));
    }
  }

  SimResult result;
  result.initial_logits = policy.logits();
  const std::size_t G = cfg.grpo.group_size;

  for (std::size_t step = 0; step < cfg.steps; ++step) {
    std::vector<CandidateGroup> groups(task.queries.size());
    std::vector<double> batch_bert;
    std::vector<double> batch_cos;
    for (std::size_t q = 0; q < task.queries.size(); ++q) {
      groups[q].query_id = q;
      const auto probs = policy.probabilities(q, cfg.grpo.temperature);
      for (std::size_t i = 0; i < G; ++i) {
        const std::size_t a = sample_index(rng, probs);
        groups[q].responses.push_back(a);
        const auto& ans = task.queries[q].answers[a];
        batch_bert.push_back(std::clamp(rng.normal(ans.bert, cfg.semantic_noise), 0.0, 1.0));
        batch_cos.push_back(std::clamp(rng.normal(ans.cos, cfg.semantic_noise), 0.0, 1.0));
      }
    }

    std::vector<double> semantic(batch_bert.size(), 0.0);
    switch (cfg.scheme) {
      case RewardScheme::kRaw:
        for (std::size_t j = 0; j < semantic.size(); ++j) {
          semantic[j] = combine_semantic(batch_bert[j], batch_cos[j], cfg.weights.lambda2).r_s;
        }
        break;
      case RewardScheme::kAdaptive: {
        auto adapted = adaptive_semantic(batch_bert, batch_cos, std::move(state_bert),
                                         std::move(state_cos), cfg.weights.lambda2, cfg.adapt);
        semantic = std::move(adapted.rewards);
        state_bert = std::move(adapted.state_bert);
        state_cos = std::move(adapted.state_cos);
        break;
      }
      case RewardScheme::kLexicalOnly:
        break;
    }

    RewardWeights w = cfg.weights;
    if (cfg.scheme == RewardScheme::kLexicalOnly) w.gamma2 = 0.0;

    std::vector<double> all_rewards;
    double adv_var_sum = 0.0;
    for (std::size_t q = 0; q < groups.size(); ++q) {
      auto& g = groups[q];
      for (std::size_t i = 0; i < G; ++i) {
        const auto& base = fixed[q][g.responses[i]];
        const double r = combine_total(base.r_c, semantic[q * G + i], base.r_f, w);
        g.rewards.push_back(r);
        all_rewards.push_back(r);
      }
      g.advantages = group_advantages(g.rewards, cfg.grpo.std_eps);
      adv_var_sum += moments(g.advantages).variance;
    }

    const ToyPolicy old = policy;
    for (std::size_t it = 0; it < cfg.inner_iterations; ++it) {
      const auto eval = grpo_objective_with_grad(policy, old, ref, groups, cfg.grpo);
      for (std::size_t q = 0; q < space.queries(); ++q) {
        for (std::size_t k = 0; k < space.answers(q); ++k) {
          policy.logits()[q][k] += cfg.learning_rate * eval.gradient[q][k];
        }
      }
    }

    TelemetryRow row;
    row.step = step;
    row.scheme = cfg.scheme;
    const auto m = moments(all_rewards);
    row.reward_mean = m.mean;
    row.reward_var = m.variance;
    row.adv_var = adv_var_sum / static_cast<double>(groups.size());
    double pc = 0.0;
    for (std::size_t q = 0; q < task.queries.size(); ++q) {
      pc += policy.probabilities(q)[task.queries[q].correct];
    }
    row.p_correct = pc / static_cast<double>(task.queries.size());
    result.telemetry.push_back(row);
  }
  result.final_logits = policy.logits();
  return result;
}

void write_telemetry_csv(std::ostream& out, const std::vector<TelemetryRow>& rows) {
  out << "step,scheme,reward_mean,reward_var,adv_var,p_correct\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%zu,%s,%.9f,%.9f,%.9f,%.9f\n", r.step,
                  std::string(scheme_name(r.scheme)).c_str(), r.reward_mean, r.reward_var,
                  r.adv_var, r.p_correct);
    out << buf;
  }
}

}  // namespace armed
