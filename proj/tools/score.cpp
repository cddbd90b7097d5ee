#include <fstream>
#include <json.hpp>
#include <map>

#include "armed/adaptive.hpp"
#include "armed/error.hpp"
#include "armed/reward.hpp"
#include "armed/semantic.hpp"
#include "armed/stats.hpp"
#include "commands.hpp"

namespace armed::cli {
namespace {

using nlohmann::json;

struct ScoreRow {
  json id;
  std::string response;
  std::string reference;
};

std::string required(const json& j, const char* key, std::size_t line) {
  if (!j.contains(key) || !j[key].is_string()) {
    throw ValidationError("line " + std::to_string(line) + ": missing string field '" + key + "'");
  }
  return j[key].get<std::string>();
}

std::vector<ScoreRow> read_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open input file '" + path + "'");
  std::vector<ScoreRow> rows;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ParseError("line " + std::to_string(line) + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("id")) {
      throw ValidationError("line " + std::to_string(line) + ": record needs an id");
    }
    rows.push_back({j["id"], required(j, "response", line), required(j, "reference", line)});
  }
  return rows;
}

ThresholdState resume(const std::string& prefix, const char* metric, const AdaptConfig& cfg) {
  if (prefix.empty()) return ThresholdState::initial(cfg);
  const std::string path = prefix + "." + metric + ".state";
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open state file '" + path + "'");
  return load_state(in);
}

void save(const std::string& prefix, const char* metric, const ThresholdState& s,
          const AdaptConfig& cfg) {
  if (prefix.empty()) return;
  const std::string path = prefix + "." + metric + ".state";
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write state file '" + path + "'");
  save_state(out, s, cfg);
}

}  // namespace

int run_score(const GlobalOptions& g, const ScoreOptions& o) {
  const auto cfg = g.load_config();
  if (o.batch_size < 1) throw InvalidArgument("batch size must be >= 1");
  auto embedder = g.embedder(cfg);
  const auto rows = read_rows(o.input);

  ThresholdState state_bert = resume(o.resume_prefix, "bert", cfg.adapt);
  ThresholdState state_cos = resume(o.resume_prefix, "cos", cfg.adapt);
  OutputFile out(o.output);

  for (std::size_t start = 0; start < rows.size(); start += o.batch_size) {
    const std::size_t end = std::min(rows.size(), start + o.batch_size);
    std::vector<std::string> texts;
    for (std::size_t i = start; i < end; ++i) {
      const auto answer = extract_answer(rows[i].response);
      texts.push_back(answer ? *answer : rows[i].response);
      texts.push_back(rows[i].reference);
    }
    const auto emb = embedder->embed(texts);

    std::vector<double> bert;
    std::vector<double> cos;
    for (std::size_t i = 0; i < end - start; ++i) {
      const auto& cand = emb[2 * i];
      const auto& ref = emb[2 * i + 1];
      bert.push_back(bertscore_f1(cand.tokens, ref.tokens));
      cos.push_back(cosine_similarity(cand.sentence, ref.sentence));
    }
    auto adapted = adaptive_semantic(bert, cos, std::move(state_bert), std::move(state_cos),
                                     cfg.weights.lambda2, cfg.adapt);
    state_bert = std::move(adapted.state_bert);
    state_cos = std::move(adapted.state_cos);

    for (std::size_t i = 0; i < end - start; ++i) {
      const auto& row = rows[start + i];
      const double r_s = combine_semantic(bert[i], cos[i], cfg.weights.lambda2).r_s;
      const auto scored =
          total_reward(row.response, row.reference, adapted.rewards[i], cfg.weights);
      out.stream() << "{\"id\":" << row.id.dump() << ",\"r_c\":" << fixed6(scored.r_c)
                   << ",\"r_s_raw\":" << fixed6(r_s) << ",\"r_as\":" << fixed6(scored.r_as)
                   << ",\"r_f\":" << fixed6(scored.r_f) << ",\"r_total\":" << fixed6(scored.r_total)
                   << "}\n";
    }
  }
  save(o.save_prefix, "bert", state_bert, cfg.adapt);
  save(o.save_prefix, "cos", state_cos, cfg.adapt);
  return 0;
}

int run_adapt_replay(const GlobalOptions& g, const ReplayOptions& o) {
  const auto cfg = g.load_config();
  std::ifstream in(o.input);
  if (!in) throw InvalidArgument("cannot open input file '" + o.input + "'");

  std::map<std::string, ThresholdState> states;
  auto state_for = [&](const std::string& metric) -> ThresholdState& {
    auto it = states.find(metric);
    if (it == states.end()) {
      it = states.emplace(metric, resume(o.resume_prefix, metric.c_str(), cfg.adapt)).first;
    }
    return it->second;
  };

  OutputFile out(o.output);
  std::unique_ptr<OutputFile> mapped;
  if (!o.mapped_output.empty()) mapped = std::make_unique<OutputFile>(o.mapped_output);
  out.stream() << "metric,batch,step,T_before,T_after,raw_mean,raw_var,mapped_mean,mapped_var\n";

  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ParseError("line " + std::to_string(line) + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("batch") || !j.contains("metric") ||
        !j["metric"].is_string() || !j.contains("scores") || !j["scores"].is_array()) {
      throw ValidationError("line " + std::to_string(line) +
                            ": record needs batch, metric and scores");
    }
    std::vector<double> scores;
    for (const auto& s : j["scores"]) {
      if (!s.is_number()) throw ValidationError("line " + std::to_string(line) + ": non-numeric score");
      scores.push_back(s.get<double>());
    }
    const auto metric = j["metric"].get<std::string>();
    auto& state = state_for(metric);
    const auto batch = adapt_batch(scores, state, cfg.adapt);
    const auto raw = moments(batch.raw);
    const auto mapped_m = moments(batch.mapped);
    const std::string batch_id = j["batch"].is_string() ? j["batch"].get<std::string>() : j["batch"].dump();
    out.stream() << metric << ',' << batch_id << ',' << state.step << ','
                 << fixed6(batch.threshold_used) << ',' << fixed6(batch.threshold_after) << ','
                 << fixed6(raw.mean) << ',' << fixed6(raw.variance) << ','
                 << fixed6(mapped_m.mean) << ',' << fixed6(mapped_m.variance) << '\n';
    if (mapped) {
      mapped->stream() << "{\"batch\":" << j["batch"].dump() << ",\"metric\":" << j["metric"].dump()
                       << ",\"mapped\":[";
      for (std::size_t i = 0; i < batch.mapped.size(); ++i) {
        if (i) mapped->stream() << ',';
        mapped->stream() << fixed6(batch.mapped[i]);
      }
      mapped->stream() << "]}\n";
    }
  }
  for (const auto& [metric, state] : states) save(o.save_prefix, metric.c_str(), state, cfg.adapt);
  return 0;
}

}  // namespace armed::cli
