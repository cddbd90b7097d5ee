#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "armed/error.hpp"
#include "armed/metrics.hpp"
#include "armed/refinement.hpp"
#include "commands.hpp"

namespace armed::cli {
namespace {

using nlohmann::json;

std::vector<std::pair<std::size_t, json>> read_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open input file '" + path + "'");
  std::vector<std::pair<std::size_t, json>> out;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.emplace_back(line, json::parse(text));
    } catch (const json::parse_error& e) {
      throw ParseError("line " + std::to_string(line) + ": " + e.what());
    }
  }
  return out;
}

std::string field(const json& j, const char* key, std::size_t line) {
  if (!j.is_object() || !j.contains(key)) {
    throw ValidationError("line " + std::to_string(line) + ": missing field '" + key + "'");
  }
  const auto& v = j[key];
  return v.is_string() ? v.get<std::string>() : v.dump();
}

}  // namespace

int run_eval(const GlobalOptions& g, const EvalOptions& o) {
  const auto cfg = g.load_config();
  const auto rows = read_jsonl(o.input);

  std::vector<std::string> hss_ids;
  std::vector<std::string> hss_texts;
  std::vector<std::pair<std::string, std::string>> predictions;
  std::vector<std::pair<std::string, std::string>> gold;
  std::vector<std::pair<std::string, std::string>> order;  // (id, metric)
  for (const auto& [line, j] : rows) {
    const auto id = field(j, "id", line);
    const auto metric = field(j, "metric", line);
    const auto prediction = field(j, "prediction", line);
    const auto reference = field(j, "reference", line);
    if (metric == "hss") {
      hss_ids.push_back(id);
      hss_texts.push_back(prediction);
      hss_texts.push_back(reference);
    } else if (metric == "accuracy") {
      predictions.emplace_back(id, prediction);
      gold.emplace_back(id, reference);
    } else {
      throw ValidationError("line " + std::to_string(line) + ": metric must be hss or accuracy");
    }
    order.emplace_back(id, metric);
  }

  std::vector<double> hss_values;
  if (!hss_ids.empty()) {
    auto embedder = g.embedder(cfg);
    const auto emb = embedder->embed(hss_texts);
    for (std::size_t i = 0; i < hss_ids.size(); ++i) {
      hss_values.push_back(
          hss(hss_texts[2 * i], hss_texts[2 * i + 1], emb[2 * i], emb[2 * i + 1], cfg.hss).hss);
    }
  }

  OutputFile out(o.output);
  out.stream() << "id,metric,value\n";
  std::size_t h = 0;
  std::size_t a = 0;
  for (const auto& [id, metric] : order) {
    double v = 0.0;
    if (metric == "hss") {
      v = hss_values[h++];
    } else {
      v = mc_accuracy({predictions[a]}, {gold[a]});
      ++a;
    }
    out.stream() << json(id).dump() << ',' << metric << ',' << fixed6(v) << '\n';
  }

  std::ostringstream summary;
  summary << "metric,count,mean\n";
  if (!hss_values.empty()) {
    double s = 0.0;
    for (double v : hss_values) s += v;
    summary << "hss," << hss_values.size() << ',' << fixed6(s / hss_values.size()) << '\n';
  }
  if (!predictions.empty()) {
    summary << "accuracy," << predictions.size() << ',' << fixed6(mc_accuracy(predictions, gold))
            << '\n';
  }
  if (o.summary.empty()) {
    std::cerr << summary.str();
  } else {
    OutputFile s(o.summary);
    s.stream() << summary.str();
  }
  return 0;
}

int run_diagnose_collapse(const GlobalOptions&, const DiagnoseOptions& o) {
  std::ifstream in(o.input);
  if (!in) throw InvalidArgument("cannot open input file '" + o.input + "'");
  std::vector<double> scores;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "line " + std::to_string(line) + ": ";
    if (o.field.empty()) {
      char* end = nullptr;
      const double v = std::strtod(text.c_str(), &end);
      while (*end == ' ' || *end == '\t' || *end == '\r') ++end;
      if (end == text.c_str() || *end != '\0') throw ParseError(where + "expected a number");
      scores.push_back(v);
    } else {
      json j;
      try {
        j = json::parse(text);
      } catch (const json::parse_error& e) {
        throw ParseError(where + e.what());
      }
      if (!j.is_object() || !j.contains(o.field) || !j[o.field].is_number()) {
        throw ValidationError(where + "missing numeric field '" + o.field + "'");
      }
      scores.push_back(j[o.field].get<double>());
    }
  }
  const auto r = diagnose_collapse(scores, o.bins, o.metric);
  OutputFile out(o.output);
  out.stream() << "metric,samples,mean,variance,std,bin_lower,count\n";
  for (const auto& b : r.histogram) {
    out.stream() << r.metric << ',' << r.samples << ',' << fixed6(r.mean) << ','
                 << fixed6(r.variance) << ',' << fixed6(r.std) << ',' << fixed6(b.lower) << ','
                 << b.count << '\n';
  }
  return 0;
}

int run_validate_refinements(const GlobalOptions&, const RefinementOptions& o) {
  std::ifstream in(o.input);
  if (!in) throw InvalidArgument("cannot open input file '" + o.input + "'");
  OutputFile out(o.output);
  std::size_t counts[3] = {0, 0, 0};
  std::size_t rejected = 0;
  std::size_t total = 0;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    ++total;
    try {
      const auto rec = validate_refinement(text);
      ++counts[static_cast<int>(rec.status)];
      out.stream() << to_json(rec) << '\n';
    } catch (const Error& e) {
      ++rejected;
      std::cerr << "error: " << e.kind() << ": line " << line << ": " << e.what() << '\n';
    }
  }
  std::cerr << "status,count\n"
            << "consistent," << counts[0] << "\nneeds_fix," << counts[1] << "\ndrop,"
            << counts[2] << "\nrejected," << rejected << '\n';
  if (rejected > 0) {
    throw ValidationError(std::to_string(rejected) + " of " + std::to_string(total) +
                          " refinement records rejected");
  }
  return 0;
}

}  // namespace armed::cli
