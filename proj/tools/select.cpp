#include <algorithm>
#include <json.hpp>

#include "armed/dataset.hpp"
#include "armed/error.hpp"
#include "armed/knowledge.hpp"
#include "commands.hpp"

namespace armed::cli {

int run_select_knowledge(const GlobalOptions& g, const SelectOptions& o) {
  if (o.threshold < 1) throw InvalidArgument("--threshold must be >= 1");
  const auto cfg = g.load_config();
  const auto records = ingest_dataset_file(o.input);
  const auto partition = frequency_split(records, o.threshold);

  std::vector<std::string> ids;
  std::vector<std::string> questions;
  for (const auto& [answer, members] : partition.high_freq) {
    for (const auto& r : members) {
      ids.push_back(r.id);
      questions.push_back(r.question);
    }
  }
  auto embedder = g.embedder(cfg);
  const auto emb = embedder->embed(questions);
  std::map<std::string, SentenceVector> by_id;
  for (std::size_t i = 0; i < ids.size(); ++i) by_id.emplace(ids[i], emb[i].sentence);

  SelectionConfig sel_cfg;
  sel_cfg.per_cluster_target = o.per_cluster_target;
  const auto selections = select_exemplars(partition, by_id, sel_cfg, g.seed);

  {
    OutputFile out(o.output);
    for (const auto& sel : selections) {
      for (std::size_t c = 0; c < sel.chosen.size(); ++c) {
        auto j = nlohmann::ordered_json::parse(to_json_line(sel.chosen[c]));
        j["kind"] = "core";
        j["answer_group"] = sel.answer;
        j["cluster"] = c;
        out.stream() << j.dump() << '\n';
      }
    }
    for (const auto& r : partition.low_freq) {
      auto j = nlohmann::ordered_json::parse(to_json_line(r));
      j["kind"] = "supplementary";
      out.stream() << j.dump() << '\n';
    }
  }
  if (!o.summary.empty()) {
    OutputFile out(o.summary);
    out.stream() << "answer,count,k\n";
    for (const auto& sel : selections) {
      out.stream() << nlohmann::json(sel.answer).dump() << ','
                   << partition.high_freq.at(sel.answer).size() << ',' << sel.k << '\n';
    }
    out.stream() << "\"<low_freq>\"," << partition.low_freq.size() << ",0\n";
  }
  if (!o.frequency_table.empty()) {
    std::map<std::string, std::size_t> counts;
    for (const auto& r : records) ++counts[normalize_answer(r.answer)];
    std::vector<std::pair<std::string, std::size_t>> rows(counts.begin(), counts.end());
    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    OutputFile out(o.frequency_table);
    out.stream() << "answer,count,class\n";
    for (const auto& [answer, n] : rows) {
      out.stream() << nlohmann::json(answer).dump() << ',' << n << ','
                   << (n > o.threshold ? "high" : "low") << '\n';
    }
  }
  return 0;
}

}  // namespace armed::cli
