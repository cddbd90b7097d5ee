#include "armed/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "armed/error.hpp"
#include "armed/stats.hpp"
#include "armed/text_metrics.hpp"

namespace armed {

double hss_from_components(double bleu1, double rouge1_f, double bert_f1, double cos_sim,
                           const HssWeights& w) {
  return w.w_bleu * bleu1 + w.w_rouge * rouge1_f + w.w_bert * bert_f1 + w.w_cos * cos_sim;
}

HssBreakdown hss(std::string_view candidate, std::string_view reference,
                 const TextEmbedding& cand_emb, const TextEmbedding& ref_emb,
                 const HssWeights& weights) {
  if (weights.w_bleu < 0 || weights.w_rouge < 0 || weights.w_bert < 0 || weights.w_cos < 0) {
    throw InvalidArgument("HSS weights must be non-negative");
  }
  const auto cand = tokenize(candidate);
  const auto ref = tokenize(reference);
  HssBreakdown out;
  out.bleu1 = bleu1(cand, ref);
  out.rouge1_f = rouge1_f(cand, ref);
  out.bert_f1 = bertscore_f1(cand_emb.tokens, ref_emb.tokens);
  out.cos_sim = cosine_similarity(cand_emb.sentence, ref_emb.sentence);
  out.hss = hss_from_components(out.bleu1, out.rouge1_f, out.bert_f1, out.cos_sim, weights);
  return out;
}

std::optional<char> normalize_choice(std::string_view prediction) {
  for (const auto& tok : tokenize(prediction)) {
    if (tok.size() == 1 && std::isalpha(static_cast<unsigned char>(tok[0]))) {
      return static_cast<char>(std::toupper(static_cast<unsigned char>(tok[0])));
    }
  }
  return std::nullopt;
}

double mc_accuracy(const std::vector<std::pair<std::string, std::string>>& predictions,
                   const std::vector<std::pair<std::string, std::string>>& gold) {
  if (predictions.empty()) throw InvalidArgument("no predictions to score");
  std::unordered_map<std::string, std::optional<char>> gold_by_id;
  for (const auto& [id, choice] : gold) {
    if (!gold_by_id.emplace(id, normalize_choice(choice)).second) {
      throw InvalidArgument("duplicate gold id '" + id + "'");
    }
  }
  std::unordered_set<std::string> seen;
  std::size_t correct = 0;
  for (const auto& [id, choice] : predictions) {
    if (!seen.insert(id).second) throw InvalidArgument("duplicate prediction id '" + id + "'");
    const auto it = gold_by_id.find(id);
    if (it == gold_by_id.end()) throw InvalidArgument("prediction id '" + id + "' not in gold");
    const auto pred = normalize_choice(choice);
    if (pred && it->second && *pred == *it->second) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(predictions.size());
}

CollapseReport diagnose_collapse(std::span<const double> scores, std::size_t bins,
                                 std::string metric) {
  if (scores.size() < 2) throw InvalidArgument("collapse diagnosis needs at least 2 scores");
  if (bins < 1) throw InvalidArgument("histogram needs at least one bin");
  CollapseReport r;
  r.metric = std::move(metric);
  r.samples = scores.size();
  const auto m = moments(scores);
  r.mean = m.mean;
  r.variance = m.variance;
  r.std = std::sqrt(m.variance);
  r.histogram.resize(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    r.histogram[b].lower = static_cast<double>(b) / static_cast<double>(bins);
  }
  for (double s : scores) {
    const double x = std::clamp(s, 0.0, 1.0);
    auto b = static_cast<std::size_t>(std::floor(x * static_cast<double>(bins)));
    // Rounding in x * bins must not move a value across its true edge.
    while (b > 0 && x < r.histogram[b].lower) --b;
    while (b + 1 < bins && x >= r.histogram[b + 1].lower) ++b;
    r.histogram[std::min(b, bins - 1)].count++;
  }
  return r;
}

}  // namespace armed
