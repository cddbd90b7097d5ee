#pragma once

// Evaluation metrics and reward-distribution diagnostics.

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "armed/semantic.hpp"

namespace armed {

struct HssWeights {
  double w_bleu = 0.25;
  double w_rouge = 0.25;
  double w_bert = 0.10;
  double w_cos = 0.40;
};

struct HssBreakdown {
  double bleu1 = 0.0;
  double rouge1_f = 0.0;
  double bert_f1 = 0.0;
  double cos_sim = 0.0;
  double hss = 0.0;
};

double hss_from_components(double bleu1, double rouge1_f, double bert_f1, double cos_sim,
                           const HssWeights& w);

// Hybrid semantic score from text plus the embeddings of both sides.
// Throws InvalidArgument for negative weights.
HssBreakdown hss(std::string_view candidate, std::string_view reference,
                 const TextEmbedding& cand_emb, const TextEmbedding& ref_emb,
                 const HssWeights& weights = {});

// First single-letter token of the prediction, uppercased.
std::optional<char> normalize_choice(std::string_view prediction);

// Fraction of predictions whose normalized choice letter equals gold's.
// Throws InvalidArgument on an unknown or duplicate id, or empty input.
double mc_accuracy(const std::vector<std::pair<std::string, std::string>>& predictions,
                   const std::vector<std::pair<std::string, std::string>>& gold);

struct HistogramBin {
  double lower = 0.0;
  std::size_t count = 0;
};

struct CollapseReport {
  std::string metric;
  double mean = 0.0;
  double variance = 0.0;  // population
  double std = 0.0;
  std::vector<HistogramBin> histogram;
  std::size_t samples = 0;
};

// Equal-width bins over [0,1]: bin i covers [i/b, (i+1)/b), the last bin
// is closed at 1. Scores outside [0,1] are clamped into the edge bins.
// Throws InvalidArgument for fewer than two scores or zero bins.
CollapseReport diagnose_collapse(std::span<const double> scores, std::size_t bins,
                                 std::string metric = "score");

}  // namespace armed
