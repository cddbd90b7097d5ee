#include "armed/semantic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "armed/error.hpp"
#include "armed/random.hpp"
#include "armed/text_metrics.hpp"

namespace armed {
namespace {

constexpr double kNormTolerance = 1e-6;

void check_finite(std::span<const double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) throw InvalidArgument("embedding has non-finite entry");
  }
}

// Cosine of two unit rows, clamped to [0,1]. Identical rows return exactly
// 1 so self-similarity does not depend on rounding in the dot product.
double unit_cosine(std::span<const double> a, std::span<const double> b) {
  if (std::equal(a.begin(), a.end(), b.begin(), b.end())) return 1.0;
  return std::clamp(dot(a, b), 0.0, 1.0);
}

}  // namespace

EmbeddingMatrix::EmbeddingMatrix(std::size_t rows, std::size_t dim,
                                 std::vector<double> values)
    : rows_(rows), dim_(dim), values_(std::move(values)) {
  if (values_.size() != rows_ * dim_) {
    throw InvalidArgument("embedding matrix size does not match rows x dim");
  }
  check_finite(values_);
  normalized_ = rows_ > 0;
  for (std::size_t i = 0; i < rows_ && normalized_; ++i) {
    normalized_ = std::abs(l2_norm(row(i)) - 1.0) <= kNormTolerance;
  }
}

EmbeddingMatrix EmbeddingMatrix::normalized_from(std::size_t rows, std::size_t dim,
                                                 std::vector<double> values) {
  if (values.size() != rows * dim) {
    throw InvalidArgument("embedding matrix size does not match rows x dim");
  }
  check_finite(values);
  for (std::size_t i = 0; i < rows; ++i) {
    std::span<double> r(values.data() + i * dim, dim);
    const double n = l2_norm(r);
    if (n == 0.0) throw InvalidArgument("embedding row has zero norm");
    for (double& v : r) v /= n;
  }
  return EmbeddingMatrix(rows, dim, std::move(values));
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double l2_norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double bertscore_f1(const EmbeddingMatrix& cand, const EmbeddingMatrix& ref) {
  if (cand.empty() || ref.empty()) throw InvalidArgument("empty embedding matrix");
  if (cand.dim() != ref.dim()) throw InvalidArgument("embedding dimension mismatch");
  if (!cand.normalized() || !ref.normalized()) {
    throw InvalidArgument("embedding rows are not unit-normalized");
  }
  std::vector<double> best_ref(ref.rows(), 0.0);
  double precision = 0.0;
  for (std::size_t i = 0; i < cand.rows(); ++i) {
    double best = 0.0;
    for (std::size_t j = 0; j < ref.rows(); ++j) {
      const double s = unit_cosine(cand.row(i), ref.row(j));
      best = std::max(best, s);
      best_ref[j] = std::max(best_ref[j], s);
    }
    precision += best;
  }
  precision /= static_cast<double>(cand.rows());
  double recall = 0.0;
  for (double v : best_ref) recall += v;
  recall /= static_cast<double>(ref.rows());
  if (precision + recall == 0.0) return 0.0;
  return std::clamp(2.0 * precision * recall / (precision + recall), 0.0, 1.0);
}

double cosine_similarity(const SentenceVector& a, const SentenceVector& b) {
  if (a.dim() != b.dim()) throw InvalidArgument("sentence vector dimension mismatch");
  check_finite(a.values);
  check_finite(b.values);
  const double na = l2_norm(a.values);
  const double nb = l2_norm(b.values);
  if (na == 0.0 || nb == 0.0) throw InvalidArgument("sentence vector has zero norm");
  if (a.values == b.values) return 1.0;
  return std::clamp(dot(a.values, b.values) / (na * nb), 0.0, 1.0);
}

SemanticScores combine_semantic(double bert_f1, double cos_sim, double lambda2) {
  if (!(lambda2 >= 0.0 && lambda2 <= 1.0)) {
    throw InvalidArgument("lambda2 must lie in [0,1]");
  }
  return {bert_f1, cos_sim, lambda2 * bert_f1 + (1.0 - lambda2) * cos_sim};
}

SemanticScores raw_semantic(const EmbeddingMatrix& cand_tokens,
                            const EmbeddingMatrix& ref_tokens,
                            const SentenceVector& cand_sent,
                            const SentenceVector& ref_sent, double lambda2) {
  if (!(lambda2 >= 0.0 && lambda2 <= 1.0)) {
    throw InvalidArgument("lambda2 must lie in [0,1]");
  }
  return combine_semantic(bertscore_f1(cand_tokens, ref_tokens),
                          cosine_similarity(cand_sent, ref_sent), lambda2);
}

TextEmbedding mock_embed(std::string_view text, std::size_t dim, std::uint64_t seed) {
  if (dim < 2) throw InvalidArgument("mock embedding dim must be >= 2");
  auto tokens = tokenize(text);
  if (tokens.empty()) tokens.emplace_back("<empty>");

  std::vector<double> values(tokens.size() * dim);
  std::vector<double> mean(dim, 0.0);
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    Rng rng(hash_string(tokens[t], seed));
    std::span<double> r(values.data() + t * dim, dim);
    double n = 0.0;
    while (n == 0.0) {
      for (double& v : r) v = rng.uniform(-1.0, 1.0);
      n = l2_norm(r);
    }
    for (std::size_t k = 0; k < dim; ++k) {
      r[k] /= n;
      mean[k] += r[k];
    }
  }
  if (tokens.size() == 1) std::copy_n(values.begin(), dim, mean.begin());
  double mn = tokens.size() == 1 ? 1.0 : l2_norm(mean);
  if (mn == 0.0) {
    // Opposite token vectors cancelled; fall back to the first token.
    std::copy_n(values.begin(), dim, mean.begin());
    mn = 1.0;
  }
  for (double& v : mean) v /= mn;

  const std::size_t rows = tokens.size();
  return {EmbeddingMatrix(rows, dim, std::move(values)), SentenceVector{std::move(mean)}};
}

}  // namespace armed
