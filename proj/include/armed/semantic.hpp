#pragma once

// Embedding-based similarity: greedy-match token F1 and sentence cosine.

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace armed {

// Row-major token embeddings. `normalized` records that every row was
// checked to have unit L2 norm.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;
  EmbeddingMatrix(std::size_t rows, std::size_t dim, std::vector<double> values);

  // Copies the rows and L2-normalizes each one. Throws on a zero or
  // non-finite row.
  static EmbeddingMatrix normalized_from(std::size_t rows, std::size_t dim,
                                         std::vector<double> values);

  std::size_t rows() const { return rows_; }
  std::size_t dim() const { return dim_; }
  bool normalized() const { return normalized_; }
  bool empty() const { return rows_ == 0; }

  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * dim_, dim_};
  }
  const std::vector<double>& values() const { return values_; }

  bool operator==(const EmbeddingMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> values_;
  bool normalized_ = false;
};

struct SentenceVector {
  std::vector<double> values;

  std::size_t dim() const { return values.size(); }
  bool operator==(const SentenceVector&) const = default;
};

struct SemanticScores {
  double bert_f1 = 0.0;
  double cos_sim = 0.0;
  double r_s = 0.0;
};

struct TextEmbedding {
  EmbeddingMatrix tokens;
  SentenceVector sentence;

  bool operator==(const TextEmbedding&) const = default;
};

double dot(std::span<const double> a, std::span<const double> b);
double l2_norm(std::span<const double> a);

// Greedy-match F1 with negative cosines clamped to zero. Requires
// non-empty, equal-dim, normalized matrices.
double bertscore_f1(const EmbeddingMatrix& cand, const EmbeddingMatrix& ref);

// max(0, cos(a, b)). Throws on zero norm or dimension mismatch.
double cosine_similarity(const SentenceVector& a, const SentenceVector& b);

// Combines pre-computed sub-scores: lambda2 * bert + (1 - lambda2) * cos.
SemanticScores combine_semantic(double bert_f1, double cos_sim, double lambda2);

// R_s from embeddings.
SemanticScores raw_semantic(const EmbeddingMatrix& cand_tokens,
                            const EmbeddingMatrix& ref_tokens,
                            const SentenceVector& cand_sent,
                            const SentenceVector& ref_sent, double lambda2);

// Deterministic stand-in embedder. Each token maps to a unit vector drawn
// from a seeded hash of its bytes; the sentence vector is the normalized
// mean of the token vectors. Text with no tokens embeds as the reserved
// token "<empty>". Requires dim >= 2.
TextEmbedding mock_embed(std::string_view text, std::size_t dim, std::uint64_t seed);

}  // namespace armed
