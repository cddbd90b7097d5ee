#pragma once

// Where embeddings come from: the deterministic mock, a precomputed binary
// file, or the remote embedding service.
//
// Embedding file layout (all integers uint32, all reals float32, little
// endian):
//
//   magic "AEMB" | version (1) | dim | entry count
//   per entry: text byte length | UTF-8 text bytes
//              | token row count n | n * dim token values
//              | dim sentence values
//
// Token rows and sentence vectors are normalized when loaded.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "armed/semantic.hpp"

namespace armed {

class EmbeddingSource {
 public:
  virtual ~EmbeddingSource() = default;

  // One embedding per text, in input order.
  virtual std::vector<TextEmbedding> embed(const std::vector<std::string>& texts) = 0;
  virtual std::string describe() const = 0;
};

class MockEmbedder final : public EmbeddingSource {
 public:
  static constexpr std::size_t kDefaultDim = 32;

  MockEmbedder(std::size_t dim, std::uint64_t seed) : dim_(dim), seed_(seed) {}

  std::vector<TextEmbedding> embed(const std::vector<std::string>& texts) override;
  std::string describe() const override;

 private:
  std::size_t dim_;
  std::uint64_t seed_;
};

// Lookup by exact text. A text absent from the file is an error.
class FileEmbeddings final : public EmbeddingSource {
 public:
  explicit FileEmbeddings(const std::string& path);
  explicit FileEmbeddings(std::istream& in, std::string label = "<stream>");

  std::vector<TextEmbedding> embed(const std::vector<std::string>& texts) override;
  std::string describe() const override { return "file:" + label_; }
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return entries_.size(); }

 private:
  void load(std::istream& in);

  std::string label_;
  std::size_t dim_ = 0;
  std::map<std::string, TextEmbedding> entries_;
};

void write_embedding_file(std::ostream& out, std::size_t dim,
                          const std::map<std::string, TextEmbedding>& entries);

// Parses "mock", "file:PATH" or "service:URL". Throws InvalidArgument on
// anything else.
std::unique_ptr<EmbeddingSource> make_embedding_source(const std::string& spec,
                                                       std::uint64_t seed,
                                                       std::size_t mock_dim =
                                                           MockEmbedder::kDefaultDim);

}  // namespace armed
