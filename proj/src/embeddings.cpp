#include "armed/embeddings.hpp"

#include <array>
#include <bit>
#include <fstream>
#include <istream>
#include <ostream>

#include "armed/embed_client.hpp"
#include "armed/error.hpp"

namespace armed {
namespace {

constexpr std::array<char, 4> kMagic = {'A', 'E', 'M', 'B'};
constexpr std::uint32_t kFileVersion = 1;

void put_u32(std::ostream& out, std::uint32_t v) {
  const std::array<char, 4> b = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                                 static_cast<char>((v >> 16) & 0xff),
                                 static_cast<char>((v >> 24) & 0xff)};
  out.write(b.data(), 4);
}

void put_f32(std::ostream& out, double v) {
  put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
}

std::uint32_t get_u32(std::istream& in) {
  std::array<unsigned char, 4> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), 4)) {
    throw ParseError("embedding file truncated");
  }
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

double get_f32(std::istream& in) { return std::bit_cast<float>(get_u32(in)); }

}  // namespace

std::vector<TextEmbedding> MockEmbedder::embed(const std::vector<std::string>& texts) {
  std::vector<TextEmbedding> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(mock_embed(t, dim_, seed_));
  return out;
}

std::string MockEmbedder::describe() const {
  return "mock(dim=" + std::to_string(dim_) + ",seed=" + std::to_string(seed_) + ")";
}

FileEmbeddings::FileEmbeddings(const std::string& path) : label_(path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open embedding file '" + path + "'");
  load(in);
}

FileEmbeddings::FileEmbeddings(std::istream& in, std::string label) : label_(std::move(label)) {
  load(in);
}

void FileEmbeddings::load(std::istream& in) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), 4) || magic != kMagic) throw ParseError("not an embedding file");
  const auto version = get_u32(in);
  if (version != kFileVersion) {
    throw ParseError("unsupported embedding file version " + std::to_string(version));
  }
  dim_ = get_u32(in);
  if (dim_ == 0) throw ParseError("embedding file declares dim 0");
  const auto count = get_u32(in);
  for (std::uint32_t e = 0; e < count; ++e) {
    const auto len = get_u32(in);
    std::string text(len, '\0');
    if (len > 0 && !in.read(text.data(), len)) throw ParseError("embedding file truncated");
    const auto rows = get_u32(in);
    std::vector<double> tokens(static_cast<std::size_t>(rows) * dim_);
    for (double& v : tokens) v = get_f32(in);
    std::vector<double> sentence(dim_);
    for (double& v : sentence) v = get_f32(in);
    const double n = l2_norm(sentence);
    if (!(n > 0.0)) throw ParseError("embedding file: zero sentence vector for '" + text + "'");
    for (double& v : sentence) v /= n;
    TextEmbedding emb{EmbeddingMatrix::normalized_from(rows, dim_, std::move(tokens)),
                      SentenceVector{std::move(sentence)}};
    if (!entries_.emplace(std::move(text), std::move(emb)).second) {
      throw ParseError("embedding file: duplicate text entry");
    }
  }
}

std::vector<TextEmbedding> FileEmbeddings::embed(const std::vector<std::string>& texts) {
  std::vector<TextEmbedding> out;
  out.reserve(texts.size());
  for (const auto& t : texts) {
    const auto it = entries_.find(t);
    if (it == entries_.end()) {
      throw InvalidArgument("embedding file " + label_ + " has no entry for '" + t + "'");
    }
    out.push_back(it->second);
  }
  return out;
}

void write_embedding_file(std::ostream& out, std::size_t dim,
                          const std::map<std::string, TextEmbedding>& entries) {
  out.write(kMagic.data(), 4);
  put_u32(out, kFileVersion);
  put_u32(out, static_cast<std::uint32_t>(dim));
  put_u32(out, static_cast<std::uint32_t>(entries.size()));
  for (const auto& [text, emb] : entries) {
    if (emb.tokens.dim() != dim && !emb.tokens.empty()) {
      throw InvalidArgument("token embedding dim disagrees with file dim");
    }
    if (emb.sentence.dim() != dim) throw InvalidArgument("sentence dim disagrees with file dim");
    put_u32(out, static_cast<std::uint32_t>(text.size()));
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    put_u32(out, static_cast<std::uint32_t>(emb.tokens.rows()));
    for (double v : emb.tokens.values()) put_f32(out, v);
    for (double v : emb.sentence.values) put_f32(out, v);
  }
}

std::unique_ptr<EmbeddingSource> make_embedding_source(const std::string& spec,
                                                       std::uint64_t seed,
                                                       std::size_t mock_dim) {
  if (spec == "mock") return std::make_unique<MockEmbedder>(mock_dim, seed);
  if (spec.rfind("file:", 0) == 0) return std::make_unique<FileEmbeddings>(spec.substr(5));
  if (spec.rfind("service:", 0) == 0) return std::make_unique<RemoteEmbedder>(spec.substr(8));
  throw InvalidArgument("embeddings source must be mock, file:PATH or service:URL, got '" +
                        spec + "'");
}

}  // namespace armed
