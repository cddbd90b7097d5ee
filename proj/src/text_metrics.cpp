#include "armed/text_metrics.hpp"

#include <cctype>
#include <cmath>
#include <unordered_map>

#include "armed/error.hpp"

namespace armed {
namespace {

bool is_ascii_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_ascii_punct(unsigned char c) { return c < 0x80 && std::ispunct(c); }

std::size_t clipped_overlap(const TokenSequence& candidate,
                            const TokenSequence& reference) {
  std::unordered_map<std::string_view, std::size_t> ref_counts;
  for (const auto& t : reference) ++ref_counts[t];
  std::size_t overlap = 0;
  for (const auto& t : candidate) {
    auto it = ref_counts.find(t);
    if (it != ref_counts.end() && it->second > 0) {
      --it->second;
      ++overlap;
    }
  }
  return overlap;
}

}  // namespace

TokenSequence tokenize(std::string_view text) {
  TokenSequence out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_ascii_space(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !is_ascii_space(static_cast<unsigned char>(text[j]))) ++j;
    std::size_t b = i;
    std::size_t e = j;
    while (b < e && is_ascii_punct(static_cast<unsigned char>(text[b]))) ++b;
    while (e > b && is_ascii_punct(static_cast<unsigned char>(text[e - 1]))) --e;
    if (b < e) {
      std::string token(text.substr(b, e - b));
      for (auto& c : token) {
        const auto u = static_cast<unsigned char>(c);
        if (u < 0x80) c = static_cast<char>(std::tolower(u));
      }
      out.push_back(std::move(token));
    }
    i = j;
  }
  return out;
}

double bleu1(const TokenSequence& candidate, const TokenSequence& reference) {
  if (candidate.empty() || reference.empty()) return 0.0;
  const std::size_t overlap = clipped_overlap(candidate, reference);
  if (overlap == 0) return 0.0;
  const auto c = static_cast<double>(candidate.size());
  const auto r = static_cast<double>(reference.size());
  const double precision = static_cast<double>(overlap) / c;
  const double bp = c < r ? std::exp(1.0 - r / c) : 1.0;
  return precision * bp;
}

double rouge1_f(const TokenSequence& candidate, const TokenSequence& reference) {
  if (candidate.empty() || reference.empty()) return 0.0;
  const std::size_t overlap = clipped_overlap(candidate, reference);
  if (overlap == 0) return 0.0;
  const double p = static_cast<double>(overlap) / static_cast<double>(candidate.size());
  const double r = static_cast<double>(overlap) / static_cast<double>(reference.size());
  return 2.0 * p * r / (p + r);
}

LexicalScores textual_correctness(std::string_view candidate,
                                  std::string_view reference, double lambda1) {
  if (!(lambda1 >= 0.0 && lambda1 <= 1.0)) {
    throw InvalidArgument("lambda1 must lie in [0,1]");
  }
  const auto cand = tokenize(candidate);
  const auto ref = tokenize(reference);
  LexicalScores s;
  s.bleu1 = bleu1(cand, ref);
  s.rouge1_f = rouge1_f(cand, ref);
  s.r_c = lambda1 * s.bleu1 + (1.0 - lambda1) * s.rouge1_f;
  return s;
}

}  // namespace armed
