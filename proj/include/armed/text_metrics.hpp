#pragma once

// Lexical overlap metrics behind the textual correctness reward.

#include <string>
#include <string_view>
#include <vector>

namespace armed {

using TokenSequence = std::vector<std::string>;

struct LexicalScores {
  double bleu1 = 0.0;
  double rouge1_f = 0.0;
  double r_c = 0.0;
};

// Lowercase (ASCII), split on whitespace, strip leading/trailing ASCII
// punctuation from every token, drop tokens left empty. Bytes >= 0x80 are
// passed through untouched so UTF-8 text survives.
TokenSequence tokenize(std::string_view text);

// Unigram BLEU: clipped precision times brevity penalty. 0 for an empty
// candidate or zero overlap; no smoothing.
double bleu1(const TokenSequence& candidate, const TokenSequence& reference);

// Unigram F1 over clipped overlap counts. 0 if either side is empty.
double rouge1_f(const TokenSequence& candidate, const TokenSequence& reference);

// R_c = lambda1 * BLEU-1 + (1 - lambda1) * ROUGE-1. Throws InvalidArgument
// when lambda1 is outside [0, 1].
LexicalScores textual_correctness(std::string_view candidate,
                                  std::string_view reference, double lambda1);

}  // namespace armed
