#include <doctest.h>

#include "armed/error.hpp"
#include "armed/random.hpp"
#include "armed/text_metrics.hpp"
#include "oracles.hpp"

using namespace armed;

TEST_CASE("tokenize lowercases and strips edge punctuation") {
  CHECK(tokenize("Left Lung.") == TokenSequence{"left", "lung"});
  CHECK(tokenize("").empty());
  CHECK(tokenize("sacroiliac joint, right") == TokenSequence{"sacroiliac", "joint", "right"});
  CHECK(tokenize("  ... !! ") .empty());
  CHECK(tokenize("x-ray (AP)") == TokenSequence{"x-ray", "ap"});
  CHECK(tokenize("\tT2-weighted\nMRI") == TokenSequence{"t2-weighted", "mri"});
}

TEST_CASE("tokenize passes non-ASCII bytes through") {
  CHECK(tokenize("Ödem") == TokenSequence{"Ödem"});
}

TEST_CASE("bleu1 examples") {
  CHECK(bleu1({"left", "lung"}, {"left", "lung"}) == 1.0);
  CHECK(bleu1({"left", "lung"}, {"left", "lung", "opacity"}) ==
        doctest::Approx(0.6065306597126334).epsilon(1e-12));
  CHECK(bleu1({"yes"}, {"no"}) == 0.0);
  CHECK(bleu1({}, {"no"}) == 0.0);
  // clipped counts: "the the the" vs "the" -> precision 1/3
  CHECK(bleu1({"the", "the", "the"}, {"the"}) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("rouge1 examples") {
  CHECK(rouge1_f({"left", "lung"}, {"left", "lung", "opacity"}) == doctest::Approx(0.8));
  CHECK(rouge1_f({"a", "b"}, {"a", "b"}) == 1.0);
  CHECK(rouge1_f({}, {"yes"}) == 0.0);
  CHECK(rouge1_f({"yes"}, {}) == 0.0);
}

TEST_CASE("textual correctness combines per lambda1") {
  const auto s = textual_correctness("left lung", "left lung opacity", 0.5);
  CHECK(s.r_c == doctest::Approx(0.7032653298563167).epsilon(1e-12));
  CHECK(textual_correctness("Left lung.", "left LUNG", 0.3).r_c == 1.0);
  CHECK(textual_correctness("yes", "no", 0.5).r_c == 0.0);
  CHECK_THROWS_AS(textual_correctness("a", "a", 1.5), InvalidArgument);
  CHECK_THROWS_AS(textual_correctness("a", "a", -0.1), InvalidArgument);
}

TEST_CASE("lexical metrics match the brute-force oracle on random sequences") {
  Rng rng(2024);
  const std::vector<std::string> vocab = {"a", "b", "c", "d", "e", "f",
                                          "g", "h", "i", "j", "k", "l"};
  for (int trial = 0; trial < 200; ++trial) {
    const auto vsize = 1 + rng.index(vocab.size());
    TokenSequence cand(rng.index(9));
    TokenSequence ref(rng.index(9));
    for (auto& t : cand) t = vocab[rng.index(vsize)];
    for (auto& t : ref) t = vocab[rng.index(vsize)];
    const double b = bleu1(cand, ref);
    const double r = rouge1_f(cand, ref);
    CHECK(std::abs(b - oracle::bleu1(cand, ref)) <= 1e-9);
    CHECK(std::abs(r - oracle::rouge1_f(cand, ref)) <= 1e-9);
    CHECK(b >= 0.0);
    CHECK(b <= 1.0);
    CHECK(r >= 0.0);
    CHECK(r <= 1.0);

    // order invariance of unigram statistics
    TokenSequence shuffled = cand;
    std::reverse(shuffled.begin(), shuffled.end());
    CHECK(rouge1_f(shuffled, ref) == doctest::Approx(r).epsilon(1e-15));
    CHECK(bleu1(shuffled, ref) == doctest::Approx(b).epsilon(1e-15));
    if (!cand.empty()) {
      CHECK(bleu1(cand, cand) == 1.0);
      CHECK(rouge1_f(cand, cand) == 1.0);
    }
  }
}
