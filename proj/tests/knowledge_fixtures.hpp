#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "armed/knowledge.hpp"
#include "armed/random.hpp"

namespace fixtures {

using namespace armed;

// Records over a small answer vocabulary with random case and padding, so
// normalization matters.
inline std::vector<QARecord> random_records(Rng& rng, std::size_t n, std::size_t vocab) {
  static const char* const answers[] = {"yes", "no", "left", "right", "pneumonia", "ct",
                                        "mri", "liver", "brain", "none"};
  std::vector<QARecord> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::string a = answers[rng.index(std::min<std::size_t>(vocab, 10))];
    if (rng.uniform() < 0.3) a[0] = static_cast<char>(a[0] - 'a' + 'A');
    if (rng.uniform() < 0.2) a = "  " + a + " ";
    out.push_back(QARecord{"q" + std::to_string(i), "question " + std::to_string(i), a, {}, {}});
  }
  return out;
}

inline std::map<std::string, SentenceVector> random_embeddings(Rng& rng,
                                                               const std::vector<QARecord>& rs,
                                                               std::size_t dim) {
  std::map<std::string, SentenceVector> out;
  for (const auto& r : rs) {
    SentenceVector v;
    for (std::size_t d = 0; d < dim; ++d) v.values.push_back(rng.normal(0.0, 1.0));
    out[r.id] = v;
  }
  return out;
}

inline Point unit(const SentenceVector& v) {
  double n = 0.0;
  for (double x : v.values) n += x * x;
  n = std::sqrt(n);
  Point p = v.values;
  for (double& x : p) x /= n;
  return p;
}

// Brute-force check that every chosen record is, within its cluster, the
// member closest to the centroid, ties going to the smallest id. Returns
// the number of violations.
inline std::size_t nearest_centroid_violations(const ClusterSelection& sel,
                                               const std::vector<QARecord>& members,
                                               const std::map<std::string, SentenceVector>& emb,
                                               std::uint64_t seed, std::size_t max_iters) {
  std::vector<Point> points;
  for (const auto& m : members) points.push_back(unit(emb.at(m.id)));
  const auto km = kmeans(points, sel.k, hash_string(sel.answer, seed), max_iters);
  std::size_t bad = 0;
  for (std::size_t c = 0; c < sel.k; ++c) {
    const auto& chosen = sel.chosen.at(c);
    std::size_t chosen_idx = members.size();
    for (std::size_t i = 0; i < members.size(); ++i)
      if (members[i].id == chosen.id) chosen_idx = i;
    if (chosen_idx == members.size() || km.assignments[chosen_idx] != c) {
      ++bad;
      continue;
    }
    const double dc = squared_distance(points[chosen_idx], sel.centroids[c]);
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (km.assignments[i] != c || i == chosen_idx) continue;
      const double d = squared_distance(points[i], sel.centroids[c]);
      if (d < dc || (d == dc && members[i].id < chosen.id)) ++bad;
    }
  }
  return bad;
}

// Partition completeness: every record lands in exactly one side, high
// groups exceed the threshold, low answers do not.
inline bool partition_complete(const std::vector<QARecord>& records,
                               const FrequencyPartition& part) {
  std::map<std::string, std::size_t> counts;
  for (const auto& r : records) ++counts[normalize_answer(r.answer)];
  std::map<std::string, int> seen;
  std::size_t total = part.low_freq.size();
  for (const auto& r : part.low_freq) {
    if (counts[normalize_answer(r.answer)] > part.threshold) return false;
    ++seen[r.id];
  }
  for (const auto& [key, members] : part.high_freq) {
    if (members.size() != counts[key] || members.size() <= part.threshold) return false;
    total += members.size();
    for (const auto& r : members) {
      if (normalize_answer(r.answer) != key) return false;
      ++seen[r.id];
    }
  }
  if (total != records.size() || seen.size() != records.size()) return false;
  for (const auto& [id, n] : seen)
    if (n != 1) return false;
  return true;
}

}  // namespace fixtures
