#pragma once

// Exemplar selection for knowledge injection: split QA pairs by answer
// frequency, cluster each frequent answer's questions, keep the question
// nearest each centroid.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "armed/dataset.hpp"
#include "armed/semantic.hpp"

namespace armed {

struct FrequencyPartition {
  // Keyed by normalized answer (lowercased, trimmed); records in input order.
  std::map<std::string, std::vector<QARecord>> high_freq;
  std::vector<QARecord> low_freq;
  std::size_t threshold = 0;
};

std::string normalize_answer(std::string_view answer);

// Answers occurring more than `threshold` times are high-frequency.
// Throws InvalidArgument when threshold < 1.
FrequencyPartition frequency_split(const std::vector<QARecord>& records, std::size_t threshold);

using Point = std::vector<double>;

struct KMeansResult {
  std::vector<Point> centroids;
  std::vector<std::size_t> assignments;
  std::vector<double> inertia_trace;  // inertia after each Lloyd assignment
  std::size_t iterations = 0;
};

double squared_distance(const Point& a, const Point& b);

// k-means++ seeding from `seed`, then Lloyd iterations until assignments
// stop changing or max_iters. A cluster that empties is re-seeded with the
// point farthest from its current centroid. Throws InvalidArgument when k is
// 0 or exceeds the point count, or dimensions disagree.
KMeansResult kmeans(const std::vector<Point>& points, std::size_t k, std::uint64_t seed,
                    std::size_t max_iters = 100);

struct SelectionConfig {
  std::size_t per_cluster_target = 5;
  std::size_t max_iters = 100;
};

struct ClusterSelection {
  std::string answer;
  std::size_t k = 0;
  std::vector<Point> centroids;
  std::vector<QARecord> chosen;  // one per cluster, cluster order
};

// Per high-frequency group: k = clamp(ceil(n / per_cluster_target), 1, n),
// cluster the unit-normalized question embeddings, then per cluster pick the
// member nearest the centroid (ties to the lexicographically lowest id).
// Each group's generator is derived from (seed, answer) so groups are
// independent of processing order. Throws InvalidArgument for a missing
// embedding.
std::vector<ClusterSelection> select_exemplars(
    const FrequencyPartition& partition,
    const std::map<std::string, SentenceVector>& embeddings, const SelectionConfig& config,
    std::uint64_t seed);

}  // namespace armed
