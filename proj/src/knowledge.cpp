#include "armed/knowledge.hpp"

#include <algorithm>
#include <cctype>
#include <limits>

#include "armed/error.hpp"
#include "armed/random.hpp"

namespace armed {

std::string normalize_answer(std::string_view answer) {
  const auto b = answer.find_first_not_of(" \t\r\n\f\v");
  if (b == std::string_view::npos) return {};
  const auto e = answer.find_last_not_of(" \t\r\n\f\v");
  std::string out(answer.substr(b, e - b + 1));
  for (auto& c : out) {
    const auto u = static_cast<unsigned char>(c);
    if (u < 0x80) c = static_cast<char>(std::tolower(u));
  }
  return out;
}

FrequencyPartition frequency_split(const std::vector<QARecord>& records, std::size_t threshold) {
  if (threshold < 1) throw InvalidArgument("frequency threshold must be >= 1");
  std::map<std::string, std::vector<QARecord>> groups;
  for (const auto& r : records) groups[normalize_answer(r.answer)].push_back(r);

  FrequencyPartition out;
  out.threshold = threshold;
  for (const auto& r : records) {
    const auto key = normalize_answer(r.answer);
    if (groups[key].size() <= threshold) out.low_freq.push_back(r);
  }
  for (auto& [key, members] : groups) {
    if (members.size() > threshold) out.high_freq.emplace(key, std::move(members));
  }
  return out;
}

double squared_distance(const Point& a, const Point& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

namespace {

std::size_t nearest(const Point& p, const std::vector<Point>& centroids) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    const double d = squared_distance(p, centroids[c]);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

std::vector<Point> means(const std::vector<Point>& points,
                         const std::vector<std::size_t>& assignments, std::size_t k,
                         const std::vector<Point>& fallback) {
  const std::size_t dim = points.front().size();
  std::vector<Point> out(k, Point(dim, 0.0));
  std::vector<std::size_t> counts(k, 0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto& c = out[assignments[i]];
    for (std::size_t d = 0; d < dim; ++d) c[d] += points[i][d];
    ++counts[assignments[i]];
  }
  for (std::size_t c = 0; c < k; ++c) {
    if (counts[c] == 0) {
      out[c] = fallback[c];
      continue;
    }
    for (double& v : out[c]) v /= static_cast<double>(counts[c]);
  }
  return out;
}

std::vector<Point> plus_plus_init(const std::vector<Point>& points, std::size_t k, Rng& rng) {
  std::vector<Point> centroids;
  std::vector<bool> taken(points.size(), false);
  const std::size_t first = rng.index(points.size());
  centroids.push_back(points[first]);
  taken[first] = true;
  std::vector<double> d2(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) d2[i] = squared_distance(points[i], points[first]);

  while (centroids.size() < k) {
    double total = 0.0;
    for (double d : d2) total += d;
    std::size_t pick = 0;
    if (total > 0.0) {
      const double u = rng.uniform() * total;
      double acc = 0.0;
      pick = points.size();
      for (std::size_t i = 0; i < points.size(); ++i) {
        if (d2[i] <= 0.0) continue;
        acc += d2[i];
        pick = i;
        if (u < acc) break;
      }
    } else {
      // Every point coincides with a chosen centroid; take an unused index.
      std::vector<std::size_t> free;
      for (std::size_t i = 0; i < points.size(); ++i) {
        if (!taken[i]) free.push_back(i);
      }
      pick = free[rng.index(free.size())];
    }
    taken[pick] = true;
    centroids.push_back(points[pick]);
    for (std::size_t i = 0; i < points.size(); ++i) {
      d2[i] = std::min(d2[i], squared_distance(points[i], points[pick]));
    }
  }
  return centroids;
}

// Moves the point farthest from its centroid (taken from a cluster with
// more than one member) into each empty cluster.
void reseed_empty(const std::vector<Point>& points, std::vector<std::size_t>& assignments,
                  std::vector<Point>& centroids) {
  const std::size_t k = centroids.size();
  std::vector<std::size_t> counts(k, 0);
  for (auto a : assignments) ++counts[a];
  for (std::size_t c = 0; c < k; ++c) {
    if (counts[c] != 0) continue;
    std::size_t far = points.size();
    double far_d = -1.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (counts[assignments[i]] < 2) continue;
      const double d = squared_distance(points[i], centroids[assignments[i]]);
      if (d > far_d) {
        far_d = d;
        far = i;
      }
    }
    --counts[assignments[far]];
    assignments[far] = c;
    counts[c] = 1;
    centroids[c] = points[far];
  }
}

}  // namespace

KMeansResult kmeans(const std::vector<Point>& points, std::size_t k, std::uint64_t seed,
                    std::size_t max_iters) {
  if (k == 0) throw InvalidArgument("k must be >= 1");
  if (k > points.size()) throw InvalidArgument("k exceeds the number of points");
  const std::size_t dim = points.front().size();
  for (const auto& p : points) {
    if (p.size() != dim) throw InvalidArgument("k-means points differ in dimension");
  }

  Rng rng(seed);
  KMeansResult out;
  out.centroids = plus_plus_init(points, k, rng);
  std::vector<std::size_t> previous;
  const std::size_t iters = std::max<std::size_t>(max_iters, 1);
  for (std::size_t it = 0; it < iters; ++it) {
    std::vector<std::size_t> assignments(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
      assignments[i] = nearest(points[i], out.centroids);
    }
    reseed_empty(points, assignments, out.centroids);
    double inertia = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      inertia += squared_distance(points[i], out.centroids[assignments[i]]);
    }
    out.inertia_trace.push_back(inertia);
    out.iterations = it + 1;
    const bool converged = assignments == previous;
    previous = std::move(assignments);
    out.centroids = means(points, previous, k, out.centroids);
    if (converged) break;
  }
  out.assignments = std::move(previous);
  return out;
}

std::vector<ClusterSelection> select_exemplars(
    const FrequencyPartition& partition,
    const std::map<std::string, SentenceVector>& embeddings, const SelectionConfig& config,
    std::uint64_t seed) {
  if (config.per_cluster_target < 1) throw InvalidArgument("per_cluster_target must be >= 1");
  std::vector<ClusterSelection> out;
  for (const auto& [answer, members] : partition.high_freq) {
    std::vector<Point> points;
    points.reserve(members.size());
    for (const auto& r : members) {
      const auto it = embeddings.find(r.id);
      if (it == embeddings.end()) {
        throw InvalidArgument("missing embedding for record '" + r.id + "'");
      }
      Point p = it->second.values;
      const double n = l2_norm(p);
      if (n == 0.0) throw InvalidArgument("zero embedding for record '" + r.id + "'");
      for (double& v : p) v /= n;
      points.push_back(std::move(p));
    }
    const std::size_t n = members.size();
    const std::size_t k = std::clamp<std::size_t>(
        (n + config.per_cluster_target - 1) / config.per_cluster_target, 1, n);
    const auto km = kmeans(points, k, hash_string(answer, seed), config.max_iters);

    ClusterSelection sel;
    sel.answer = answer;
    sel.k = k;
    sel.centroids = km.centroids;
    for (std::size_t c = 0; c < k; ++c) {
      std::size_t best = n;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < n; ++i) {
        if (km.assignments[i] != c) continue;
        const double d = squared_distance(points[i], km.centroids[c]);
        if (d < best_d || (d == best_d && members[i].id < members[best].id)) {
          best_d = d;
          best = i;
        }
      }
      sel.chosen.push_back(members[best]);
    }
    out.push_back(std::move(sel));
  }
  return out;
}

}  // namespace armed
