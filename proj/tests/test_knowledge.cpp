#include <doctest.h>

#include <cmath>

#include "armed/error.hpp"
#include "knowledge_fixtures.hpp"

using namespace armed;

namespace {

QARecord rec(std::string id, std::string answer) {
  return QARecord{std::move(id), "q", std::move(answer), {}, {}};
}

}  // namespace

TEST_CASE("frequency split examples") {
  std::vector<QARecord> rs;
  for (int i = 0; i < 6; ++i) rs.push_back(rec("y" + std::to_string(i), i % 2 ? "Yes" : " yes"));
  rs.push_back(rec("n0", "no"));
  rs.push_back(rec("n1", "NO"));
  const auto p = frequency_split(rs, 5);
  REQUIRE(p.high_freq.size() == 1);
  CHECK(p.high_freq.at("yes").size() == 6);
  CHECK(p.low_freq.size() == 2);

  const auto exact = frequency_split(rs, 6);
  CHECK(exact.high_freq.empty());
  CHECK(exact.low_freq.size() == 8);
  CHECK_THROWS_AS(frequency_split(rs, 0), InvalidArgument);
  CHECK(normalize_answer("  Left Lung\t") == "left lung");
}

TEST_CASE("frequency split is complete on fuzzed inputs") {
  Rng rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const auto rs = fixtures::random_records(rng, rng.index(60), 1 + rng.index(10));
    const auto p = frequency_split(rs, 1 + rng.index(8));
    CHECK(fixtures::partition_complete(rs, p));
  }
}

TEST_CASE("kmeans basic examples") {
  const std::vector<Point> one = {{0.0, 0.0}, {0.2, 0.0}};
  const auto single = kmeans(one, 1, 3);
  CHECK(single.centroids[0][0] == doctest::Approx(0.1));
  CHECK(single.assignments == std::vector<std::size_t>{0, 0});

  const std::vector<Point> pts = {{0, 0}, {1, 0}, {0, 1}, {5, 5}};
  const auto all = kmeans(pts, 4, 1);
  CHECK(all.inertia_trace.back() == 0.0);

  CHECK_THROWS_AS(kmeans(pts, 0, 1), InvalidArgument);
  CHECK_THROWS_AS(kmeans(pts, 5, 1), InvalidArgument);
  CHECK_THROWS_AS(kmeans({{0, 0}, {1}}, 1, 1), InvalidArgument);
}

TEST_CASE("kmeans finds the optimal two-partition of separated blobs") {
  Rng rng(88);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Point> pts;
    const std::size_t n = 4 + rng.index(7);
    for (std::size_t i = 0; i < n; ++i) {
      const double off = i % 2 ? 10.0 : -10.0;
      pts.push_back({off + rng.normal(0, 0.5), rng.normal(0, 0.5)});
    }
    double best = 1e300;
    for (std::size_t mask = 1; mask + 1 < (std::size_t{1} << n); ++mask) {
      double inertia = 0.0;
      for (int side = 0; side < 2; ++side) {
        Point c(2, 0.0);
        int cnt = 0;
        for (std::size_t i = 0; i < n; ++i)
          if (((mask >> i) & 1) == static_cast<std::size_t>(side)) {
            c[0] += pts[i][0];
            c[1] += pts[i][1];
            ++cnt;
          }
        c[0] /= cnt;
        c[1] /= cnt;
        for (std::size_t i = 0; i < n; ++i)
          if (((mask >> i) & 1) == static_cast<std::size_t>(side)) inertia += squared_distance(pts[i], c);
      }
      best = std::min(best, inertia);
    }
    const auto km = kmeans(pts, 2, rng.next_u64());
    CHECK(km.inertia_trace.back() == doctest::Approx(best).epsilon(1e-9));
  }
}

TEST_CASE("kmeans inertia never increases") {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Point> pts(5 + rng.index(40));
    for (auto& p : pts) p = {rng.normal(0, 1), rng.normal(0, 1), rng.normal(0, 1)};
    const auto km = kmeans(pts, 1 + rng.index(pts.size()), rng.next_u64());
    for (std::size_t i = 1; i < km.inertia_trace.size(); ++i)
      CHECK(km.inertia_trace[i] <= km.inertia_trace[i - 1] * (1 + 1e-12) + 1e-15);
  }
}

TEST_CASE("exemplar selection picks the member nearest each centroid") {
  Rng rng(31337);
  for (int trial = 0; trial < 100; ++trial) {
    const auto rs = fixtures::random_records(rng, 2 + rng.index(49), 1 + rng.index(3));
    const auto emb = fixtures::random_embeddings(rng, rs, 4);
    const auto part = frequency_split(rs, 1);
    SelectionConfig cfg;
    cfg.per_cluster_target = 1 + rng.index(6);
    const std::uint64_t seed = rng.next_u64();
    const auto sel = select_exemplars(part, emb, cfg, seed);
    REQUIRE(sel.size() == part.high_freq.size());
    for (const auto& s : sel) {
      const auto& members = part.high_freq.at(s.answer);
      const std::size_t n = members.size();
      CHECK(s.k == std::clamp<std::size_t>((n + cfg.per_cluster_target - 1) / cfg.per_cluster_target, 1, n));
      CHECK(s.chosen.size() == s.k);
      CHECK(fixtures::nearest_centroid_violations(s, members, emb, seed, cfg.max_iters) == 0);
    }
  }
}

TEST_CASE("exemplar ties go to the lowest id") {
  std::vector<QARecord> rs = {rec("b", "yes"), rec("a", "yes"), rec("c", "yes")};
  std::map<std::string, SentenceVector> emb;
  // a and b coincide; the one-cluster centroid is equidistant from them.
  emb["a"] = SentenceVector{{1.0, 0.0}};
  emb["b"] = SentenceVector{{1.0, 0.0}};
  emb["c"] = SentenceVector{{-1.0, 0.0}};
  SelectionConfig cfg;
  cfg.per_cluster_target = 5;
  const auto sel = select_exemplars(frequency_split(rs, 2), emb, cfg, 1);
  REQUIRE(sel.size() == 1);
  REQUIRE(sel[0].k == 1);
  CHECK(sel[0].chosen[0].id == "a");
}

TEST_CASE("exemplar selection is deterministic and checks embeddings") {
  Rng rng(17);
  const auto rs = fixtures::random_records(rng, 120, 4);
  const auto emb = fixtures::random_embeddings(rng, rs, 8);
  const auto part = frequency_split(rs, 5);
  const auto a = select_exemplars(part, emb, {}, 99);
  const auto b = select_exemplars(part, emb, {}, 99);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].chosen == b[i].chosen);
    CHECK(a[i].centroids == b[i].centroids);
  }
  auto missing = emb;
  missing.erase(part.high_freq.begin()->second.front().id);
  CHECK_THROWS_AS(select_exemplars(part, missing, {}, 99), InvalidArgument);
}
