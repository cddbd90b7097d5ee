#include <doctest.h>

#include <cmath>
#include <sstream>

#include "armed/adaptive.hpp"
#include "armed/error.hpp"
#include "armed/random.hpp"

using namespace armed;

TEST_CASE("adaptive config defaults") {
  const AdaptConfig cfg;
  CHECK(cfg.rho == 0.8);
  CHECK(cfg.l_max == 2000);
  CHECK(cfg.p == 0.5);
  CHECK(cfg.delta_max == 0.01);
  CHECK(cfg.t_min == 0.0);
  CHECK(cfg.t_max == 0.995);
  CHECK(cfg.eps == 1e-8);
  CHECK(cfg.alpha_pos == 5.0);
  CHECK(cfg.alpha_neg == 2.0);
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("config validation") {
  AdaptConfig c;
  c.t_min = 0.5;
  c.t_max = 0.4;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c = {};
  c.p = 1.0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c = {};
  c.delta_max = 0.0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c = {};
  c.l_max = 0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c = {};
  c.alpha_neg = 0.0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
}

TEST_CASE("filter_valid uses max(0, rho * threshold)") {
  const AdaptConfig cfg;
  ThresholdState s;
  s.threshold = 0.5;
  CHECK(filter_valid(std::vector<double>{0.9, 0.3}, s, cfg) == std::vector<double>{0.9});
  CHECK(filter_valid(std::vector<double>{0.4, 0.41}, s, cfg) == std::vector<double>{0.41});
  s.threshold = 0.0;
  CHECK(filter_valid(std::vector<double>{0.0, 0.2, -0.1, 0.7}, s, cfg) ==
        std::vector<double>{0.2, 0.7});
  CHECK(filter_valid(std::vector<double>{}, s, cfg).empty());
}

TEST_CASE("update_threshold moves toward the history median by at most delta_max") {
  AdaptConfig cfg;
  cfg.delta_max = 1.0;
  ThresholdState s;
  auto next = update_threshold(s, std::vector<double>{0.2, 0.4, 0.6, 0.8}, cfg);
  CHECK(next.threshold == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(next.step == 1);

  cfg.delta_max = 0.01;
  s.threshold = 0.30;
  s.history = {0.5};
  CHECK(update_threshold(s, {}, cfg).threshold == doctest::Approx(0.31).epsilon(1e-15));

  s.threshold = 0.994;
  s.history = {1.2};
  CHECK(update_threshold(s, {}, cfg).threshold == 0.995);

  s.threshold = 0.003;
  s.history = {-0.5};
  CHECK(update_threshold(s, {}, cfg).threshold == 0.0);
}

TEST_CASE("empty history freezes the threshold") {
  const AdaptConfig cfg;
  ThresholdState s;
  s.threshold = 0.25;
  const auto next = update_threshold(s, {}, cfg);
  CHECK(next.threshold == 0.25);
  CHECK(next.history.empty());
  CHECK(next.step == 1);
}

TEST_CASE("history is truncated to the newest l_max entries") {
  AdaptConfig cfg;
  cfg.l_max = 3;
  ThresholdState s;
  s = update_threshold(s, std::vector<double>{0.1, 0.2}, cfg);
  s = update_threshold(s, std::vector<double>{0.3, 0.4}, cfg);
  CHECK(s.history == std::deque<double>{0.2, 0.3, 0.4});
}

TEST_CASE("adapt_map reproduces hand-computed values") {
  const AdaptConfig cfg;
  CHECK(adapt_map(0.5, 0.5, cfg) == 0.5);
  CHECK(adapt_map(0.75, 0.5, cfg) == doctest::Approx(0.9933071484).epsilon(1e-9));
  CHECK(adapt_map(0.25, 0.5, cfg) == doctest::Approx(0.1192029262).epsilon(1e-9));
  CHECK(adapt_map(1.0, 0.0, cfg) == doctest::Approx(0.5 * (1 + std::tanh(5.0))));
  CHECK(adapt_map(-3.0, 0.5, cfg) == doctest::Approx(0.5 * (1 + std::tanh(-2.0))));
}

TEST_CASE("adapt_map properties") {
  const AdaptConfig cfg;
  Rng rng(99);
  for (int i = 0; i < 1000; ++i) {
    const double t = rng.uniform(cfg.t_min, cfg.t_max);
    CHECK(adapt_map(t, t, cfg) == 0.5);
    const double a = rng.uniform(-0.2, 1.2);
    const double b = rng.uniform(-0.2, 1.2);
    const double ma = adapt_map(a, t, cfg);
    const double mb = adapt_map(b, t, cfg);
    CHECK(ma >= 0.0);
    CHECK(ma <= 1.0);
    if (a <= b) CHECK(ma <= mb);
    const double d = rng.uniform(1e-4, 0.2) * (1 - t);
    CHECK(adapt_map(t + d, t, cfg) - 0.5 > 0.5 - adapt_map(t - d, t, cfg));
  }
}

TEST_CASE("adaptive_semantic combines both metrics against updated thresholds") {
  AdaptConfig cfg;
  ThresholdState sb;
  ThresholdState sc;
  sb.threshold = 0.5;
  sc.threshold = 0.5;
  sb.history = {0.25, 0.5, 0.5};
  sc.history = {0.25, 0.5, 0.5};
  // Adding 0.75 keeps the history median at 0.5.
  const std::vector<double> batch = {0.75, 0.25};
  const auto r = adaptive_semantic(batch, batch, sb, sc, 0.2, cfg);
  CHECK(r.state_bert.threshold == 0.5);
  CHECK(r.state_cos.threshold == 0.5);
  CHECK(r.rewards[0] == doctest::Approx(0.99331).epsilon(1e-5));
  CHECK(r.rewards[1] == doctest::Approx(0.11920).epsilon(1e-5));

  const auto degenerate = adaptive_semantic(std::vector<double>{0.5}, std::vector<double>{0.5},
                                            sb, sc, 0.2, cfg);
  CHECK(degenerate.rewards[0] == 0.5);

  const std::vector<double> cos = {0.9, 0.1};
  const auto only_cos = adaptive_semantic(batch, cos, sb, sc, 0.0, cfg);
  ThresholdState sc_copy = sc;
  const auto direct = adapt_batch(cos, sc_copy, cfg);
  CHECK(only_cos.rewards == direct.mapped);

  CHECK_THROWS_AS(adaptive_semantic(batch, std::vector<double>{0.1}, sb, sc, 0.2, cfg),
                  InvalidArgument);
}

TEST_CASE("mapping uses the post-update threshold") {
  AdaptConfig cfg;
  ThresholdState s;
  const std::vector<double> batch = {0.9, 0.9};
  const auto out = adapt_batch(batch, s, cfg);
  CHECK(out.threshold_used == 0.0);
  CHECK(out.threshold_after == doctest::Approx(0.01));
  CHECK(out.mapped[0] == doctest::Approx(adapt_map(0.9, 0.01, cfg)).epsilon(1e-15));
}

TEST_CASE("threshold invariants over a random replay") {
  AdaptConfig cfg;
  cfg.l_max = 50;
  ThresholdState s = ThresholdState::initial(cfg);
  Rng rng(17);
  for (int step = 0; step < 2000; ++step) {
    std::vector<double> batch(rng.index(12));
    for (double& x : batch) x = rng.uniform(-0.1, 1.1);
    const double before = s.threshold;
    const auto valid = filter_valid(batch, s, cfg);
    s = update_threshold(s, valid, cfg);
    CHECK(std::abs(s.threshold - before) <= cfg.delta_max + 1e-15);
    CHECK(s.threshold >= cfg.t_min);
    CHECK(s.threshold <= cfg.t_max);
    CHECK(s.history.size() <= cfg.l_max);
  }
}

TEST_CASE("state snapshot round trip is exact") {
  AdaptConfig cfg;
  ThresholdState s;
  s.threshold = 0.123456789;
  s.step = 42;
  s.history = {0.1, 1.0 / 3.0, 0.987654321};
  std::stringstream io;
  save_state(io, s, cfg);
  CHECK(io.str().rfind("armed-threshold-state 1\n", 0) == 0);
  const auto back = load_state(io);
  CHECK(back == s);

  std::stringstream bad("armed-threshold-state 2\n");
  CHECK_THROWS_AS(load_state(bad), ParseError);
  std::stringstream missing("armed-threshold-state 1\nthreshold=0x1p-1\n");
  CHECK_THROWS_AS(load_state(missing), ParseError);
}
