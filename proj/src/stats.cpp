#include "armed/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "armed/error.hpp"

namespace armed {

Moments moments(std::span<const double> values) {
  Moments m;
  if (values.empty()) return m;
  // A constant sample has zero spread even when sum / n rounds.
  if (std::all_of(values.begin(), values.end(), [&](double v) { return v == values[0]; })) {
    m.mean = values[0];
    return m;
  }
  const auto n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  m.mean = sum / n;
  double ss = 0.0;
  for (double v : values) ss += (v - m.mean) * (v - m.mean);
  m.variance = ss / n;
  return m;
}

double quantile(std::span<const double> values, double p) {
  if (values.empty()) throw InvalidArgument("quantile of empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("quantile fraction outside [0,1]");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace armed
