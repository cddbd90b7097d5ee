#pragma once

#include <span>

namespace armed {

struct Moments {
  double mean = 0.0;
  double variance = 0.0;  // population (divisor N)
};

// Two-pass mean and population variance. Empty input yields zeros.
Moments moments(std::span<const double> values);

// Linear interpolation between closest ranks: position p * (n - 1) in the
// sorted sample. Requires a non-empty sample and p in [0, 1].
double quantile(std::span<const double> values, double p);

}  // namespace armed
