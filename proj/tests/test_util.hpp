#pragma once

// Shared helpers for the test suite: an independent artanh oracle (power
// series with Richardson-free convergence), field comparison utilities, and
// tolerance helpers.

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "pfmc/grid.hpp"

namespace pfmc_test {

// artanh by its power series artanh(s) = sum s^(2k+1)/(2k+1), summed until
// the term underflows relative to the total. Independent of std::atanh.
inline double artanh_series(double s) {
  double term = s, total = 0.0;
  const double s2 = s * s;
  for (int k = 0; k < 100000; ++k) {
    const double add = term / (2 * k + 1);
    total += add;
    if (std::abs(add) < 1e-18 * std::abs(total)) break;
    term *= s2;
  }
  return total;
}

template <int D>
double max_abs_diff(const pfmc::ScalarField<D>& a, const pfmc::ScalarField<D>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.v.size(); ++i) m = std::max(m, std::abs(a.v[i] - b.v[i]));
  return m;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline std::mt19937_64 rng(std::uint64_t seed = 12345) { return std::mt19937_64(seed); }

}  // namespace pfmc_test
