#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "cvdw/kernel.hpp"
#include "cvdw/periodic.hpp"
#include "cvdw/spline.hpp"

namespace testing {

inline cvdw::PeriodicGrid grid_of(const std::function<double(double)>& f, std::size_t N) {
  std::vector<double> v(N);
  for (std::size_t j = 0; j < N; ++j) v[j] = f(cvdw::two_pi * static_cast<double>(j) / static_cast<double>(N));
  return cvdw::PeriodicGrid(std::move(v));
}

// Generators for property tests. Each takes the generator by reference so a
// test case draws a reproducible stream from one seed.

inline cvdw::FourierSeries random_series(std::mt19937_64& rng, int K, bool zero_mean = false) {
  std::normal_distribution<double> c(0.0, 1.0);
  cvdw::FourierSeries s(K, zero_mean ? 0.0 : c(rng));
  for (int k = 0; k < K; ++k) {
    s.cos[static_cast<std::size_t>(k)] = c(rng);
    s.sin[static_cast<std::size_t>(k)] = c(rng);
  }
  return s;
}

inline cvdw::KnotVector random_knots(std::mt19937_64& rng, int m, double min_gap = 1e-2) {
  std::uniform_real_distribution<double> pos(0.0, cvdw::two_pi);
  for (;;) {
    std::vector<double> k(static_cast<std::size_t>(2 * m));
    for (double& x : k) x = pos(rng);
    std::sort(k.begin(), k.end());
    bool ok = k.back() - k.front() < cvdw::two_pi - min_gap;
    for (std::size_t i = 1; i < k.size(); ++i) ok = ok && k[i] - k[i - 1] > min_gap;
    if (ok) return cvdw::KnotVector(std::move(k));
  }
}

// Vector with entries in {−2, …, 2}, zeros included, not all zero.
inline std::vector<double> random_sign_vector(std::mt19937_64& rng, std::size_t len) {
  std::uniform_int_distribution<int> d(-2, 2);
  for (;;) {
    std::vector<double> x(len);
    for (double& v : x) v = d(rng);
    if (std::any_of(x.begin(), x.end(), [](double v) { return v != 0.0; })) return x;
  }
}

inline double max_abs_diff(const cvdw::PeriodicGrid& a, const cvdw::PeriodicGrid& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

}  // namespace testing
