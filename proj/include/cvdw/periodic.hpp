#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace cvdw {

/// Real trigonometric series mean + Σ_{k=1..K} (a_k cos kt + b_k sin kt).
/// cos[k-1] and sin[k-1] hold the coefficients of frequency k.
struct FourierSeries {
  double mean = 0.0;
  std::vector<double> cos;
  std::vector<double> sin;

  FourierSeries() = default;
  explicit FourierSeries(int max_frequency, double mean_value = 0.0)
      : mean(mean_value), cos(static_cast<std::size_t>(max_frequency), 0.0), sin(cos) {}

  int max_frequency() const { return static_cast<int>(cos.size()); }
  double a(int k) const { return k <= max_frequency() ? cos[static_cast<std::size_t>(k - 1)] : 0.0; }
  double b(int k) const { return k <= max_frequency() ? sin[static_cast<std::size_t>(k - 1)] : 0.0; }

  /// Value at t (Clenshaw summation).
  double operator()(double t) const;

  /// Drops trailing frequencies whose coefficients are all below
  /// rel_tol · (largest coefficient magnitude).
  void trim(double rel_tol);
};

/// N uniform samples of a 2π-periodic function, sample j at t = 2πj/N.
class PeriodicGrid {
 public:
  PeriodicGrid() = default;
  /// N must be a power of two, N >= 4.
  explicit PeriodicGrid(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  double t(std::size_t j) const;
  double spacing() const;
  double operator[](std::size_t j) const { return values_[j]; }
  double& operator[](std::size_t j) { return values_[j]; }
  std::span<const double> values() const { return values_; }
  std::vector<double>& mutable_values() { return values_; }

  double max() const;
  double min() const;

 private:
  std::vector<double> values_;
};

bool is_power_of_two(std::size_t n);

}  // namespace cvdw
