#pragma once

#include <span>
#include <vector>

#include "cvdw/periodic.hpp"

namespace cvdw {

/// Even number of strictly increasing knots ξ_1 < … < ξ_2m in [0, 2π).
class KnotVector {
 public:
  /// Knots closer than this are treated as a collapsed interval and rejected.
  static constexpr double min_separation = 1e-12;

  explicit KnotVector(std::vector<double> knots);

  /// ξ_j = (j−1)π/n, j = 1..2n.
  static KnotVector uniform(int n);

  /// Knots ξ_1 = offset, ξ_{j+1} = ξ_j + gaps_j. The gaps must be positive
  /// and sum to 2π (the last one closes the cycle).
  static KnotVector from_gaps(std::span<const double> gaps, double offset = 0.0);

  std::span<const double> knots() const { return knots_; }
  std::size_t size() const { return knots_.size(); }
  /// m, half the number of knots.
  int pairs() const { return static_cast<int>(knots_.size() / 2); }
  /// Cyclic gaps ξ_{j+1} − ξ_j, with ξ_{2m+1} = ξ_1 + 2π.
  std::vector<double> gaps() const;

 private:
  std::vector<double> knots_;
};

/// h_ξ(t) = (−1)^j on [ξ_{j−1}, ξ_j) with ξ_0 = 0, ξ_{2m+1} = 2π; right-limit
/// value at a knot.
double eval_h(const KnotVector& xi, double t);

/// Piecewise-constant 2π-periodic function: level[i] on [breaks[i], breaks[i+1]),
/// the last piece wrapping around to breaks[0] + 2π.
class StepFunction {
 public:
  StepFunction(std::vector<double> breaks, std::vector<double> levels);

  /// The ±1 perfect spline h_ξ.
  static StepFunction from_knots(const KnotVector& xi);
  static StepFunction constant(double level);

  std::span<const double> breaks() const { return breaks_; }
  std::span<const double> levels() const { return levels_; }
  std::size_t pieces() const { return levels_.size(); }
  /// Start and end of piece i; end may exceed 2π for the wrapping piece.
  double piece_begin(std::size_t i) const { return breaks_[i]; }
  double piece_end(std::size_t i) const;

  /// Right-limit value at t.
  double operator()(double t) const;
  double mean() const;
  double sup_norm() const;

  StepFunction scaled(double factor) const;
  /// Levels shifted by delta and clipped to [-1, 1].
  StepFunction shifted_clipped(double delta) const;
  /// Same function translated: g(t) = f(t − shift).
  StepFunction translated(double shift) const;

  /// Exact Fourier coefficients through frequency K.
  FourierSeries fourier(int K) const;

 private:
  std::vector<double> breaks_;
  std::vector<double> levels_;
};

/// Exact Fourier coefficients of h_ξ through frequency K.
FourierSeries h_fourier(const KnotVector& xi, int K);

}  // namespace cvdw
