#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cvdw/kernel.hpp"
#include "cvdw/periodic.hpp"
#include "cvdw/spectral.hpp"

namespace cvdw {

/// S⁻(x): sign changes with zero entries discarded. Throws on an all-zero x.
int sign_changes(std::span<const double> x);

/// S_c⁻(x): cyclic sign changes, anchored at a nonzero entry. Always even.
int cyclic_sign_changes(std::span<const double> x);

/// S_c⁺(x): cyclic sign changes maximised over ±1 assignments to zero entries.
int max_cyclic_sign_changes(std::span<const double> x);

struct SignCountReport {
  int count = 0;
  double epsilon = 0.0;
  /// Abscissae (midpoints between samples) where the sign flips.
  std::vector<double> crossings;
};

/// Default threshold: 1e-8 times the sample range (or 1e-300 for a constant).
double default_epsilon(const PeriodicGrid& f);

/// Cyclic sign changes of the samples with |f| < eps treated as zero.
/// eps <= 0 selects default_epsilon.
SignCountReport sampled_sign_report(const PeriodicGrid& f, double eps = 0.0);
int sampled_Sc(const PeriodicGrid& f, double eps = 0.0);
/// Zero count S_c⁺ of the thresholded samples.
int sampled_Zc(const PeriodicGrid& f, double eps = 0.0);

struct CvdReport {
  int trials = 0;
  int violations = 0;
  /// Largest sampled S_c(G ∗ h) and the S_c(h) of that trial.
  int max_output_count = 0;
  int input_count_at_max = 0;
  int worst_trial = -1;
};

/// Randomised test of S_c(G ∗ h) <= S_c(h) for piecewise-constant h with at
/// most max_pieces pieces. The output count is taken on an N-point grid.
CvdReport check_cvd(const KernelSpec& G, int trials, std::uint64_t seed, int max_pieces = 10,
                    std::size_t N = 16384);

/// Randomised test of S_c(a + D_r ∗ φ) <= S_c(φ) for random zero-mean
/// trigonometric polynomials φ and random constants a.
CvdReport check_property_b(int r, int trials, std::uint64_t seed, int max_degree = 8, std::size_t N = 8192);

struct MuReport {
  bool holds = true;
  /// First failing shift (in radians) and monotone interval [begin, end].
  double shift = 0.0;
  double interval_begin = 0.0;
  double interval_end = 0.0;
  int changes = 0;
};

/// μ-property of f with respect to the regular function ψ: on each monotone
/// interval of ψ and for each of `shifts` equally spaced α, ψ(t) − f(t + α)
/// changes sign at most once, from + to − where ψ decreases and from − to +
/// where it increases. Both grids must have the same size.
MuReport check_mu_property(const PeriodicGrid& f, const PeriodicGrid& psi, int shifts = 64);

/// 2π/n-regularity: period 2π/n (Fourier coefficients at frequencies not
/// divisible by n below 1e-8) and exactly one increasing and one decreasing
/// run per period on the grid.
bool check_regular(const PeriodicGrid& psi, int n);

/// Same test on a class function: period defect below 1e-10 of the range and
/// exactly 2n refined extrema per period, alternating.
bool check_regular(const ClassFunction& psi, int n);

/// Grid indices of the local extrema of a periodic sample sequence.
std::vector<std::size_t> grid_extrema(const PeriodicGrid& f);

}  // namespace cvdw
