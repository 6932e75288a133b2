#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "cvdw/periodic.hpp"
#include "cvdw/spectral.hpp"

namespace cvdw {

/// Non-increasing rearrangement r(f, ·) of |f| on [0, 2π]; value j carries
/// mass 2π/N and sits at t = (j + 1/2)·2π/N.
struct Rearrangement {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double spacing() const;
  double t(std::size_t j) const;
  /// ∫_0^{(j+1)h} r(f, t) dt.
  std::vector<double> cumulative() const;
};

Rearrangement rearrangement(const PeriodicGrid& f);

struct DominanceReport {
  bool holds = true;
  /// max over x of ∫_0^x r(f) − ∫_0^x r(g), and where it occurs.
  double max_excess = 0.0;
  double at = 0.0;
};

/// ∫_0^x r(f) ≤ ∫_0^x r(g) + tol at every grid point. Grids must match in size.
DominanceReport rearrangement_dominates(const PeriodicGrid& f, const PeriodicGrid& g, double tol = 1e-9);

/// (∫_0^{2π} |f|^q)^{1/q} by the periodic trapezoid rule on the samples.
double lq_norm(const PeriodicGrid& f, double q);
double lq_norm(const Rearrangement& r, double q);

struct NormEstimate {
  double value = 0.0;
  double error = 0.0;
};

/// ∫_a^b g by `panels` equal 20-point Gauss–Legendre panels. With `graded`
/// the two end panels are subdivided geometrically toward a and b, for
/// integrands like |x − a|^q that are only Hölder at the ends.
double gauss_panels(const std::function<double(double)>& g, double a, double b, int panels, bool graded);

/// L_q norm of a class function: the period is split at breakpoints and (for
/// q other than an even integer) at zeros, then each piece is integrated by
/// composite 20-point Gauss–Legendre; the error is the change on doubling the
/// panel count.
NormEstimate lq_norm_estimate(const ClassFunction& f, double q);
double lq_norm(const ClassFunction& f, double q);

/// max |f| by a grid scan followed by local Brent refinement.
double sup_norm(const ClassFunction& f);

/// Σ |f_{j+1} − f_j| including the wrap-around difference.
double total_variation(const PeriodicGrid& f);

/// Total variation from refined extrema: Σ |f(e_{k+1}) − f(e_k)|.
double total_variation(const ClassFunction& f);

/// (a_0, a_1, b_1, …, a_{n−1}, b_{n−1}) with a_j = (1/π)∫ f cos jt.
std::vector<double> fourier_information(const PeriodicGrid& f, int n);
std::vector<double> fourier_information(const FourierSeries& s, int n);

struct Extremum {
  double t = 0.0;
  double value = 0.0;
  bool maximum = false;
};

/// Local extrema of f: grid candidates on N points refined by Brent.
std::vector<Extremum> locate_extrema(const ClassFunction& f, std::size_t N = 0);

/// Sign changes of f located on an N-point grid and refined by bracketing.
std::vector<double> locate_zeros(const ClassFunction& f, std::size_t N = 0);

/// Largest |f(t + 2π/n) − f(t)| over N sample points.
double period_defect(const ClassFunction& f, int n, std::size_t N = 0);

/// max |f(t + π/n) + f(t)| over N sample points.
double antiperiodicity_defect(const ClassFunction& f, int n, std::size_t N = 0);

}  // namespace cvdw
