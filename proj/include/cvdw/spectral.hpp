#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "cvdw/kernel.hpp"
#include "cvdw/periodic.hpp"
#include "cvdw/spline.hpp"

namespace cvdw {

inline constexpr std::size_t default_grid_size = 4096;

/// Discrete Fourier analysis of one period; frequencies 1 … N/2−1 (the
/// Nyquist term is dropped).
FourierSeries analyze(const PeriodicGrid& g);

/// Samples s at N points; frequencies at or above N/2 are discarded.
PeriodicGrid synthesize(const FourierSeries& s, std::size_t N);

/// G ∗ f with the (1/2π)∫ normalisation: frequency k scaled by the kernel
/// multiplier, phase included.
FourierSeries convolve(const KernelSpec& G, const FourierSeries& f);

/// y ↦ (1/2π)∫ G(x − y) f(x) dx, i.e. convolution with the conjugate multiplier.
FourierSeries correlate(const KernelSpec& G, const FourierSeries& f);

PeriodicGrid compose_link(LinkFunction phi, const PeriodicGrid& g);

FourierSeries differentiate(const FourierSeries& s);

/// Zero-mean antiderivative. Rejects |mean| > 1e-9.
FourierSeries periodic_integral(const FourierSeries& s);

/// Source u of a class function: piecewise constant, or a trigonometric
/// polynomial with ‖u‖_∞ ≤ 1.
using Source = std::variant<StepFunction, FourierSeries>;

/// f = a + ρ · G ∗ φ(K_β ∗ u); for β = 0 the middle stage is skipped and
/// f = a + ρ · G ∗ u.
///
/// With β > 0 the inner function φ(K_β ∗ u) is analytic, so it is computed
/// pointwise on the grid and re-analysed; everything downstream is spectral.
/// With β = 0 and a step-function source the output is a perfect spline and is
/// evaluated in closed form from the Bernoulli kernels, which avoids the slow
/// decay of its Fourier coefficients.
class ClassFunction {
 public:
  ClassFunction(KernelSpec G, LinkFunction phi, double beta, Source u, double a = 0.0,
                std::size_t grid_size = default_grid_size);

  const KernelSpec& kernel() const { return G_; }
  LinkFunction link() const { return phi_; }
  double beta() const { return beta_; }
  const Source& source() const { return u_; }
  double constant() const { return a_; }
  double scale() const { return scale_; }
  std::size_t grid_size() const { return N_; }

  double value(double t) const;
  double derivative(double t) const;
  double operator()(double t) const { return value(t); }

  PeriodicGrid sample(std::size_t N = 0) const;
  PeriodicGrid sample_derivative(std::size_t N = 0) const;

  /// Fourier series of f (exact coefficients for closed-form functions,
  /// truncated at N/2 − 1).
  const FourierSeries& series() const { return output_; }
  /// Series of φ(K_β ∗ u) (or of u when β = 0).
  const FourierSeries& inner_series() const { return inner_; }
  /// Mean of φ(K_β ∗ u); zero is the ⊥ 1 class constraint.
  double inner_mean() const { return inner_.mean; }

  /// True when values come from the closed-form perfect-spline formula.
  bool closed_form() const { return closed_form_; }
  /// Points where f may fail to be smooth (source breaks for closed form).
  std::vector<double> breakpoints() const;

  ClassFunction scaled(double rho) const;
  ClassFunction with_constant(double a) const;
  /// Same source and link, different outer kernel (e.g. the integrated kernel).
  ClassFunction with_kernel(const KernelSpec& G) const;

 private:
  void build();

  KernelSpec G_;
  LinkFunction phi_;
  double beta_;
  Source u_;
  double a_;
  double scale_ = 1.0;
  std::size_t N_;
  bool closed_form_ = false;
  // closed form: jumps of u at its breaks, divided by 2π
  std::vector<double> jump_pos_;
  std::vector<double> jump_size_;
  FourierSeries inner_;
  FourierSeries output_;
  FourierSeries output_deriv_;
};

using StandardFunction = ClassFunction;

/// a + G ∗ φ(K_β ∗ h_ξ). With ξ = uniform(n) and a = 0 this is the standard
/// function Φ_n, antiperiodic with half-period π/n.
ClassFunction standard_function(const KernelSpec& G, LinkFunction phi, double beta,
                                const KnotVector& xi, std::size_t N = default_grid_size,
                                double a = 0.0);

}  // namespace cvdw
