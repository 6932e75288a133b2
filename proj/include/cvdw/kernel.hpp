#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cvdw {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Reduces t into [0, 2π).
double wrap_angle(double t);

/// Thrown when a link function is applied outside [-1, 1] (beyond the clamp
/// tolerance). Signals that the argument did not come from a unit-bounded u.
class DomainViolation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class KernelKind { bernoulli, analytic, identity };

/// Declarative description of a 2π-periodic convolution kernel.
///
/// A kernel is one of the Bernoulli kernels D_r, the analytic kernel K_β or
/// the identity (delta) kernel, optionally replaced by its zero-mean periodic
/// integral a number of times. Integrating D_r once gives D_{r+1}, and the
/// identity integrated once is D_1, so those cases are normalised on
/// construction; only analytic kernels carry a non-zero integration count.
class KernelSpec {
 public:
  static KernelSpec bernoulli(int r);
  static KernelSpec analytic(double beta, double tolerance = 1e-12);
  static KernelSpec identity();

  /// Zero-mean periodic integral of this kernel.
  KernelSpec integrated() const;

  /// Derivative of a Bernoulli kernel: D_{r-1} for r >= 2. D_1 has no kernel
  /// derivative in this family and is rejected.
  KernelSpec differentiated() const;

  KernelKind kind() const { return kind_; }
  /// Bernoulli order r (0 for the other kinds).
  int order() const { return order_; }
  double beta() const { return beta_; }
  int integrations() const { return integrations_; }
  double tolerance() const { return tolerance_; }

  /// D_r kernels (r >= 1) carry Property B; constants are then admissible in
  /// the class and the ⊥ 1 constraint applies.
  bool has_property_b() const { return kind_ == KernelKind::bernoulli; }

  std::string describe() const;

  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;

 private:
  KernelSpec() = default;

  KernelKind kind_ = KernelKind::identity;
  int order_ = 0;
  double beta_ = 0.0;
  int integrations_ = 0;
  double tolerance_ = 1e-12;
};

/// D_r(t) = 2 Σ cos(kt − πr/2)/k^r, evaluated as a piecewise polynomial
/// (scaled Bernoulli polynomial). D_1 returns the midpoint value 0 at t = 0.
double eval_D(int r, double t);

/// K_β(z) = 1 + 2 Σ cos(kz)/cosh(kβ), truncated once the geometric tail bound
/// Σ_{k>k0} 4e^{−kβ} drops below tol.
double eval_K(double beta, double z, double tol = 1e-12);

/// Number of cosine terms eval_K sums for (beta, tol).
int analytic_truncation(double beta, double tol);

/// Factor applied to e^{ikx} by convolution (1/2π)∫ G(x−t) f(t) dt.
/// For D_r this is (ik)^{−r}, for K_β it is 1/cosh(kβ).
std::complex<double> fourier_multiplier(const KernelSpec& G, int k);

/// Pointwise value G(t). The identity kernel has no pointwise value.
double eval_kernel(const KernelSpec& G, double t);

enum class LinkFunction { phi0, phi1 };

inline constexpr double clamp_tol = 1e-9;

/// φ0(z) = tan(πz/4), φ1(z) = z on [-1, 1].
double eval_link(LinkFunction phi, double z);
double eval_link_deriv(LinkFunction phi, double z);

std::string to_string(LinkFunction phi);

}  // namespace cvdw
