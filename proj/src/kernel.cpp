#include "cvdw/kernel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fmt/format.h>
#include <vector>

namespace cvdw {

namespace {

constexpr int max_bernoulli_order = 32;

// Coefficients of D_r as a polynomial in s = t − π on [−π, π). Built by
// repeated zero-mean antidifferentiation starting from D_1 = −s.
const std::vector<std::vector<long double>>& bernoulli_table() {
  static const auto table = [] {
    std::vector<std::vector<long double>> polys(max_bernoulli_order + 1);
    polys[1] = {0.0L, -1.0L};
    const long double pi_l = std::numbers::pi_v<long double>;
    for (int r = 1; r < max_bernoulli_order; ++r) {
      const auto& p = polys[r];
      std::vector<long double> q(p.size() + 1, 0.0L);
      for (std::size_t k = 0; k < p.size(); ++k) q[k + 1] = p[k] / static_cast<long double>(k + 1);
      // mean of s^k over [−π, π] is π^k/(k+1) for even k, 0 for odd k
      long double mean = 0.0L;
      long double pi_pow = 1.0L;
      for (std::size_t k = 0; k < q.size(); ++k) {
        if (k % 2 == 0) mean += q[k] * pi_pow / static_cast<long double>(k + 1);
        pi_pow *= pi_l;
      }
      q[0] = -mean;
      polys[r + 1] = std::move(q);
    }
    return polys;
  }();
  return table;
}

double sech(double x) {
  const double e = std::exp(-std::abs(x));
  return 2.0 * e / (1.0 + e * e);
}

}  // namespace

double wrap_angle(double t) {
  double w = std::fmod(t, two_pi);
  if (w < 0.0) w += two_pi;
  if (w >= two_pi) w = 0.0;
  return w;
}

KernelSpec KernelSpec::bernoulli(int r) {
  if (r < 1) throw std::invalid_argument("Bernoulli kernel D_r requires r >= 1");
  if (r > max_bernoulli_order) throw std::invalid_argument("Bernoulli kernel order too large");
  KernelSpec k;
  k.kind_ = KernelKind::bernoulli;
  k.order_ = r;
  return k;
}

KernelSpec KernelSpec::analytic(double beta, double tolerance) {
  if (!(beta > 0.0)) throw std::invalid_argument("analytic kernel K_beta requires beta > 0");
  if (!(tolerance > 0.0)) throw std::invalid_argument("kernel tolerance must be positive");
  KernelSpec k;
  k.kind_ = KernelKind::analytic;
  k.beta_ = beta;
  k.tolerance_ = tolerance;
  return k;
}

KernelSpec KernelSpec::identity() { return KernelSpec{}; }

KernelSpec KernelSpec::integrated() const {
  switch (kind_) {
    case KernelKind::identity:
      return bernoulli(1);
    case KernelKind::bernoulli:
      return bernoulli(order_ + 1);
    case KernelKind::analytic: {
      KernelSpec k = *this;
      ++k.integrations_;
      return k;
    }
  }
  return *this;
}

KernelSpec KernelSpec::differentiated() const {
  if (kind_ == KernelKind::bernoulli && order_ >= 2) return bernoulli(order_ - 1);
  if (kind_ == KernelKind::analytic && integrations_ > 0) {
    KernelSpec k = *this;
    --k.integrations_;
    return k;
  }
  throw std::invalid_argument("kernel " + describe() + " has no kernel derivative");
}

std::string KernelSpec::describe() const {
  switch (kind_) {
    case KernelKind::identity:
      return "Identity";
    case KernelKind::bernoulli:
      return fmt::format("D_{}", order_);
    case KernelKind::analytic:
      if (integrations_ == 0) return fmt::format("K_{}", beta_);
      return fmt::format("I^{}(K_{})", integrations_, beta_);
  }
  return "?";
}

double eval_D(int r, double t) {
  if (r < 1) throw std::invalid_argument("eval_D requires r >= 1");
  if (r > max_bernoulli_order) throw std::invalid_argument("eval_D order too large");
  const double w = wrap_angle(t);
  if (r == 1 && w == 0.0) return 0.0;
  const auto& p = bernoulli_table()[r];
  const long double s = static_cast<long double>(w) - std::numbers::pi_v<long double>;
  long double acc = 0.0L;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * s + *it;
  return static_cast<double>(acc);
}

int analytic_truncation(double beta, double tol) {
  if (!(beta > 0.0)) throw std::invalid_argument("K_beta requires beta > 0");
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  // tail after k0 terms: 4 e^{-(k0+1)β} / (1 − e^{-β})
  const double denom = -std::expm1(-beta);
  const double k0 = std::ceil(std::log(4.0 / (tol * denom)) / beta) - 1.0;
  return std::max(0, static_cast<int>(k0));
}

double eval_K(double beta, double z, double tol) {
  const int k0 = analytic_truncation(beta, tol);
  double acc = 0.0;
  for (int k = k0; k >= 1; --k) acc += std::cos(k * z) * sech(k * beta);
  return 1.0 + 2.0 * acc;
}

std::complex<double> fourier_multiplier(const KernelSpec& G, int k) {
  if (k < 0) throw std::invalid_argument("fourier_multiplier requires k >= 0");
  switch (G.kind()) {
    case KernelKind::identity:
      return {1.0, 0.0};
    case KernelKind::bernoulli: {
      if (k == 0) return {0.0, 0.0};
      // (ik)^{-r} = (−i)^r / k^r
      static constexpr std::array<std::complex<double>, 4> minus_i_pow{
          std::complex<double>{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
      return minus_i_pow[G.order() % 4] / std::pow(static_cast<double>(k), G.order());
    }
    case KernelKind::analytic: {
      if (k == 0) return G.integrations() == 0 ? std::complex<double>{1.0, 0.0} : std::complex<double>{};
      std::complex<double> m{sech(k * G.beta()), 0.0};
      for (int j = 0; j < G.integrations(); ++j) m /= std::complex<double>{0.0, static_cast<double>(k)};
      return m;
    }
  }
  return {};
}

double eval_kernel(const KernelSpec& G, double t) {
  switch (G.kind()) {
    case KernelKind::identity:
      throw std::invalid_argument("the identity kernel has no pointwise value");
    case KernelKind::bernoulli:
      return eval_D(G.order(), t);
    case KernelKind::analytic: {
      if (G.integrations() == 0) return eval_K(G.beta(), t, G.tolerance());
      const int k0 = analytic_truncation(G.beta(), G.tolerance());
      double acc = 0.0;
      for (int k = k0; k >= 1; --k) {
        const auto m = fourier_multiplier(G, k);
        acc += m.real() * std::cos(k * t) - m.imag() * std::sin(k * t);
      }
      return 2.0 * acc;
    }
  }
  return 0.0;
}

namespace {

double clamp_unit(double z) {
  if (!std::isfinite(z) || std::abs(z) > 1.0 + clamp_tol)
    throw DomainViolation(fmt::format("link argument {} outside [-1, 1]", z));
  return std::clamp(z, -1.0, 1.0);
}

}  // namespace

double eval_link(LinkFunction phi, double z) {
  const double x = clamp_unit(z);
  if (phi == LinkFunction::phi1) return x;
  return std::tan(pi * x / 4.0);
}

double eval_link_deriv(LinkFunction phi, double z) {
  const double x = clamp_unit(z);
  if (phi == LinkFunction::phi1) return 1.0;
  const double c = std::cos(pi * x / 4.0);
  return pi / (4.0 * c * c);
}

std::string to_string(LinkFunction phi) { return phi == LinkFunction::phi0 ? "phi0" : "phi1"; }

}  // namespace cvdw
