#include "cvdw/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace cvdw {

namespace {

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

using RealBuffer = std::unique_ptr<double, FftwFree>;
using ComplexBuffer = std::unique_ptr<fftw_complex, FftwFree>;

struct PlanPair {
  fftw_plan forward;
  fftw_plan backward;
};

// FFTW's planner is not thread-safe; execution on fresh arrays is.
const PlanPair& plans_for(std::size_t N) {
  static std::mutex mtx;
  static std::map<std::size_t, PlanPair> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(N);
  if (it != cache.end()) return it->second;
  RealBuffer in(fftw_alloc_real(N));
  ComplexBuffer out(fftw_alloc_complex(N / 2 + 1));
  const int n = static_cast<int>(N);
  PlanPair p{fftw_plan_dft_r2c_1d(n, in.get(), out.get(), FFTW_ESTIMATE),
             fftw_plan_dft_c2r_1d(n, out.get(), in.get(), FFTW_ESTIMATE)};
  return cache.emplace(N, p).first->second;
}

void check_size(std::size_t N) {
  if (N < 4 || !is_power_of_two(N)) throw std::invalid_argument("grid size must be a power of two >= 4");
}

FourierSeries apply_multiplier(const KernelSpec& G, const FourierSeries& f, bool conjugate) {
  FourierSeries out(f.max_frequency(), f.mean * fourier_multiplier(G, 0).real());
  for (int k = 1; k <= f.max_frequency(); ++k) {
    const auto m = fourier_multiplier(G, k);
    const double mr = m.real();
    const double mi = conjugate ? -m.imag() : m.imag();
    const auto i = static_cast<std::size_t>(k - 1);
    out.cos[i] = mr * f.cos[i] + mi * f.sin[i];
    out.sin[i] = mr * f.sin[i] - mi * f.cos[i];
  }
  return out;
}

FourierSeries truncated(const FourierSeries& s, int K) {
  if (s.max_frequency() <= K) return s;
  FourierSeries out = s;
  out.cos.resize(static_cast<std::size_t>(K));
  out.sin.resize(static_cast<std::size_t>(K));
  return out;
}

constexpr double trim_tol = 1e-16;

}  // namespace

FourierSeries analyze(const PeriodicGrid& g) {
  const std::size_t N = g.size();
  check_size(N);
  const auto& plans = plans_for(N);
  RealBuffer in(fftw_alloc_real(N));
  ComplexBuffer out(fftw_alloc_complex(N / 2 + 1));
  std::copy(g.values().begin(), g.values().end(), in.get());
  fftw_execute_dft_r2c(plans.forward, in.get(), out.get());
  const double inv = 1.0 / static_cast<double>(N);
  const int K = static_cast<int>(N / 2) - 1;
  FourierSeries s(K, out.get()[0][0] * inv);
  for (int k = 1; k <= K; ++k) {
    s.cos[static_cast<std::size_t>(k - 1)] = 2.0 * out.get()[k][0] * inv;
    s.sin[static_cast<std::size_t>(k - 1)] = -2.0 * out.get()[k][1] * inv;
  }
  return s;
}

PeriodicGrid synthesize(const FourierSeries& s, std::size_t N) {
  check_size(N);
  const auto& plans = plans_for(N);
  ComplexBuffer in(fftw_alloc_complex(N / 2 + 1));
  RealBuffer out(fftw_alloc_real(N));
  auto* c = in.get();
  for (std::size_t k = 0; k <= N / 2; ++k) c[k][0] = c[k][1] = 0.0;
  c[0][0] = s.mean;
  const int K = std::min(s.max_frequency(), static_cast<int>(N / 2) - 1);
  for (int k = 1; k <= K; ++k) {
    c[k][0] = 0.5 * s.cos[static_cast<std::size_t>(k - 1)];
    c[k][1] = -0.5 * s.sin[static_cast<std::size_t>(k - 1)];
  }
  fftw_execute_dft_c2r(plans.backward, c, out.get());
  return PeriodicGrid(std::vector<double>(out.get(), out.get() + N));
}

FourierSeries convolve(const KernelSpec& G, const FourierSeries& f) { return apply_multiplier(G, f, false); }

FourierSeries correlate(const KernelSpec& G, const FourierSeries& f) { return apply_multiplier(G, f, true); }

PeriodicGrid compose_link(LinkFunction phi, const PeriodicGrid& g) {
  std::vector<double> v(g.values().begin(), g.values().end());
  for (double& x : v) x = eval_link(phi, x);
  return PeriodicGrid(std::move(v));
}

FourierSeries differentiate(const FourierSeries& s) {
  FourierSeries d(s.max_frequency(), 0.0);
  for (int k = 1; k <= s.max_frequency(); ++k) {
    const auto i = static_cast<std::size_t>(k - 1);
    d.cos[i] = k * s.sin[i];
    d.sin[i] = -k * s.cos[i];
  }
  return d;
}

FourierSeries periodic_integral(const FourierSeries& s) {
  if (std::abs(s.mean) > 1e-9) throw std::invalid_argument("periodic_integral requires a zero-mean series");
  FourierSeries p(s.max_frequency(), 0.0);
  for (int k = 1; k <= s.max_frequency(); ++k) {
    const auto i = static_cast<std::size_t>(k - 1);
    p.cos[i] = -s.sin[i] / k;
    p.sin[i] = s.cos[i] / k;
  }
  return p;
}

ClassFunction::ClassFunction(KernelSpec G, LinkFunction phi, double beta, Source u, double a,
                             std::size_t grid_size)
    : G_(G), phi_(phi), beta_(beta), u_(std::move(u)), a_(a), N_(grid_size) {
  if (!(beta_ >= 0.0) || !std::isfinite(beta_)) throw std::invalid_argument("beta must be finite and >= 0");
  check_size(N_);
  build();
}

void ClassFunction::build() {
  const int K = static_cast<int>(N_ / 2) - 1;
  const auto* step = std::get_if<StepFunction>(&u_);
  FourierSeries source = step ? step->fourier(K) : truncated(std::get<FourierSeries>(u_), K);

  if (beta_ > 0.0) {
    FourierSeries smoothed = convolve(KernelSpec::analytic(beta_), source);
    if (phi_ == LinkFunction::phi1) {
      // φ1 is the identity; still enforce the unit-bound domain check
      PeriodicGrid g = synthesize(smoothed, N_);
      for (double v : g.values()) eval_link(phi_, v);
      inner_ = std::move(smoothed);
    } else {
      inner_ = analyze(compose_link(phi_, synthesize(smoothed, N_)));
    }
    inner_.trim(trim_tol);
  } else {
    inner_ = std::move(source);
  }

  closed_form_ = step && beta_ == 0.0 && G_.kind() != KernelKind::analytic;
  if (closed_form_) {
    jump_pos_.clear();
    jump_size_.clear();
    const auto lv = step->levels();
    for (std::size_t i = 0; i < step->pieces(); ++i) {
      const double prev = lv[i == 0 ? step->pieces() - 1 : i - 1];
      if (lv[i] == prev) continue;
      jump_pos_.push_back(step->breaks()[i]);
      jump_size_.push_back((lv[i] - prev) / two_pi);
    }
  }

  output_ = convolve(G_, inner_);
  output_.mean += a_;
  if (!closed_form_) output_.trim(trim_tol);
  output_deriv_ = differentiate(output_);
}

double ClassFunction::value(double t) const {
  if (!closed_form_) return output_(t);
  if (G_.kind() == KernelKind::identity) return a_ + scale_ * std::get<StepFunction>(u_)(t);
  const int p = G_.order();
  double acc = 0.0;
  for (std::size_t i = 0; i < jump_pos_.size(); ++i) acc += jump_size_[i] * eval_D(p + 1, t - jump_pos_[i]);
  return a_ + scale_ * acc;
}

double ClassFunction::derivative(double t) const {
  if (!closed_form_) return output_deriv_(t);
  if (G_.kind() == KernelKind::identity) return 0.0;
  const int p = G_.order();
  double acc = 0.0;
  for (std::size_t i = 0; i < jump_pos_.size(); ++i) acc += jump_size_[i] * eval_D(p, t - jump_pos_[i]);
  return scale_ * acc;
}

PeriodicGrid ClassFunction::sample(std::size_t N) const {
  if (N == 0) N = N_;
  check_size(N);
  if (!closed_form_) return synthesize(output_, N);
  std::vector<double> v(N);
  for (std::size_t j = 0; j < N; ++j) v[j] = value(two_pi * static_cast<double>(j) / static_cast<double>(N));
  return PeriodicGrid(std::move(v));
}

PeriodicGrid ClassFunction::sample_derivative(std::size_t N) const {
  if (N == 0) N = N_;
  check_size(N);
  if (!closed_form_) return synthesize(output_deriv_, N);
  std::vector<double> v(N);
  for (std::size_t j = 0; j < N; ++j) v[j] = derivative(two_pi * static_cast<double>(j) / static_cast<double>(N));
  return PeriodicGrid(std::move(v));
}

std::vector<double> ClassFunction::breakpoints() const {
  if (!closed_form_) return {};
  return jump_pos_;
}

ClassFunction ClassFunction::scaled(double rho) const {
  ClassFunction c = *this;
  c.scale_ *= rho;
  c.a_ *= rho;
  auto scale_series = [rho](FourierSeries& s) {
    s.mean *= rho;
    for (double& x : s.cos) x *= rho;
    for (double& x : s.sin) x *= rho;
  };
  scale_series(c.output_);
  scale_series(c.output_deriv_);
  return c;
}

ClassFunction ClassFunction::with_constant(double a) const {
  ClassFunction c = *this;
  c.output_.mean += a - a_;
  c.a_ = a;
  return c;
}

ClassFunction ClassFunction::with_kernel(const KernelSpec& G) const {
  ClassFunction c(G, phi_, beta_, u_, 0.0, N_);
  return c.scaled(scale_);
}

ClassFunction standard_function(const KernelSpec& G, LinkFunction phi, double beta, const KnotVector& xi,
                                std::size_t N, double a) {
  return ClassFunction(G, phi, beta, StepFunction::from_knots(xi), a, N);
}

}  // namespace cvdw
