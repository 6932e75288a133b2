#include "doctest.h"

#include <cmath>
#include <random>

#include "cvdw/analysis.hpp"
#include "cvdw/extremal.hpp"
#include "cvdw/spectral.hpp"
#include "support.hpp"

using namespace cvdw;

namespace {

double series_defect(const FourierSeries& a, const FourierSeries& b) {
  double m = std::abs(a.mean - b.mean);
  const int K = std::max(a.max_frequency(), b.max_frequency());
  for (int k = 1; k <= K; ++k) m = std::max({m, std::abs(a.a(k) - b.a(k)), std::abs(a.b(k) - b.b(k))});
  return m;
}

// (4/π) Σ sin((2ν+1)nx) / ((2ν+1) cosh((2ν+1)nβ))
double smoothed_square_wave(int n, double beta, double x) {
  double acc = 0.0;
  for (int nu = 0; nu < 200; ++nu) {
    const double k = (2.0 * nu + 1.0) * n;
    acc += std::sin(k * x) / ((2.0 * nu + 1.0) * std::cosh(k * beta));
  }
  return 4.0 / pi * acc;
}

}  // namespace

TEST_SUITE("spectral") {
  TEST_CASE("analysis of simple grids") {
    const auto s = analyze(testing::grid_of([](double t) { return std::cos(t); }, 8));
    CHECK(s.a(1) == doctest::Approx(1.0));
    CHECK(std::abs(s.mean) < 1e-15);
    for (int k = 2; k <= s.max_frequency(); ++k) CHECK(std::abs(s.a(k)) < 1e-15);
    for (int k = 1; k <= s.max_frequency(); ++k) CHECK(std::abs(s.b(k)) < 1e-15);
    const auto c = analyze(testing::grid_of([](double) { return 2.5; }, 16));
    CHECK(c.mean == doctest::Approx(2.5));
    for (int k = 1; k <= c.max_frequency(); ++k) CHECK(std::abs(c.a(k)) + std::abs(c.b(k)) < 1e-15);
  }

  TEST_CASE("round trip on band-limited series") {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 20; ++trial) {
      const auto s = testing::random_series(rng, 100);
      CHECK(series_defect(analyze(synthesize(s, 256)), s) < 1e-12);
      const auto g = synthesize(s, 512);
      CHECK(testing::max_abs_diff(synthesize(analyze(g), 512), g) < 1e-12);
    }
  }

  TEST_CASE("Clenshaw evaluation agrees with synthesis") {
    std::mt19937_64 rng(2);
    const auto s = testing::random_series(rng, 30);
    const auto g = synthesize(s, 128);
    for (std::size_t j = 0; j < 128; j += 7) CHECK(s(g.t(j)) == doctest::Approx(g[j]).epsilon(1e-12));
  }

  TEST_CASE("convolution") {
    CHECK(series_defect(convolve(KernelSpec::bernoulli(2), FourierSeries(4, 1.0)), FourierSeries(4)) == 0.0);
    const auto k = convolve(KernelSpec::analytic(0.7), h_fourier(KnotVector::uniform(2), 64));
    for (double x : {0.1, 0.9, 2.2, 4.0}) CHECK(k(x) == doctest::Approx(smoothed_square_wave(2, 0.7, x)).epsilon(1e-13));
    const ClassFunction f(KernelSpec::bernoulli(1), LinkFunction::phi1, 0.0, StepFunction::from_knots(KnotVector::uniform(1)));
    CHECK(sup_norm(f) == doctest::Approx(pi / 2).epsilon(1e-12));
  }

  TEST_CASE("convolution is commutative and associative") {
    std::mt19937_64 rng(4);
    const KernelSpec A = KernelSpec::analytic(0.4), B = KernelSpec::bernoulli(3), C = KernelSpec::analytic(1.3);
    for (int trial = 0; trial < 10; ++trial) {
      const auto f = testing::random_series(rng, 40);
      CHECK(series_defect(convolve(A, convolve(B, f)), convolve(B, convolve(A, f))) < 1e-10);
      CHECK(series_defect(convolve(A, convolve(C, f)), convolve(C, convolve(A, f))) < 1e-10);
    }
  }

  TEST_CASE("convolution matches direct quadrature of the defining integral") {
    std::mt19937_64 rng(6);
    const auto f = testing::random_series(rng, 12);
    const std::size_t N = 4096;
    const auto fg = synthesize(f, N);
    for (const auto& [G, tol] : {std::pair{KernelSpec::analytic(0.8), 1e-8}, std::pair{KernelSpec::bernoulli(1), 1e-4}}) {
      const auto s = convolve(G, f);
      // x on the grid puts the jump of D_1 on a node, where it takes the mean value
      for (double x : {fg.t(300), fg.t(1700), fg.t(2900)}) {
        double acc = 0.0;
        for (std::size_t j = 0; j < N; ++j) acc += eval_kernel(G, wrap_angle(x - fg.t(j))) * fg[j];
        CHECK(std::abs(acc / N - s(x)) < tol);
      }
    }
  }

  TEST_CASE("correlation uses the conjugate multiplier") {
    std::mt19937_64 rng(8);
    const auto f = testing::random_series(rng, 10);
    const auto c = correlate(KernelSpec::bernoulli(1), f);
    // (1/2π)∫ D_1(x − y) f(x) dx is convolution with D_1(−·) = −D_1
    CHECK(series_defect(c, convolve(KernelSpec::bernoulli(1), f)) > 1e-3);
    auto neg = convolve(KernelSpec::bernoulli(1), f);
    for (auto& v : neg.cos) v = -v;
    for (auto& v : neg.sin) v = -v;
    CHECK(series_defect(c, neg) < 1e-14);
  }

  TEST_CASE("link composition") {
    const auto g = testing::grid_of([](double t) { return 0.9 * std::sin(t); }, 64);
    CHECK(testing::max_abs_diff(compose_link(LinkFunction::phi1, g), g) == 0.0);
    const auto one = compose_link(LinkFunction::phi0, testing::grid_of([](double) { return 1.0; }, 16));
    CHECK(one.min() == doctest::Approx(1.0));
    const auto c = compose_link(LinkFunction::phi0, g);
    for (std::size_t j = 0; j < 32; ++j) CHECK(c[j + 32] == doctest::Approx(-c[j]).epsilon(1e-14));
    CHECK_THROWS_AS(compose_link(LinkFunction::phi0, testing::grid_of([](double t) { return 1.1 * std::sin(t); }, 64)),
                    DomainViolation);
  }

  TEST_CASE("differentiation and periodic integration") {
    FourierSeries s(3);
    s.sin[0] = 1.0;
    const auto d = differentiate(s);
    CHECK(d.a(1) == doctest::Approx(1.0));
    CHECK(std::abs(d.b(1)) < 1e-15);
    FourierSeries c(3);
    c.cos[0] = 1.0;
    const auto i = periodic_integral(c);
    CHECK(i.b(1) == doctest::Approx(1.0));
    std::mt19937_64 rng(9);
    const auto z = testing::random_series(rng, 25, true);
    CHECK(series_defect(differentiate(periodic_integral(z)), z) < 1e-14);
    CHECK_THROWS(periodic_integral(FourierSeries(3, 0.1)));
  }

  TEST_CASE("standard functions are antiperiodic and equioscillate") {
    for (const auto& cfg : {ClassConfig::sobolev(1), ClassConfig::sobolev(3), ClassConfig::achieser(1, 0.5),
                            ClassConfig::hardy(2, 1.0), ClassConfig::achieser(0, 1.0)})
      for (int n : {1, 2, 5}) {
        const auto f = class_standard_function(cfg, n);
        CHECK(antiperiodicity_defect(f, n) < 1e-10);
        const auto eq = equioscillation(f, n);
        CHECK(eq.extrema == 2 * n);
        CHECK(eq.gap_error < 1e-6);
        CHECK(eq.alternating);
        CAPTURE(cfg.describe());
        CAPTURE(n);
        CHECK(eq.level_spread < 1e-10);
      }
  }

  TEST_CASE("linear pipeline with identity kernel is the smoothed square wave") {
    for (double beta : {0.5, 1.0, 2.0})
      for (int n : {1, 2, 4}) {
        const auto f = standard_function(KernelSpec::identity(), LinkFunction::phi1, beta, KnotVector::uniform(n));
        const auto g = f.sample();
        double worst = 0.0;
        for (std::size_t j = 0; j < g.size(); ++j)
          worst = std::max(worst, std::abs(g[j] - smoothed_square_wave(n, beta, g.t(j))));
        CHECK(worst < 1e-12);
      }
  }

  TEST_CASE("integrated kernel gives the periodic integral") {
    for (const auto& cfg : {ClassConfig::hardy(1, 1.0), ClassConfig::achieser(2, 0.5), ClassConfig::sobolev(2)}) {
      const auto f = class_standard_function(cfg, 2);
      const auto F = f.with_kernel(cfg.G.integrated());
      auto s = f.series();
      s.mean = 0.0;
      const auto expected = synthesize(periodic_integral(s), 4096);
      const auto got = F.sample(4096);
      double shift = 0.0;
      for (std::size_t j = 0; j < 4096; ++j) shift += got[j] - expected[j];
      shift /= 4096.0;
      double worst = 0.0;
      for (std::size_t j = 0; j < 4096; ++j) worst = std::max(worst, std::abs(got[j] - expected[j] - shift));
      CHECK(worst < (cfg.beta > 0.0 ? 1e-8 : 1e-6));
    }
  }

  TEST_CASE("derivative of a class function") {
    const auto f = class_standard_function(ClassConfig::hardy(2, 1.0), 2);
    const auto d = synthesize(differentiate(f.series()), 4096);
    CHECK(testing::max_abs_diff(f.sample_derivative(4096), d) < 1e-10);
    const auto p = class_standard_function(ClassConfig::sobolev(2), 1);
    // D_2 ∗ h_1 has derivative D_1 ∗ h_1, the triangle wave of height π/2
    CHECK(p.derivative(0.0) == doctest::Approx(-pi / 2).epsilon(1e-12));
  }

  TEST_CASE("scaling and constants") {
    const auto f = class_standard_function(ClassConfig::achieser(1, 1.0), 1);
    CHECK(f.scaled(0.5).value(0.3) == doctest::Approx(0.5 * f.value(0.3)));
    CHECK(f.with_constant(0.2).value(0.3) == doctest::Approx(f.value(0.3) + 0.2));
    CHECK(std::abs(f.inner_mean()) < 1e-14);
  }

  TEST_CASE("nonlinear link rejects sources that leave the unit ball") {
    FourierSeries u(2);
    u.cos[0] = 1.5;
    CHECK_THROWS(ClassFunction(KernelSpec::bernoulli(1), LinkFunction::phi0, 0.1, u));
  }
}
