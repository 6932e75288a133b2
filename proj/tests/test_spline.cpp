#include "doctest.h"

#include <cmath>
#include <random>

#include "cvdw/oscillation.hpp"
#include "cvdw/spline.hpp"
#include "support.hpp"

using namespace cvdw;

namespace {

// Trapezoid sums of h_ξ·cos(kt), h_ξ·sin(kt) on N points, with the average of
// the one-sided limits at knots that sit on grid points.
std::pair<double, double> trapezoid_coefficient(const KnotVector& xi, int k, std::size_t N) {
  double a = 0.0, b = 0.0;
  const double h = two_pi / static_cast<double>(N);
  for (std::size_t j = 0; j < N; ++j) {
    const double t = h * static_cast<double>(j);
    const double v = 0.5 * (eval_h(xi, t) + eval_h(xi, wrap_angle(t - 1e-9)));
    a += v * std::cos(k * t);
    b += v * std::sin(k * t);
  }
  return {a * h / pi, b * h / pi};
}

}  // namespace

TEST_SUITE("spline") {
  TEST_CASE("uniform knots") {
    const auto xi = KnotVector::uniform(3);
    REQUIRE(xi.size() == 6);
    for (int j = 0; j < 6; ++j) CHECK(xi.knots()[static_cast<std::size_t>(j)] == doctest::Approx(j * pi / 3));
    for (double g : xi.gaps()) CHECK(g == doctest::Approx(pi / 3));
    CHECK(xi.pairs() == 3);
  }

  TEST_CASE("knot validation") {
    CHECK_THROWS(KnotVector({0.1, 0.2, 0.3}));
    CHECK_THROWS(KnotVector({0.3, 0.2}));
    CHECK_THROWS(KnotVector({0.1, 0.1 + 1e-13}));
    CHECK_THROWS(KnotVector({0.1, 7.0}));
    CHECK_THROWS(KnotVector::uniform(0));
    CHECK_NOTHROW(KnotVector({0.1, 0.1 + 1e-9}));
  }

  TEST_CASE("perfect spline values") {
    for (int n : {1, 2, 5}) {
      const auto xi = KnotVector::uniform(n);
      CHECK(eval_h(xi, 0.0) == 1.0);
      for (double t : {0.05, 0.4, 1.3, 2.9}) CHECK(eval_h(xi, wrap_angle(t + pi / n)) == -eval_h(xi, t));
    }
    const KnotVector xi({0.5, 1.0, 2.0, 4.0});
    CHECK(eval_h(xi, 0.2) == -1.0);
    CHECK(eval_h(xi, 0.5) == 1.0);
    CHECK(eval_h(xi, 1.5) == -1.0);
    CHECK(eval_h(xi, 3.0) == 1.0);
    CHECK(eval_h(xi, 5.0) == -1.0);
  }

  TEST_CASE("sampled sign count equals the knot count") {
    std::mt19937_64 rng(3);
    for (int m = 1; m <= 6; ++m) {
      const auto xi = testing::random_knots(rng, m);
      const auto g = testing::grid_of([&](double t) { return eval_h(xi, t); }, 8192);
      CHECK(sampled_Sc(g) == 2 * m);
    }
  }

  TEST_CASE("square wave coefficients") {
    for (int n : {1, 2, 3}) {
      const auto s = h_fourier(KnotVector::uniform(n), 40);
      CHECK(std::abs(s.mean) < 1e-15);
      for (int k = 1; k <= 40; ++k) {
        CHECK(std::abs(s.a(k)) < 1e-14);
        const bool odd_multiple = k % n == 0 && (k / n) % 2 == 1;
        const double expected = odd_multiple ? 4.0 / (pi * (k / n)) : 0.0;
        CHECK(s.b(k) == doctest::Approx(expected).epsilon(1e-13));
      }
    }
  }

  TEST_CASE("coefficients against extrapolated trapezoid quadrature") {
    // knots on grid points of the 2^16 grid so the midpoint convention applies
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> idx(1, 65535);
    for (int trial = 0; trial < 3; ++trial) {
      std::vector<double> k;
      while (k.size() < 4) {
        const double v = two_pi * (idx(rng) / 4 * 4) / 65536.0;
        if (std::none_of(k.begin(), k.end(), [v](double o) { return std::abs(o - v) < 1e-3; })) k.push_back(v);
      }
      std::sort(k.begin(), k.end());
      const KnotVector xi(k);
      const auto s = h_fourier(xi, 6);
      for (int f = 1; f <= 6; ++f) {
        const auto [a1, b1] = trapezoid_coefficient(xi, f, 1 << 16);
        const auto [a2, b2] = trapezoid_coefficient(xi, f, 1 << 14);
        CHECK(std::abs(s.a(f) - (16 * a1 - a2) / 15) < 1e-8);
        CHECK(std::abs(s.b(f) - (16 * b1 - b2) / 15) < 1e-8);
      }
    }
  }

  TEST_CASE("Parseval defect at K = 10^4") {
    std::mt19937_64 rng(5);
    const auto xi = testing::random_knots(rng, 3);
    const auto s = h_fourier(xi, 10000);
    double energy = s.mean * s.mean;
    for (int k = 1; k <= 10000; ++k) energy += 0.5 * (s.a(k) * s.a(k) + s.b(k) * s.b(k));
    CHECK(energy < 1.0);
    CHECK(1.0 - energy < 1e-3);
  }

  TEST_CASE("step functions") {
    const StepFunction f({0.0, 1.0, 3.0}, {0.5, -1.0, 0.25});
    CHECK(f(0.5) == 0.5);
    CHECK(f(2.0) == -1.0);
    CHECK(f(6.0) == 0.25);
    CHECK(f.mean() == doctest::Approx((0.5 * 1.0 - 2.0 + 0.25 * (two_pi - 3.0)) / two_pi));
    CHECK(f.sup_norm() == 1.0);
    CHECK(f.shifted_clipped(0.7)(0.5) == 1.0);
    CHECK(f.translated(1.0)(1.5) == 0.5);
    const auto s = f.fourier(2000);
    CHECK(s.mean == doctest::Approx(f.mean()));
    CHECK(s(2.0) == doctest::Approx(-1.0).epsilon(1e-3));
    CHECK(StepFunction::from_knots(KnotVector::uniform(2))(0.1) == 1.0);
  }
}
