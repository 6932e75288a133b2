#include "doctest.h"

#include <cmath>
#include <vector>

#include "cvdw/extremal.hpp"
#include "cvdw/oscillation.hpp"
#include "support.hpp"

using namespace cvdw;

TEST_SUITE("oscillation") {
  TEST_CASE("sign changes of short vectors") {
    CHECK(sign_changes(std::vector<double>{1, -1, 1}) == 2);
    CHECK(sign_changes(std::vector<double>{1, 0, -1}) == 1);
    CHECK(sign_changes(std::vector<double>{1, 2, 3}) == 0);
    CHECK(cyclic_sign_changes(std::vector<double>{1, -1, 1, -1}) == 4);
    CHECK(cyclic_sign_changes(std::vector<double>{1, -1, 1}) == 2);
    CHECK(cyclic_sign_changes(std::vector<double>{0, 0, 3}) == 0);
    CHECK(max_cyclic_sign_changes(std::vector<double>{1, 0, -1}) == 2);
    CHECK(max_cyclic_sign_changes(std::vector<double>{1, 0, 1}) == 2);
    CHECK(max_cyclic_sign_changes(std::vector<double>{1, 0, 0, 1}) == 2);
    CHECK(max_cyclic_sign_changes(std::vector<double>{1, 0, 0, -1}) == 4);
    CHECK(max_cyclic_sign_changes(std::vector<double>{1, 0, 0, 0, -1, 0}) == 4);
    CHECK_THROWS(sign_changes(std::vector<double>{0, 0}));
    CHECK_THROWS(cyclic_sign_changes(std::vector<double>{0, 0, 0}));
  }

  TEST_CASE("sampled counts") {
    CHECK(sampled_Sc(testing::grid_of([](double t) { return std::cos(t); }, 1024)) == 2);
    CHECK(sampled_Sc(testing::grid_of([](double) { return 1.0; }, 64)) == 0);
    for (int n : {1, 3, 7}) {
      const auto xi = KnotVector::uniform(n);
      const auto g = testing::grid_of([&](double t) { return eval_h(xi, t) + 0.25 * std::sin(2 * n * t); }, 4096);
      CHECK(sampled_Sc(g) == 2 * n);
    }
    const auto rep = sampled_sign_report(testing::grid_of([](double t) { return std::sin(t) + 0.1; }, 4096));
    CHECK(rep.count == 2);
    REQUIRE(rep.crossings.size() == 2);
    CHECK(rep.crossings[0] == doctest::Approx(pi + std::asin(0.1)).epsilon(1e-3));
    // cos^2 touches zero: S_c misses it, the zero count does not
    const auto touch = testing::grid_of([](double t) { return std::cos(t) * std::cos(t); }, 1024);
    CHECK(sampled_Sc(touch) == 0);
    CHECK(sampled_Zc(touch) == 4);
  }

  TEST_CASE("analytic kernel preserves the sign count of h_n") {
    for (int n : {1, 2, 4}) {
      const ClassFunction f(KernelSpec::analytic(1.0), LinkFunction::phi1, 0.0,
                            StepFunction::from_knots(KnotVector::uniform(n)));
      CHECK(sampled_Sc(f.sample(8192)) == 2 * n);
    }
    const ClassFunction c(KernelSpec::analytic(1.0), LinkFunction::phi1, 0.0, StepFunction::constant(0.5));
    CHECK(sampled_Sc(c.sample()) == 0);
  }

  TEST_CASE("randomised CVD and Property B") {
    for (double beta : {0.5, 1.0, 2.0}) {
      const auto rep = check_cvd(KernelSpec::analytic(beta), 60, 17);
      CHECK(rep.violations == 0);
      CHECK(rep.trials == 60);
    }
    for (int r : {1, 2, 3}) CHECK(check_property_b(r, 60, 23).violations == 0);
  }

  TEST_CASE("mu property") {
    const auto phi = class_standard_function(ClassConfig::hardy(1, 1.0), 2).sample(2048);
    CHECK(check_mu_property(phi, phi).holds);
    auto half = phi;
    for (double& v : half.mutable_values()) v *= 0.5;
    CHECK(check_mu_property(half, phi).holds);
    const auto rep = check_mu_property(testing::grid_of([](double t) { return std::cos(3 * t); }, 2048),
                                       testing::grid_of([](double t) { return std::cos(t); }, 2048));
    CHECK_FALSE(rep.holds);
    CHECK(rep.changes > 1);
    CHECK(rep.interval_end != rep.interval_begin);
  }

  TEST_CASE("regularity") {
    CHECK(check_regular(testing::grid_of([](double t) { return std::cos(t); }, 1024), 1));
    CHECK_FALSE(check_regular(testing::grid_of([](double t) { return std::cos(t) + std::cos(2 * t); }, 1024), 1));
    CHECK_FALSE(check_regular(testing::grid_of([](double t) { return std::cos(t); }, 1024), 2));
    CHECK(check_regular(class_standard_function(ClassConfig::hardy(1, 1.0), 3).sample(), 3));
    for (const auto& cfg : {ClassConfig::sobolev(1), ClassConfig::sobolev(2), ClassConfig::achieser(2, 0.5)})
      for (int n : {1, 3, 6}) CHECK(check_regular(class_standard_function(cfg, n), n));
    CHECK_FALSE(check_regular(class_standard_function(ClassConfig::sobolev(2), 2), 3));
  }

  TEST_CASE("grid extrema") {
    const auto idx = grid_extrema(testing::grid_of([](double t) { return std::sin(2 * t); }, 256));
    CHECK(idx.size() == 4);
  }
}
