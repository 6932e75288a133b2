#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "cvdw/analysis.hpp"
#include "cvdw/extremal.hpp"
#include "cvdw/oscillation.hpp"
#include "cvdw/widths.hpp"

using namespace cvdw;

namespace {

constexpr double inf = INFINITY;
constexpr std::uint64_t seed = 20240611;

struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back("violated: " + what);
    }
  }
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::vector<ClassTag> three_classes(int r, double beta) {
  return {ClassTag::sobolev(r), ClassTag::achieser(r, beta), ClassTag::hardy(r, beta)};
}

Outcome favard(std::size_t N) {
  Outcome out;
  Stopwatch clock;
  double worst = 0.0;
  for (int r = 1; r <= 4; ++r)
    for (int n = 1; n <= 8; ++n) {
      const double d = std::abs(width_value(ClassTag::sobolev(r), n, inf, N) - favard_oracle(r) / std::pow(n, r));
      worst = std::max(worst, d);
      out.require(d < 1e-8, fmt::format("r={} n={} defect={:.3g}", r, n, d));
    }
  const double secs = clock.seconds();
  out.require(secs < 5.0, fmt::format("runtime {:.2f} s", secs));
  out.detail = fmt::format("32 cases, worst defect {:.3g}, {:.2f} s", worst, secs);
  return out;
}

// Cosine series with the ±π/(2n) shift, as printed for the r = 0 Achieser case.
double printed_series(double beta, int n, double x, bool alternate_signs) {
  double acc = 0.0;
  for (int nu = 0;; ++nu) {
    const double k = (2.0 * nu + 1.0) * n;
    const double amp = 4.0 / pi / ((2.0 * nu + 1.0) * std::cosh(k * beta));
    if (amp < 1e-18) break;
    acc += (alternate_signs && nu % 2 == 1 ? -amp : amp) * std::cos(k * x);
  }
  return acc;
}

Outcome series_cross_check(std::size_t N) {
  Outcome out;
  double worst = 0.0, worst_corrected = 0.0;
  for (double beta : {0.5, 1.0, 2.0})
    for (int n : {1, 2, 4}) {
      const auto g = class_standard_function(ClassConfig::achieser(0, beta), n, N).sample();
      double best = inf, corrected = 0.0;
      for (double shift : {pi / (2 * n), -pi / (2 * n)}) {
        double d = 0.0;
        for (std::size_t j = 0; j < N; ++j) d = std::max(d, std::abs(g[j] - printed_series(beta, n, g.t(j) - shift, false)));
        best = std::min(best, d);
      }
      for (std::size_t j = 0; j < N; ++j)
        corrected = std::max(corrected, std::abs(g[j] - printed_series(beta, n, g.t(j) - pi / (2 * n), true)));
      worst = std::max(worst, best);
      worst_corrected = std::max(worst_corrected, corrected);
      out.require(best < 1e-8, fmt::format("beta={} n={} defect={:.3g}", beta, n, best));
      out.notes.push_back(fmt::format("beta={} n={}: printed series {:.3g}, alternating-sign series {:.3g}", beta, n,
                                      best, corrected));
    }
  out.detail = fmt::format("worst defect {:.3g} (alternating-sign series: {:.3g})", worst, worst_corrected);
  return out;
}

std::vector<ClassTag> configured_classes() {
  return {ClassTag::sobolev(1),        ClassTag::sobolev(2),      ClassTag::sobolev(3),
          ClassTag::achieser(0, 1.0),  ClassTag::achieser(1, 0.5), ClassTag::achieser(2, 1.0),
          ClassTag::hardy(0, 1.0),     ClassTag::hardy(1, 1.0),    ClassTag::hardy(2, 0.5)};
}

Outcome equioscillation_check(std::size_t N) {
  Outcome out;
  double gap = 0.0, anti = 0.0;
  int cases = 0;
  for (const auto& tag : configured_classes())
    for (int n = 1; n <= 6; ++n) {
      const auto rep = equioscillation(class_standard_function(tag.config(), n, N), n);
      gap = std::max(gap, rep.gap_error);
      anti = std::max(anti, rep.antiperiodicity);
      ++cases;
      out.require(rep.holds(n), fmt::format("{} n={}: {} extrema, gap error {:.3g}, alternating {}, antiperiodicity {:.3g}",
                                            tag.describe(), n, rep.extrema, rep.gap_error, rep.alternating,
                                            rep.antiperiodicity));
    }
  out.detail = fmt::format("{} cases, worst gap error {:.3g}, worst antiperiodicity {:.3g}", cases, gap, anti);
  return out;
}

Outcome l1_identity(std::size_t N) {
  Outcome out;
  double worst = 0.0, favard_worst = 0.0;
  for (int r : {1, 2})
    for (const auto& tag : three_classes(r, 1.0))
      for (int n = 1; n <= 4; ++n) {
        const auto id = l1_sup_identity(tag.config(), n, N);
        worst = std::max(worst, id.defect);
        out.require(id.defect < 1e-6, fmt::format("{} n={} defect={:.3g}", tag.describe(), n, id.defect));
        if (tag.family == ClassFamily::sobolev && r == 1) {
          const double d = std::abs(id.l1 - pi * pi / (2 * n));
          favard_worst = std::max(favard_worst, d);
          out.require(d < 1e-6, fmt::format("sobolev(1) n={} against pi^2/(2n): {:.3g}", n, d));
        }
      }
  out.detail = fmt::format("24 cases, worst defect {:.3g}; sobolev(1) against pi^2/(2n): {:.3g}", worst, favard_worst);
  return out;
}

SuiteOptions suite_options() {
  SuiteOptions opt;
  opt.trials = 100;
  opt.seed = seed;
  opt.tolerance = 1e-6;
  return opt;
}

std::vector<ClassTag> suite_classes() {
  std::vector<ClassTag> tags;
  for (int r : {1, 2}) {
    tags.push_back(ClassTag::sobolev(r));
    tags.push_back(ClassTag::achieser(r, 1.0));
    tags.push_back(ClassTag::hardy(r, 1.0));
  }
  return tags;
}

Outcome comparison_and_landau() {
  Outcome out;
  const auto opt = suite_options();
  int violations = 0, configs = 0;
  double slowest = 0.0;
  for (const auto& tag : suite_classes())
    for (int n : {1, 3}) {
      Stopwatch clock;
      const auto cmp = comparison_search(tag.config(), n, opt);
      const auto lk = landau_kolmogorov_check(tag.config(), n, opt);
      const double secs = clock.seconds();
      slowest = std::max(slowest, secs);
      ++configs;
      violations += cmp.violations + lk.violations;
      out.require(cmp.passed(), fmt::format("comparison {} n={}: {} violations, worst {:.3g} at trial {}", tag.describe(),
                                            n, cmp.violations, cmp.worst, cmp.worst_trial));
      out.require(lk.passed(), fmt::format("landau-kolmogorov {} n={}: {} violations, worst {:.3g} at trial {}",
                                           tag.describe(), n, lk.violations, lk.worst, lk.worst_trial));
      out.require(secs < 60.0, fmt::format("{} n={} took {:.1f} s", tag.describe(), n, secs));
    }
  out.detail = fmt::format("{} configs x 100 trials, {} violations, slowest config {:.2f} s", configs, violations, slowest);
  return out;
}

Outcome rearrangement_and_taikov() {
  Outcome out;
  const auto opt = suite_options();
  int violations = 0;
  double attained = 0.0;
  for (const auto& tag : suite_classes())
    for (int n : {1, 3}) {
      const auto rt = rearrangement_theorem_check(tag.config(), n, opt);
      violations += rt.violations;
      out.require(rt.passed(), fmt::format("rearrangement {} n={}: {} violations, worst {:.3g}", tag.describe(), n,
                                           rt.violations, rt.worst));
      for (double q : {1.0, 2.0, 5.0}) {
        const auto tk = taikov_check(tag.config(), n, q, opt);
        const double gap = std::abs(tk.extra - tk.reference);
        violations += tk.violations;
        attained = std::max(attained, gap);
        out.require(tk.passed(), fmt::format("taikov {} n={} q={}: {} violations, worst {:.3g}", tag.describe(), n, q,
                                             tk.violations, tk.worst));
        out.require(gap < 1e-6, fmt::format("taikov {} n={} q={}: candidate sup off by {:.3g}", tag.describe(), n, q, gap));
      }
    }
  out.detail = fmt::format("12 configs, {} violations, candidate sup within {:.3g} of the norm", violations, attained);
  return out;
}

Outcome knot_optimality() {
  Outcome out;
  double value_gap = 0.0, spread = 0.0, residual = 0.0, slowest = 0.0;
  for (const auto& tag : three_classes(2, 1.0))
    for (int n : {1, 2, 3})
      for (double q : {2.0, inf}) {
        Stopwatch clock;
        const auto cfg = tag.config();
        const auto best = minimize_knot_norm(cfg, n, q, seed);
        const double ref = width_value(tag, n, q);
        const auto lag = lagrange_residual_fitted(cfg, best.knots, best.a, std::isinf(q) ? 64.0 : q);
        const double gap = std::abs(best.value - ref);
        value_gap = std::max(value_gap, gap);
        spread = std::max(spread, best.gap_spread);
        residual = std::max(residual, lag.max_abs());
        slowest = std::max(slowest, clock.seconds());
        const auto where = fmt::format("{} n={} q={}", tag.describe(), n, q);
        out.require(best.starts == 8, where + fmt::format(": {} starts", best.starts));
        out.require(gap < 1e-4, where + fmt::format(": value off by {:.3g}", gap));
        out.require(best.gap_spread < 1e-3, where + fmt::format(": gap spread {:.3g}", best.gap_spread));
        out.require(lag.max_abs() < 1e-4, where + fmt::format(": lagrange residual {:.3g}", lag.max_abs()));
      }
  out.detail = fmt::format("18 searches, value gap {:.3g}, gap spread {:.3g}, lagrange residual {:.3g}, slowest {:.2f} s",
                           value_gap, spread, residual, slowest);
  return out;
}

Outcome cvd() {
  Outcome out;
  int violations = 0;
  for (double beta : {0.5, 1.0, 2.0}) {
    const auto rep = check_cvd(KernelSpec::analytic(beta), 200, seed);
    violations += rep.violations;
    out.require(rep.violations == 0, fmt::format("K_beta beta={}: {} violations, first at trial {}", beta, rep.violations,
                                                 rep.worst_trial));
  }
  for (int r : {1, 2, 3}) {
    const auto rep = check_property_b(r, 200, seed);
    violations += rep.violations;
    out.require(rep.violations == 0,
                fmt::format("D_{}: {} violations, first at trial {}", r, rep.violations, rep.worst_trial));
  }
  out.detail = fmt::format("6 kernels x 200 trials, {} violations", violations);
  return out;
}

Outcome rearrangement_oracle() {
  Outcome out;
  constexpr std::size_t N = 4096;
  std::vector<double> c(N);
  for (std::size_t j = 0; j < N; ++j) c[j] = std::cos(two_pi * static_cast<double>(j) / N);
  const auto r = rearrangement(PeriodicGrid(c));
  double cos_defect = 0.0;
  for (std::size_t j = 0; j < N; ++j) cos_defect = std::max(cos_defect, std::abs(r.values[j] - std::cos(r.t(j) / 4)));
  out.require(cos_defect < two_pi / N, fmt::format("cos defect {:.3g}", cos_defect));

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> coef(0.0, 1.0);
  std::uniform_int_distribution<int> degree(1, 16);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    FourierSeries s(degree(rng), coef(rng));
    for (int k = 0; k < s.max_frequency(); ++k) {
      s.cos[static_cast<std::size_t>(k)] = coef(rng);
      s.sin[static_cast<std::size_t>(k)] = coef(rng);
    }
    const auto f = synthesize(s, N);
    const auto rf = rearrangement(f);
    for (double q : {1.0, 2.0, 5.0}) {
      const double d = std::abs(lq_norm(rf, q) - lq_norm(f, q));
      worst = std::max(worst, d);
      out.require(d < 1e-6, fmt::format("trial {} q={}: {:.3g}", trial, q, d));
    }
  }
  out.detail = fmt::format("cos defect {:.3g} (bound {:.3g}); 50 inputs, worst norm defect {:.3g}", cos_defect,
                           two_pi / N, worst);
  return out;
}

Outcome grid_independence() {
  constexpr std::size_t N = 8192;
  Outcome out;
  const std::pair<const char*, std::function<Outcome(std::size_t)>> parts[] = {
      {"1", favard}, {"2", series_cross_check}, {"3", equioscillation_check}, {"4", l1_identity}};
  std::vector<std::string> failed;
  for (const auto& [name, run] : parts) {
    const auto sub = run(N);
    out.notes.push_back(fmt::format("criterion {} at N={}: {} ({})", name, N, sub.pass ? "PASS" : "FAIL", sub.detail));
    if (!sub.pass) {
      out.pass = false;
      failed.push_back(name);
    }
  }
  out.detail = failed.empty() ? "criteria 1-4 pass at N=8192" : fmt::format("failing at N=8192: {}", fmt::join(failed, ","));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"Favard reduction", [] { return favard(default_grid_size); }},
      {"cosine series cross-check", [] { return series_cross_check(default_grid_size); }},
      {"equioscillation", [] { return equioscillation_check(default_grid_size); }},
      {"L1 and sup identity", [] { return l1_identity(default_grid_size); }},
      {"comparison and Landau-Kolmogorov", comparison_and_landau},
      {"rearrangement domination and Taikov", rearrangement_and_taikov},
      {"knot optimality", knot_optimality},
      {"CVD property", cvd},
      {"rearrangement oracle", rearrangement_oracle},
      {"grid independence", grid_independence},
  };
  constexpr int count = std::size(criteria);
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const int k = std::atoi(argv[i]);
    if (k < 1 || k > count) {
      fmt::print(stderr, "usage: acceptance [criterion 1-{}]...\n", count);
      return 2;
    }
    selected.push_back(k);
  }
  if (selected.empty())
    for (int k = 1; k <= count; ++k) selected.push_back(k);

  bool all = true;
  for (int k : selected) {
    const auto& [name, run] = criteria[k - 1];
    Outcome out;
    try {
      out = run();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = fmt::format("exception: {}", e.what());
    }
    fmt::print("criterion {:2} {}: {}: {}\n", k, out.pass ? "PASS" : "FAIL", name, out.detail);
    for (const auto& note : out.notes) fmt::print("    {}\n", note);
    std::fflush(stdout);
    all = all && out.pass;
  }
  return all ? 0 : 1;
}
