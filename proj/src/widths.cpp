#include "cvdw/widths.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/minima.hpp>
#include <fmt/format.h>
#include <gsl/gsl_sf_zeta.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "cvdw/analysis.hpp"
#include "cvdw/parallel.hpp"

namespace cvdw {

namespace {

using gauss20 = boost::math::quadrature::gauss<double, 20>;

// K_β ∗ h_n by its sine series, summed until the terms drop below 1e-18.
double smoothed_square_wave(int n, double beta, double s) {
  double acc = 0.0;
  for (int nu = 0;; ++nu) {
    const double k = (2.0 * nu + 1.0) * n;
    const double damp = 1.0 / std::cosh(k * beta);
    const double amp = 4.0 / pi * damp / (2.0 * nu + 1.0);
    if (amp < 1e-18) break;
    acc += amp * std::sin(k * s);
  }
  return acc;
}

// Φ_n evaluated pointwise without the FFT pipeline: the inner function is
// summed directly and the outer convolution is integrated over [t, t + 2π],
// where the kernel is smooth in the interior.
class DirectStandardFunction {
 public:
  DirectStandardFunction(const ClassConfig& cfg, int n) : cfg_(cfg), n_(n) {}

  double inner(double s) const {
    if (cfg_.beta == 0.0) return std::fmod(std::floor(wrap_angle(s) * n_ / pi), 2.0) == 0.0 ? 1.0 : -1.0;
    return eval_link(cfg_.phi, smoothed_square_wave(n_, cfg_.beta, s));
  }

  double operator()(double t) const {
    if (cfg_.G.kind() == KernelKind::identity) return inner(t);
    const int r = cfg_.G.order();
    auto integrand = [&](double s) { return eval_D(r, t - s) * inner(s); };
    std::vector<double> cuts{t};
    if (cfg_.beta == 0.0) {
      // knots jπ/n strictly inside (t, t + 2π)
      const double step = pi / n_;
      double k = std::floor(t / step) + 1.0;
      for (; k * step < t + two_pi; k += 1.0)
        if (k * step - t > 1e-14 && t + two_pi - k * step > 1e-14) cuts.push_back(k * step);
    } else {
      for (int p = 1; p < panels; ++p) cuts.push_back(t + two_pi * p / panels);
    }
    cuts.push_back(t + two_pi);
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) acc += gauss20::integrate(integrand, cuts[i], cuts[i + 1]);
    return acc / two_pi;
  }

 private:
  static constexpr int panels = 32;
  ClassConfig cfg_;
  int n_;
};

double direct_sup(const DirectStandardFunction& g, const ClassFunction& f) {
  auto absg = [&](double t) { return std::abs(g(t)); };
  double best = 0.0;
  for (double b : f.breakpoints()) best = std::max(best, absg(b));
  const auto ext = locate_extrema(f);
  std::vector<Extremum> top(ext.begin(), ext.end());
  std::sort(top.begin(), top.end(), [](const Extremum& a, const Extremum& b) { return std::abs(a.value) > std::abs(b.value); });
  if (top.size() > 2) top.resize(2);
  const double h = two_pi / static_cast<double>(f.grid_size());
  for (const auto& e : top) {
    const auto r = boost::math::tools::brent_find_minima([&](double t) { return -absg(t); }, e.t - h, e.t + h, 52);
    best = std::max(best, -r.second);
  }
  return best;
}

double direct_lq(const DirectStandardFunction& g, const ClassFunction& f, double q) {
  std::vector<double> cuts = f.breakpoints();
  const auto z = locate_zeros(f);
  cuts.insert(cuts.end(), z.begin(), z.end());
  for (double& c : cuts) c = wrap_angle(c);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(), [](double a, double b) { return b - a < 1e-13; }), cuts.end());
  if (cuts.size() > 1 && cuts.front() + two_pi - cuts.back() < 1e-13) cuts.pop_back();
  if (cuts.empty()) cuts.push_back(0.0);
  constexpr int panels = 8;
  auto integrand = [&](double t) { return std::pow(std::abs(g(t)), q); };
  double acc = 0.0;
  const bool graded = q != std::floor(q);
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    const double a = cuts[i];
    const double b = i + 1 < cuts.size() ? cuts[i + 1] : cuts.front() + two_pi;
    acc += gauss_panels(integrand, a, b, panels, graded);
  }
  return std::pow(acc, 1.0 / q);
}

double norm_of(const ClassFunction& f, double q) { return std::isinf(q) ? sup_norm(f) : lq_norm(f, q); }

void check_q(double q) {
  if (!(q >= 1.0)) throw std::invalid_argument("width norms need q >= 1");
}

}  // namespace

ClassConfig ClassTag::config() const {
  switch (family) {
    case ClassFamily::sobolev:
      if (beta != 0.0) throw std::invalid_argument("sobolev class takes no beta");
      return ClassConfig::sobolev(r);
    case ClassFamily::achieser:
      return ClassConfig::achieser(r, beta);
    case ClassFamily::hardy:
      return ClassConfig::hardy(r, beta);
  }
  throw std::invalid_argument("unknown class family");
}

std::string ClassTag::describe() const {
  if (family == ClassFamily::sobolev) return fmt::format("sobolev({})", r);
  return fmt::format("{}({}, {})", to_string(family), r, beta);
}

std::string to_string(ClassFamily family) {
  switch (family) {
    case ClassFamily::sobolev:
      return "sobolev";
    case ClassFamily::achieser:
      return "achieser";
    case ClassFamily::hardy:
      return "hardy";
  }
  return "?";
}

ClassFamily parse_family(const std::string& name) {
  if (name == "sobolev") return ClassFamily::sobolev;
  if (name == "achieser") return ClassFamily::achieser;
  if (name == "hardy") return ClassFamily::hardy;
  throw std::invalid_argument("unknown class '" + name + "'");
}

std::string to_string(WidthKind kind) {
  switch (kind) {
    case WidthKind::kolmogorov:
      return "kolmogorov";
    case WidthKind::linear:
      return "linear";
    case WidthKind::gelfand:
      return "gelfand";
    case WidthKind::information:
      return "information";
  }
  return "?";
}

double favard_oracle(int r) {
  if (r < 1) throw std::invalid_argument("favard_oracle needs r >= 1");
  const double s = r + 1.0;
  // Σ_j (2j+1)^{−s} = 2^{−s} ζ(s, 1/2); Σ_j (−1)^j (2j+1)^{−s} = 4^{−s} (ζ(s, 1/4) − ζ(s, 3/4))
  const double sum = r % 2 == 1 ? std::pow(2.0, -s) * gsl_sf_hzeta(s, 0.5)
                                : std::pow(4.0, -s) * (gsl_sf_hzeta(s, 0.25) - gsl_sf_hzeta(s, 0.75));
  return 4.0 / pi * sum;
}

double width_value(const ClassTag& tag, int n, double q, std::size_t N) {
  check_q(q);
  return norm_of(class_standard_function(tag.config(), n, N), q);
}

WidthEvaluation evaluate_width(const ClassTag& tag, int n, double q, std::size_t N) {
  check_q(q);
  const ClassConfig cfg = tag.config();
  const ClassFunction f = class_standard_function(cfg, n, N);
  WidthEvaluation ev;
  ev.value = norm_of(f, q);
  ev.method = f.closed_form() ? "closed form" : "spectral";
  const DirectStandardFunction g(cfg, n);
  ev.check_value = std::isinf(q) ? direct_sup(g, f) : direct_lq(g, f, q);
  ev.check_method = cfg.G.kind() == KernelKind::identity ? "series" : "quadrature";
  ev.defect = std::abs(ev.value - ev.check_value);
  return ev;
}

bool WidthReport::passed() const {
  return std::all_of(rows.begin(), rows.end(), [](const WidthRow& r) { return r.defect < r.tolerance; });
}

WidthReport width_table(const std::vector<ClassTag>& classes, const std::vector<int>& ns,
                        const std::vector<double>& qs, std::size_t N, double tolerance) {
  struct Job {
    ClassTag tag;
    int n;
    double q;
  };
  std::vector<Job> jobs;
  for (const auto& tag : classes) {
    const ClassConfig cfg = tag.config();
    for (int n : ns) {
      if (n < 1) throw std::invalid_argument("width_table needs n >= 1");
      for (double q : qs) {
        check_q(q);
        const bool known = std::isinf(q) || cfg.G.has_property_b() || tag.family == ClassFamily::achieser;
        if (!known) throw std::invalid_argument(fmt::format("no L_{} width statement for {}", q, tag.describe()));
        jobs.push_back({tag, n, q});
      }
    }
  }
  std::vector<WidthEvaluation> evals(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t i) { evals[i] = evaluate_width(jobs[i].tag, jobs[i].n, jobs[i].q, N); });

  WidthReport rep;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto& [tag, n, q] = jobs[i];
    const auto& ev = evals[i];
    const bool property_b = tag.config().G.has_property_b();
    for (WidthKind kind : {WidthKind::kolmogorov, WidthKind::linear, WidthKind::gelfand, WidthKind::information}) {
      for (int index : {2 * n - 1, 2 * n}) {
        WidthRow row;
        row.tag = tag;
        row.kind = kind;
        row.n = n;
        row.index = index;
        row.q = q;
        row.value = ev.value;
        row.method = ev.method;
        row.check_method = ev.check_method;
        row.defect = ev.defect;
        row.tolerance = tolerance;
        if (std::isinf(q)) {
          row.statement = tag.family == ClassFamily::sobolev ? "Cor 4.1" : "Thm 4.1";
        } else if (kind == WidthKind::gelfand) {
          row.statement = property_b ? "Thm 4.2" : "Rem 4.2";
        } else if (property_b) {
          row.exact = false;
          row.conjectured_exact = index == 2 * n;
          row.statement = "Thm 4.3";
        } else {
          continue;
        }
        rep.rows.push_back(std::move(row));
      }
    }
  }
  return rep;
}

}  // namespace cvdw
