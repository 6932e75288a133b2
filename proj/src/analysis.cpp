#include "cvdw/analysis.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

#include "cvdw/oscillation.hpp"

namespace cvdw {

namespace {

void check_q(double q) {
  if (!(q >= 1.0) || !std::isfinite(q)) throw std::invalid_argument("lq_norm needs finite q >= 1");
}

double powered_sum(std::span<const double> v, double q, double& scale) {
  scale = 0.0;
  for (double x : v) scale = std::max(scale, std::abs(x));
  if (scale == 0.0) return 0.0;
  double acc = 0.0;
  for (double x : v) acc += std::pow(std::abs(x) / scale, q);
  return acc;
}

bool even_integer(double q) { return q == std::floor(q) && std::fmod(q, 2.0) == 0.0; }

// Maximiser of g on [lo, hi] by Brent's method.
std::pair<double, double> brent_max(const std::function<double(double)>& g, double lo, double hi) {
  const auto r = boost::math::tools::brent_find_minima([&](double t) { return -g(t); }, lo, hi, 52);
  return {r.first, -r.second};
}

std::size_t resolve_size(const ClassFunction& f, std::size_t N) { return N == 0 ? f.grid_size() : N; }

}  // namespace

double gauss_panels(const std::function<double(double)>& g, double a, double b, int panels, bool graded) {
  using gauss20 = boost::math::quadrature::gauss<double, 20>;
  panels = std::max(panels, graded ? 2 : 1);
  const double w = (b - a) / panels;
  double acc = 0.0;
  for (int p = graded ? 1 : 0; p < (graded ? panels - 1 : panels); ++p)
    acc += gauss20::integrate(g, a + p * w, a + (p + 1) * w);
  if (graded) {
    constexpr int levels = 16;
    double d = w;
    for (int k = 0; k < levels; ++k, d *= 0.5) {
      acc += gauss20::integrate(g, a + 0.5 * d, a + d);
      acc += gauss20::integrate(g, b - d, b - 0.5 * d);
    }
    acc += gauss20::integrate(g, a, a + d);
    acc += gauss20::integrate(g, b - d, b);
  }
  return acc;
}

double Rearrangement::spacing() const { return two_pi / static_cast<double>(values.size()); }

double Rearrangement::t(std::size_t j) const { return (static_cast<double>(j) + 0.5) * spacing(); }

std::vector<double> Rearrangement::cumulative() const {
  std::vector<double> c(values.size());
  const double h = spacing();
  double acc = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j) {
    acc += values[j] * h;
    c[j] = acc;
  }
  return c;
}

Rearrangement rearrangement(const PeriodicGrid& f) {
  Rearrangement r;
  r.values.assign(f.values().begin(), f.values().end());
  for (double& v : r.values) v = std::abs(v);
  std::sort(r.values.begin(), r.values.end(), std::greater<>());
  return r;
}

DominanceReport rearrangement_dominates(const PeriodicGrid& f, const PeriodicGrid& g, double tol) {
  if (f.size() != g.size()) throw std::invalid_argument("rearrangement_dominates needs equal grid sizes");
  const auto cf = rearrangement(f).cumulative();
  const auto cg = rearrangement(g).cumulative();
  DominanceReport rep;
  rep.max_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < cf.size(); ++j) {
    const double excess = cf[j] - cg[j];
    if (excess > rep.max_excess) {
      rep.max_excess = excess;
      rep.at = two_pi * static_cast<double>(j + 1) / static_cast<double>(cf.size());
    }
  }
  rep.holds = rep.max_excess <= tol;
  return rep;
}

double lq_norm(const PeriodicGrid& f, double q) {
  check_q(q);
  double scale = 0.0;
  const double s = powered_sum(f.values(), q, scale);
  return scale * std::pow(s * f.spacing(), 1.0 / q);
}

double lq_norm(const Rearrangement& r, double q) {
  check_q(q);
  double scale = 0.0;
  const double s = powered_sum(r.values, q, scale);
  return scale * std::pow(s * r.spacing(), 1.0 / q);
}

NormEstimate lq_norm_estimate(const ClassFunction& f, double q) {
  check_q(q);
  std::vector<double> cuts = f.breakpoints();
  if (!even_integer(q)) {
    const auto z = locate_zeros(f);
    cuts.insert(cuts.end(), z.begin(), z.end());
  }
  for (double& c : cuts) c = wrap_angle(c);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(), [](double a, double b) { return b - a < 1e-13; }), cuts.end());
  if (cuts.size() > 1 && cuts.front() + two_pi - cuts.back() < 1e-13) cuts.pop_back();
  if (cuts.empty()) cuts.push_back(0.0);

  const PeriodicGrid grid = f.sample();
  double scale = 0.0;
  for (double v : grid.values()) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return {0.0, 0.0};

  const bool graded = !even_integer(q) && q != std::floor(q);
  const int total_panels = std::max(32, f.closed_form() ? 32 : f.series().max_frequency() / 4);
  auto integrand = [&](double t) { return std::pow(std::abs(f.value(t)) / scale, q); };
  auto integrate = [&](int panels_per_period) {
    double acc = 0.0;
    for (std::size_t i = 0; i < cuts.size(); ++i) {
      const double a = cuts[i];
      const double b = i + 1 < cuts.size() ? cuts[i + 1] : cuts.front() + two_pi;
      const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / two_pi * panels_per_period)));
      acc += gauss_panels(integrand, a, b, panels, graded);
    }
    return acc;
  };
  const double coarse = scale * std::pow(integrate(total_panels), 1.0 / q);
  const double fine = scale * std::pow(integrate(2 * total_panels), 1.0 / q);
  return {fine, std::abs(fine - coarse)};
}

double lq_norm(const ClassFunction& f, double q) { return lq_norm_estimate(f, q).value; }

double sup_norm(const ClassFunction& f) {
  const PeriodicGrid g = f.sample();
  const std::size_t N = g.size();
  const double h = g.spacing();
  double grid_max = 0.0;
  for (double v : g.values()) grid_max = std::max(grid_max, std::abs(v));
  auto absf = [&](double t) { return std::abs(f.value(t)); };
  double best = grid_max;
  for (double b : f.breakpoints()) best = std::max(best, absf(b));
  std::vector<std::size_t> candidates;
  for (std::size_t j = 0; j < N; ++j) {
    const double v = std::abs(g[j]);
    if (v >= std::abs(g[(j + N - 1) % N]) && v >= std::abs(g[(j + 1) % N]) && v >= grid_max * (1.0 - 1e-3))
      candidates.push_back(j);
  }
  if (candidates.size() > 256) {
    std::partial_sort(candidates.begin(), candidates.begin() + 256, candidates.end(),
                      [&](std::size_t a, std::size_t b) { return std::abs(g[a]) > std::abs(g[b]); });
    candidates.resize(256);
  }
  for (std::size_t j : candidates) {
    const double t = g.t(j);
    best = std::max(best, brent_max(absf, t - h, t + h).second);
  }
  return best;
}

double total_variation(const PeriodicGrid& f) {
  const std::size_t N = f.size();
  double acc = 0.0;
  for (std::size_t j = 0; j < N; ++j) acc += std::abs(f[(j + 1) % N] - f[j]);
  return acc;
}

double total_variation(const ClassFunction& f) {
  const auto ext = locate_extrema(f);
  if (ext.size() < 2) return 0.0;
  double acc = 0.0;
  for (std::size_t k = 0; k < ext.size(); ++k) acc += std::abs(ext[(k + 1) % ext.size()].value - ext[k].value);
  return acc;
}

std::vector<double> fourier_information(const FourierSeries& s, int n) {
  if (n < 1) throw std::invalid_argument("fourier_information needs n >= 1");
  std::vector<double> info;
  info.reserve(static_cast<std::size_t>(2 * n - 1));
  info.push_back(2.0 * s.mean);
  for (int j = 1; j < n; ++j) {
    info.push_back(s.a(j));
    info.push_back(s.b(j));
  }
  return info;
}

std::vector<double> fourier_information(const PeriodicGrid& f, int n) { return fourier_information(analyze(f), n); }

std::vector<Extremum> locate_extrema(const ClassFunction& f, std::size_t N) {
  const PeriodicGrid g = f.sample(resolve_size(f, N));
  const double h = g.spacing();
  std::vector<Extremum> out;
  auto value = [&](double t) { return f.value(t); };
  auto negated = [&](double t) { return -f.value(t); };
  const auto breaks = f.breakpoints();
  for (std::size_t idx : grid_extrema(g)) {
    const std::size_t prev = (idx + g.size() - 1) % g.size();
    const bool is_max = g[idx] > g[prev];
    const double t = g.t(idx);
    Extremum e;
    e.maximum = is_max;
    if (is_max) {
      const auto [tm, vm] = brent_max(value, t - h, t + h);
      e.t = wrap_angle(tm);
      e.value = vm;
    } else {
      const auto [tm, vm] = brent_max(negated, t - h, t + h);
      e.t = wrap_angle(tm);
      e.value = -vm;
    }
    // kinks: Brent only brackets them, the breakpoint itself is exact
    for (double b : breaks) {
      const double d = wrap_angle(b - t + pi) - pi;
      if (std::abs(d) > h) continue;
      const double v = f.value(b);
      if (is_max ? v > e.value : v < e.value) {
        e.t = wrap_angle(b);
        e.value = v;
      }
    }
    out.push_back(e);
  }
  std::sort(out.begin(), out.end(), [](const Extremum& a, const Extremum& b) { return a.t < b.t; });
  return out;
}

std::vector<double> locate_zeros(const ClassFunction& f, std::size_t N) {
  const PeriodicGrid g = f.sample(resolve_size(f, N));
  const std::size_t M = g.size();
  std::vector<double> zeros;
  auto value = [&](double t) { return f.value(t); };
  boost::math::tools::eps_tolerance<double> tol(50);
  for (std::size_t j = 0; j < M; ++j) {
    const double a = g[j];
    const double b = g[(j + 1) % M];
    if (a == 0.0) {
      const double before = g[(j + M - 1) % M];
      if (before * b < 0.0) zeros.push_back(g.t(j));
      continue;
    }
    if (a * b < 0.0) {
      const double lo = g.t(j);
      const double hi = lo + g.spacing();
      std::uintmax_t iters = 100;
      const auto r = boost::math::tools::toms748_solve(value, lo, hi, a, b, tol, iters);
      zeros.push_back(wrap_angle(0.5 * (r.first + r.second)));
    }
  }
  std::sort(zeros.begin(), zeros.end());
  return zeros;
}

double period_defect(const ClassFunction& f, int n, std::size_t N) {
  if (n < 1) throw std::invalid_argument("period_defect needs n >= 1");
  const std::size_t M = resolve_size(f, N);
  double worst = 0.0;
  for (std::size_t j = 0; j < M; ++j) {
    const double t = two_pi * static_cast<double>(j) / static_cast<double>(M);
    worst = std::max(worst, std::abs(f.value(t + two_pi / n) - f.value(t)));
  }
  return worst;
}

double antiperiodicity_defect(const ClassFunction& f, int n, std::size_t N) {
  if (n < 1) throw std::invalid_argument("antiperiodicity_defect needs n >= 1");
  const std::size_t M = resolve_size(f, N);
  double worst = 0.0;
  for (std::size_t j = 0; j < M; ++j) {
    const double t = two_pi * static_cast<double>(j) / static_cast<double>(M);
    worst = std::max(worst, std::abs(f.value(t + pi / n) + f.value(t)));
  }
  return worst;
}

}  // namespace cvdw
