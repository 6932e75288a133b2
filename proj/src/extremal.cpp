#include "cvdw/extremal.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "cvdw/analysis.hpp"
#include "cvdw/parallel.hpp"

namespace cvdw {

namespace {

constexpr double constraint_tolerance = 1e-8;
constexpr int max_bisection_steps = 100;

double abs_max(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

bool linear_pipeline(const ClassConfig& cfg) { return cfg.beta == 0.0 || cfg.phi == LinkFunction::phi1; }

std::size_t next_pow2(std::size_t v) {
  std::size_t p = 1;
  while (p < v) p <<= 1;
  return p;
}

// Grid size on which the smooth pipeline is resolved to roundoff.
std::size_t working_size(double beta, std::size_t N) {
  if (beta == 0.0) return 256;  // closed-form values do not depend on the grid
  const auto want = next_pow2(static_cast<std::size_t>(2.0 * (40.0 / beta) + 2.0));
  return std::clamp<std::size_t>(want, 256, std::max<std::size_t>(N, 256));
}

// Root of an increasing function on [lo, hi] by bisection; stops once
// |g| <= tol. Returns the best point seen.
template <class F>
double bisect_increasing(F&& g, double lo, double hi, double tol, double& residual) {
  double best = lo;
  residual = std::numeric_limits<double>::infinity();
  for (int step = 0; step < max_bisection_steps; ++step) {
    const double mid = 0.5 * (lo + hi);
    const double v = g(mid);
    if (std::abs(v) < residual) {
      residual = std::abs(v);
      best = mid;
    }
    if (std::abs(v) <= tol) break;
    (v > 0.0 ? hi : lo) = mid;
  }
  return best;
}

// ---- mean-constraint enforcement -------------------------------------------

StepFunction enforce_step(const ClassConfig& cfg, const StepFunction& u, std::size_t N) {
  double residual = 0.0;
  if (linear_pipeline(cfg)) {
    const double lambda =
        bisect_increasing([&](double l) { return u.shifted_clipped(l).mean(); }, -2.0, 2.0, 1e-15, residual);
    return u.shifted_clipped(lambda);
  }
  // K_β ∗ u is linear in the levels: precompute one smoothed indicator per piece
  const int K = static_cast<int>(N / 2) - 1;
  const KernelSpec Kb = KernelSpec::analytic(cfg.beta);
  std::vector<PeriodicGrid> pieces;
  for (std::size_t i = 0; i < u.pieces(); ++i) {
    std::vector<double> lv(u.pieces(), 0.0);
    lv[i] = 1.0;
    const StepFunction ind(std::vector<double>(u.breaks().begin(), u.breaks().end()), std::move(lv));
    pieces.push_back(synthesize(convolve(Kb, ind.fourier(K)), N));
  }
  std::vector<double> g(N);
  auto mean_for = [&](double l) {
    const StepFunction s = u.shifted_clipped(l);
    std::fill(g.begin(), g.end(), 0.0);
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      const double c = s.levels()[i];
      for (std::size_t j = 0; j < N; ++j) g[j] += c * pieces[i][j];
    }
    double acc = 0.0;
    for (double x : g) acc += eval_link(cfg.phi, x);
    return acc / static_cast<double>(N);
  };
  const double lambda = bisect_increasing(mean_for, -2.0, 2.0, 1e-15, residual);
  return u.shifted_clipped(lambda);
}

FourierSeries scaled_to_unit(const FourierSeries& p, std::size_t N) {
  const double m = abs_max(synthesize(p, N).values());
  FourierSeries u = p;
  if (m == 0.0) return u;
  const double s = 0.999 / m;
  u.mean *= s;
  for (double& x : u.cos) x *= s;
  for (double& x : u.sin) x *= s;
  return u;
}

FourierSeries enforce_trig(const ClassConfig& cfg, FourierSeries p, std::size_t N) {
  if (linear_pipeline(cfg)) {
    p.mean = 0.0;
    return scaled_to_unit(p, N);
  }
  const KernelSpec Kb = KernelSpec::analytic(cfg.beta);
  FourierSeries centred = p;
  centred.mean = 0.0;
  const PeriodicGrid pg = synthesize(centred, N);
  const PeriodicGrid kp = synthesize(convolve(Kb, centred), N);
  const double span = std::max(abs_max(pg.values()), 1e-12);
  std::vector<double> g(N);
  auto scale_for = [&](double l) {
    double m = 0.0;
    for (double x : pg.values()) m = std::max(m, std::abs(x + l));
    return 0.999 / m;
  };
  auto mean_for = [&](double l) {
    const double s = scale_for(l);
    double acc = 0.0;
    for (std::size_t j = 0; j < N; ++j) acc += eval_link(cfg.phi, s * (kp[j] + l));
    return acc / static_cast<double>(N);
  };
  double residual = 0.0;
  const double lambda = bisect_increasing(mean_for, -4.0 * span, 4.0 * span, 1e-15, residual);
  const double s = scale_for(lambda);
  FourierSeries u = centred;
  u.mean = lambda;
  u.mean *= s;
  for (double& x : u.cos) x *= s;
  for (double& x : u.sin) x *= s;
  return u;
}

// ---- random sources -----------------------------------------------------------

StepFunction random_levels_step(std::mt19937_64& rng, int pieces) {
  std::uniform_real_distribution<double> pos(0.0, two_pi);
  std::uniform_real_distribution<double> level(-1.0, 1.0);
  std::vector<double> breaks;
  while (static_cast<int>(breaks.size()) < pieces) {
    const double b = pos(rng);
    if (std::none_of(breaks.begin(), breaks.end(), [b](double o) { return std::abs(o - b) < 1e-3; }))
      breaks.push_back(b);
  }
  std::sort(breaks.begin(), breaks.end());
  std::vector<double> levels(breaks.size());
  for (double& l : levels) l = level(rng);
  return StepFunction(std::move(breaks), std::move(levels));
}

StepFunction perturbed_spline(std::mt19937_64& rng, int pairs) {
  std::uniform_real_distribution<double> noise(-0.2, 0.2);
  std::uniform_real_distribution<double> pos(0.0, two_pi);
  std::vector<double> gaps(static_cast<std::size_t>(2 * pairs));
  for (double& g : gaps) g = 1.0 + noise(rng);
  const double total = std::accumulate(gaps.begin(), gaps.end(), 0.0);
  for (double& g : gaps) g *= two_pi / total;
  const KnotVector xi = KnotVector::from_gaps(gaps, pos(rng));
  return StepFunction::from_knots(xi);
}

StepFunction periodic_step(std::mt19937_64& rng, int divisor) {
  std::uniform_int_distribution<int> pieces_dist(2, 4);
  std::uniform_real_distribution<double> pos(0.0, two_pi / divisor);
  std::uniform_real_distribution<double> level(-1.0, 1.0);
  const int pieces = pieces_dist(rng);
  std::vector<double> base;
  while (static_cast<int>(base.size()) < pieces) {
    const double b = pos(rng);
    if (std::none_of(base.begin(), base.end(), [b](double o) { return std::abs(o - b) < 1e-3; }))
      base.push_back(b);
  }
  std::sort(base.begin(), base.end());
  std::vector<double> base_levels(base.size());
  for (double& l : base_levels) l = level(rng);
  std::vector<double> breaks, levels;
  for (int c = 0; c < divisor; ++c)
    for (std::size_t i = 0; i < base.size(); ++i) {
      breaks.push_back(base[i] + c * two_pi / divisor);
      levels.push_back(base_levels[i]);
    }
  return StepFunction(std::move(breaks), std::move(levels));
}

FourierSeries random_trig(std::mt19937_64& rng, int low, int high) {
  std::normal_distribution<double> coef(0.0, 1.0);
  FourierSeries p(high, 0.0);
  for (int k = low; k <= high; ++k) {
    p.cos[static_cast<std::size_t>(k - 1)] = coef(rng);
    p.sin[static_cast<std::size_t>(k - 1)] = coef(rng);
  }
  return p;
}

// ---- knot search --------------------------------------------------------------

// Node values of p = G ∗ φ(K_β ∗ h_ξ) with quadrature weights for ∫_0^{2π}.
struct NodeSet {
  std::vector<double> values;
  std::vector<double> weights;
};

const std::vector<std::pair<double, double>>& gauss20_nodes() {
  static const auto nodes = [] {
    using rule = boost::math::quadrature::gauss<double, 20>;
    std::vector<std::pair<double, double>> out;
    const auto& x = rule::abscissa();
    const auto& w = rule::weights();
    for (std::size_t i = 0; i < x.size(); ++i) {
      out.emplace_back(x[i], w[i]);
      if (x[i] != 0.0) out.emplace_back(-x[i], w[i]);
    }
    return out;
  }();
  return nodes;
}

NodeSet node_values(const ClassFunction& p, const KnotVector& xi, double q) {
  NodeSet ns;
  if (p.closed_form()) {
    const int panels = q > 8.0 ? 8 : 2;
    const auto k = xi.knots();
    for (std::size_t i = 0; i < k.size(); ++i) {
      const double a = k[i];
      const double b = i + 1 < k.size() ? k[i + 1] : k.front() + two_pi;
      const double w = (b - a) / panels;
      for (int c = 0; c < panels; ++c) {
        const double mid = a + (c + 0.5) * w;
        for (const auto& [x, wt] : gauss20_nodes()) {
          ns.values.push_back(p.value(mid + 0.5 * w * x));
          ns.weights.push_back(0.5 * w * wt);
        }
      }
    }
    return ns;
  }
  const PeriodicGrid g = p.sample();
  ns.values.assign(g.values().begin(), g.values().end());
  ns.weights.assign(g.size(), g.spacing());
  return ns;
}

double ipow_abs(double x, double q) {
  const double ax = std::abs(x);
  if (q == std::floor(q) && q <= 128.0) {
    int e = static_cast<int>(q);
    double r = 1.0, b = ax;
    while (e > 0) {
      if (e & 1) r *= b;
      b *= b;
      e >>= 1;
    }
    return r;
  }
  return std::pow(ax, q);
}

// min over a of Σ w |a + v|^q (or a = 0 when constants are not allowed).
std::pair<double, double> optimise_constant(const NodeSet& ns, double q, bool free_constant) {
  const double M = abs_max(ns.values);
  if (M == 0.0) return {0.0, 0.0};
  auto total = [&](double a) {
    double acc = 0.0;
    for (std::size_t i = 0; i < ns.values.size(); ++i) acc += ns.weights[i] * ipow_abs((a + ns.values[i]) / M, q);
    return acc;
  };
  double a = 0.0;
  if (free_constant) {
    if (q == 2.0) {
      double s = 0.0, w = 0.0;
      for (std::size_t i = 0; i < ns.values.size(); ++i) {
        s += ns.weights[i] * ns.values[i];
        w += ns.weights[i];
      }
      a = -s / w;
    } else {
      // the objective is convex in a; its slope is increasing
      auto slope = [&](double b) {
        double acc = 0.0;
        for (std::size_t i = 0; i < ns.values.size(); ++i) {
          const double z = (b + ns.values[i]) / M;
          acc += ns.weights[i] * ipow_abs(z, q - 1.0) * (z > 0.0 ? 1.0 : (z < 0.0 ? -1.0 : 0.0));
        }
        return acc;
      };
      double residual = 0.0;
      a = bisect_increasing(slope, -M, M, 0.0, residual);
    }
  }
  return {M * std::pow(total(a), 1.0 / q), a};
}

}  // namespace

// ---- ClassConfig ----------------------------------------------------------------

std::string ClassConfig::describe() const {
  return fmt::format("G={} phi={} beta={}", G.describe(), to_string(phi), beta);
}

ClassConfig ClassConfig::sobolev(int r) {
  if (r < 1) throw std::invalid_argument("sobolev class needs r >= 1");
  return {KernelSpec::bernoulli(r), LinkFunction::phi1, 0.0};
}

ClassConfig ClassConfig::achieser(int r, double beta) {
  if (r < 0) throw std::invalid_argument("achieser class needs r >= 0");
  if (!(beta > 0.0)) throw std::invalid_argument("achieser class needs beta > 0");
  return {r == 0 ? KernelSpec::identity() : KernelSpec::bernoulli(r), LinkFunction::phi1, beta};
}

ClassConfig ClassConfig::hardy(int r, double beta) {
  if (r < 0) throw std::invalid_argument("hardy class needs r >= 0");
  if (!(beta > 0.0)) throw std::invalid_argument("hardy class needs beta > 0");
  return {r == 0 ? KernelSpec::identity() : KernelSpec::bernoulli(r), LinkFunction::phi0, beta};
}

ClassFunction class_standard_function(const ClassConfig& cfg, int n, std::size_t N) {
  return standard_function(cfg.G, cfg.phi, cfg.beta, KnotVector::uniform(n), N);
}

std::string to_string(MemberKind kind) {
  switch (kind) {
    case MemberKind::random_step:
      return "random-step";
    case MemberKind::perturbed_knots:
      return "perturbed-knots";
    case MemberKind::trig_polynomial:
      return "trig-polynomial";
    case MemberKind::periodic_step:
      return "periodic-step";
  }
  return "?";
}

// ---- members --------------------------------------------------------------------

ClassMember random_class_member(const ClassConfig& cfg, std::mt19937_64& rng, const MemberOptions& opt) {
  if (opt.m < 1) throw std::invalid_argument("random_class_member needs m >= 1");
  MemberKind kind;
  if (opt.kind) {
    kind = *opt.kind;
  } else {
    std::uniform_int_distribution<int> pick(0, 2);
    kind = static_cast<MemberKind>(pick(rng));
  }
  const bool constrain = cfg.constants_allowed();
  Source source = StepFunction::constant(0.0);
  switch (kind) {
    case MemberKind::random_step: {
      std::uniform_int_distribution<int> pieces(1, 2 * opt.m);
      StepFunction u = random_levels_step(rng, pieces(rng));
      source = constrain ? enforce_step(cfg, u, opt.N) : u;
      break;
    }
    case MemberKind::perturbed_knots: {
      std::uniform_int_distribution<int> pairs(1, opt.m);
      StepFunction u = perturbed_spline(rng, pairs(rng));
      source = constrain ? enforce_step(cfg, u, opt.N) : u;
      break;
    }
    case MemberKind::periodic_step: {
      std::uniform_int_distribution<int> div(std::max(1, opt.min_period_divisor), std::max(1, opt.min_period_divisor) + 3);
      StepFunction u = periodic_step(rng, div(rng));
      source = constrain ? enforce_step(cfg, u, opt.N) : u;
      break;
    }
    case MemberKind::trig_polynomial: {
      std::uniform_int_distribution<int> deg(1, opt.m);
      FourierSeries p = random_trig(rng, 1, deg(rng));
      std::normal_distribution<double> c0(0.0, 1.0);
      p.mean = c0(rng);
      source = constrain ? enforce_trig(cfg, p, opt.N) : scaled_to_unit(p, opt.N);
      break;
    }
  }
  ClassFunction f(cfg.G, cfg.phi, cfg.beta, std::move(source), 0.0, opt.N);
  ClassMember member{f, kind, constrain ? two_pi * std::abs(f.inner_mean()) : 0.0};
  if (constrain && member.constraint_defect > constraint_tolerance)
    throw std::runtime_error(fmt::format("mean constraint not reached: defect {:.3e}", member.constraint_defect));
  if (constrain && opt.random_constant) {
    const double A = 0.5 * abs_max(f.sample().values());
    std::uniform_real_distribution<double> a(-A, A);
    member.f = f.with_constant(A > 0.0 ? a(rng) : 0.0);
  }
  return member;
}

ClassMember random_class_member(const ClassConfig& cfg, std::uint64_t seed, const MemberOptions& opt) {
  auto rng = trial_rng(seed, 0);
  return random_class_member(cfg, rng, opt);
}

double sup_derivative(const ClassFunction& f) {
  const PeriodicGrid g = f.sample_derivative();
  const std::size_t N = g.size();
  const double h = g.spacing();
  const double grid_max = abs_max(g.values());
  double best = grid_max;
  auto absd = [&](double t) { return -std::abs(f.derivative(t)); };
  for (double b : f.breakpoints()) {
    best = std::max(best, std::abs(f.derivative(b - 1e-12)));
    best = std::max(best, std::abs(f.derivative(b + 1e-12)));
  }
  int refined = 0;
  for (std::size_t j = 0; j < N && refined < 256; ++j) {
    const double v = std::abs(g[j]);
    if (v < grid_max * (1.0 - 1e-3) || v < std::abs(g[(j + N - 1) % N]) || v < std::abs(g[(j + 1) % N])) continue;
    const auto r = boost::math::tools::brent_find_minima(absd, g.t(j) - h, g.t(j) + h, 52);
    best = std::max(best, -r.second);
    ++refined;
  }
  return best;
}

// ---- knot norm minimisation -------------------------------------------------------

namespace {

struct KnotProblem {
  ClassConfig cfg;
  int n;
  double q;
  std::size_t N;
  int evaluations = 0;

  // Gaps from raw positive gaps with the mean constraint applied by moving the
  // split between positive and negative intervals.
  std::vector<double> constrained_gaps(const std::vector<double>& raw) const {
    if (!cfg.constants_allowed()) return raw;
    double odd = 0.0, even = 0.0;
    for (std::size_t j = 0; j < raw.size(); ++j) (j % 2 == 0 ? odd : even) += raw[j];
    auto split = [&](double s) {
      std::vector<double> g(raw.size());
      for (std::size_t j = 0; j < raw.size(); ++j)
        g[j] = j % 2 == 0 ? raw[j] * s * two_pi / odd : raw[j] * (1.0 - s) * two_pi / even;
      return g;
    };
    if (linear_pipeline(cfg)) return split(0.5);
    const KernelSpec Kb = KernelSpec::analytic(cfg.beta);
    const std::size_t M = working_size(cfg.beta, N);
    const int K = static_cast<int>(M / 2) - 1;
    auto mean_for = [&](double s) {
      const auto g = split(s);
      const KnotVector xi = KnotVector::from_gaps(g, 0.0);
      const PeriodicGrid sm = synthesize(convolve(Kb, h_fourier(xi, K)), M);
      double acc = 0.0;
      for (double x : sm.values()) acc += eval_link(cfg.phi, x);
      return acc / static_cast<double>(M);
    };
    double residual = 0.0;
    return split(bisect_increasing(mean_for, 1e-6, 1.0 - 1e-6, 1e-15, residual));
  }

  std::pair<double, double> norm_at(const KnotVector& xi, double qq) const {
    const std::size_t M = working_size(cfg.beta, N);
    const ClassFunction p = standard_function(cfg.G, cfg.phi, cfg.beta, xi, M);
    if (std::isinf(qq)) {
      const PeriodicGrid g = p.sample(std::max(N, M));
      double hi = g.max(), lo = g.min();
      for (double b : p.breakpoints()) {
        hi = std::max(hi, p.value(b));
        lo = std::min(lo, p.value(b));
      }
      if (cfg.constants_allowed()) return {0.5 * (hi - lo), -0.5 * (hi + lo)};
      return {std::max(hi, -lo), 0.0};
    }
    return optimise_constant(node_values(p, xi, qq), qq, cfg.constants_allowed());
  }

  static std::vector<double> softmax_gaps(const double* x, std::size_t dim) {
    std::vector<double> y(dim + 1, 0.0);
    for (std::size_t i = 0; i < dim; ++i) y[i] = std::clamp(x[i], -30.0, 30.0);
    const double top = *std::max_element(y.begin(), y.end());
    double total = 0.0;
    for (double& v : y) total += (v = std::exp(v - top));
    for (double& v : y) v *= two_pi / total;
    return y;
  }

  KnotVector knots_from(const double* x, std::size_t dim) const {
    return KnotVector::from_gaps(constrained_gaps(softmax_gaps(x, dim)), 0.0);
  }

  double objective(const double* x, std::size_t dim, double qq) {
    ++evaluations;
    try {
      return norm_at(knots_from(x, dim), qq).first;
    } catch (const std::invalid_argument&) {
      return 1e300;
    }
  }
};

struct NmContext {
  KnotProblem* problem;
  double q;
};

double nm_callback(const gsl_vector* v, void* params) {
  auto* ctx = static_cast<NmContext*>(params);
  return ctx->problem->objective(v->data, v->size, ctx->q);
}

std::vector<double> nelder_mead(KnotProblem& problem, std::vector<double> x0, double q, double step, int max_evals) {
  static const bool handler_off = [] {
    gsl_set_error_handler_off();
    return true;
  }();
  (void)handler_off;
  const std::size_t dim = x0.size();
  if (dim == 0) return x0;
  NmContext ctx{&problem, q};
  gsl_multimin_function fn{&nm_callback, dim, &ctx};
  gsl_vector* x = gsl_vector_alloc(dim);
  gsl_vector* ss = gsl_vector_alloc(dim);
  for (std::size_t i = 0; i < dim; ++i) gsl_vector_set(x, i, x0[i]);
  gsl_vector_set_all(ss, step);
  gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, dim);
  gsl_multimin_fminimizer_set(s, &fn, x, ss);
  const int start = problem.evaluations;
  double last_best = s->fval;
  int stalled = 0;
  while (problem.evaluations - start < max_evals) {
    if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), 1e-11) == GSL_SUCCESS) break;
    // flat directions (e.g. a single knot pair) never shrink the simplex
    if (s->fval < last_best - 1e-15 * std::abs(last_best)) {
      last_best = s->fval;
      stalled = 0;
    } else if (++stalled > 60 * static_cast<int>(dim + 1)) {
      break;
    }
  }
  std::vector<double> best(dim);
  for (std::size_t i = 0; i < dim; ++i) best[i] = gsl_vector_get(s->x, i);
  gsl_multimin_fminimizer_free(s);
  gsl_vector_free(ss);
  gsl_vector_free(x);
  return best;
}

double spread(const std::vector<double>& g) {
  const auto [lo, hi] = std::minmax_element(g.begin(), g.end());
  return *hi - *lo;
}

}  // namespace

std::pair<double, double> knot_norm(const ClassConfig& cfg, const KnotVector& xi, double q, std::size_t N) {
  KnotProblem problem{cfg, xi.pairs(), q, N};
  return problem.norm_at(xi, q);
}

KnotOptimum minimize_knot_norm(const ClassConfig& cfg, int n, double q, std::uint64_t seed,
                               const KnotSearchOptions& opt) {
  if (n < 1) throw std::invalid_argument("minimize_knot_norm needs n >= 1");
  if (!(q >= 1.0)) throw std::invalid_argument("minimize_knot_norm needs q >= 1");
  const bool sup = std::isinf(q);
  const double q_work = sup ? 64.0 : q;
  const int starts = std::max(1, opt.starts);

  struct StartResult {
    std::vector<double> x;
    double value = 0.0;
    int evaluations = 0;
  };
  std::vector<StartResult> results(static_cast<std::size_t>(starts));
  const std::size_t dim = static_cast<std::size_t>(2 * n - 1);
  parallel_for(results.size(), [&](std::size_t i) {
    auto rng = trial_rng(seed, i);
    std::normal_distribution<double> noise(0.0, 0.4);
    std::vector<double> x(dim);
    for (double& v : x) v = noise(rng);
    KnotProblem problem{cfg, n, q_work, opt.N};
    x = nelder_mead(problem, x, q_work, 0.3, opt.max_evaluations);
    // restart once from the result to shake off a degenerate simplex
    x = nelder_mead(problem, x, q_work, 0.01, opt.max_evaluations);
    results[i] = {x, problem.objective(x.data(), dim, q_work), problem.evaluations};
  });

  auto best_it = std::min_element(results.begin(), results.end(),
                                  [](const StartResult& a, const StartResult& b) { return a.value < b.value; });
  KnotProblem problem{cfg, n, q_work, opt.N};
  std::vector<double> x = best_it->x;
  int evaluations = 0;
  for (const auto& r : results) evaluations += r.evaluations;

  if (sup) {
    const double before = problem.objective(x.data(), dim, q);
    auto polished = nelder_mead(problem, x, q, 0.002, 600);
    if (problem.objective(polished.data(), dim, q) < before) x = polished;
    evaluations += problem.evaluations;
  }

  KnotOptimum out;
  out.knots = problem.knots_from(x.data(), dim);
  const auto gaps = out.knots.gaps();
  out.gap_spread = spread(gaps);
  out.starts = starts;
  out.evaluations = evaluations;

  if (*std::min_element(gaps.begin(), gaps.end()) < 1e-6 && n > 1) {
    // collapsed intervals: the optimum lies on a face with fewer knots
    KnotOptimum fewer = minimize_knot_norm(cfg, n - 1, q, seed, opt);
    fewer.collapsed = true;
    return fewer;
  }

  if (sup) {
    const ClassFunction p = standard_function(cfg.G, cfg.phi, cfg.beta, out.knots, opt.N);
    const auto [v, a] = problem.norm_at(out.knots, q);
    (void)v;
    out.a = a;
    out.value = sup_norm(p.with_constant(a));
  } else {
    const auto [v, a] = problem.norm_at(out.knots, q);
    out.value = v;
    out.a = a;
  }
  return out;
}

// ---- Lagrange residuals --------------------------------------------------------------

double LagrangeResidual::max_abs() const {
  double m = std::max(std::abs(mean_equation), std::abs(constraint));
  for (double v : knot_equations) m = std::max(m, std::abs(v));
  return m;
}

namespace {

struct LagrangeParts {
  double hd4 = 0.0;
  double constraint = 0.0;
  std::vector<double> A;
  std::vector<double> B;
};

LagrangeParts lagrange_parts(const ClassConfig& cfg, const KnotVector& xi, double a, double q, std::size_t N) {
  if (!(q > 1.0) || std::isinf(q)) throw std::invalid_argument("lagrange_residual needs 1 < q < inf");
  const ClassFunction p = standard_function(cfg.G, cfg.phi, cfg.beta, xi, N, a);
  const double M = abs_max(p.sample().values());
  auto fnorm = [&](double v) {
    const double z = v / M;
    return ipow_abs(z, q - 1.0) * (z > 0.0 ? 1.0 : (z < 0.0 ? -1.0 : 0.0));
  };
  LagrangeParts parts;
  parts.constraint = two_pi * p.inner_mean();
  const auto knots = xi.knots();

  if (p.closed_form() && cfg.G.kind() == KernelKind::bernoulli) {
    std::vector<double> cuts(knots.begin(), knots.end());
    const bool even = q == std::floor(q) && std::fmod(q, 2.0) == 0.0;
    if (!even) {
      const auto z = locate_zeros(p);
      cuts.insert(cuts.end(), z.begin(), z.end());
      std::sort(cuts.begin(), cuts.end());
      cuts.erase(std::unique(cuts.begin(), cuts.end(), [](double x, double y) { return y - x < 1e-13; }),
                 cuts.end());
    }
    std::vector<double> xs, ws, fs;
    for (std::size_t i = 0; i < cuts.size(); ++i) {
      const double lo = cuts[i];
      const double hi = i + 1 < cuts.size() ? cuts[i + 1] : cuts.front() + two_pi;
      const int panels = 8;
      const double w = (hi - lo) / panels;
      for (int c = 0; c < panels; ++c) {
        const double mid = lo + (c + 0.5) * w;
        for (const auto& [x, wt] : gauss20_nodes()) {
          const double t = mid + 0.5 * w * x;
          xs.push_back(t);
          ws.push_back(0.5 * w * wt);
          fs.push_back(fnorm(p.value(t)));
        }
      }
    }
    for (std::size_t i = 0; i < xs.size(); ++i) parts.hd4 += ws[i] * fs[i];
    for (double k : knots) {
      double acc = 0.0;
      for (std::size_t i = 0; i < xs.size(); ++i) acc += ws[i] * eval_D(cfg.G.order(), xs[i] - k) * fs[i];
      parts.A.push_back(acc / two_pi);
      parts.B.push_back(1.0);
    }
    return parts;
  }

  const PeriodicGrid pg = p.sample();
  std::vector<double> fv(pg.values().begin(), pg.values().end());
  for (double& v : fv) v = fnorm(v);
  const FourierSeries fs = analyze(PeriodicGrid(fv));
  parts.hd4 = two_pi * fs.mean;
  const FourierSeries Fs = correlate(cfg.G, fs);
  if (cfg.beta == 0.0) {
    for (double k : knots) {
      parts.A.push_back(Fs(k));
      parts.B.push_back(1.0);
    }
    return parts;
  }
  const KernelSpec Kb = KernelSpec::analytic(cfg.beta);
  const int K = static_cast<int>(N / 2) - 1;
  const PeriodicGrid g = synthesize(convolve(Kb, h_fourier(xi, K)), N);
  const PeriodicGrid Fg = synthesize(Fs, N);
  std::vector<double> w1(N), w0(N);
  for (std::size_t j = 0; j < N; ++j) {
    w0[j] = eval_link_deriv(cfg.phi, g[j]);
    w1[j] = w0[j] * Fg[j];
  }
  const FourierSeries As = convolve(Kb, analyze(PeriodicGrid(w1)));
  const FourierSeries Bs = convolve(Kb, analyze(PeriodicGrid(w0)));
  for (double k : knots) {
    parts.A.push_back(As(k));
    parts.B.push_back(Bs(k));
  }
  return parts;
}

LagrangeResidual assemble(const ClassConfig& cfg, const LagrangeParts& parts, double theta) {
  LagrangeResidual r;
  const bool line = cfg.constants_allowed();
  r.theta = line ? theta : 0.0;
  r.mean_equation = line ? parts.hd4 : 0.0;
  r.constraint = line ? parts.constraint : 0.0;
  for (std::size_t j = 0; j < parts.A.size(); ++j) {
    const double sign = (j + 1) % 2 == 0 ? 1.0 : -1.0;
    r.knot_equations.push_back(2.0 * sign * (parts.A[j] + r.theta * parts.B[j]));
  }
  return r;
}

}  // namespace

LagrangeResidual lagrange_residual(const ClassConfig& cfg, const KnotVector& xi, double a, double theta, double q,
                                   std::size_t N) {
  return assemble(cfg, lagrange_parts(cfg, xi, a, q, N), theta);
}

LagrangeResidual lagrange_residual_fitted(const ClassConfig& cfg, const KnotVector& xi, double a, double q,
                                          std::size_t N) {
  const LagrangeParts parts = lagrange_parts(cfg, xi, a, q, N);
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < parts.A.size(); ++j) {
    num += parts.A[j] * parts.B[j];
    den += parts.B[j] * parts.B[j];
  }
  return assemble(cfg, parts, den > 0.0 ? -num / den : 0.0);
}

// ---- theorem suites -------------------------------------------------------------------

double comparison_margin(const ClassFunction& f, const ClassFunction& phi_n, int n, double match_tolerance) {
  const double M = sup_norm(phi_n);
  const auto ext = locate_extrema(phi_n);
  const auto top = std::max_element(ext.begin(), ext.end(),
                                    [](const Extremum& a, const Extremum& b) { return a.value < b.value; });
  if (top == ext.end()) throw std::runtime_error("standard function has no extrema");
  const double t_max = top->t;
  const double v_max = phi_n.value(t_max);
  const double v_min = phi_n.value(t_max + pi / n);
  boost::math::tools::eps_tolerance<double> tol(50);
  // invert Φ on [t_max − π/n, t_max] (increasing) or [t_max, t_max + π/n] (decreasing)
  auto invert = [&](double y, bool increasing) {
    if (y >= v_max) return t_max;
    if (y <= v_min) return increasing ? t_max - pi / n : t_max + pi / n;
    const double lo = increasing ? t_max - pi / n : t_max;
    const double hi = increasing ? t_max : t_max + pi / n;
    auto g = [&](double t) { return phi_n.value(t) - y; };
    std::uintmax_t iters = 200;
    const auto r = boost::math::tools::toms748_solve(g, lo, hi, g(lo), g(hi), tol, iters);
    return 0.5 * (r.first + r.second);
  };
  const PeriodicGrid fv = f.sample();
  const PeriodicGrid fd = f.sample_derivative();
  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < fv.size(); ++j) {
    double y = fv[j];
    if (std::abs(y) > M + match_tolerance) return -std::numeric_limits<double>::infinity();
    y = std::clamp(y, -M, M);
    const double d = fd[j];
    const double gamma = invert(y, d >= 0.0);
    margin = std::min(margin, std::abs(phi_n.derivative(gamma)) - std::abs(d));
  }
  return margin;
}

namespace {

SuiteReport reduce_max(std::string name, const std::vector<double>& excess, double tol) {
  SuiteReport rep;
  rep.name = std::move(name);
  rep.trials = static_cast<int>(excess.size());
  rep.tolerance = tol;
  rep.worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < excess.size(); ++i) {
    if (excess[i] > tol) ++rep.violations;
    if (excess[i] > rep.worst) {
      rep.worst = excess[i];
      rep.worst_trial = static_cast<int>(i);
    }
  }
  return rep;
}

ClassFunction capped(const ClassFunction& f, double cap) {
  const double s = sup_norm(f);
  return s > cap ? f.scaled(cap / s) : f;
}

void require_property_b(const ClassConfig& cfg, const char* what) {
  if (!cfg.constants_allowed())
    throw std::invalid_argument(fmt::format("{} needs a kernel with Property B (got {})", what, cfg.G.describe()));
}

// Member with a = 0 scaled so that its periodic integral is bounded by that of Φ_n.
ClassFunction integral_capped_member(const ClassConfig& cfg, std::mt19937_64& rng, const SuiteOptions& opt,
                                     double integral_cap) {
  MemberOptions mo;
  mo.m = opt.m;
  mo.N = opt.N;
  mo.random_constant = false;
  const ClassMember member = random_class_member(cfg, rng, mo);
  const ClassFunction F = member.f.with_kernel(cfg.G.integrated());
  const double s = sup_norm(F);
  return s > integral_cap ? member.f.scaled(integral_cap / s) : member.f;
}

}  // namespace

SuiteReport comparison_search(const ClassConfig& cfg, int n, const SuiteOptions& opt) {
  const ClassFunction phi_n = class_standard_function(cfg, n, opt.N);
  const double M = sup_norm(phi_n);
  std::vector<double> deficit(static_cast<std::size_t>(opt.trials));
  parallel_for(deficit.size(), [&](std::size_t i) {
    auto rng = trial_rng(opt.seed, i);
    MemberOptions mo;
    mo.m = opt.m;
    mo.N = opt.N;
    const ClassFunction f = capped(random_class_member(cfg, rng, mo).f, M);
    deficit[i] = -comparison_margin(f, phi_n, n, opt.match_tolerance);
  });
  SuiteReport rep = reduce_max("comparison", deficit, opt.tolerance);
  rep.worst = -rep.worst;
  rep.reference = M;
  return rep;
}

SuiteReport landau_kolmogorov_check(const ClassConfig& cfg, int n, const SuiteOptions& opt) {
  const ClassFunction phi_n = class_standard_function(cfg, n, opt.N);
  const double M = sup_norm(phi_n);
  const double D = sup_derivative(phi_n);
  std::vector<double> excess(static_cast<std::size_t>(opt.trials));
  parallel_for(excess.size(), [&](std::size_t i) {
    auto rng = trial_rng(opt.seed, i);
    MemberOptions mo;
    mo.m = opt.m;
    mo.N = opt.N;
    const ClassFunction f = capped(random_class_member(cfg, rng, mo).f, M);
    excess[i] = sup_derivative(f) - D;
  });
  SuiteReport rep = reduce_max("landau", excess, opt.tolerance);
  rep.reference = D;
  return rep;
}

SuiteReport theorem22_check(const ClassConfig& cfg, int n, const SuiteOptions& opt) {
  require_property_b(cfg, "theorem22_check");
  const ClassFunction phi_n = class_standard_function(cfg, n, opt.N);
  const double M = sup_norm(phi_n);
  const double Mi = sup_norm(phi_n.with_kernel(cfg.G.integrated()));
  std::vector<double> excess(static_cast<std::size_t>(opt.trials));
  parallel_for(excess.size(), [&](std::size_t i) {
    auto rng = trial_rng(opt.seed, i);
    excess[i] = sup_norm(integral_capped_member(cfg, rng, opt, Mi)) - M;
  });
  SuiteReport rep = reduce_max("theorem22", excess, opt.tolerance);
  rep.reference = M;
  return rep;
}

SuiteReport rearrangement_theorem_check(const ClassConfig& cfg, int n, const SuiteOptions& opt) {
  require_property_b(cfg, "rearrangement_theorem_check");
  const ClassFunction phi_n = class_standard_function(cfg, n, opt.N);
  const double Mi = sup_norm(phi_n.with_kernel(cfg.G.integrated()));
  const std::size_t fine = opt.N * rearrangement_oversampling;
  const PeriodicGrid phi_grid = phi_n.sample(fine);
  const std::array<double, 3> qs{1.0, 2.0, 5.0};
  std::array<double, 3> phi_norms{};
  for (std::size_t k = 0; k < qs.size(); ++k) phi_norms[k] = lq_norm(phi_n, qs[k]);
  std::vector<double> excess(static_cast<std::size_t>(opt.trials));
  parallel_for(excess.size(), [&](std::size_t i) {
    auto rng = trial_rng(opt.seed, i);
    const ClassFunction f = integral_capped_member(cfg, rng, opt, Mi);
    double worst = rearrangement_dominates(f.sample(fine), phi_grid, opt.tolerance).max_excess;
    for (std::size_t k = 0; k < qs.size(); ++k) worst = std::max(worst, lq_norm(f, qs[k]) - phi_norms[k]);
    excess[i] = worst;
  });
  SuiteReport rep = reduce_max("rearrangement", excess, opt.tolerance);
  rep.reference = phi_norms[0];
  return rep;
}

SuiteReport taikov_check(const ClassConfig& cfg, int n, double q, const SuiteOptions& opt) {
  require_property_b(cfg, "taikov_check");
  const ClassFunction phi_n = class_standard_function(cfg, n, opt.N);
  const double ref = lq_norm(phi_n, q);
  constexpr int standard_candidates = 4;
  const std::size_t count = static_cast<std::size_t>(standard_candidates + opt.trials);
  std::vector<double> norms(count, -std::numeric_limits<double>::infinity());
  std::vector<char> rejected(count, 0);
  parallel_for(count, [&](std::size_t i) {
    ClassFunction f = phi_n;
    if (i < standard_candidates) {
      f = class_standard_function(cfg, n + static_cast<int>(i), opt.N);
    } else {
      auto rng = trial_rng(opt.seed, i);
      const bool trig = linear_pipeline(cfg) && i % 2 == 1;
      if (trig) {
        std::uniform_int_distribution<int> extra(0, opt.m);
        const FourierSeries u = scaled_to_unit(random_trig(rng, n, n + extra(rng)), opt.N);
        f = ClassFunction(cfg.G, cfg.phi, cfg.beta, u, 0.0, opt.N);
      } else {
        MemberOptions mo;
        mo.m = opt.m;
        mo.N = opt.N;
        mo.kind = MemberKind::periodic_step;
        mo.min_period_divisor = n;
        mo.random_constant = false;
        f = random_class_member(cfg, rng, mo).f;
      }
    }
    const auto info = fourier_information(f.series(), n);
    if (abs_max(info) > 1e-8) {
      rejected[i] = 1;
      return;
    }
    norms[i] = lq_norm(f, q);
  });
  std::vector<double> excess;
  double best = -std::numeric_limits<double>::infinity();
  int rejections = 0;
  for (std::size_t i = 0; i < count; ++i) {
    if (rejected[i]) {
      ++rejections;
      continue;
    }
    excess.push_back(norms[i] - ref);
    best = std::max(best, norms[i]);
  }
  SuiteReport rep = reduce_max("taikov", excess, opt.tolerance);
  rep.reference = ref;
  rep.extra = best;
  rep.rejected = rejections;
  return rep;
}

NormIdentity l1_sup_identity(const ClassConfig& cfg, int n, std::size_t N) {
  const ClassFunction phi_n = class_standard_function(cfg, n, N);
  NormIdentity id;
  id.l1 = lq_norm(phi_n, 1.0);
  id.scaled_sup = 4.0 * n * sup_norm(phi_n.with_kernel(cfg.G.integrated()));
  id.defect = std::abs(id.l1 - id.scaled_sup);
  return id;
}

bool EquioscillationReport::holds(int n, double gap_tol, double antiperiodic_tol) const {
  return extrema == 2 * n && alternating && gap_error < gap_tol && antiperiodicity < antiperiodic_tol;
}

EquioscillationReport equioscillation(const ClassFunction& f, int n) {
  if (n < 1) throw std::invalid_argument("equioscillation needs n >= 1");
  EquioscillationReport rep;
  const auto ext = locate_extrema(f);
  rep.extrema = static_cast<int>(ext.size());
  rep.antiperiodicity = antiperiodicity_defect(f, n);
  if (ext.empty()) return rep;
  rep.alternating = true;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (std::size_t k = 0; k < ext.size(); ++k) {
    const auto& e = ext[k];
    const auto& next = ext[(k + 1) % ext.size()];
    const double gap = k + 1 < ext.size() ? next.t - e.t : next.t + two_pi - e.t;
    rep.gap_error = std::max(rep.gap_error, std::abs(gap - pi / n));
    if (e.maximum == next.maximum || (e.value > 0.0) != e.maximum) rep.alternating = false;
    lo = std::min(lo, std::abs(e.value));
    hi = std::max(hi, std::abs(e.value));
  }
  rep.level_spread = hi - lo;
  return rep;
}

}  // namespace cvdw
