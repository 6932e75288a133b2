#include "cvdw/oscillation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "cvdw/analysis.hpp"
#include "cvdw/parallel.hpp"
#include "cvdw/spectral.hpp"
#include "cvdw/spline.hpp"

namespace cvdw {

namespace {

int sgn(double v) { return (v > 0.0) - (v < 0.0); }

std::size_t first_nonzero(std::span<const double> x) {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] != 0.0) return i;
  return x.size();
}

std::vector<double> thresholded(const PeriodicGrid& f, double eps) {
  std::vector<double> v(f.values().begin(), f.values().end());
  for (double& x : v)
    if (std::abs(x) < eps) x = 0.0;
  return v;
}

StepFunction random_step(std::mt19937_64& rng, int max_pieces) {
  std::uniform_int_distribution<int> pieces_dist(1, max_pieces);
  std::uniform_real_distribution<double> pos(0.0, two_pi);
  std::uniform_real_distribution<double> level(-1.0, 1.0);
  const int pieces = pieces_dist(rng);
  std::vector<double> breaks;
  while (static_cast<int>(breaks.size()) < pieces) {
    const double b = pos(rng);
    if (std::none_of(breaks.begin(), breaks.end(), [b](double o) { return std::abs(o - b) < 1e-3; }))
      breaks.push_back(b);
  }
  std::sort(breaks.begin(), breaks.end());
  std::vector<double> levels(breaks.size());
  for (double& l : levels) {
    do l = level(rng);
    while (l == 0.0);
  }
  return StepFunction(std::move(breaks), std::move(levels));
}

CvdReport reduce(const std::vector<std::pair<int, int>>& counts) {
  CvdReport rep;
  rep.trials = static_cast<int>(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const auto [out, in] = counts[i];
    if (out > in) {
      if (rep.violations == 0) rep.worst_trial = static_cast<int>(i);
      ++rep.violations;
    }
    if (i == 0 || out > rep.max_output_count) {
      rep.max_output_count = out;
      rep.input_count_at_max = in;
    }
  }
  return rep;
}

}  // namespace

int sign_changes(std::span<const double> x) {
  int last = 0;
  int count = 0;
  for (double v : x) {
    const int s = sgn(v);
    if (s == 0) continue;
    if (last != 0 && s != last) ++count;
    last = s;
  }
  if (last == 0) throw std::invalid_argument("sign count of an all-zero vector");
  return count;
}

int cyclic_sign_changes(std::span<const double> x) {
  const std::size_t k = first_nonzero(x);
  if (k == x.size()) throw std::invalid_argument("sign count of an all-zero vector");
  int count = 0;
  int last = sgn(x[k]);
  for (std::size_t j = 1; j <= x.size(); ++j) {
    const int s = sgn(x[(k + j) % x.size()]);
    if (s == 0) continue;
    if (s != last) ++count;
    last = s;
  }
  return count;
}

int max_cyclic_sign_changes(std::span<const double> x) {
  const std::size_t n = x.size();
  const std::size_t k = first_nonzero(x);
  if (k == n) return static_cast<int>(n % 2 == 0 ? n : n - 1);
  int count = 0;
  int last = sgn(x[k]);
  int run = 0;
  for (std::size_t j = 1; j <= n; ++j) {
    const int s = sgn(x[(k + j) % n]);
    if (s == 0) {
      ++run;
      continue;
    }
    // a run of `run` zeros between two nonzero entries allows run+1 changes
    // when the parity matches the end signs, otherwise run
    const bool differ = s != last;
    count += ((run + 1) % 2 == 1) == differ ? run + 1 : run;
    last = s;
    run = 0;
  }
  return count;
}

double default_epsilon(const PeriodicGrid& f) {
  const double range = f.max() - f.min();
  return range > 0.0 ? 1e-8 * range : 1e-300;
}

SignCountReport sampled_sign_report(const PeriodicGrid& f, double eps) {
  SignCountReport rep;
  rep.epsilon = eps > 0.0 ? eps : default_epsilon(f);
  const auto v = thresholded(f, rep.epsilon);
  const std::size_t k = first_nonzero(v);
  if (k == v.size()) return rep;
  const std::size_t N = v.size();
  int last = sgn(v[k]);
  std::size_t last_idx = k;
  for (std::size_t j = 1; j <= N; ++j) {
    const std::size_t idx = (k + j) % N;
    const int s = sgn(v[idx]);
    if (s == 0) continue;
    if (s != last) {
      ++rep.count;
      const double a = f.t(last_idx);
      double b = f.t(idx);
      if (b < a) b += two_pi;
      rep.crossings.push_back(wrap_angle(0.5 * (a + b)));
    }
    last = s;
    last_idx = idx;
  }
  std::sort(rep.crossings.begin(), rep.crossings.end());
  return rep;
}

int sampled_Sc(const PeriodicGrid& f, double eps) { return sampled_sign_report(f, eps).count; }

int sampled_Zc(const PeriodicGrid& f, double eps) {
  const auto v = thresholded(f, eps > 0.0 ? eps : default_epsilon(f));
  return max_cyclic_sign_changes(v);
}

CvdReport check_cvd(const KernelSpec& G, int trials, std::uint64_t seed, int max_pieces, std::size_t N) {
  if (trials < 1) throw std::invalid_argument("check_cvd needs trials >= 1");
  std::vector<std::pair<int, int>> counts(static_cast<std::size_t>(trials));
  parallel_for(counts.size(), [&](std::size_t i) {
    auto rng = trial_rng(seed, i);
    const StepFunction h = random_step(rng, max_pieces);
    const int in = h.pieces() == 1 ? 0 : cyclic_sign_changes(h.levels());
    const ClassFunction out(G, LinkFunction::phi1, 0.0, h, 0.0, N);
    counts[i] = {sampled_Sc(out.sample(N)), in};
  });
  return reduce(counts);
}

CvdReport check_property_b(int r, int trials, std::uint64_t seed, int max_degree, std::size_t N) {
  if (trials < 1) throw std::invalid_argument("check_property_b needs trials >= 1");
  const KernelSpec G = KernelSpec::bernoulli(r);
  std::vector<std::pair<int, int>> counts(static_cast<std::size_t>(trials));
  parallel_for(counts.size(), [&](std::size_t i) {
    auto rng = trial_rng(seed, i);
    std::uniform_int_distribution<int> deg_dist(1, max_degree);
    std::normal_distribution<double> coef(0.0, 1.0);
    const int deg = deg_dist(rng);
    FourierSeries phi(deg, 0.0);
    for (int k = 0; k < deg; ++k) {
      phi.cos[static_cast<std::size_t>(k)] = coef(rng);
      phi.sin[static_cast<std::size_t>(k)] = coef(rng);
    }
    FourierSeries psi = convolve(G, phi);
    const PeriodicGrid base = synthesize(psi, N);
    const double half_range = 0.5 * (base.max() - base.min());
    std::uniform_real_distribution<double> shift(-1.2 * half_range, 1.2 * half_range);
    psi.mean = shift(rng);
    counts[i] = {sampled_Sc(synthesize(psi, N)), sampled_Sc(synthesize(phi, N))};
  });
  return reduce(counts);
}

std::vector<std::size_t> grid_extrema(const PeriodicGrid& f) {
  const std::size_t N = f.size();
  std::vector<double> diff(N);
  for (std::size_t j = 0; j < N; ++j) diff[j] = f[(j + 1) % N] - f[j];
  std::vector<std::size_t> ext;
  const std::size_t k = first_nonzero(diff);
  if (k == N) return ext;
  int last = sgn(diff[k]);
  for (std::size_t j = 1; j <= N; ++j) {
    const std::size_t idx = (k + j) % N;
    const int s = sgn(diff[idx]);
    if (s == 0) continue;
    // diff[idx] covers [idx, idx+1]; a flip means idx is an extremum
    if (s != last) ext.push_back(idx);
    last = s;
  }
  std::sort(ext.begin(), ext.end());
  return ext;
}

MuReport check_mu_property(const PeriodicGrid& f, const PeriodicGrid& psi, int shifts) {
  if (f.size() != psi.size()) throw std::invalid_argument("check_mu_property needs equal grid sizes");
  if (shifts < 1) throw std::invalid_argument("check_mu_property needs shifts >= 1");
  const std::size_t N = psi.size();
  const auto ext = grid_extrema(psi);
  MuReport rep;
  if (ext.size() < 2) return rep;
  const double eps = 1e-8 * std::max(psi.max() - psi.min(), 1e-300);
  std::vector<double> d;
  for (int s = 0; s < shifts; ++s) {
    const std::size_t offset = static_cast<std::size_t>(s) * N / static_cast<std::size_t>(shifts);
    for (std::size_t e = 0; e < ext.size(); ++e) {
      const std::size_t begin = ext[e];
      std::size_t end = ext[(e + 1) % ext.size()];
      if (end <= begin) end += N;
      const bool decreasing = psi[end % N] < psi[begin];
      d.clear();
      for (std::size_t j = begin; j <= end; ++j) {
        const double v = psi[j % N] - f[(j + offset) % N];
        d.push_back(std::abs(v) < eps ? 0.0 : v);
      }
      int changes = 0;
      int first = 0;
      int last = 0;
      for (double v : d) {
        const int sg = sgn(v);
        if (sg == 0) continue;
        if (first == 0) first = sg;
        if (last != 0 && sg != last) ++changes;
        last = sg;
      }
      const bool wrong_direction = changes == 1 && (decreasing ? first < 0 : first > 0);
      if (changes > 1 || wrong_direction) {
        rep.holds = false;
        rep.shift = two_pi * static_cast<double>(offset) / static_cast<double>(N);
        rep.interval_begin = psi.t(begin);
        rep.interval_end = psi.t(end % N);
        rep.changes = changes;
        return rep;
      }
    }
  }
  return rep;
}

bool check_regular(const PeriodicGrid& psi, int n) {
  if (n < 1) throw std::invalid_argument("check_regular needs n >= 1");
  const FourierSeries s = analyze(psi);
  for (int k = 1; k <= s.max_frequency(); ++k)
    if (k % n != 0 && std::hypot(s.a(k), s.b(k)) > 1e-8) return false;
  const std::size_t N = psi.size();
  std::vector<double> diff(N);
  const double tiny = 1e-14 * std::max(psi.max() - psi.min(), 1e-300);
  int zeros = 0;
  for (std::size_t j = 0; j < N; ++j) {
    diff[j] = psi[(j + 1) % N] - psi[j];
    if (std::abs(diff[j]) < tiny) {
      diff[j] = 0.0;
      ++zeros;
    }
  }
  if (zeros == static_cast<int>(N)) return false;
  // a zero difference is allowed only at a flat extremum step, never in a run
  for (std::size_t j = 0; j < N; ++j)
    if (diff[j] == 0.0 && diff[(j + 1) % N] == 0.0) return false;
  return cyclic_sign_changes(diff) == 2 * n;
}

bool check_regular(const ClassFunction& psi, int n) {
  if (n < 1) throw std::invalid_argument("check_regular needs n >= 1");
  const PeriodicGrid g = psi.sample();
  const double range = g.max() - g.min();
  if (!(range > 0.0)) return false;
  if (period_defect(psi, n) > 1e-10 * range) return false;
  const auto ext = locate_extrema(psi);
  if (ext.size() != static_cast<std::size_t>(2 * n)) return false;
  for (std::size_t k = 0; k < ext.size(); ++k)
    if (ext[k].maximum == ext[(k + 1) % ext.size()].maximum) return false;
  return true;
}

}  // namespace cvdw
