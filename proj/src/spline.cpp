#include "cvdw/spline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "cvdw/kernel.hpp"

namespace cvdw {

KnotVector::KnotVector(std::vector<double> knots) : knots_(std::move(knots)) {
  if (knots_.empty() || knots_.size() % 2 != 0)
    throw std::invalid_argument("KnotVector needs a positive even number of knots");
  for (double k : knots_)
    if (!(k >= 0.0 && k < two_pi)) throw std::invalid_argument("knots must lie in [0, 2pi)");
  for (std::size_t j = 0; j + 1 < knots_.size(); ++j)
    if (!(knots_[j + 1] - knots_[j] > min_separation))
      throw std::invalid_argument("knots must be strictly increasing and separated");
  if (!(knots_.front() + two_pi - knots_.back() > min_separation))
    throw std::invalid_argument("first and last knots collapse cyclically");
}

KnotVector KnotVector::uniform(int n) {
  if (n < 1) throw std::invalid_argument("uniform knots need n >= 1");
  std::vector<double> k(static_cast<std::size_t>(2 * n));
  for (int j = 0; j < 2 * n; ++j) k[static_cast<std::size_t>(j)] = j * pi / n;
  return KnotVector(std::move(k));
}

KnotVector KnotVector::from_gaps(std::span<const double> gaps, double offset) {
  std::vector<double> k(gaps.size());
  double pos = wrap_angle(offset);
  for (std::size_t j = 0; j < gaps.size(); ++j) {
    k[j] = wrap_angle(pos);
    pos += gaps[j];
  }
  std::sort(k.begin(), k.end());
  return KnotVector(std::move(k));
}

std::vector<double> KnotVector::gaps() const {
  std::vector<double> g(knots_.size());
  for (std::size_t j = 0; j + 1 < knots_.size(); ++j) g[j] = knots_[j + 1] - knots_[j];
  g.back() = knots_.front() + two_pi - knots_.back();
  return g;
}

double eval_h(const KnotVector& xi, double t) {
  const double w = wrap_angle(t);
  const auto k = xi.knots();
  // number of knots <= w decides the sign: j knots passed means interval j+1
  const auto passed = std::upper_bound(k.begin(), k.end(), w) - k.begin();
  return passed % 2 == 1 ? 1.0 : -1.0;
}

StepFunction::StepFunction(std::vector<double> breaks, std::vector<double> levels)
    : breaks_(std::move(breaks)), levels_(std::move(levels)) {
  if (breaks_.empty() || breaks_.size() != levels_.size())
    throw std::invalid_argument("StepFunction needs matching non-empty breaks and levels");
  for (double b : breaks_)
    if (!(b >= 0.0 && b < two_pi)) throw std::invalid_argument("breaks must lie in [0, 2pi)");
  for (std::size_t i = 0; i + 1 < breaks_.size(); ++i)
    if (!(breaks_[i + 1] > breaks_[i])) throw std::invalid_argument("breaks must be strictly increasing");
}

StepFunction StepFunction::from_knots(const KnotVector& xi) {
  std::vector<double> b(xi.knots().begin(), xi.knots().end());
  std::vector<double> lv(b.size());
  for (std::size_t j = 0; j < lv.size(); ++j) lv[j] = j % 2 == 0 ? 1.0 : -1.0;
  return StepFunction(std::move(b), std::move(lv));
}

StepFunction StepFunction::constant(double level) { return StepFunction({0.0}, {level}); }

double StepFunction::piece_end(std::size_t i) const {
  return i + 1 < breaks_.size() ? breaks_[i + 1] : breaks_.front() + two_pi;
}

double StepFunction::operator()(double t) const {
  const double w = wrap_angle(t);
  const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), w);
  if (it == breaks_.begin()) return levels_.back();
  return levels_[static_cast<std::size_t>(it - breaks_.begin() - 1)];
}

double StepFunction::mean() const {
  double acc = 0.0;
  for (std::size_t i = 0; i < pieces(); ++i) acc += levels_[i] * (piece_end(i) - piece_begin(i));
  return acc / two_pi;
}

double StepFunction::sup_norm() const {
  double m = 0.0;
  for (double l : levels_) m = std::max(m, std::abs(l));
  return m;
}

StepFunction StepFunction::scaled(double factor) const {
  auto lv = levels_;
  for (double& l : lv) l *= factor;
  return StepFunction(breaks_, std::move(lv));
}

StepFunction StepFunction::shifted_clipped(double delta) const {
  auto lv = levels_;
  for (double& l : lv) l = std::clamp(l + delta, -1.0, 1.0);
  return StepFunction(breaks_, std::move(lv));
}

StepFunction StepFunction::translated(double shift) const {
  std::vector<std::pair<double, double>> pl(pieces());
  for (std::size_t i = 0; i < pieces(); ++i) pl[i] = {wrap_angle(breaks_[i] + shift), levels_[i]};
  std::sort(pl.begin(), pl.end());
  std::vector<double> b(pl.size()), lv(pl.size());
  for (std::size_t i = 0; i < pl.size(); ++i) {
    b[i] = pl[i].first;
    lv[i] = pl[i].second;
  }
  return StepFunction(std::move(b), std::move(lv));
}

FourierSeries StepFunction::fourier(int K) const {
  FourierSeries s(K, mean());
  // summation by parts: only the jumps c_i − c_{i−1} at each break contribute
  for (std::size_t i = 0; i < pieces(); ++i) {
    const double prev = levels_[i == 0 ? pieces() - 1 : i - 1];
    const double jump = (levels_[i] - prev) / pi;
    if (jump == 0.0) continue;
    const double b = breaks_[i];
    for (int k = 1; k <= K; ++k) {
      s.cos[static_cast<std::size_t>(k - 1)] -= jump * std::sin(k * b) / k;
      s.sin[static_cast<std::size_t>(k - 1)] += jump * std::cos(k * b) / k;
    }
  }
  return s;
}

FourierSeries h_fourier(const KnotVector& xi, int K) {
  if (K < 1) throw std::invalid_argument("h_fourier needs K >= 1");
  return StepFunction::from_knots(xi).fourier(K);
}

}  // namespace cvdw
