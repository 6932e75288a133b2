#include "cvdw/periodic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cvdw/kernel.hpp"

namespace cvdw {

double FourierSeries::operator()(double t) const {
  const int K = max_frequency();
  if (K == 0) return mean;
  const double c = std::cos(t);
  const double s = std::sin(t);
  const double two_c = 2.0 * c;
  // Clenshaw recurrences for Σ a_k cos kt and Σ b_k sin kt
  double ua1 = 0.0, ua2 = 0.0, ub1 = 0.0, ub2 = 0.0;
  for (int k = K; k >= 1; --k) {
    const double ua = cos[static_cast<std::size_t>(k - 1)] + two_c * ua1 - ua2;
    const double ub = sin[static_cast<std::size_t>(k - 1)] + two_c * ub1 - ub2;
    ua2 = ua1;
    ua1 = ua;
    ub2 = ub1;
    ub1 = ub;
  }
  return mean + (ua1 * c - ua2) + ub1 * s;
}

void FourierSeries::trim(double rel_tol) {
  double peak = std::abs(mean);
  for (std::size_t i = 0; i < cos.size(); ++i) peak = std::max({peak, std::abs(cos[i]), std::abs(sin[i])});
  const double cut = rel_tol * peak;
  std::size_t keep = cos.size();
  while (keep > 0 && std::abs(cos[keep - 1]) <= cut && std::abs(sin[keep - 1]) <= cut) --keep;
  cos.resize(keep);
  sin.resize(keep);
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

PeriodicGrid::PeriodicGrid(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < 4 || !is_power_of_two(values_.size()))
    throw std::invalid_argument("PeriodicGrid size must be a power of two >= 4");
}

double PeriodicGrid::spacing() const { return two_pi / static_cast<double>(values_.size()); }

double PeriodicGrid::t(std::size_t j) const { return spacing() * static_cast<double>(j); }

double PeriodicGrid::max() const { return *std::max_element(values_.begin(), values_.end()); }

double PeriodicGrid::min() const { return *std::min_element(values_.begin(), values_.end()); }

}  // namespace cvdw
