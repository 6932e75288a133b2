#pragma once

#include <string>
#include <vector>

#include "cvdw/extremal.hpp"

namespace cvdw {

enum class ClassFamily { sobolev, achieser, hardy };

/// sobolev(r), achieser(r, β) or hardy(r, β).
struct ClassTag {
  ClassFamily family = ClassFamily::sobolev;
  int r = 1;
  double beta = 0.0;

  /// Validates the parameters (std::invalid_argument otherwise).
  ClassConfig config() const;
  std::string describe() const;

  static ClassTag sobolev(int r) { return {ClassFamily::sobolev, r, 0.0}; }
  static ClassTag achieser(int r, double beta) { return {ClassFamily::achieser, r, beta}; }
  static ClassTag hardy(int r, double beta) { return {ClassFamily::hardy, r, beta}; }
};

std::string to_string(ClassFamily family);
/// Throws std::invalid_argument for unknown names.
ClassFamily parse_family(const std::string& name);

enum class WidthKind { kolmogorov, linear, gelfand, information };

std::string to_string(WidthKind kind);

/// K_r = (4/π) Σ_{j≥0} (−1)^{j(r+1)} / (2j+1)^{r+1}.
double favard_oracle(int r);

/// ‖Φ_n‖_q (q = ∞ for the sup norm).
double width_value(const ClassTag& tag, int n, double q, std::size_t N = default_grid_size);

struct WidthEvaluation {
  double value = 0.0;
  /// "closed form" (β = 0) or "spectral".
  std::string method;
  /// Same norm with Φ_n evaluated pointwise by quadrature of the convolution
  /// integral against a direct summation of K_β ∗ h_n.
  double check_value = 0.0;
  std::string check_method;
  double defect = 0.0;
};

WidthEvaluation evaluate_width(const ClassTag& tag, int n, double q, std::size_t N = default_grid_size);

struct WidthRow {
  ClassTag tag;
  WidthKind kind = WidthKind::kolmogorov;
  int n = 1;
  /// 2n − 1 or 2n.
  int index = 1;
  double q = 0.0;
  double value = 0.0;
  /// true: the width equals value; false: value is a lower bound.
  bool exact = true;
  /// Lower bound whose equality is conjectured.
  bool conjectured_exact = false;
  std::string method;
  std::string check_method;
  double defect = 0.0;
  double tolerance = 0.0;
  std::string statement;
};

struct WidthReport {
  std::vector<WidthRow> rows;

  bool passed() const;
};

/// Rows for every class, n and q: the four width kinds at indices 2n − 1 and
/// 2n. In L_q with q < ∞ only Gel'fand widths are known exactly; the other
/// kinds are emitted as lower bounds. Classes without Property B have no
/// L_q statement except the Gel'fand widths of achieser(0, β); other
/// combinations throw std::invalid_argument.
WidthReport width_table(const std::vector<ClassTag>& classes, const std::vector<int>& ns,
                        const std::vector<double>& qs, std::size_t N = default_grid_size,
                        double tolerance = 1e-8);

}  // namespace cvdw
