#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wildbloch/expr.hpp"

namespace wildbloch {

struct BlochReport {
  Domain domain;
  double value_at_origin = 0.0;  // |f(0)|
  double seminorm_sup = 0.0;
  double norm = 0.0;  // |f(0)| + seminorm_sup
  /// Present for polynomial inputs when the angular count exceeds 4 * degree.
  std::optional<double> certified_bound;
  std::vector<cplx> argmax;
  SampleGrid grid;
};

/// Grid used when the caller does not choose one: r = 0 and
/// r = 1 - 2^(-j/8) for j up to 8*24; 8(1 + degree) angles for polynomials, 512 otherwise.
SampleGrid default_norm_grid(const FunctionExpr& f);

/// |f(0)| + grid sup of (1-|z|^2)|f'| (disc), (1-|z|^2)|Rf| (ball) or
/// sum_k (1-|z_k|^2)|d_k f| (polydisc).
BlochReport bloch_norm(const FunctionExpr& f, const Domain& domain, const SampleGrid& grid);
BlochReport bloch_norm(const FunctionExpr& f);

struct ShellValue {
  double r = 0.0;
  double shell_sup = 0.0;
};

/// Per-shell sup of the disc integrand (1-|z|^2)|f'(z)| over |z| = r. `angular` = 0
/// picks the default count.
std::vector<ShellValue> little_bloch_profile(const FunctionExpr& f, const std::vector<double>& radii,
                                             int angular = 0);

class WeightSpec {
 public:
  enum class Kind { Power, LogPower, Table };

  static WeightSpec power(double beta);
  static WeightSpec log_power(double gamma);
  /// Piecewise linear through (t_i, w_i), t increasing in (0, 1]; constant past the last node
  /// and linear towards 0 at t = 0 before the first node.
  static WeightSpec table(std::vector<double> t, std::vector<double> w);

  Kind kind() const { return kind_; }
  double parameter() const { return param_; }
  const std::vector<double>& table_t() const { return t_; }
  const std::vector<double>& table_w() const { return w_; }
  std::string name() const;

  double operator()(double t) const;
  /// Non-decreasing on a 1000-point log probe of (0,1] and decaying towards 0.
  void validate() const;

 private:
  Kind kind_ = Kind::Power;
  double param_ = 1.0;
  std::vector<double> t_, w_;
};

BlochReport weighted_bloch_norm(const FunctionExpr& f, const WeightSpec& w, const SampleGrid& grid);

struct WeightTestResult {
  enum class Verdict { Diverges, Converges, Inconclusive };
  Verdict verdict = Verdict::Inconclusive;
  /// Partial integrals of w(t)^2/t over [2^-j, x] for j = j0 .. 40.
  std::vector<int> exponents;
  std::vector<double> partials;
  double last_increment = 0.0;
};

std::string to_string(WeightTestResult::Verdict v);

/// Divergence test for the integral of w(t)^2 / t near t = 0.
WeightTestResult weight_integral_test(const WeightSpec& w, double x, double tolerance = 1e-3);

}  // namespace wildbloch
