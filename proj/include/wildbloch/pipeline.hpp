#pragma once

#include <string>
#include <vector>

#include "wildbloch/approx.hpp"
#include "wildbloch/bloch.hpp"
#include "wildbloch/boundary.hpp"
#include "wildbloch/expr.hpp"
#include "wildbloch/inner.hpp"

namespace wildbloch {

/// sum_l prod_j p_{l,j}(z_j) on the polydisc; a single one-variable term on the disc.
struct SeparablePolynomial {
  int dim = 1;
  std::vector<std::vector<Polynomial1D>> terms;

  static SeparablePolynomial zero(int dim) { return {dim, {}}; }
  static SeparablePolynomial disc(const Polynomial1D& p);

  cplx operator()(std::span<const cplx> z) const;
  bool is_zero() const;
  int max_degree() const;
  FunctionExpr to_expr() const;
  /// Expanded PolynomialND; throws when the expansion exceeds `max_terms` monomials.
  PolynomialND expand(std::size_t max_terms = 1u << 20) const;
};

struct SeparableBloch {
  double value_at_origin = 0.0;
  double seminorm_sup = 0.0;
  double norm = 0.0;
  /// sum_l sum_k ||p_{l,k}||_B prod_{j != k} sup|p_{l,j}|, from one-variable estimates.
  double product_bound = 0.0;
};

/// Polydisc Bloch norm of a separable polynomial on a product grid built from
/// per-axis tables (radii x angles per axis). Empty radii pick a default.
SeparableBloch separable_bloch(const SeparablePolynomial& f, std::vector<double> radii = {},
                               int angular = 0);

/// {zeta in F : |I(r zeta)| >= 0.999 and arg J(r zeta) in F} with J = z I and r the probe
/// radius. `pullback` false means the set is F itself.
struct PullbackSet {
  ArcSet F = ArcSet::full();
  InnerSpec inner;
  bool pullback = false;

  bool contains(cplx zeta) const;
};

/// E = intersection over l of prod_j E_{l,j}.
struct GoodSet {
  int dim = 1;
  std::vector<std::vector<PullbackSet>> factors;

  static GoodSet full(int dim) { return {dim, {}}; }
  bool contains(std::span<const cplx> zeta) const;
  MeasureEstimate measure(std::size_t samples, std::uint64_t seed) const;
};

struct BlockParams {
  double eps1 = 0.5;  // sup-error budget
  double eps2 = 0.5;  // measure defect budget
  /// Quotient target; <= 0 derives eps1 / (4 * multiplier constant of Q).
  double eta = 0.0;
  int degree_cap = 1024;
  int max_chain = 8;
  /// Truncation radius; <= 0 searches r = 1 - 2^-j.
  double r = 0.0;

  void validate() const;
};

struct PipelineOptions {
  int truncation_degree_cap = 8192;
  int j_min = 4;
  int j_max = 10;
  std::size_t measure_samples = 20000;
  int decompose_terms = 16;
  std::uint64_t seed = 1;
};

struct BlockReport {
  double f0 = 0.0;
  double bloch = 0.0;
  double sup_error = 0.0;
  double measure_F = 1.0;
  double measure_E = 1.0;
  double measure_half_width = 0.0;
  std::size_t e_samples = 0;
  double eta = 0.0;
  double multiplier = 0.0;
  double achieved_quotient = 0.0;
  int chain_length = 0;
  int q_degree = 0;
  int p_degree = 0;
  double q_margin = 0.0;
  double p_margin = 0.0;
  double q_sup = 0.0;
  double p_delta = 0.0;
};

struct BlockResult {
  bool ok = false;
  /// First stage that missed its target; empty when none did.
  std::string stage;
  std::string reason;
  FunctionExpr f = FunctionExpr::poly(Polynomial1D());
  PullbackSet E;
  Polynomial1D Q, P;
  std::vector<double> gap_centers;
  BlockReport report;
};

/// f = Q (P o J) with J = z I_eta on the disc.
BlockResult build_block(const BoundaryFunction& phi, const BlockParams& params, const InnerSpec& base,
                        const PipelineOptions& opt = {});

struct SimulReport {
  double f0 = 0.0;
  double bloch = 0.0;
  double bloch_bound = 0.0;
  double sup_error = 0.0;
  double measure_E = 1.0;
  double measure_half_width = 0.0;
  std::size_t e_samples = 0;
  double eta = 0.0;
  std::vector<int> q_degrees, p_degrees, chain_lengths;
  std::vector<double> achieved_quotients;
  double pre_truncation_bloch = 0.0;
  double pre_truncation_sup_error = 0.0;
  double truncation_r = 0.0;
  double truncation_tail = 0.0;
  int truncation_degree = 0;
  int terms = 0;
  double decomposition_error = 0.0;
  /// Polydisc only: eta < eps / (2 N M max prod_{j != k} sup|f_{l,j}|).
  bool eta_condition = true;
  double telescoping_lhs = 0.0;
  double telescoping_rhs = 0.0;
};

struct SimulApproxResult {
  bool ok = false;
  std::string stage;
  std::string reason;
  double eps = 0.0;
  SeparablePolynomial f;
  GoodSet E;
  SimulReport report;
};

SimulApproxResult simul_approx_disc(const BoundaryFunction& phi, double eps, const InnerSpec& base,
                                    const PipelineOptions& opt = {});
SimulApproxResult simul_approx_polydisc(const BoundaryFunction& phi, double eps, int n, const InnerSpec& base,
                                        const PipelineOptions& opt = {});

struct SimulCheck {
  double sup_error = 0.0;
  double measure_E = 0.0;
  double measure_half_width = 0.0;
  double bloch = 0.0;
  double f0 = 0.0;
};

/// Re-measures a result with a fresh seed and a denser norm grid.
SimulCheck remeasure(const SimulApproxResult& r, const BoundaryFunction& phi, std::size_t samples,
                     std::uint64_t seed);

/// sup over E-samples of |f - phi|, the E samples and the torus sample count.
std::pair<double, std::size_t> sup_error_on(const GoodSet& e, const std::function<cplx(std::span<const cplx>)>& f,
                                            const BoundaryFunction& phi, std::size_t samples,
                                            std::uint64_t seed);

}  // namespace wildbloch
