#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "wildbloch/dual.hpp"
#include "wildbloch/inner.hpp"
#include "wildbloch/polynomial.hpp"

namespace wildbloch {

/// Immutable expression tree for a holomorphic function on the disc, the
/// polydisc or the ball. Nodes are shared, so copies are cheap and thread-safe.
class FunctionExpr {
 public:
  enum class Kind { Poly1d, PolyNd, Inner, Sum, Product, Compose, Dilate, Radialize };

  static FunctionExpr poly(Polynomial1D p);
  /// `domain` must be disc (dim 1), polydisc(N) or ball(N) with N = p.dim().
  static FunctionExpr poly(PolynomialND p, Domain domain);
  static FunctionExpr inner(InnerSpec spec);
  static FunctionExpr identity() { return poly(Polynomial1D({0.0, 1.0})); }
  static FunctionExpr sum(const FunctionExpr& a, const FunctionExpr& b);
  static FunctionExpr product(const FunctionExpr& a, const FunctionExpr& b);
  /// outer(inner(z)); outer lives on the disc, inner's range is probed to stay inside it.
  static FunctionExpr compose(const FunctionExpr& outer, const FunctionExpr& inner);
  /// f(r z), 0 < r <= 1. Nested dilations collapse into one.
  static FunctionExpr dilate(const FunctionExpr& f, double r);
  /// z f(z) for a disc function f.
  static FunctionExpr radialize(const FunctionExpr& f);

  Kind kind() const;
  const Domain& domain() const;
  int dim() const { return domain().dim; }
  const std::vector<FunctionExpr>& children() const;
  const Polynomial1D& poly1d() const;
  const PolynomialND& polynd() const;
  const InnerSpec& inner_spec() const;
  double dilation() const;

  /// True for Poly1d and PolyNd leaves.
  bool is_polynomial() const;
  /// PolynomialND view of a polynomial leaf.
  PolynomialND as_polynomial() const;

  bool operator==(const FunctionExpr& o) const;

 private:
  struct Node;
  std::shared_ptr<const Node> node_;
  explicit FunctionExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
};

std::string to_string(FunctionExpr::Kind k);

/// Throws std::invalid_argument unless z lies strictly inside f's domain.
void check_interior(const Domain& d, std::span<const cplx> z);

cplx eval(const FunctionExpr& f, std::span<const cplx> z);
cplx eval(const FunctionExpr& f, cplx z);
/// Value, gradient and saturation flag by forward-mode differentiation.
Jet eval_jet(const FunctionExpr& f, std::span<const cplx> z);
std::vector<cplx> complex_gradient(const FunctionExpr& f, std::span<const cplx> z);
/// sum_k z_k df/dz_k.
cplx radial_derivative(const FunctionExpr& f, std::span<const cplx> z);

struct TruncationResult {
  PolynomialND poly;
  double tail_bound = 0.0;
  bool ok = true;
  double rho = 0.0;
  int samples_per_axis = 0;
};

/// Degree <= d section (per variable) of f_r(z) = f(r z). Coefficients come from
/// an FFT of f on the torus of radius rho = r + (1 - r)/2 with 4(d+1) samples
/// per axis. `tail_bound` estimates sup over the closed polydisc of
/// |f_r - section| from the measured coefficient decay; ok is false when it
/// exceeds `tol`.
TruncationResult taylor_truncate(const FunctionExpr& f, double r, int d, double tol = 1e-8);

/// Non-tangential approach path r (zeta - w) + w.
struct PathSpec {
  cplx zeta = 1.0;
  cplx w = 0.0;
  std::vector<double> schedule;
};

std::vector<cplx> path_points(const PathSpec& p, const std::vector<double>& radii);

}  // namespace wildbloch
