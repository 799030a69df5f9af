#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "wildbloch/arcs.hpp"
#include "wildbloch/polynomial.hpp"

namespace wildbloch {

/// Boundary target on the torus T^N with a serializable description.
///
/// Kinds: trigonometric polynomial (integer multi-indices, negative entries
/// meaning conjugate powers), piecewise constant on arcs (N = 1), modulus of
/// another boundary function, sum of boundary functions, and an opaque
/// callable for tests.
class BoundaryFunction {
 public:
  enum class Kind { Trig, Step, Abs, Sum, Callable };
  using Terms = std::map<std::vector<int>, cplx>;
  struct StepPiece {
    Arc arc;
    cplx value;
  };

  BoundaryFunction() : BoundaryFunction(trig(1, {})) {}

  static BoundaryFunction trig(int dim, Terms terms);
  static BoundaryFunction constant(int dim, cplx c);
  /// zeta_k on T^N.
  static BoundaryFunction coordinate(int dim, int k);
  static BoundaryFunction step(std::vector<StepPiece> pieces, cplx otherwise = 0.0);
  static BoundaryFunction abs(const BoundaryFunction& f);
  static BoundaryFunction sum(const BoundaryFunction& a, const BoundaryFunction& b);
  static BoundaryFunction scaled(const BoundaryFunction& f, cplx s);
  /// Boundary values of a polynomial in N variables.
  static BoundaryFunction from_polynomial(const PolynomialND& p);
  static BoundaryFunction callable(int dim, std::function<cplx(std::span<const cplx>)> fn,
                                   std::string label);

  Kind kind() const { return node_->kind; }
  int dim() const { return node_->dim; }
  const Terms& terms() const { return node_->terms; }
  const std::vector<StepPiece>& pieces() const { return node_->pieces; }
  cplx otherwise() const { return node_->otherwise; }
  const std::vector<BoundaryFunction>& children() const { return node_->children; }
  const std::string& label() const { return node_->label; }

  cplx operator()(std::span<const cplx> zeta) const;
  cplx at_angle(double theta) const;
  BoundaryFn as_fn() const;
  /// Identically zero by construction (no trig terms, zero step values, ...).
  bool is_zero() const;
  /// Degree bound of a trigonometric polynomial kind (max |n_k|), -1 otherwise.
  int trig_degree() const;

 private:
  struct Node {
    Kind kind = Kind::Trig;
    int dim = 1;
    Terms terms;
    std::vector<StepPiece> pieces;
    cplx otherwise = 0.0;
    std::vector<BoundaryFunction> children;
    std::function<cplx(std::span<const cplx>)> fn;
    std::string label;
  };
  std::shared_ptr<const Node> node_;
  explicit BoundaryFunction(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
};

/// Angles where a one-variable boundary function jumps, measured on `samples`
/// equispaced points: increments larger than `threshold` and 20x the median.
std::vector<double> measured_jumps(const BoundaryFunction& f, int samples = 8192,
                                   double threshold = 0.05);

}  // namespace wildbloch
