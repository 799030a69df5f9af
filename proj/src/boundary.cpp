#include "wildbloch/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wildbloch {

BoundaryFunction BoundaryFunction::trig(int dim, Terms terms) {
  if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("boundary function dimension out of range");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Trig;
  n->dim = dim;
  for (auto& [a, c] : terms) {
    if (static_cast<int>(a.size()) != dim) throw std::invalid_argument("trig multi-index size mismatch");
    if (c != cplx(0.0)) n->terms[a] += c;
  }
  return BoundaryFunction(n);
}

BoundaryFunction BoundaryFunction::constant(int dim, cplx c) {
  return trig(dim, {{std::vector<int>(dim, 0), c}});
}

BoundaryFunction BoundaryFunction::coordinate(int dim, int k) {
  if (k < 0 || k >= dim) throw std::invalid_argument("coordinate index out of range");
  std::vector<int> a(dim, 0);
  a[k] = 1;
  return trig(dim, {{a, 1.0}});
}

BoundaryFunction BoundaryFunction::step(std::vector<StepPiece> pieces, cplx otherwise) {
  for (const auto& p : pieces)
    if (p.arc.end < p.arc.start) throw std::invalid_argument("step arc end precedes start");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Step;
  n->dim = 1;
  n->pieces = std::move(pieces);
  n->otherwise = otherwise;
  return BoundaryFunction(n);
}

BoundaryFunction BoundaryFunction::abs(const BoundaryFunction& f) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Abs;
  n->dim = f.dim();
  n->children = {f};
  return BoundaryFunction(n);
}

BoundaryFunction BoundaryFunction::sum(const BoundaryFunction& a, const BoundaryFunction& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("boundary sum: dimension mismatch");
  if (a.kind() == Kind::Trig && b.kind() == Kind::Trig) {
    Terms t = a.terms();
    for (const auto& [idx, c] : b.terms()) t[idx] += c;
    Terms clean;
    for (const auto& [idx, c] : t)
      if (c != cplx(0.0)) clean[idx] = c;
    return trig(a.dim(), clean);
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::Sum;
  n->dim = a.dim();
  n->children = {a, b};
  return BoundaryFunction(n);
}

BoundaryFunction BoundaryFunction::scaled(const BoundaryFunction& f, cplx s) {
  switch (f.kind()) {
    case Kind::Trig: {
      Terms t;
      for (const auto& [idx, c] : f.terms()) t[idx] = s * c;
      return trig(f.dim(), t);
    }
    case Kind::Step: {
      auto p = f.pieces();
      for (auto& q : p) q.value *= s;
      return step(p, s * f.otherwise());
    }
    default: {
      auto inner = f;
      return callable(
          f.dim(), [inner, s](std::span<const cplx> z) { return s * inner(z); },
          "scaled(" + (f.label().empty() ? std::string("f") : f.label()) + ")");
    }
  }
}

BoundaryFunction BoundaryFunction::from_polynomial(const PolynomialND& p) {
  Terms t;
  for (const auto& [a, c] : p.terms()) t[a] = c;
  return trig(p.dim(), t);
}

BoundaryFunction BoundaryFunction::callable(int dim, std::function<cplx(std::span<const cplx>)> fn,
                                            std::string label) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Callable;
  n->dim = dim;
  n->fn = std::move(fn);
  n->label = std::move(label);
  return BoundaryFunction(n);
}

cplx BoundaryFunction::operator()(std::span<const cplx> zeta) const {
  if (static_cast<int>(zeta.size()) != dim()) throw std::invalid_argument("boundary point dimension mismatch");
  switch (kind()) {
    case Kind::Trig: {
      cplx s = 0.0;
      for (const auto& [a, c] : terms()) {
        cplx t = c;
        for (int k = 0; k < dim(); ++k) {
          const int e = a[k];
          if (e == 0) continue;
          const cplx base = e > 0 ? zeta[k] : std::conj(zeta[k]);
          const int m = e > 0 ? e : -e;
          cplx p = 1.0;
          for (int i = 0; i < m; ++i) p *= base;
          t *= p;
        }
        s += t;
      }
      return s;
    }
    case Kind::Step: {
      const double th = std::arg(zeta[0]);
      for (const auto& p : pieces())
        if (ArcSet({p.arc}).contains(th)) return p.value;
      return otherwise();
    }
    case Kind::Abs: return std::abs(children()[0](zeta));
    case Kind::Sum: return children()[0](zeta) + children()[1](zeta);
    case Kind::Callable: return node_->fn(zeta);
  }
  return 0.0;
}

cplx BoundaryFunction::at_angle(double theta) const {
  const cplx z[1] = {std::polar(1.0, theta)};
  return (*this)(std::span<const cplx>(z, 1));
}

BoundaryFn BoundaryFunction::as_fn() const {
  BoundaryFunction self = *this;
  return [self](std::span<const cplx> z) { return self(z); };
}

bool BoundaryFunction::is_zero() const {
  switch (kind()) {
    case Kind::Trig: return terms().empty();
    case Kind::Step: {
      if (otherwise() != cplx(0.0)) return false;
      for (const auto& p : pieces())
        if (p.value != cplx(0.0)) return false;
      return true;
    }
    case Kind::Abs: return children()[0].is_zero();
    case Kind::Sum: return children()[0].is_zero() && children()[1].is_zero();
    case Kind::Callable: return false;
  }
  return false;
}

int BoundaryFunction::trig_degree() const {
  if (kind() != Kind::Trig) return -1;
  int d = 0;
  for (const auto& [a, c] : terms())
    for (int e : a) d = std::max(d, e < 0 ? -e : e);
  return d;
}

std::vector<double> measured_jumps(const BoundaryFunction& f, int samples, double threshold) {
  if (f.dim() != 1) throw std::invalid_argument("measured_jumps: one-variable functions only");
  std::vector<cplx> v(samples);
  for (int j = 0; j < samples; ++j) v[j] = f.at_angle(kTwoPi * j / samples);
  std::vector<double> inc(samples);
  for (int j = 0; j < samples; ++j) inc[j] = std::abs(v[(j + 1) % samples] - v[j]);
  std::vector<double> sorted = inc;
  std::nth_element(sorted.begin(), sorted.begin() + samples / 2, sorted.end());
  const double median = sorted[samples / 2];
  std::vector<double> out;
  for (int j = 0; j < samples; ++j)
    if (inc[j] > threshold && inc[j] > 20.0 * median) out.push_back(kTwoPi * (j + 0.5) / samples);
  return out;
}

}  // namespace wildbloch
