#include "wildbloch/expr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wildbloch/fft.hpp"

namespace wildbloch {

struct FunctionExpr::Node {
  Kind kind = Kind::Poly1d;
  Domain domain;
  Polynomial1D p1;
  PolynomialND pn;
  InnerSpec inner;
  double r = 1.0;
  std::vector<FunctionExpr> children;
};

std::string to_string(FunctionExpr::Kind k) {
  switch (k) {
    case FunctionExpr::Kind::Poly1d: return "poly1d";
    case FunctionExpr::Kind::PolyNd: return "polyNd";
    case FunctionExpr::Kind::Inner: return "inner";
    case FunctionExpr::Kind::Sum: return "sum";
    case FunctionExpr::Kind::Product: return "product";
    case FunctionExpr::Kind::Compose: return "compose";
    case FunctionExpr::Kind::Dilate: return "dilate";
    case FunctionExpr::Kind::Radialize: return "radialize";
  }
  return "?";
}

FunctionExpr FunctionExpr::poly(Polynomial1D p) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Poly1d;
  n->domain = Domain::disc();
  n->p1 = std::move(p);
  return FunctionExpr(n);
}

FunctionExpr FunctionExpr::poly(PolynomialND p, Domain domain) {
  if (!domain.is_interior()) throw std::invalid_argument("polynomial domain must be disc, polydisc or ball");
  if (domain.dim != p.dim()) throw std::invalid_argument("polynomial dimension does not match domain");
  auto n = std::make_shared<Node>();
  n->kind = Kind::PolyNd;
  n->domain = domain;
  n->pn = std::move(p);
  return FunctionExpr(n);
}

FunctionExpr FunctionExpr::inner(InnerSpec spec) {
  spec.validate();
  auto n = std::make_shared<Node>();
  n->kind = Kind::Inner;
  n->domain = Domain::disc();
  n->inner = std::move(spec);
  return FunctionExpr(n);
}

namespace {

bool same_domain(const Domain& a, const Domain& b) {
  if (a.dim == 1 && b.dim == 1) return true;  // disc, polydisc(1) and ball(1) coincide
  return a == b;
}

}  // namespace

FunctionExpr FunctionExpr::sum(const FunctionExpr& a, const FunctionExpr& b) {
  if (!same_domain(a.domain(), b.domain())) throw std::invalid_argument("sum: domain mismatch");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Sum;
  n->domain = a.domain();
  n->children = {a, b};
  return FunctionExpr(n);
}

FunctionExpr FunctionExpr::product(const FunctionExpr& a, const FunctionExpr& b) {
  if (!same_domain(a.domain(), b.domain())) throw std::invalid_argument("product: domain mismatch");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Product;
  n->domain = a.domain();
  n->children = {a, b};
  return FunctionExpr(n);
}

namespace {

std::vector<std::vector<cplx>> probe_points(const Domain& d) {
  std::vector<std::vector<cplx>> pts;
  const double radii[] = {0.0, 0.25, 0.5, 0.75, 0.9, 0.99};
  if (d.dim == 1) {
    for (double r : radii)
      for (int k = 0; k < 64; ++k) pts.push_back({std::polar(r, kTwoPi * k / 64)});
    return pts;
  }
  Rng rng(0x9e0be);
  for (int i = 0; i < 512; ++i) {
    std::vector<cplx> z(d.dim);
    const double rr = radii[i % 6];
    if (d.kind == DomainKind::Ball) {
      double s = 0.0;
      for (auto& c : z) {
        c = {rng.normal(), rng.normal()};
        s += std::norm(c);
      }
      for (auto& c : z) c *= rr / std::sqrt(s);
    } else {
      for (auto& c : z) c = std::polar(rr, kTwoPi * rng.uniform());
    }
    pts.push_back(z);
  }
  return pts;
}

}  // namespace

FunctionExpr FunctionExpr::compose(const FunctionExpr& outer, const FunctionExpr& inner) {
  if (outer.dim() != 1) throw std::invalid_argument("compose: outer function must live on the disc");
  for (const auto& p : probe_points(inner.domain())) {
    const cplx w = eval(inner, p);
    if (!(std::abs(w) < 1.0))
      throw std::invalid_argument("compose: inner function leaves the unit disc on the probe grid");
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::Compose;
  n->domain = inner.domain();
  n->children = {outer, inner};
  return FunctionExpr(n);
}

FunctionExpr FunctionExpr::dilate(const FunctionExpr& f, double r) {
  if (!(r > 0.0 && r <= 1.0)) throw std::invalid_argument("dilate: factor must lie in (0,1]");
  if (f.kind() == Kind::Dilate) return dilate(f.children()[0], f.dilation() * r);
  auto n = std::make_shared<Node>();
  n->kind = Kind::Dilate;
  n->domain = f.domain();
  n->r = r;
  n->children = {f};
  return FunctionExpr(n);
}

FunctionExpr FunctionExpr::radialize(const FunctionExpr& f) {
  if (f.dim() != 1) throw std::invalid_argument("radialize: argument must live on the disc");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Radialize;
  n->domain = Domain::disc();
  n->children = {f};
  return FunctionExpr(n);
}

FunctionExpr::Kind FunctionExpr::kind() const { return node_->kind; }
const Domain& FunctionExpr::domain() const { return node_->domain; }
const std::vector<FunctionExpr>& FunctionExpr::children() const { return node_->children; }
const Polynomial1D& FunctionExpr::poly1d() const { return node_->p1; }
const PolynomialND& FunctionExpr::polynd() const { return node_->pn; }
const InnerSpec& FunctionExpr::inner_spec() const { return node_->inner; }
double FunctionExpr::dilation() const { return node_->r; }

bool FunctionExpr::is_polynomial() const {
  return node_->kind == Kind::Poly1d || node_->kind == Kind::PolyNd;
}

PolynomialND FunctionExpr::as_polynomial() const {
  if (node_->kind == Kind::Poly1d) return PolynomialND::from_1d(node_->p1, 1, 0);
  if (node_->kind == Kind::PolyNd) return node_->pn;
  throw std::invalid_argument("expression is not a polynomial leaf");
}

bool FunctionExpr::operator==(const FunctionExpr& o) const {
  if (node_ == o.node_) return true;
  const Node& a = *node_;
  const Node& b = *o.node_;
  return a.kind == b.kind && a.domain == b.domain && a.p1 == b.p1 && a.pn == b.pn &&
         a.inner == b.inner && a.r == b.r && a.children == b.children;
}

void check_interior(const Domain& d, std::span<const cplx> z) {
  if (static_cast<int>(z.size()) != d.dim) throw std::invalid_argument("point dimension does not match domain");
  bool ok = true;
  if (d.kind == DomainKind::Ball) {
    double s = 0.0;
    for (const cplx& c : z) s += std::norm(c);
    ok = s < 1.0;
  } else {
    for (const cplx& c : z) ok = ok && std::abs(c) < 1.0;
  }
  for (const cplx& c : z) ok = ok && std::isfinite(c.real()) && std::isfinite(c.imag());
  if (!ok) throw std::invalid_argument("point is not strictly inside the domain");
}

namespace {

Jet jet_rec(const FunctionExpr& f, std::span<const cplx> z) {
  const int n = static_cast<int>(z.size());
  switch (f.kind()) {
    case FunctionExpr::Kind::Poly1d: {
      auto [v, d] = f.poly1d().eval_with_derivative(z[0]);
      Jet j = Jet::constant(v, 1);
      j.d[0] = d;
      return j;
    }
    case FunctionExpr::Kind::PolyNd: {
      Jet j = Jet::constant(f.polynd()(z), n);
      const auto g = f.polynd().gradient(z);
      for (int k = 0; k < n; ++k) j.d[k] = g[k];
      return j;
    }
    case FunctionExpr::Kind::Inner: {
      if (!(std::abs(z[0]) < 1.0)) throw std::invalid_argument("inner atom evaluated outside the disc");
      const InnerValue v = inner_eval(f.inner_spec(), z[0]);
      Jet j = Jet::constant(v.value, 1);
      j.d[0] = v.derivative;
      j.saturated = v.underflow || v.defect < 2e-14;
      return j;
    }
    case FunctionExpr::Kind::Sum:
      return jet_rec(f.children()[0], z) + jet_rec(f.children()[1], z);
    case FunctionExpr::Kind::Product:
      return jet_rec(f.children()[0], z) * jet_rec(f.children()[1], z);
    case FunctionExpr::Kind::Compose: {
      const Jet in = jet_rec(f.children()[1], z);
      if (!(std::abs(in.v) < 1.0))
        throw std::invalid_argument("compose: inner value left the unit disc");
      const cplx w[1] = {in.v};
      const Jet out = jet_rec(f.children()[0], std::span<const cplx>(w, 1));
      Jet r = chain(out.v, out.d[0], in);
      r.saturated = in.saturated || out.saturated;
      return r;
    }
    case FunctionExpr::Kind::Dilate: {
      const double r = f.dilation();
      std::vector<cplx> zs(z.begin(), z.end());
      for (auto& c : zs) c *= r;
      Jet j = jet_rec(f.children()[0], zs);
      for (int k = 0; k < j.n; ++k) j.d[k] *= r;
      return j;
    }
    case FunctionExpr::Kind::Radialize: {
      const Jet c = jet_rec(f.children()[0], z);
      Jet j = c;
      j.v = z[0] * c.v;
      j.d[0] = c.v + z[0] * c.d[0];
      return j;
    }
  }
  return {};
}

}  // namespace

Jet eval_jet(const FunctionExpr& f, std::span<const cplx> z) {
  check_interior(f.domain(), z);
  Jet j = jet_rec(f, z);
  j.n = f.dim();
  if (!std::isfinite(j.v.real()) || !std::isfinite(j.v.imag()))
    throw NumericalError("eval: non-finite value", std::vector<cplx>(z.begin(), z.end()));
  return j;
}

cplx eval(const FunctionExpr& f, std::span<const cplx> z) { return eval_jet(f, z).v; }

cplx eval(const FunctionExpr& f, cplx z) {
  const cplx p[1] = {z};
  return eval(f, std::span<const cplx>(p, 1));
}

std::vector<cplx> complex_gradient(const FunctionExpr& f, std::span<const cplx> z) {
  const Jet j = eval_jet(f, z);
  return std::vector<cplx>(j.d.begin(), j.d.begin() + f.dim());
}

cplx radial_derivative(const FunctionExpr& f, std::span<const cplx> z) {
  const Jet j = eval_jet(f, z);
  cplx s = 0.0;
  for (int k = 0; k < f.dim(); ++k) s += z[k] * j.d[k];
  return s;
}

// ---------------------------------------------------------------------------

TruncationResult taylor_truncate(const FunctionExpr& f, double r, int d, double tol) {
  if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("taylor_truncate: r must lie in (0,1)");
  if (d < 0) throw std::invalid_argument("taylor_truncate: degree must be >= 0");
  if (f.domain().kind == DomainKind::Ball && f.dim() > 1)
    throw std::invalid_argument("taylor_truncate: disc or polydisc functions only");
  const int n = f.dim();
  const int m = 4 * (d + 1);
  std::size_t total = 1;
  for (int k = 0; k < n; ++k) {
    total *= static_cast<std::size_t>(m);
    if (total > (std::size_t{1} << 25)) throw std::invalid_argument("taylor_truncate: sample grid too large");
  }
  const double rho = r + 0.5 * (1.0 - r);
  const double q = r / rho;

  std::vector<cplx> samples(total);
  std::vector<cplx> axis(m);
  for (int j = 0; j < m; ++j) axis[j] = std::polar(rho, kTwoPi * j / m);
  parallel_chunks(total, 2048, [&](std::size_t, std::size_t b, std::size_t e) {
    std::vector<cplx> z(n);
    for (std::size_t idx = b; idx < e; ++idx) {
      std::size_t rem = idx;
      for (int k = n - 1; k >= 0; --k) {
        z[k] = axis[rem % m];
        rem /= m;
      }
      samples[idx] = eval(f, z);
    }
  });
  double smax = 0.0;
  for (const cplx& s : samples) smax = std::max(smax, std::abs(s));

  const std::vector<cplx> spec = fft::forward_nd(samples, std::vector<int>(n, m));
  const double scale = 1.0 / static_cast<double>(total);
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * smax;
  const int half = m / 2;

  TruncationResult out;
  out.rho = rho;
  out.samples_per_axis = m;
  out.poly = PolynomialND(n);
  long double tail = 0.0L;
  std::vector<double> envelope(half + 1, 0.0);  // max |X| over indices whose largest entry is k
  MultiIndex a(n);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rem = idx;
    int top = 0, deg = 0;
    for (int k = n - 1; k >= 0; --k) {
      a[k] = static_cast<int>(rem % m);
      rem /= m;
      top = std::max(top, a[k]);
      deg += a[k];
    }
    if (top > half) continue;  // aliased negative frequencies
    const cplx x = spec[idx] * scale;
    const double ax = std::abs(x);
    envelope[top] = std::max(envelope[top], ax);
    const double w = std::pow(q, deg);
    if (top <= d) {
      if (ax < floor)
        tail += static_cast<long double>(ax * w);
      else
        out.poly.set(a, x * w);
    } else {
      tail += static_cast<long double>(ax * w);
    }
  }
  // geometric extrapolation beyond the measured band
  for (int k = half - 1; k >= 0; --k) envelope[k] = std::max(envelope[k], envelope[k + 1]);
  if (d + 1 < half && envelope[d + 1] > floor) {
    const double lam = std::pow(std::max(envelope[half], floor) / envelope[d + 1],
                                1.0 / static_cast<double>(half - d - 1));
    const double lq = std::min(lam * q, 1.0 - 1e-12);
    tail += static_cast<long double>(n) * envelope[half] * std::pow(q, half) * lq / (1.0 - lq);
  }
  out.tail_bound = static_cast<double>(tail);
  out.ok = out.tail_bound <= tol;
  return out;
}

std::vector<cplx> path_points(const PathSpec& p, const std::vector<double>& radii) {
  if (std::abs(std::abs(p.zeta) - 1.0) > 1e-12) throw std::invalid_argument("path base point must be unimodular");
  if (!(std::abs(p.w) < 1.0)) throw std::invalid_argument("path anchor must lie in the open disc");
  std::vector<cplx> out;
  out.reserve(radii.size());
  for (double r : radii) {
    if (!(r >= 0.0 && r < 1.0)) throw std::invalid_argument("path radius must lie in [0,1)");
    const cplx z = r * (p.zeta - p.w) + p.w;
    if (!(std::abs(z) < 1.0)) throw std::invalid_argument("path point escapes the disc");
    out.push_back(z);
  }
  return out;
}

}  // namespace wildbloch
