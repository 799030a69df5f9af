#include "wildbloch/polynomial.hpp"

#include <algorithm>
#include <stdexcept>

#include "wildbloch/kernels.hpp"

namespace wildbloch {

Polynomial1D::Polynomial1D(std::vector<cplx> coeffs) : c_(std::move(coeffs)) {
  if (c_.empty()) c_.push_back(0.0);
  trim();
}

Polynomial1D Polynomial1D::monomial(int n, cplx c) {
  if (n < 0) throw std::invalid_argument("monomial degree must be >= 0");
  std::vector<cplx> v(static_cast<std::size_t>(n) + 1, 0.0);
  v[n] = c;
  return Polynomial1D(std::move(v));
}

void Polynomial1D::trim() {
  while (c_.size() > 1 && c_.back() == cplx(0.0)) c_.pop_back();
}

cplx Polynomial1D::operator()(cplx z) const {
  cplx p = 0.0;
  for (std::size_t k = c_.size(); k-- > 0;) p = p * z + c_[k];
  return p;
}

std::pair<cplx, cplx> Polynomial1D::eval_with_derivative(cplx z) const {
  cplx p = 0.0, q = 0.0;
  for (std::size_t k = c_.size(); k-- > 0;) {
    q = q * z + p;
    p = p * z + c_[k];
  }
  return {p, q};
}

void Polynomial1D::eval_batch(std::span<const cplx> z, std::vector<cplx>& value,
                              std::vector<cplx>& derivative) const {
  const std::size_t n = z.size();
  const std::size_t m = c_.size();
  std::vector<double> cr(m), ci(m), zr(n), zi(n), vr(n), vi(n), dr(n), di(n);
  for (std::size_t k = 0; k < m; ++k) {
    cr[k] = c_[k].real();
    ci[k] = c_[k].imag();
  }
  for (std::size_t i = 0; i < n; ++i) {
    zr[i] = z[i].real();
    zi[i] = z[i].imag();
  }
  parallel_chunks(n, 1024, [&](std::size_t, std::size_t b, std::size_t e) {
    kernels::horner(cr.data(), ci.data(), m, zr.data() + b, zi.data() + b, e - b, vr.data() + b,
                    vi.data() + b, dr.data() + b, di.data() + b);
  });
  value.resize(n);
  derivative.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    value[i] = {vr[i], vi[i]};
    derivative[i] = {dr[i], di[i]};
  }
}

Polynomial1D Polynomial1D::derivative() const {
  if (c_.size() == 1) return Polynomial1D();
  std::vector<cplx> d(c_.size() - 1);
  for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
  return Polynomial1D(std::move(d));
}

Polynomial1D Polynomial1D::dilate(double r) const {
  std::vector<cplx> d(c_);
  double rk = 1.0;
  for (auto& c : d) {
    c *= rk;
    rk *= r;
  }
  return Polynomial1D(std::move(d));
}

Polynomial1D operator+(const Polynomial1D& a, const Polynomial1D& b) {
  std::vector<cplx> s(std::max(a.c_.size(), b.c_.size()), 0.0);
  for (std::size_t k = 0; k < a.c_.size(); ++k) s[k] += a.c_[k];
  for (std::size_t k = 0; k < b.c_.size(); ++k) s[k] += b.c_[k];
  return Polynomial1D(std::move(s));
}

Polynomial1D operator-(const Polynomial1D& a, const Polynomial1D& b) { return a + (-1.0) * b; }

Polynomial1D operator*(const Polynomial1D& a, const Polynomial1D& b) {
  std::vector<cplx> s(a.c_.size() + b.c_.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) s[i + j] += a.c_[i] * b.c_[j];
  return Polynomial1D(std::move(s));
}

Polynomial1D operator*(cplx s, const Polynomial1D& a) {
  std::vector<cplx> v(a.c_);
  for (auto& c : v) c *= s;
  return Polynomial1D(std::move(v));
}

// ---------------------------------------------------------------------------

PolynomialND::PolynomialND(int dim) : dim_(dim) {
  if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("polynomial dimension out of range");
}

PolynomialND::PolynomialND(int dim, const std::map<MultiIndex, cplx>& terms) : PolynomialND(dim) {
  for (const auto& [a, c] : terms) set(a, coeff(a) + c);
}

PolynomialND PolynomialND::from_1d(const Polynomial1D& p, int dim, int var) {
  if (var < 0 || var >= dim) throw std::invalid_argument("variable index out of range");
  PolynomialND out(dim);
  for (int k = 0; k <= p.degree(); ++k) {
    MultiIndex a(dim, 0);
    a[var] = k;
    out.set(a, p.coeff(k));
  }
  return out;
}

PolynomialND PolynomialND::constant(int dim, cplx c) {
  PolynomialND out(dim);
  out.set(MultiIndex(dim, 0), c);
  return out;
}

void PolynomialND::set(const MultiIndex& a, cplx c) {
  if (static_cast<int>(a.size()) != dim_) throw std::invalid_argument("multi-index size mismatch");
  for (int e : a)
    if (e < 0) throw std::invalid_argument("negative exponent");
  if (c == cplx(0.0))
    terms_.erase(a);
  else
    terms_[a] = c;
}

cplx PolynomialND::coeff(const MultiIndex& a) const {
  auto it = terms_.find(a);
  return it == terms_.end() ? cplx(0.0) : it->second;
}

int PolynomialND::total_degree() const {
  int d = 0;
  for (const auto& [a, c] : terms_) {
    int s = 0;
    for (int e : a) s += e;
    d = std::max(d, s);
  }
  return d;
}

int PolynomialND::max_partial_degree() const {
  int d = 0;
  for (const auto& [a, c] : terms_)
    for (int e : a) d = std::max(d, e);
  return d;
}

bool PolynomialND::is_homogeneous() const {
  int deg = -1;
  for (const auto& [a, c] : terms_) {
    int s = 0;
    for (int e : a) s += e;
    if (deg >= 0 && s != deg) return false;
    deg = s;
  }
  return true;
}

namespace {

// Powers z_k^0 .. z_k^maxdeg for each coordinate.
std::vector<std::vector<cplx>> power_table(std::span<const cplx> z, int maxdeg) {
  std::vector<std::vector<cplx>> pw(z.size(), std::vector<cplx>(maxdeg + 1));
  for (std::size_t k = 0; k < z.size(); ++k) {
    pw[k][0] = 1.0;
    for (int e = 1; e <= maxdeg; ++e) pw[k][e] = pw[k][e - 1] * z[k];
  }
  return pw;
}

}  // namespace

cplx PolynomialND::operator()(std::span<const cplx> z) const {
  if (static_cast<int>(z.size()) != dim_) throw std::invalid_argument("point dimension mismatch");
  const auto pw = power_table(z, max_partial_degree());
  cplx s = 0.0;
  for (const auto& [a, c] : terms_) {
    cplx t = c;
    for (int k = 0; k < dim_; ++k) t *= pw[k][a[k]];
    s += t;
  }
  return s;
}

std::vector<cplx> PolynomialND::gradient(std::span<const cplx> z) const {
  if (static_cast<int>(z.size()) != dim_) throw std::invalid_argument("point dimension mismatch");
  const auto pw = power_table(z, max_partial_degree());
  std::vector<cplx> g(dim_, 0.0);
  for (const auto& [a, c] : terms_) {
    for (int j = 0; j < dim_; ++j) {
      if (a[j] == 0) continue;
      cplx t = c * static_cast<double>(a[j]);
      for (int k = 0; k < dim_; ++k) t *= pw[k][k == j ? a[k] - 1 : a[k]];
      g[j] += t;
    }
  }
  return g;
}

Polynomial1D PolynomialND::to_1d() const {
  if (dim_ != 1) throw std::invalid_argument("to_1d needs a one-variable polynomial");
  std::vector<cplx> c(static_cast<std::size_t>(total_degree()) + 1, 0.0);
  for (const auto& [a, v] : terms_) c[a[0]] = v;
  return Polynomial1D(std::move(c));
}

PolynomialND operator+(const PolynomialND& a, const PolynomialND& b) {
  if (a.dim_ != b.dim_) throw std::invalid_argument("dimension mismatch in sum");
  PolynomialND out = a;
  for (const auto& [idx, c] : b.terms_) out.set(idx, out.coeff(idx) + c);
  return out;
}

PolynomialND operator*(const PolynomialND& a, const PolynomialND& b) {
  if (a.dim_ != b.dim_) throw std::invalid_argument("dimension mismatch in product");
  std::map<MultiIndex, cplx> acc;
  for (const auto& [ia, ca] : a.terms_)
    for (const auto& [ib, cb] : b.terms_) {
      MultiIndex s(ia);
      for (std::size_t k = 0; k < s.size(); ++k) s[k] += ib[k];
      acc[s] += ca * cb;
    }
  PolynomialND out(a.dim_);
  for (const auto& [idx, c] : acc) out.set(idx, c);
  return out;
}

PolynomialND operator*(cplx s, const PolynomialND& a) {
  PolynomialND out(a.dim_);
  for (const auto& [idx, c] : a.terms_) out.set(idx, s * c);
  return out;
}

}  // namespace wildbloch
