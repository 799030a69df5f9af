#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wildbloch/approx.hpp"
#include "wildbloch/fft.hpp"

namespace wildbloch {

cplx TrigPoly::operator()(double theta) const {
  // Horner in e^{i theta}, then shift by lo.
  const cplx w = std::polar(1.0, theta);
  cplx s = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) s = s * w + *it;
  return s * std::polar(1.0, theta * lo);
}

cplx TrigPoly::at(cplx zeta) const { return (*this)(std::arg(zeta)); }

double TrigPoly::abs_sum() const {
  double s = 0.0;
  for (const cplx& x : c) s += std::abs(x);
  return s;
}

BoundaryFunction TrigPoly::to_boundary() const {
  BoundaryFunction::Terms t;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i] != cplx(0.0)) t[{lo + static_cast<int>(i)}] = c[i];
  return BoundaryFunction::trig(1, t);
}

cplx eval_terms(const std::vector<ProductTerm>& terms, std::span<const cplx> zeta) {
  cplx s = 0.0;
  for (const auto& t : terms) {
    if (t.factors.size() != zeta.size()) throw std::invalid_argument("product term dimension mismatch");
    cplx p = t.coefficient;
    for (std::size_t k = 0; k < zeta.size(); ++k) p *= t.factors[k].at(zeta[k]);
    s += p;
  }
  return s;
}

namespace {

constexpr int kMaxTerms = 512;

// Drops coefficients below 1e-14 of the largest, trims the ends and moves the phase
// of the largest coefficient into the returned scalar.
TrigPoly tidy(int lo, std::vector<cplx> c, cplx& phase) {
  double m = 0.0;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (std::abs(c[i]) > m) {
      m = std::abs(c[i]);
      arg = i;
    }
  phase = 1.0;
  if (m == 0.0) return {0, {0.0}};
  phase = c[arg] / m;
  for (auto& x : c) {
    x /= phase;
    if (std::abs(x) < 1e-14 * m) x = 0.0;
  }
  std::size_t a = 0, b = c.size();
  while (c[a] == cplx(0.0)) ++a;
  while (c[b - 1] == cplx(0.0)) --b;
  return {lo + static_cast<int>(a), std::vector<cplx>(c.begin() + static_cast<std::ptrdiff_t>(a),
                                                      c.begin() + static_cast<std::ptrdiff_t>(b))};
}

std::size_t ipow(std::size_t b, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

// Index digits of a row-major multi-index with extent `ext` per axis.
void digits(std::size_t flat, int n, std::size_t ext, int* out) {
  for (int k = n - 1; k >= 0; --k) {
    out[k] = static_cast<int>(flat % ext);
    flat /= ext;
  }
}

struct Spectrum {
  int exponent = 0;
  int band = 0;  // K: retained |n_k| <= K
  double tail = 0.0;
  std::vector<cplx> coeffs;  // (2K+1)^N, row-major over n_k + K
};

Spectrum spectrum(const BoundaryFunction& phi, int exponent) {
  const int n = phi.dim();
  const std::size_t m = std::size_t{1} << exponent;
  const std::size_t total = ipow(m, n);
  std::vector<cplx> x(total);
  parallel_chunks(total, 1024, [&](std::size_t, std::size_t lo, std::size_t hi) {
    int d[kMaxDim];
    cplx z[kMaxDim];
    for (std::size_t i = lo; i < hi; ++i) {
      digits(i, n, m, d);
      for (int k = 0; k < n; ++k) z[k] = std::polar(1.0, kTwoPi * d[k] / static_cast<double>(m));
      x[i] = phi(std::span<const cplx>(z, static_cast<std::size_t>(n)));
    }
  });
  const auto xf = fft::forward_nd(x, std::vector<int>(static_cast<std::size_t>(n), static_cast<int>(m)));
  Spectrum s;
  s.exponent = exponent;
  s.band = static_cast<int>(m / 4);
  const std::size_t len = static_cast<std::size_t>(2 * s.band + 1);
  s.coeffs.assign(ipow(len, n), 0.0);
  const double scale = 1.0 / static_cast<double>(total);
  int d[kMaxDim];
  for (std::size_t i = 0; i < total; ++i) {
    digits(i, n, m, d);
    bool inside = true;
    std::size_t flat = 0;
    for (int k = 0; k < n; ++k) {
      int f = d[k] < static_cast<int>(m / 2) ? d[k] : d[k] - static_cast<int>(m);
      if (f < -s.band || f > s.band) inside = false;
      flat = flat * len + static_cast<std::size_t>(f + s.band);
    }
    const cplx c = xf[i] * scale;
    if (inside)
      s.coeffs[flat] = c;
    else
      s.tail += std::abs(c);
  }
  return s;
}

int max_exponent(int n) {
  switch (n) {
    case 1: return 14;
    case 2: return 9;
    case 3: return 6;
    default: return std::max(2, 18 / n);
  }
}

int verification_axis(int n) {
  switch (n) {
    case 1: return 4096;
    case 2: return 256;
    case 3: return 32;
    default: return std::max(4, static_cast<int>(std::pow(2.0, 15.0 / n)));
  }
}

std::vector<ProductTerm> rank_one_svd(const Spectrum& s) {
  const int len = 2 * s.band + 1;
  Eigen::MatrixXcd a(len, len);
  for (int i = 0; i < len; ++i)
    for (int j = 0; j < len; ++j) a(i, j) = s.coeffs[static_cast<std::size_t>(i) * len + j];
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  std::vector<ProductTerm> out;
  if (sv.size() == 0 || sv(0) == 0.0) return out;
  for (Eigen::Index i = 0; i < sv.size() && static_cast<int>(out.size()) < kMaxTerms; ++i) {
    if (sv(i) <= 1e-13 * sv(0)) break;
    std::vector<cplx> u(static_cast<std::size_t>(len)), v(static_cast<std::size_t>(len));
    for (int k = 0; k < len; ++k) {
      u[static_cast<std::size_t>(k)] = svd.matrixU()(k, i);
      v[static_cast<std::size_t>(k)] = std::conj(svd.matrixV()(k, i));
    }
    cplx pu, pv;
    ProductTerm t;
    t.factors.push_back(tidy(-s.band, u, pu));
    t.factors.push_back(tidy(-s.band, v, pv));
    t.coefficient = sv(i) * pu * pv;
    out.push_back(std::move(t));
  }
  return out;
}

// Greedy rank-one deflation by alternating power iteration.
std::vector<ProductTerm> rank_one_greedy(const Spectrum& s, int n) {
  const std::size_t len = static_cast<std::size_t>(2 * s.band + 1);
  std::vector<cplx> r = s.coeffs;
  const std::size_t total = r.size();
  auto frob = [&] {
    double q = 0.0;
    for (const cplx& x : r) q += std::norm(x);
    return std::sqrt(q);
  };
  const double norm0 = frob();
  std::vector<ProductTerm> out;
  if (norm0 == 0.0) return out;
  int d[kMaxDim];
  while (static_cast<int>(out.size()) < kMaxTerms && frob() > 1e-13 * norm0) {
    std::size_t am = 0;
    for (std::size_t i = 1; i < total; ++i)
      if (std::abs(r[i]) > std::abs(r[am])) am = i;
    int ad[kMaxDim];
    digits(am, n, len, ad);
    std::vector<std::vector<cplx>> u(static_cast<std::size_t>(n), std::vector<cplx>(len, 0.0));
    for (int k = 0; k < n; ++k) u[static_cast<std::size_t>(k)][static_cast<std::size_t>(ad[k])] = 1.0;
    for (int sweep = 0; sweep < 30; ++sweep) {
      for (int j = 0; j < n; ++j) {
        std::vector<cplx> acc(len, 0.0);
        for (std::size_t i = 0; i < total; ++i) {
          if (r[i] == cplx(0.0)) continue;
          digits(i, n, len, d);
          cplx w = r[i];
          for (int k = 0; k < n; ++k)
            if (k != j) w *= std::conj(u[static_cast<std::size_t>(k)][static_cast<std::size_t>(d[k])]);
          acc[static_cast<std::size_t>(d[j])] += w;
        }
        double q = 0.0;
        for (const cplx& x : acc) q += std::norm(x);
        q = std::sqrt(q);
        if (q == 0.0) break;
        for (auto& x : acc) x /= q;
        u[static_cast<std::size_t>(j)] = acc;
      }
    }
    cplx sigma = 0.0;
    for (std::size_t i = 0; i < total; ++i) {
      digits(i, n, len, d);
      cplx p = 1.0;
      for (int k = 0; k < n; ++k) p *= u[static_cast<std::size_t>(k)][static_cast<std::size_t>(d[k])];
      sigma += r[i] * std::conj(p);
    }
    if (std::abs(sigma) <= 1e-13 * norm0) break;
    for (std::size_t i = 0; i < total; ++i) {
      digits(i, n, len, d);
      cplx p = sigma;
      for (int k = 0; k < n; ++k) p *= u[static_cast<std::size_t>(k)][static_cast<std::size_t>(d[k])];
      r[i] -= p;
    }
    ProductTerm t;
    t.coefficient = sigma;
    for (int k = 0; k < n; ++k) {
      cplx ph;
      t.factors.push_back(tidy(-s.band, u[static_cast<std::size_t>(k)], ph));
      t.coefficient *= ph;
    }
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace

DecomposeResult product_decompose(const BoundaryFunction& phi, double eps, int m_cap) {
  if (!(eps > 0.0)) throw std::invalid_argument("product_decompose: eps must be positive");
  if (m_cap < 0) throw std::invalid_argument("product_decompose: negative term cap");
  const int n = phi.dim();
  DecomposeResult res;

  int kmin = 4;
  if (const int td = phi.trig_degree(); td >= 0)
    kmin = std::max(2, static_cast<int>(std::ceil(std::log2(4.0 * (td + 1)))));
  const int kmax = std::max(kmin, max_exponent(n));
  Spectrum s;
  for (int k = kmin; k <= kmax; ++k) {
    s = spectrum(phi, k);
    if (s.tail < eps / 2) break;
  }
  res.grid_exponent = s.exponent;
  res.max_frequency = s.band;
  res.tail = s.tail;

  std::vector<ProductTerm> all;
  if (n == 1) {
    cplx ph;
    ProductTerm t;
    t.factors.push_back(tidy(-s.band, s.coeffs, ph));
    t.coefficient = ph;
    if (!(t.factors[0].c.size() == 1 && t.factors[0].c[0] == cplx(0.0))) all.push_back(std::move(t));
  } else if (n == 2) {
    all = rank_one_svd(s);
  } else {
    all = rank_one_greedy(s, n);
  }

  // Prefix errors on an offset product grid.
  const int axis = verification_axis(n);
  res.verification_axis = axis;
  const std::size_t npts = ipow(static_cast<std::size_t>(axis), n);
  std::vector<double> theta(static_cast<std::size_t>(axis));
  for (int i = 0; i < axis; ++i) theta[static_cast<std::size_t>(i)] = kTwoPi * (i + 0.5) / axis;
  std::vector<cplx> target(npts), approx(npts, 0.0);
  parallel_chunks(npts, 1024, [&](std::size_t, std::size_t lo, std::size_t hi) {
    int d[kMaxDim];
    cplx z[kMaxDim];
    for (std::size_t i = lo; i < hi; ++i) {
      digits(i, n, static_cast<std::size_t>(axis), d);
      for (int k = 0; k < n; ++k) z[k] = std::polar(1.0, theta[static_cast<std::size_t>(d[k])]);
      target[i] = phi(std::span<const cplx>(z, static_cast<std::size_t>(n)));
    }
  });
  auto sup_err = [&] {
    double e = 0.0;
    for (std::size_t i = 0; i < npts; ++i) e = std::max(e, std::abs(target[i] - approx[i]));
    return e;
  };
  res.prefix_errors.push_back(sup_err());
  for (const auto& t : all) {
    std::vector<std::vector<cplx>> table(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
      auto& tk = table[static_cast<std::size_t>(k)];
      tk.resize(static_cast<std::size_t>(axis));
      for (int i = 0; i < axis; ++i) tk[static_cast<std::size_t>(i)] = t.factors[static_cast<std::size_t>(k)](theta[static_cast<std::size_t>(i)]);
    }
    int d[kMaxDim];
    for (std::size_t i = 0; i < npts; ++i) {
      digits(i, n, static_cast<std::size_t>(axis), d);
      cplx p = t.coefficient;
      for (int k = 0; k < n; ++k) p *= table[static_cast<std::size_t>(k)][static_cast<std::size_t>(d[k])];
      approx[i] += p;
    }
    res.prefix_errors.push_back(sup_err());
  }

  const int limit = std::min<int>(m_cap, static_cast<int>(all.size()));
  int pick = -1;
  for (int m = 0; m <= limit; ++m)
    if (res.prefix_errors[static_cast<std::size_t>(m)] < eps) {
      pick = m;
      break;
    }
  if (pick < 0) {
    pick = 0;
    for (int m = 1; m <= limit; ++m)
      if (res.prefix_errors[static_cast<std::size_t>(m)] < res.prefix_errors[static_cast<std::size_t>(pick)]) pick = m;
  }
  res.terms.assign(all.begin(), all.begin() + pick);
  res.error = res.prefix_errors[static_cast<std::size_t>(pick)];
  res.ok = res.error < eps;
  if (!res.ok)
    res.reason = static_cast<int>(all.size()) > m_cap ? "tolerance not reached within the term cap"
                                                       : "tolerance not reached by the truncated spectrum";
  return res;
}

}  // namespace wildbloch
