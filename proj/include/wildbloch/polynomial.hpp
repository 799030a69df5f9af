#pragma once

#include <map>
#include <span>
#include <vector>

#include "wildbloch/numerics.hpp"

namespace wildbloch {

/// Dense one-variable polynomial. Trailing zero coefficients are trimmed, so
/// the leading coefficient is nonzero unless the polynomial is constant.
class Polynomial1D {
 public:
  Polynomial1D() : c_{cplx(0.0)} {}
  explicit Polynomial1D(std::vector<cplx> coeffs);

  static Polynomial1D constant(cplx c) { return Polynomial1D({c}); }
  static Polynomial1D monomial(int n, cplx c = 1.0);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<cplx>& coeffs() const { return c_; }
  cplx coeff(int k) const { return k >= 0 && k < static_cast<int>(c_.size()) ? c_[k] : cplx(0.0); }
  bool is_zero() const { return c_.size() == 1 && c_[0] == cplx(0.0); }

  cplx operator()(cplx z) const;
  /// (p(z), p'(z)) by Horner.
  std::pair<cplx, cplx> eval_with_derivative(cplx z) const;
  /// Batched evaluation through the SIMD kernel.
  void eval_batch(std::span<const cplx> z, std::vector<cplx>& value,
                  std::vector<cplx>& derivative) const;

  Polynomial1D derivative() const;
  Polynomial1D dilate(double r) const;

  friend Polynomial1D operator+(const Polynomial1D& a, const Polynomial1D& b);
  friend Polynomial1D operator-(const Polynomial1D& a, const Polynomial1D& b);
  friend Polynomial1D operator*(const Polynomial1D& a, const Polynomial1D& b);
  friend Polynomial1D operator*(cplx s, const Polynomial1D& a);
  bool operator==(const Polynomial1D&) const = default;

 private:
  std::vector<cplx> c_;
  void trim();
};

using MultiIndex = std::vector<int>;

/// Sparse polynomial in N variables; zero coefficients are never stored.
class PolynomialND {
 public:
  PolynomialND() = default;
  explicit PolynomialND(int dim);
  PolynomialND(int dim, const std::map<MultiIndex, cplx>& terms);

  /// p(z_j) as a polynomial in N variables.
  static PolynomialND from_1d(const Polynomial1D& p, int dim, int var);
  static PolynomialND constant(int dim, cplx c);

  int dim() const { return dim_; }
  const std::map<MultiIndex, cplx>& terms() const { return terms_; }
  int total_degree() const;
  int max_partial_degree() const;
  bool is_homogeneous() const;
  bool is_zero() const { return terms_.empty(); }
  cplx coeff(const MultiIndex& a) const;
  void set(const MultiIndex& a, cplx c);

  cplx operator()(std::span<const cplx> z) const;
  std::vector<cplx> gradient(std::span<const cplx> z) const;
  /// Single-variable view when dim == 1.
  Polynomial1D to_1d() const;

  friend PolynomialND operator+(const PolynomialND& a, const PolynomialND& b);
  friend PolynomialND operator*(const PolynomialND& a, const PolynomialND& b);
  friend PolynomialND operator*(cplx s, const PolynomialND& a);
  bool operator==(const PolynomialND&) const = default;

 private:
  int dim_ = 1;
  std::map<MultiIndex, cplx> terms_;
};

}  // namespace wildbloch
