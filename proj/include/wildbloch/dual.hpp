#pragma once

#include <array>

#include "wildbloch/numerics.hpp"

namespace wildbloch {

/// Value with its complex gradient, for forward-mode differentiation of
/// holomorphic expressions in up to kMaxDim variables.
struct Jet {
  cplx v{0.0};
  std::array<cplx, kMaxDim> d{};
  int n = 1;
  bool saturated = false;

  static Jet constant(cplx c, int n) {
    Jet j;
    j.v = c;
    j.n = n;
    return j;
  }
  static Jet variable(cplx z, int k, int n) {
    Jet j = constant(z, n);
    j.d[k] = 1.0;
    return j;
  }
};

inline Jet operator+(const Jet& a, const Jet& b) {
  Jet r = a;
  r.v += b.v;
  for (int k = 0; k < a.n; ++k) r.d[k] += b.d[k];
  r.saturated = a.saturated || b.saturated;
  return r;
}

inline Jet operator*(const Jet& a, const Jet& b) {
  Jet r = a;
  r.v = a.v * b.v;
  for (int k = 0; k < a.n; ++k) r.d[k] = a.d[k] * b.v + a.v * b.d[k];
  r.saturated = a.saturated || b.saturated;
  return r;
}

inline Jet operator*(cplx s, const Jet& a) {
  Jet r = a;
  r.v *= s;
  for (int k = 0; k < a.n; ++k) r.d[k] *= s;
  return r;
}

/// g(a) given g(a.v) and g'(a.v).
inline Jet chain(cplx gv, cplx gd, const Jet& a) {
  Jet r = a;
  r.v = gv;
  for (int k = 0; k < a.n; ++k) r.d[k] = gd * a.d[k];
  return r;
}

}  // namespace wildbloch
