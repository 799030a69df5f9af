#include "wildbloch/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <cstring>

namespace wildbloch::kernels {

namespace {

Isa detect() {
  const char* env = std::getenv("WILDBLOCH_SIMD");
  if (env != nullptr && std::strcmp(env, "scalar") == 0) return Isa::Scalar;
  if (avx2_available()) return Isa::Avx2;
  return Isa::Scalar;
}

std::atomic<int>& selected() {
  static std::atomic<int> isa{static_cast<int>(detect())};
  return isa;
}

}  // namespace

bool avx2_available() {
#if defined(WILDBLOCH_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
  static const bool ok = __builtin_cpu_supports("avx2");
  return ok;
#else
  return false;
#endif
}

Isa active_isa() { return static_cast<Isa>(selected().load(std::memory_order_relaxed)); }

void force_isa(Isa isa) {
  if (isa == Isa::Avx2 && !avx2_available()) isa = Isa::Scalar;
  selected().store(static_cast<int>(isa), std::memory_order_relaxed);
}

const char* isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

namespace scalar {

void horner(const double* cre, const double* cim, std::size_t ncoef, const double* zre,
            const double* zim, std::size_t n, double* vre, double* vim, double* dre, double* dim) {
  for (std::size_t i = 0; i < n; ++i) {
    double pr = 0.0, pi = 0.0, qr = 0.0, qi = 0.0;
    const double xr = zre[i], xi = zim[i];
    for (std::size_t k = ncoef; k-- > 0;) {
      // q <- q*z + p, then p <- p*z + c_k
      const double tqr = qr * xr - qi * xi + pr;
      const double tqi = qr * xi + qi * xr + pi;
      const double tpr = pr * xr - pi * xi + cre[k];
      const double tpi = pr * xi + pi * xr + cim[k];
      qr = tqr;
      qi = tqi;
      pr = tpr;
      pi = tpi;
    }
    vre[i] = pr;
    vim[i] = pi;
    dre[i] = qr;
    dim[i] = qi;
  }
}

double metric_sum(const double* are, const double* aim, const double* bre, const double* bim,
                  std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    const double dr = are[i] - bre[i];
    const double di = aim[i] - bim[i];
    const double m = std::sqrt(dr * dr + di * di);
    acc[i & 3] += m < 1.0 ? m : 1.0;
  }
  return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

MaxLoc weighted_abs_max(const double* w, const double* vre, const double* vim, std::size_t n) {
  MaxLoc best{-1.0, 0};
  for (std::size_t i = 0; i < n; ++i) {
    const double m = w[i] * std::sqrt(vre[i] * vre[i] + vim[i] * vim[i]);
    if (m > best.value) {
      best.value = m;
      best.index = i;
    }
  }
  return best;
}

}  // namespace scalar

#if !defined(WILDBLOCH_HAVE_AVX2)
namespace avx2 {
void horner(const double* cre, const double* cim, std::size_t ncoef, const double* zre,
            const double* zim, std::size_t n, double* vre, double* vim, double* dre, double* dim) {
  scalar::horner(cre, cim, ncoef, zre, zim, n, vre, vim, dre, dim);
}
double metric_sum(const double* are, const double* aim, const double* bre, const double* bim,
                  std::size_t n) {
  return scalar::metric_sum(are, aim, bre, bim, n);
}
MaxLoc weighted_abs_max(const double* w, const double* vre, const double* vim, std::size_t n) {
  return scalar::weighted_abs_max(w, vre, vim, n);
}
}  // namespace avx2
#endif

void horner(const double* cre, const double* cim, std::size_t ncoef, const double* zre,
            const double* zim, std::size_t n, double* vre, double* vim, double* dre, double* dim) {
  if (active_isa() == Isa::Avx2)
    avx2::horner(cre, cim, ncoef, zre, zim, n, vre, vim, dre, dim);
  else
    scalar::horner(cre, cim, ncoef, zre, zim, n, vre, vim, dre, dim);
}

double metric_sum(const double* are, const double* aim, const double* bre, const double* bim,
                  std::size_t n) {
  return active_isa() == Isa::Avx2 ? avx2::metric_sum(are, aim, bre, bim, n)
                                   : scalar::metric_sum(are, aim, bre, bim, n);
}

MaxLoc weighted_abs_max(const double* w, const double* vre, const double* vim, std::size_t n) {
  return active_isa() == Isa::Avx2 ? avx2::weighted_abs_max(w, vre, vim, n)
                                   : scalar::weighted_abs_max(w, vre, vim, n);
}

}  // namespace wildbloch::kernels
