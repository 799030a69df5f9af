#include <immintrin.h>

#include <cmath>

#include "wildbloch/kernels.hpp"

namespace wildbloch::kernels::avx2 {

void horner(const double* cre, const double* cim, std::size_t ncoef, const double* zre,
            const double* zim, std::size_t n, double* vre, double* vim, double* dre, double* dim) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d xr = _mm256_loadu_pd(zre + i);
    const __m256d xi = _mm256_loadu_pd(zim + i);
    __m256d pr = _mm256_setzero_pd(), pi = _mm256_setzero_pd();
    __m256d qr = _mm256_setzero_pd(), qi = _mm256_setzero_pd();
    for (std::size_t k = ncoef; k-- > 0;) {
      const __m256d cr = _mm256_set1_pd(cre[k]);
      const __m256d ci = _mm256_set1_pd(cim[k]);
      const __m256d tqr = _mm256_add_pd(_mm256_sub_pd(_mm256_mul_pd(qr, xr), _mm256_mul_pd(qi, xi)), pr);
      const __m256d tqi = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(qr, xi), _mm256_mul_pd(qi, xr)), pi);
      const __m256d tpr = _mm256_add_pd(_mm256_sub_pd(_mm256_mul_pd(pr, xr), _mm256_mul_pd(pi, xi)), cr);
      const __m256d tpi = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(pr, xi), _mm256_mul_pd(pi, xr)), ci);
      qr = tqr;
      qi = tqi;
      pr = tpr;
      pi = tpi;
    }
    _mm256_storeu_pd(vre + i, pr);
    _mm256_storeu_pd(vim + i, pi);
    _mm256_storeu_pd(dre + i, qr);
    _mm256_storeu_pd(dim + i, qi);
  }
  if (i < n) scalar::horner(cre, cim, ncoef, zre + i, zim + i, n - i, vre + i, vim + i, dre + i, dim + i);
}

double metric_sum(const double* are, const double* aim, const double* bre, const double* bim,
                  std::size_t n) {
  const __m256d one = _mm256_set1_pd(1.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d dr = _mm256_sub_pd(_mm256_loadu_pd(are + i), _mm256_loadu_pd(bre + i));
    const __m256d di = _mm256_sub_pd(_mm256_loadu_pd(aim + i), _mm256_loadu_pd(bim + i));
    const __m256d m = _mm256_sqrt_pd(_mm256_add_pd(_mm256_mul_pd(dr, dr), _mm256_mul_pd(di, di)));
    // min(m, 1) with the scalar tie/NaN convention: m < 1 ? m : 1
    const __m256d lt = _mm256_cmp_pd(m, one, _CMP_LT_OQ);
    acc = _mm256_add_pd(acc, _mm256_blendv_pd(one, m, lt));
  }
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  for (; i < n; ++i) {
    const double dr = are[i] - bre[i];
    const double di = aim[i] - bim[i];
    const double m = std::sqrt(dr * dr + di * di);
    lane[i & 3] += m < 1.0 ? m : 1.0;
  }
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

MaxLoc weighted_abs_max(const double* w, const double* vre, const double* vim, std::size_t n) {
  std::size_t i = 0;
  MaxLoc best{-1.0, 0};
  if (n >= 4) {
    __m256d bv = _mm256_set1_pd(-1.0);
    __m256d bi = _mm256_setzero_pd();
    __m256d idx = _mm256_setr_pd(0.0, 1.0, 2.0, 3.0);
    const __m256d four = _mm256_set1_pd(4.0);
    for (; i + 4 <= n; i += 4) {
      const __m256d vr = _mm256_loadu_pd(vre + i);
      const __m256d vi = _mm256_loadu_pd(vim + i);
      const __m256d m = _mm256_mul_pd(
          _mm256_loadu_pd(w + i),
          _mm256_sqrt_pd(_mm256_add_pd(_mm256_mul_pd(vr, vr), _mm256_mul_pd(vi, vi))));
      const __m256d gt = _mm256_cmp_pd(m, bv, _CMP_GT_OQ);
      bv = _mm256_blendv_pd(bv, m, gt);
      bi = _mm256_blendv_pd(bi, idx, gt);
      idx = _mm256_add_pd(idx, four);
    }
    alignas(32) double lv[4], li[4];
    _mm256_store_pd(lv, bv);
    _mm256_store_pd(li, bi);
    for (int l = 0; l < 4; ++l) {
      const auto li_idx = static_cast<std::size_t>(li[l]);
      if (lv[l] > best.value || (lv[l] == best.value && li_idx < best.index)) {
        best.value = lv[l];
        best.index = li_idx;
      }
    }
  }
  for (; i < n; ++i) {
    const double m = w[i] * std::sqrt(vre[i] * vre[i] + vim[i] * vim[i]);
    if (m > best.value) {
      best.value = m;
      best.index = i;
    }
  }
  return best;
}

}  // namespace wildbloch::kernels::avx2
