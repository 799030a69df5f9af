#pragma once

#include <cstddef>

// Hot loops with a scalar reference path and an AVX2 path. Both paths use the
// same operation order (no FMA contraction, four interleaved partial sums), so
// their results agree bit for bit.
namespace wildbloch::kernels {

enum class Isa { Scalar, Avx2 };

bool avx2_available();
/// Selected once from CPUID; WILDBLOCH_SIMD=scalar|avx2 overrides.
Isa active_isa();
/// Test hook. Requesting Avx2 on a machine without it falls back to Scalar.
void force_isa(Isa isa);
const char* isa_name(Isa isa);

struct MaxLoc {
  double value = 0.0;
  std::size_t index = 0;
};

/// p(z) and p'(z) for coefficients c[0..ncoef) at n points, split re/im arrays.
void horner(const double* cre, const double* cim, std::size_t ncoef, const double* zre,
            const double* zim, std::size_t n, double* vre, double* vim, double* dre, double* dim);

/// Sum of min(1, |a_i - b_i|).
double metric_sum(const double* are, const double* aim, const double* bre, const double* bim,
                  std::size_t n);

/// max_i w_i * |v_i| with the first index attaining it. n must be >= 1.
MaxLoc weighted_abs_max(const double* w, const double* vre, const double* vim, std::size_t n);

namespace scalar {
void horner(const double* cre, const double* cim, std::size_t ncoef, const double* zre,
            const double* zim, std::size_t n, double* vre, double* vim, double* dre, double* dim);
double metric_sum(const double* are, const double* aim, const double* bre, const double* bim,
                  std::size_t n);
MaxLoc weighted_abs_max(const double* w, const double* vre, const double* vim, std::size_t n);
}  // namespace scalar

namespace avx2 {
void horner(const double* cre, const double* cim, std::size_t ncoef, const double* zre,
            const double* zim, std::size_t n, double* vre, double* vim, double* dre, double* dim);
double metric_sum(const double* are, const double* aim, const double* bre, const double* bim,
                  std::size_t n);
MaxLoc weighted_abs_max(const double* w, const double* vre, const double* vim, std::size_t n);
}  // namespace avx2

}  // namespace wildbloch::kernels
