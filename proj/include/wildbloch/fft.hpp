#pragma once

#include <vector>

#include "wildbloch/numerics.hpp"

namespace wildbloch::fft {

/// X_k = sum_j x_j exp(-2 pi i jk / n), unnormalized.
std::vector<cplx> forward(const std::vector<cplx>& x);
/// x_j = sum_k X_k exp(+2 pi i jk / n), unnormalized.
std::vector<cplx> backward(const std::vector<cplx>& x);

/// Multi-dimensional transforms over a row-major array with extents `dims`.
std::vector<cplx> forward_nd(const std::vector<cplx>& x, const std::vector<int>& dims);
std::vector<cplx> backward_nd(const std::vector<cplx>& x, const std::vector<int>& dims);

}  // namespace wildbloch::fft
