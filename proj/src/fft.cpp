#include "wildbloch/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace wildbloch::fft {

namespace {

// FFTW planning is not thread-safe; execution on a private plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

std::vector<cplx> run(const std::vector<cplx>& x, const std::vector<int>& dims, int sign) {
  std::size_t total = 1;
  for (int d : dims) {
    if (d < 1) throw std::invalid_argument("fft: extents must be positive");
    total *= static_cast<std::size_t>(d);
  }
  if (x.size() != total) throw std::invalid_argument("fft: size does not match extents");
  std::vector<cplx> in(x), out(total);
  auto* pin = reinterpret_cast<fftw_complex*>(in.data());
  auto* pout = reinterpret_cast<fftw_complex*>(out.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), pin, pout, sign, FFTW_ESTIMATE);
  }
  if (plan == nullptr) throw std::runtime_error("fft: planning failed");
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

}  // namespace

std::vector<cplx> forward(const std::vector<cplx>& x) {
  return run(x, {static_cast<int>(x.size())}, FFTW_FORWARD);
}

std::vector<cplx> backward(const std::vector<cplx>& x) {
  return run(x, {static_cast<int>(x.size())}, FFTW_BACKWARD);
}

std::vector<cplx> forward_nd(const std::vector<cplx>& x, const std::vector<int>& dims) {
  return run(x, dims, FFTW_FORWARD);
}

std::vector<cplx> backward_nd(const std::vector<cplx>& x, const std::vector<int>& dims) {
  return run(x, dims, FFTW_BACKWARD);
}

}  // namespace wildbloch::fft
