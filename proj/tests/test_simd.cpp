#include <doctest.h>

#include <cstring>
#include <vector>

#include "wildbloch/kernels.hpp"
#include "wildbloch/numerics.hpp"
#include "wildbloch/polynomial.hpp"

using namespace wildbloch;
namespace k = wildbloch::kernels;

namespace {

std::vector<double> randoms(std::size_t n, std::uint64_t seed, double scale = 1.0) {
  Rng rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = scale * (2.0 * rng.uniform() - 1.0);
  return v;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("horner: AVX2 and scalar agree bit for bit") {
  if (!k::avx2_available()) {
    MESSAGE("AVX2 not available; skipping");
    return;
  }
  for (std::size_t ncoef : {1u, 2u, 7u, 64u, 513u}) {
    for (std::size_t n : {1u, 3u, 4u, 5u, 17u, 1000u}) {
      const auto cre = randoms(ncoef, ncoef), cim = randoms(ncoef, ncoef + 1);
      const auto zre = randoms(n, n + 7, 0.7), zim = randoms(n, n + 8, 0.7);
      std::vector<double> v1(n), v2(n), w1(n), w2(n), d1(n), d2(n), e1(n), e2(n);
      k::scalar::horner(cre.data(), cim.data(), ncoef, zre.data(), zim.data(), n, v1.data(), w1.data(), d1.data(),
                        e1.data());
      k::avx2::horner(cre.data(), cim.data(), ncoef, zre.data(), zim.data(), n, v2.data(), w2.data(), d2.data(),
                      e2.data());
      CHECK(same_bits(v1, v2));
      CHECK(same_bits(w1, w2));
      CHECK(same_bits(d1, d2));
      CHECK(same_bits(e1, e2));
    }
  }
}

TEST_CASE("metric_sum: AVX2 and scalar agree bit for bit") {
  if (!k::avx2_available()) return;
  for (std::size_t n : {1u, 2u, 3u, 4u, 9u, 4096u, 4099u}) {
    const auto a = randoms(n, 1), b = randoms(n, 2), c = randoms(n, 3, 2.0), d = randoms(n, 4, 2.0);
    const double s1 = k::scalar::metric_sum(a.data(), b.data(), c.data(), d.data(), n);
    const double s2 = k::avx2::metric_sum(a.data(), b.data(), c.data(), d.data(), n);
    CHECK(std::memcmp(&s1, &s2, sizeof s1) == 0);
  }
}

TEST_CASE("weighted_abs_max: AVX2 and scalar agree, including ties") {
  if (!k::avx2_available()) return;
  for (std::size_t n : {1u, 4u, 5u, 31u, 1024u}) {
    auto w = randoms(n, 11);
    for (auto& x : w) x = std::abs(x);
    const auto vr = randoms(n, 12), vi = randoms(n, 13);
    const auto m1 = k::scalar::weighted_abs_max(w.data(), vr.data(), vi.data(), n);
    const auto m2 = k::avx2::weighted_abs_max(w.data(), vr.data(), vi.data(), n);
    CHECK(m1.value == m2.value);
    CHECK(m1.index == m2.index);
  }
  std::vector<double> w(9, 1.0), vr(9, 0.5), vi(9, 0.0);
  const auto m = k::avx2::weighted_abs_max(w.data(), vr.data(), vi.data(), 9);
  CHECK(m.index == 0);
}

TEST_CASE("scalar horner matches a direct evaluation") {
  const Polynomial1D p({cplx(1, 2), cplx(-0.5, 0.25), cplx(0.0, 3.0)});
  const cplx z(0.3, -0.4);
  const cplx want = cplx(1, 2) + cplx(-0.5, 0.25) * z + cplx(0.0, 3.0) * z * z;
  const cplx dwant = cplx(-0.5, 0.25) + 2.0 * cplx(0.0, 3.0) * z;
  for (auto isa : {k::Isa::Scalar, k::Isa::Avx2}) {
    k::force_isa(isa);
    std::vector<cplx> v, d;
    const std::vector<cplx> zs{z};
    p.eval_batch(zs, v, d);
    CHECK(std::abs(v[0] - want) < 1e-15);
    CHECK(std::abs(d[0] - dwant) < 1e-15);
  }
  k::force_isa(k::avx2_available() ? k::Isa::Avx2 : k::Isa::Scalar);
}

TEST_CASE("isa names") {
  CHECK(std::string(k::isa_name(k::Isa::Scalar)) == "scalar");
  CHECK(std::string(k::isa_name(k::Isa::Avx2)) == "avx2");
}
