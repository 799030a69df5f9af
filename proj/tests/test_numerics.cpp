#include <doctest.h>

#include <cmath>

#include "wildbloch/arcs.hpp"
#include "wildbloch/fft.hpp"
#include "wildbloch/numerics.hpp"

using namespace wildbloch;

TEST_CASE("sample_torus returns unimodular points") {
  const auto pts = sample_torus(1, 4, 7);
  REQUIRE(pts.size() == 4);
  for (const cplx& z : pts) CHECK(std::abs(std::abs(z) - 1.0) < 1e-12);
}

TEST_CASE("sample_torus mean of the first coordinate is small") {
  const std::size_t n = 100000;
  const auto pts = sample_torus(2, n, 1);
  cplx mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += pts[2 * i];
  mean /= static_cast<double>(n);
  // each coordinate has variance 1, so 3 sigma is 3/sqrt(n) ~ 0.0095
  CHECK(std::abs(mean) < 0.02);
}

TEST_CASE("sample_torus is deterministic and rejects empty requests") {
  CHECK(sample_torus(1, 1, 99) == sample_torus(1, 1, 99));
  CHECK(sample_torus(1, 1, 99) != sample_torus(1, 1, 100));
  CHECK_THROWS_AS(sample_torus(0, 3, 1), std::invalid_argument);
  CHECK_THROWS_AS(sample_torus(1, 0, 1), std::invalid_argument);
}

TEST_CASE("measure_metric on constant pairs") {
  const SampleGrid g = SampleGrid::circle(64);
  auto c = [](cplx v) { return BoundaryFn([v](std::span<const cplx>) { return v; }); };
  CHECK(measure_metric(c(0.0), c(2.0), g) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(measure_metric(c(0.0), c(0.5), g) == doctest::Approx(0.5).epsilon(1e-15));
  const BoundaryFn zeta = [](std::span<const cplx> z) { return z[0]; };
  CHECK(measure_metric(zeta, c(0.0), g) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(measure_metric(zeta, zeta, g) == 0.0);
}

TEST_CASE("measure_metric reports non-finite samples with the point") {
  const SampleGrid g = SampleGrid::circle(16);
  const BoundaryFn bad = [](std::span<const cplx> z) {
    return z[0].real() > 0.99 ? cplx(std::nan(""), 0.0) : cplx(0.0);
  };
  const BoundaryFn zero = [](std::span<const cplx>) { return cplx(0.0); };
  try {
    measure_metric(bad, zero, g);
    FAIL("expected NumericalError");
  } catch (const NumericalError& e) {
    REQUIRE(e.point().size() == 1);
    CHECK(e.point()[0].real() > 0.99);
  }
}

TEST_CASE("measure_metric rejects interior grids") {
  const BoundaryFn zero = [](std::span<const cplx>) { return cplx(0.0); };
  CHECK_THROWS_AS(measure_metric(zero, zero, SampleGrid::disc({0.5}, 8)), std::invalid_argument);
}

TEST_CASE("indicator_measure on whole, half and empty circle") {
  const auto all = indicator_measure([](std::span<const cplx>) { return true; }, 1, 1000, 3);
  CHECK(all.value == 1.0);
  CHECK(all.half_width == 0.0);
  const auto none = indicator_measure([](std::span<const cplx>) { return false; }, 1, 1000, 3);
  CHECK(none.value == 0.0);
  const auto half = indicator_measure([](std::span<const cplx> z) { return z[0].imag() > 0.0; }, 1, 1000000, 5);
  CHECK(half.half_width < 0.002);
  CHECK(std::abs(half.value - 0.5) < 3.0 * half.half_width);
}

TEST_CASE("binomial half width follows the normal approximation") {
  CHECK(binomial_half_width(0.5, 10000) == doctest::Approx(1.959963984540054 * 0.005).epsilon(1e-9));
  CHECK(binomial_half_width(0.0, 100) == 0.0);
}

TEST_CASE("SampleGrid validation") {
  CHECK_THROWS_AS(SampleGrid::disc({0.5}, 3), std::invalid_argument);
  CHECK_THROWS_AS(SampleGrid::disc({0.5, 0.4}, 8), std::invalid_argument);
  CHECK_THROWS_AS(SampleGrid::disc({1.0}, 8), std::invalid_argument);
  CHECK_THROWS_AS(SampleGrid::disc({}, 8), std::invalid_argument);
  CHECK_NOTHROW(SampleGrid::disc({0.0, 0.5}, 4));
}

TEST_CASE("circle grid is a trapezoid rule, shifted by the seed") {
  const PointSet a = grid_points(SampleGrid::circle(8));
  REQUIRE(a.count() == 8);
  CHECK(std::abs(a.coords[0] - cplx(1.0, 0.0)) < 1e-15);
  const PointSet b = grid_points(SampleGrid::circle(8, 42));
  CHECK(std::abs(b.coords[0] - cplx(1.0, 0.0)) > 1e-6);
  // still equispaced
  CHECK(std::abs(std::abs(b.coords[1] / b.coords[0] - std::polar(1.0, kTwoPi / 8))) < 1e-12);
}

TEST_CASE("norm grid schedule") {
  const SampleGrid g = SampleGrid::norm_grid(16, 8, 24);
  REQUIRE(g.radii.size() == 1 + 8 * 24);
  CHECK(g.radii[0] == 0.0);
  CHECK(g.radii.back() == doctest::Approx(1.0 - std::exp2(-24.0)).epsilon(1e-15));
}

TEST_CASE("derive_seed separates streams") {
  CHECK(derive_seed(1, 2) != derive_seed(1, 3));
  CHECK(derive_seed(1, 2) != derive_seed(2, 2));
  CHECK(derive_seed(5, 9) == derive_seed(5, 9));
}

TEST_CASE("parallel_chunks reductions do not depend on the thread count") {
  std::vector<double> x(100000);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::sin(0.001 * static_cast<double>(i));
  auto reduce = [&] {
    std::vector<double> part((x.size() + 999) / 1000, 0.0);
    parallel_chunks(x.size(), 1000, [&](std::size_t c, std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) part[c] += x[i];
    });
    double s = 0.0;
    for (double p : part) s += p;
    return s;
  };
  set_thread_count(1);
  const double one = reduce();
  set_thread_count(4);
  const double four = reduce();
  set_thread_count(1);
  CHECK(one == four);
}

TEST_CASE("fft round trip and a single tone") {
  std::vector<cplx> x(16, 0.0);
  x[3] = 1.0;
  const auto X = fft::forward(x);
  for (int k = 0; k < 16; ++k) CHECK(std::abs(X[k] - std::polar(1.0, -kTwoPi * 3 * k / 16)) < 1e-13);
  const auto y = fft::backward(X);
  for (int j = 0; j < 16; ++j) CHECK(std::abs(y[j] / 16.0 - x[j]) < 1e-15);
}

TEST_CASE("ArcSet measure, complement and wrap-around") {
  const ArcSet a = ArcSet::arc(-0.5, 0.5);
  CHECK(a.measure() == doctest::Approx(1.0 / kTwoPi));
  CHECK(a.contains(0.0));
  CHECK(a.contains(kTwoPi - 0.25));
  CHECK_FALSE(a.contains(1.0));
  REQUIRE(a.logical_arcs().size() == 1);
  const ArcSet c = a.complement();
  CHECK(c.measure() + a.measure() == doctest::Approx(1.0));
  CHECK(c.largest_gap() == doctest::Approx(1.0));
  CHECK(ArcSet::full().is_full());
  CHECK(ArcSet().empty());
  CHECK(ArcSet::full().complement().empty());
}

TEST_CASE("ArcSet merges overlaps and rejects negative lengths") {
  const ArcSet a({{0.0, 1.0}, {0.5, 2.0}});
  REQUIRE(a.pieces().size() == 1);
  CHECK(a.pieces()[0].end == doctest::Approx(2.0));
  CHECK_THROWS_AS(ArcSet({{1.0, 0.5}}), std::invalid_argument);
}

TEST_CASE("ArcSet uniform samples include the endpoints") {
  const ArcSet a = ArcSet::arc(1.0, 2.0);
  const auto s = a.sample_angles(11, false);
  REQUIRE(s.size() >= 2);
  CHECK(*std::min_element(s.begin(), s.end()) == doctest::Approx(1.0));
  CHECK(*std::max_element(s.begin(), s.end()) == doctest::Approx(2.0));
  for (double t : a.random_angles(100, 4)) CHECK(a.contains(t));
}
