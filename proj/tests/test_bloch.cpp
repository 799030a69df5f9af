#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "wildbloch/bloch.hpp"
#include "wildbloch/universal.hpp"

using namespace wildbloch;

namespace {

FunctionExpr mono(int n, cplx c = 1.0) { return FunctionExpr::poly(Polynomial1D::monomial(n, c)); }

// Independent 1-D oracle: max of g over a set of radii.
template <class G>
double radial_max(const std::vector<double>& radii, G g) {
  double best = 0.0;
  for (double r : radii) best = std::max(best, g(r));
  return best;
}

double golden_max(double (*g)(double), double a, double b) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int i = 0; i < 200; ++i) {
    const double c = b - phi * (b - a), d = a + phi * (b - a);
    if (g(c) > g(d)) b = d; else a = c;
  }
  return g(0.5 * (a + b));
}

}  // namespace

TEST_CASE("Bloch norm of a constant is its modulus") {
  const BlochReport r = bloch_norm(FunctionExpr::poly(Polynomial1D::constant(cplx(3.0, 4.0))));
  CHECK(r.norm == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(r.seminorm_sup == 0.0);
}

TEST_CASE("Bloch norm of z is 1") {
  const BlochReport r = bloch_norm(FunctionExpr::identity());
  CHECK(r.norm == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r.value_at_origin == 0.0);
}

TEST_CASE("Bloch norm of z^2 against the radial oracle") {
  const FunctionExpr f = mono(2);
  const BlochReport r = bloch_norm(f);
  const double oracle = radial_max(r.grid.radii, [](double t) { return (1 - t * t) * 2 * t; });
  CHECK(r.norm == doctest::Approx(oracle).epsilon(1e-12));
  CHECK(r.norm == doctest::Approx(4.0 / (3.0 * std::sqrt(3.0))).epsilon(1e-3));
  REQUIRE(r.certified_bound);
  CHECK(*r.certified_bound >= r.norm);
}

TEST_CASE("Bloch norm rejects mismatched domains and grids") {
  const FunctionExpr f = mono(2);
  CHECK_THROWS_AS(bloch_norm(f, Domain::circle(), SampleGrid::norm_grid(64)), std::invalid_argument);
  CHECK_THROWS_AS(bloch_norm(f, Domain::disc(), SampleGrid::circle(64)), std::invalid_argument);
  CHECK_THROWS_AS(bloch_norm(f, Domain::polydisc(2), SampleGrid::norm_grid(64)), std::invalid_argument);
}

TEST_CASE("Bloch norm on the polydisc and the ball") {
  // f = z1 z2: on the polydisc the integrand is (1-r1^2) r2 + (1-r2^2) r1.
  const PolynomialND p(2, {{{1, 1}, 1.0}});
  const SampleGrid pg = SampleGrid::polydisc(2, dyadic_radii(2, 8), 16);
  const BlochReport rp = bloch_norm(FunctionExpr::poly(p, Domain::polydisc(2)), Domain::polydisc(2), pg);
  std::vector<double> radii = pg.radii;
  double oracle = 0.0;
  for (double a : radii)
    for (double b : radii) oracle = std::max(oracle, (1 - a * a) * b + (1 - b * b) * a);
  CHECK(rp.seminorm_sup == doctest::Approx(oracle).epsilon(1e-12));

  // Ball: (1-|z|^2)|Rf| = 2(1-s^2)|z1 z2| <= 2(1-s^2)s^2/2, max 1/4 at s^2 = 1/2.
  const BlochReport rb = bloch_norm(FunctionExpr::poly(p, Domain::ball(2)));
  CHECK(rb.seminorm_sup <= 0.25 + 1e-12);
  CHECK(rb.seminorm_sup > 0.2);
}

TEST_CASE("little Bloch profile of z^3 decays") {
  const auto prof = little_bloch_profile(mono(3), {0.5, 0.9, 0.99});
  REQUIRE(prof.size() == 3);
  CHECK(prof[2].shell_sup < 0.06);
  CHECK(prof[2].shell_sup == doctest::Approx((1 - 0.99 * 0.99) * 3 * 0.99 * 0.99).epsilon(1e-12));
  const auto flat = little_bloch_profile(FunctionExpr::poly(Polynomial1D::constant(1.0)), {0.5, 0.99});
  for (const auto& s : flat) CHECK(s.shell_sup == 0.0);
}

TEST_CASE("little Bloch profile of a non-polynomial matches the polynomial path") {
  const FunctionExpr p = mono(3);
  const FunctionExpr q = FunctionExpr::dilate(FunctionExpr::compose(p, FunctionExpr::identity()), 1.0);
  const auto a = little_bloch_profile(p, {0.3, 0.7}, 64);
  const auto b = little_bloch_profile(q, {0.3, 0.7}, 64);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].shell_sup == doctest::Approx(b[i].shell_sup).epsilon(1e-12));
}

TEST_CASE("lacunary polynomials have Bloch norm bounded independently of K") {
  for (int k : {2, 4, 6, 8}) {
    const BlochReport r = bloch_norm(lacunary_baseline(k));
    CHECK(r.norm > 0.7);
    CHECK(r.norm < 3.0);
  }
}

TEST_CASE("weighted norm with w(t) = sqrt(t) against a 1-D maximization") {
  const SampleGrid g = SampleGrid::norm_grid(16);
  const BlochReport r = weighted_bloch_norm(FunctionExpr::identity(), WeightSpec::power(0.5), g);
  const double on_grid = radial_max(g.radii, [](double t) { return (1 + t) * std::sqrt(1 - t); });
  CHECK(r.norm == doctest::Approx(on_grid).epsilon(1e-12));
  const double exact = golden_max([](double t) { return (1 + t) * std::sqrt(1 - t); }, 0.0, 1.0);
  CHECK(r.norm <= exact + 1e-12);
  CHECK(r.norm == doctest::Approx(exact).epsilon(2e-3));
}

TEST_CASE("weighted norm with w(t) = t approaches 2") {
  const BlochReport r = weighted_bloch_norm(FunctionExpr::identity(), WeightSpec::power(1.0), SampleGrid::norm_grid(16));
  CHECK(r.norm >= 1.99);
  CHECK(r.norm < 2.0);
  const BlochReport c =
      weighted_bloch_norm(FunctionExpr::poly(Polynomial1D::constant(-2.0)), WeightSpec::log_power(1.0), SampleGrid::norm_grid(16));
  CHECK(c.norm == 2.0);
}

TEST_CASE("weighted norm on the polydisc uses the coordinate defects") {
  const PolynomialND p(2, {{{1, 0}, 1.0}});
  const SampleGrid g = SampleGrid::polydisc(2, {0.0, 0.5, 0.9}, 8);
  const BlochReport r = weighted_bloch_norm(FunctionExpr::poly(p, Domain::polydisc(2)), WeightSpec::power(0.5), g);
  const double oracle = radial_max({0.0, 0.5, 0.9}, [](double t) { return std::sqrt(1 - t * t); });
  CHECK(r.seminorm_sup == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("weight validation") {
  CHECK_THROWS_AS(WeightSpec::power(0.0), std::invalid_argument);
  CHECK_THROWS_AS(WeightSpec::log_power(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(WeightSpec::table({0.5, 0.2}, {1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(WeightSpec::table({0.2, 0.5}, {2.0, 1.0}), std::invalid_argument);
  const WeightSpec t = WeightSpec::table({0.1, 0.5}, {0.5, 1.0});
  CHECK(t(0.05) == doctest::Approx(0.25));
  CHECK(t(0.3) == doctest::Approx(0.75));
  CHECK(t(0.9) == 1.0);
}

TEST_CASE("weight integral test verdicts") {
  using V = WeightTestResult::Verdict;
  CHECK(weight_integral_test(WeightSpec::log_power(0.5), 0.5).verdict == V::Diverges);
  CHECK(weight_integral_test(WeightSpec::log_power(1.0), 0.5).verdict == V::Converges);
  CHECK(weight_integral_test(WeightSpec::power(1.0), 0.5).verdict == V::Converges);
  CHECK_THROWS_AS(weight_integral_test(WeightSpec::power(1.0), 1.0), std::invalid_argument);
}

TEST_CASE("weight integral partials match the closed-form antiderivative") {
  // w = (1 - log t)^(-1/2): the integral over [a, x] of w^2/t is log((1 - log a)/(1 - log x)).
  const WeightTestResult r = weight_integral_test(WeightSpec::log_power(0.5), 0.5);
  for (std::size_t i = 0; i < r.partials.size(); ++i) {
    const double a = std::exp2(-r.exponents[i]);
    CHECK(r.partials[i] == doctest::Approx(std::log((1 - std::log(a)) / (1 - std::log(0.5)))).epsilon(1e-10));
  }
}

TEST_CASE("Bloch seminorm scales linearly") {
  const FunctionExpr f = FunctionExpr::poly(Polynomial1D({0.3, cplx(0.2, 0.1), 0.0, -0.7}));
  const FunctionExpr g = FunctionExpr::poly(cplx(-2.5, 1.0) * f.poly1d());
  CHECK(bloch_norm(g).seminorm_sup == doctest::Approx(std::abs(cplx(-2.5, 1.0)) * bloch_norm(f).seminorm_sup).epsilon(1e-12));
}

TEST_CASE("grid refinement never lowers the polynomial estimate") {
  const FunctionExpr f = FunctionExpr::poly(Polynomial1D({0.0, 1.0, 0.0, 0.0, 0.0, 0.5}));
  const double coarse = bloch_norm(f, Domain::disc(), SampleGrid::norm_grid(64, 4, 12)).norm;
  const double fine = bloch_norm(f, Domain::disc(), SampleGrid::norm_grid(128, 8, 12)).norm;
  CHECK(fine >= coarse - 1e-12);
}
