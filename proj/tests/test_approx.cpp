#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "wildbloch/approx.hpp"

using namespace wildbloch;

namespace {

// Dense-sampling oracle, independent of the library's verification grid.
template <class G>
double dense_sup(const ArcSet& f, G g, int per_arc = 20000) {
  double best = 0.0;
  for (const Arc& a : f.logical_arcs())
    for (int i = 0; i <= per_arc; ++i) {
      const double t = a.start + (a.end - a.start) * i / per_arc;
      best = std::max(best, g(std::polar(1.0, t)));
    }
  return best;
}

}  // namespace

TEST_CASE("runge_pair on a half circle") {
  const ArcSet f = ArcSet::arc(kPi / 2, 3 * kPi / 2);
  const FitResult r = runge_pair(f, 0.2);
  REQUIRE(r.ok);
  CHECK(r.poly(0.0) == cplx(0.0));
  CHECK(r.margin < 0.2);
  CHECK(r.degree == r.poly.degree());
  CHECK(dense_sup(f, [&](cplx z) { return std::abs(r.poly(z) - 1.0); }) < 0.2);
  // the sup estimate bounds the polynomial everywhere on the circle
  double circle = 0.0;
  for (int i = 0; i < 40000; ++i) circle = std::max(circle, std::abs(r.poly(std::polar(1.0, kTwoPi * i / 40000))));
  CHECK(r.sup_norm >= circle);
}

TEST_CASE("runge_pair on the empty set is zero") {
  const FitResult r = runge_pair(ArcSet(), 0.5);
  REQUIRE(r.ok);
  CHECK(r.poly.is_zero());
}

TEST_CASE("runge_pair preconditions") {
  const ArcSet f = ArcSet::arc(0.0, 1.0);
  CHECK_THROWS_AS(runge_pair(f, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(runge_pair(f, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(runge_pair(ArcSet::full(), 0.5), std::invalid_argument);
  CHECK_THROWS_AS(runge_pair(ArcSet::arc(0.0, kTwoPi - 1e-4), 0.5), std::invalid_argument);
}

TEST_CASE("runge_pair reports failure at the degree cap") {
  FitOptions opt;
  opt.degree_cap = 16;
  const FitResult r = runge_pair(ArcSet::arc(0.0, kTwoPi - 0.1), 0.01, opt);
  CHECK_FALSE(r.ok);
  CHECK_FALSE(r.reason.empty());
  CHECK_FALSE(r.trail.empty());
  CHECK(r.margin >= 0.01);
}

TEST_CASE("uniform_fit returns polynomial targets unchanged") {
  const ArcSet f = ArcSet::arc(0.0, 2.0);
  const FitResult z = uniform_fit(f, BoundaryFunction::coordinate(1, 0), 0.1);
  REQUIRE(z.ok);
  CHECK(z.poly == Polynomial1D({0.0, 1.0}));
  CHECK(z.margin == 0.0);
  const FitResult c = uniform_fit(f, BoundaryFunction::constant(1, cplx(0.5, -2.0)), 0.1);
  REQUIRE(c.ok);
  CHECK(c.poly == Polynomial1D::constant(cplx(0.5, -2.0)));
  CHECK(c.margin == 0.0);
}

TEST_CASE("uniform_fit of a step away from its jumps") {
  const ArcSet f({{0.2, kPi - 0.2}, {kPi + 0.2, kTwoPi - 0.2}});
  const BoundaryFunction step = BoundaryFunction::step({{Arc{0.0, kPi}, 1.0}}, 0.0);
  const FitResult r = uniform_fit(f, step, 0.1);
  REQUIRE(r.ok);
  CHECK(r.margin < 0.1);
  CHECK(dense_sup(f, [&](cplx z) { return std::abs(r.poly(z) - step(std::span<const cplx>(&z, 1))); }) < 0.1);
  CHECK(verify_fit(r.poly, f, step, 4096) <= r.margin + 1e-12);
}

TEST_CASE("disc_sup_norm bounds the sampled modulus") {
  const Polynomial1D p({1.0, cplx(0.0, 2.0), 0.0, -0.5});
  double s = 0.0;
  for (int i = 0; i < 100000; ++i) s = std::max(s, std::abs(p(std::polar(1.0, kTwoPi * i / 100000))));
  CHECK(disc_sup_norm(p) >= s);
  CHECK(disc_sup_norm(p) <= 1.1 * s);
  CHECK(disc_sup_norm(Polynomial1D::constant(-3.0)) == doctest::Approx(3.0));
}

TEST_CASE("TrigPoly evaluation") {
  const TrigPoly t{-1, {2.0, 0.0, cplx(0.0, 1.0)}};
  const double th = 0.7;
  CHECK(std::abs(t(th) - (2.0 * std::exp(cplx(0, -th)) + cplx(0, 1) * std::exp(cplx(0, th)))) < 1e-15);
  CHECK(t.hi() == 1);
  CHECK(t.abs_sum() == 3.0);
  CHECK(std::abs(t.to_boundary().at_angle(th) - t(th)) < 1e-15);
}

TEST_CASE("product_decompose of Re z1 Re z2 is one term") {
  const BoundaryFunction phi = BoundaryFunction::trig(2, {{{1, 1}, 0.25}, {{1, -1}, 0.25}, {{-1, 1}, 0.25}, {{-1, -1}, 0.25}});
  const DecomposeResult r = product_decompose(phi, 1e-9, 4);
  REQUIRE(r.ok);
  CHECK(r.terms.size() == 1);
  CHECK(r.error < 1e-12);
  const std::vector<cplx> z{std::polar(1.0, 0.3), std::polar(1.0, -1.1)};
  CHECK(std::abs(eval_terms(r.terms, z) - std::cos(0.3) * std::cos(-1.1)) < 1e-12);
}

TEST_CASE("product_decompose of z1 + conj z2 is two terms") {
  const BoundaryFunction phi = BoundaryFunction::trig(2, {{{1, 0}, 1.0}, {{0, -1}, 1.0}});
  const DecomposeResult r = product_decompose(phi, 1e-9, 4);
  REQUIRE(r.ok);
  CHECK(r.terms.size() == 2);
  CHECK(r.error < 1e-12);
}

TEST_CASE("product_decompose of |z1 + z2| against a 256^2 grid") {
  const BoundaryFunction phi = BoundaryFunction::abs(
      BoundaryFunction::sum(BoundaryFunction::coordinate(2, 0), BoundaryFunction::coordinate(2, 1)));
  const DecomposeResult r = product_decompose(phi, 0.1, 64);
  REQUIRE(r.ok);
  CHECK(r.error < 0.1);
  double err = 0.0;
  for (int i = 0; i < 256; ++i)
    for (int j = 0; j < 256; ++j) {
      const std::vector<cplx> z{std::polar(1.0, kTwoPi * (i + 0.37) / 256), std::polar(1.0, kTwoPi * (j + 0.61) / 256)};
      err = std::max(err, std::abs(eval_terms(r.terms, z) - std::abs(z[0] + z[1])));
    }
  CHECK(err < 0.1);
}

TEST_CASE("product_decompose error is monotone in the term cap") {
  const BoundaryFunction phi = BoundaryFunction::abs(
      BoundaryFunction::sum(BoundaryFunction::coordinate(2, 0), BoundaryFunction::scaled(BoundaryFunction::coordinate(2, 1), 0.5)));
  double prev = INFINITY;
  for (int m : {1, 2, 4, 8}) {
    const DecomposeResult r = product_decompose(phi, 1e-12, m);
    CHECK(r.error <= prev + 1e-12);
    prev = r.error;
  }
  CHECK_THROWS_AS(product_decompose(phi, 0.0, 4), std::invalid_argument);
}
