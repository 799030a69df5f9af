#include <doctest.h>

#include <cmath>

#include "wildbloch/expr.hpp"
#include "wildbloch/serialize.hpp"

using namespace wildbloch;

namespace {

FunctionExpr atom(double mass = 1.0) {
  return FunctionExpr::inner(InnerSpec::singular(SingularMeasureSpec::atomic({{cplx(1.0, 0.0), mass}})));
}

FunctionExpr constant(cplx c) { return FunctionExpr::poly(Polynomial1D::constant(c)); }

// 1/(1 - z/2) = (2/3)(2 - B(z)) with B(z) = (1/2 - z)/(1 - z/2).
FunctionExpr geometric_half() {
  const FunctionExpr b = FunctionExpr::inner(InnerSpec::blaschke({cplx(0.5, 0.0)}));
  return FunctionExpr::sum(FunctionExpr::product(constant(-2.0 / 3.0), b), constant(4.0 / 3.0));
}

}  // namespace

TEST_CASE("Polynomial1D trims and evaluates") {
  const Polynomial1D p({1.0, 2.0, 0.0, 0.0});
  CHECK(p.degree() == 1);
  CHECK(p(0.0) == cplx(1.0));
  CHECK(Polynomial1D({0.0, 0.0}).is_zero());
  CHECK(Polynomial1D::monomial(3, 2.0).coeff(3) == cplx(2.0));
  CHECK_THROWS_AS(Polynomial1D::monomial(-1), std::invalid_argument);
  const auto [v, d] = Polynomial1D({0.0, 0.0, 1.0}).eval_with_derivative(cplx(0.0, 0.5));
  CHECK(std::abs(v - cplx(-0.25)) < 1e-15);
  CHECK(std::abs(d - cplx(0.0, 1.0)) < 1e-15);
}

TEST_CASE("PolynomialND stores no zeros") {
  PolynomialND p(2);
  p.set({1, 0}, 2.0);
  p.set({1, 0}, 0.0);
  CHECK(p.is_zero());
  p.set({1, 1}, 3.0);
  CHECK(p.total_degree() == 2);
  CHECK(p.is_homogeneous());
  CHECK_THROWS_AS(p.set({1, -1}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(p.set({1}, 1.0), std::invalid_argument);
}

TEST_CASE("eval examples") {
  CHECK(std::abs(eval(FunctionExpr::poly(Polynomial1D({0.0, 0.0, 1.0})), cplx(0.0, 0.5)) - cplx(-0.25)) < 1e-15);
  CHECK(std::abs(eval(atom(), cplx(0.0)) - std::exp(-1.0)) < 1e-15);
  const FunctionExpr z3 = FunctionExpr::poly(Polynomial1D::monomial(3));
  CHECK(std::abs(eval(FunctionExpr::dilate(z3, 0.5), cplx(0.8)) - 0.064) < 1e-15);
}

TEST_CASE("eval rejects boundary and exterior points") {
  const FunctionExpr f = FunctionExpr::identity();
  CHECK_THROWS_AS(eval(f, cplx(1.0, 0.0)), std::invalid_argument);
  CHECK_THROWS_AS(eval(f, cplx(0.0, 1.5)), std::invalid_argument);
  const FunctionExpr g = FunctionExpr::poly(PolynomialND(2, {{{1, 1}, 1.0}}), Domain::ball(2));
  const std::vector<cplx> out{0.8, 0.8};
  CHECK_THROWS_AS(eval(g, out), std::invalid_argument);
}

TEST_CASE("dilate validates and collapses") {
  const FunctionExpr f = FunctionExpr::identity();
  CHECK_THROWS_AS(FunctionExpr::dilate(f, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(FunctionExpr::dilate(f, 1.5), std::invalid_argument);
  const FunctionExpr g = FunctionExpr::dilate(FunctionExpr::dilate(f, 0.5), 0.4);
  CHECK(g.kind() == FunctionExpr::Kind::Dilate);
  CHECK(g.dilation() == doctest::Approx(0.2));
  CHECK(g.children()[0].kind() == FunctionExpr::Kind::Poly1d);
}

TEST_CASE("compose rejects inner functions leaving the disc") {
  const FunctionExpr big = FunctionExpr::poly(Polynomial1D({0.0, 2.0}));
  CHECK_THROWS_AS(FunctionExpr::compose(FunctionExpr::identity(), big), std::invalid_argument);
}

TEST_CASE("sum and product require matching domains") {
  const FunctionExpr a = FunctionExpr::identity();
  const FunctionExpr b = FunctionExpr::poly(PolynomialND(2, {{{1, 0}, 1.0}}), Domain::polydisc(2));
  CHECK_THROWS_AS(FunctionExpr::sum(a, b), std::invalid_argument);
  CHECK_THROWS_AS(FunctionExpr::product(a, b), std::invalid_argument);
}

TEST_CASE("complex_gradient examples") {
  const FunctionExpr f = FunctionExpr::poly(PolynomialND(2, {{{1, 1}, 1.0}}), Domain::polydisc(2));
  const std::vector<cplx> z{0.3, cplx(0.0, 0.4)};
  const auto g = complex_gradient(f, z);
  CHECK(std::abs(g[0] - cplx(0.0, 0.4)) < 1e-15);
  CHECK(std::abs(g[1] - cplx(0.3)) < 1e-15);

  const FunctionExpr sq = FunctionExpr::poly(Polynomial1D::monomial(2));
  const FunctionExpr cube = FunctionExpr::poly(Polynomial1D::monomial(3));
  const auto h = complex_gradient(FunctionExpr::compose(sq, cube), std::vector<cplx>{0.5});
  CHECK(std::abs(h[0] - 0.1875) < 1e-15);
}

TEST_CASE("radialize is z f(z)") {
  const FunctionExpr j = FunctionExpr::radialize(atom());
  const cplx z(0.2, -0.3);
  CHECK(std::abs(eval(j, z) - z * eval(atom(), z)) < 1e-15);
}

TEST_CASE("taylor_truncate of a monomial") {
  const TruncationResult t = taylor_truncate(FunctionExpr::poly(Polynomial1D::monomial(5)), 0.9, 5);
  const Polynomial1D p = t.poly.to_1d();
  CHECK(p.degree() == 5);
  CHECK(std::abs(p.coeff(5) - std::pow(0.9, 5)) < 1e-14);
  for (int k = 0; k < 5; ++k) CHECK(std::abs(p.coeff(k)) < 1e-14);
  CHECK(t.tail_bound < 1e-12);
  CHECK(t.ok);
}

TEST_CASE("taylor_truncate of 1/(1 - z/2) gives a geometric sequence") {
  const TruncationResult t = taylor_truncate(geometric_half(), 0.9, 40, 1e-10);
  const Polynomial1D p = t.poly.to_1d();
  for (int k = 0; k <= 40; ++k) CHECK(std::abs(p.coeff(k) - std::pow(0.45, k)) < 1e-12);
  CHECK(t.tail_bound < 1e-10);
  CHECK(t.ok);
}

TEST_CASE("taylor_truncate of an atomic inner function matches the dilated values") {
  const FunctionExpr f = atom();
  const TruncationResult t = taylor_truncate(f, 0.5, 60, 1e-8);
  const Polynomial1D p = t.poly.to_1d();
  Rng rng(17);
  for (int i = 0; i < 100; ++i) {
    const cplx z = std::polar(std::sqrt(rng.uniform()), kTwoPi * rng.uniform());
    CHECK(std::abs(p(z) - eval(f, 0.5 * z)) < 1e-8);
  }
}

TEST_CASE("taylor_truncate flags a section that is too short") {
  const TruncationResult t = taylor_truncate(atom(), 0.99, 4, 1e-8);
  CHECK_FALSE(t.ok);
  CHECK(t.tail_bound > 1e-8);
  CHECK_THROWS_AS(taylor_truncate(atom(), 1.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(taylor_truncate(atom(), 0.5, -1), std::invalid_argument);
}

TEST_CASE("path_points examples") {
  CHECK(path_points({1.0, 0.0, {}}, {0.5})[0] == cplx(0.5));
  CHECK(std::abs(path_points({1.0, 0.5, {}}, {0.0})[0] - cplx(0.5)) < 1e-15);
  const cplx p = path_points({cplx(0.0, 1.0), 0.2, {}}, {0.9})[0];
  CHECK(std::abs(p - cplx(0.02, 0.9)) < 1e-15);
  CHECK(std::abs(p) < 1.0);
  CHECK_THROWS_AS(path_points({1.0, 1.2, {}}, {0.5}), std::invalid_argument);
  CHECK_THROWS_AS(path_points({1.0, 0.0, {}}, {1.0}), std::invalid_argument);
}

TEST_CASE("FunctionExpr JSON round trip is bit exact") {
  const Polynomial1D p({cplx(0.1, -1.0 / 3.0), cplx(std::exp(1.0), 1e-300), cplx(-2.5e17, 0.0)});
  const FunctionExpr f = FunctionExpr::sum(
      FunctionExpr::product(FunctionExpr::poly(p), FunctionExpr::compose(FunctionExpr::poly(p.dilate(0.1)), atom(2.5))),
      FunctionExpr::radialize(FunctionExpr::dilate(atom(), 0.7)));
  const json j = encode(f);
  const FunctionExpr g = decode_function(json::parse(j.dump()));
  CHECK(g == f);
  CHECK(encode(g).dump() == j.dump());

  PolynomialND q(3);
  q.set({1, 2, 0}, cplx(0.1, 0.7));
  q.set({0, 0, 3}, cplx(-1.0 / 7.0, 0.0));
  const FunctionExpr fq = FunctionExpr::poly(q, Domain::ball(3));
  CHECK(decode_function(json::parse(encode(fq).dump())) == fq);
  CHECK(decode_polynd(json::parse(encode(q).dump())) == q);
}

TEST_CASE("FunctionExpr decoding errors") {
  CHECK_THROWS_AS(decode_function(json{{"kind", "nope"}}), SchemaError);
  CHECK_THROWS_AS(decode_function(json{{"kind", "poly1d"}}), SchemaError);
  CHECK_THROWS_AS(decode_function(json{{"kind", "dilate"}, {"r", 2.0}, {"child", encode(atom())}}), SchemaError);
  const FunctionExpr l = decode_function(json{{"kind", "lacunary"}, {"K", 3}});
  CHECK(l.poly1d().degree() == 8);
}
