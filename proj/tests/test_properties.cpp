#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "wildbloch/bloch.hpp"
#include "wildbloch/universal.hpp"

using namespace wildbloch;

namespace {

cplx rand_disc(Rng& rng, double rmax = 1.0) {
  return std::polar(rmax * std::sqrt(rng.uniform()), kTwoPi * rng.uniform());
}

cplx rand_cplx(Rng& rng) { return {rng.normal(), rng.normal()}; }

Polynomial1D rand_poly(Rng& rng, int deg) {
  std::vector<cplx> c(deg + 1);
  for (auto& x : c) x = rand_cplx(rng);
  return Polynomial1D(c);
}

InnerSpec rand_inner(Rng& rng, int depth = 0) {
  switch (static_cast<int>(rng.uniform() * (depth > 0 ? 3 : 4))) {
    case 0: {
      std::vector<Atom> atoms;
      for (int i = 0, n = 1 + static_cast<int>(3 * rng.uniform()); i < n; ++i)
        atoms.push_back({std::polar(1.0, kTwoPi * rng.uniform()), 0.2 + 3 * rng.uniform()});
      return InnerSpec::singular(SingularMeasureSpec::atomic(atoms));
    }
    case 1: {
      CantorSpec c;
      c.center = kTwoPi * rng.uniform();
      c.length = 0.2 + 2 * rng.uniform();
      c.ratio = 0.1 + 0.35 * rng.uniform();
      return InnerSpec::singular(SingularMeasureSpec::cantor_measure(c, 0.2 + 2 * rng.uniform()));
    }
    case 2: {
      std::vector<cplx> z;
      for (int i = 0, n = 1 + static_cast<int>(3 * rng.uniform()); i < n; ++i) z.push_back(rand_disc(rng, 0.95));
      return InnerSpec::blaschke(z);
    }
    default: return InnerSpec::compose({rand_inner(rng, depth + 1), rand_inner(rng, depth + 1)});
  }
}

// Evaluation can legitimately refuse points on a Cantor support.
template <class F>
bool try_eval(F&& f) {
  try {
    f();
    return true;
  } catch (const QuadratureError&) {
    return false;
  }
}

double monomial_bloch(int n) {
  // max of n r^(n-1) (1 - r^2), attained at r^2 = (n-1)/(n+1)
  if (n == 1) return 1.0;
  const double r = std::sqrt((n - 1.0) / (n + 1.0));
  return n * std::pow(r, n - 1) * (1 - r * r);
}

}  // namespace

TEST_CASE("Schwarz-Pick holds for random inner functions") {
  Rng rng(101);
  for (int s = 0; s < 20; ++s) {
    const InnerSpec spec = rand_inner(rng);
    for (int i = 0; i < 100; ++i) {
      const cplx z = rand_disc(rng, 0.995);
      try_eval([&] {
        const Quotient q = hyperbolic_quotient(spec, z);
        if (!q.saturated) CHECK(q.q <= 1.0 + 1e-9);
        CHECK(std::abs(inner_eval(spec, z).value) < 1.0);
      });
    }
  }
}

TEST_CASE("quotients multiply under composition") {
  Rng rng(202);
  for (int s = 0; s < 10; ++s) {
    const InnerSpec g = rand_inner(rng, 1), h = rand_inner(rng, 1);
    const InnerSpec gh = InnerSpec::compose({g, h});
    for (int i = 0; i < 50; ++i) {
      const cplx z = rand_disc(rng, 0.9);
      try_eval([&] {
        const Quotient a = hyperbolic_quotient(gh, z);
        const InnerValue hv = inner_eval(h, z);
        const Quotient b = hyperbolic_quotient(g, hv.value, hv.defect);
        const Quotient c = hyperbolic_quotient(h, z);
        if (!a.saturated && !b.saturated && !c.saturated) CHECK(a.q == doctest::Approx(b.q * c.q).epsilon(1e-10));
      });
    }
  }
}

TEST_CASE("singular inner functions at the origin") {
  Rng rng(303);
  for (int s = 0; s < 20; ++s) {
    InnerSpec spec = rand_inner(rng, 1);
    if (spec.kind != InnerSpec::Kind::Singular) continue;
    CHECK(std::abs(inner_eval(spec, 0.0).value - std::exp(-spec.measure.total_mass())) < 1e-12);
  }
}

TEST_CASE("certified bound dominates the true norm of monomials") {
  for (int n = 1; n <= 64; ++n) {
    const BlochReport r = bloch_norm(FunctionExpr::poly(Polynomial1D::monomial(n)));
    REQUIRE(r.certified_bound);
    CHECK(*r.certified_bound >= monomial_bloch(n));
    CHECK(r.norm <= monomial_bloch(n) + 1e-12);
  }
}

TEST_CASE("Bloch norm is subadditive on polynomials") {
  Rng rng(404);
  const SampleGrid g = SampleGrid::norm_grid(128);
  for (int s = 0; s < 20; ++s) {
    const Polynomial1D a = rand_poly(rng, 1 + static_cast<int>(10 * rng.uniform()));
    const Polynomial1D b = rand_poly(rng, 1 + static_cast<int>(10 * rng.uniform()));
    const double na = bloch_norm(FunctionExpr::poly(a), Domain::disc(), g).norm;
    const double nb = bloch_norm(FunctionExpr::poly(b), Domain::disc(), g).norm;
    const double nab = bloch_norm(FunctionExpr::poly(a + b), Domain::disc(), g).norm;
    CHECK(nab <= na + nb + 1e-9);
  }
}

TEST_CASE("Bloch norm of an inner function is at most its quotient") {
  Rng rng(505);
  const SampleGrid g = SampleGrid::disc({0.0, 0.5, 0.9, 0.99}, 64);
  for (int s = 0; s < 8; ++s) {
    const InnerSpec spec = rand_inner(rng, 1);
    try_eval([&] {
      CHECK(bloch_norm(FunctionExpr::inner(spec), Domain::disc(), g).seminorm_sup <= quotient_field(spec, g).sup + 1e-9);
    });
  }
}

TEST_CASE("radial derivative of homogeneous polynomials") {
  Rng rng(606);
  for (int s = 0; s < 20; ++s) {
    const int n = 1 + static_cast<int>(3 * rng.uniform());
    const int d = 1 + static_cast<int>(6 * rng.uniform());
    PolynomialND p(n);
    for (int t = 0; t < 6; ++t) {
      MultiIndex a(n, 0);
      for (int k = 0; k < d; ++k) ++a[static_cast<int>(n * rng.uniform())];
      p.set(a, rand_cplx(rng));
    }
    REQUIRE(p.is_homogeneous());
    const FunctionExpr f = FunctionExpr::poly(p, Domain::ball(n));
    for (int i = 0; i < 50; ++i) {
      std::vector<cplx> z(n);
      for (auto& x : z) x = rand_disc(rng) / std::sqrt(static_cast<double>(n)) * 0.99;
      const cplx v = eval(f, z);
      CHECK(std::abs(radial_derivative(f, z) - static_cast<double>(d) * v) <= 1e-10 * std::max(1.0, std::abs(v) * d));
    }
  }
}

TEST_CASE("jets agree with finite differences on random expressions") {
  Rng rng(707);
  const double h = 1e-6;
  for (int s = 0; s < 20; ++s) {
    const FunctionExpr p = FunctionExpr::poly(rand_poly(rng, 3).dilate(0.3));
    const FunctionExpr inner = FunctionExpr::inner(rand_inner(rng, 1));
    const FunctionExpr f = FunctionExpr::sum(FunctionExpr::product(p, inner), FunctionExpr::radialize(FunctionExpr::dilate(inner, 0.8)));
    const cplx z = rand_disc(rng, 0.6);
    try_eval([&] {
      const cplx fd = (eval(f, z + h) - eval(f, z - h)) / (2 * h);
      const cplx d = complex_gradient(f, std::vector<cplx>{z})[0];
      CHECK(std::abs(fd - d) <= 1e-5 * std::max(1.0, std::abs(d)));
    });
  }
}

TEST_CASE("truncating a polynomial recovers its dilation") {
  Rng rng(808);
  for (int s = 0; s < 10; ++s) {
    const int deg = 1 + static_cast<int>(12 * rng.uniform());
    const Polynomial1D p = rand_poly(rng, deg);
    const double r = 0.3 + 0.6 * rng.uniform();
    const TruncationResult t = taylor_truncate(FunctionExpr::poly(p), r, deg);
    const Polynomial1D q = t.poly.to_1d();
    const Polynomial1D want = p.dilate(r);
    for (int k = 0; k <= deg; ++k) CHECK(std::abs(q.coeff(k) - want.coeff(k)) < 1e-10);
    CHECK(t.ok);
  }
}

TEST_CASE("the measure metric is a bounded pseudometric") {
  Rng rng(909);
  const std::size_t n = 500;
  std::vector<cplx> a(n), b(n), c(n);
  for (int s = 0; s < 20; ++s) {
    for (std::size_t i = 0; i < n; ++i) a[i] = 2.0 * rand_cplx(rng), b[i] = 2.0 * rand_cplx(rng), c[i] = 2.0 * rand_cplx(rng);
    const double ab = measure_metric_samples(a, b), bc = measure_metric_samples(b, c), ac = measure_metric_samples(a, c);
    CHECK(ab >= 0.0);
    CHECK(ab <= 1.0);
    CHECK(ab == measure_metric_samples(b, a));
    CHECK(ac <= ab + bc + 1e-15);
    CHECK(measure_metric_samples(a, a) == 0.0);
  }
}

TEST_CASE("apply_Tnw is linear on random inputs") {
  Rng rng(1001);
  const SampleGrid g = SampleGrid::circle(256, 17);
  for (int s = 0; s < 10; ++s) {
    const Polynomial1D a = rand_poly(rng, 6), b = rand_poly(rng, 9);
    const double r = 0.5 + 0.49 * rng.uniform();
    const cplx w = rand_disc(rng, 0.8);
    const auto ta = apply_Tnw(FunctionExpr::poly(a), r, w, g);
    const auto tb = apply_Tnw(FunctionExpr::poly(b), r, w, g);
    const auto tab = apply_Tnw(FunctionExpr::sum(FunctionExpr::poly(a), FunctionExpr::poly(b)), r, w, g);
    for (std::size_t i = 0; i < tab.size(); ++i) CHECK(std::abs(tab[i] - (ta[i] + tb[i])) <= 1e-12 * (1 + std::abs(tab[i])));
  }
}

TEST_CASE("certificates grow with the anchor list") {
  Rng rng(1102);
  const auto radii = dyadic_radius_schedule(12);
  const SampleGrid g = SampleGrid::circle(256, 3);
  for (int s = 0; s < 10; ++s) {
    const FunctionExpr f = FunctionExpr::poly(rand_poly(rng, 5).dilate(0.5));
    const BoundaryFunction y = BoundaryFunction::coordinate(1, 0);
    std::vector<cplx> anchors{rand_disc(rng, 0.5)};
    double prev = 0.0;
    for (int k = 0; k < 4; ++k) {
      const double d = certify(f, y, radii, 6, anchors, g).d_sup;
      CHECK(d >= prev);
      prev = d;
      anchors.push_back(rand_disc(rng, 0.5));
    }
  }
}

TEST_CASE("arc set complements") {
  Rng rng(1203);
  for (int s = 0; s < 50; ++s) {
    std::vector<Arc> arcs;
    for (int i = 0, n = 1 + static_cast<int>(4 * rng.uniform()); i < n; ++i) {
      const double a = kTwoPi * (rng.uniform() - 0.5) * 2;
      arcs.push_back({a, a + 2.0 * rng.uniform()});
    }
    const ArcSet f(arcs);
    CHECK(f.complement().measure() == doctest::Approx(1.0 - f.measure()).epsilon(1e-12));
    CHECK(f.intersect(f.complement()).measure() < 1e-12);
    for (int i = 0; i < 20; ++i) {
      const double t = kTwoPi * rng.uniform();
      if (!f.complement().contains(t)) CHECK(f.contains(t));
    }
  }
}
