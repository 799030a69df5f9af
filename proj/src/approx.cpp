#include "wildbloch/approx.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace wildbloch {

namespace {

std::vector<cplx> unit_points(const std::vector<double>& angles) {
  std::vector<cplx> z(angles.size());
  for (std::size_t i = 0; i < angles.size(); ++i) z[i] = std::polar(1.0, angles[i]);
  return z;
}

// Weighted least squares over columns z^k, k = kmin .. degree. Rows past z_fit.size()
// are gap samples pulled towards 0 with weight `gap_weight`.
Polynomial1D lsq_fit(const std::vector<cplx>& z_fit, const std::vector<cplx>& target,
                     const std::vector<cplx>& z_gap, double gap_weight, int kmin, int degree) {
  const int ncol = degree - kmin + 1;
  const std::size_t nfit = z_fit.size();
  const std::size_t nrow = nfit + (gap_weight > 0.0 ? z_gap.size() : 0);
  Eigen::MatrixXcd a(static_cast<Eigen::Index>(nrow), ncol);
  Eigen::VectorXcd b(static_cast<Eigen::Index>(nrow));
  parallel_chunks(nrow, 256, [&](std::size_t, std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const bool gap = i >= nfit;
      const cplx z = gap ? z_gap[i - nfit] : z_fit[i];
      const double w = gap ? gap_weight : 1.0;
      cplx p = w;
      for (int k = 0; k < kmin; ++k) p *= z;
      for (int c = 0; c < ncol; ++c) {
        a(static_cast<Eigen::Index>(i), c) = p;
        p *= z;
      }
      b(static_cast<Eigen::Index>(i)) = gap ? cplx(0.0) : target[i];
    }
  });
  Eigen::VectorXcd x = a.householderQr().solve(b);
  std::vector<cplx> coeffs(static_cast<std::size_t>(degree) + 1, 0.0);
  for (int c = 0; c < ncol; ++c) coeffs[static_cast<std::size_t>(kmin + c)] = x(c);
  return Polynomial1D(coeffs);
}

// Penalty weights on the complement, tried from strongest to none. A penalty keeps
// the fit bounded off F, which plain least squares on F does not.
constexpr double kGapWeights[] = {0.03, 0.003, 0.0};

struct Candidate {
  Polynomial1D poly;
  double margin;
};

// Fits at one degree, returning the first penalty level that meets delta or the best one.
template <class Fit>
Candidate fit_degree(const Fit& fit, double delta) {
  Candidate best{Polynomial1D(), std::numeric_limits<double>::infinity()};
  for (double w : kGapWeights) {
    Candidate c = fit(w);
    if (c.margin < best.margin) best = c;
    if (c.margin < delta) return c;
  }
  return best;
}

std::vector<cplx> gap_points(const ArcSet& f, std::size_t nfit) {
  const ArcSet g = f.complement();
  if (g.empty()) return {};
  const double ratio = g.measure() / std::max(f.measure(), 1e-3);
  const auto n = std::max<std::size_t>(64, static_cast<std::size_t>(ratio * static_cast<double>(nfit)));
  return unit_points(g.sample_angles(n, false));
}

void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("fit tolerance must lie in (0, 1)");
}

std::size_t verification_count(int degree) {
  return std::max<std::size_t>(10000, 32 * static_cast<std::size_t>(std::max(degree, 1)));
}

bool polynomial_target(const BoundaryFunction& phi, Polynomial1D& out) {
  if (phi.dim() != 1 || phi.kind() != BoundaryFunction::Kind::Trig) return false;
  std::vector<cplx> c;
  for (const auto& [idx, v] : phi.terms()) {
    if (idx[0] < 0) return false;
    if (static_cast<std::size_t>(idx[0]) >= c.size()) c.resize(static_cast<std::size_t>(idx[0]) + 1, 0.0);
    c[static_cast<std::size_t>(idx[0])] = v;
  }
  out = c.empty() ? Polynomial1D() : Polynomial1D(c);
  return true;
}

// Degrees for which the best margin has not improved by 10% twice in a row stop the search.
bool stagnated(const std::vector<std::pair<int, double>>& trail) {
  if (trail.size() < 4) return false;
  const std::size_t n = trail.size();
  double before = trail[0].second;
  for (std::size_t i = 1; i + 2 < n; ++i) before = std::min(before, trail[i].second);
  return std::min(trail[n - 1].second, trail[n - 2].second) > 0.9 * before;
}

}  // namespace

double verify_fit(const Polynomial1D& p, const ArcSet& f, const BoundaryFunction& target,
                  std::size_t count) {
  const auto angles = f.sample_angles(count, false);
  const auto z = unit_points(angles);
  std::vector<cplx> v, d;
  p.eval_batch(z, v, d);
  double m = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) m = std::max(m, std::abs(v[i] - target.at_angle(angles[i])));
  return m;
}

double disc_sup_norm(const Polynomial1D& p) {
  const int deg = p.degree();
  if (deg <= 0) return std::abs(p.coeff(0));
  const std::size_t m = std::max<std::size_t>(4096, 256 * static_cast<std::size_t>(deg));
  std::vector<cplx> z(m);
  for (std::size_t j = 0; j < m; ++j) z[j] = std::polar(1.0, kTwoPi * static_cast<double>(j) / static_cast<double>(m));
  std::vector<cplx> v, d;
  p.eval_batch(z, v, d);
  double s = 0.0;
  for (const cplx& x : v) s = std::max(s, std::abs(x));
  // Bernstein: the sup exceeds the sampled max by at most a factor 1/(1 - pi deg / m).
  return s / (1.0 - kPi * deg / static_cast<double>(m));
}

FitResult runge_pair(const ArcSet& f, double delta, const FitOptions& opt) {
  check_delta(delta);
  FitResult r;
  if (f.empty()) {
    r.ok = true;
    r.margin = 0.0;
    r.reason = "empty arc set";
    return r;
  }
  if (f.is_full() || f.largest_gap() < opt.gap_min)
    throw std::invalid_argument("runge_pair: complement of F must contain a gap of at least gap_min");
  const auto one = BoundaryFunction::constant(1, 1.0);
  double best = std::numeric_limits<double>::infinity();
  for (int deg = opt.start_degree; deg <= opt.degree_cap; deg *= 2) {
    const std::size_t nfit = std::max<std::size_t>(512, 3 * static_cast<std::size_t>(deg + 1));
    const auto z = unit_points(f.sample_angles(nfit, true));
    const auto zg = gap_points(f, nfit);
    const std::vector<cplx> ones(z.size(), 1.0);
    const std::size_t nv = verification_count(deg);
    auto [p, margin] = fit_degree(
        [&](double w) {
          Polynomial1D c = lsq_fit(z, ones, zg, w, 1, deg);
          return Candidate{c, verify_fit(c, f, one, nv)};
        },
        delta);
    r.trail.emplace_back(deg, margin);
    if (margin < best) {
      best = margin;
      r.poly = p;
      r.degree = p.degree();
      r.margin = margin;
      r.verification_points = nv;
    }
    if (margin < delta) break;
    if (deg >= 128 && stagnated(r.trail)) break;
  }
  r.at_origin = std::abs(r.poly(0.0));
  r.sup_norm = disc_sup_norm(r.poly);
  r.ok = r.margin < delta && r.at_origin < delta;
  if (!r.ok) r.reason = "tolerance not reached within the degree cap";
  return r;
}

FitResult uniform_fit(const ArcSet& f, const BoundaryFunction& phi, double delta, const FitOptions& opt) {
  if (!(delta > 0.0)) throw std::invalid_argument("uniform_fit: tolerance must be positive");
  if (phi.dim() != 1) throw std::invalid_argument("uniform_fit: one-variable target required");
  FitResult r;
  Polynomial1D exact;
  if (polynomial_target(phi, exact) && exact.degree() <= opt.degree_cap) {
    r.ok = true;
    r.poly = exact;
    r.degree = exact.degree();
    r.margin = 0.0;
    r.at_origin = std::abs(exact(0.0));
    r.sup_norm = disc_sup_norm(exact);
    r.reason = "polynomial target";
    return r;
  }
  if (f.empty()) {
    r.ok = true;
    r.reason = "empty arc set";
    return r;
  }
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> degrees = {0, 1, 2};
  for (int d = 4; d <= opt.degree_cap; d *= 2) degrees.push_back(d);
  for (int deg : degrees) {
    if (deg > opt.degree_cap) break;
    const std::size_t nfit = std::max<std::size_t>(512, 3 * static_cast<std::size_t>(deg + 1));
    const auto angles = f.sample_angles(nfit, true);
    const auto z = unit_points(angles);
    const auto zg = gap_points(f, nfit);
    std::vector<cplx> target(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) target[i] = phi.at_angle(angles[i]);
    const std::size_t nv = verification_count(deg);
    auto [q, margin] = fit_degree(
        [&](double w) {
          Polynomial1D c = lsq_fit(z, target, zg, w, 0, deg);
          return Candidate{c, verify_fit(c, f, phi, nv)};
        },
        delta);
    r.trail.emplace_back(deg, margin);
    if (margin < best) {
      best = margin;
      r.poly = q;
      r.degree = q.degree();
      r.margin = margin;
      r.verification_points = nv;
    }
    if (margin < delta) break;
    if (deg >= 128 && stagnated(r.trail)) break;
  }
  r.at_origin = std::abs(r.poly(0.0));
  r.sup_norm = disc_sup_norm(r.poly);
  r.ok = r.margin < delta;
  if (!r.ok) r.reason = "tolerance not reached within the degree cap";
  return r;
}

}  // namespace wildbloch
