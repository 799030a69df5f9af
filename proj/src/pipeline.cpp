#include "wildbloch/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wildbloch {

// --- separable polynomials ---------------------------------------------------

SeparablePolynomial SeparablePolynomial::disc(const Polynomial1D& p) {
  SeparablePolynomial s{1, {}};
  if (!p.is_zero()) s.terms.push_back({p});
  return s;
}

cplx SeparablePolynomial::operator()(std::span<const cplx> z) const {
  if (static_cast<int>(z.size()) != dim) throw std::invalid_argument("separable polynomial: dimension mismatch");
  cplx s = 0.0;
  for (const auto& t : terms) {
    cplx p = 1.0;
    for (int j = 0; j < dim; ++j) p *= t[static_cast<std::size_t>(j)](z[static_cast<std::size_t>(j)]);
    s += p;
  }
  return s;
}

bool SeparablePolynomial::is_zero() const {
  for (const auto& t : terms) {
    bool zero = false;
    for (const auto& p : t) zero = zero || p.is_zero();
    if (!zero) return false;
  }
  return true;
}

int SeparablePolynomial::max_degree() const {
  int d = 0;
  for (const auto& t : terms)
    for (const auto& p : t) d = std::max(d, p.degree());
  return d;
}

FunctionExpr SeparablePolynomial::to_expr() const {
  if (dim == 1) {
    Polynomial1D s;
    for (const auto& t : terms) s = s + t[0];
    return FunctionExpr::poly(s);
  }
  const Domain dom = Domain::polydisc(dim);
  if (terms.empty()) return FunctionExpr::poly(PolynomialND(dim), dom);
  FunctionExpr acc = FunctionExpr::poly(PolynomialND(dim), dom);
  bool first = true;
  for (const auto& t : terms) {
    FunctionExpr prod = FunctionExpr::poly(PolynomialND::from_1d(t[0], dim, 0), dom);
    for (int j = 1; j < dim; ++j)
      prod = FunctionExpr::product(prod, FunctionExpr::poly(PolynomialND::from_1d(t[static_cast<std::size_t>(j)], dim, j), dom));
    acc = first ? prod : FunctionExpr::sum(acc, prod);
    first = false;
  }
  return acc;
}

PolynomialND SeparablePolynomial::expand(std::size_t max_terms) const {
  PolynomialND acc(dim);
  for (const auto& t : terms) {
    std::size_t size = 1;
    for (const auto& p : t) size *= static_cast<std::size_t>(p.degree() + 1);
    if (size > max_terms) throw std::length_error("separable polynomial too large to expand");
    PolynomialND prod = PolynomialND::from_1d(t[0], dim, 0);
    for (int j = 1; j < dim; ++j) prod = prod * PolynomialND::from_1d(t[static_cast<std::size_t>(j)], dim, j);
    acc = acc + prod;
  }
  return acc;
}

namespace {

struct AxisTable {
  std::vector<cplx> value, deriv;
};

std::vector<cplx> axis_points(const std::vector<double>& radii, int angular) {
  std::vector<cplx> z;
  z.reserve(radii.size() * static_cast<std::size_t>(angular));
  for (double r : radii)
    for (int a = 0; a < angular; ++a) z.push_back(std::polar(r, kTwoPi * a / angular));
  return z;
}

double disc_seminorm(const Polynomial1D& p) {
  return bloch_norm(FunctionExpr::poly(p)).seminorm_sup;
}

}  // namespace

SeparableBloch separable_bloch(const SeparablePolynomial& f, std::vector<double> radii, int angular) {
  SeparableBloch out;
  const int n = f.dim;
  std::vector<cplx> origin(static_cast<std::size_t>(n), 0.0);
  out.value_at_origin = std::abs(f(origin));
  for (const auto& t : f.terms) {
    for (int k = 0; k < n; ++k) {
      double cross = 1.0;
      for (int j = 0; j < n; ++j)
        if (j != k) cross *= disc_sup_norm(t[static_cast<std::size_t>(j)]);
      out.product_bound += disc_seminorm(t[static_cast<std::size_t>(k)]) * cross;
    }
  }
  if (n == 1) {
    const BlochReport b = bloch_norm(f.to_expr());
    out.seminorm_sup = b.seminorm_sup;
    out.norm = b.norm;
    return out;
  }
  if (radii.empty()) {
    if (n == 2) radii = dyadic_radii(2, 16);
    else if (n == 3) radii = dyadic_radii(1, 12);
    else radii = dyadic_radii(1, n == 4 ? 6 : 3);
  }
  if (angular <= 0) angular = n == 2 ? 64 : (n == 3 ? 16 : (n == 4 ? 8 : 4));
  const auto pts = axis_points(radii, angular);
  const std::size_t na = pts.size();
  std::vector<double> defect(na);
  for (std::size_t i = 0; i < na; ++i) defect[i] = disc_defect(pts[i]);
  const std::size_t m = f.terms.size();
  std::vector<std::vector<AxisTable>> tab(m, std::vector<AxisTable>(static_cast<std::size_t>(n)));
  for (std::size_t l = 0; l < m; ++l)
    for (int j = 0; j < n; ++j)
      f.terms[l][static_cast<std::size_t>(j)].eval_batch(pts, tab[l][static_cast<std::size_t>(j)].value,
                                                       tab[l][static_cast<std::size_t>(j)].deriv);
  std::size_t total = 1;
  for (int j = 0; j < n; ++j) total *= na;
  const std::size_t chunk = std::max<std::size_t>(1, total / 256);
  const std::size_t nchunks = (total + chunk - 1) / chunk;
  std::vector<double> best(nchunks, 0.0);
  parallel_chunks(total, chunk, [&](std::size_t c, std::size_t lo, std::size_t hi) {
    std::size_t idx[kMaxDim];
    cplx grad[kMaxDim];
    double b = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      std::size_t rest = i;
      for (int j = n - 1; j >= 0; --j) {
        idx[j] = rest % na;
        rest /= na;
      }
      for (int k = 0; k < n; ++k) grad[k] = 0.0;
      for (std::size_t l = 0; l < m; ++l) {
        for (int k = 0; k < n; ++k) {
          cplx p = tab[l][static_cast<std::size_t>(k)].deriv[idx[k]];
          for (int j = 0; j < n; ++j)
            if (j != k) p *= tab[l][static_cast<std::size_t>(j)].value[idx[j]];
          grad[k] += p;
        }
      }
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += defect[idx[k]] * std::abs(grad[k]);
      b = std::max(b, s);
    }
    best[c] = b;
  });
  for (double b : best) out.seminorm_sup = std::max(out.seminorm_sup, b);
  out.norm = out.value_at_origin + out.seminorm_sup;
  return out;
}

// --- good sets ---------------------------------------------------------------

bool PullbackSet::contains(cplx zeta) const {
  if (!F.contains(zeta)) return false;
  if (!pullback) return true;
  const auto v = inner_boundary_value(inner, zeta);
  return v && F.contains(std::arg(zeta * *v));
}

bool GoodSet::contains(std::span<const cplx> zeta) const {
  if (static_cast<int>(zeta.size()) != dim) throw std::invalid_argument("good set: dimension mismatch");
  for (const auto& term : factors)
    for (int j = 0; j < dim; ++j)
      if (!term[static_cast<std::size_t>(j)].contains(zeta[static_cast<std::size_t>(j)])) return false;
  return true;
}

MeasureEstimate GoodSet::measure(std::size_t samples, std::uint64_t seed) const {
  const std::vector<cplx> pts = sample_torus(dim, samples, seed);
  std::vector<unsigned char> hit(samples, 0);
  const auto d = static_cast<std::size_t>(dim);
  parallel_chunks(samples, 1024, [&](std::size_t, std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) hit[i] = contains(std::span<const cplx>(pts.data() + i * d, d)) ? 1 : 0;
  });
  std::size_t hits = 0;
  for (auto h : hit) hits += h;
  MeasureEstimate est;
  est.samples = samples;
  est.value = static_cast<double>(hits) / static_cast<double>(samples);
  est.half_width = binomial_half_width(est.value, samples);
  return est;
}

std::pair<double, std::size_t> sup_error_on(const GoodSet& e, const std::function<cplx(std::span<const cplx>)>& f,
                                            const BoundaryFunction& phi, std::size_t samples,
                                            std::uint64_t seed) {
  const std::vector<cplx> pts = sample_torus(e.dim, samples, seed);
  const auto d = static_cast<std::size_t>(e.dim);
  const std::size_t chunk = 512;
  const std::size_t nchunks = (samples + chunk - 1) / chunk;
  std::vector<double> best(nchunks, 0.0);
  std::vector<std::size_t> count(nchunks, 0);
  parallel_chunks(samples, chunk, [&](std::size_t c, std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      std::span<const cplx> z(pts.data() + i * d, d);
      if (!e.contains(z)) continue;
      ++count[c];
      best[c] = std::max(best[c], std::abs(f(z) - phi(z)));
    }
  });
  double s = 0.0;
  std::size_t n = 0;
  for (std::size_t c = 0; c < nchunks; ++c) {
    s = std::max(s, best[c]);
    n += count[c];
  }
  return {s, n};
}

void BlockParams::validate() const {
  auto in01 = [](double x) { return x > 0.0 && x < 1.0; };
  if (!in01(eps1) || !in01(eps2)) throw std::invalid_argument("block budgets must lie in (0, 1)");
  if (eta >= 1.0) throw std::invalid_argument("block eta must be < 1");
  if (r >= 1.0) throw std::invalid_argument("truncation radius must be < 1");
  if (degree_cap < 1 || max_chain < 1) throw std::invalid_argument("block caps must be positive");
}

// --- disc block --------------------------------------------------------------

namespace {

std::vector<double> gap_centers_for(const BoundaryFunction& phi) {
  const int samples = 8192;
  std::vector<double> jumps = measured_jumps(phi, samples);
  std::vector<double> centers;
  const double merge = 4.0 * kTwoPi / samples;
  for (double a : jumps) {
    if (!centers.empty() && a - centers.back() < merge) continue;
    centers.push_back(a);
  }
  if (centers.size() > 1 && centers.front() + kTwoPi - centers.back() < merge) centers.pop_back();
  if (centers.empty()) centers.push_back(kPi);
  return centers;
}

double multiplier_constant(const Polynomial1D& q) {
  const SampleGrid g = default_norm_grid(FunctionExpr::poly(q));
  const PointSet ps = grid_points(g);
  std::vector<cplx> v, d;
  q.eval_batch(ps.coords, v, d);
  double m = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) m = std::max(m, disc_defect(ps.coords[i]) * std::abs(d[i]) + std::abs(v[i]));
  return m;
}

void note_stage(std::string& stage, std::string& reason, const std::string& s, const std::string& why) {
  if (!stage.empty()) return;
  stage = s;
  reason = why;
}

}  // namespace

BlockResult build_block(const BoundaryFunction& phi, const BlockParams& params, const InnerSpec& base,
                        const PipelineOptions& opt) {
  params.validate();
  if (phi.dim() != 1) throw std::invalid_argument("build_block: one-variable target required");
  base.validate();
  BlockResult res;
  if (phi.is_zero()) {
    res.ok = true;
    res.report.measure_E = 1.0;
    return res;
  }

  res.gap_centers = gap_centers_for(phi);
  const double gap_len = kTwoPi * (params.eps2 / 4.0) / static_cast<double>(res.gap_centers.size());
  std::vector<Arc> gaps;
  for (double c : res.gap_centers) gaps.push_back({c - gap_len / 2, c + gap_len / 2});
  const ArcSet F = ArcSet(gaps).complement();
  res.report.measure_F = F.measure();

  FitOptions fo;
  fo.degree_cap = params.degree_cap;
  const FitResult qf = uniform_fit(F, phi, params.eps1 / 2, fo);
  if (!qf.ok) note_stage(res.stage, res.reason, "uniform_fit", qf.reason);
  res.Q = qf.poly;
  res.report.q_degree = qf.degree;
  res.report.q_margin = qf.margin;
  res.report.q_sup = qf.sup_norm;

  const double mult = multiplier_constant(res.Q);
  res.report.multiplier = mult;
  const double p_delta = std::min(0.99, qf.sup_norm > 0.0 ? params.eps1 / (2.0 * qf.sup_norm) : 0.99);
  res.report.p_delta = p_delta;
  const FitResult pf = runge_pair(F, p_delta, fo);
  if (!pf.ok) note_stage(res.stage, res.reason, "runge_pair", pf.reason);
  res.P = pf.poly;
  res.report.p_degree = pf.degree;
  res.report.p_margin = pf.margin;

  double eta = params.eta > 0.0 ? params.eta : params.eps1 / (4.0 * std::max(mult, 1e-300));
  eta = std::min(eta, 0.999);
  res.report.eta = eta;
  const ShrinkResult sh = compose_shrink(base, eta, params.max_chain);
  if (!sh.ok) note_stage(res.stage, res.reason, "compose_shrink", sh.reason);
  res.report.achieved_quotient = sh.achieved;
  res.report.chain_length = sh.chain_length;

  const FunctionExpr j = FunctionExpr::radialize(FunctionExpr::inner(sh.spec));
  res.f = FunctionExpr::product(FunctionExpr::poly(res.Q), FunctionExpr::compose(FunctionExpr::poly(res.P), j));
  res.E = PullbackSet{F, sh.spec, true};

  const GoodSet e{1, {{res.E}}};
  try {
    const MeasureEstimate me = e.measure(opt.measure_samples, derive_seed(opt.seed, 0xe1));
    res.report.measure_E = me.value;
    res.report.measure_half_width = me.half_width;
    res.report.f0 = std::abs(eval(res.f, cplx(0.0)));
    res.report.bloch = bloch_norm(res.f).norm;
    // boundary values Q(zeta) P(zeta I(zeta)); E only holds points where I has one
    auto [s, n] = sup_error_on(
        e,
        [&](std::span<const cplx> z) {
          const auto v = inner_boundary_value(sh.spec, z[0]);
          return v ? res.Q(z[0]) * res.P(z[0] * *v) : cplx(std::numeric_limits<double>::quiet_NaN());
        },
        phi, opt.measure_samples,
        derive_seed(opt.seed, 0xe2));
    res.report.sup_error = s;
    res.report.e_samples = n;
  } catch (const QuadratureError& ex) {
    note_stage(res.stage, res.reason, "quadrature", ex.what());
    return res;
  }

  const auto& rp = res.report;
  if (rp.f0 >= params.eps1) note_stage(res.stage, res.reason, "value_at_origin", "|f(0)| above eps1");
  if (rp.bloch >= eta + rp.f0) note_stage(res.stage, res.reason, "bloch", "Bloch norm above eta + |f(0)|");
  if (rp.e_samples == 0 || rp.sup_error >= params.eps1)
    note_stage(res.stage, res.reason, "sup_error", "sup error on E above eps1");
  if (rp.measure_E < 1.0 - params.eps2 - rp.measure_half_width)
    note_stage(res.stage, res.reason, "transport", "measure of E below 1 - eps2");
  res.ok = res.stage.empty();
  return res;
}

// --- disc and polydisc assemblies ---------------------------------------------

namespace {

SimulApproxResult trivial_result(int dim, double eps) {
  SimulApproxResult r;
  r.ok = true;
  r.eps = eps;
  r.f = SeparablePolynomial::zero(dim);
  r.E = GoodSet::full(dim);
  r.report.measure_E = 1.0;
  return r;
}

void check_eps(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("simultaneous approximation: eps must lie in (0, 1)");
}

}  // namespace

SimulApproxResult simul_approx_disc(const BoundaryFunction& phi, double eps, const InnerSpec& base,
                                    const PipelineOptions& opt) {
  check_eps(eps);
  if (phi.dim() != 1) throw std::invalid_argument("simul_approx_disc: one-variable target required");
  if (phi.is_zero()) return trivial_result(1, eps);

  BlockParams bp;
  bp.eps1 = eps;
  bp.eps2 = eps;
  const BlockResult block = build_block(phi, bp, base, opt);

  SimulApproxResult res;
  res.eps = eps;
  res.E = GoodSet{1, {{block.E}}};
  auto& rp = res.report;
  rp.eta = block.report.eta;
  rp.q_degrees = {block.report.q_degree};
  rp.p_degrees = {block.report.p_degree};
  rp.chain_lengths = {block.report.chain_length};
  rp.achieved_quotients = {block.report.achieved_quotient};
  rp.pre_truncation_bloch = block.report.bloch;
  rp.pre_truncation_sup_error = block.report.sup_error;
  rp.measure_E = block.report.measure_E;
  rp.measure_half_width = block.report.measure_half_width;
  rp.terms = 1;
  std::string stage = block.stage, reason = block.reason;
  if (stage == "bloch" || stage == "sup_error") stage.clear(), reason.clear();  // judged after truncation

  // Raise r until the truncated polynomial meets the budget.
  const double tol = eps / 20.0;
  double best_score = std::numeric_limits<double>::infinity();
  bool found = false;
  std::vector<double> rs;
  if (block.report.chain_length == 0 && block.f.is_polynomial()) rs.push_back(1.0);
  for (int j = opt.j_min; j <= opt.j_max; ++j) rs.push_back(1.0 - std::exp2(-j));
  for (double r : rs) {
    Polynomial1D p;
    double tail = 0.0;
    int deg = 0;
    bool tr_ok = true;
    if (r == 1.0) {
      p = block.f.as_polynomial().to_1d();
      deg = p.degree();
    } else {
      const double rho = r + (1.0 - r) / 2.0;
      deg = static_cast<int>(std::ceil(std::log(tol) / std::log(r / rho)));
      deg = std::min(deg, opt.truncation_degree_cap);
      try {
        const TruncationResult tr = taylor_truncate(block.f, r, deg, tol);
        p = tr.poly.to_1d();
        tail = tr.tail_bound;
        tr_ok = tr.ok;
      } catch (const QuadratureError& ex) {
        if (!found && stage.empty()) stage = "truncation", reason = ex.what();
        continue;
      }
    }
    const double bl = bloch_norm(FunctionExpr::poly(p)).norm;
    auto [se, ne] = sup_error_on(
        res.E, [&](std::span<const cplx> z) { return p(z[0]); }, phi, opt.measure_samples,
        derive_seed(opt.seed, 0xe3));
    const double score = std::max(bl, ne > 0 ? se : std::numeric_limits<double>::infinity()) / eps;
    if (score < best_score) {
      best_score = score;
      res.f = SeparablePolynomial::disc(p);
      rp.bloch = bl;
      rp.bloch_bound = bl;
      rp.sup_error = se;
      rp.e_samples = ne;
      rp.f0 = std::abs(p(0.0));
      rp.truncation_r = r;
      rp.truncation_tail = tail;
      rp.truncation_degree = p.degree();
    }
    if (bl < eps && ne > 0 && se < eps && tr_ok) {
      found = true;
      break;
    }
  }

  const bool measure_ok = rp.measure_E >= 1.0 - eps - rp.measure_half_width;
  res.ok = found && measure_ok;
  if (!res.ok) {
    if (stage.empty()) {
      if (!measure_ok) stage = "transport", reason = "measure of E below 1 - eps";
      else if (rp.bloch >= eps) stage = "bloch", reason = "Bloch norm of the truncated block above eps";
      else stage = "sup_error", reason = "sup error on E above eps";
    }
    res.stage = stage;
    res.reason = reason;
  }
  return res;
}

namespace {

double sampled_sup(const BoundaryFunction& f) {
  double m = 0.0;
  for (int i = 0; i < 4096; ++i) m = std::max(m, std::abs(f.at_angle(kTwoPi * i / 4096.0)));
  return m;
}

}  // namespace

SimulApproxResult simul_approx_polydisc(const BoundaryFunction& phi, double eps, int n, const InnerSpec& base,
                                        const PipelineOptions& opt) {
  check_eps(eps);
  if (n < 1 || n > kMaxDim) throw std::invalid_argument("simul_approx_polydisc: dimension out of range");
  if (phi.dim() != n) throw std::invalid_argument("simul_approx_polydisc: target dimension mismatch");
  if (n == 1) return simul_approx_disc(phi, eps, base, opt);
  if (phi.is_zero()) return trivial_result(n, eps);

  SimulApproxResult res;
  res.eps = eps;
  auto& rp = res.report;
  std::string stage, reason;
  const DecomposeResult dec = product_decompose(phi, eps / 2, opt.decompose_terms);
  if (!dec.ok) stage = "decompose", reason = dec.reason;
  rp.decomposition_error = dec.error;
  const int m = static_cast<int>(dec.terms.size());
  rp.terms = m;
  res.f = SeparablePolynomial::zero(n);
  res.E = GoodSet{n, {}};

  // Factor targets with the coefficient spread evenly over the N factors.
  std::vector<std::vector<BoundaryFunction>> targets(static_cast<std::size_t>(m));
  double c_const = 0.0;
  for (int l = 0; l < m; ++l) {
    const auto& t = dec.terms[static_cast<std::size_t>(l)];
    const cplx root = std::pow(t.coefficient, 1.0 / n);
    double prod = 1.0;
    for (int j = 0; j < n; ++j) {
      auto b = BoundaryFunction::scaled(t.factors[static_cast<std::size_t>(j)].to_boundary(), root);
      prod *= sampled_sup(b) + 1.0;
      targets[static_cast<std::size_t>(l)].push_back(b);
    }
    c_const = std::max(c_const, prod);
  }
  const double eps_f = m > 0 ? std::min(0.99, eps / (2.0 * c_const * n * m)) : eps;

  std::vector<std::vector<double>> factor_err(static_cast<std::size_t>(m));
  double eta_max = 0.0;
  for (int l = 0; l < m; ++l) {
    std::vector<Polynomial1D> polys;
    std::vector<PullbackSet> sets;
    for (int j = 0; j < n; ++j) {
      PipelineOptions o = opt;
      o.seed = derive_seed(opt.seed, static_cast<std::uint64_t>(l * kMaxDim + j + 1));
      const SimulApproxResult b = simul_approx_disc(targets[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)],
                                                    eps_f, base, o);
      if (!b.ok && stage.empty()) stage = "factor_block", reason = b.stage + ": " + b.reason;
      polys.push_back(b.f.terms.empty() ? Polynomial1D() : b.f.terms[0][0]);
      sets.push_back(b.E.factors.empty() ? PullbackSet{} : b.E.factors[0][0]);
      factor_err[static_cast<std::size_t>(l)].push_back(b.report.sup_error);
      rp.q_degrees.insert(rp.q_degrees.end(), b.report.q_degrees.begin(), b.report.q_degrees.end());
      rp.p_degrees.insert(rp.p_degrees.end(), b.report.p_degrees.begin(), b.report.p_degrees.end());
      rp.chain_lengths.insert(rp.chain_lengths.end(), b.report.chain_lengths.begin(), b.report.chain_lengths.end());
      rp.achieved_quotients.insert(rp.achieved_quotients.end(), b.report.achieved_quotients.begin(),
                                   b.report.achieved_quotients.end());
      eta_max = std::max(eta_max, b.report.eta);
      rp.truncation_degree = std::max(rp.truncation_degree, b.report.truncation_degree);
      rp.truncation_tail += b.report.truncation_tail;
      rp.truncation_r = std::max(rp.truncation_r, b.report.truncation_r);
    }
    res.f.terms.push_back(polys);
    res.E.factors.push_back(sets);
  }
  rp.eta = eta_max;

  // Cross norms for the eta condition and the telescoping bound.
  double cross_max = 0.0;
  for (int l = 0; l < m; ++l) {
    const auto& polys = res.f.terms[static_cast<std::size_t>(l)];
    std::vector<double> fs(static_cast<std::size_t>(n)), ps(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      fs[static_cast<std::size_t>(j)] = disc_sup_norm(polys[static_cast<std::size_t>(j)]);
      ps[static_cast<std::size_t>(j)] = sampled_sup(targets[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)]);
    }
    double rhs = 0.0;
    for (int k = 0; k < n; ++k) {
      double cross = 1.0, tele = factor_err[static_cast<std::size_t>(l)][static_cast<std::size_t>(k)];
      for (int j = 0; j < n; ++j) {
        if (j != k) cross *= fs[static_cast<std::size_t>(j)];
        if (j < k) tele *= fs[static_cast<std::size_t>(j)];
        if (j > k) tele *= ps[static_cast<std::size_t>(j)];
      }
      cross_max = std::max(cross_max, cross);
      rhs += tele;
    }
    rp.telescoping_rhs = std::max(rp.telescoping_rhs, rhs);
  }
  rp.eta_condition = m == 0 || eta_max < eps / (2.0 * n * m * std::max(cross_max, 1e-300));

  const MeasureEstimate me = res.E.measure(opt.measure_samples, derive_seed(opt.seed, 0xe1));
  rp.measure_E = me.value;
  rp.measure_half_width = me.half_width;
  const SeparablePolynomial f = res.f;
  auto [se, ne] = sup_error_on(res.E, [&](std::span<const cplx> z) { return f(z); }, phi, opt.measure_samples,
                               derive_seed(opt.seed, 0xe3));
  rp.sup_error = se;
  rp.e_samples = ne;
  for (int l = 0; l < m; ++l) {
    const auto& polys = res.f.terms[static_cast<std::size_t>(l)];
    const auto& tg = targets[static_cast<std::size_t>(l)];
    GoodSet el{n, {res.E.factors[static_cast<std::size_t>(l)]}};
    auto [tl, tn] = sup_error_on(
        el,
        [&](std::span<const cplx> z) {
          cplx p = 1.0;
          for (int j = 0; j < n; ++j) p *= polys[static_cast<std::size_t>(j)](z[static_cast<std::size_t>(j)]);
          return p;
        },
        BoundaryFunction::callable(
            n,
            [&](std::span<const cplx> z) {
              cplx p = 1.0;
              for (int j = 0; j < n; ++j) p *= tg[static_cast<std::size_t>(j)](z.subspan(static_cast<std::size_t>(j), 1));
              return p;
            },
            "term"),
        opt.measure_samples, derive_seed(opt.seed, 0xe4));
    (void)tn;
    rp.telescoping_lhs = std::max(rp.telescoping_lhs, tl);
  }
  const SeparableBloch sb = separable_bloch(res.f);
  rp.bloch = sb.norm;
  rp.bloch_bound = sb.value_at_origin + sb.product_bound;
  rp.f0 = sb.value_at_origin;

  const bool measure_ok = rp.measure_E >= 1.0 - eps - rp.measure_half_width;
  res.ok = rp.bloch < eps && ne > 0 && rp.sup_error < eps && measure_ok;
  if (!res.ok) {
    if (stage.empty()) {
      if (!measure_ok) stage = "transport", reason = "measure of E below 1 - eps";
      else if (rp.bloch >= eps) stage = "bloch", reason = "Bloch norm above eps";
      else stage = "sup_error", reason = "sup error on E above eps";
    }
    res.stage = stage;
    res.reason = reason;
  }
  return res;
}

SimulCheck remeasure(const SimulApproxResult& r, const BoundaryFunction& phi, std::size_t samples,
                     std::uint64_t seed) {
  SimulCheck c;
  const MeasureEstimate me = r.E.measure(samples, derive_seed(seed, 0xe1));
  c.measure_E = me.value;
  c.measure_half_width = me.half_width;
  const SeparablePolynomial f = r.f;
  c.sup_error = sup_error_on(r.E, [&](std::span<const cplx> z) { return f(z); }, phi, samples,
                             derive_seed(seed, 0xe3))
                    .first;
  if (r.f.dim == 1) {
    const FunctionExpr fe = f.to_expr();
    const int deg = std::max(0, f.max_degree());
    const BlochReport b = bloch_norm(fe, Domain::disc(), SampleGrid::norm_grid(16 * (1 + deg), 16, 24));
    c.bloch = b.norm;
    c.f0 = b.value_at_origin;
  } else {
    const int n = r.f.dim;
    std::vector<double> radii = n == 2 ? dyadic_radii(4, 16) : dyadic_radii(2, 12);
    const SeparableBloch sb = separable_bloch(f, radii, n == 2 ? 128 : 16);
    c.bloch = sb.norm;
    c.f0 = sb.value_at_origin;
  }
  return c;
}

}  // namespace wildbloch
