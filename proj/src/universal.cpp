#include "wildbloch/universal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace wildbloch {

TargetEnumeration TargetEnumeration::from_list(std::vector<BoundaryFunction> t) {
  TargetEnumeration e;
  e.explicit_targets = std::move(t);
  e.count = static_cast<int>(e.explicit_targets.size());
  return e;
}

TargetEnumeration TargetEnumeration::enumerate(int count) {
  if (count < 0) throw std::invalid_argument("target count must be >= 0");
  TargetEnumeration e;
  e.count = count;
  return e;
}

std::vector<BoundaryFunction> TargetEnumeration::targets() const {
  if (!explicit_targets.empty() || count == 0) return explicit_targets;
  using Key = std::tuple<int, int, int, int, int, int, int>;  // level, |n|, q, |a|+|b|, a, b, n
  std::vector<Key> keys;
  const int max_level = 3;
  for (int n = -max_level; n <= max_level; ++n)
    for (int q = 0; q <= max_level; ++q) {
      const int lim = 2 << q;
      for (int a = -lim; a <= lim; ++a)
        for (int b = -lim; b <= lim; ++b) {
          if (a == 0 && b == 0) continue;
          if (q > 0 && a % 2 == 0 && b % 2 == 0) continue;
          keys.emplace_back(std::max(std::abs(n), q), std::abs(n), q, std::abs(a) + std::abs(b), a, b, n);
        }
    }
  std::sort(keys.begin(), keys.end());
  std::vector<BoundaryFunction> out{BoundaryFunction::constant(1, 0.0)};
  for (const auto& k : keys) {
    if (static_cast<int>(out.size()) >= count) break;
    const auto [level, an, q, l1, a, b, n] = k;
    const cplx c = cplx(a, b) / std::ldexp(1.0, q);
    out.push_back(BoundaryFunction::trig(1, {{{n}, c}}));
  }
  out.resize(std::min<std::size_t>(out.size(), static_cast<std::size_t>(count)));
  return out;
}

std::vector<double> dyadic_radius_schedule(int count) {
  if (count < 1) throw std::invalid_argument("radius schedule needs at least one radius");
  std::vector<double> r;
  for (int n = 1; n <= count; ++n) r.push_back(1.0 - std::exp2(-n));
  return r;
}

std::vector<cplx> apply_Tnw(const FunctionExpr& f, double r, cplx w, const SampleGrid& grid) {
  if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("apply_Tnw: radius must lie in (0, 1)");
  if (std::abs(w) >= 1.0) throw std::invalid_argument("apply_Tnw: anchor must be interior");
  if (f.dim() != 1) throw std::invalid_argument("apply_Tnw: disc functions only");
  if (grid.domain.kind != DomainKind::Circle) throw std::invalid_argument("apply_Tnw: circle grid required");
  const PointSet ps = grid_points(grid);
  std::vector<cplx> z(ps.count());
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = r * (ps.coords[i] - w) + w;
  if (f.kind() == FunctionExpr::Kind::Poly1d) {
    std::vector<cplx> v, d;
    f.poly1d().eval_batch(z, v, d);
    return v;
  }
  std::vector<cplx> v(z.size());
  parallel_chunks(z.size(), 256, [&](std::size_t, std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) v[i] = eval(f, z[i]);
  });
  return v;
}

namespace {

void check_radii(const std::vector<double>& radii) {
  if (radii.empty()) throw std::invalid_argument("radius list is empty");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0 && radii[i] < 1.0)) throw std::invalid_argument("radii must lie in (0, 1)");
    if (i > 0 && radii[i] <= radii[i - 1]) throw std::invalid_argument("radii must increase");
  }
}

std::vector<cplx> target_samples(const BoundaryFunction& t, const SampleGrid& grid) {
  const PointSet ps = grid_points(grid);
  std::vector<cplx> v(ps.count());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = t(ps.point(i));
  return v;
}

double lipschitz(const FunctionExpr& f) {
  if (f.kind() == FunctionExpr::Kind::Poly1d) return disc_sup_norm(f.poly1d().derivative());
  return std::numeric_limits<double>::infinity();
}

}  // namespace

Certificate certify(const FunctionExpr& f, const BoundaryFunction& target, const std::vector<double>& radii, int n,
                    const std::vector<cplx>& anchors, const SampleGrid& grid, double good_tol, double mesh) {
  check_radii(radii);
  if (n < 1 || n > static_cast<int>(radii.size())) throw std::invalid_argument("certify: radius index out of range");
  if (anchors.empty()) throw std::invalid_argument("certify: anchor list is empty");
  if (target.dim() != 1) throw std::invalid_argument("certify: one-variable target required");
  Certificate c;
  c.n = n;
  c.r_n = radii[static_cast<std::size_t>(n - 1)];
  c.anchors = anchors;
  c.mesh = mesh;
  c.good_tol = good_tol;
  c.grid_angular = grid.angular;
  c.grid_seed = grid.seed;
  const std::vector<cplx> y = target_samples(target, grid);
  std::vector<unsigned char> good(y.size(), 1);
  c.d_sup = 0.0;
  for (const cplx& w : anchors) {
    const std::vector<cplx> t = apply_Tnw(f, c.r_n, w, grid);
    const double d = measure_metric_samples(t, y);
    c.d_per_anchor.push_back(d);
    c.d_sup = std::max(c.d_sup, d);
    for (std::size_t i = 0; i < y.size(); ++i)
      if (!(std::abs(t[i] - y[i]) < good_tol)) good[i] = 0;
  }
  std::size_t g = 0;
  for (auto x : good) g += x;
  c.good_measure = static_cast<double>(g) / static_cast<double>(y.size());
  c.off_mesh_bound = mesh > 0.0 ? std::min(1.0, lipschitz(f) * (1.0 - c.r_n) * mesh) : 0.0;
  return c;
}

Polynomial1D UniversalCandidate::sum(std::size_t upto) const {
  Polynomial1D s;
  for (std::size_t i = 0; i < std::min(upto, blocks.size()); ++i)
    if (blocks[i].accepted) s = s + blocks[i].f;
  return s;
}

std::size_t UniversalCandidate::failed() const {
  std::size_t n = 0;
  for (const auto& c : certificates) n += c.verified ? 0 : 1;
  return n;
}

UniversalCandidate universal_build(const TargetEnumeration& te, const InnerSpec& base, const UniversalOptions& opt) {
  check_radii(opt.radii);
  for (const cplx& w : opt.anchors)
    if (std::abs(w) >= 1.0) throw std::invalid_argument("anchors must be interior");
  if (opt.anchors.empty()) throw std::invalid_argument("anchor list is empty");
  const auto targets = te.targets();
  if (opt.eps_schedule.size() < targets.size()) throw std::invalid_argument("eps schedule shorter than target list");
  double total = 0.0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const double e = opt.eps_schedule[i];
    if (!(e > 0.0 && e < 1.0)) throw std::invalid_argument("eps schedule entries must lie in (0, 1)");
    if (i > 0 && e > opt.eps_schedule[i - 1]) throw std::invalid_argument("eps schedule must be non-increasing");
    total += e;
  }
  if (!targets.empty() && !(total < opt.total_budget)) throw std::invalid_argument("eps schedule exceeds the total budget");

  UniversalCandidate cand;
  cand.radii = opt.radii;
  cand.anchors = opt.anchors;
  cand.mesh = opt.mesh;
  cand.targets = targets;
  const int nr = static_cast<int>(opt.radii.size());
  Polynomial1D partial;

  for (std::size_t l = 0; l < targets.size(); ++l) {
    const double eps = opt.eps_schedule[l];
    const BoundaryFunction& y = targets[l];
    const SampleGrid grid = SampleGrid::circle(opt.certify_angular, derive_seed(opt.pipeline.seed, 0x100 + l));

    // Stabilization: T_n^w(partial) is within eps/4 of partial's boundary values.
    UniversalBlock block;
    block.target_id = static_cast<int>(l);
    block.budget = eps / 2;
    const BoundaryFunction limit = BoundaryFunction::from_polynomial(PolynomialND::from_1d(partial, 1, 0));
    int nstab = nr;
    for (int n = 1; n <= nr; ++n) {
      const Certificate s = certify(FunctionExpr::poly(partial), limit, opt.radii, n, opt.anchors, grid);
      if (s.d_sup < eps / 4) {
        nstab = n;
        break;
      }
    }
    block.stabilization_index = nstab;

    const BoundaryFunction residual = BoundaryFunction::sum(y, BoundaryFunction::scaled(limit, -1.0));
    PipelineOptions po = opt.pipeline;
    po.seed = derive_seed(opt.pipeline.seed, 0x200 + l);
    const SimulApproxResult s = simul_approx_disc(residual, eps / 2, base, po);
    block.f = s.f.terms.empty() ? Polynomial1D() : s.f.terms[0][0];
    block.bloch = s.report.bloch;
    block.stage = s.stage;
    block.accepted = block.f.is_zero() || block.bloch < block.budget;
    if (!block.accepted) block.f = Polynomial1D();
    if (block.accepted) partial = partial + block.f;
    cand.blocks.push_back(block);
    cand.partial_bloch.push_back(bloch_norm(FunctionExpr::poly(partial)).norm);

    Certificate best;
    bool have = false;
    for (int n = nstab; n <= nr; ++n) {
      Certificate c = certify(FunctionExpr::poly(partial), y, opt.radii, n, opt.anchors, grid, eps, opt.mesh);
      if (!have || c.d_sup < best.d_sup) {
        best = c;
        have = true;
      }
      if (c.d_sup < eps) break;
    }
    best.target_id = static_cast<int>(l);
    best.eps = eps;
    best.block_norm = block.bloch;
    best.verified = best.d_sup < eps;
    if (!best.verified) {
      if (!block.accepted)
        best.note = "block over Bloch budget (" + std::to_string(block.bloch) + " >= " + std::to_string(block.budget) +
                    "), stage " + (block.stage.empty() ? std::string("none") : block.stage);
      else
        best.note = "no radius index reached eps";
    }
    cand.certificates.push_back(best);
  }
  return cand;
}

std::vector<Certificate> recertify(const UniversalCandidate& c, std::uint64_t seed, int angular) {
  std::vector<Certificate> out;
  for (std::size_t i = 0; i < c.certificates.size(); ++i) {
    const Certificate& old = c.certificates[i];
    const auto l = static_cast<std::size_t>(old.target_id);
    const SampleGrid grid = SampleGrid::circle(angular, derive_seed(seed, 0x100 + l));
    Certificate n = certify(FunctionExpr::poly(c.sum(l + 1)), c.targets[l], c.radii, old.n, c.anchors, grid,
                            old.good_tol, c.mesh);
    n.target_id = old.target_id;
    n.eps = old.eps;
    n.block_norm = old.block_norm;
    n.verified = n.d_sup < n.eps;
    n.note = old.note;
    out.push_back(n);
  }
  return out;
}

std::vector<ClusterHit> cluster_probe(const FunctionExpr& f, const PathSpec& path, const std::vector<cplx>& values,
                                      double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("cluster_probe: tolerance must be positive");
  if (path.schedule.empty()) throw std::invalid_argument("cluster_probe: path schedule is empty");
  const std::vector<cplx> pts = path_points(path, path.schedule);
  std::vector<cplx> fv(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) fv[i] = eval(f, pts[i]);
  std::vector<ClusterHit> out;
  for (const cplx& v : values) {
    ClusterHit h;
    h.value = v;
    h.distance = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double d = std::abs(fv[i] - v);
      if (d < h.distance) {
        h.distance = d;
        h.radius = path.schedule[i];
        h.point = pts[i];
      }
    }
    h.hit = h.distance < tol;
    out.push_back(h);
  }
  return out;
}

FunctionExpr lacunary_baseline(int k) {
  if (k < 1) throw std::invalid_argument("lacunary_baseline: K must be >= 1");
  if (k > 24) throw std::invalid_argument("lacunary_baseline: K above 24 is too large to store");
  std::vector<cplx> c((std::size_t{1} << k) + 1, 0.0);
  for (int j = 1; j <= k; ++j) c[std::size_t{1} << j] = 1.0;
  return FunctionExpr::poly(Polynomial1D(c));
}

}  // namespace wildbloch
