#include "wildbloch/inner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wildbloch {

SingularMeasureSpec SingularMeasureSpec::atomic(std::vector<Atom> atoms) {
  SingularMeasureSpec m;
  m.kind = Kind::Atomic;
  m.atoms = std::move(atoms);
  m.validate();
  return m;
}

SingularMeasureSpec SingularMeasureSpec::cantor_measure(CantorSpec c, double mass) {
  SingularMeasureSpec m;
  m.kind = Kind::Cantor;
  m.cantor = c;
  m.cantor_mass = mass;
  m.validate();
  return m;
}

double SingularMeasureSpec::total_mass() const {
  if (kind == Kind::Cantor) return cantor_mass;
  double s = 0.0;
  for (const Atom& a : atoms) s += a.mass;
  return s;
}

void SingularMeasureSpec::validate() const {
  if (kind == Kind::Atomic) {
    if (atoms.empty()) throw std::invalid_argument("atomic measure needs at least one atom");
    for (const Atom& a : atoms) {
      if (!(a.mass > 0.0) || !std::isfinite(a.mass))
        throw std::invalid_argument("atom masses must be positive");
      if (std::abs(std::abs(a.zeta) - 1.0) > 1e-12)
        throw std::invalid_argument("atoms must lie on the unit circle");
    }
  } else {
    if (!(cantor_mass > 0.0) || !std::isfinite(cantor_mass))
      throw std::invalid_argument("Cantor mass must be positive");
    if (!(cantor.ratio > 0.0 && cantor.ratio < 0.5))
      throw std::invalid_argument("Cantor ratio must lie in (0, 1/2)");
    if (!(cantor.length > 0.0 && cantor.length <= kTwoPi))
      throw std::invalid_argument("Cantor arc length must lie in (0, 2pi]");
    if (cantor.depth < 1 || cantor.depth > 60)
      throw std::invalid_argument("Cantor depth cap must lie in [1, 60]");
  }
}

InnerSpec InnerSpec::singular(SingularMeasureSpec m) {
  m.validate();
  InnerSpec s;
  s.kind = Kind::Singular;
  s.measure = std::move(m);
  return s;
}

InnerSpec InnerSpec::blaschke(std::vector<cplx> zeros) {
  InnerSpec s;
  s.kind = Kind::Blaschke;
  s.zeros = std::move(zeros);
  s.validate();
  return s;
}

InnerSpec InnerSpec::compose(std::vector<InnerSpec> chain) {
  InnerSpec s;
  s.kind = Kind::Composition;
  for (auto& c : chain) {
    if (c.kind == Kind::Composition)
      s.chain.insert(s.chain.end(), c.chain.begin(), c.chain.end());
    else
      s.chain.push_back(std::move(c));
  }
  s.validate();
  return s;
}

InnerSpec InnerSpec::power(const InnerSpec& base, int n) {
  if (n < 1) throw std::invalid_argument("composition power must be >= 1");
  if (n == 1) return base;
  return compose(std::vector<InnerSpec>(static_cast<std::size_t>(n), base));
}

void InnerSpec::validate() const {
  switch (kind) {
    case Kind::Singular: measure.validate(); break;
    case Kind::Blaschke:
      if (zeros.empty()) throw std::invalid_argument("Blaschke product needs at least one zero");
      for (const cplx& a : zeros)
        if (!(std::abs(a) < 1.0)) throw std::invalid_argument("Blaschke zeros must lie in the open disc");
      break;
    case Kind::Composition:
      if (chain.empty()) throw std::invalid_argument("composition chain must be nonempty");
      for (const auto& c : chain) c.validate();
      break;
  }
}

int InnerSpec::chain_length() const {
  return kind == Kind::Composition ? static_cast<int>(chain.size()) : 1;
}

double disc_defect(cplx z) {
  const double r = std::abs(z);
  return (1.0 - r) * (1.0 + r);
}

namespace {

InnerValue finish_singular(cplx g, cplx dg, double mass) {
  // Theta = exp(-m g), Theta' = Theta * (-m dg), 1 - |Theta|^2 = -expm1(-2 m Re g)
  InnerValue v;
  const double re = mass * g.real();
  v.defect = -std::expm1(-2.0 * re);
  if (re > 700.0) {
    v.value = 0.0;
    v.derivative = 0.0;
    v.underflow = true;
    return v;
  }
  v.value = std::exp(-mass * g);
  v.derivative = v.value * (-mass * dg);
  return v;
}

InnerValue eval_singular(const SingularMeasureSpec& m, cplx z, double zdefect) {
  if (m.kind == SingularMeasureSpec::Kind::Atomic) {
    cplx g = 0.0, dg = 0.0;
    double poisson = 0.0;
    for (const Atom& a : m.atoms) {
      const cplx diff = a.zeta - z;
      g += a.mass * (a.zeta + z) / diff;
      poisson += a.mass * zdefect / std::norm(diff);
      dg += a.mass * 2.0 * a.zeta / (diff * diff);
    }
    return finish_singular(cplx(poisson, g.imag()), dg, 1.0);
  }
  const auto in = cantor::integrate(m.cantor, z, zdefect);
  return finish_singular(in.herglotz, in.kernel_deriv, m.cantor_mass);
}

InnerValue eval_blaschke(const std::vector<cplx>& zeros, cplx z, double zdefect) {
  cplx v = 1.0, d = 0.0;
  double log_keep = 0.0;  // sum log(1 - defect_k) = log |B|^2
  bool hit_zero = false;
  for (const cplx& a : zeros) {
    cplx f, df;
    double dk;
    if (a == cplx(0.0)) {
      f = z;
      df = 1.0;
      dk = zdefect;
    } else {
      const double ra = std::abs(a);
      const cplx unit = ra / a;
      const cplx den = 1.0 - std::conj(a) * z;
      const double adef = (1.0 - ra) * (1.0 + ra);
      f = unit * (a - z) / den;
      df = unit * (-adef) / (den * den);
      dk = adef * zdefect / std::norm(den);
    }
    d = d * f + v * df;
    v = v * f;
    if (dk >= 1.0)
      hit_zero = true;
    else
      log_keep += std::log1p(-dk);
  }
  InnerValue out;
  out.value = v;
  out.derivative = d;
  out.defect = hit_zero ? 1.0 : -std::expm1(log_keep);
  return out;
}

}  // namespace

InnerValue inner_eval(const InnerSpec& spec, cplx z) { return inner_eval(spec, z, disc_defect(z)); }

InnerValue inner_eval(const InnerSpec& spec, cplx z, double zdefect) {
  if (!(std::abs(z) < 1.0) || !(zdefect > 0.0))
    throw std::invalid_argument("inner_eval: point must lie in the open unit disc");
  switch (spec.kind) {
    case InnerSpec::Kind::Singular: return eval_singular(spec.measure, z, zdefect);
    case InnerSpec::Kind::Blaschke: return eval_blaschke(spec.zeros, z, zdefect);
    case InnerSpec::Kind::Composition: {
      cplx w = z;
      double wdef = zdefect;
      cplx deriv = 1.0;
      bool under = false;
      InnerValue last;
      for (std::size_t k = spec.chain.size(); k-- > 0;) {
        if (!(wdef > 0.0)) {
          // the inner stage reached the circle in floating point
          last.defect = 0.0;
          break;
        }
        last = inner_eval(spec.chain[k], w, wdef);
        deriv *= last.derivative;
        under = under || last.underflow;
        w = last.value;
        wdef = last.defect;
      }
      InnerValue out;
      out.value = w;
      out.derivative = deriv;
      out.defect = wdef;
      out.underflow = under;
      return out;
    }
  }
  return {};
}

Quotient hyperbolic_quotient(const InnerSpec& spec, cplx z) {
  return hyperbolic_quotient(spec, z, disc_defect(z));
}

Quotient hyperbolic_quotient(const InnerSpec& spec, cplx z, double zdefect) {
  const InnerValue v = inner_eval(spec, z, zdefect);
  Quotient q;
  if (v.defect < 2e-14) {
    q.saturated = true;
    q.q = std::numeric_limits<double>::quiet_NaN();
    q.radial_ratio = q.q;
    return q;
  }
  q.q = zdefect * std::abs(v.derivative) / v.defect;
  q.radial_ratio = std::abs(z) * q.q;
  return q;
}

QuotientMap quotient_field(const InnerSpec& spec, const SampleGrid& grid) {
  if (grid.domain.kind != DomainKind::Disc) throw std::invalid_argument("quotient_field needs a disc grid");
  const PointSet ps = grid_points(grid);
  QuotientMap map;
  map.grid = grid;
  map.points = ps.coords;
  const std::size_t n = ps.count();
  map.values.assign(n, 0.0);
  // radii are known exactly; recompute 1 - r^2 from them rather than from z
  const std::size_t per = static_cast<std::size_t>(grid.angular);
  parallel_chunks(n, 512, [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const double r = grid.radii[i / per];
      map.values[i] = hyperbolic_quotient(spec, ps.coords[i], (1.0 - r) * (1.0 + r)).q;
    }
  });
  bool first = true;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = map.values[i];
    if (std::isnan(v)) {
      ++map.saturated;
      continue;
    }
    if (!std::isfinite(v))
      throw NumericalError("quotient_field: non-finite quotient", {ps.coords[i]});
    if (first || v > map.sup) {
      map.sup = v;
      map.argmax = ps.coords[i];
      first = false;
    }
  }
  map.low_confidence = n > 0 && static_cast<double>(map.saturated) > 0.05 * static_cast<double>(n);
  return map;
}

SampleGrid default_quotient_grid() { return SampleGrid::norm_grid(256, 4, 8); }

ShrinkResult compose_shrink(const InnerSpec& base, double eta, int max_chain) {
  return compose_shrink(base, eta, max_chain, default_quotient_grid());
}

ShrinkResult compose_shrink(const InnerSpec& base, double eta, int max_chain, const SampleGrid& grid) {
  if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("compose_shrink: eta must lie in (0,1)");
  if (max_chain < 1) throw std::invalid_argument("compose_shrink: max chain length must be >= 1");
  base.validate();
  ShrinkResult res;
  res.spec = base;
  res.chain_length = 1;
  const double s1 = quotient_field(base, grid).sup;
  res.base_sup = s1;
  res.achieved = s1;
  res.history.push_back(s1);
  if (s1 < eta) {
    res.ok = true;
    return res;
  }
  if (s1 >= 1.0 - 1e-6) {
    res.reason = "non-contracting base: measured quotient sup is 1";
    return res;
  }
  for (int len = 2; len <= max_chain; ++len) {
    const InnerSpec cand = InnerSpec::power(base, len);
    const double s = quotient_field(cand, grid).sup;
    res.history.push_back(s);
    if (s < res.achieved) {
      res.achieved = s;
      res.spec = cand;
      res.chain_length = len;
    }
    if (s < eta) {
      res.ok = true;
      return res;
    }
  }
  res.reason = "target quotient not reached within the chain length cap";
  return res;
}

std::optional<cplx> inner_boundary_value(const InnerSpec& spec, cplx zeta) {
  const double r = 1.0 - kProbeRadiusDefect;
  const double rdef = kProbeRadiusDefect * (2.0 - kProbeRadiusDefect);
  auto link = [&](const InnerSpec& s, cplx w) -> std::optional<cplx> {
    try {
      const InnerValue v = inner_eval(s, r * w, rdef);
      const double a = std::abs(v.value);
      if (a < 0.999) return std::nullopt;
      return v.value / a;
    } catch (const QuadratureError&) {
      return std::nullopt;
    }
  };
  cplx w = zeta / std::abs(zeta);
  if (spec.kind != InnerSpec::Kind::Composition) return link(spec, w);
  for (std::size_t k = spec.chain.size(); k-- > 0;) {
    const auto v = inner_boundary_value(spec.chain[k], w);
    if (!v) return std::nullopt;
    w = *v;
  }
  return w;
}

TransportReport loewner_transport_check(const InnerSpec& spec, const ArcSet& f, std::size_t samples,
                                        std::uint64_t seed) {
  if (samples == 0) throw std::invalid_argument("transport check needs samples");
  spec.validate();
  const std::vector<cplx> pts = sample_torus(1, samples, seed);
  std::vector<unsigned char> hit(samples, 0), unstable(samples, 0);
  parallel_chunks(samples, 4096, [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const auto v = inner_boundary_value(spec, pts[i]);
      if (!v) {
        unstable[i] = 1;
        continue;
      }
      hit[i] = f.contains(std::arg(pts[i] * *v)) ? 1 : 0;
    }
  });
  std::size_t hits = 0, bad = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    hits += hit[i];
    bad += unstable[i];
  }
  TransportReport rep;
  rep.samples = samples;
  // unstable samples are left out of the estimate and reported separately
  const std::size_t good = samples - bad;
  rep.preimage_measure = good > 0 ? static_cast<double>(hits) / static_cast<double>(good) : 0.0;
  rep.target_measure = f.measure();
  rep.deviation = std::abs(rep.preimage_measure - rep.target_measure);
  rep.half_width = good > 0 ? binomial_half_width(rep.preimage_measure, good) : 1.0;
  rep.unstable_fraction = static_cast<double>(bad) / static_cast<double>(samples);
  rep.inconclusive = rep.unstable_fraction > 0.01;
  return rep;
}

}  // namespace wildbloch
