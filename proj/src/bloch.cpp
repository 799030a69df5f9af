#include "wildbloch/bloch.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <functional>
#include <sstream>

#include "wildbloch/fft.hpp"
#include "wildbloch/kernels.hpp"

namespace wildbloch {

namespace {

using ShellWeight = std::function<double(double)>;

struct ShellMax {
  double value = 0.0;
  cplx point = 0.0;
};

// sup over |z| = r of g(r)|p'(z)| at m equispaced angles, by one FFT per shell.
std::vector<ShellMax> polynomial_shells(const Polynomial1D& p, const std::vector<double>& radii, int m,
                                        const ShellWeight& g) {
  const Polynomial1D dp = p.derivative();
  std::vector<ShellMax> out(radii.size());
  parallel_chunks(radii.size(), 1, [&](std::size_t, std::size_t b, std::size_t e) {
    std::vector<cplx> buf(m);
    std::vector<double> w(m), vr(m), vi(m);
    for (std::size_t s = b; s < e; ++s) {
      const double r = radii[s];
      std::fill(buf.begin(), buf.end(), cplx(0.0));
      double rk = 1.0;
      for (int k = 0; k <= dp.degree(); ++k) {
        buf[k % m] += dp.coeff(k) * rk;
        rk *= r;
      }
      const std::vector<cplx> vals = fft::backward(buf);
      const double gr = g(r);
      for (int j = 0; j < m; ++j) {
        w[j] = gr;
        vr[j] = vals[j].real();
        vi[j] = vals[j].imag();
        if (!std::isfinite(vr[j]) || !std::isfinite(vi[j]))
          throw NumericalError("bloch: non-finite derivative sample", {std::polar(r, kTwoPi * j / m)});
      }
      const kernels::MaxLoc ml = kernels::weighted_abs_max(w.data(), vr.data(), vi.data(), m);
      out[s] = {ml.value, std::polar(r, kTwoPi * static_cast<double>(ml.index) / m)};
    }
  });
  return out;
}

using Integrand = std::function<double(std::span<const cplx>, const Jet&)>;

// Generic grid sup of an integrand built from the jet at each point.
std::pair<double, std::vector<cplx>> grid_sup(const FunctionExpr& f, const SampleGrid& grid,
                                              const Integrand& h) {
  const PointSet ps = grid_points(grid);
  const std::size_t n = ps.count();
  std::vector<double> vals(n);
  parallel_chunks(n, 1024, [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const auto z = ps.point(i);
      const Jet j = eval_jet(f, z);
      const double v = h(z, j);
      if (!std::isfinite(v))
        throw NumericalError("bloch: non-finite seminorm sample", std::vector<cplx>(z.begin(), z.end()));
      vals[i] = v;
    }
  });
  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (vals[i] > vals[best]) best = i;
  const auto z = ps.point(best);
  return {vals[best], std::vector<cplx>(z.begin(), z.end())};
}

bool is_disc_poly(const FunctionExpr& f) {
  return f.dim() == 1 && f.is_polynomial();
}

Polynomial1D disc_poly(const FunctionExpr& f) {
  return f.kind() == FunctionExpr::Kind::Poly1d ? f.poly1d() : f.polynd().to_1d();
}

int poly_degree(const FunctionExpr& f) {
  return f.kind() == FunctionExpr::Kind::Poly1d ? f.poly1d().degree() : f.polynd().total_degree();
}

double value_at_origin(const FunctionExpr& f) {
  const std::vector<cplx> zero(f.dim(), 0.0);
  return std::abs(eval(f, zero));
}

double one_minus_sq(double r) { return (1.0 - r) * (1.0 + r); }

}  // namespace

SampleGrid default_norm_grid(const FunctionExpr& f) {
  const int deg = f.is_polynomial() ? poly_degree(f) : -1;
  const int ang = deg >= 0 ? 8 * (1 + deg) : 512;
  switch (f.domain().kind) {
    case DomainKind::Polydisc:
      if (f.dim() > 1) {
        const int a = std::clamp(ang, 16, f.dim() == 2 ? 32 : 8);
        return SampleGrid::polydisc(f.dim(), dyadic_radii(f.dim() == 2 ? 2 : 1, f.dim() == 2 ? 16 : 12), a);
      }
      return SampleGrid::norm_grid(ang);
    case DomainKind::Ball:
      if (f.dim() > 1) return SampleGrid::ball(f.dim(), dyadic_radii(4, 24), std::min(ang, 256), 1);
      return SampleGrid::norm_grid(ang);
    default: return SampleGrid::norm_grid(ang);
  }
}

BlochReport bloch_norm(const FunctionExpr& f) { return bloch_norm(f, f.domain(), default_norm_grid(f)); }

BlochReport bloch_norm(const FunctionExpr& f, const Domain& domain, const SampleGrid& grid) {
  grid.validate();
  if (!domain.is_interior()) throw std::invalid_argument("bloch_norm: domain must be disc, ball or polydisc");
  if (domain.dim != f.dim()) throw std::invalid_argument("bloch_norm: domain dimension does not match f");
  if (grid.domain.dim != f.dim()) throw std::invalid_argument("bloch_norm: grid dimension does not match f");
  BlochReport rep;
  rep.domain = domain;
  rep.grid = grid;
  rep.value_at_origin = value_at_origin(f);

  if (f.dim() == 1) {
    if (!grid.domain.is_interior()) throw std::invalid_argument("bloch_norm: interior grid required");
    if (is_disc_poly(f)) {
      const auto shells = polynomial_shells(disc_poly(f), grid.radii, grid.angular, one_minus_sq);
      std::size_t best = 0;
      for (std::size_t s = 1; s < shells.size(); ++s)
        if (shells[s].value > shells[best].value) best = s;
      rep.seminorm_sup = shells[best].value;
      rep.argmax = {shells[best].point};
    } else {
      SampleGrid g = grid;
      g.domain = Domain::disc();
      auto [v, arg] = grid_sup(f, g, [](std::span<const cplx> z, const Jet& j) {
        return disc_defect(z[0]) * std::abs(j.d[0]);
      });
      rep.seminorm_sup = v;
      rep.argmax = arg;
    }
  } else if (domain.kind == DomainKind::Ball) {
    if (grid.domain.kind != DomainKind::Ball) throw std::invalid_argument("bloch_norm: ball grid required");
    auto [v, arg] = grid_sup(f, grid, [](std::span<const cplx> z, const Jet& j) {
      double s = 0.0;
      cplx rf = 0.0;
      for (std::size_t k = 0; k < z.size(); ++k) {
        s += std::norm(z[k]);
        rf += z[k] * j.d[k];
      }
      return (1.0 - s) * std::abs(rf);
    });
    rep.seminorm_sup = v;
    rep.argmax = arg;
  } else {
    if (grid.domain.kind != DomainKind::Polydisc) throw std::invalid_argument("bloch_norm: polydisc grid required");
    auto [v, arg] = grid_sup(f, grid, [](std::span<const cplx> z, const Jet& j) {
      double s = 0.0;
      for (std::size_t k = 0; k < z.size(); ++k) s += disc_defect(z[k]) * std::abs(j.d[k]);
      return s;
    });
    rep.seminorm_sup = v;
    rep.argmax = arg;
  }
  rep.norm = rep.value_at_origin + rep.seminorm_sup;
  if (f.is_polynomial()) {
    const int d = poly_degree(f);
    const double m = grid.angular;
    if (m > 4.0 * d) rep.certified_bound = rep.value_at_origin + rep.seminorm_sup / (1.0 - kPi * d / m);
  }
  return rep;
}

std::vector<ShellValue> little_bloch_profile(const FunctionExpr& f, const std::vector<double>& radii,
                                             int angular) {
  if (f.dim() != 1) throw std::invalid_argument("little_bloch_profile: disc functions only");
  SampleGrid g;
  g.domain = Domain::disc();
  g.radii = radii;
  g.angular = angular > 0 ? angular : default_norm_grid(f).angular;
  g.validate();
  std::vector<ShellValue> out;
  if (is_disc_poly(f)) {
    const auto shells = polynomial_shells(disc_poly(f), radii, g.angular, one_minus_sq);
    for (std::size_t s = 0; s < radii.size(); ++s) out.push_back({radii[s], shells[s].value});
    return out;
  }
  for (double r : radii) {
    SampleGrid one = g;
    one.radii = {r};
    auto [v, arg] = grid_sup(f, one, [r](std::span<const cplx>, const Jet& j) {
      return one_minus_sq(r) * std::abs(j.d[0]);
    });
    out.push_back({r, v});
  }
  return out;
}

// --- weights ------------------------------------------------------------------

WeightSpec WeightSpec::power(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw std::invalid_argument("power weight needs beta > 0");
  WeightSpec w;
  w.kind_ = Kind::Power;
  w.param_ = beta;
  return w;
}

WeightSpec WeightSpec::log_power(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw std::invalid_argument("log-power weight needs gamma > 0");
  WeightSpec w;
  w.kind_ = Kind::LogPower;
  w.param_ = gamma;
  return w;
}

WeightSpec WeightSpec::table(std::vector<double> t, std::vector<double> v) {
  if (t.empty() || t.size() != v.size()) throw std::invalid_argument("weight table needs matching nonempty columns");
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(t[i] > 0.0 && t[i] <= 1.0)) throw std::invalid_argument("weight table abscissae must lie in (0,1]");
    if (i > 0 && !(t[i] > t[i - 1])) throw std::invalid_argument("weight table abscissae must increase");
    if (!(v[i] > 0.0) || !std::isfinite(v[i])) throw std::invalid_argument("weight table values must be positive");
  }
  WeightSpec w;
  w.kind_ = Kind::Table;
  w.t_ = std::move(t);
  w.w_ = std::move(v);
  w.validate();
  return w;
}

std::string WeightSpec::name() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Power: os << "power(" << param_ << ")"; break;
    case Kind::LogPower: os << "log-power(" << param_ << ")"; break;
    case Kind::Table: os << "custom-table(" << t_.size() << ")"; break;
  }
  return os.str();
}

double WeightSpec::operator()(double t) const {
  switch (kind_) {
    case Kind::Power: return std::pow(t, param_);
    case Kind::LogPower: return std::pow(1.0 - std::log(t), -param_);
    case Kind::Table: {
      if (t <= t_.front()) return w_.front() * t / t_.front();
      if (t >= t_.back()) return w_.back();
      const auto it = std::upper_bound(t_.begin(), t_.end(), t);
      const std::size_t i = static_cast<std::size_t>(it - t_.begin());
      const double a = (t - t_[i - 1]) / (t_[i] - t_[i - 1]);
      return w_[i - 1] + a * (w_[i] - w_[i - 1]);
    }
  }
  return 0.0;
}

void WeightSpec::validate() const {
  double prev = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double t = std::pow(10.0, -300.0 * (1.0 - i / 999.0));
    const double v = (*this)(t);
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("weight must be positive and finite on (0,1]");
    if (v < prev * (1.0 - 1e-12)) throw std::invalid_argument("weight must be non-decreasing");
    prev = v;
  }
  if (!((*this)(1e-300) <= 0.5 * (*this)(1.0))) throw std::invalid_argument("weight does not decay towards t = 0");
}

BlochReport weighted_bloch_norm(const FunctionExpr& f, const WeightSpec& w, const SampleGrid& grid) {
  grid.validate();
  if (f.domain().kind == DomainKind::Ball && f.dim() > 1)
    throw std::invalid_argument("weighted_bloch_norm: disc or polydisc functions only");
  auto safe_w = [&w](double t) {
    const double v = w(t);
    if (!(v > 0.0) || !std::isfinite(v)) {
      std::ostringstream os;
      os << "weight " << w.name() << " is zero or non-finite at t = " << t;
      throw std::invalid_argument(os.str());
    }
    return v;
  };
  BlochReport rep;
  rep.grid = grid;
  rep.domain = f.dim() == 1 ? Domain::disc() : Domain::polydisc(f.dim());
  rep.value_at_origin = value_at_origin(f);
  if (f.dim() == 1) {
    auto g = [&](double r) { return one_minus_sq(r) / safe_w(1.0 - r); };
    if (is_disc_poly(f)) {
      const auto shells = polynomial_shells(disc_poly(f), grid.radii, grid.angular, g);
      std::size_t best = 0;
      for (std::size_t s = 1; s < shells.size(); ++s)
        if (shells[s].value > shells[best].value) best = s;
      rep.seminorm_sup = shells[best].value;
      rep.argmax = {shells[best].point};
    } else {
      SampleGrid gg = grid;
      gg.domain = Domain::disc();
      auto [v, arg] = grid_sup(f, gg, [&](std::span<const cplx> z, const Jet& j) {
        return g(std::abs(z[0])) * std::abs(j.d[0]);
      });
      rep.seminorm_sup = v;
      rep.argmax = arg;
    }
  } else {
    if (grid.domain.kind != DomainKind::Polydisc) throw std::invalid_argument("weighted_bloch_norm: polydisc grid required");
    auto [v, arg] = grid_sup(f, grid, [&](std::span<const cplx> z, const Jet& j) {
      double s = 0.0;
      for (std::size_t k = 0; k < z.size(); ++k) {
        const double d = disc_defect(z[k]);
        s += d / safe_w(d) * std::abs(j.d[k]);
      }
      return s;
    });
    rep.seminorm_sup = v;
    rep.argmax = arg;
  }
  rep.norm = rep.value_at_origin + rep.seminorm_sup;
  return rep;
}

std::string to_string(WeightTestResult::Verdict v) {
  switch (v) {
    case WeightTestResult::Verdict::Diverges: return "diverges";
    case WeightTestResult::Verdict::Converges: return "converges";
    case WeightTestResult::Verdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

WeightTestResult weight_integral_test(const WeightSpec& w, double x, double tolerance) {
  if (!(x > 0.0 && x < 1.0)) throw std::invalid_argument("weight_integral_test: x must lie in (0,1)");
  if (!(tolerance > 0.0)) throw std::invalid_argument("weight_integral_test: tolerance must be positive");
  constexpr int kMaxExponent = 40;
  // integrate w(e^u)^2 du, the substitution t = e^u
  auto piece = [&](double a, double b) {
    auto g = [&](double u) {
      const double v = w(std::exp(u));
      if (!std::isfinite(v) || v < 0.0) throw std::invalid_argument("weight not evaluable on (0, x)");
      return v * v;
    };
    return boost::math::quadrature::gauss<double, 30>::integrate(g, std::log(a), std::log(b));
  };
  WeightTestResult res;
  int j = 1;
  while (std::exp2(-j) >= x) ++j;
  if (j > kMaxExponent - 5) throw std::invalid_argument("weight_integral_test: x too small for the schedule");
  double acc = piece(std::exp2(-j), x);
  res.exponents.push_back(j);
  res.partials.push_back(acc);
  for (++j; j <= kMaxExponent; ++j) {
    acc += piece(std::exp2(-j), std::exp2(-j + 1));
    res.exponents.push_back(j);
    res.partials.push_back(acc);
  }
  const std::size_t n = res.partials.size();
  bool grows = true;
  for (std::size_t i = n - 5; i < n; ++i) grows = grows && (res.partials[i] - res.partials[i - 1] >= tolerance);
  res.last_increment = res.partials[n - 1] - res.partials[n - 2];
  if (grows)
    res.verdict = WeightTestResult::Verdict::Diverges;
  else if (res.last_increment < tolerance)
    res.verdict = WeightTestResult::Verdict::Converges;
  return res;
}

}  // namespace wildbloch
