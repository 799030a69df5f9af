#include "wildbloch/numerics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "wildbloch/kernels.hpp"

namespace wildbloch {

std::string to_string(const Domain& d) {
  switch (d.kind) {
    case DomainKind::Disc: return "disc";
    case DomainKind::Polydisc: return "polydisc";
    case DomainKind::Ball: return "ball";
    case DomainKind::Circle: return "circle";
    case DomainKind::Torus: return "torus";
  }
  return "disc";
}

Domain domain_from_string(const std::string& tag, int dim) {
  if (tag == "disc") return Domain::disc();
  if (tag == "circle") return Domain::circle();
  if (dim < 1) throw std::invalid_argument("domain dimension must be >= 1");
  if (tag == "polydisc") return Domain::polydisc(dim);
  if (tag == "ball") return Domain::ball(dim);
  if (tag == "torus") return Domain::torus(dim);
  throw std::invalid_argument("unknown domain tag '" + tag + "'");
}

void SampleGrid::validate() const {
  if (angular < 4) throw std::invalid_argument("angular count must be >= 4");
  if (domain.dim < 1 || domain.dim > kMaxDim)
    throw std::invalid_argument("grid dimension out of range");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double r = radii[i];
    if (!(r >= 0.0 && r < 1.0)) throw std::invalid_argument("grid radius outside [0,1)");
    if (i > 0 && !(r > radii[i - 1]))
      throw std::invalid_argument("grid radii must be strictly increasing");
  }
  if (domain.is_interior() && radii.empty())
    throw std::invalid_argument("interior grid needs at least one radius");
}

std::vector<double> dyadic_radii(int shells_per_octave, int octaves) {
  if (shells_per_octave < 1 || octaves < 1)
    throw std::invalid_argument("dyadic schedule needs positive counts");
  std::vector<double> r{0.0};
  const int total = shells_per_octave * octaves;
  for (int j = 1; j <= total; ++j)
    r.push_back(1.0 - std::exp2(-static_cast<double>(j) / shells_per_octave));
  return r;
}

SampleGrid SampleGrid::norm_grid(int angular, int shells_per_octave, int octaves) {
  SampleGrid g;
  g.domain = Domain::disc();
  g.radii = dyadic_radii(shells_per_octave, octaves);
  g.angular = angular;
  g.validate();
  return g;
}

SampleGrid SampleGrid::disc(std::vector<double> radii, int angular) {
  SampleGrid g;
  g.domain = Domain::disc();
  g.radii = std::move(radii);
  g.angular = angular;
  g.validate();
  return g;
}

SampleGrid SampleGrid::polydisc(int n, std::vector<double> radii, int angular) {
  SampleGrid g;
  g.domain = Domain::polydisc(n);
  g.radii = std::move(radii);
  g.angular = angular;
  g.validate();
  return g;
}

SampleGrid SampleGrid::ball(int n, std::vector<double> radii, int angular, std::uint64_t seed) {
  SampleGrid g;
  g.domain = Domain::ball(n);
  g.radii = std::move(radii);
  g.angular = angular;
  g.seed = seed;
  g.validate();
  return g;
}

SampleGrid SampleGrid::circle(int angular, std::uint64_t seed) {
  SampleGrid g;
  g.domain = Domain::circle();
  g.angular = angular;
  g.seed = seed;
  g.validate();
  return g;
}

SampleGrid SampleGrid::torus(int n, int angular, std::uint64_t seed) {
  SampleGrid g;
  g.domain = Domain::torus(n);
  g.angular = angular;
  g.seed = seed;
  g.validate();
  return g;
}

namespace {

constexpr std::size_t kMaxGridPoints = std::size_t{1} << 26;

std::size_t checked_pow(std::size_t base, int e) {
  std::size_t out = 1;
  for (int i = 0; i < e; ++i) {
    if (out > kMaxGridPoints / std::max<std::size_t>(base, 1))
      throw std::invalid_argument("grid too large");
    out *= base;
  }
  return out;
}

// Product grid over `n` coordinates, each ranging over `axis`.
void tensor_fill(const std::vector<cplx>& axis, int n, std::vector<cplx>& out) {
  const std::size_t m = axis.size();
  const std::size_t total = checked_pow(m, n);
  out.resize(total * static_cast<std::size_t>(n));
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rem = idx;
    for (int k = n - 1; k >= 0; --k) {
      out[idx * n + k] = axis[rem % m];
      rem /= m;
    }
  }
}

}  // namespace

PointSet grid_points(const SampleGrid& grid) {
  grid.validate();
  PointSet ps;
  ps.dim = grid.domain.dim;
  const int n = grid.domain.dim;
  const int m = grid.angular;
  switch (grid.domain.kind) {
    case DomainKind::Disc: {
      ps.coords.reserve(grid.radii.size() * m);
      for (double r : grid.radii)
        for (int k = 0; k < m; ++k) ps.coords.push_back(std::polar(r, kTwoPi * k / m));
      break;
    }
    case DomainKind::Polydisc: {
      std::vector<cplx> axis;
      for (double r : grid.radii)
        for (int k = 0; k < m; ++k) axis.push_back(std::polar(r, kTwoPi * k / m));
      tensor_fill(axis, n, ps.coords);
      break;
    }
    case DomainKind::Ball: {
      // random directions on the sphere, shared across shells
      Rng rng(derive_seed(grid.seed, 0xba11));
      const std::size_t dirs = static_cast<std::size_t>(m) * static_cast<std::size_t>(std::max(1, n));
      std::vector<cplx> u(dirs * n);
      for (std::size_t d = 0; d < dirs; ++d) {
        double norm2 = 0.0;
        for (int k = 0; k < n; ++k) {
          const cplx v(rng.normal(), rng.normal());
          u[d * n + k] = v;
          norm2 += std::norm(v);
        }
        const double s = 1.0 / std::sqrt(norm2);
        for (int k = 0; k < n; ++k) u[d * n + k] *= s;
      }
      for (double r : grid.radii)
        for (std::size_t d = 0; d < dirs; ++d)
          for (int k = 0; k < n; ++k) ps.coords.push_back(r * u[d * n + k]);
      break;
    }
    case DomainKind::Circle:
    case DomainKind::Torus: {
      if (n <= 3) {
        Rng rng(derive_seed(grid.seed, 0x70a5));
        // one offset per axis; offset zero keeps refinements nested
        std::vector<std::vector<cplx>> axes(n);
        for (int k = 0; k < n; ++k) {
          const double off = grid.seed == 0 ? 0.0 : rng.uniform();
          for (int j = 0; j < m; ++j) axes[k].push_back(std::polar(1.0, kTwoPi * (j + off) / m));
        }
        const std::size_t total = checked_pow(static_cast<std::size_t>(m), n);
        ps.coords.resize(total * n);
        for (std::size_t idx = 0; idx < total; ++idx) {
          std::size_t rem = idx;
          for (int k = n - 1; k >= 0; --k) {
            ps.coords[idx * n + k] = axes[k][rem % m];
            rem /= m;
          }
        }
      } else {
        const std::size_t count = checked_pow(static_cast<std::size_t>(m), 3);
        ps.coords = sample_torus(n, count, grid.seed);
      }
      break;
    }
  }
  return ps;
}

double binomial_half_width(double p, std::size_t n) {
  if (n == 0) return 1.0;
  const double var = std::max(0.0, p * (1.0 - p));
  const double hw = 1.959963984540054 * std::sqrt(var / static_cast<double>(n));
  // keep value +- hw inside [0, 1]
  return std::min({hw, p, 1.0 - p});
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  return splitmix64(splitmix64(seed) ^ splitmix64(tag + 0x632be59bd9b4e019ULL));
}

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

std::uint64_t Rng::next() { return engine_(); }

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  // Box-Muller; std::normal_distribution is not specified bit-for-bit
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double rad = std::sqrt(-2.0 * std::log(u1));
  spare_ = rad * std::sin(kTwoPi * u2);
  has_spare_ = true;
  return rad * std::cos(kTwoPi * u2);
}

std::vector<cplx> sample_torus(int n, std::size_t count, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_torus: dimension must be >= 1");
  if (count < 1) throw std::invalid_argument("sample_torus: count must be >= 1");
  Rng rng(derive_seed(seed, 0x7075));
  std::vector<cplx> out(count * static_cast<std::size_t>(n));
  for (auto& z : out) z = std::polar(1.0, kTwoPi * rng.uniform());
  return out;
}

namespace {

void check_finite(const cplx& v, std::span<const cplx> point, const char* what) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
    std::ostringstream os;
    os << what << ": non-finite sample at (";
    for (std::size_t k = 0; k < point.size(); ++k) os << (k ? ", " : "") << point[k];
    os << ")";
    throw NumericalError(os.str(), std::vector<cplx>(point.begin(), point.end()));
  }
}

}  // namespace

double measure_metric_samples(std::span<const cplx> g, std::span<const cplx> h) {
  if (g.size() != h.size()) throw std::invalid_argument("measure_metric: size mismatch");
  if (g.empty()) throw std::invalid_argument("measure_metric: no samples");
  const std::size_t n = g.size();
  std::vector<double> gr(n), gi(n), hr(n), hi(n);
  for (std::size_t i = 0; i < n; ++i) {
    gr[i] = g[i].real();
    gi[i] = g[i].imag();
    hr[i] = h[i].real();
    hi[i] = h[i].imag();
  }
  return kernels::metric_sum(gr.data(), gi.data(), hr.data(), hi.data(), n) /
         static_cast<double>(n);
}

double measure_metric(const BoundaryFn& g, const BoundaryFn& h, const SampleGrid& grid) {
  if (grid.domain.kind != DomainKind::Circle && grid.domain.kind != DomainKind::Torus)
    throw std::invalid_argument("measure_metric needs a circle or torus grid");
  const PointSet ps = grid_points(grid);
  const std::size_t n = ps.count();
  std::vector<cplx> gv(n), hv(n);
  parallel_chunks(n, 4096, [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      gv[i] = g(ps.point(i));
      hv[i] = h(ps.point(i));
    }
  });
  for (std::size_t i = 0; i < n; ++i) {
    check_finite(gv[i], ps.point(i), "measure_metric");
    check_finite(hv[i], ps.point(i), "measure_metric");
  }
  return measure_metric_samples(gv, hv);
}

MeasureEstimate indicator_measure(const BoundaryPredicate& s, int n, std::size_t count,
                                  std::uint64_t seed) {
  const std::vector<cplx> pts = sample_torus(n, count, seed);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < count; ++i)
    if (s(std::span<const cplx>(pts.data() + i * n, static_cast<std::size_t>(n)))) ++hits;
  MeasureEstimate est;
  est.samples = count;
  est.value = static_cast<double>(hits) / static_cast<double>(count);
  est.half_width = binomial_half_width(est.value, count);
  return est;
}

namespace {
std::atomic<int> g_threads{1};
}

void set_thread_count(int n) {
  if (n < 1) throw std::invalid_argument("thread count must be >= 1");
  g_threads.store(n);
}

int thread_count() { return g_threads.load(); }

void parallel_chunks(std::size_t n, std::size_t chunk,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& body) {
  if (n == 0) return;
  chunk = std::max<std::size_t>(chunk, 1);
  const std::size_t nchunks = (n + chunk - 1) / chunk;
  const int t = std::min<std::size_t>(static_cast<std::size_t>(thread_count()), nchunks);
  auto run = [&](std::size_t c) { body(c, c * chunk, std::min(n, (c + 1) * chunk)); };
  if (t <= 1) {
    for (std::size_t c = 0; c < nchunks; ++c) run(c);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr err;
  std::atomic<bool> failed{false};
  for (int w = 0; w < t; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t c = next.fetch_add(1);
        if (c >= nchunks || failed.load()) return;
        try {
          run(c);
        } catch (...) {
          if (!failed.exchange(true)) err = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace wildbloch
