#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace wildbloch {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Raised when a sampled quantity is NaN/inf; carries the offending point.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, std::vector<cplx> point)
      : std::runtime_error(what), point_(std::move(point)) {}
  const std::vector<cplx>& point() const noexcept { return point_; }

 private:
  std::vector<cplx> point_;
};

enum class DomainKind { Disc, Polydisc, Ball, Circle, Torus };

struct Domain {
  DomainKind kind = DomainKind::Disc;
  int dim = 1;

  static Domain disc() { return {DomainKind::Disc, 1}; }
  static Domain polydisc(int n) { return {DomainKind::Polydisc, n}; }
  static Domain ball(int n) { return {DomainKind::Ball, n}; }
  static Domain circle() { return {DomainKind::Circle, 1}; }
  static Domain torus(int n) { return {DomainKind::Torus, n}; }

  bool is_interior() const {
    return kind == DomainKind::Disc || kind == DomainKind::Polydisc || kind == DomainKind::Ball;
  }
  bool operator==(const Domain&) const = default;
};

std::string to_string(const Domain& d);
Domain domain_from_string(const std::string& tag, int dim);

/// Largest dimension supported by the fixed-size gradient storage.
inline constexpr int kMaxDim = 8;

/// Sample points for suprema and integrals.
///
/// Interior domains use the radial schedule times `angular` equispaced angles
/// per circle (product grids for the polydisc). Circle and torus grids are
/// tensor trapezoid rules up to dimension 3, shifted by a seed-derived random
/// offset when `seed != 0`; above dimension 3 they fall back to Monte Carlo
/// with `angular^3` points.
struct SampleGrid {
  Domain domain = Domain::disc();
  std::vector<double> radii;
  int angular = 64;
  std::uint64_t seed = 0;

  void validate() const;

  /// r = 0 and r = 1 - 2^(-j/s) for j = 1 .. s*octaves.
  static SampleGrid norm_grid(int angular, int shells_per_octave = 8, int octaves = 24);
  static SampleGrid disc(std::vector<double> radii, int angular);
  static SampleGrid polydisc(int n, std::vector<double> radii, int angular);
  static SampleGrid ball(int n, std::vector<double> radii, int angular, std::uint64_t seed);
  static SampleGrid circle(int angular, std::uint64_t seed = 0);
  static SampleGrid torus(int n, int angular, std::uint64_t seed = 0);
};

/// Flat storage of `count()` equal-weight points in C^dim.
struct PointSet {
  int dim = 1;
  std::vector<cplx> coords;

  std::size_t count() const { return dim == 0 ? 0 : coords.size() / static_cast<std::size_t>(dim); }
  std::span<const cplx> point(std::size_t i) const {
    return {coords.data() + i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
  }
};

/// Dyadic radial schedule used by the norm grids.
std::vector<double> dyadic_radii(int shells_per_octave, int octaves);

/// Materializes a grid as explicit points.
PointSet grid_points(const SampleGrid& grid);

struct MeasureEstimate {
  double value = 0.0;
  double half_width = 0.0;
  std::size_t samples = 0;
};

/// 95% normal-approximation half-width for a binomial proportion.
double binomial_half_width(double p, std::size_t n);

// --- randomness -----------------------------------------------------------

std::uint64_t splitmix64(std::uint64_t x);
/// Derives an independent stream seed from a run seed and a tag.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag);

/// mt19937_64 with a platform-independent conversion to [0,1).
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  double uniform();
  double normal();
  std::uint64_t next();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// --- boundary sampling and the convergence-in-measure metric ---------------

using BoundaryFn = std::function<cplx(std::span<const cplx>)>;
using BoundaryPredicate = std::function<bool(std::span<const cplx>)>;

/// `count` i.i.d. uniform points on T^n, flat, deterministic in `seed`.
std::vector<cplx> sample_torus(int n, std::size_t count, std::uint64_t seed);

/// d(g,h) = mean over the grid points of min(1, |g - h|).
double measure_metric(const BoundaryFn& g, const BoundaryFn& h, const SampleGrid& grid);
/// Same metric over pre-sampled equal-weight values.
double measure_metric_samples(std::span<const cplx> g, std::span<const cplx> h);

MeasureEstimate indicator_measure(const BoundaryPredicate& s, int n, std::size_t count,
                                  std::uint64_t seed);

// --- parallel loops ---------------------------------------------------------

void set_thread_count(int n);
int thread_count();

/// Runs body(chunk, begin, end) over fixed-size chunks of [0, n). Chunk boundaries do
/// not depend on the thread count, so chunked reductions are reproducible.
void parallel_chunks(std::size_t n, std::size_t chunk,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

}  // namespace wildbloch
