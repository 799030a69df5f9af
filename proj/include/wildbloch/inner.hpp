#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wildbloch/arcs.hpp"
#include "wildbloch/numerics.hpp"

namespace wildbloch {

/// Thrown when a Cantor integral cannot be certified to the requested accuracy.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double distance, double bound)
      : std::runtime_error(what), distance_(distance), bound_(bound) {}
  /// Euclidean distance from the evaluation point to the nearest unresolved support piece.
  double distance() const noexcept { return distance_; }
  double error_bound() const noexcept { return bound_; }

 private:
  double distance_;
  double bound_;
};

struct Atom {
  cplx zeta;
  double mass = 0.0;
  bool operator==(const Atom&) const = default;
};

/// Self-similar Cantor measure on the arc of length `length` centred at
/// `center` (radians): each piece keeps two end copies scaled by `ratio`.
struct CantorSpec {
  double center = 0.0;
  double length = kPi / 2;
  double ratio = 1.0 / 3.0;
  int depth = 20;
  bool operator==(const CantorSpec&) const = default;
};

struct SingularMeasureSpec {
  enum class Kind { Atomic, Cantor };
  Kind kind = Kind::Atomic;
  std::vector<Atom> atoms;
  CantorSpec cantor;
  /// Total mass of the Cantor measure; atomic specs use the sum of atom masses.
  double cantor_mass = 1.0;

  static SingularMeasureSpec atomic(std::vector<Atom> atoms);
  static SingularMeasureSpec cantor_measure(CantorSpec c, double mass);
  double total_mass() const;
  void validate() const;
  bool operator==(const SingularMeasureSpec&) const = default;
};

struct InnerSpec {
  enum class Kind { Singular, Blaschke, Composition };
  Kind kind = Kind::Blaschke;
  SingularMeasureSpec measure;
  std::vector<cplx> zeros;
  /// Applied outer first: chain[0] o chain[1] o ... o chain.back().
  std::vector<InnerSpec> chain;

  static InnerSpec singular(SingularMeasureSpec m);
  static InnerSpec blaschke(std::vector<cplx> zeros);
  static InnerSpec identity() { return blaschke({cplx(0.0)}); }
  static InnerSpec compose(std::vector<InnerSpec> chain);
  /// chain of `n` copies of `base`, flattened.
  static InnerSpec power(const InnerSpec& base, int n);

  void validate() const;
  int chain_length() const;
  bool operator==(const InnerSpec&) const = default;
};

/// Value, derivative and 1 - |value|^2 computed without cancellation.
struct InnerValue {
  cplx value;
  cplx derivative;
  double defect = 1.0;
  /// exp of the Herglotz integral underflowed; value and derivative are 0.
  bool underflow = false;
};

/// Evaluate at z with |z| < 1. `zdefect` = 1 - |z|^2 supplied by the caller
/// when it is known more accurately than from z itself.
InnerValue inner_eval(const InnerSpec& spec, cplx z);
InnerValue inner_eval(const InnerSpec& spec, cplx z, double zdefect);

/// 1 - |z|^2 for a point of the disc.
double disc_defect(cplx z);

struct Quotient {
  double q = 0.0;
  bool saturated = false;
  /// The ratio with the radial derivative, |z| q.
  double radial_ratio = 0.0;
};

/// (1 - |z|^2)|I'(z)| / (1 - |I(z)|^2). Saturated when 1 - |I|^2 < 2e-14.
Quotient hyperbolic_quotient(const InnerSpec& spec, cplx z);
Quotient hyperbolic_quotient(const InnerSpec& spec, cplx z, double zdefect);

struct QuotientMap {
  SampleGrid grid;
  std::vector<cplx> points;
  std::vector<double> values;  // NaN at saturated samples
  double sup = 0.0;
  cplx argmax = 0.0;
  std::size_t saturated = 0;
  bool low_confidence = false;
};

QuotientMap quotient_field(const InnerSpec& spec, const SampleGrid& grid);

/// Grid used by compose_shrink when none is given: 256 angles, radii
/// 1 - 2^(-j/4) up to 1 - 2^-8. Deeper grids measure sup q = 1 for every
/// atomic or Cantor base, since q -> 1 near the circle away from the support.
SampleGrid default_quotient_grid();

struct ShrinkResult {
  bool ok = false;
  std::string reason;
  InnerSpec spec;
  double achieved = 1.0;
  double base_sup = 1.0;
  int chain_length = 0;
  std::vector<double> history;  // measured sup per chain length
};

ShrinkResult compose_shrink(const InnerSpec& base, double eta, int max_chain);
ShrinkResult compose_shrink(const InnerSpec& base, double eta, int max_chain, const SampleGrid& grid);

/// Radius used for boundary values of inner functions.
inline constexpr double kProbeRadiusDefect = 0x1.0p-26;

/// Boundary value at |zeta| = 1, following a composition one link at a time and
/// probing each link at radius 1 - kProbeRadiusDefect. Empty when a link's
/// modulus there is below 0.999 (zeta too close to the support) or the
/// quadrature cannot be certified.
std::optional<cplx> inner_boundary_value(const InnerSpec& spec, cplx zeta);

struct TransportReport {
  double preimage_measure = 0.0;
  double target_measure = 0.0;
  double deviation = 0.0;
  double half_width = 0.0;
  std::size_t samples = 0;
  double unstable_fraction = 0.0;
  bool inconclusive = false;
};

/// Compares m{zeta : J(zeta) in F} with m(F) for J(z) = z I(z).
TransportReport loewner_transport_check(const InnerSpec& spec, const ArcSet& f,
                                        std::size_t samples, std::uint64_t seed);

// Cantor quadrature internals, exposed for testing.
namespace cantor {

struct Rule {
  std::vector<double> nodes;    // in [0, 1]
  std::vector<double> weights;  // sum to 1
};

/// Gauss rule for the Cantor probability measure on [0, 1] with the given ratio.
const Rule& gauss_rule(double ratio);

struct Integrals {
  cplx herglotz;      // int (zeta + z)/(zeta - z) dmu, real part is the Poisson integral
  cplx kernel_deriv;  // int 2 zeta / (zeta - z)^2 dmu
  double error_bound = 0.0;
  int max_depth = 0;
};

/// Integrals against the probability measure described by `c`.
Integrals integrate(const CantorSpec& c, cplx z, double zdefect);

}  // namespace cantor

}  // namespace wildbloch
