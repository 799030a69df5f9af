#pragma once

#include <vector>

#include "wildbloch/numerics.hpp"

namespace wildbloch {

struct Arc {
  double start = 0.0;
  double end = 0.0;
  double length() const { return end - start; }
  bool operator==(const Arc&) const = default;
};

/// Finite union of closed arcs of the unit circle.
///
/// Stored as sorted, disjoint intervals of [0, 2pi]; an arc through angle 0 is
/// kept as two pieces internally and reported as one by `logical_arcs`.
class ArcSet {
 public:
  ArcSet() = default;
  /// Arcs may be given with any start angle; lengths must be >= 0.
  explicit ArcSet(const std::vector<Arc>& arcs);

  static ArcSet full();
  static ArcSet arc(double start, double end) { return ArcSet({{start, end}}); }

  const std::vector<Arc>& pieces() const { return pieces_; }
  /// Maximal arcs, merging the pieces that meet at angle 0 (end may exceed 2pi).
  std::vector<Arc> logical_arcs() const;

  /// Normalized measure in [0, 1].
  double measure() const;
  bool empty() const { return pieces_.empty(); }
  bool is_full() const;
  bool contains(double theta) const;
  bool contains(cplx zeta) const { return contains(std::arg(zeta)); }

  ArcSet complement() const;
  ArcSet intersect(const ArcSet& other) const;
  /// Longest arc of the complement, in radians.
  double largest_gap() const;

  /// Deterministic angles spread over the arcs in proportion to length.
  /// Chebyshev placement clusters near arc endpoints.
  /// Uniform placement includes both endpoints of every arc.
  std::vector<double> sample_angles(std::size_t count, bool chebyshev) const;
  /// i.i.d. uniform angles on the set.
  std::vector<double> random_angles(std::size_t count, std::uint64_t seed) const;

  bool operator==(const ArcSet&) const = default;

 private:
  std::vector<Arc> pieces_;
};

}  // namespace wildbloch
