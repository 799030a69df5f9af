#pragma once

#include <string>
#include <utility>
#include <vector>

#include "wildbloch/arcs.hpp"
#include "wildbloch/boundary.hpp"
#include "wildbloch/polynomial.hpp"

namespace wildbloch {

struct FitOptions {
  int start_degree = 8;
  int degree_cap = 1024;
  /// Smallest admissible gap in the complement of F, radians.
  double gap_min = kTwoPi / 1000.0;
};

struct FitResult {
  bool ok = false;
  std::string reason;
  Polynomial1D poly;
  int degree = 0;
  /// Verified sup over F of |P - 1| (runge_pair) or |Q - phi| (uniform_fit).
  double margin = 0.0;
  double at_origin = 0.0;
  /// Upper estimate of sup over the closed disc of |poly|.
  double sup_norm = 0.0;
  std::size_t verification_points = 0;
  std::vector<std::pair<int, double>> trail;  // (degree, verified margin)
};

/// Polynomial P with P(0) = 0 and |P - 1| < delta on F, by least squares on
/// Chebyshev-clustered samples of F.
FitResult runge_pair(const ArcSet& f, double delta, const FitOptions& opt = {});

/// Polynomial Q with |Q - phi| < delta on F. Polynomial targets are returned as is.
FitResult uniform_fit(const ArcSet& f, const BoundaryFunction& phi, double delta,
                      const FitOptions& opt = {});

/// Sup of |P - target| over `count` endpoint-inclusive samples of F.
double verify_fit(const Polynomial1D& p, const ArcSet& f, const BoundaryFunction& target,
                  std::size_t count);

/// Sampled sup of |p| on the unit circle, corrected for the sampling gap.
double disc_sup_norm(const Polynomial1D& p);

/// sum_n c[n - lo] e^{i n theta}.
struct TrigPoly {
  int lo = 0;
  std::vector<cplx> c;

  cplx operator()(double theta) const;
  cplx at(cplx zeta) const;
  int hi() const { return lo + static_cast<int>(c.size()) - 1; }
  /// sum |c_n|, an upper bound for the sup norm.
  double abs_sum() const;
  BoundaryFunction to_boundary() const;
};

struct ProductTerm {
  std::vector<TrigPoly> factors;
  cplx coefficient = 1.0;
};

cplx eval_terms(const std::vector<ProductTerm>& terms, std::span<const cplx> zeta);

struct DecomposeResult {
  bool ok = false;
  std::string reason;
  std::vector<ProductTerm> terms;
  /// Sup of |phi - sum of terms| on the verification grid.
  double error = 0.0;
  /// Measured coefficient mass outside the retained band.
  double tail = 0.0;
  int grid_exponent = 0;
  int max_frequency = 0;
  int verification_axis = 0;
  /// Error of every prefix of the full rank-one expansion.
  std::vector<double> prefix_errors;
};

/// Truncated Fourier synthesis of phi on T^N grouped into rank-one products
/// (SVD for N = 2, greedy power iteration for N >= 3). Picks the shortest
/// prefix with error < eps, else the best prefix of length <= m_cap.
DecomposeResult product_decompose(const BoundaryFunction& phi, double eps, int m_cap);

}  // namespace wildbloch
