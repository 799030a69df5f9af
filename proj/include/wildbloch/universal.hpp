#pragma once

#include <string>
#include <vector>

#include "wildbloch/pipeline.hpp"

namespace wildbloch {

/// Deterministic list of boundary targets on the circle. Either an explicit
/// list or the first `count` dyadic monomials c zeta^n ordered by
/// (|n|, denominator exponent, numerator size).
struct TargetEnumeration {
  std::vector<BoundaryFunction> explicit_targets;
  int count = 0;

  static TargetEnumeration from_list(std::vector<BoundaryFunction> t);
  static TargetEnumeration enumerate(int count);
  std::vector<BoundaryFunction> targets() const;
};

/// Samples of zeta -> f(r (zeta - w) + w) at the points of a circle grid.
std::vector<cplx> apply_Tnw(const FunctionExpr& f, double r, cplx w, const SampleGrid& grid);

/// r_n = 1 - 2^-n for n = 1 .. count.
std::vector<double> dyadic_radius_schedule(int count);

struct Certificate {
  int target_id = 0;
  int n = 0;  // 1-based index into the radius list
  double r_n = 0.0;
  std::vector<cplx> anchors;
  double mesh = 0.0;
  std::vector<double> d_per_anchor;
  double d_sup = 1.0;
  double good_measure = 0.0;
  double good_tol = 0.0;
  double block_norm = 0.0;
  /// Bound on how far d can move between an anchor and any point within `mesh` of it.
  double off_mesh_bound = 0.0;
  double eps = 0.0;
  bool verified = false;
  std::string note;
  int grid_angular = 0;
  std::uint64_t grid_seed = 0;
};

/// sup over anchors of d(T_n^w f, target) and the measure of
/// {zeta : |T_n^w f - target| < good_tol for every anchor}.
Certificate certify(const FunctionExpr& f, const BoundaryFunction& target, const std::vector<double>& radii, int n,
                    const std::vector<cplx>& anchors, const SampleGrid& grid, double good_tol = 0.1,
                    double mesh = 0.0);

struct UniversalBlock {
  int target_id = 0;
  Polynomial1D f;
  double budget = 0.0;
  double bloch = 0.0;
  bool accepted = false;
  int stabilization_index = 0;
  std::string stage;
};

struct UniversalOptions {
  std::vector<double> radii;
  std::vector<cplx> anchors{cplx(0.0)};
  double mesh = 0.0;
  std::vector<double> eps_schedule;
  double total_budget = 1.0;
  int certify_angular = 4096;
  PipelineOptions pipeline;
};

struct UniversalCandidate {
  std::vector<double> radii;
  std::vector<cplx> anchors;
  double mesh = 0.0;
  std::vector<UniversalBlock> blocks;
  std::vector<Certificate> certificates;
  /// Bloch estimate of the partial sum after each block.
  std::vector<double> partial_bloch;
  std::vector<BoundaryFunction> targets;

  Polynomial1D sum(std::size_t upto) const;
  Polynomial1D sum() const { return sum(blocks.size()); }
  std::size_t failed() const;
};

UniversalCandidate universal_build(const TargetEnumeration& targets, const InnerSpec& base,
                                   const UniversalOptions& opt);

/// Recomputes every certificate of `c` on a grid with the given seed and angular count.
std::vector<Certificate> recertify(const UniversalCandidate& c, std::uint64_t seed, int angular);

struct ClusterHit {
  cplx value;
  bool hit = false;
  double distance = 0.0;
  double radius = 0.0;
  cplx point;
};

std::vector<ClusterHit> cluster_probe(const FunctionExpr& f, const PathSpec& path, const std::vector<cplx>& values,
                                      double tol);

/// sum_{k=1}^K z^(2^k).
FunctionExpr lacunary_baseline(int k);

}  // namespace wildbloch
