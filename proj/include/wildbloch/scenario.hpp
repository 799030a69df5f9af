#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wildbloch/serialize.hpp"

namespace wildbloch {

/// Invalid scenario configuration or command-line usage.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One run of one subcommand. Fields a command does not use are ignored; see
/// the README for which command reads which field.
struct ScenarioConfig {
  std::string command;
  std::uint64_t seed = 0;
  bool has_seed = false;
  std::string out_dir;
  int threads = 0;

  int dim = 1;
  std::vector<double> budgets;
  double total_budget = 1.0;
  std::vector<double> radii;
  std::optional<InnerSpec> base;
  std::vector<BoundaryFunction> targets;
  std::optional<int> target_count;
  std::vector<cplx> anchors;
  double mesh = 0.0;
  int angular = 0;
  std::vector<double> grid_radii;
  std::size_t samples = 0;

  std::optional<FunctionExpr> function;
  std::optional<WeightSpec> weight;
  double x = 1.0;
  std::optional<ArcSet> arcs;
  double eta = 0.0;
  int max_chain = 8;
  std::vector<cplx> values;
  std::optional<PathSpec> path;
  double tol = 0.05;
  int n = 0;
  int k = 0;
  int max_terms = 16;
  std::string certificate;

  static ScenarioConfig from_json(const json& j);
  static ScenarioConfig from_file(const std::string& path);
  json to_json() const;
  /// Throws ConfigError.
  void validate() const;
  /// Base inner function, defaulting to one atom of mass 4 at zeta = 1.
  InnerSpec base_or_default() const;
  /// Explicit radii, else r_n = 1 - 2^-n for n <= 20.
  std::vector<double> radii_or_default() const;
};

inline constexpr const char* kOutDirEnv = "WILDBLOCH_OUT";

struct ScenarioOutcome {
  /// 0 on success, 3 when a hard check failed.
  int exit_code = 0;
  std::string stage;
  std::string message;
  std::vector<std::string> files;
};

/// Runs the configured subcommand and writes its JSON/CSV artifacts into the
/// output directory (config, else $WILDBLOCH_OUT, else "out"). Throws ConfigError
/// for invalid configurations.
ScenarioOutcome run_scenario(const ScenarioConfig& config);

struct VerifyReport {
  bool pass = false;
  std::string kind;
  /// Largest difference between a stored and a recomputed quantity.
  double max_drift = 0.0;
  std::vector<std::string> lines;
};

inline constexpr double kVerifyDriftTol = 0.02;

/// Re-runs the measured checks of a stored document on a fresh grid (a new seed
/// and twice the angular count). `seed` 0 derives one from the stored grid seed.
/// Throws SchemaError for unknown or malformed documents.
VerifyReport verify_certificate(const std::string& path, std::uint64_t seed = 0);

}  // namespace wildbloch
