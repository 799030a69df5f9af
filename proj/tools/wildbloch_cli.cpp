#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "wildbloch/scenario.hpp"

using namespace wildbloch;

namespace {

constexpr int kUsage = 2;
constexpr int kBadInput = 4;

const char* const kSubcommands[][2] = {
    {"bloch-norm", "Bloch norm of a function on its grid"},
    {"little-bloch", "per-shell sup of the Bloch integrand"},
    {"weighted", "weighted Bloch norm"},
    {"weight-test", "divergence test for the weight integral"},
    {"inner-quotient", "hyperbolic derivative quotient field of an inner function"},
    {"shrink", "compose an inner function until its quotient is below eta"},
    {"transport", "boundary measure transport check"},
    {"runge", "polynomial close to 1 on arcs and 0 at the origin"},
    {"decompose", "split a torus target into products of one-variable factors"},
    {"simul", "simultaneous approximation on the disc or polydisc"},
    {"universal", "build a candidate and its certificates"},
    {"certify", "certificate for one function and target"},
    {"cluster", "values approached along a path"},
    {"lacunary", "Bloch norms of lacunary partial sums"},
    {"verify", "re-run the measured checks of a stored document"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wildbloch: numerical experiments on Bloch functions and inner functions"};
  app.require_subcommand(1);
  std::string config_path, out_dir, cert_path;
  std::uint64_t seed = 0;
  int threads = 0;
  for (const auto& [name, help] : kSubcommands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON scenario file")->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, std::string("output directory (default $") + kOutDirEnv + " or ./out)");
    sub->add_option("--seed", seed, "seed, overrides the config");
    sub->add_option("--threads", threads, "worker threads")->check(CLI::NonNegativeNumber);
    if (std::string(name) == "verify")
      sub->add_option("certificate", cert_path, "document to verify")->check(CLI::ExistingFile);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }
  CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();

  try {
    ScenarioConfig cfg;
    if (!config_path.empty()) {
      cfg = ScenarioConfig::from_file(config_path);
      if (cfg.command != command)
        throw ConfigError("config is for '" + cfg.command + "', not '" + command + "'");
    } else if (command == "verify") {
      cfg.command = command;
      cfg.has_seed = true;  // 0 derives a fresh seed from the document
    } else {
      throw ConfigError(command + " needs --config");
    }
    if (sub->count("--seed")) {
      cfg.seed = seed;
      cfg.has_seed = true;
    }
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (threads > 0) cfg.threads = threads;
    if (!cert_path.empty()) cfg.certificate = cert_path;

    const ScenarioOutcome o = run_scenario(cfg);
    for (const auto& f : o.files) std::cout << "wrote " << f << '\n';
    std::cout << command << ": " << o.message << '\n';
    if (o.exit_code != 0) std::cerr << "stage " << o.stage << " failed: " << o.message << '\n';
    return o.exit_code;
  } catch (const ConfigError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const SchemaError& e) {
    std::cerr << "schema error: " << e.what() << '\n';
    return kBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  }
}
