#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "wildbloch/scenario.hpp"

using namespace wildbloch;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "wildbloch_cli_io" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ScenarioOutcome run(json cfg, const fs::path& dir) {
  cfg["out_dir"] = dir.string();
  return run_scenario(ScenarioConfig::from_json(cfg));
}

int cli(const std::string& args) {
  const std::string cmd = std::string(WILDBLOCH_CLI) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

json universal_zero_config() {
  return {{"command", "universal"},
          {"seed", 4},
          {"budgets", {0.3}},
          {"angular", 512},
          {"anchors", {0.0, 0.3}},
          {"targets", {{{"kind", "constant"}, {"dim", 1}, {"value", 0}}}}};
}

}  // namespace

TEST_CASE("config round trip") {
  const json j = json::parse(R"({"command": "universal", "seed": 9, "budgets": [0.4, 0.3], "total_budget": 0.9,
    "anchors": [0, [0, 0.3]], "mesh": 0.01, "radii": [0.5, 0.75, 0.875],
    "targets": [{"kind": "constant", "dim": 1, "value": 0}, {"kind": "trig", "dim": 1, "terms": [[[1], [0.5, 0.25]]]}],
    "base": {"kind": "power", "base": {"kind": "blaschke", "zeros": [[0.1, 0.2]]}, "n": 2}})");
  const ScenarioConfig c = ScenarioConfig::from_json(j);
  c.validate();
  const ScenarioConfig d = ScenarioConfig::from_json(c.to_json());
  CHECK(d.to_json().dump() == c.to_json().dump());
  CHECK(d.anchors[1] == cplx(0.0, 0.3));
  CHECK(d.base->chain_length() == 2);
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(ScenarioConfig::from_json(json{{"command", "bloch-norm"}, {"seed", 1}, {"colour", 2}}), ConfigError);
  CHECK_THROWS_AS(ScenarioConfig::from_json(json{{"seed", 1}}), ConfigError);
  CHECK_THROWS_AS(ScenarioConfig::from_json(json{{"command", "bloch-norm"}, {"seed", -1}}), ConfigError);
  CHECK_THROWS_AS(ScenarioConfig::from_json(json{{"command", "bloch-norm"}, {"seed", 1}, {"function", {{"kind", "x"}}}}),
                  ConfigError);
  const json fn{{"kind", "poly1d"}, {"coeffs", {0, 1}}};
  CHECK_THROWS_AS(ScenarioConfig::from_json(json{{"command", "bloch-norm"}, {"function", fn}}).validate(), ConfigError);
  CHECK_THROWS_AS(ScenarioConfig::from_json(json{{"command", "frobnicate"}, {"seed", 1}}).validate(), ConfigError);
  CHECK_THROWS_AS(ScenarioConfig::from_json(json{{"command", "runge"}, {"seed", 1}, {"budgets", {1.5}}, {"arcs", {{0, 1}}}}).validate(),
                  ConfigError);
  json u = universal_zero_config();
  u["budgets"] = {0.6};
  u["total_budget"] = 0.5;
  CHECK_THROWS_AS(ScenarioConfig::from_json(u).validate(), ConfigError);
  CHECK_THROWS_AS(ScenarioConfig::from_json(json{{"command", "shrink"}, {"seed", 1}}).validate(), ConfigError);
  CHECK_THROWS_AS(ScenarioConfig::from_file("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("bloch-norm scenario writes its report") {
  const fs::path dir = scratch("bloch");
  const ScenarioOutcome o = run(read_json_file(std::string(WILDBLOCH_SCENARIOS) + "/bloch_z2.json"), dir);
  CHECK(o.exit_code == 0);
  const json doc = read_json_file((dir / "bloch-norm.json").string());
  CHECK(doc["schema_version"] == kSchemaVersion);
  CHECK(doc["kind"] == "bloch-norm");
  CHECK_FALSE(doc["generated_at"].get<std::string>().empty());
  const double norm = document_payload(doc, "bloch-norm")["report"]["norm"].get<double>();
  CHECK(norm == doctest::Approx(4.0 / (3.0 * std::sqrt(3.0))).epsilon(1e-3));
  CHECK_FALSE(document_payload(doc, "bloch-norm")["config"].contains("out_dir"));
}

TEST_CASE("simul scenario with the zero target") {
  const fs::path dir = scratch("simul0");
  const ScenarioOutcome o = run(json{{"command", "simul"}, {"seed", 1}, {"budgets", {0.3}},
                                     {"targets", {{{"kind", "constant"}, {"dim", 1}, {"value", 0}}}}},
                                dir);
  CHECK(o.exit_code == 0);
  const json r = document_payload(read_json_file((dir / "simul.json").string()), "simul")["result"];
  const SimulApproxResult s = decode_simul(r);
  CHECK(s.ok);
  CHECK(s.f.is_zero());
  CHECK(s.report.bloch == 0.0);
  CHECK(s.report.sup_error == 0.0);
  CHECK(s.report.measure_E == 1.0);
}

TEST_CASE("universal scenario with no targets") {
  const fs::path dir = scratch("universal_empty");
  json cfg = universal_zero_config();
  cfg["targets"] = json::array();
  cfg["budgets"] = json::array();
  const ScenarioOutcome o = run(cfg, dir);
  CHECK(o.exit_code == 0);
  CHECK(slurp(dir / "certificates.csv") == "target_id,n,r_n,d_sup,good_measure,block_norm\n");
}

TEST_CASE("verify accepts untouched documents and rejects tampered ones") {
  const fs::path dir = scratch("verify");
  REQUIRE(run(universal_zero_config(), dir).exit_code == 0);
  const std::string path = (dir / "universal.json").string();
  const VerifyReport ok = verify_certificate(path);
  CHECK(ok.pass);
  CHECK(ok.kind == "universal");
  CHECK(ok.max_drift < kVerifyDriftTol);

  for (double delta : {0.1, -0.1}) {
    json doc = read_json_file(path);
    auto& cert = doc["payload"]["candidate"]["certificates"][0];
    cert["d_sup"] = cert["d_sup"].get<double>() + delta;
    const std::string bad = (dir / "tampered.json").string();
    write_text_file(bad, doc.dump());
    CHECK_FALSE(verify_certificate(bad).pass);
  }

  const fs::path cdir = scratch("verify_certify");
  REQUIRE(run(read_json_file(std::string(WILDBLOCH_SCENARIOS) + "/certify_identity.json"), cdir).exit_code == 0);
  CHECK(verify_certificate((cdir / "certify.json").string()).pass);
  json doc = read_json_file((cdir / "certify.json").string());
  doc["payload"]["certificate"]["d_sup"] = doc["payload"]["certificate"]["d_sup"].get<double>() + 0.1;
  write_text_file((cdir / "tampered.json").string(), doc.dump());
  CHECK_FALSE(verify_certificate((cdir / "tampered.json").string()).pass);
}

TEST_CASE("verify rejects documents it cannot check") {
  const fs::path dir = scratch("verify_bad");
  write_text_file((dir / "a.json").string(), make_document("lacunary", json::object()).dump());
  CHECK_THROWS_AS(verify_certificate((dir / "a.json").string()), SchemaError);
  json doc = make_document("certify", json::object());
  doc["schema_version"] = kSchemaVersion + 1;
  write_text_file((dir / "b.json").string(), doc.dump());
  CHECK_THROWS_AS(verify_certificate((dir / "b.json").string()), SchemaError);
  write_text_file((dir / "c.json").string(), "{\"kind\": \"certify\"");
  CHECK_THROWS(verify_certificate((dir / "c.json").string()));
}

TEST_CASE("documents compare equal once the timestamp is removed") {
  const json a = make_document("x", json{{"v", 1}});
  const json b = make_document("x", json{{"v", 1}}, false);
  CHECK(strip_timestamp(a) == strip_timestamp(b));
  CHECK(b["generated_at"] == "");
  CHECK_THROWS_AS(document_payload(a, "y"), SchemaError);
}

TEST_CASE("same seed, same bytes") {
  for (const char* name : {"certify_identity.json", "transport_atomic.json", "little_bloch_z3.json"}) {
    const json cfg = read_json_file(std::string(WILDBLOCH_SCENARIOS) + "/" + name);
    const fs::path d1 = scratch(std::string("det1_") + name), d2 = scratch(std::string("det2_") + name);
    const ScenarioOutcome o1 = run(cfg, d1), o2 = run(cfg, d2);
    REQUIRE(o1.files.size() == o2.files.size());
    for (std::size_t i = 0; i < o1.files.size(); ++i) {
      const fs::path f1 = o1.files[i], f2 = o2.files[i];
      if (f1.extension() == ".json")
        CHECK(strip_timestamp(read_json_file(f1.string())).dump() == strip_timestamp(read_json_file(f2.string())).dump());
      else
        CHECK(slurp(f1) == slurp(f2));
    }
  }
}

TEST_CASE("serialized values round trip bit for bit") {
  Certificate c;
  c.target_id = 3;
  c.n = 7;
  c.r_n = 1.0 - std::exp2(-7);
  c.anchors = {0.0, cplx(0.1, -1.0 / 3.0)};
  c.mesh = 0.01;
  c.d_per_anchor = {0.1234567890123456789, 1.0 / 7.0};
  c.d_sup = 1.0 / 7.0;
  c.good_measure = 0.9;
  c.good_tol = 0.1;
  c.block_norm = 1e-300;
  c.off_mesh_bound = 2.5e-5;
  c.eps = 0.3;
  c.verified = true;
  c.note = "x";
  c.grid_angular = 512;
  c.grid_seed = 0xffffffffffffffffull;
  const json j = encode(c);
  CHECK(encode(decode_certificate(json::parse(j.dump()))).dump() == j.dump());

  const SeparablePolynomial s{2, {{Polynomial1D({0.1, cplx(0.3, 1e-17)}), Polynomial1D({std::exp(1.0)})}}};
  CHECK(encode(decode_separable(json::parse(encode(s).dump()))).dump() == encode(s).dump());

  const WeightSpec w = WeightSpec::table({0.1, 0.7}, {0.3, 1.0 / 3.0});
  CHECK(encode(decode_weight(json::parse(encode(w).dump()))).dump() == encode(w).dump());

  const BoundaryFunction b = BoundaryFunction::sum(BoundaryFunction::abs(BoundaryFunction::coordinate(1, 0)),
                                                   BoundaryFunction::step({{Arc{0.1, 2.0}, cplx(0.0, 1.0)}}, 0.5));
  CHECK(encode(decode_boundary(json::parse(encode(b).dump()))).dump() == encode(b).dump());
  CHECK_THROWS_AS(encode(BoundaryFunction::callable(1, [](std::span<const cplx>) { return cplx(0.0); }, "f")), SchemaError);

  CHECK(format_double(0.1) == "0.1");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("certificate CSV layout") {
  Certificate c;
  c.target_id = 1;
  c.n = 2;
  c.r_n = 0.75;
  c.d_sup = 0.125;
  c.good_measure = 1.0;
  c.block_norm = 0.0;
  CHECK(certificates_csv({c}) == "target_id,n,r_n,d_sup,good_measure,block_norm\n1,2,0.75,0.125,1,0\n");
}

TEST_CASE("CLI exit codes") {
  const std::string sc = WILDBLOCH_SCENARIOS;
  const fs::path dir = scratch("cli");
  CHECK(cli("") == 2);
  CHECK(cli("bloch-norm") == 2);
  CHECK(cli("bloch-norm --config /nonexistent.json") == 2);
  CHECK(cli("shrink --config " + sc + "/bloch_z2.json --out " + dir.string()) == 2);
  CHECK(cli("bloch-norm --config " + sc + "/bloch_z2.json --out " + dir.string()) == 0);
  CHECK(fs::exists(dir / "bloch-norm.json"));

  write_text_file((dir / "moebius.json").string(),
                  R"({"command": "shrink", "seed": 1, "eta": 0.5, "base": {"kind": "blaschke", "zeros": [[0.2, 0]]}})");
  CHECK(cli("shrink --config " + (dir / "moebius.json").string() + " --out " + dir.string()) == 3);

  write_text_file((dir / "junk.json").string(), make_document("lacunary", json::object()).dump());
  CHECK(cli("verify " + (dir / "junk.json").string() + " --out " + dir.string()) == 4);
  CHECK(cli("verify " + (dir / "bloch-norm.json").string() + " --out " + dir.string()) == 0);
}

TEST_CASE("output directory from the environment") {
  const fs::path dir = scratch("env");
  setenv(kOutDirEnv, dir.string().c_str(), 1);
  json cfg = read_json_file(std::string(WILDBLOCH_SCENARIOS) + "/lacunary_10.json");
  const ScenarioOutcome o = run_scenario(ScenarioConfig::from_json(cfg));
  unsetenv(kOutDirEnv);
  CHECK(o.exit_code == 0);
  CHECK(fs::exists(dir / "lacunary.json"));
  CHECK(fs::exists(dir / "lacunary.csv"));
}
