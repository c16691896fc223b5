// Copyright 2026 The Symgate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sys/wait.h>

#include <catch2/catch_amalgamated.hpp>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "testutil.hpp"

using namespace symgate;
namespace fs = std::filesystem;

namespace {

std::string repo_path(const std::string& rel) {
  return std::string(SYMGATE_REPO_DIR) + "/" + rel;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("symgate-tests-" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run_cli(const std::string& args) {
  std::string cmd = std::string(SYMGATE_CLI_PATH) + " " + args +
                    " > /dev/null 2> /dev/null";
  int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

// run a config end to end the way the CLI does, without the process hop
Json run_doc(const Json& doc, const std::string& base_dir = ".") {
  return run(parse_config(doc, base_dir));
}

Json synth_config() {
  return Json{
      {"schema", kConfigSchema},
      {"task", "synthesize"},
      {"system", Json{{"n_qubits", 2}}},
      {"controls", Json::array({Json{{"kind", "heisenberg"},
                                     {"sites", Json::array({0, 1})},
                                     {"j", 1.0}}})},
      {"conserved", Json::array({"Sz", "S_squared"})},
      {"code",
       Json{{"blocks", Json::array({Json{{"provenance", "two_qubit"},
                                         {"sites", Json::array({0, 1})}}})}}},
      {"target", Json{{"name", "x"}}},
      {"synthesis",
       Json{{"length", 1}, {"restarts", 4}, {"pattern", Json::array({0})}}},
      {"seed", 0}};
}

}  // namespace

TEST_CASE("parse_config fills defaults and propagates the seed") {
  Json doc = synth_config();
  doc["seed"] = 42;
  ExperimentConfig cfg = parse_config(doc);
  REQUIRE(cfg.task == "synthesize");
  REQUIRE(cfg.n_qubits == 2);
  REQUIRE(cfg.controls.size() == 1);
  REQUIRE(cfg.controls[0].kind == TermKind::Heisenberg);
  REQUIRE(cfg.conserved.size() == 2);
  REQUIRE(cfg.conserved[0].label == "Sz");
  REQUIRE(!cfg.conserved[0].custom);
  REQUIRE(cfg.code_blocks.size() == 1);
  REQUIRE(cfg.target);
  REQUIRE(cfg.target->name == "x");
  REQUIRE(cfg.synth.length == 1);
  REQUIRE(cfg.synth.restarts == 4);
  REQUIRE(cfg.synth.max_iters == 500);       // default
  REQUIRE(cfg.synth.leakage_weight == 10.0);  // default
  REQUIRE(cfg.seed == 42);
  REQUIRE(cfg.synth.seed == 42);
  REQUIRE(cfg.tol.default_tol == 1e-10);
  REQUIRE(cfg.tol.conserved == 1e-12);
}

TEST_CASE("the config echo is normalized and idempotent") {
  Json doc = synth_config();
  ExperimentConfig cfg = parse_config(doc);
  REQUIRE(cfg.echo["schema"] == kConfigSchema);
  REQUIRE(cfg.echo["synthesis"]["max_iters"] == 500);  // default materialized
  REQUIRE(cfg.echo["tolerances"]["cluster"] == 1e-8);
  ExperimentConfig again = parse_config(cfg.echo);
  REQUIRE(again.echo == cfg.echo);
}

TEST_CASE("parse_config rejects malformed documents") {
  auto broken = [](auto mutate) {
    Json doc = synth_config();
    mutate(doc);
    return testutil::validation_code([&] { parse_config(doc); });
  };
  REQUIRE(broken([](Json& d) { d["task"] = "mystery"; }) == "E_SCHEMA");
  REQUIRE(broken([](Json& d) { d["frobnicate"] = 1; }) == "E_SCHEMA");
  REQUIRE(broken([](Json& d) { d.erase("task"); }) == "E_SCHEMA");
  REQUIRE(broken([](Json& d) { d.erase("system"); }) == "E_SCHEMA");
  REQUIRE(broken([](Json& d) { d["schema"] = "symgate/config/v9"; }) ==
          "E_SCHEMA");
  REQUIRE(broken([](Json& d) { d["system"]["n_qubits"] = 11; }) == "E_RANGE");
  REQUIRE(broken([](Json& d) { d["system"]["n_qubits"] = 2.5; }) ==
          "E_SCHEMA");
  REQUIRE(broken([](Json& d) {
            d["controls"][0]["sites"] = Json::array({0, 5});
          }) == "E_RANGE");
  REQUIRE(broken([](Json& d) {
            d["controls"][0]["kind"] = "quartic";
          }) == "E_SCHEMA");
  REQUIRE(broken([](Json& d) { d["conserved"][0] = "Stotal"; }) ==
          "E_SCHEMA");
  REQUIRE(broken([](Json& d) { d["synthesis"]["walrus"] = 3; }) ==
          "E_SCHEMA");
  REQUIRE(broken([](Json& d) { d["target"] = Json{{"name", "toffoli"}}; }) ==
          "E_SCHEMA");
  REQUIRE(broken([](Json& d) {
            d["target"] = Json{{"name", "x"},
                               {"matrix", matrix_to_json(
                                   Eigen::MatrixXcd::Identity(2, 2))}};
          }) == "E_SCHEMA");
}

TEST_CASE("custom conserved operators are validated at parse time") {
  Json doc{{"task", "decompose"},
           {"system", Json{{"n_qubits", 1}}},
           {"conserved", Json::array()}};
  Json good{{"name", "Q"},
            {"matrix", matrix_to_json(testutil::pauli_z())}};
  doc["conserved"].push_back(good);
  ExperimentConfig cfg = parse_config(doc);
  REQUIRE(cfg.conserved[0].custom);
  REQUIRE(cfg.conserved[0].label == "Q");
  REQUIRE((cfg.conserved[0].matrix - testutil::pauli_z()).norm() == 0.0);

  Json wrong_dim = doc;
  wrong_dim["conserved"][0]["matrix"] =
      matrix_to_json(Eigen::MatrixXcd::Identity(4, 4));
  REQUIRE(testutil::validation_code([&] { parse_config(wrong_dim); }) ==
          "E_DIM");

  Json not_herm = doc;
  Eigen::MatrixXcd skew(2, 2);
  skew << 0, 1, 0, 0;
  not_herm["conserved"][0]["matrix"] = matrix_to_json(skew);
  REQUIRE(testutil::validation_code([&] { parse_config(not_herm); }) ==
          "E_HERMITIAN");
}

TEST_CASE("matrices survive the JSON round trip") {
  std::mt19937_64 rng(23);
  Eigen::MatrixXcd m = testutil::random_unitary(4, rng);
  Eigen::MatrixXcd back = matrix_from_json(matrix_to_json(m), "t");
  REQUIRE((m - back).norm() == 0.0);

  REQUIRE(testutil::validation_code([&] {
            matrix_from_json(Json::array(), "t");
          }) == "E_SCHEMA");
  Json ragged = Json::array();
  ragged.push_back(Json::array({Json::array({1.0, 0.0})}));
  ragged.push_back(Json::array());
  REQUIRE(testutil::validation_code([&] {
            matrix_from_json(ragged, "t");
          }) == "E_DIM");
  Json bare = Json::array();
  bare.push_back(Json::array({1.0}));
  REQUIRE(testutil::validation_code([&] {
            matrix_from_json(bare, "t");
          }) == "E_SCHEMA");
}

TEST_CASE("the negative corpus fails with the advertised codes") {
  auto code_of = [&](const std::string& rel) {
    return testutil::validation_code([&] {
      std::string path = repo_path("configs/negative/" + rel);
      Json doc = load_json_file(path);
      run_doc(doc, fs::path(path).parent_path().string());
    });
  };
  REQUIRE(code_of("overlap.json") == "E_OVERLAP");
  REQUIRE(code_of("non-hermitian-conserved.json") == "E_HERMITIAN");
  REQUIRE(code_of("out-of-range-site.json") == "E_RANGE");
  REQUIRE(code_of("unknown-task.json") == "E_SCHEMA");
  REQUIRE(code_of("bad-matrix-shape.json") == "E_DIM");
  REQUIRE(code_of("missing-controls.json") == "E_SCHEMA");
}

TEST_CASE("committed reproduction configs match the emitter byte for byte") {
  auto suite = reproduction_suite();
  REQUIRE(suite.size() == 9);
  for (const auto& [name, doc] : suite) {
    std::string committed =
        slurp(repo_path("configs/reproduction/" + name));
    REQUIRE(committed == doc.dump(2) + "\n");
  }
}

TEST_CASE("run wraps results in the report envelope") {
  auto suite = reproduction_suite();
  Json report = run_doc(suite[0].second);  // total-spin check
  REQUIRE(report["schema"] == kReportSchema);
  REQUIRE(report["task"] == "check-symmetry");
  REQUIRE(report.contains("config_echo"));
  REQUIRE(report["versions"]["symgate"] == kVersion);
  REQUIRE(report["versions"]["config_schema"] == kConfigSchema);
  REQUIRE(report["wall_time_seconds"].get<double>() >= 0.0);
  const Json& reps = report["results"]["conserved_reports"];
  REQUIRE(reps.size() == 4);
  for (const auto& r : reps) {
    REQUIRE(r["conserved"].get<bool>());
    REQUIRE(r["max_commutator_norm"].get<double>() <= 1e-12);
  }

  // repeated runs agree except for the clock
  Json again = run_doc(suite[0].second);
  REQUIRE(again["results"] == report["results"]);
  REQUIRE(again["config_echo"] == report["config_echo"]);
}

TEST_CASE("axial-symmetry run keeps Sz and breaks Sx") {
  auto suite = reproduction_suite();
  Json report = run_doc(suite[1].second);
  const Json& reps = report["results"]["conserved_reports"];
  REQUIRE(reps[0]["label"] == "Sz");
  REQUIRE(reps[0]["conserved"].get<bool>());
  REQUIRE(reps[1]["label"] == "Sx");
  REQUIRE(!reps[1]["conserved"].get<bool>());
}

TEST_CASE("obstruction run certifies the CNOT against Sz") {
  auto suite = reproduction_suite();
  Json report = run_doc(suite[2].second);
  REQUIRE(report["results"]["obstructed"].get<bool>());
  const Json& cert = report["results"]["certificate"];
  REQUIRE(cert["conserved_label"] == "Sz");
  REQUIRE(cert["verdict"] == "unreachable");
  REQUIRE(cert["target_commutator_norm"].get<double>() ==
          Catch::Approx(std::sqrt(2.0)).margin(1e-10));
}

TEST_CASE("decompose run reports the singlet pair of four qubits") {
  auto suite = reproduction_suite();
  Json report = run_doc(suite[3].second);
  REQUIRE(report["results"]["total_dimension"].get<int>() == 16);
  bool found = false;
  for (const auto& s : report["results"]["sectors"]) {
    double s2 = s["eigenvalues"][0].get<double>();
    double sz = s["eigenvalues"][1].get<double>();
    if (std::abs(s2) < 1e-9 && std::abs(sz) < 1e-9) {
      found = true;
      REQUIRE(s["dimension"].get<int>() == 2);
    }
    REQUIRE(!s.contains("isometry"));  // not requested
  }
  REQUIRE(found);
  // lexicographic descending: the stretched multiplet comes first
  REQUIRE(report["results"]["sectors"][0]["eigenvalues"][0].get<double>() ==
          Catch::Approx(6.0).margin(1e-9));
}

TEST_CASE("closure runs label the code sectors universal") {
  auto suite = reproduction_suite();
  Json three = run_doc(suite[4].second);
  REQUIRE(three["results"]["sector"]["dimension"].get<int>() == 2);
  REQUIRE(three["results"]["verdict"]["closure_dim"].get<int>() == 4);
  REQUIRE(three["results"]["verdict"]["verdict"] == "universal");

  Json desk = run_doc(suite[7].second);
  REQUIRE(desk["results"]["sector"]["dimension"].get<int>() == 6);
  REQUIRE(desk["results"]["verdict"]["closure_dim"].get<int>() == 36);
  REQUIRE(desk["results"]["verdict"]["verdict"] == "universal");
}

TEST_CASE("synthesize run nails the single-pulse logical gates") {
  auto suite = reproduction_suite();

  Json zrep = run_doc(suite[5].second);
  const Json& zr = zrep["results"]["report"];
  REQUIRE(zr["best_infidelity"].get<double>() <= 1e-10);
  REQUIRE(zr["leakage_norm"].get<double>() <= 1e-10);
  REQUIRE(zr["symmetry_audit"].get<double>() <= 1e-8);
  REQUIRE(zrep["results"]["audited_conserved"] == Json::array({"Sz"}));
  // a single splitting term cannot steer the whole sector: advisory fires
  REQUIRE(zrep["results"].contains("enclosing_sector_verdict"));
  REQUIRE(zrep["results"]["enclosing_sector_verdict"]["verdict"] ==
          "not_universal");
  REQUIRE(zrep["results"].contains("universality_warning"));
  REQUIRE(zr["sequence"]["pulses"].size() == 1);
  REQUIRE(zr["sequence"]["pulses"][0].contains("duration_mod_period"));

  Json xrep = run_doc(suite[6].second);
  const Json& xr = xrep["results"]["report"];
  REQUIRE(xr["best_infidelity"].get<double>() <= 1e-10);
  REQUIRE(xr["symmetry_audit"].get<double>() <= 1e-8);
  // the pair code straddles S^2 sectors, so no enclosing-sector advisory
  REQUIRE(!xrep["results"].contains("enclosing_sector"));
  REQUIRE(xrep["results"]["audited_conserved"] ==
          Json::array({"Sz", "S_squared"}));
}

TEST_CASE("verify task replays a synthesized sequence") {
  Json doc = synth_config();
  Json report = run_doc(doc);
  const Json& rep = report["results"]["report"];
  REQUIRE(rep["best_infidelity"].get<double>() <= 1e-10);

  Json vdoc{{"task", "verify"},
            {"system", doc["system"]},
            {"controls", doc["controls"]},
            {"conserved", doc["conserved"]},
            {"code", doc["code"]},
            {"target", doc["target"]},
            {"sequence", Json{{"pulses", Json::array()}}}};
  for (const auto& p : rep["sequence"]["pulses"])
    vdoc["sequence"]["pulses"].push_back(
        Json{{"control", p["control"]}, {"duration", p["duration"]}});
  Json vreport = run_doc(vdoc);
  const Json& vrep = vreport["results"]["report"];
  REQUIRE(vrep["best_infidelity"].get<double>() ==
          rep["best_infidelity"].get<double>());
  REQUIRE(vrep["leakage_norm"].get<double>() ==
          rep["leakage_norm"].get<double>());
  REQUIRE(vrep["symmetry_audit"].get<double>() <= 1e-8);
}

TEST_CASE("verify task requires a sequence") {
  Json doc = synth_config();
  doc["task"] = "verify";
  doc.erase("synthesis");
  REQUIRE(testutil::validation_code([&] { run_doc(doc); }) == "E_SCHEMA");
}

TEST_CASE("sweeps produce one row per length plus a csv") {
  Json doc{{"task", "synthesize"},
           {"system", Json{{"n_qubits", 2}}},
           {"controls", Json::array({Json{{"kind", "zeeman"},
                                          {"sites", Json::array({0, 1})},
                                          {"epsilon", 1.0}}})},
           {"code",
            Json{{"blocks",
                  Json::array({Json{{"provenance", "two_qubit"},
                                    {"sites", Json::array({0, 1})}}})}}},
           {"target", Json{{"name", "z"}}},
           {"synthesis", Json{{"restarts", 2}, {"pattern", Json::array({0})}}},
           {"sweep_lengths", Json::array({1, 2})},
           {"seed", 0}};
  Json report = run_doc(doc);
  const Json& sweep = report["results"]["sweep"];
  REQUIRE(sweep.size() == 2);
  REQUIRE(sweep[0]["length"].get<int>() == 1);
  REQUIRE(sweep[1]["length"].get<int>() == 2);
  for (const auto& row : sweep)
    REQUIRE(row["report"]["best_infidelity"].get<double>() <= 1e-8);
  std::string csv = report["results"]["csv"].get<std::string>();
  REQUIRE(csv.rfind("length,best_infidelity", 0) == 0);
  REQUIRE(std::count(csv.begin(), csv.end(), '\n') == 3);
}

TEST_CASE("tasks demand the sections they need") {
  auto code_of = [&](Json doc) {
    return testutil::validation_code([&] { run_doc(doc); });
  };
  Json base{{"task", "check-symmetry"}, {"system", Json{{"n_qubits", 2}}}};
  REQUIRE(code_of(base) == "E_SCHEMA");  // no controls

  Json closure{{"task", "closure"},
               {"system", Json{{"n_qubits", 2}}},
               {"controls", Json::array({Json{{"kind", "heisenberg"},
                                              {"sites", Json::array({0, 1})},
                                              {"j", 1.0}}})},
               {"conserved", Json::array({"Sz"})}};
  REQUIRE(code_of(closure) == "E_SCHEMA");  // no sector tuple
  closure["sector"] = Json::array({0.0, 0.0});
  REQUIRE(code_of(closure) == "E_SCHEMA");  // tuple length mismatch
  closure["sector"] = Json::array({7.0});
  REQUIRE(code_of(closure) == "E_SCHEMA");  // no such sector
}

TEST_CASE("the command line maps failures to exit codes") {
  fs::path dir = scratch_dir("cli");

  REQUIRE(run_cli("--version") == 0);
  REQUIRE(run_cli("") == 2);  // --config required
  REQUIRE(run_cli("--config " + (dir / "absent.json").string()) == 3);

  Json bad = synth_config();
  bad["task"] = "mystery";
  std::ofstream(dir / "bad.json") << bad.dump(2);
  REQUIRE(run_cli("--config " + (dir / "bad.json").string()) == 2);

  Json dim{{"task", "decompose"},
           {"system", Json{{"n_qubits", 2}}},
           {"conserved",
            Json::array({Json{{"name", "Q"},
                              {"matrix", matrix_to_json(
                                  Eigen::MatrixXcd::Identity(2, 2))}}})}};
  std::ofstream(dir / "dim.json") << dim.dump(2);
  REQUIRE(run_cli("--config " + (dir / "dim.json").string()) == 4);
}

TEST_CASE("the command line writes the report where asked") {
  fs::path dir = scratch_dir("cli-out");
  std::string cfg =
      repo_path("configs/reproduction/06-two-qubit-code-logical-z.json");
  fs::path out = dir / "logical-z.report.json";
  REQUIRE(run_cli("--config " + cfg + " --out " + out.string() +
                  " --quiet") == 0);
  Json report;
  std::ifstream(out) >> report;
  REQUIRE(report["schema"] == kReportSchema);
  REQUIRE(report["results"]["report"]["best_infidelity"].get<double>() <=
          1e-10);

  // a seed override lands in the echo
  REQUIRE(run_cli("--config " + cfg + " --out " + out.string() +
                  " --seed 7 --quiet") == 0);
  std::ifstream(out) >> report;
  REQUIRE(report["config_echo"]["seed"].get<int>() == 7);
}

TEST_CASE("emit-suite writes all bundled configs") {
  fs::path dir = scratch_dir("emit");
  REQUIRE(run_cli("--emit-suite " + dir.string() + " --quiet") == 0);
  auto suite = reproduction_suite();
  for (const auto& [name, doc] : suite) {
    REQUIRE(fs::exists(dir / name));
    REQUIRE(slurp((dir / name).string()) == doc.dump(2) + "\n");
  }
}

TEST_CASE("summaries stay human readable") {
  auto suite = reproduction_suite();
  for (int idx : {0, 2, 3, 4}) {
    Json report = run_doc(suite[idx].second);
    std::string text = summarize(report);
    REQUIRE(text.rfind("task: ", 0) == 0);
    REQUIRE(text.size() > 10);
  }
  // synthesis summaries carry the pulse table
  std::string text = summarize(run_doc(suite[5].second));
  REQUIRE(text.rfind("task: synthesize", 0) == 0);
  REQUIRE(text.find("idx control duration") != std::string::npos);
}
