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

#pragma once

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "symgate/config.hpp"
#include "symgate/encoding.hpp"
#include "symgate/lie.hpp"
#include "symgate/serialize.hpp"
#include "symgate/spin.hpp"
#include "symgate/symmetry.hpp"
#include "symgate/synthesis.hpp"
#include "symgate/version.hpp"

namespace symgate {
namespace detail {

inline std::vector<ConservedOperator> build_conserved(
    const SpinSystem& sys, const std::vector<ConservedSpec>& specs) {
  std::vector<ConservedOperator> out;
  for (const auto& s : specs) {
    if (s.custom) {
      out.push_back({s.label, s.matrix});
    } else if (s.label == "Sx") {
      out.push_back(total_spin_component(sys, Axis::X));
    } else if (s.label == "Sy") {
      out.push_back(total_spin_component(sys, Axis::Y));
    } else if (s.label == "Sz") {
      out.push_back(total_spin_component(sys, Axis::Z));
    } else {
      out.push_back(total_spin_squared(sys));
    }
  }
  return out;
}

inline LogicalCode build_block(const CodeBlockSpec& blk) {
  if (blk.provenance == "two_qubit")
    return with_sites(code_two_qubit(SpinSystem(2), 0, 1), blk.sites);
  if (blk.provenance == "three_qubit")
    return with_sites(code_three_qubit(SpinSystem(3)), blk.sites);
  if (blk.provenance == "four_qubit")
    return with_sites(code_four_qubit(SpinSystem(4)), blk.sites);
  // custom
  const Eigen::MatrixXcd& v = *blk.isometry;
  int k = 0;
  while ((Eigen::Index(1) << k) < v.cols()) ++k;
  if ((Eigen::Index(1) << k) != v.cols())
    throw ValidationError("E_DIM", "code.blocks",
                          "isometry columns must be a power of two");
  double dev = (v.adjoint() * v -
                Eigen::MatrixXcd::Identity(v.cols(), v.cols())).norm();
  if (dev > 1e-10)
    throw ValidationError("E_SCHEMA", "code.blocks",
                          "isometry columns not orthonormal, deviation " +
                              std::to_string(dev));
  std::vector<std::string> labels;
  for (int i = 0; i < (1 << k); ++i) {
    std::string l;
    for (int b = k - 1; b >= 0; --b) l += char('0' + ((i >> b) & 1));
    if (l.empty()) l = "";
    labels.push_back(l);
  }
  LogicalCode code{int(blk.sites.size()), k, v, labels, "custom", blk.sites};
  return code;
}

inline LogicalCode build_code(const ExperimentConfig& cfg,
                              const SpinSystem& sys) {
  if (cfg.code_blocks.empty())
    throw ValidationError("E_SCHEMA", "config.code",
                          "task " + cfg.task + " needs a code");
  std::vector<LogicalCode> blocks;
  for (const auto& b : cfg.code_blocks) blocks.push_back(build_block(b));
  if (blocks.size() == 1 && blocks[0].n_physical == sys.n_qubits) {
    bool identity_sites = true;
    for (int i = 0; i < sys.n_qubits; ++i)
      identity_sites &= blocks[0].sites[i] == i;
    if (identity_sites) return blocks[0];  // keep original provenance
  }
  return compose_codes(blocks, sys);
}

inline SquareMatrix build_gate(int n_qubits, const TargetSpec& spec,
                               const std::string& field) {
  if (spec.matrix) {
    const SquareMatrix& m = *spec.matrix;
    if (m.rows() != m.cols() || m.rows() != (Eigen::Index(1) << n_qubits))
      throw ValidationError("E_DIM", field,
                            "target matrix is " + std::to_string(m.rows()) +
                                "x" + std::to_string(m.cols()) +
                                ", expected dim " +
                                std::to_string(1 << n_qubits));
    return m;
  }
  SpinSystem gs(n_qubits);
  std::vector<int> q = spec.qubits;
  if (spec.name == "identity")
    return SquareMatrix::Identity(gs.dim, gs.dim);
  if (spec.name == "x" || spec.name == "y" || spec.name == "z") {
    if (q.empty()) q = {0};
    Axis ax = spec.name == "x" ? Axis::X : spec.name == "y" ? Axis::Y
                                                            : Axis::Z;
    return pauli_on_site(gs, q[0], ax);
  }
  if (q.empty()) q = {0, 1};
  if (q.size() != 2)
    throw ValidationError("E_SCHEMA", field + ".qubits",
                          spec.name + " needs 2 qubits");
  if (spec.name == "cnot") return cnot(gs, q[0], q[1]);
  return swap_gate(gs, q[0], q[1]);
}

inline void need_controls(const ExperimentConfig& cfg) {
  if (cfg.controls.empty())
    throw ValidationError("E_SCHEMA", "config.controls",
                          "task " + cfg.task + " needs controls");
}

inline void need_conserved(const ExperimentConfig& cfg) {
  if (cfg.conserved.empty())
    throw ValidationError("E_SCHEMA", "config.conserved",
                          "task " + cfg.task + " needs conserved candidates");
}

inline const SymmetrySector& select_sector(
    const std::vector<SymmetrySector>& sectors,
    const std::vector<double>& wanted) {
  if (sectors.empty() || wanted.size() != sectors.front().eigenvalues.size())
    throw ValidationError("E_SCHEMA", "config.sector",
                          "sector tuple length does not match conserved "
                          "operator count");
  for (const auto& s : sectors) {
    bool hit = true;
    for (size_t i = 0; i < wanted.size(); ++i)
      hit &= std::abs(s.eigenvalues[i] - wanted[i]) <= 1e-6;
    if (hit) return s;
  }
  throw ValidationError("E_SCHEMA", "config.sector",
                        "no sector with the requested eigenvalues");
}

inline Json sweep_csv(const Json& sweep) {
  std::string csv =
      "length,best_infidelity,leakage_norm,objective_value,iterations,"
      "restarts_used\n";
  char buf[256];
  for (const auto& row : sweep) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%d,%d\n",
                  row["length"].get<int>(),
                  row["report"]["best_infidelity"].get<double>(),
                  row["report"]["leakage_norm"].get<double>(),
                  row["report"]["objective_value"].get<double>(),
                  row["report"]["iterations"].get<int>(),
                  row["report"]["restarts_used"].get<int>());
    csv += buf;
  }
  return csv;
}

}  // namespace detail

// Dispatch one experiment; pure except for the clock.  File placement of
// the returned report is the caller's business.
inline Json run(const ExperimentConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  SpinSystem sys(cfg.n_qubits);
  Json results;

  if (cfg.task == "check-symmetry") {
    detail::need_controls(cfg);
    detail::need_conserved(cfg);
    ControlSet controls = make_control_set(sys, cfg.controls);
    auto ops = detail::build_conserved(sys, cfg.conserved);
    Json arr = Json::array();
    for (const auto& r : conserved_check(controls, ops, cfg.tol.conserved))
      arr.push_back(to_json(r));
    results["conserved_reports"] = std::move(arr);
    results["tolerance"] = cfg.tol.conserved;
  } else if (cfg.task == "decompose") {
    detail::need_conserved(cfg);
    auto ops = detail::build_conserved(sys, cfg.conserved);
    auto sectors = sector_decompose(sys, ops, cfg.tol.cluster, cfg.seed);
    Json arr = Json::array();
    int total = 0;
    for (const auto& s : sectors) {
      arr.push_back(to_json(s, cfg.include_isometries));
      total += s.dimension;
    }
    results["sectors"] = std::move(arr);
    results["total_dimension"] = total;
  } else if (cfg.task == "certify-obstruction") {
    detail::need_controls(cfg);
    detail::need_conserved(cfg);
    if (!cfg.target)
      throw ValidationError("E_SCHEMA", "config.target",
                            "certify-obstruction needs a target");
    ControlSet controls = make_control_set(sys, cfg.controls);
    auto ops = detail::build_conserved(sys, cfg.conserved);
    SquareMatrix target =
        detail::build_gate(cfg.n_qubits, *cfg.target, "config.target");
    auto cert =
        obstruction_certificate(controls, target, ops, cfg.tol.conserved);
    results["obstructed"] = bool(cert);
    if (cert) results["certificate"] = to_json(*cert);
  } else if (cfg.task == "closure") {
    detail::need_controls(cfg);
    detail::need_conserved(cfg);
    if (!cfg.sector)
      throw ValidationError("E_SCHEMA", "config.sector",
                            "closure needs a sector eigenvalue tuple");
    ControlSet controls = make_control_set(sys, cfg.controls);
    auto ops = detail::build_conserved(sys, cfg.conserved);
    auto sectors = sector_decompose(sys, ops, cfg.tol.cluster, cfg.seed);
    const SymmetrySector& sector = detail::select_sector(sectors, *cfg.sector);
    UniversalityVerdict verdict =
        universality_on_sector(controls, sector, cfg.tol.closure);
    results["sector"] = to_json(sector, cfg.include_isometries);
    results["verdict"] = to_json(verdict);
  } else if (cfg.task == "synthesize" || cfg.task == "verify") {
    detail::need_controls(cfg);
    ControlSet controls = make_control_set(sys, cfg.controls);
    LogicalCode code = detail::build_code(cfg, sys);
    if (!cfg.target)
      throw ValidationError("E_SCHEMA", "config.target",
                            cfg.task + " needs a target");
    SquareMatrix target =
        detail::build_gate(code.k_logical, *cfg.target, "config.target");
    auto ops = detail::build_conserved(sys, cfg.conserved);
    results["code"] = to_json(code, cfg.include_isometries);

    if (cfg.task == "verify") {
      if (!cfg.sequence)
        throw ValidationError("E_SCHEMA", "config.sequence",
                              "verify needs a pulse sequence");
      SynthesisReport rep =
          verify_sequence(controls, code, target, *cfg.sequence, ops,
                          cfg.synth.leakage_weight);
      results["report"] = to_json(rep);
    } else {
      // audit only the candidates the controls actually conserve; broken
      // candidates would just saturate the audit
      std::vector<ConservedOperator> audit;
      if (!ops.empty()) {
        auto checks = conserved_check(controls, ops, cfg.tol.conserved);
        Json audited = Json::array();
        for (size_t i = 0; i < ops.size(); ++i)
          if (checks[i].conserved) {
            audit.push_back(ops[i]);
            audited.push_back(ops[i].label);
          }
        results["audited_conserved"] = std::move(audited);
      }
      // controllability advisory: when the code sits inside one sector of
      // the audited set, report the closure verdict there (not enforced)
      if (!audit.empty()) {
        auto sectors = sector_decompose(sys, audit, cfg.tol.cluster,
                                        cfg.seed);
        const SymmetrySector* enclosing = nullptr;
        for (const auto& s : sectors) {
          double dev =
              (s.isometry * (s.isometry.adjoint() * code.isometry) -
               code.isometry).norm();
          if (dev <= 1e-8) {
            enclosing = &s;
            break;
          }
        }
        if (enclosing) {
          UniversalityVerdict v =
              universality_on_sector(controls, *enclosing, cfg.tol.closure);
          results["enclosing_sector"] = to_json(*enclosing, false);
          results["enclosing_sector_verdict"] = to_json(v);
          if (v.verdict == Universality::NotUniversal)
            results["universality_warning"] =
                "controls are not universal on the sector enclosing the "
                "code; the target may be unreachable";
        }
      }
      if (cfg.sweep_lengths.empty()) {
        SynthesisReport rep =
            synthesize(controls, code, target, cfg.synth, audit);
        results["report"] = to_json(rep);
      } else {
        Json sweep = Json::array();
        for (int len : cfg.sweep_lengths) {
          SynthesisOptions opts = cfg.synth;
          opts.length = len;
          SynthesisReport rep =
              synthesize(controls, code, target, opts, audit);
          sweep.push_back(Json{{"length", len}, {"report", to_json(rep)}});
        }
        results["csv"] = detail::sweep_csv(sweep);
        results["sweep"] = std::move(sweep);
      }
    }
  }

  double secs = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - t0).count();
  Json report;
  report["schema"] = kReportSchema;
  report["task"] = cfg.task;
  report["config_echo"] = cfg.echo;
  report["results"] = std::move(results);
  report["versions"] = Json{{"symgate", kVersion},
                            {"config_schema", kConfigSchema},
                            {"report_schema", kReportSchema}};
  report["wall_time_seconds"] = secs;
  return report;
}

// Terse human summary of a report envelope for stdout.
inline std::string summarize(const Json& report) {
  std::string task = report["task"].get<std::string>();
  const Json& res = report["results"];
  std::string out = "task: " + task + "\n";
  char buf[256];
  if (task == "check-symmetry") {
    for (const auto& r : res["conserved_reports"]) {
      std::snprintf(buf, sizeof(buf), "  %-10s %s  max ||[H,Q]|| = %.3e\n",
                    r["label"].get<std::string>().c_str(),
                    r["conserved"].get<bool>() ? "conserved" : "broken   ",
                    r["max_commutator_norm"].get<double>());
      out += buf;
    }
  } else if (task == "decompose") {
    std::snprintf(buf, sizeof(buf), "  %zu sectors, total dimension %d\n",
                  res["sectors"].size(), res["total_dimension"].get<int>());
    out += buf;
    for (const auto& s : res["sectors"]) {
      std::string eig;
      for (const auto& e : s["eigenvalues"]) {
        std::snprintf(buf, sizeof(buf), "%s%.4f", eig.empty() ? "" : ", ",
                      e.get<double>());
        eig += buf;
      }
      std::snprintf(buf, sizeof(buf), "  (%s) dim %d\n", eig.c_str(),
                    s["dimension"].get<int>());
      out += buf;
    }
  } else if (task == "certify-obstruction") {
    if (res["obstructed"].get<bool>()) {
      const Json& c = res["certificate"];
      std::snprintf(buf, sizeof(buf),
                    "  unreachable: target breaks %s, ||[T,Q]|| = %.12f\n",
                    c["conserved_label"].get<std::string>().c_str(),
                    c["target_commutator_norm"].get<double>());
      out += buf;
    } else {
      out += "  no obstruction found among the candidates\n";
    }
  } else if (task == "closure") {
    const Json& v = res["verdict"];
    std::snprintf(buf, sizeof(buf),
                  "  sector dim %d: closure_dim %d of %d, %s\n",
                  res["sector"]["dimension"].get<int>(),
                  v["closure_dim"].get<int>(),
                  v["full_unitary_dim"].get<int>(),
                  v["verdict"].get<std::string>().c_str());
    out += buf;
  } else if (res.contains("report")) {
    const Json& r = res["report"];
    std::snprintf(buf, sizeof(buf),
                  "  infidelity %.3e  leakage %.3e  audit %.3e  (restarts "
                  "%d, iters %d)\n",
                  r["best_infidelity"].get<double>(),
                  r["leakage_norm"].get<double>(),
                  r["symmetry_audit"].get<double>(),
                  r["restarts_used"].get<int>(), r["iterations"].get<int>());
    out += buf;
    std::istringstream table(pulse_table(r));
    for (std::string line; std::getline(table, line);)
      out += "  " + line + "\n";
  } else if (res.contains("sweep")) {
    for (const auto& row : res["sweep"]) {
      std::snprintf(buf, sizeof(buf), "  L=%-3d infidelity %.3e leakage %.3e\n",
                    row["length"].get<int>(),
                    row["report"]["best_infidelity"].get<double>(),
                    row["report"]["leakage_norm"].get<double>());
      out += buf;
    }
  }
  return out;
}

// The bundled configs, one per claim the toolkit reproduces.  Returned as
// (filename, document) pairs; emit_reproduction_suite writes them out.
inline std::vector<std::pair<std::string, Json>> reproduction_suite() {
  std::vector<std::pair<std::string, Json>> suite;
  auto heis = [](int i, int j) {
    return Json{{"kind", "heisenberg"}, {"sites", Json::array({i, j})},
                {"j", 1.0}};
  };
  auto zee = [](int i, int j) {
    return Json{{"kind", "zeeman"}, {"sites", Json::array({i, j})},
                {"epsilon", 1.0}};
  };

  suite.emplace_back(
      "01-heisenberg-conserves-total-spin.json",
      Json{{"schema", kConfigSchema},
           {"task", "check-symmetry"},
           {"system", Json{{"n_qubits", 3}}},
           {"controls", Json::array({heis(0, 1), heis(1, 2), heis(0, 2)})},
           {"conserved", Json::array({"Sx", "Sy", "Sz", "S_squared"})},
           {"seed", 0}});

  suite.emplace_back(
      "02-axial-symmetry.json",
      Json{{"schema", kConfigSchema},
           {"task", "check-symmetry"},
           {"system", Json{{"n_qubits", 2}}},
           {"controls",
            Json::array(
                {Json{{"kind", "xy"}, {"sites", Json::array({0, 1})},
                      {"j", 1.0}},
                 Json{{"kind", "xxz"}, {"sites", Json::array({0, 1})},
                      {"j", 1.0}, {"jz", 0.7}}})},
           {"conserved", Json::array({"Sz", "Sx"})},
           {"seed", 0}});

  // candidate order pins the certificate on Sz; Sx would certify with the
  // same norm
  suite.emplace_back(
      "03-cnot-obstruction.json",
      Json{{"schema", kConfigSchema},
           {"task", "certify-obstruction"},
           {"system", Json{{"n_qubits", 2}}},
           {"controls", Json::array({heis(0, 1)})},
           {"conserved", Json::array({"Sz", "Sx", "Sy"})},
           {"target",
            Json{{"name", "cnot"}, {"qubits", Json::array({0, 1})}}},
           {"seed", 0}});

  suite.emplace_back("04-four-qubit-singlet-sector.json",
                     Json{{"schema", kConfigSchema},
                          {"task", "decompose"},
                          {"system", Json{{"n_qubits", 4}}},
                          {"conserved", Json::array({"S_squared", "Sz"})},
                          {"seed", 0}});

  suite.emplace_back(
      "05-three-qubit-code-universality.json",
      Json{{"schema", kConfigSchema},
           {"task", "closure"},
           {"system", Json{{"n_qubits", 3}}},
           {"controls", Json::array({heis(0, 1), heis(1, 2), heis(0, 2)})},
           {"conserved", Json::array({"S_squared", "Sz"})},
           {"sector", Json::array({0.75, 0.5})},
           {"seed", 0}});

  suite.emplace_back(
      "06-two-qubit-code-logical-z.json",
      Json{{"schema", kConfigSchema},
           {"task", "synthesize"},
           {"system", Json{{"n_qubits", 2}}},
           {"controls", Json::array({zee(0, 1)})},
           {"conserved", Json::array({"Sz"})},
           {"code",
            Json{{"blocks",
                  Json::array({Json{{"provenance", "two_qubit"},
                                    {"sites", Json::array({0, 1})}}})}}},
           {"target", Json{{"name", "z"}}},
           {"synthesis", Json{{"length", 1}, {"restarts", 4},
                              {"pattern", Json::array({0})}}},
           {"seed", 0}});

  suite.emplace_back(
      "07-two-qubit-code-logical-x.json",
      Json{{"schema", kConfigSchema},
           {"task", "synthesize"},
           {"system", Json{{"n_qubits", 2}}},
           {"controls", Json::array({heis(0, 1)})},
           {"conserved", Json::array({"Sz", "S_squared"})},
           {"code",
            Json{{"blocks",
                  Json::array({Json{{"provenance", "two_qubit"},
                                    {"sites", Json::array({0, 1})}}})}}},
           {"target", Json{{"name", "x"}}},
           {"synthesis", Json{{"length", 1}, {"restarts", 4},
                              {"pattern", Json::array({0})}}},
           {"seed", 0}});

  suite.emplace_back(
      "08-desk-closure.json",
      Json{{"schema", kConfigSchema},
           {"task", "closure"},
           {"system", Json{{"n_qubits", 4}}},
           {"controls",
            Json::array({heis(0, 1), heis(2, 3), heis(1, 2), zee(0, 1),
                         zee(2, 3)})},
           {"conserved", Json::array({"Sz"})},
           {"sector", Json::array({0.0})},
           {"seed", 0}});

  suite.emplace_back(
      "09-encoded-cnot.json",
      Json{{"schema", kConfigSchema},
           {"task", "synthesize"},
           {"system", Json{{"n_qubits", 4}}},
           {"controls",
            Json::array({heis(0, 1), heis(2, 3), heis(1, 2), zee(0, 1),
                         zee(2, 3)})},
           {"conserved", Json::array({"Sz"})},
           {"code",
            Json{{"blocks",
                  Json::array({Json{{"provenance", "two_qubit"},
                                    {"sites", Json::array({0, 1})}},
                               Json{{"provenance", "two_qubit"},
                                    {"sites", Json::array({2, 3})}}})}}},
           {"target",
            Json{{"name", "cnot"}, {"qubits", Json::array({0, 1})}}},
           {"synthesis", Json{{"length", 20}, {"restarts", 32},
                              {"max_iters", 800}, {"tol_stop", 1e-10}}},
           {"seed", 0}});

  return suite;
}

inline std::vector<std::string> emit_reproduction_suite(
    const std::string& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> written;
  for (const auto& [name, doc] : reproduction_suite()) {
    std::filesystem::path p = std::filesystem::path(dir) / name;
    std::ofstream out(p);
    if (!out)
      throw ValidationError("E_FILE", "emit", "cannot write " + p.string());
    out << doc.dump(2) << "\n";
    written.push_back(p.string());
  }
  return written;
}

}  // namespace symgate
