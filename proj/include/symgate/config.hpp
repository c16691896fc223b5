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

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "symgate/serialize.hpp"
#include "symgate/spin.hpp"
#include "symgate/synthesis.hpp"
#include "symgate/version.hpp"

namespace symgate {

struct ToleranceSet {
  double default_tol = 1e-10;
  double conserved = 1e-12;
  double cluster = 1e-8;
  double closure = 1e-8;
  double leakage = 1e-8;
};

// A conserved-operator request: one of the built-in labels, or a custom
// Hermitian matrix (inlined at parse time even when file-referenced, so the
// config echo is self-contained).
struct ConservedSpec {
  std::string label;
  bool custom = false;
  SquareMatrix matrix;  // custom only
};

struct CodeBlockSpec {
  std::string provenance;  // two_qubit, three_qubit, four_qubit, custom
  std::vector<int> sites;
  std::optional<Eigen::MatrixXcd> isometry;  // custom only
};

struct TargetSpec {
  std::string name;         // identity, x, y, z, cnot, swap; empty if matrix
  std::vector<int> qubits;  // logical for synthesize/verify, physical for
                            // certify-obstruction
  std::optional<SquareMatrix> matrix;
};

struct ExperimentConfig {
  std::string task;
  int n_qubits = 0;
  std::vector<HamiltonianTerm> controls;
  std::vector<ConservedSpec> conserved;
  std::vector<CodeBlockSpec> code_blocks;
  std::optional<TargetSpec> target;
  std::optional<std::vector<double>> sector;
  std::optional<PulseSequence> sequence;
  SynthesisOptions synth{};
  std::vector<int> sweep_lengths;
  std::uint64_t seed = 0;
  ToleranceSet tol;
  std::string out;
  std::string csv_out;
  bool include_isometries = false;
  Json echo;  // normalized config: defaults explicit, matrices inlined
};

namespace detail {

inline void check_keys(const Json& obj,
                       std::initializer_list<const char*> allowed,
                       const std::string& path) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        known = true;
        break;
      }
    if (!known)
      throw ValidationError("E_SCHEMA", path + "." + it.key(),
                            "unknown key");
  }
}

inline const Json& need(const Json& obj, const char* key,
                        const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw ValidationError("E_SCHEMA", path + "." + key, "missing key");
  return *it;
}

inline double need_number(const Json& obj, const char* key,
                          const std::string& path) {
  const Json& v = need(obj, key, path);
  if (!v.is_number())
    throw ValidationError("E_SCHEMA", path + "." + key, "expected a number");
  return v.get<double>();
}

inline std::vector<int> int_list(const Json& v, const std::string& path) {
  if (!v.is_array())
    throw ValidationError("E_SCHEMA", path, "expected an array of integers");
  std::vector<int> out;
  for (const auto& e : v) {
    if (!e.is_number_integer())
      throw ValidationError("E_SCHEMA", path, "expected an array of integers");
    out.push_back(e.get<int>());
  }
  return out;
}

// Inline a matrix given either directly or as a file reference.
inline Eigen::MatrixXcd matrix_field(const Json& obj, const std::string& path,
                                     const std::string& base_dir) {
  bool has_inline = obj.contains("matrix");
  bool has_file = obj.contains("matrix_file");
  if (has_inline == has_file)
    throw ValidationError("E_SCHEMA", path,
                          "exactly one of matrix, matrix_file required");
  if (has_inline) return matrix_from_json(obj["matrix"], path + ".matrix");
  std::filesystem::path p(obj["matrix_file"].get<std::string>());
  if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
  std::ifstream in(p);
  if (!in)
    throw ValidationError("E_FILE", path + ".matrix_file",
                          "cannot open " + p.string());
  Json content;
  try {
    in >> content;
  } catch (const std::exception& e) {
    throw ValidationError("E_SCHEMA", path + ".matrix_file",
                          std::string("invalid JSON: ") + e.what());
  }
  return matrix_from_json(content, path + ".matrix_file");
}

inline HamiltonianTerm parse_term(const Json& j, const std::string& path) {
  if (!j.is_object())
    throw ValidationError("E_SCHEMA", path, "control must be an object");
  check_keys(j, {"kind", "sites", "j", "jz", "epsilon", "axes", "coefficient"},
             path);
  std::string kind = need(j, "kind", path).get<std::string>();
  std::vector<int> sites = int_list(need(j, "sites", path), path + ".sites");
  if (kind == "heisenberg" || kind == "xy") {
    if (sites.size() != 2)
      throw ValidationError("E_SITES", path + ".sites", "needs 2 sites");
    double jj = need_number(j, "j", path);
    return kind == "xy" ? xy_term(sites[0], sites[1], jj)
                        : heisenberg_term(sites[0], sites[1], jj);
  }
  if (kind == "xxz") {
    if (sites.size() != 2)
      throw ValidationError("E_SITES", path + ".sites", "needs 2 sites");
    return xxz_term(sites[0], sites[1], need_number(j, "j", path),
                    need_number(j, "jz", path));
  }
  if (kind == "zeeman") {
    if (sites.size() != 2)
      throw ValidationError("E_SITES", path + ".sites", "needs 2 sites");
    return zeeman_term(sites[0], sites[1], need_number(j, "epsilon", path));
  }
  if (kind == "pauli_string") {
    const Json& axes_j = need(j, "axes", path);
    std::vector<Axis> axes;
    for (const auto& a : axes_j) {
      std::string s = a.get<std::string>();
      if (s == "X")
        axes.push_back(Axis::X);
      else if (s == "Y")
        axes.push_back(Axis::Y);
      else if (s == "Z")
        axes.push_back(Axis::Z);
      else
        throw ValidationError("E_SCHEMA", path + ".axes",
                              "axis must be X, Y or Z");
    }
    return pauli_string_term(sites, axes, need_number(j, "coefficient", path));
  }
  throw ValidationError("E_SCHEMA", path + ".kind", "unknown kind " + kind);
}

inline Json term_to_json(const HamiltonianTerm& t) {
  Json j{{"kind", term_kind_name(t.kind)}, {"sites", t.sites}};
  switch (t.kind) {
    case TermKind::Heisenberg:
    case TermKind::XY:
      j["j"] = t.coupling_j;
      break;
    case TermKind::XXZ:
      j["j"] = t.coupling_j;
      j["jz"] = t.coupling_jz;
      break;
    case TermKind::Zeeman:
      j["epsilon"] = t.epsilon;
      break;
    case TermKind::PauliString: {
      Json axes = Json::array();
      for (Axis a : t.axes) axes.push_back(axis_name(a));
      j["axes"] = std::move(axes);
      j["coefficient"] = t.coefficient;
      break;
    }
  }
  return j;
}

}  // namespace detail

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw ValidationError("E_FILE", "config", "cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ValidationError("E_SCHEMA", "config",
                          std::string("invalid JSON: ") + e.what());
  }
  return j;
}

// Strict parse: unknown keys are errors, every default is materialized into
// the echo, and file-referenced matrices are inlined so the echo re-runs
// standalone.
inline ExperimentConfig parse_config(const Json& j,
                                     const std::string& base_dir = ".") {
  if (!j.is_object())
    throw ValidationError("E_SCHEMA", "config", "config must be an object");
  detail::check_keys(
      j,
      {"schema", "task", "system", "controls", "conserved", "code", "target",
       "sector", "sequence", "synthesis", "sweep_lengths", "seed",
       "tolerances", "out", "csv_out", "include_isometries"},
      "config");

  ExperimentConfig cfg;
  if (j.contains("schema") &&
      j["schema"].get<std::string>() != kConfigSchema)
    throw ValidationError("E_SCHEMA", "config.schema",
                          "expected " + std::string(kConfigSchema));

  cfg.task = detail::need(j, "task", "config").get<std::string>();
  const char* tasks[] = {"check-symmetry", "decompose", "certify-obstruction",
                         "closure", "synthesize", "verify"};
  bool task_ok = false;
  for (const char* t : tasks) task_ok |= cfg.task == t;
  if (!task_ok)
    throw ValidationError("E_SCHEMA", "config.task",
                          "unknown task " + cfg.task);

  const Json& system = detail::need(j, "system", "config");
  detail::check_keys(system, {"n_qubits"}, "config.system");
  const Json& nq = detail::need(system, "n_qubits", "config.system");
  if (!nq.is_number_integer())
    throw ValidationError("E_SCHEMA", "config.system.n_qubits",
                          "expected an integer");
  cfg.n_qubits = nq.get<int>();
  SpinSystem sys(cfg.n_qubits);  // throws E_RANGE when out of range

  if (j.contains("controls")) {
    const Json& cs = j["controls"];
    if (!cs.is_array())
      throw ValidationError("E_SCHEMA", "config.controls",
                            "expected an array");
    for (size_t i = 0; i < cs.size(); ++i) {
      std::string path = "config.controls[" + std::to_string(i) + "]";
      HamiltonianTerm t = detail::parse_term(cs[i], path);
      try {
        validate_term(sys, t);
      } catch (const ValidationError& e) {
        throw ValidationError(e.code(), path + "." + e.field(), e.message());
      }
      cfg.controls.push_back(std::move(t));
    }
  }

  if (j.contains("conserved")) {
    const Json& qs = j["conserved"];
    if (!qs.is_array())
      throw ValidationError("E_SCHEMA", "config.conserved",
                            "expected an array");
    for (size_t i = 0; i < qs.size(); ++i) {
      std::string path = "config.conserved[" + std::to_string(i) + "]";
      ConservedSpec spec;
      if (qs[i].is_string()) {
        spec.label = qs[i].get<std::string>();
        if (spec.label != "Sx" && spec.label != "Sy" && spec.label != "Sz" &&
            spec.label != "S_squared")
          throw ValidationError("E_SCHEMA", path,
                                "unknown label " + spec.label);
      } else if (qs[i].is_object()) {
        detail::check_keys(qs[i], {"name", "matrix", "matrix_file"}, path);
        spec.custom = true;
        spec.label = detail::need(qs[i], "name", path).get<std::string>();
        spec.matrix = detail::matrix_field(qs[i], path, base_dir);
        if (spec.matrix.rows() != sys.dim || spec.matrix.cols() != sys.dim)
          throw ValidationError(
              "E_DIM", path,
              "matrix is " + std::to_string(spec.matrix.rows()) + "x" +
                  std::to_string(spec.matrix.cols()) + ", system dim is " +
                  std::to_string(sys.dim));
        auto hc = hermitian_check(spec.matrix, 1e-12);
        if (!hc.is_hermitian)
          throw ValidationError("E_HERMITIAN", path,
                                "custom conserved operator not Hermitian, "
                                "deviation " +
                                    std::to_string(hc.deviation));
      } else {
        throw ValidationError("E_SCHEMA", path,
                              "expected a label or an object");
      }
      cfg.conserved.push_back(std::move(spec));
    }
  }

  if (j.contains("code")) {
    const Json& code = j["code"];
    detail::check_keys(code, {"blocks"}, "config.code");
    const Json& blocks = detail::need(code, "blocks", "config.code");
    if (!blocks.is_array() || blocks.empty())
      throw ValidationError("E_SCHEMA", "config.code.blocks",
                            "expected a nonempty array");
    std::vector<int> seen(cfg.n_qubits, 0);
    int covered = 0;
    for (size_t i = 0; i < blocks.size(); ++i) {
      std::string path = "config.code.blocks[" + std::to_string(i) + "]";
      detail::check_keys(blocks[i],
                         {"provenance", "sites", "isometry", "isometry_file"},
                         path);
      CodeBlockSpec blk;
      blk.provenance =
          detail::need(blocks[i], "provenance", path).get<std::string>();
      blk.sites = detail::int_list(detail::need(blocks[i], "sites", path),
                                   path + ".sites");
      size_t expected = 0;
      if (blk.provenance == "two_qubit")
        expected = 2;
      else if (blk.provenance == "three_qubit")
        expected = 3;
      else if (blk.provenance == "four_qubit")
        expected = 4;
      else if (blk.provenance == "custom")
        expected = blk.sites.size();
      else
        throw ValidationError("E_SCHEMA", path + ".provenance",
                              "unknown provenance " + blk.provenance);
      if (blk.sites.size() != expected || blk.sites.empty())
        throw ValidationError("E_SITES", path + ".sites",
                              "wrong site count for " + blk.provenance);
      if (blk.provenance == "custom") {
        Json probe = blocks[i];
        probe.erase("provenance");
        probe.erase("sites");
        if (probe.contains("isometry_file")) {
          probe["matrix_file"] = probe["isometry_file"];
          probe.erase("isometry_file");
        }
        if (probe.contains("isometry")) {
          probe["matrix"] = probe["isometry"];
          probe.erase("isometry");
        }
        blk.isometry = detail::matrix_field(probe, path, base_dir);
        if (blk.isometry->rows() != (Eigen::Index(1) << blk.sites.size()))
          throw ValidationError("E_DIM", path,
                                "isometry rows do not match 2^sites");
      }
      for (int s : blk.sites) {
        if (s < 0 || s >= cfg.n_qubits)
          throw ValidationError("E_RANGE", path + ".sites",
                                "site " + std::to_string(s) +
                                    " out of range");
        if (seen[s]++)
          throw ValidationError("E_OVERLAP", path + ".sites",
                                "site " + std::to_string(s) +
                                    " claimed by two blocks");
        ++covered;
      }
      cfg.code_blocks.push_back(std::move(blk));
    }
    if (covered != cfg.n_qubits)
      throw ValidationError("E_COVERAGE", "config.code.blocks",
                            "blocks cover " + std::to_string(covered) +
                                " of " + std::to_string(cfg.n_qubits) +
                                " qubits");
  }

  if (j.contains("target")) {
    const Json& tj = j["target"];
    detail::check_keys(tj, {"name", "qubits", "matrix", "matrix_file"},
                       "config.target");
    TargetSpec spec;
    if (tj.contains("name")) {
      if (tj.contains("matrix") || tj.contains("matrix_file"))
        throw ValidationError("E_SCHEMA", "config.target",
                              "give a name or a matrix, not both");
      spec.name = tj["name"].get<std::string>();
      const char* names[] = {"identity", "x", "y", "z", "cnot", "swap"};
      bool ok = false;
      for (const char* n : names) ok |= spec.name == n;
      if (!ok)
        throw ValidationError("E_SCHEMA", "config.target.name",
                              "unknown gate " + spec.name);
      if (tj.contains("qubits"))
        spec.qubits =
            detail::int_list(tj["qubits"], "config.target.qubits");
    } else {
      spec.matrix = detail::matrix_field(tj, "config.target", base_dir);
    }
    cfg.target = std::move(spec);
  }

  if (j.contains("sector")) {
    const Json& sec = j["sector"];
    if (!sec.is_array() || sec.empty())
      throw ValidationError("E_SCHEMA", "config.sector",
                            "expected a nonempty array of eigenvalues");
    std::vector<double> vals;
    for (const auto& v : sec) {
      if (!v.is_number())
        throw ValidationError("E_SCHEMA", "config.sector",
                              "expected numbers");
      vals.push_back(v.get<double>());
    }
    cfg.sector = std::move(vals);
  }

  if (j.contains("sequence")) {
    const Json& sj = j["sequence"];
    detail::check_keys(sj, {"pulses"}, "config.sequence");
    const Json& pulses = detail::need(sj, "pulses", "config.sequence");
    if (!pulses.is_array())
      throw ValidationError("E_SCHEMA", "config.sequence.pulses",
                            "expected an array");
    PulseSequence seq;
    for (size_t i = 0; i < pulses.size(); ++i) {
      std::string path = "config.sequence.pulses[" + std::to_string(i) + "]";
      detail::check_keys(pulses[i], {"control", "duration"}, path);
      const Json& c = detail::need(pulses[i], "control", path);
      if (!c.is_number_integer())
        throw ValidationError("E_SCHEMA", path + ".control",
                              "expected an integer");
      seq.pulses.push_back(
          {c.get<int>(), detail::need_number(pulses[i], "duration", path)});
    }
    cfg.sequence = std::move(seq);
  }

  if (j.contains("synthesis")) {
    const Json& sj = j["synthesis"];
    detail::check_keys(sj,
                       {"length", "restarts", "max_iters", "leakage_weight",
                        "tol_stop", "pattern", "allow_negative"},
                       "config.synthesis");
    if (sj.contains("length")) cfg.synth.length = sj["length"].get<int>();
    if (sj.contains("restarts"))
      cfg.synth.restarts = sj["restarts"].get<int>();
    if (sj.contains("max_iters"))
      cfg.synth.max_iters = sj["max_iters"].get<int>();
    if (sj.contains("leakage_weight"))
      cfg.synth.leakage_weight = sj["leakage_weight"].get<double>();
    if (sj.contains("tol_stop"))
      cfg.synth.tol_stop = sj["tol_stop"].get<double>();
    if (sj.contains("pattern"))
      cfg.synth.pattern =
          detail::int_list(sj["pattern"], "config.synthesis.pattern");
    if (sj.contains("allow_negative"))
      cfg.synth.allow_negative = sj["allow_negative"].get<bool>();
  }

  if (j.contains("sweep_lengths"))
    cfg.sweep_lengths =
        detail::int_list(j["sweep_lengths"], "config.sweep_lengths");

  if (j.contains("seed")) {
    if (!j["seed"].is_number_integer())
      throw ValidationError("E_SCHEMA", "config.seed",
                            "expected an integer");
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  cfg.synth.seed = cfg.seed;

  if (j.contains("tolerances")) {
    const Json& tj = j["tolerances"];
    detail::check_keys(tj,
                       {"default", "conserved", "cluster", "closure",
                        "leakage"},
                       "config.tolerances");
    if (tj.contains("default"))
      cfg.tol.default_tol = tj["default"].get<double>();
    if (tj.contains("conserved"))
      cfg.tol.conserved = tj["conserved"].get<double>();
    if (tj.contains("cluster")) cfg.tol.cluster = tj["cluster"].get<double>();
    if (tj.contains("closure")) cfg.tol.closure = tj["closure"].get<double>();
    if (tj.contains("leakage")) cfg.tol.leakage = tj["leakage"].get<double>();
  }

  if (j.contains("out")) cfg.out = j["out"].get<std::string>();
  if (j.contains("csv_out")) cfg.csv_out = j["csv_out"].get<std::string>();
  if (j.contains("include_isometries"))
    cfg.include_isometries = j["include_isometries"].get<bool>();

  // normalized echo: same schema, defaults explicit, matrices inlined
  Json echo;
  echo["schema"] = kConfigSchema;
  echo["task"] = cfg.task;
  echo["system"] = Json{{"n_qubits", cfg.n_qubits}};
  if (!cfg.controls.empty()) {
    Json arr = Json::array();
    for (const auto& t : cfg.controls) arr.push_back(detail::term_to_json(t));
    echo["controls"] = std::move(arr);
  }
  if (!cfg.conserved.empty()) {
    Json arr = Json::array();
    for (const auto& q : cfg.conserved) {
      if (q.custom)
        arr.push_back(
            Json{{"name", q.label}, {"matrix", matrix_to_json(q.matrix)}});
      else
        arr.push_back(q.label);
    }
    echo["conserved"] = std::move(arr);
  }
  if (!cfg.code_blocks.empty()) {
    Json arr = Json::array();
    for (const auto& b : cfg.code_blocks) {
      Json bj{{"provenance", b.provenance}, {"sites", b.sites}};
      if (b.isometry) bj["isometry"] = matrix_to_json(*b.isometry);
      arr.push_back(std::move(bj));
    }
    echo["code"] = Json{{"blocks", std::move(arr)}};
  }
  if (cfg.target) {
    Json tj;
    if (cfg.target->matrix) {
      tj["matrix"] = matrix_to_json(*cfg.target->matrix);
    } else {
      tj["name"] = cfg.target->name;
      if (!cfg.target->qubits.empty()) tj["qubits"] = cfg.target->qubits;
    }
    echo["target"] = std::move(tj);
  }
  if (cfg.sector) echo["sector"] = *cfg.sector;
  if (cfg.sequence) {
    Json pulses = Json::array();
    for (const auto& p : cfg.sequence->pulses)
      pulses.push_back(Json{{"control", p.control}, {"duration", p.duration}});
    echo["sequence"] = Json{{"pulses", std::move(pulses)}};
  }
  if (cfg.task == "synthesize") {
    Json sj{{"length", cfg.synth.length},
            {"restarts", cfg.synth.restarts},
            {"max_iters", cfg.synth.max_iters},
            {"leakage_weight", cfg.synth.leakage_weight},
            {"tol_stop", cfg.synth.tol_stop},
            {"allow_negative", cfg.synth.allow_negative}};
    if (!cfg.synth.pattern.empty()) sj["pattern"] = cfg.synth.pattern;
    echo["synthesis"] = std::move(sj);
    if (!cfg.sweep_lengths.empty()) echo["sweep_lengths"] = cfg.sweep_lengths;
  }
  echo["seed"] = cfg.seed;
  echo["tolerances"] = Json{{"default", cfg.tol.default_tol},
                            {"conserved", cfg.tol.conserved},
                            {"cluster", cfg.tol.cluster},
                            {"closure", cfg.tol.closure},
                            {"leakage", cfg.tol.leakage}};
  if (!cfg.out.empty()) echo["out"] = cfg.out;
  if (!cfg.csv_out.empty()) echo["csv_out"] = cfg.csv_out;
  echo["include_isometries"] = cfg.include_isometries;
  cfg.echo = std::move(echo);
  return cfg;
}

}  // namespace symgate
