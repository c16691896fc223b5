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

#include <json.hpp>
#include <string>

#include "symgate/encoding.hpp"
#include "symgate/lie.hpp"
#include "symgate/symmetry.hpp"
#include "symgate/synthesis.hpp"

namespace symgate {

using Json = nlohmann::ordered_json;

// Matrices travel as nested arrays of [re, im] pairs.
inline Json matrix_to_json(const Eigen::MatrixXcd& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Eigen::MatrixXcd matrix_from_json(const Json& j,
                                         const std::string& field) {
  if (!j.is_array() || j.empty())
    throw ValidationError("E_SCHEMA", field,
                          "matrix must be a nonempty array of rows");
  const size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty())
    throw ValidationError("E_SCHEMA", field, "matrix rows must be arrays");
  const size_t cols = j[0].size();
  Eigen::MatrixXcd m(rows, cols);
  for (size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols)
      throw ValidationError("E_DIM", field, "ragged matrix rows");
    for (size_t c = 0; c < cols; ++c) {
      const Json& e = j[r][c];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() ||
          !e[1].is_number())
        throw ValidationError("E_SCHEMA", field,
                              "matrix entries must be [re, im] pairs");
      m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

inline Json to_json(const ConservedReport& r) {
  return Json{{"label", r.label},
              {"conserved", r.conserved},
              {"max_commutator_norm", r.max_commutator_norm}};
}

inline Json to_json(const ObstructionCertificate& c) {
  return Json{{"conserved_label", c.conserved_label},
              {"control_commutator_norms", c.control_commutator_norms},
              {"target_commutator_norm", c.target_commutator_norm},
              {"verdict", c.verdict}};
}

inline Json to_json(const SymmetrySector& s, bool with_isometry) {
  Json j{{"eigenvalues", s.eigenvalues}, {"dimension", s.dimension}};
  if (with_isometry) j["isometry"] = matrix_to_json(s.isometry);
  return j;
}

inline Json to_json(const UniversalityVerdict& v) {
  return Json{{"closure_dim", v.closure_dim},
              {"full_unitary_dim", v.full_unitary_dim},
              {"full_special_dim", v.full_special_dim},
              {"verdict", universality_name(v.verdict)},
              {"trace_component_present", v.trace_component_present},
              {"generation_depth", v.generation_depth},
              {"closed", v.closed}};
}

inline Json to_json(const LogicalCode& c, bool with_isometry) {
  Json j{{"n_physical", c.n_physical},
         {"k_logical", c.k_logical},
         {"codeword_labels", c.codeword_labels},
         {"provenance", c.provenance},
         {"sites", c.sites},
         // basis convention inside degenerate sectors; see encoding docs
         {"gauge", "heisenberg01_ascending_first_amplitude_positive"}};
  if (with_isometry) j["isometry"] = matrix_to_json(c.isometry);
  return j;
}

inline Json to_json(const LeakageReport& r) {
  Json j{{"leakage_norm", r.leakage_norm}};
  if (r.subspace_fidelity) j["subspace_fidelity"] = *r.subspace_fidelity;
  return j;
}

inline Json to_json(const SynthesisReport& r) {
  Json pulses = Json::array();
  for (size_t k = 0; k < r.sequence.pulses.size(); ++k) {
    Json p{{"control", r.sequence.pulses[k].control},
           {"duration", r.sequence.pulses[k].duration}};
    if (k < r.durations_mod_period.size() && r.durations_mod_period[k])
      p["duration_mod_period"] = *r.durations_mod_period[k];
    pulses.push_back(std::move(p));
  }
  return Json{{"best_infidelity", r.best_infidelity},
              {"leakage_norm", r.leakage_norm},
              {"objective_value", r.objective_value},
              {"iterations", r.iterations},
              {"restarts_used", r.restarts_used},
              {"sequence", Json{{"pulses", std::move(pulses)}}},
              {"symmetry_audit", r.symmetry_audit},
              // the objective demands exactness on the code block only
              // (up to global phase); action on the complement is free
              {"objective_convention", "code_block_up_to_global_phase"}};
}

// Plain-text pulse table for humans; the JSON stays authoritative.
inline std::string pulse_table(const Json& report) {
  const Json& pulses = report["sequence"]["pulses"];
  bool any_period = false;
  for (const auto& p : pulses) any_period |= p.contains("duration_mod_period");
  std::string out =
      any_period ? "idx control duration mod_period\n" : "idx control duration\n";
  char buf[128];
  size_t k = 0;
  for (const auto& p : pulses) {
    std::snprintf(buf, sizeof(buf), "%3zu %6d %+.12f", k++,
                  p["control"].get<int>(), p["duration"].get<double>());
    out += buf;
    if (any_period) {
      if (p.contains("duration_mod_period"))
        std::snprintf(buf, sizeof(buf), " %.12f",
                      p["duration_mod_period"].get<double>());
      else
        std::snprintf(buf, sizeof(buf), " -");
      out += buf;
    }
    out += "\n";
  }
  return out;
}

inline std::string pulse_table(const SynthesisReport& r) {
  return pulse_table(to_json(r));
}

}  // namespace symgate
