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

#include <CLI11.hpp>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "symgate/symgate.hpp"

namespace {

// 0 success, 2 validation, 3 file I/O, 4 dimension mismatch
int exit_code_for(const std::string& code) {
  if (code == "E_FILE") return 3;
  if (code == "E_DIM") return 4;
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"symgate: conservation laws, symmetry sectors and encoded "
               "gate synthesis for spin registers"};
  app.set_version_flag("--version", std::string(symgate::kVersion));

  std::string config_path;
  std::string out_path;
  std::string emit_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  double tol = 0.0;
  bool tol_set = false;
  bool quiet = false;

  app.add_option("--config", config_path, "experiment config (JSON)");
  app.add_option("--out", out_path, "report path (default report.json)");
  auto* seed_opt =
      app.add_option("--seed", seed, "override the config seed");
  auto* tol_opt = app.add_option(
      "--tol", tol, "override the default tolerance (tolerances.default)");
  app.add_flag("--quiet", quiet, "suppress the stdout summary");
  app.add_option("--emit-suite", emit_dir,
                 "write the bundled reproduction configs to a directory "
                 "and exit");

  CLI11_PARSE(app, argc, argv);
  seed_set = seed_opt->count() > 0;
  tol_set = tol_opt->count() > 0;

  try {
    if (!emit_dir.empty()) {
      auto written = symgate::emit_reproduction_suite(emit_dir);
      if (!quiet)
        for (const auto& p : written) std::cout << p << "\n";
      return 0;
    }
    if (config_path.empty()) {
      std::cerr << "E_SCHEMA [config]: --config is required (or use "
                   "--emit-suite)\n";
      return 2;
    }

    symgate::Json doc = symgate::load_json_file(config_path);
    std::string base_dir =
        std::filesystem::path(config_path).parent_path().string();
    if (base_dir.empty()) base_dir = ".";
    if (seed_set) doc["seed"] = seed;
    if (tol_set) doc["tolerances"]["default"] = tol;
    symgate::ExperimentConfig cfg = symgate::parse_config(doc, base_dir);

    symgate::Json report = symgate::run(cfg);

    std::string dest = !out_path.empty()
                           ? out_path
                           : (!cfg.out.empty() ? cfg.out : "report.json");
    {
      std::ofstream out(dest);
      if (!out) {
        std::cerr << "E_FILE [out]: cannot write " << dest << "\n";
        return 3;
      }
      out << report.dump(2) << "\n";
    }
    if (!cfg.csv_out.empty() && report["results"].contains("csv")) {
      std::ofstream csv(cfg.csv_out);
      if (!csv) {
        std::cerr << "E_FILE [csv_out]: cannot write " << cfg.csv_out << "\n";
        return 3;
      }
      csv << report["results"]["csv"].get<std::string>();
    }
    if (!quiet) {
      std::cout << symgate::summarize(report);
      std::cout << "report written to " << dest << "\n";
    }
    return 0;
  } catch (const symgate::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const symgate::DimensionError& e) {
    std::cerr << "E_DIM: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
