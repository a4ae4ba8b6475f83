// Copyright 2026 The cree Authors
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

// Command-line front end. Talks to the library only through the C API.

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cree/cree.h"

namespace {

int report_error(cree_status status) {
  std::fprintf(stderr, "error (%s): %s\n", cree_status_name(status),
               cree_last_error());
  return 2;
}

int cmd_solve(const std::string& path) {
  cree_scenario* sc = nullptr;
  cree_status st = cree_scenario_load(path.c_str(), &sc);
  if (st != CREE_OK) return report_error(st);
  cree_report* rep = nullptr;
  st = cree_solve(sc, &rep);
  cree_scenario_free(sc);
  if (st != CREE_OK) return report_error(st);
  char* text = nullptr;
  st = cree_report_format(rep, &text);
  const int ok = cree_report_ok(rep);
  cree_report_free(rep);
  if (st != CREE_OK) return report_error(st);
  std::fputs(text, stdout);
  cree_string_free(text);
  return ok ? 0 : 1;
}

int cmd_sweep(const std::string& path, const std::string& key,
              const std::vector<double>& values) {
  cree_scenario* sc = nullptr;
  cree_status st = cree_scenario_load(path.c_str(), &sc);
  if (st != CREE_OK) return report_error(st);
  char* csv = nullptr;
  st = cree_sweep(sc, key.c_str(), values.data(), values.size(), &csv);
  cree_scenario_free(sc);
  if (st != CREE_OK) return report_error(st);
  std::fputs(csv, stdout);
  cree_string_free(csv);
  return 0;
}

int cmd_figure(int id, const std::string& out, std::uint64_t seed,
               std::int64_t mc_count) {
  const cree_status st = cree_figure(id, out.c_str(), seed, mc_count);
  if (st != CREE_OK) return report_error(st);
  std::printf("figure %d written to %s\n", id, out.c_str());
  return 0;
}

int cmd_validate(std::uint64_t seed, double eps) {
  char* text = nullptr;
  int all_pass = 0;
  const cree_status st = cree_validate(seed, eps, &text, &all_pass);
  if (st != CREE_OK) return report_error(st);
  std::fputs(text, stdout);
  cree_string_free(text);
  std::printf("%s\n", all_pass ? "all checks passed" : "some checks failed");
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-efficient power allocation for sensing-based spectrum sharing"};
  app.require_subcommand(1);

  std::string solve_path;
  auto* solve = app.add_subcommand("solve", "Solve one scenario file");
  solve->add_option("file", solve_path, "Scenario file (key = value)")
      ->required();

  std::string sweep_path;
  std::string sweep_key;
  std::vector<double> sweep_values;
  auto* sweep = app.add_subcommand("sweep", "Solve once per value of one key");
  sweep->add_option("file", sweep_path, "Scenario file")->required();
  sweep->add_option("--key", sweep_key, "Numeric scenario key")->required();
  sweep->add_option("--values", sweep_values, "Comma-separated values")
      ->required()
      ->delimiter(',');

  int figure_id = 0;
  std::string figure_out;
  std::uint64_t figure_seed = 1;
  std::int64_t figure_mc = 0;
  auto* figure = app.add_subcommand("figure", "Reproduce a figure preset as CSV");
  figure->add_option("id", figure_id, "Figure id")->required()->check(
      CLI::Range(2, 10));
  figure->add_option("--out", figure_out, "Output directory")->required();
  figure->add_option("--seed", figure_seed, "Sample seed");
  figure->add_option("--mc-count", figure_mc,
                     "Sample count override (0 keeps the preset's)");

  std::uint64_t validate_seed = 1;
  double validate_eps = 1e-6;
  auto* validate = app.add_subcommand("validate", "Run the oracle checks");
  validate->add_option("--seed", validate_seed, "Seed for random instances");
  validate->add_option("--eps", validate_eps,
                       "Dinkelbach tolerance handed to the solver under test");

  CLI11_PARSE(app, argc, argv);

  if (*solve) return cmd_solve(solve_path);
  if (*sweep) return cmd_sweep(sweep_path, sweep_key, sweep_values);
  if (*figure) return cmd_figure(figure_id, figure_out, figure_seed, figure_mc);
  if (*validate) return cmd_validate(validate_seed, validate_eps);
  return 2;
}
