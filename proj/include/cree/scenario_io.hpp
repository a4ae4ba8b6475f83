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

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cree/solver.hpp"

namespace cree {

/// Flat, file-level view of a scenario. Power limits are in dB
/// (linear = 10^(db/10)); every key has a default.
struct ScenarioParams {
  double n0 = 0.1;
  double sigma_s2 = 1.0;
  double prior_idle = 0.4;
  int frame_len = 100;  // key T
  int sense_len = 10;   // key tau
  double p_c = 0.1;
  double p_d = 1.0;
  double p_f = 0.0;
  std::string csi = "perfect";
  double sigma_h2 = 0.0;
  double sigma_g2 = 0.0;
  std::string regime = "avg_avg";
  double p_avg_db = 0.0;
  double q_avg_db = -8.0;
  double p_pk_db = -4.0;
  double q_pk_db = -10.0;
  double xi = 0.1;
  std::int64_t mc_count = 100000;
  std::uint64_t seed = 1;
  double eps = 1e-6;
  double delta = 1e-6;
  double step = 0.1;
  int max_outer = 50;
  int max_inner = 2000;
  int subgradient_iters = 10;

  /// Sets one key from its text form. Throws kUnknownKey for an unknown key
  /// and kParseError for a malformed value.
  void set(std::string_view key, std::string_view value);
  /// Text form of one key's current value.
  std::string get(std::string_view key) const;

  Scenario scenario() const;
  SolverConfig config() const;

  static std::span<const std::string_view> keys();
  /// Keys that take a number and can be swept.
  static bool is_numeric(std::string_view key);
};

double db_to_linear(double db);

/// Parses `key = value` lines; `#` starts a comment. Errors carry the line
/// number.
ScenarioParams parse_scenario(std::string_view text);
ScenarioParams load_scenario(const std::string& path);

/// Shortest round-trip decimal form, independent of the C locale.
std::string format_number(double v);

/// key=value lines, one field per line.
std::string format_report(const SolveReport& report);

inline constexpr std::string_view kSweepHeader =
    "sweep_value,ee,rate,p0_avg,p1_avg,p_tot,lambda,nu,outer_iters,status";

std::string sweep_row(double sweep_value, const SolveReport& report);

/// One solve per value with `key` overridden. Rows are in value order. A
/// solve that fails to converge yields a row with status maxiter.
std::string run_sweep(const ScenarioParams& base, std::string_view key,
                      std::span<const double> values);

}  // namespace cree
