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

#include <sstream>
#include <string>
#include <vector>

#include "cree/error.hpp"
#include "cree/figures.hpp"
#include "cree/scenario_io.hpp"
#include "doctest.h"

using namespace cree;

namespace {

std::vector<std::vector<std::string>> read_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::vector<double> column(const std::string& csv, std::size_t index) {
  std::vector<double> out;
  const auto rows = read_csv(csv);
  for (std::size_t i = 1; i < rows.size(); ++i) out.push_back(std::stod(rows[i][index]));
  return out;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kInvalidArgument;
}

ScenarioParams quick() {
  ScenarioParams p;
  p.p_d = 0.8;
  p.p_f = 0.1;
  p.q_avg_db = -25.0;
  p.mc_count = 3000;
  return p;
}

}  // namespace

TEST_CASE("decibel conversion") {
  CHECK(db_to_linear(0.0) == 1.0);
  CHECK(db_to_linear(10.0) == doctest::Approx(10.0));
  CHECK(db_to_linear(-4.0) == doctest::Approx(0.3981071705534972));
}

TEST_CASE("parsing keys, comments and blank lines") {
  const ScenarioParams p = parse_scenario(
      "# comment\n\n  p_d = 0.9  \np_f=0.05 # trailing\ncsi = imp_both\nsigma_h2 = 0.2\n"
      "sigma_g2 = 0.1\nregime = peak_avg\nT = 200\nmc_count = 123\n");
  CHECK(p.p_d == 0.9);
  CHECK(p.p_f == 0.05);
  CHECK(p.csi == "imp_both");
  CHECK(p.frame_len == 200);
  CHECK(p.mc_count == 123);
  const Scenario sc = p.scenario();
  CHECK(std::holds_alternative<ImperfectBoth>(sc.csi));
  CHECK(std::holds_alternative<PeakTxAvgInt>(sc.regime));
  CHECK(std::get<PeakTxAvgInt>(sc.regime).p_pk0 == doctest::Approx(db_to_linear(-4.0)));
  CHECK(p.get("p_d") == "0.9");
}

TEST_CASE("parse errors carry the line number") {
  try {
    parse_scenario("p_d = 0.9\n\n# x\np_f = zero\n");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kParseError);
    CHECK(std::string(e.what()).find("line 4") != std::string::npos);
  }
  CHECK(code_of([] { parse_scenario("nope = 1\n"); }) == ErrorCode::kUnknownKey);
  CHECK(code_of([] { parse_scenario("p_d 1\n"); }) == ErrorCode::kParseError);
  CHECK(code_of([] { parse_scenario("T = 2.5\n"); }) == ErrorCode::kParseError);
  CHECK(code_of([] { parse_scenario("csi = psychic\n"); }) == ErrorCode::kParseError);
  CHECK(code_of([] { load_scenario("/nonexistent/x.scn"); }) == ErrorCode::kIoError);
}

TEST_CASE("report formatting") {
  const SolveReport rep = solve(quick().scenario(), quick().config());
  const std::string text = format_report(rep);
  for (const char* key : {"status=ok", "ee_star=", "alpha_trace=", "outer_iters=",
                          "residual_interference_slack="}) {
    CHECK(text.find(key) != std::string::npos);
  }
}

TEST_CASE("sweep output") {
  const std::vector<double> pd{0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  const std::string csv = run_sweep(quick(), "p_d", pd);
  const auto rows = read_csv(csv);
  REQUIRE(rows.size() == pd.size() + 1);
  CHECK(csv.substr(0, kSweepHeader.size()) == kSweepHeader);
  const std::vector<double> ee = column(csv, 1);
  for (std::size_t i = 1; i < ee.size(); ++i) CHECK(ee[i] >= ee[i - 1] - 1e-9);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].back() == "ok");

  const std::vector<double> pf{0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
  ScenarioParams p = quick();
  p.p_d = 0.9;
  const std::vector<double> ee_f = column(run_sweep(p, "p_f", pf), 1);
  for (std::size_t i = 1; i < ee_f.size(); ++i) CHECK(ee_f[i] <= ee_f[i - 1] + 1e-9);

  CHECK(code_of([&] { run_sweep(quick(), "nope", pd); }) == ErrorCode::kUnknownKey);
  CHECK(code_of([&] { run_sweep(quick(), "csi", pd); }) == ErrorCode::kInvalidArgument);
  const std::vector<double> frac{100.5};
  CHECK(code_of([&] { run_sweep(quick(), "T", frac); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("vanishing interference budget squeezes the powers") {
  ScenarioParams p = quick();
  p.q_avg_db = -200.0;
  const SolveReport rep = solve(p.scenario(), p.config());
  CHECK(rep.avg_p0 <= 1e-12);
  CHECK(rep.avg_p1 <= 1e-12);
  CHECK(rep.ee_star <= 1e-9);
}

TEST_CASE("figure presets") {
  for (int id = 4; id <= 10; ++id) {
    const auto curves = figure_curves(id);
    CHECK_FALSE(curves.empty());
    for (const CurvePreset& c : curves) {
      CHECK(ScenarioParams::is_numeric(c.sweep_key));
      CHECK_FALSE(c.values.empty());
    }
  }
  CHECK_THROWS_AS(figure_curves(11), Error);
  const auto fig9 = figure_curves(9);
  CHECK(fig9.front().params.q_avg_db == -10.0);
}
