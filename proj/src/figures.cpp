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

#include "cree/figures.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "cree/error.hpp"
#include "cree/metrics.hpp"

namespace cree {
namespace {

constexpr std::int64_t kDefaultCount = 100000;
// Every draw of imp_both carries a 256-node conditional rule.
constexpr std::int64_t kImperfectBothCount = 3000;

std::vector<double> grid(double first, double last, double step) {
  std::vector<double> out;
  const int n = static_cast<int>(std::lround((last - first) / step));
  for (int i = 0; i <= n; ++i) out.push_back(first + step * i);
  return out;
}

ScenarioParams base(double p_d, double p_f) {
  ScenarioParams p;
  p.p_d = p_d;
  p.p_f = p_f;
  return p;
}

ScenarioParams with_csi(ScenarioParams p, const std::string& csi, double sigma_h2,
                        double sigma_g2) {
  p.csi = csi;
  p.sigma_h2 = sigma_h2;
  p.sigma_g2 = sigma_g2;
  p.mc_count = csi == "imp_both" ? kImperfectBothCount : kDefaultCount;
  return p;
}

std::string sensing_tag(const ScenarioParams& p) {
  return p.p_d == 1.0 && p.p_f == 0.0 ? "perfect_sensing" : "imperfect_sensing";
}

// Four CSI levels at estimation-error variance 0.1 (the text leaves it open).
std::vector<CurvePreset> four_levels(const ScenarioParams& p,
                                     const std::string& key,
                                     const std::vector<double>& values) {
  return {
      {"perfect", with_csi(p, "perfect", 0.0, 0.0), key, values},
      {"imp_int", with_csi(p, "imp_int", 0.0, 0.1), key, values},
      {"imp_both", with_csi(p, "imp_both", 0.1, 0.1), key, values},
      {"statistical", with_csi(p, "statistical", 0.0, 0.0), key, values},
  };
}

std::vector<CurvePreset> preset_curves(int id) {
  switch (id) {
    case 4: {
      std::vector<CurvePreset> out;
      for (const auto& s : {base(1.0, 0.0), base(0.8, 0.1)}) {
        ScenarioParams p = s;
        p.q_avg_db = -8.0;
        p.regime = "avg_avg";
        out.push_back({"avg_tx_" + sensing_tag(p), p, "p_avg_db", grid(-10, 10, 2.5)});
        p.regime = "peak_avg";
        out.push_back({"peak_tx_" + sensing_tag(p), p, "p_pk_db", grid(-10, 10, 2.5)});
      }
      return out;
    }
    case 5: {
      std::vector<CurvePreset> out;
      for (const auto& s : {base(1.0, 0.0), base(0.8, 0.1)}) {
        ScenarioParams p = s;
        p.q_avg_db = -25.0;
        p.regime = "avg_avg";
        out.push_back({"perfect_csi_" + sensing_tag(p), with_csi(p, "perfect", 0, 0),
                       "p_avg_db", grid(-10, 10, 2.5)});
        out.push_back({"statistical_csi_" + sensing_tag(p),
                       with_csi(p, "statistical", 0, 0), "p_avg_db",
                       grid(-10, 10, 2.5)});
      }
      return out;
    }
    case 6: {
      ScenarioParams p = base(0.8, 0.1);
      p.regime = "peak_avg";
      p.p_pk_db = -4.0;
      p.q_avg_db = -25.0;
      return four_levels(p, "p_d", grid(0.5, 1.0, 0.1));
    }
    case 7: {
      ScenarioParams p = base(0.8, 0.1);
      p.regime = "peak_avg";
      p.p_pk_db = -4.0;
      p.q_avg_db = -8.0;
      return four_levels(p, "p_f", grid(0.0, 0.5, 0.1));
    }
    case 8: {
      ScenarioParams p = base(0.8, 0.1);
      p.regime = "peak_avg";
      p.p_pk_db = -4.0;
      p.q_avg_db = -25.0;
      const auto values = grid(0.0, 0.5, 0.1);
      return {
          {"perfect", with_csi(p, "perfect", 0, 0), "sigma_g2", values},
          {"imp_int", with_csi(p, "imp_int", 0, 0), "sigma_g2", values},
          {"imp_both_sigma_h2_0.3", with_csi(p, "imp_both", 0.3, 0), "sigma_g2",
           values},
          {"imp_both_sigma_h2_0.5", with_csi(p, "imp_both", 0.5, 0), "sigma_g2",
           values},
      };
    }
    case 9: {
      ScenarioParams p = base(0.8, 0.1);
      p.regime = "peak_avg";
      p.q_avg_db = -10.0;
      const auto values = grid(-10, 10, 2.5);
      return {
          {"perfect", with_csi(p, "perfect", 0, 0), "p_pk_db", values},
          {"imp_both_0.1_0.2", with_csi(p, "imp_both", 0.1, 0.2), "p_pk_db", values},
          {"imp_both_0.1_0.5", with_csi(p, "imp_both", 0.1, 0.5), "p_pk_db", values},
          {"imp_both_0.3_0.2", with_csi(p, "imp_both", 0.3, 0.2), "p_pk_db", values},
      };
    }
    case 10: {
      ScenarioParams p = base(0.8, 0.1);
      p.regime = "avg_peak";
      p.p_avg_db = -10.0;
      p.xi = 0.1;
      const auto values = grid(-20, 0, 2.5);
      return {
          {"perfect", with_csi(p, "perfect", 0, 0), "q_pk_db", values},
          {"imp_int", with_csi(p, "imp_int", 0, 0.1), "q_pk_db", values},
      };
    }
    default:
      break;
  }
  fail(ErrorCode::kInvalidArgument,
       "figure " + std::to_string(id) + " is not a swept preset");
}

void append(std::string& out, const std::string& key, const std::string& value) {
  out += key + "=" + value + "\n";
}

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ",";
    out += format_number(values[i]);
  }
  return out;
}

// Gap bound and Monte Carlo gap versus N0 at fixed unit powers.
FigureResult figure_gap(const FigureOptions& options) {
  const std::int64_t draws = options.mc_count > 0 ? options.mc_count : kDefaultCount;
  const std::int64_t mc_n = 2 * draws;
  const SensingSpec sensing{0.8, 0.1, 0.4, 0.6};
  const SensingDerived sd = derive_sensing(sensing);
  const PowerRule rule = PowerRule::constant({1.0, 1.0});
  const SampleSet samples = sample_links({1.0, 0.0}, {1.0, 0.0}, options.seed, draws);
  const auto n0s = grid(0.1, 2.0, 0.1);

  std::string csv = "n0,bound,bound_idle,bound_busy,mc_gap,mc_gap_std_err\n";
  for (double n0 : n0s) {
    LinkBudget lb;
    lb.n0 = n0;
    const GapBound b = gap_upper_bound(rule, samples, sd, lb);
    const MutualInfoEstimate mi = exact_mi_mc(rule, samples, sd, lb, mc_n, options.seed);
    csv += format_number(n0) + "," + format_number(b.total) + "," +
           format_number(b.per_decision[0]) + "," + format_number(b.per_decision[1]) +
           "," + format_number(mi.gap) + "," + format_number(mi.gap_std_err) + "\n";
  }
  FigureResult out;
  out.id = 2;
  out.curves.push_back({"gap_bound.csv", csv});
  append(out.manifest, "figure", "2");
  append(out.manifest, "x", "n0");
  append(out.manifest, "n0_values", join(n0s));
  append(out.manifest, "p_d", "0.8");
  append(out.manifest, "p_f", "0.1");
  append(out.manifest, "prior_idle", "0.4");
  append(out.manifest, "sigma_s2", "1");
  append(out.manifest, "p0", "1");
  append(out.manifest, "p1", "1");
  append(out.manifest, "draws", std::to_string(draws));
  append(out.manifest, "mc_n", std::to_string(mc_n));
  append(out.manifest, "seed", std::to_string(options.seed));
  append(out.manifest, "curve.gap_bound.file", "gap_bound.csv");
  return out;
}

// Closed-form versus Monte Carlo rate and EE at constant power.
FigureResult figure_rate_ee(const FigureOptions& options) {
  const std::int64_t draws = options.mc_count > 0 ? options.mc_count : 20000;
  const std::int64_t mc_n = 200000;
  const auto p_dbs = grid(-10, 20, 2.5);
  FigureResult out;
  out.id = 3;
  append(out.manifest, "figure", "3");
  append(out.manifest, "x", "p_db (p0 = p1)");
  append(out.manifest, "p_db_values", join(p_dbs));
  append(out.manifest, "prior_idle", "0.4");
  append(out.manifest, "sigma_s2", "1");
  append(out.manifest, "p_c", "0.1");
  append(out.manifest, "draws", std::to_string(draws));
  append(out.manifest, "mc_n", std::to_string(mc_n));
  append(out.manifest, "seed", std::to_string(options.seed));
  const SampleSet samples = sample_links({1.0, 0.0}, {1.0, 0.0}, options.seed, draws);
  for (const auto& [p_d, p_f] : {std::pair{1.0, 0.0}, std::pair{0.8, 0.2}}) {
    const SensingDerived sd = derive_sensing({p_d, p_f, 0.4, 0.6});
    for (double n0 : {0.1, 0.5, 1.0}) {
      LinkBudget lb;
      lb.n0 = n0;
      std::string csv =
          "p_db,rate_lb,rate_exact,rate_exact_std_err,ee_lb,ee_exact\n";
      for (double p_db : p_dbs) {
        const double p = db_to_linear(p_db);
        const MutualInfoEstimate mi = exact_mi_mc(PowerRule::constant({p, p}),
                                                  samples, sd, lb, mc_n, options.seed);
        csv += format_number(p_db) + "," + format_number(mi.closed_form) + "," +
               format_number(mi.estimate) + "," + format_number(mi.std_err) + "," +
               format_number(energy_efficiency(mi.closed_form, p, p, sd, lb)) + "," +
               format_number(energy_efficiency(mi.estimate, p, p, sd, lb)) + "\n";
      }
      const std::string name = std::string(p_d == 1.0 ? "perfect" : "imperfect") +
                                "_sensing_n0_" + format_number(n0);
      out.curves.push_back({name + ".csv", csv});
      append(out.manifest, "curve." + name + ".file", name + ".csv");
      append(out.manifest, "curve." + name + ".p_d", format_number(p_d));
      append(out.manifest, "curve." + name + ".p_f", format_number(p_f));
      append(out.manifest, "curve." + name + ".n0", format_number(n0));
    }
  }
  return out;
}

}  // namespace

std::vector<CurvePreset> figure_curves(int id, const FigureOptions& options) {
  std::vector<CurvePreset> curves = preset_curves(id);
  for (CurvePreset& c : curves) {
    c.params.seed = options.seed;
    if (options.mc_count > 0) c.params.mc_count = options.mc_count;
  }
  return curves;
}

FigureResult run_figure(int id, const FigureOptions& options) {
  require(id >= kFirstFigure && id <= kLastFigure,
          "figure id must lie in 2..10");
  if (id == 2) return figure_gap(options);
  if (id == 3) return figure_rate_ee(options);
  FigureResult out;
  out.id = id;
  append(out.manifest, "figure", std::to_string(id));
  for (const CurvePreset& c : figure_curves(id, options)) {
    const std::string file = c.name + ".csv";
    out.curves.push_back({file, run_sweep(c.params, c.sweep_key, c.values)});
    const std::string prefix = "curve." + c.name + ".";
    append(out.manifest, prefix + "file", file);
    append(out.manifest, prefix + "sweep_key", c.sweep_key);
    append(out.manifest, prefix + "sweep_values", join(c.values));
    for (std::string_view key : ScenarioParams::keys()) {
      if (key == c.sweep_key) continue;
      append(out.manifest, prefix + std::string(key), c.params.get(key));
    }
  }
  return out;
}

void write_figure(const FigureResult& result, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorCode::kIoError, "cannot create directory '" + dir + "'");
  auto write = [&](const std::string& name, const std::string& content) {
    const auto path = std::filesystem::path(dir) / name;
    std::ofstream f(path, std::ios::binary);
    f << content;
    if (!f) fail(ErrorCode::kIoError, "cannot write '" + path.string() + "'");
  };
  for (const FigureFile& c : result.curves) write(c.name, c.content);
  write("manifest.txt", result.manifest);
}

}  // namespace cree
