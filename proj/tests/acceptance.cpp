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

// Acceptance run: prints one PASS/FAIL line per criterion and exits nonzero
// if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cree/allocation.hpp"
#include "cree/fading.hpp"
#include "cree/figures.hpp"
#include "cree/metrics.hpp"
#include "cree/scenario_io.hpp"
#include "cree/solver.hpp"
#include "oracles.hpp"
#include "rule_oracle.hpp"

using namespace cree;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Curve of solve reports along a preset's sweep.
std::vector<SolveReport> run_curve(const CurvePreset& c, std::int64_t mc_count = 0) {
  std::vector<SolveReport> out;
  for (double v : c.values) {
    ScenarioParams p = c.params;
    p.set(c.sweep_key, format_number(v));
    if (mc_count > 0) p.mc_count = mc_count;
    out.push_back(solve(p.scenario(), p.config()));
  }
  return out;
}

bool nondecreasing(const std::vector<SolveReport>& r, double tol) {
  for (std::size_t i = 1; i < r.size(); ++i) {
    if (r[i].ee_star < r[i - 1].ee_star * (1 - tol)) return false;
  }
  return true;
}

bool nonincreasing(const std::vector<SolveReport>& r, double tol) {
  for (std::size_t i = 1; i < r.size(); ++i) {
    if (r[i].ee_star > r[i - 1].ee_star * (1 + tol)) return false;
  }
  return true;
}

const CurvePreset& curve(const std::vector<CurvePreset>& all, const std::string& name) {
  for (const CurvePreset& c : all) {
    if (c.name == name) return c;
  }
  std::fprintf(stderr, "missing curve %s\n", name.c_str());
  std::abort();
}

Outcome oracle_equivalence() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2024);
  const LinkModel model({0.8, 0.1, 0.4, 0.6}, LinkBudget{});
  double worst = 0.0;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      for (int n = 0; n < 100; ++n) {
        const oracle::RuleInstance in = oracle::random_instance(rng);
        const auto regime = static_cast<oracle::Regime>(r);
        const auto csi = static_cast<oracle::Csi>(c);
        const PowerPair p = allocate(in.draw, in.m, oracle::csi_of(csi, in),
                                     oracle::regime_of(regime, in), model);
        for (int k = 0; k < 2; ++k) {
          const double o = oracle::rule_power(regime, csi, in, k, 0.8, 0.1, 0.4, 0.1,
                                              1.0, 0.9);
          worst = std::max(worst, std::abs(o - p[kDecisions[k]]));
        }
      }
    }
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-6 && secs < 10.0,
          "900 instances, max |rule - golden| = " + sci(worst) + ", " + sci(secs) + " s"};
}

Outcome dinkelbach_consistency() {
  const auto t0 = Clock::now();
  const auto curves = figure_curves(5);
  double worst_f = 0.0;
  double worst_res = 0.0;
  int worst_outer = 0;
  bool monotone = true;
  bool ok = true;
  int solves = 0;
  for (const char* name : {"perfect_csi_perfect_sensing", "perfect_csi_imperfect_sensing"}) {
    for (const SolveReport& r : run_curve(curve(curves, name))) {
      ++solves;
      ok = ok && r.ok();
      worst_f = std::max(worst_f, std::abs(r.f_star));
      worst_outer = std::max(worst_outer, r.outer_iters);
      for (std::size_t i = 1; i < r.alpha_trace.size(); ++i) {
        monotone = monotone && r.alpha_trace[i] >= r.alpha_trace[i - 1];
      }
      for (const Residual& res : r.residuals) {
        worst_res = std::max({worst_res, -res.slack(), std::abs(res.complementary())});
      }
    }
  }
  const double secs = seconds_since(t0);
  const bool pass = ok && worst_f <= 1e-6 && worst_outer <= 30 && monotone &&
                    worst_res <= 1e-3 && secs < 120.0;
  return {pass, std::to_string(solves) + " solves at 1e5 draws, max |F| = " + sci(worst_f) +
                    ", max outer = " + std::to_string(worst_outer) +
                    ", alpha trace monotone = " + (monotone ? "yes" : "no") +
                    ", max residual = " + sci(worst_res) + ", " + sci(secs) + " s"};
}

Outcome bound_suite() {
  const SampleSet samples = sample_links({1, 0}, {1, 0}, 7, 5000);
  const SensingDerived sd = derive_sensing({0.8, 0.1, 0.4, 0.6});
  const PowerRule rule = PowerRule::constant({1.0, 1.0});
  bool ok = true;
  double prev = 1e300;
  double min_margin = 1e300;
  for (int i = 1; i <= 20; ++i) {
    LinkBudget lb;
    lb.n0 = 0.1 * i;
    const GapBound b = gap_upper_bound(rule, samples, sd, lb);
    const MutualInfoEstimate mi = exact_mi_mc(rule, samples, sd, lb, 40000, 7);
    const double margin = b.total - (mi.gap - 3.0 * mi.gap_std_err);
    min_margin = std::min(min_margin, margin);
    ok = ok && b.total >= 0.0 && b.total <= prev && margin >= 0.0;
    prev = b.total;
  }
  return {ok, "N0 in 0.1..2, min bound - (gap - 3 se) = " + sci(min_margin) +
                  ", bound at N0=2 = " + sci(prev)};
}

Outcome mutual_information() {
  const SampleSet samples = sample_links({1, 0}, {1, 0}, 3, 20000);
  const PowerRule rule = PowerRule::constant({1.0, 1.0});
  const SensingDerived perfect = derive_sensing({1.0, 0.0, 0.4, 0.6});
  const MutualInfoEstimate mi =
      exact_mi_mc(rule, samples, perfect, LinkBudget{}, 200000, 3);
  const double z = std::abs(mi.estimate - mi.closed_form) / mi.std_err;

  const SensingDerived imperfect = derive_sensing({0.8, 0.2, 0.4, 0.6});
  std::vector<double> gaps;
  for (double n0 : {0.1, 0.5, 1.0}) {
    LinkBudget lb;
    lb.n0 = n0;
    gaps.push_back(exact_mi_mc(rule, samples, imperfect, lb, 200000, 3).gap);
  }
  const bool shrinking = gaps[0] > gaps[1] && gaps[1] > gaps[2];
  return {z <= 3.0 && shrinking,
          "perfect sensing |MC - closed form| / se = " + sci(z) + ", gaps at N0 0.1/0.5/1 = " +
              sci(gaps[0]) + "/" + sci(gaps[1]) + "/" + sci(gaps[2])};
}

Outcome trend_suite() {
  std::vector<std::string> notes;
  bool all = true;
  auto note = [&](const std::string& name, bool ok) {
    all = all && ok;
    notes.push_back(name + (ok ? " ok" : " FAILED"));
  };
  constexpr double kTol = 1e-6;
  constexpr std::int64_t kDraws = 20000;

  // (a) detection and false-alarm trends at every knowledge level
  {
    bool ok_d = true;
    for (const CurvePreset& c : figure_curves(6)) {
      ok_d = ok_d && nondecreasing(run_curve(c, c.params.csi == "imp_both" ? 3000 : kDraws), kTol);
    }
    bool ok_f = true;
    for (const CurvePreset& c : figure_curves(7)) {
      ok_f = ok_f && nonincreasing(run_curve(c, c.params.csi == "imp_both" ? 3000 : kDraws), kTol);
    }
    note("(a) ee up in p_d, down in p_f", ok_d && ok_f);
  }
  // (b) knowledge ordering under common random numbers
  {
    const auto presets = figure_curves(6);
    std::vector<SolveReport> reps;
    for (const CurvePreset& c : presets) {
      ScenarioParams p = c.params;
      p.mc_count = 5000;
      reps.push_back(solve(p.scenario(), p.config()));
    }
    bool ok = true;
    for (std::size_t i = 1; i < reps.size(); ++i) {
      ok = ok && reps[i].ee_star <= reps[i - 1].ee_star + 3.0 * reps[i].ee_std_err;
    }
    note("(b) perfect >= imp_int >= imp_both >= statistical (" +
             sci(reps[0].ee_star) + " " + sci(reps[1].ee_star) + " " + sci(reps[2].ee_star) +
             " " + sci(reps[3].ee_star) + ")",
         ok);
  }
  // (c) average transmit budget beats a peak budget of the same value
  {
    const auto presets = figure_curves(4);
    bool ok = true;
    for (const char* tag : {"perfect_sensing", "imperfect_sensing"}) {
      const auto avg = run_curve(curve(presets, std::string("avg_tx_") + tag), kDraws);
      const auto peak = run_curve(curve(presets, std::string("peak_tx_") + tag), kDraws);
      for (std::size_t i = 0; i < avg.size(); ++i) {
        ok = ok && avg[i].ee_star >= peak[i].ee_star * (1 - kTol);
      }
    }
    note("(c) avg-tx ee >= peak-tx ee", ok);
  }
  // (d) saturation once interference limits the power
  {
    bool ok = true;
    auto flat_tail = [&](const std::vector<SolveReport>& r) {
      const double top = r.back().ee_star;
      return nondecreasing(r, kTol) && r[r.size() - 3].ee_star >= top * 0.99;
    };
    ok = ok && flat_tail(run_curve(curve(figure_curves(5), "perfect_csi_imperfect_sensing"),
                                   kDraws));
    ok = ok && flat_tail(run_curve(curve(figure_curves(9), "perfect"), kDraws));
    note("(d) ee flat within 1% past the knee", ok);
  }
  // (e) interference estimation error
  {
    bool ok = true;
    for (const CurvePreset& c : figure_curves(8)) {
      if (c.params.csi == "perfect") continue;
      ok = ok && nonincreasing(run_curve(c, c.params.csi == "imp_both" ? 3000 : kDraws), kTol);
    }
    note("(e) ee down in sigma_g2", ok);
  }
  std::string detail;
  for (const std::string& n : notes) detail += (detail.empty() ? "" : "; ") + n;
  return {all, detail};
}

Outcome distribution_suite() {
  double mass_err = 0.0;
  for (double hat2 : {0.5, 2.0}) {
    for (double v : {0.1, 0.5}) {
      const double top = std::sqrt(hat2) + 15.0 * std::sqrt(v);
      const double mass = oracle::simpson(
          [&](double u) { return 2.0 * u * cond_pdf_h2(u * u, hat2, v); }, 0.0, top, 20000);
      mass_err = std::max(mass_err, std::abs(mass - 1.0));
    }
  }
  const double v = 0.3;
  const SampleSet s = sample_links({1.0, v}, {1.0, v}, 99, 100000);
  // Residual |h|^2 - (|ĥ|^2 + var) has conditional mean zero.
  double sum = 0.0;
  double sq = 0.0;
  std::vector<double> u;
  for (const ChannelDraw& d : s.draws) {
    const double r = d.h2 - (d.h_hat2 + v);
    sum += r;
    sq += r * r;
    u.push_back(cond_cdf_power(d.h2, d.h_hat2, v));
  }
  const double n = static_cast<double>(s.draws.size());
  const double mean = sum / n;
  const double se = std::sqrt((sq / n - mean * mean) / n);
  std::sort(u.begin(), u.end());
  double ks = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    ks = std::max({ks, std::abs((i + 1) / n - u[i]), std::abs(u[i] - i / n)});
  }
  double inv_err = 0.0;
  for (double p : {0.05, 0.5, 0.95}) {
    inv_err = std::max(inv_err,
                       std::abs(cond_cdf_power(cond_quantile_g2(p, 0.4, 0.2), 0.4, 0.2) - p));
  }
  const bool pass = mass_err <= 1e-6 && std::abs(mean) <= 3.0 * se && inv_err <= 1e-6 &&
                    ks <= 0.01;
  return {pass, "mass err " + sci(mass_err) + ", mean residual " + sci(mean) + " (se " +
                    sci(se) + "), inversion err " + sci(inv_err) + ", KS " + sci(ks)};
}

Outcome reductions() {
  const LinkModel model({0.8, 0.1, 0.4, 0.6}, LinkBudget{});
  std::mt19937_64 rng(5);
  std::exponential_distribution<double> expo(1.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double h2 = expo(rng);
    const double g2 = expo(rng);
    const ChannelDraw draw{h2, g2, h2, g2};
    const Multipliers m{0.2 + expo(rng), expo(rng), 0.1 + expo(rng)};
    for (const ConstraintRegime& regime :
         {ConstraintRegime{AvgTxAvgInt{}}, ConstraintRegime{PeakTxAvgInt{0.6, 0.6, 1.0}},
          ConstraintRegime{AvgTxPeakInt{1.0, 0.3, 0.3, 0.1, 0.1}}}) {
      const PowerPair ref = allocate(draw, m, PerfectBoth{}, regime, model);
      for (const CsiLevel& csi : {CsiLevel{PerfectTxImperfectInt{0.0}},
                                  CsiLevel{ImperfectBoth{0.0, 0.0}},
                                  CsiLevel{ImperfectBoth{1e-9, 0.0}}}) {
        const PowerPair p = allocate(draw, m, csi, regime, model);
        worst = std::max({worst, std::abs(p.p0 - ref.p0), std::abs(p.p1 - ref.p1)});
      }
    }
  }
  // Perfect sensing and alpha = 0: [level - noise/|h|^2]^+ with level 0.9 log2(e)/lambda.
  const LinkModel sensing_model({1.0, 0.0, 0.4, 0.6}, LinkBudget{});
  double wf = 0.0;
  for (double h2 : {0.05, 0.3, 1.0, 4.0}) {
    for (double lambda : {0.2, 1.0, 3.0}) {
      const PowerPair p = allocate({h2, 1.0, h2, 1.0}, {lambda, 0.0, 0.0}, PerfectBoth{},
                                   AvgTxAvgInt{}, sensing_model);
      const double level = 0.9 * oracle::kLog2E / lambda;
      wf = std::max({wf, std::abs(p.p0 - std::max(0.0, level - 0.1 / h2)),
                     std::abs(p.p1 - std::max(0.0, level - 1.1 / h2))});
    }
  }
  return {worst <= 1e-3 && wf <= 1e-9,
          "max |imperfect - perfect| = " + sci(worst) + ", water-filling err = " + sci(wf)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 oracle_equivalence", oracle_equivalence},
      {"2 dinkelbach_self_consistency", dinkelbach_consistency},
      {"3 gap_bound_suite", bound_suite},
      {"4 exact_mutual_information", mutual_information},
      {"5 trend_suite", trend_suite},
      {"6 distribution_suite", distribution_suite},
      {"7 reductions", reductions},
  };
  bool all = true;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all = all && o.pass;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
