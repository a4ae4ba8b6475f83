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

#include "cree/validate.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "cree/allocation.hpp"
#include "cree/error.hpp"
#include "cree/fading.hpp"
#include "cree/metrics.hpp"
#include "cree/scenario_io.hpp"
#include "cree/solver.hpp"

namespace cree {
namespace {

std::string sci(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

// Golden-section search for the maximizer of a unimodal function on [lo, hi],
// driven by `better(x, y)` = f(x) > f(y) so that differences are evaluated
// without cancellation.
double golden_max(const std::function<bool(double, double)>& better, double lo,
                  double hi) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo;
  double b = hi;
  double c = b - r * (b - a);
  double d = a + r * (b - a);
  for (int i = 0; i < 300 && b - a > 1e-13 * (1.0 + b); ++i) {
    if (better(c, d)) {
      b = d;
      d = c;
      c = b - r * (b - a);
    } else {
      a = c;
      c = d;
      d = a + r * (b - a);
    }
  }
  return 0.5 * (a + b);
}

struct Instance {
  ChannelDraw draw;
  Multipliers m;
  double peak = 1.0;
  double q_pk = 1.0;
  double xi = 0.1;
  double sigma_h2 = 0.1;
  double sigma_g2 = 0.1;
};

// Worst |rule - oracle| over `count` random instances of one regime/CSI pair.
double rule_oracle_error(int regime_id, int csi_id, std::mt19937_64& rng,
                         int count) {
  const SensingSpec sensing{0.8, 0.1, 0.4, 0.6};
  const LinkBudget budget;
  const LinkModel model(sensing, budget);
  std::exponential_distribution<double> expo(1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int n = 0; n < count; ++n) {
    Instance in;
    in.draw = {expo(rng), expo(rng), expo(rng), expo(rng)};
    in.m = {0.05 + 2.0 * u(rng), 20.0 * u(rng), 0.01 + 2.0 * u(rng)};
    in.peak = 0.1 + 2.0 * u(rng);
    in.q_pk = 0.01 + u(rng);
    in.xi = 0.05 + 0.25 * u(rng);
    in.sigma_h2 = 0.05 + 0.45 * u(rng);
    in.sigma_g2 = 0.05 + 0.45 * u(rng);

    CsiLevel csi = PerfectBoth{};
    if (csi_id == 1) csi = PerfectTxImperfectInt{in.sigma_g2};
    if (csi_id == 2) csi = ImperfectBoth{in.sigma_h2, in.sigma_g2};
    ConstraintRegime regime = AvgTxAvgInt{1.0, 1.0};
    if (regime_id == 1) regime = PeakTxAvgInt{in.peak, in.peak, 1.0};
    if (regime_id == 2) regime = AvgTxPeakInt{1.0, in.q_pk, in.q_pk, in.xi, in.xi};
    const PowerPair rule = allocate(in.draw, in.m, csi, regime, model);

    const double g_eff = csi_id == 0 ? in.draw.g2 : in.draw.g_hat2 + in.sigma_g2;
    std::vector<double> gains{in.draw.h2};
    std::vector<double> weights{1.0};
    if (csi_id == 2) {
      const ConditionalQuadrature q(in.draw.h_hat2, in.sigma_h2);
      gains.assign(q.nodes().begin(), q.nodes().end());
      weights.assign(q.weights().begin(), q.weights().end());
    }
    for (Decision d : kDecisions) {
      const double pr = model.decision_prob(d);
      const double rho = sensing.interference_weight(d);
      const double scale = budget.data_fraction() * pr * kLog2E;
      const double noise = budget.n0 + derive_sensing(sensing).posterior_busy(d) *
                                           budget.sigma_s2;
      double price = 0.0;
      std::optional<double> cap;
      if (regime_id == 0) {
        price = (in.m.lambda + in.m.alpha) * pr + in.m.nu * rho * g_eff;
      } else if (regime_id == 1) {
        price = in.m.alpha * pr + in.m.nu * rho * g_eff;
        cap = in.peak;
      } else {
        price = (in.m.lambda + in.m.alpha) * pr;
        const double gain = csi_id == 0
                                ? in.draw.g2
                                : cond_quantile_g2(1.0 - in.xi, in.draw.g_hat2,
                                                   in.sigma_g2);
        cap = in.q_pk / gain;
      }
      // L(x) - L(y) with log1p so that nearby points compare exactly.
      auto better = [&](double x, double y) {
        double diff = 0.0;
        for (std::size_t i = 0; i < gains.size(); ++i) {
          diff += weights[i] *
                  std::log1p((x - y) * gains[i] / (noise + y * gains[i]));
        }
        return scale * diff - price * (x - y) > 0.0;
      };
      const double hi = cap ? std::min(*cap, scale / price) : scale / price;
      const double oracle = golden_max(better, 0.0, hi);
      worst = std::max(worst, std::abs(oracle - rule[d]));
    }
  }
  return worst;
}

// Simpson rule in u = sqrt(gamma) for the conditional density.
double pdf_mass(double hat2, double err_var) {
  const double top = std::sqrt(hat2) + 12.0 * std::sqrt(err_var);
  const int n = 40000;
  const double h = top / n;
  double sum = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double u = i * h;
    const double f = 2.0 * u * cond_pdf_h2(u * u, hat2, err_var);
    sum += f * (i == 0 || i == n ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0));
  }
  return sum * h / 3.0;
}

CheckResult check(std::string name, bool pass, std::string detail) {
  return {std::move(name), pass, std::move(detail)};
}

}  // namespace

std::vector<CheckResult> run_validation(const ValidateOptions& options) {
  std::vector<CheckResult> out;
  std::mt19937_64 rng(options.seed);

  const char* regimes[] = {"avg_avg", "peak_avg", "avg_peak"};
  const char* csis[] = {"perfect", "imp_int", "imp_both"};
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      const double err = rule_oracle_error(r, c, rng, 20);
      out.push_back(check(std::string("rule_oracle_") + regimes[r] + "_" + csis[c],
                          err <= 1e-6, "max |rule - golden| = " + sci(err)));
    }
  }

  {
    double worst = 0.0;
    for (double hat2 : {0.0, 0.3, 2.0, 9.0}) {
      for (double v : {0.05, 0.3, 1.0}) {
        worst = std::max(worst, std::abs(pdf_mass(hat2, v) - 1.0));
      }
    }
    out.push_back(check("cond_pdf_normalization", worst <= 1e-6,
                        "max |mass - 1| = " + sci(worst)));
  }
  {
    double worst = 0.0;
    for (double hat2 : {0.0, 0.5, 4.0}) {
      for (double v : {0.1, 0.5}) {
        for (double p : {0.05, 0.5, 0.9, 0.99}) {
          const double q = cond_quantile_g2(p, hat2, v);
          worst = std::max(worst, std::abs(cond_cdf_power(q, hat2, v) - p));
        }
      }
    }
    out.push_back(check("quantile_inversion", worst <= 1e-6,
                        "max |F(F^-1(p)) - p| = " + sci(worst)));
  }
  {
    // Vanishing estimation error collapses the imperfect rules.
    const LinkModel model({0.8, 0.1, 0.4, 0.6}, LinkBudget{});
    std::exponential_distribution<double> expo(1.0);
    double worst = 0.0;
    for (int n = 0; n < 50; ++n) {
      const double h2 = expo(rng);
      const double g2 = expo(rng);
      const ChannelDraw draw{h2, g2, h2, g2};
      const Multipliers m{0.3, 2.0, 0.2};
      for (const ConstraintRegime& regime :
           {ConstraintRegime{AvgTxAvgInt{}}, ConstraintRegime{PeakTxAvgInt{0.5, 0.5, 1}},
            ConstraintRegime{AvgTxPeakInt{1, 0.2, 0.2, 0.1, 0.1}}}) {
        const PowerPair ref = allocate(draw, m, PerfectBoth{}, regime, model);
        for (const CsiLevel& csi :
             {CsiLevel{PerfectTxImperfectInt{0.0}}, CsiLevel{ImperfectBoth{0.0, 0.0}},
              CsiLevel{ImperfectBoth{1e-12, 1e-12}}}) {
          const PowerPair p = allocate(draw, m, csi, regime, model);
          worst = std::max({worst, std::abs(p.p0 - ref.p0), std::abs(p.p1 - ref.p1)});
        }
      }
    }
    out.push_back(check("zero_error_reduction", worst <= 1e-3,
                        "max |imperfect - perfect| = " + sci(worst)));
  }
  {
    // Perfect sensing and alpha = 0: classical water-filling.
    const LinkBudget lb;
    const LinkModel model({1.0, 0.0, 0.4, 0.6}, lb);
    double worst = 0.0;
    for (double h2 : {0.05, 0.4, 1.0, 3.0}) {
      for (double lambda : {0.1, 0.5, 2.0}) {
        const PowerPair p = allocate({h2, 1.0, h2, 1.0}, {lambda, 0.0, 0.0},
                                     PerfectBoth{}, AvgTxAvgInt{}, model);
        const double level = lb.data_fraction() * kLog2E / lambda;
        const double idle = std::max(0.0, level - lb.n0 / h2);
        const double busy = std::max(0.0, level - (lb.n0 + lb.sigma_s2) / h2);
        worst = std::max({worst, std::abs(p.p0 - idle), std::abs(p.p1 - busy)});
      }
    }
    out.push_back(check("classical_water_filling", worst <= 1e-9,
                        "max |rule - formula| = " + sci(worst)));
  }
  {
    const SampleSet samples = sample_links({1, 0}, {1, 0}, options.seed, 5000);
    const PowerRule rule = PowerRule::constant({1.0, 1.0});
    const SensingDerived sd = derive_sensing({0.8, 0.1, 0.4, 0.6});
    bool ok = true;
    double worst_margin = 1e300;
    for (double n0 : {0.1, 0.5, 1.0, 2.0}) {
      LinkBudget lb;
      lb.n0 = n0;
      const GapBound b = gap_upper_bound(rule, samples, sd, lb);
      const MutualInfoEstimate mi = exact_mi_mc(rule, samples, sd, lb, 40000,
                                                options.seed);
      const double margin = b.total - (mi.gap - 3.0 * mi.gap_std_err);
      worst_margin = std::min(worst_margin, margin);
      ok = ok && b.total >= 0.0 && margin >= 0.0;
    }
    out.push_back(check("gap_bound_vs_monte_carlo", ok,
                        "min bound - (gap - 3 se) = " + sci(worst_margin)));
  }
  {
    const SampleSet samples = sample_links({1, 0}, {1, 0}, options.seed, 5000);
    const SensingDerived sd = derive_sensing({1.0, 0.0, 0.4, 0.6});
    const MutualInfoEstimate mi = exact_mi_mc(PowerRule::constant({1.0, 0.5}),
                                              samples, sd, LinkBudget{}, 100000,
                                              options.seed);
    const double z = std::abs(mi.estimate - mi.closed_form) / mi.std_err;
    out.push_back(check("perfect_sensing_mutual_information", z <= 3.0,
                        "|estimate - closed form| / se = " + sci(z)));
  }
  {
    ScenarioParams p;
    p.p_d = 0.8;
    p.p_f = 0.1;
    p.q_avg_db = -25.0;
    p.mc_count = 20000;
    p.seed = options.seed;
    SolverConfig cfg = p.config();
    cfg.eps = options.eps;
    const Scenario sc = p.scenario();
    const ExpectationEngine engine(sc, cfg);
    const SolveReport rep = dinkelbach_solve(engine, cfg);
    const Multipliers m{rep.lambda, rep.nu, rep.alpha_star};
    const LinkModel& model = engine.model();
    PowerRule rule{[&](const ChannelDraw& d) {
                     return allocate(d, m, sc.csi, sc.regime, model);
                   },
                   std::nullopt};
    double p0 = 0.0;
    double p1 = 0.0;
    for (const ChannelDraw& d : engine.samples().draws) {
      const PowerPair pp = rule.power(d);
      p0 += pp.p0;
      p1 += pp.p1;
    }
    const double n = static_cast<double>(engine.samples().draws.size());
    const double rate = expected_rate(rule, engine.samples(), model.derived(), sc.budget);
    const double ee = energy_efficiency(rate, p0 / n, p1 / n, model.derived(), sc.budget);
    bool monotone = true;
    for (std::size_t i = 1; i < rep.alpha_trace.size(); ++i) {
      monotone = monotone && rep.alpha_trace[i] >= rep.alpha_trace[i - 1];
    }
    double slack = 0.0;
    for (const Residual& r : rep.residuals) {
      slack = std::max({slack, -r.slack(), std::abs(r.complementary())});
    }
    const bool ok = std::abs(rep.f_star) <= 1e-6 && std::abs(ee - rep.ee_star) <= 1e-9 &&
                    std::abs(rep.ee_star - rep.alpha_star) <= 1e-6 / sc.budget.p_c &&
                    monotone && slack <= 1e-3;
    out.push_back(check("dinkelbach_self_consistency", ok,
                        "|F| = " + sci(std::abs(rep.f_star)) + ", |ee - recomputed| = " +
                            sci(std::abs(ee - rep.ee_star)) + ", |ee - alpha| = " +
                            sci(std::abs(rep.ee_star - rep.alpha_star)) +
                            ", residual = " + sci(slack)));
  }
  return out;
}

std::string format_validation(const std::vector<CheckResult>& results) {
  std::string out;
  for (const CheckResult& r : results) {
    out += (r.pass ? "PASS " : "FAIL ") + r.name + ": " + r.detail + "\n";
  }
  return out;
}

}  // namespace cree
