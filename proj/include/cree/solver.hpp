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

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cree/allocation.hpp"
#include "cree/fading.hpp"
#include "cree/metrics.hpp"
#include "cree/sensing.hpp"

namespace cree {

/// Everything that defines one optimization instance except solver knobs.
struct Scenario {
  SensingSpec sensing;
  LinkBudget budget;
  ConstraintRegime regime = AvgTxAvgInt{};
  CsiLevel csi = PerfectBoth{};

  void validate() const;
};

struct SolverConfig {
  double eps = 1e-6;    // Dinkelbach tolerance on |F(alpha)|
  double delta = 1e-6;  // feasibility and complementary-slackness tolerance
  double step = 0.1;    // constant subgradient step
  int max_outer = 50;
  int max_inner = 2000;  // expectation evaluations per F(alpha)
  int subgradient_iters = 10;
  double alpha_init = 0.0;
  double lambda_init = 0.0;
  double nu_init = 0.0;
  std::int64_t mc_count = 100000;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Sample averages of one power rule. Per-unit moments feed the standard
/// error of the energy efficiency.
struct Evaluation {
  bool unbounded = false;  // some water level is infinite at these multipliers
  double rate = 0.0;
  double avg_p0 = 0.0;
  double avg_p1 = 0.0;
  double tx_power = 0.0;      // Pr{Ĥ0} E{P0} + Pr{Ĥ1} E{P1}
  double interference = 0.0;  // E{rho_0 P0 g + rho_1 P1 g}
  double rate_var = 0.0;      // per-unit variances and covariance
  double tx_var = 0.0;
  double rate_tx_cov = 0.0;
  std::size_t units = 0;
};

/// Slack of one average constraint at the returned multipliers.
struct Residual {
  std::string name;  // "tx_power" or "interference"
  double limit = 0.0;
  double value = 0.0;
  double multiplier = 0.0;

  double slack() const { return limit - value; }
  double complementary() const { return multiplier * slack(); }
};

/// Applies the per-draw rule of a scenario across one fixed sample set.
/// Data that does not depend on the multipliers (conditional quadratures,
/// outage quantiles) is computed once at construction.
class ExpectationEngine {
 public:
  ExpectationEngine(const Scenario& scenario, const SolverConfig& config);
  ExpectationEngine(const Scenario& scenario, SampleSet samples);

  Evaluation evaluate(const Multipliers& m) const;
  PowerPair power(std::size_t draw, const Multipliers& m) const;

  const Scenario& scenario() const { return scenario_; }
  const LinkModel& model() const { return model_; }
  const SampleSet& samples() const { return samples_; }
  std::int64_t evaluations() const { return evaluations_; }

 private:
  void prepare();

  Scenario scenario_;
  LinkModel model_;
  SampleSet samples_;
  bool statistical_ = false;
  std::vector<ConditionalQuadrature> quadratures_;
  std::vector<std::array<double, 2>> quantiles_;
  // Statistical knowledge: one rule for every draw.
  ConditionalQuadrature empirical_;
  ChannelDraw mean_draw_;
  mutable std::int64_t evaluations_ = 0;
};

/// Outcome of the inner dual problem at one alpha.
struct InnerResult {
  Multipliers multipliers;
  Evaluation evaluation;
  std::vector<Residual> residuals;
  int iterations = 0;  // expectation evaluations used
  bool converged = false;
};

/// Drives (lambda, nu) to a point where every average constraint holds within
/// delta and each |multiplier * slack| <= delta. Starts with constant-step
/// projected subgradient updates from `start` and, when those do not meet
/// the tolerance, finishes with exact monotone line searches on each
/// multiplier. Multipliers of constraints absent from the regime stay 0.
InnerResult subgradient_inner(double alpha, const Multipliers& start,
                              const ExpectationEngine& engine,
                              const SolverConfig& config);

struct FValue {
  double value = 0.0;  // E{R} - alpha (E{P_tx} + Pc)
  InnerResult inner;
};

FValue eval_F(double alpha, const ExpectationEngine& engine,
              const SolverConfig& config,
              const Multipliers& start = Multipliers{});

struct SolveReport {
  std::string status = "ok";  // ok | maxiter
  std::string regime;
  std::string csi;
  double ee_star = 0.0;
  double ee_std_err = 0.0;
  double rate = 0.0;
  double avg_p0 = 0.0;
  double avg_p1 = 0.0;
  double p_tot = 0.0;  // Pr{Ĥ0} E{P0} + Pr{Ĥ1} E{P1}
  double interference = 0.0;
  double lambda = 0.0;
  double nu = 0.0;
  double alpha_star = 0.0;
  double f_star = 0.0;
  int outer_iters = 0;
  int inner_iters = 0;
  bool warm_start = true;
  std::vector<Residual> residuals;
  std::vector<double> alpha_trace;

  bool ok() const { return status == "ok"; }
};

/// Dinkelbach iteration alpha_{n+1} = E{R}/(E{P_tx} + Pc) over one sample set
/// until |F(alpha_n)| <= eps. Multipliers warm-start across outer iterations.
SolveReport dinkelbach_solve(const ExpectationEngine& engine,
                             const SolverConfig& config);

/// Scalar powers (p0, p1) shared by every draw. Throws unless the scenario
/// carries StatisticalBoth.
SolveReport solve_statistical(const ExpectationEngine& engine,
                              const SolverConfig& config);

/// Samples the scenario's links and dispatches on the CSI level.
SolveReport solve(const Scenario& scenario, const SolverConfig& config);

}  // namespace cree
