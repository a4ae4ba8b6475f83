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
#include <optional>
#include <string>
#include <variant>

#include "cree/fading.hpp"
#include "cree/metrics.hpp"
#include "cree/sensing.hpp"

namespace cree {

// ---------------------------------------------------------------------------
// Constraint regimes. All limits are linear powers.

/// Average transmit power and average interference power.
struct AvgTxAvgInt {
  double p_avg = 1.0;
  double q_avg = 1.0;
};

/// Per-decision peak transmit power and average interference power.
struct PeakTxAvgInt {
  double p_pk0 = 1.0;
  double p_pk1 = 1.0;
  double q_avg = 1.0;

  double peak(Decision d) const { return d == Decision::kIdle ? p_pk0 : p_pk1; }
};

/// Average transmit power and per-decision peak interference power. With an
/// estimated interference link the peak limit becomes an outage constraint
/// Pr(P |g|^2 > q_pk | ĝ) <= xi.
struct AvgTxPeakInt {
  double p_avg = 1.0;
  double q_pk0 = 1.0;
  double q_pk1 = 1.0;
  double xi0 = 0.1;
  double xi1 = 0.1;

  double peak(Decision d) const { return d == Decision::kIdle ? q_pk0 : q_pk1; }
  double outage(Decision d) const { return d == Decision::kIdle ? xi0 : xi1; }
};

using ConstraintRegime = std::variant<AvgTxAvgInt, PeakTxAvgInt, AvgTxPeakInt>;

void validate(const ConstraintRegime& regime);
std::string regime_name(const ConstraintRegime& regime);

// ---------------------------------------------------------------------------
// Channel knowledge at the secondary transmitter.

struct PerfectBoth {};
struct PerfectTxImperfectInt {
  double sigma_g2 = 0.0;
};
struct ImperfectBoth {
  double sigma_h2 = 0.0;
  double sigma_g2 = 0.0;
};
struct StatisticalBoth {};

using CsiLevel =
    std::variant<PerfectBoth, PerfectTxImperfectInt, ImperfectBoth, StatisticalBoth>;

void validate(const CsiLevel& csi);
std::string csi_name(const CsiLevel& csi);

/// Variance of the interference-link estimation error the rule assumes
/// (0 for perfect or statistical knowledge).
double interference_error_var(const CsiLevel& csi);

/// Interference-link gain the rule prices: |g|^2 with perfect knowledge,
/// |ĝ|^2 + sigma_g^2 (its conditional mean) with an estimate.
double priced_interference_gain(const ChannelDraw& draw, const CsiLevel& csi);

// ---------------------------------------------------------------------------

struct Multipliers {
  double lambda = 0.0;  // average transmit power
  double nu = 0.0;      // average interference power
  double alpha = 0.0;   // fractional-programming parameter

  void validate() const;
};

/// Sensing and link constants shared by every rule evaluation.
class LinkModel {
 public:
  LinkModel(const SensingSpec& sensing, const LinkBudget& budget);

  const SensingSpec& sensing() const { return sensing_; }
  const SensingDerived& derived() const { return derived_; }
  const LinkBudget& budget() const { return budget_; }

  /// N0 + Pr(H1 | d) sigma_s^2
  double noise(Decision d) const { return noise_[index_of(d)]; }
  /// (T - tau)/T Pr{d} log2(e): derivative scale of the rate in nats->bits.
  double rate_scale(Decision d) const { return rate_scale_[index_of(d)]; }
  double decision_prob(Decision d) const { return derived_.decision_prob(d); }
  double interference_weight(Decision d) const {
    return sensing_.interference_weight(d);
  }

 private:
  SensingSpec sensing_;
  SensingDerived derived_;
  LinkBudget budget_;
  std::array<double, 2> noise_{};
  std::array<double, 2> rate_scale_{};
};

/// Marginal price of transmit power under decision d for the given regime:
/// the derivative of the penalty terms of the per-draw Lagrangian.
double power_price(const ConstraintRegime& regime, const Multipliers& m,
                   Decision d, double interference_gain, const LinkModel& model);

/// Water-filling with a price:
///   argmax_{p >= 0} (T - tau)/T Pr{d} log2(1 + p h2 / noise(d)) - price p
///     = [rate_scale(d) / price - noise(d) / h2]^+.
/// Throws kUnboundedWaterLevel when price is 0 and h2 > 0.
double water_fill(double h2, double price, Decision d, const LinkModel& model);

/// Root in P of
///   rate_scale(d) * E[ gamma / (noise(d) + P gamma) | ĥ ] = omega
/// using the conditional quadrature of |h|^2. Returns 0 when omega >= f(0),
/// and nullopt when omega <= 0 (no finite root).
std::optional<double> fixed_point_power(const ConditionalQuadrature& quad,
                                        double omega, Decision d,
                                        const LinkModel& model);

/// Imperfect knowledge of both links under average transmit and average
/// interference constraints: the root above with
/// omega = (lambda + alpha) Pr{d} + nu rho_d (|ĝ|^2 + sigma_g^2).
double solve_fixed_point(double g_hat2, double h_hat2, const Multipliers& m,
                         Decision d, const LinkModel& model,
                         const ImperfectBoth& csi);

/// Interference-gain thresholds of the three-branch peak-power rule for one
/// decision: zero power when gain >= upper, full peak when gain <= lower,
/// water-filling in between. `shift` is subtracted from both (sigma_g^2 when
/// the rule is written in |ĝ|^2). Both are nullopt when nu * rho_d == 0.
struct PeakThresholds {
  std::optional<double> upper;  // gain above which the power is zero
  std::optional<double> lower;  // gain below which the power is the peak
};
PeakThresholds peak_thresholds(double h2, const Multipliers& m, Decision d,
                               double peak, double shift, const LinkModel& model);

/// Per-draw data that does not depend on the multipliers. Rules compute it on
/// demand when not supplied.
struct DrawContext {
  const ConditionalQuadrature* tx_quadrature = nullptr;
  // F^{-1}(1 - xi_d | ĝ) for the outage caps of AvgTxPeakInt.
  std::optional<std::array<double, 2>> interference_quantiles;
};

PowerPair alloc_avg_avg(const ChannelDraw& draw, const Multipliers& m,
                        const CsiLevel& csi, const AvgTxAvgInt& regime,
                        const LinkModel& model, const DrawContext& ctx = {});

PowerPair alloc_peak_avg(const ChannelDraw& draw, const Multipliers& m,
                         const CsiLevel& csi, const PeakTxAvgInt& regime,
                         const LinkModel& model, const DrawContext& ctx = {});

PowerPair alloc_avg_peak(const ChannelDraw& draw, const Multipliers& m,
                         const CsiLevel& csi, const AvgTxPeakInt& regime,
                         const LinkModel& model, const DrawContext& ctx = {});

/// Dispatches on the regime. StatisticalBoth has no per-draw rule and throws
/// kInvalidArgument.
PowerPair allocate(const ChannelDraw& draw, const Multipliers& m,
                   const CsiLevel& csi, const ConstraintRegime& regime,
                   const LinkModel& model, const DrawContext& ctx = {});

/// Per-decision outage quantiles F^{-1}(1 - xi_d | ĝ) for the draw.
std::array<double, 2> interference_quantiles(const ChannelDraw& draw,
                                             const AvgTxPeakInt& regime,
                                             double sigma_g2);

}  // namespace cree
