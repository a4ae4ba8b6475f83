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

#include "cree/allocation.hpp"

#include <algorithm>
#include <cmath>

#include "cree/error.hpp"

namespace cree {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// rate_scale * sum_i w_i gamma_i / (noise + P gamma_i) and its derivative.
struct KernelValue {
  double f;
  double slope;
};

KernelValue kernel(const ConditionalQuadrature& quad, double power, double scale,
                   double noise) {
  const auto nodes = quad.nodes();
  const auto weights = quad.weights();
  double f = 0.0;
  double slope = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double inv = 1.0 / (noise + power * nodes[i]);
    const double t = weights[i] * nodes[i] * inv;
    f += t;
    slope -= t * nodes[i] * inv;
  }
  return {scale * f, scale * slope};
}

[[noreturn]] void unbounded(Decision d) {
  fail(ErrorCode::kUnboundedWaterLevel,
       std::string("water level is unbounded under the ") +
           (d == Decision::kIdle ? "idle" : "busy") +
           " decision: zero marginal power price and no cap");
}

// Optimal power for one decision given the marginal price and an optional cap.
double decision_power(const ChannelDraw& draw, double price,
                      std::optional<double> cap, Decision d, const CsiLevel& csi,
                      const LinkModel& model, const DrawContext& ctx) {
  if (const auto* both = std::get_if<ImperfectBoth>(&csi)) {
    std::optional<ConditionalQuadrature> local;
    const ConditionalQuadrature* quad = ctx.tx_quadrature;
    if (quad == nullptr) {
      local.emplace(draw.h_hat2, both->sigma_h2);
      quad = &*local;
    }
    if (cap) {
      // f is decreasing: f(cap) >= price means the root lies beyond the cap.
      const double at_cap =
          kernel(*quad, *cap, model.rate_scale(d), model.noise(d)).f;
      if (at_cap >= price) return *cap;
    }
    const std::optional<double> root = fixed_point_power(*quad, price, d, model);
    if (!root) {
      if (cap) return *cap;
      unbounded(d);
    }
    return cap ? std::min(*cap, *root) : *root;
  }
  if (draw.h2 <= 0.0) return 0.0;
  if (!(price > 0.0)) {
    if (cap) return *cap;
    unbounded(d);
  }
  const double p = water_fill(draw.h2, price, d, model);
  return cap ? std::min(*cap, p) : p;
}

double outage_cap(double q_pk, double quantile) {
  return q_pk / quantile;
}

}  // namespace

void validate(const ConstraintRegime& regime) {
  std::visit(Overloaded{
                 [](const AvgTxAvgInt& r) {
                   require(r.p_avg >= 0.0 && r.q_avg >= 0.0,
                           "constraint limits must be nonnegative");
                 },
                 [](const PeakTxAvgInt& r) {
                   require(r.p_pk0 >= 0.0 && r.p_pk1 >= 0.0 && r.q_avg >= 0.0,
                           "constraint limits must be nonnegative");
                 },
                 [](const AvgTxPeakInt& r) {
                   require(r.p_avg >= 0.0 && r.q_pk0 >= 0.0 && r.q_pk1 >= 0.0,
                           "constraint limits must be nonnegative");
                   require(r.xi0 > 0.0 && r.xi0 < 1.0 && r.xi1 > 0.0 && r.xi1 < 1.0,
                           "outage thresholds must lie in (0, 1)");
                 },
             },
             regime);
}

std::string regime_name(const ConstraintRegime& regime) {
  return std::visit(Overloaded{
                        [](const AvgTxAvgInt&) { return std::string("avg_avg"); },
                        [](const PeakTxAvgInt&) { return std::string("peak_avg"); },
                        [](const AvgTxPeakInt&) { return std::string("avg_peak"); },
                    },
                    regime);
}

void validate(const CsiLevel& csi) {
  auto check = [](double v) {
    require(v >= 0.0 && v < 1.0, "estimation error variances must lie in [0, 1)");
  };
  std::visit(Overloaded{
                 [](const PerfectBoth&) {},
                 [&](const PerfectTxImperfectInt& c) { check(c.sigma_g2); },
                 [&](const ImperfectBoth& c) {
                   check(c.sigma_h2);
                   check(c.sigma_g2);
                 },
                 [](const StatisticalBoth&) {},
             },
             csi);
}

std::string csi_name(const CsiLevel& csi) {
  return std::visit(
      Overloaded{
          [](const PerfectBoth&) { return std::string("perfect"); },
          [](const PerfectTxImperfectInt&) { return std::string("imp_int"); },
          [](const ImperfectBoth&) { return std::string("imp_both"); },
          [](const StatisticalBoth&) { return std::string("statistical"); },
      },
      csi);
}

double interference_error_var(const CsiLevel& csi) {
  if (const auto* c = std::get_if<PerfectTxImperfectInt>(&csi)) return c->sigma_g2;
  if (const auto* c = std::get_if<ImperfectBoth>(&csi)) return c->sigma_g2;
  return 0.0;
}

double priced_interference_gain(const ChannelDraw& draw, const CsiLevel& csi) {
  if (std::holds_alternative<PerfectTxImperfectInt>(csi) ||
      std::holds_alternative<ImperfectBoth>(csi)) {
    return draw.g_hat2 + interference_error_var(csi);
  }
  return draw.g2;
}

void Multipliers::validate() const {
  require(lambda >= 0.0 && nu >= 0.0 && alpha >= 0.0,
          "multipliers and alpha must be nonnegative");
}

LinkModel::LinkModel(const SensingSpec& sensing, const LinkBudget& budget)
    : sensing_(sensing), derived_(derive_sensing(sensing)), budget_(budget) {
  budget_.validate();
  for (Decision d : kDecisions) {
    noise_[index_of(d)] = effective_noise(derived_, budget_, d);
    rate_scale_[index_of(d)] =
        budget_.data_fraction() * derived_.decision_prob(d) * kLog2E;
  }
}

double power_price(const ConstraintRegime& regime, const Multipliers& m,
                   Decision d, double interference_gain, const LinkModel& model) {
  const double pr = model.decision_prob(d);
  const double rho = model.interference_weight(d);
  return std::visit(
      Overloaded{
          [&](const AvgTxAvgInt&) {
            return (m.lambda + m.alpha) * pr + m.nu * rho * interference_gain;
          },
          [&](const PeakTxAvgInt&) {
            return m.alpha * pr + m.nu * rho * interference_gain;
          },
          [&](const AvgTxPeakInt&) { return (m.lambda + m.alpha) * pr; },
      },
      regime);
}

double water_fill(double h2, double price, Decision d, const LinkModel& model) {
  if (h2 <= 0.0) return 0.0;
  if (!(price > 0.0)) unbounded(d);
  return std::max(0.0, model.rate_scale(d) / price - model.noise(d) / h2);
}

std::optional<double> fixed_point_power(const ConditionalQuadrature& quad,
                                        double omega, Decision d,
                                        const LinkModel& model) {
  const double scale = model.rate_scale(d);
  const double noise = model.noise(d);
  KernelValue at = kernel(quad, 0.0, scale, noise);
  if (!std::isfinite(at.f) || !std::isfinite(at.slope)) {
    fail(ErrorCode::kQuadratureFailure, "fixed-point integrand is not finite");
  }
  if (omega >= at.f) return 0.0;
  if (!(omega > 0.0)) return std::nullopt;

  // f is convex and strictly decreasing, so Newton steps started left of the
  // root stay left of it and increase monotonically. A bracket [lo, hi] is
  // kept as a guard against rounding stalls.
  double p = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < 500; ++iter) {
    const double step = (at.f - omega) / -at.slope;
    double next = p + step;
    if (!(next < hi)) next = std::isfinite(hi) ? 0.5 * (p + hi) : 2.0 * p + 1.0;
    at = kernel(quad, next, scale, noise);
    if (!std::isfinite(at.f) || !std::isfinite(at.slope) || at.slope >= 0.0) {
      fail(ErrorCode::kQuadratureFailure, "fixed-point integrand is not finite");
    }
    if (at.f < omega) {
      hi = next;
      continue;
    }
    const double moved = next - p;
    p = next;
    if (moved <= 1e-12 * (1.0 + p) || at.f - omega <= 1e-15 * omega) break;
  }
  return p;
}

double solve_fixed_point(double g_hat2, double h_hat2, const Multipliers& m,
                         Decision d, const LinkModel& model,
                         const ImperfectBoth& csi) {
  m.validate();
  const ConditionalQuadrature quad(h_hat2, csi.sigma_h2);
  const double omega = (m.lambda + m.alpha) * model.decision_prob(d) +
                       m.nu * model.interference_weight(d) * (g_hat2 + csi.sigma_g2);
  const std::optional<double> root = fixed_point_power(quad, omega, d, model);
  if (!root) unbounded(d);
  return *root;
}

PeakThresholds peak_thresholds(double h2, const Multipliers& m, Decision d,
                               double peak, double shift, const LinkModel& model) {
  const double slope = m.nu * model.interference_weight(d);
  if (!(slope > 0.0)) return {};
  const double base = m.alpha * model.decision_prob(d);
  const double scale = model.rate_scale(d);
  const double noise = model.noise(d);
  PeakThresholds out;
  out.upper = (scale * h2 / noise - base) / slope - shift;
  out.lower = (scale * h2 / (peak * h2 + noise) - base) / slope - shift;
  return out;
}

PowerPair alloc_avg_avg(const ChannelDraw& draw, const Multipliers& m,
                        const CsiLevel& csi, const AvgTxAvgInt& regime,
                        const LinkModel& model, const DrawContext& ctx) {
  require(!std::holds_alternative<StatisticalBoth>(csi),
          "statistical CSI has no per-draw power rule");
  const ConstraintRegime r = regime;
  const double gain = priced_interference_gain(draw, csi);
  PowerPair out;
  for (Decision d : kDecisions) {
    out[d] = decision_power(draw, power_price(r, m, d, gain, model), std::nullopt,
                            d, csi, model, ctx);
  }
  return out;
}

PowerPair alloc_peak_avg(const ChannelDraw& draw, const Multipliers& m,
                         const CsiLevel& csi, const PeakTxAvgInt& regime,
                         const LinkModel& model, const DrawContext& ctx) {
  require(!std::holds_alternative<StatisticalBoth>(csi),
          "statistical CSI has no per-draw power rule");
  const ConstraintRegime r = regime;
  const double gain = priced_interference_gain(draw, csi);
  PowerPair out;
  for (Decision d : kDecisions) {
    const double peak = regime.peak(d);
    if (std::holds_alternative<ImperfectBoth>(csi)) {
      out[d] = decision_power(draw, power_price(r, m, d, gain, model), peak, d, csi,
                              model, ctx);
      continue;
    }
    // Three-branch rule in the interference gain the transmitter observes.
    const double shift = interference_error_var(csi);
    const double observed = gain - shift;
    const PeakThresholds th = peak_thresholds(draw.h2, m, d, peak, shift, model);
    if (!th.upper) {
      out[d] = decision_power(draw, power_price(r, m, d, gain, model), peak, d, csi,
                              model, ctx);
    } else if (observed >= *th.upper) {
      out[d] = 0.0;
    } else if (observed <= *th.lower) {
      out[d] = peak;
    } else {
      const double price = power_price(r, m, d, gain, model);
      out[d] = std::clamp(model.rate_scale(d) / price - model.noise(d) / draw.h2,
                          0.0, peak);
    }
  }
  return out;
}

std::array<double, 2> interference_quantiles(const ChannelDraw& draw,
                                             const AvgTxPeakInt& regime,
                                             double sigma_g2) {
  std::array<double, 2> out{};
  out[0] = cond_quantile_g2(1.0 - regime.xi0, draw.g_hat2, sigma_g2);
  out[1] = regime.xi1 == regime.xi0
               ? out[0]
               : cond_quantile_g2(1.0 - regime.xi1, draw.g_hat2, sigma_g2);
  return out;
}

PowerPair alloc_avg_peak(const ChannelDraw& draw, const Multipliers& m,
                         const CsiLevel& csi, const AvgTxPeakInt& regime,
                         const LinkModel& model, const DrawContext& ctx) {
  require(!std::holds_alternative<StatisticalBoth>(csi),
          "statistical CSI has no per-draw power rule");
  const ConstraintRegime r = regime;
  std::array<double, 2> gains{draw.g2, draw.g2};
  if (!std::holds_alternative<PerfectBoth>(csi)) {
    gains = ctx.interference_quantiles
                ? *ctx.interference_quantiles
                : interference_quantiles(draw, regime, interference_error_var(csi));
  }
  PowerPair out;
  for (Decision d : kDecisions) {
    const double gain = gains[index_of(d)];
    // A zero interference gain leaves the decision uncapped.
    const std::optional<double> cap =
        gain > 0.0 ? std::optional<double>(outage_cap(regime.peak(d), gain))
                   : std::nullopt;
    out[d] = decision_power(draw, power_price(r, m, d, 0.0, model), cap, d, csi,
                            model, ctx);
  }
  return out;
}

PowerPair allocate(const ChannelDraw& draw, const Multipliers& m,
                   const CsiLevel& csi, const ConstraintRegime& regime,
                   const LinkModel& model, const DrawContext& ctx) {
  return std::visit(
      Overloaded{
          [&](const AvgTxAvgInt& r) {
            return alloc_avg_avg(draw, m, csi, r, model, ctx);
          },
          [&](const PeakTxAvgInt& r) {
            return alloc_peak_avg(draw, m, csi, r, model, ctx);
          },
          [&](const AvgTxPeakInt& r) {
            return alloc_avg_peak(draw, m, csi, r, model, ctx);
          },
      },
      regime);
}

}  // namespace cree
