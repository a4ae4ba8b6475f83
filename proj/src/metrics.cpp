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

#include "cree/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cree/error.hpp"
#include "normal_stream.hpp"

namespace cree {
namespace {

// log of p1 e^{-x1} / c1 + p2 e^{-x2} / c2, skipping zero-weight terms.
double log_mixture(double p1, double c1, double x1, double p2, double c2,
                   double x2) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  const double a = p1 > 0.0 ? std::log(p1 / c1) - x1 : kNegInf;
  const double b = p2 > 0.0 ? std::log(p2 / c2) - x2 : kNegInf;
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

struct RunningMean {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::int64_t n = 0;

  void add(double v) {
    sum += v;
    sum_sq += v * v;
    ++n;
  }
  double mean() const { return n > 0 ? sum / n : 0.0; }
  // Variance of the mean.
  double mean_var() const {
    if (n < 2) return 0.0;
    const double m = mean();
    return std::max(0.0, (sum_sq / n - m * m) / (n - 1));
  }
};

}  // namespace

void LinkBudget::validate() const {
  require(n0 > 0.0, "noise variance N0 must be positive");
  require(sigma_s2 >= 0.0, "primary signal variance must be nonnegative");
  require(frame_len > 0, "frame length T must be positive");
  require(sense_len >= 0 && sense_len < frame_len,
          "sensing duration must satisfy 0 <= tau < T");
  require(p_c >= 0.0, "circuit power must be nonnegative");
}

double effective_noise(const SensingDerived& sd, const LinkBudget& lb,
                       Decision d) {
  return lb.n0 + sd.posterior_busy(d) * lb.sigma_s2;
}

double rate_realization(const PowerPair& pp, double h2, const SensingDerived& sd,
                        const LinkBudget& lb) {
  double sum = 0.0;
  for (Decision d : kDecisions) {
    sum += sd.decision_prob(d) *
           std::log2(1.0 + pp[d] * h2 / effective_noise(sd, lb, d));
  }
  return lb.data_fraction() * sum;
}

PowerRule PowerRule::constant(PowerPair pp) {
  return {[pp](const ChannelDraw&) { return pp; }, std::nullopt};
}

double expected_rate(const PowerRule& rule, const SampleSet& samples,
                     const SensingDerived& sd, const LinkBudget& lb) {
  require(!samples.draws.empty(), "expected_rate needs at least one draw");
  double sum = 0.0;
  for (const ChannelDraw& draw : samples.draws) {
    const PowerPair pp = rule.power(draw);
    if (!rule.tx_error_var) {
      sum += rate_realization(pp, draw.h2, sd, lb);
      continue;
    }
    const ConditionalQuadrature quad(draw.h_hat2, *rule.tx_error_var);
    const auto nodes = quad.nodes();
    const auto weights = quad.weights();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      sum += weights[i] * rate_realization(pp, nodes[i], sd, lb);
    }
  }
  return sum / static_cast<double>(samples.draws.size());
}

double energy_efficiency(double rate, double avg_p0, double avg_p1,
                         const SensingDerived& sd, const LinkBudget& lb) {
  const double denom = sd.pr_idle_decision * avg_p0 +
                       sd.pr_busy_decision * avg_p1 + lb.p_c;
  if (!(denom > 0.0)) {
    fail(ErrorCode::kUndefinedEnergyEfficiency,
         "energy efficiency undefined: zero circuit power and zero transmit power");
  }
  return rate / denom;
}

GapBound gap_upper_bound(const PowerRule& rule, const SampleSet& samples,
                         const SensingDerived& sd, const LinkBudget& lb) {
  require(!samples.draws.empty(), "gap_upper_bound needs at least one draw");
  // c1 goes with an active primary, c2 with an idle one.
  const double c1 = lb.n0 + lb.sigma_s2;
  const double c2 = lb.n0;
  std::array<double, 2> expect{};
  for (const ChannelDraw& draw : samples.draws) {
    const PowerPair pp = rule.power(draw);
    for (Decision d : kDecisions) {
      const double busy = sd.posterior_busy(d);
      const double idle = 1.0 - busy;
      const double rx = draw.h2 * pp[d];
      const double numer = busy / c1 + idle / c2;
      const double denom = (1.0 + rx / effective_noise(sd, lb, d)) *
                           (busy / (c1 + rx) + idle / (c2 + rx));
      expect[index_of(d)] +=
          std::log(numer / denom) + busy * lb.sigma_s2 / (lb.n0 + rx);
    }
  }
  GapBound out;
  const double n = static_cast<double>(samples.draws.size());
  for (Decision d : kDecisions) {
    const int k = index_of(d);
    const double nats = expect[k] / n + 1.0 - effective_noise(sd, lb, d) / c1;
    out.per_decision[k] =
        lb.data_fraction() * sd.decision_prob(d) * nats * kLog2E;
    out.total += out.per_decision[k];
  }
  return out;
}

MutualInfoEstimate exact_mi_mc(const PowerRule& rule, const SampleSet& samples,
                               const SensingDerived& sd, const LinkBudget& lb,
                               std::int64_t mc_n, std::uint64_t seed) {
  require(mc_n >= 1000, "exact_mi_mc needs at least 1000 samples");
  require(!samples.draws.empty(), "exact_mi_mc needs at least one draw");
  detail::NormalStream rng(seed);
  std::mt19937_64 hypothesis(seed ^ 0x9e3779b97f4a7c15ULL);
  const double c1 = lb.n0 + lb.sigma_s2;
  const double c2 = lb.n0;
  const std::int64_t pairs = mc_n / 4;  // per decision
  const std::size_t n_draws = samples.draws.size();

  MutualInfoEstimate out;
  double var_rate = 0.0;
  double var_gap = 0.0;
  for (Decision d : kDecisions) {
    const double busy = sd.posterior_busy(d);
    const double idle = 1.0 - busy;
    const double noise = effective_noise(sd, lb, d);
    RunningMean info;
    RunningMean gap;
    RunningMean closed;
    for (std::int64_t j = 0; j < pairs; ++j) {
      const ChannelDraw& draw = samples.draws[static_cast<std::size_t>(j) % n_draws];
      const double power = rule.power(draw)[d];
      const double h = std::sqrt(draw.h2);
      const double rx = draw.h2 * power;
      const bool active =
          static_cast<double>(hypothesis() >> 11) * 0x1.0p-53 < busy;
      const double c = active ? c1 : c2;
      const auto [wr, wi] = rng.complex_unit();
      const auto [xr, xi] = rng.complex_unit();
      const double w_re = std::sqrt(c) * wr;
      const double w_im = std::sqrt(c) * wi;
      const double sx = h * std::sqrt(power);
      const double w2 = w_re * w_re + w_im * w_im;
      const double log_fw =
          log_mixture(busy, c1, w2 / c1, idle, c2, w2 / c2);
      double pair_sum = 0.0;
      for (double sign : {1.0, -1.0}) {
        const double y_re = sx * xr + sign * w_re;
        const double y_im = sx * xi + sign * w_im;
        const double y2 = y_re * y_re + y_im * y_im;
        const double log_fy = log_mixture(busy, c1 + rx, y2 / (c1 + rx), idle,
                                          c2 + rx, y2 / (c2 + rx));
        pair_sum += log_fw - log_fy;
      }
      const double nats = 0.5 * pair_sum;
      const double cf = std::log1p(rx / noise);
      info.add(nats);
      gap.add(nats - cf);
      closed.add(cf);
    }
    const double scale = lb.data_fraction() * sd.decision_prob(d) * kLog2E;
    out.estimate += scale * info.mean();
    out.closed_form += scale * closed.mean();
    out.gap += scale * gap.mean();
    var_rate += scale * scale * info.mean_var();
    var_gap += scale * scale * gap.mean_var();
  }
  out.std_err = std::sqrt(var_rate);
  out.gap_std_err = std::sqrt(var_gap);
  return out;
}

}  // namespace cree
