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
#include <functional>
#include <optional>

#include "cree/fading.hpp"
#include "cree/sensing.hpp"

namespace cree {

inline constexpr double kLog2E = 1.4426950408889634;

/// Frame timing, noise and power-consumption constants of the secondary link.
struct LinkBudget {
  double n0 = 0.1;        // noise variance N0
  double sigma_s2 = 1.0;  // received primary-signal variance
  int frame_len = 100;    // T symbols per frame
  int sense_len = 10;     // tau symbols spent sensing
  double p_c = 0.1;       // circuit power

  void validate() const;

  /// (T - tau) / T, the share of the frame carrying data.
  double data_fraction() const {
    return static_cast<double>(frame_len - sense_len) / frame_len;
  }
};

/// Transmit powers under the idle and busy sensing decisions.
struct PowerPair {
  double p0 = 0.0;
  double p1 = 0.0;

  double operator[](Decision d) const { return d == Decision::kIdle ? p0 : p1; }
  double& operator[](Decision d) { return d == Decision::kIdle ? p0 : p1; }
};

/// Noise-plus-expected-primary-interference seen under decision d:
/// N0 + Pr(H1 | d) sigma_s^2.
double effective_noise(const SensingDerived& sd, const LinkBudget& lb,
                       Decision d);

/// Achievable rate (bits per channel use) of one fading realization with the
/// mixture disturbance replaced by Gaussian noise of equal variance.
double rate_realization(const PowerPair& pp, double h2, const SensingDerived& sd,
                        const LinkBudget& lb);

/// Per-realization power mapping. When `tx_error_var` is set the transmitter
/// only knows ĥ, and the rate of each draw is averaged over |h|^2 given ĥ.
struct PowerRule {
  std::function<PowerPair(const ChannelDraw&)> power;
  std::optional<double> tx_error_var;

  static PowerRule constant(PowerPair pp);
};

double expected_rate(const PowerRule& rule, const SampleSet& samples,
                     const SensingDerived& sd, const LinkBudget& lb);

/// Rate per unit of total consumed power (transmit average plus circuit).
/// Throws kUndefinedEnergyEfficiency when the denominator is zero.
double energy_efficiency(double rate, double avg_p0, double avg_p1,
                         const SensingDerived& sd, const LinkBudget& lb);

/// Upper bound on the gap between the mixture-noise mutual information and
/// the closed-form rate, in bits. Per-decision terms are exposed for audit
/// and sum to `total`.
struct GapBound {
  double total = 0.0;
  std::array<double, 2> per_decision{};
};

GapBound gap_upper_bound(const PowerRule& rule, const SampleSet& samples,
                         const SensingDerived& sd, const LinkBudget& lb);

/// Monte Carlo estimate of the mutual information with Gaussian input and the
/// true Gaussian-mixture disturbance, in bits.
struct MutualInfoEstimate {
  double estimate = 0.0;     // R_G
  double std_err = 0.0;
  double closed_form = 0.0;  // rate_realization averaged over the same draws
  double gap = 0.0;          // R_G - closed_form, estimated per sample
  double gap_std_err = 0.0;
};

/// Uses mc_n noise/input samples (mc_n >= 1000) cycling through the channel
/// draws, with antithetic noise pairs (x, w) / (x, -w). Standard errors are
/// computed over pair means.
MutualInfoEstimate exact_mi_mc(const PowerRule& rule, const SampleSet& samples,
                               const SensingDerived& sd, const LinkBudget& lb,
                               std::int64_t mc_n, std::uint64_t seed);

}  // namespace cree
