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

namespace cree {

/// Outcome of the spectrum-sensing test performed at the start of a frame.
enum class Decision : int { kIdle = 0, kBusy = 1 };

inline constexpr std::array<Decision, 2> kDecisions = {Decision::kIdle,
                                                       Decision::kBusy};

inline constexpr int index_of(Decision d) { return static_cast<int>(d); }

/// Detector operating point and primary-activity priors.
///
/// The detector enters the model only through its detection and false-alarm
/// probabilities; how they were obtained is irrelevant here.
struct SensingSpec {
  double p_d = 1.0;         // Pr{busy decision | primary active}
  double p_f = 0.0;         // Pr{busy decision | primary idle}
  double prior_idle = 0.4;  // Pr{H0}
  double prior_busy = 0.6;  // Pr{H1}

  /// Throws kInvalidArgument when a probability is out of range or the priors
  /// do not sum to one.
  void validate() const;

  /// Weight of the power sent under decision `d` in the interference budget:
  /// 1 - p_d under an idle decision (missed detection), p_d under busy.
  double interference_weight(Decision d) const {
    return d == Decision::kIdle ? 1.0 - p_d : p_d;
  }
};

struct SensingDerived {
  double pr_idle_decision = 0.0;      // Pr{Ĥ0}
  double pr_busy_decision = 0.0;      // Pr{Ĥ1}
  double post_busy_given_idle = 0.0;  // Pr(H1 | Ĥ0)
  double post_busy_given_busy = 0.0;  // Pr(H1 | Ĥ1)

  double decision_prob(Decision d) const {
    return d == Decision::kIdle ? pr_idle_decision : pr_busy_decision;
  }
  double posterior_busy(Decision d) const {
    return d == Decision::kIdle ? post_busy_given_idle : post_busy_given_busy;
  }
};

/// Decision probabilities and Bayes posteriors of primary activity.
///
/// Throws kPosteriorUndefined when one of the two decisions has probability
/// zero, since the posterior conditioned on it is 0/0.
SensingDerived derive_sensing(const SensingSpec& spec);

}  // namespace cree
