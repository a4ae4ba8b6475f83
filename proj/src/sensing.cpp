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

#include "cree/sensing.hpp"

#include <cmath>
#include <string>

#include "cree/error.hpp"

namespace cree {
namespace {

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

}  // namespace

void SensingSpec::validate() const {
  require(is_probability(p_d), "p_d must lie in [0, 1]");
  require(is_probability(p_f), "p_f must lie in [0, 1]");
  require(is_probability(prior_idle) && is_probability(prior_busy),
          "priors must lie in [0, 1]");
  require(std::abs(prior_idle + prior_busy - 1.0) <= 1e-12,
          "prior_idle + prior_busy must equal 1");
}

SensingDerived derive_sensing(const SensingSpec& spec) {
  spec.validate();
  SensingDerived out;
  out.pr_busy_decision = spec.prior_idle * spec.p_f + spec.prior_busy * spec.p_d;
  out.pr_idle_decision =
      spec.prior_idle * (1.0 - spec.p_f) + spec.prior_busy * (1.0 - spec.p_d);
  if (out.pr_idle_decision <= 0.0) {
    fail(ErrorCode::kPosteriorUndefined,
         "idle decision has probability 0; Pr(H1 | idle) is undefined");
  }
  if (out.pr_busy_decision <= 0.0) {
    fail(ErrorCode::kPosteriorUndefined,
         "busy decision has probability 0; Pr(H1 | busy) is undefined");
  }
  out.post_busy_given_idle =
      spec.prior_busy * (1.0 - spec.p_d) / out.pr_idle_decision;
  out.post_busy_given_busy = spec.prior_busy * spec.p_d / out.pr_busy_decision;
  return out;
}

}  // namespace cree
