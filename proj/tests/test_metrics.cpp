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

#include <cmath>
#include <random>

#include "cree/error.hpp"
#include "cree/metrics.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace cree;

namespace {

// Differential entropy (nats) of a circular complex Gaussian mixture with
// weights w and variances c, by quadrature over the radius.
double mixture_entropy(double w1, double c1, double c2) {
  auto f = [&](double r2) {
    return w1 * std::exp(-r2 / c1) / (M_PI * c1) +
           (1.0 - w1) * std::exp(-r2 / c2) / (M_PI * c2);
  };
  const double top = 60.0 * std::max(c1, c2);
  // Over C, d(area) = pi d(r^2).
  return -oracle::simpson([&](double r2) {
    const double v = f(r2);
    return v > 0.0 ? M_PI * v * std::log(v) : 0.0;
  }, 0.0, top, 200000);
}

// Mutual information (bits) between CN(0, s) input and its output through
// mixture noise with busy weight w: h(Y) - h(W).
double mixture_mi(double s, double w, double c1, double c2) {
  return (mixture_entropy(w, c1 + s, c2 + s) - mixture_entropy(w, c1, c2)) * oracle::kLog2E;
}

SampleSet constant_channel(double h2) {
  SampleSet s;
  s.draws.push_back({h2, 1.0, h2, 1.0});
  s.count = 1;
  return s;
}

}  // namespace

TEST_CASE("rate realization hand values") {
  const LinkBudget lb;
  const SensingDerived perfect = derive_sensing({1.0, 0.0, 0.4, 0.6});
  CHECK(rate_realization({0, 0}, 1.0, perfect, lb) == 0.0);
  CHECK(rate_realization({1, 0}, 0.1, perfect, lb) == doctest::Approx(0.36).epsilon(1e-14));
  const SensingDerived imperfect = derive_sensing({0.8, 0.1, 0.4, 0.6});
  CHECK(rate_realization({0.35, 0}, 1.0, imperfect, lb) ==
        doctest::Approx(0.432).epsilon(1e-14));
  CHECK(effective_noise(imperfect, lb, Decision::kIdle) == doctest::Approx(0.35));
}

TEST_CASE("rate is concave in the power pair") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  const SensingDerived sd = derive_sensing({0.8, 0.1, 0.4, 0.6});
  const LinkBudget lb;
  for (int i = 0; i < 1000; ++i) {
    const PowerPair a{u(rng), u(rng)};
    const PowerPair b{u(rng), u(rng)};
    const double h2 = u(rng);
    const double mid = rate_realization({(a.p0 + b.p0) / 2, (a.p1 + b.p1) / 2}, h2, sd, lb);
    CHECK(mid >= (rate_realization(a, h2, sd, lb) + rate_realization(b, h2, sd, lb)) / 2 -
                     1e-12);
  }
}

TEST_CASE("expected rate is the mean of realizations") {
  const SampleSet s = sample_links({1, 0}, {1, 0}, 2, 500);
  const SensingDerived sd = derive_sensing({0.8, 0.1, 0.4, 0.6});
  const LinkBudget lb;
  CHECK(expected_rate(PowerRule::constant({0, 0}), s, sd, lb) == 0.0);
  double mean = 0.0;
  for (const ChannelDraw& d : s.draws) mean += rate_realization({0.7, 0.2}, d.h2, sd, lb);
  mean /= s.draws.size();
  CHECK(expected_rate(PowerRule::constant({0.7, 0.2}), s, sd, lb) ==
        doctest::Approx(mean).epsilon(1e-12));
}

TEST_CASE("imperfect-transmit evaluation approaches the direct one") {
  const SampleSet s = sample_links({1, 0}, {1, 0}, 4, 300);
  const SensingDerived sd = derive_sensing({0.8, 0.1, 0.4, 0.6});
  const LinkBudget lb;
  PowerRule direct{[](const ChannelDraw& d) { return PowerPair{d.h_hat2, 0.5}; },
                   std::nullopt};
  PowerRule quad = direct;
  quad.tx_error_var = 1e-6;
  CHECK(std::abs(expected_rate(direct, s, sd, lb) - expected_rate(quad, s, sd, lb)) <=
        1e-3);
}

TEST_CASE("energy efficiency") {
  const SensingDerived sd = derive_sensing({1.0, 0.0, 0.4, 0.6});
  LinkBudget lb;
  CHECK(energy_efficiency(0.0, 1, 1, sd, lb) == 0.0);
  CHECK(energy_efficiency(0.36, 1, 0, sd, lb) == doctest::Approx(0.72).epsilon(1e-14));
  const double base = energy_efficiency(0.36, 1, 0.3, sd, lb);
  lb.p_c = 0.2;
  CHECK(energy_efficiency(0.36, 1, 0.3, sd, lb) < base);
  lb.p_c = 0.0;
  CHECK_THROWS_AS(energy_efficiency(0.1, 0, 0, sd, lb), Error);
}

TEST_CASE("energy efficiency is unimodal along rays") {
  const SampleSet s = sample_links({1, 0}, {1, 0}, 8, 2000);
  const SensingDerived sd = derive_sensing({0.8, 0.1, 0.4, 0.6});
  const LinkBudget lb;
  for (const PowerPair dir : {PowerPair{1, 0}, PowerPair{0.3, 1}, PowerPair{1, 1}}) {
    std::vector<double> ee;
    for (int i = 1; i <= 100; ++i) {
      const double t = 0.05 * i;
      const PowerPair pp{t * dir.p0, t * dir.p1};
      const double r = expected_rate(PowerRule::constant(pp), s, sd, lb);
      ee.push_back(energy_efficiency(r, pp.p0, pp.p1, sd, lb));
    }
    // No interior point lies strictly below both neighbours' running maxima.
    bool decreasing = false;
    bool ok = true;
    for (std::size_t i = 1; i < ee.size(); ++i) {
      if (ee[i] < ee[i - 1] - 1e-15) decreasing = true;
      else if (decreasing && ee[i] > ee[i - 1] + 1e-15) ok = false;
    }
    CHECK(ok);
  }
}

TEST_CASE("gap bound is nonnegative, decreasing in N0 and dominates the measured gap") {
  const SampleSet s = sample_links({1, 0}, {1, 0}, 3, 2000);
  const SensingDerived sd = derive_sensing({0.8, 0.1, 0.4, 0.6});
  const PowerRule rule = PowerRule::constant({1.0, 1.0});
  double prev = 1e300;
  for (double n0 : {0.1, 0.3, 0.6, 1.0, 1.5, 2.0}) {
    LinkBudget lb;
    lb.n0 = n0;
    const GapBound b = gap_upper_bound(rule, s, sd, lb);
    CHECK(b.total >= 0.0);
    CHECK(b.total <= prev + 1e-12);
    CHECK(b.total == doctest::Approx(b.per_decision[0] + b.per_decision[1]));
    prev = b.total;
    if (n0 == 0.1 || n0 == 1.0) {
      const MutualInfoEstimate mi = exact_mi_mc(rule, s, sd, lb, 40000, 9);
      CHECK(b.total >= mi.gap - 3.0 * mi.gap_std_err);
    }
  }
}

TEST_CASE("mutual information matches a quadrature oracle on a fixed channel") {
  const LinkBudget lb;
  const double h2 = 0.8;
  const PowerPair pp{1.2, 0.6};
  const SampleSet s = constant_channel(h2);
  for (const SensingSpec spec : {SensingSpec{1.0, 0.0, 0.4, 0.6},
                                 SensingSpec{0.8, 0.2, 0.4, 0.6}}) {
    const SensingDerived sd = derive_sensing(spec);
    double expected = 0.0;
    for (Decision d : kDecisions) {
      const double mi = mixture_mi(pp[d] * h2, sd.posterior_busy(d),
                                   lb.n0 + lb.sigma_s2, lb.n0);
      expected += lb.data_fraction() * sd.decision_prob(d) * mi;
    }
    const MutualInfoEstimate est =
        exact_mi_mc(PowerRule::constant(pp), s, sd, lb, 200000, 17);
    CHECK(std::abs(est.estimate - expected) <= 3.0 * est.std_err);
    CHECK(est.estimate >= est.closed_form - 3.0 * est.std_err);
  }
}

TEST_CASE("mutual information collapses without primary signal") {
  LinkBudget lb;
  lb.sigma_s2 = 0.0;
  const SampleSet s = sample_links({1, 0}, {1, 0}, 5, 1000);
  const SensingDerived sd = derive_sensing({0.8, 0.1, 0.4, 0.6});
  const MutualInfoEstimate est =
      exact_mi_mc(PowerRule::constant({1.0, 0.5}), s, sd, lb, 100000, 3);
  CHECK(std::abs(est.estimate - est.closed_form) <= 3.0 * est.std_err + 1e-12);
}

TEST_CASE("budget validation") {
  LinkBudget lb;
  lb.sense_len = 100;
  CHECK_THROWS_AS(lb.validate(), Error);
  lb = LinkBudget{};
  lb.n0 = 0.0;
  CHECK_THROWS_AS(lb.validate(), Error);
}
