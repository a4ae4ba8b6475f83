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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace cree {

/// Rayleigh link with an MMSE-style estimate: coefficient = estimate + error,
/// estimate ~ CN(0, mean_power - est_error_var), error ~ CN(0, est_error_var).
struct FadingLink {
  double mean_power = 1.0;
  double est_error_var = 0.0;  // 0 means the transmitter knows the link

  void validate() const;
};

/// Squared magnitudes of one block-fading realization. Every field is filled
/// whatever CSI level will later read it.
struct ChannelDraw {
  double h2 = 0.0;      // |h|^2, transmission link
  double g2 = 0.0;      // |g|^2, interference link
  double h_hat2 = 0.0;  // |ĥ|^2
  double g_hat2 = 0.0;  // |ĝ|^2
};

struct SampleSet {
  std::vector<ChannelDraw> draws;
  std::uint64_t seed = 0;
  std::size_t count = 0;
};

/// Draws `count` i.i.d. realizations of both links. The true coefficient is
/// drawn first and the estimate conditionally on it, so the true channel of
/// draw i does not depend on est_error_var. Output is a pure function of
/// (tx, intf, seed, count) and does not depend on the standard library's
/// distribution implementations.
SampleSet sample_links(const FadingLink& tx, const FadingLink& intf,
                       std::uint64_t seed, std::int64_t count);

/// e^{-x} I0(x) for x >= 0 without overflow.
double scaled_bessel_i0(double x);

/// Density of |h|^2 at `gamma` given |ĥ|^2 = h_hat2 when the estimation error
/// has variance err_var (a scaled noncentral chi-square with two degrees of
/// freedom). Throws kDegenerateDistribution when err_var <= 0: the law is then
/// a point mass and callers take that branch explicitly.
double cond_pdf_h2(double gamma, double h_hat2, double err_var);

/// Pr(|x|^2 <= q | |x̂|^2 = hat2) for the same conditional law; err_var == 0
/// gives the point-mass step.
double cond_cdf_power(double q, double hat2, double err_var);

/// Smallest q with Pr(|g|^2 <= q | ĝ) = p. Returns g_hat2 when err_var == 0.
/// Throws kInvalidArgument unless 0 < p < 1.
double cond_quantile_g2(double p, double g_hat2, double err_var);

/// Fixed-size rule for E[phi(|h|^2) | ĥ]: nodes gamma_i >= 0 and weights w_i
/// with sum_i w_i phi(gamma_i) approximating the conditional expectation.
///
/// The rule is Gauss-Legendre in s = (sqrt(gamma) - sqrt(h_hat2)) / sigma,
/// where the density is a smooth Gaussian-like bump, so one table resolves
/// both the nearly-central and the nearly-deterministic regimes.
class ConditionalQuadrature {
 public:
  static constexpr std::size_t kNodes = 256;

  ConditionalQuadrature() = default;
  ConditionalQuadrature(double h_hat2, double err_var);

  /// Equal weights on the given gains: the empirical law of a sample.
  static ConditionalQuadrature empirical(std::span<const double> gains);

  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

/// Gauss-Legendre nodes and weights on [-1, 1]; cached per size.
struct GaussLegendreRule {
  std::vector<double> x;
  std::vector<double> w;
};
const GaussLegendreRule& gauss_legendre(std::size_t n);

}  // namespace cree
