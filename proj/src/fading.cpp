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

#include "cree/fading.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "cree/error.hpp"
#include "normal_stream.hpp"

namespace cree {
namespace {

// Half-width of the s-window. e^{-s^2} at the edge is ~1e-35.
constexpr double kWindow = 9.0;
constexpr std::size_t kCdfNodes = 128;

struct LinkPair {
  double true2;
  double hat2;
};

LinkPair draw_link(const FadingLink& link, detail::NormalStream& rng) {
  const auto [a_re, a_im] = rng.complex_unit();
  const auto [b_re, b_im] = rng.complex_unit();
  const double scale = std::sqrt(link.mean_power);
  const double re = scale * a_re;
  const double im = scale * a_im;
  // Estimate given the true coefficient: shrink toward zero and add the
  // residual spread so that estimate and error are uncorrelated.
  const double shrink = link.mean_power > 0.0
                            ? 1.0 - link.est_error_var / link.mean_power
                            : 1.0;
  const double spread = std::sqrt(link.est_error_var * shrink);
  const double hat_re = shrink * re + spread * b_re;
  const double hat_im = shrink * im + spread * b_im;
  return {re * re + im * im, hat_re * hat_re + hat_im * hat_im};
}

// Density in the s-coordinate, i.e. f(gamma) dgamma/ds.
double s_density(double s, double root_hat, double sigma) {
  const double root_gamma = root_hat + sigma * s;
  if (root_gamma <= 0.0) return 0.0;
  const double z = 2.0 * root_hat * root_gamma / (sigma * sigma);
  return 2.0 * root_gamma / sigma * std::exp(-s * s) * scaled_bessel_i0(z);
}

}  // namespace

void FadingLink::validate() const {
  require(mean_power >= 0.0, "fading mean power must be nonnegative");
  require(est_error_var >= 0.0, "estimation error variance must be nonnegative");
  require(est_error_var <= mean_power,
          "estimation error variance cannot exceed the link mean power");
}

SampleSet sample_links(const FadingLink& tx, const FadingLink& intf,
                       std::uint64_t seed, std::int64_t count) {
  require(count >= 1, "sample count must be positive");
  tx.validate();
  intf.validate();
  SampleSet out;
  out.seed = seed;
  out.count = static_cast<std::size_t>(count);
  out.draws.reserve(out.count);
  detail::NormalStream rng(seed);
  for (std::size_t i = 0; i < out.count; ++i) {
    const LinkPair h = draw_link(tx, rng);
    const LinkPair g = draw_link(intf, rng);
    out.draws.push_back({h.true2, g.true2, h.hat2, g.hat2});
  }
  return out;
}

double scaled_bessel_i0(double x) {
  require(x >= 0.0, "scaled_bessel_i0 needs x >= 0");
  if (x < 500.0) return std::exp(-x) * std::cyl_bessel_i(0.0, x);
  // Hankel asymptotic series; the fourth term is below 1e-11 here.
  const double t = 1.0 / (8.0 * x);
  const double series =
      1.0 + t * (1.0 + t * (9.0 / 2.0 + t * (225.0 / 6.0 + t * 11025.0 / 24.0)));
  return series / std::sqrt(2.0 * std::numbers::pi * x);
}

double cond_pdf_h2(double gamma, double h_hat2, double err_var) {
  if (!(err_var > 0.0)) {
    fail(ErrorCode::kDegenerateDistribution,
         "conditional density needs a positive estimation error variance");
  }
  require(h_hat2 >= 0.0, "|ĥ|^2 must be nonnegative");
  if (gamma < 0.0) return 0.0;
  // exp(-(gamma + a)/v) I0(2 sqrt(a gamma)/v)
  //   = exp(-(sqrt(gamma) - sqrt(a))^2 / v) * [e^{-z} I0(z)]
  const double root_gamma = std::sqrt(gamma);
  const double root_hat = std::sqrt(h_hat2);
  const double d = root_gamma - root_hat;
  const double z = 2.0 * root_hat * root_gamma / err_var;
  return std::exp(-d * d / err_var) * scaled_bessel_i0(z) / err_var;
}

double cond_cdf_power(double q, double hat2, double err_var) {
  require(hat2 >= 0.0, "estimated power must be nonnegative");
  require(err_var >= 0.0, "estimation error variance must be nonnegative");
  if (q < 0.0) return 0.0;
  if (err_var == 0.0) return q >= hat2 ? 1.0 : 0.0;
  const double sigma = std::sqrt(err_var);
  const double root_hat = std::sqrt(hat2);
  const double lo = std::max(-root_hat / sigma, -kWindow);
  const double hi = std::min((std::sqrt(q) - root_hat) / sigma, kWindow);
  if (hi <= lo) return 0.0;
  const auto& rule = gauss_legendre(kCdfNodes);
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.x.size(); ++i) {
    sum += rule.w[i] * s_density(mid + half * rule.x[i], root_hat, sigma);
  }
  return std::clamp(sum * half, 0.0, 1.0);
}

double cond_quantile_g2(double p, double g_hat2, double err_var) {
  require(p > 0.0 && p < 1.0, "quantile level must lie in (0, 1)");
  require(g_hat2 >= 0.0, "|ĝ|^2 must be nonnegative");
  require(err_var >= 0.0, "estimation error variance must be nonnegative");
  if (err_var == 0.0) return g_hat2;

  const double sigma = std::sqrt(err_var);
  const double root_hat = std::sqrt(g_hat2);
  double lo = 0.0;
  double hi = std::pow(root_hat + 4.0 * sigma, 2);
  while (cond_cdf_power(hi, g_hat2, err_var) < p) {
    lo = hi;
    hi *= 2.0;
  }
  // The CDF is smooth and strictly increasing: Newton steps using the density,
  // with a bisection fallback whenever a step leaves the bracket.
  double q = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200 && hi - lo > 1e-12 * (1.0 + hi); ++iter) {
    const double f = cond_cdf_power(q, g_hat2, err_var) - p;
    if (f == 0.0) return q;
    (f < 0.0 ? lo : hi) = q;
    const double slope = q > 0.0 ? cond_pdf_h2(q, g_hat2, err_var) : 0.0;
    double next = slope > 0.0 ? q - f / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - q) <= 1e-10 * (1.0 + q)) return next;
    q = next;
  }
  return q;
}

ConditionalQuadrature::ConditionalQuadrature(double h_hat2, double err_var) {
  require(h_hat2 >= 0.0, "|ĥ|^2 must be nonnegative");
  require(err_var >= 0.0, "estimation error variance must be nonnegative");
  if (err_var == 0.0) {
    nodes_ = {h_hat2};
    weights_ = {1.0};
    return;
  }
  const double sigma = std::sqrt(err_var);
  const double root_hat = std::sqrt(h_hat2);
  const double lo = std::max(-root_hat / sigma, -kWindow);
  const double hi = kWindow;
  const auto& rule = gauss_legendre(kNodes);
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  nodes_.resize(kNodes);
  weights_.resize(kNodes);
  double total = 0.0;
  for (std::size_t i = 0; i < kNodes; ++i) {
    const double s = mid + half * rule.x[i];
    const double root_gamma = root_hat + sigma * s;
    nodes_[i] = root_gamma * root_gamma;
    weights_[i] = rule.w[i] * half * s_density(s, root_hat, sigma);
    total += weights_[i];
  }
  if (!std::isfinite(total) || total <= 0.0) {
    fail(ErrorCode::kQuadratureFailure,
         "conditional quadrature produced a non-finite or empty rule");
  }
}

ConditionalQuadrature ConditionalQuadrature::empirical(
    std::span<const double> gains) {
  require(!gains.empty(), "empirical law needs at least one sample");
  ConditionalQuadrature out;
  out.nodes_.assign(gains.begin(), gains.end());
  out.weights_.assign(gains.size(), 1.0 / static_cast<double>(gains.size()));
  for (double g : out.nodes_) require(g >= 0.0, "gains must be nonnegative");
  return out;
}

const GaussLegendreRule& gauss_legendre(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, std::unique_ptr<GaussLegendreRule>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[n];
  if (slot) return *slot;

  auto rule = std::make_unique<GaussLegendreRule>();
  rule->x.resize(n);
  rule->w.resize(n);
  // Newton on P_n from the Chebyshev-like initial guesses; roots are symmetric.
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double step = p1 / dp;
      x -= step;
      if (std::abs(step) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule->x[i] = -x;
    rule->x[n - 1 - i] = x;
    rule->w[i] = w;
    rule->w[n - 1 - i] = w;
  }
  slot = std::move(rule);
  return *slot;
}

}  // namespace cree
