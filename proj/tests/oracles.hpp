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

// Independent reference computations used by the tests.

#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace oracle {

inline constexpr double kLog2E = 1.4426950408889634;

/// Maximizer of a unimodal function on [lo, hi] by golden-section search.
/// `better(x, y)` answers f(x) > f(y).
inline double golden_section(const std::function<bool(double, double)>& better,
                             double lo, double hi) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - r * (b - a), x2 = a + r * (b - a);
  while (b - a > 1e-14 * (1.0 + std::abs(b))) {
    const double width = b - a;
    if (better(x1, x2)) {
      b = x2;
      x2 = x1;
      x1 = b - r * (b - a);
    } else {
      a = x1;
      x1 = x2;
      x2 = a + r * (b - a);
    }
    if (b - a >= width) break;
  }
  return 0.5 * (a + b);
}

/// Per-draw Lagrangian of one sensing decision,
///   L(p) = c * sum_i w_i ln(1 + p g_i / n) - price * p,
/// maximized over [0, cap]. L(x) - L(y) is formed with log1p so the search
/// resolves the maximizer far below sqrt(machine epsilon).
struct Lagrangian {
  double scale;  // (T - tau)/T Pr{d} log2(e)
  double noise;
  double price;
  std::vector<double> gains;
  std::vector<double> weights;

  bool better(double x, double y) const {
    double diff = 0.0;
    for (std::size_t i = 0; i < gains.size(); ++i) {
      diff += weights[i] * std::log1p((x - y) * gains[i] / (noise + y * gains[i]));
    }
    return scale * diff - price * (x - y) > 0.0;
  }

  double argmax(std::optional<double> cap) const {
    // The maximizer never exceeds scale / price.
    double hi = price > 0.0 ? scale / price : 1e6;
    if (cap) hi = std::min(hi, *cap);
    return golden_section([this](double x, double y) { return better(x, y); }, 0.0,
                          hi);
  }
};

/// Joint law of (true state, decision) by enumerating the four events.
struct BayesTable {
  double joint[2][2];  // [state][decision]

  BayesTable(double p_d, double p_f, double prior_idle, double prior_busy) {
    joint[0][0] = prior_idle * (1.0 - p_f);
    joint[0][1] = prior_idle * p_f;
    joint[1][0] = prior_busy * (1.0 - p_d);
    joint[1][1] = prior_busy * p_d;
  }
  double decision(int k) const { return joint[0][k] + joint[1][k]; }
  double busy_given(int k) const { return joint[1][k] / decision(k); }
};

/// Composite Simpson rule with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace oracle
