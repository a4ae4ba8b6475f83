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

#include "cree/scenario_io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <variant>

#include "cree/error.hpp"

namespace cree {
namespace {

using Field = std::variant<double ScenarioParams::*, int ScenarioParams::*,
                           std::int64_t ScenarioParams::*,
                           std::uint64_t ScenarioParams::*,
                           std::string ScenarioParams::*>;

struct KeyEntry {
  std::string_view key;
  Field field;
};

const std::array<KeyEntry, 25> kTable = {{
    {"n0", &ScenarioParams::n0},
    {"sigma_s2", &ScenarioParams::sigma_s2},
    {"prior_idle", &ScenarioParams::prior_idle},
    {"T", &ScenarioParams::frame_len},
    {"tau", &ScenarioParams::sense_len},
    {"p_c", &ScenarioParams::p_c},
    {"p_d", &ScenarioParams::p_d},
    {"p_f", &ScenarioParams::p_f},
    {"csi", &ScenarioParams::csi},
    {"sigma_h2", &ScenarioParams::sigma_h2},
    {"sigma_g2", &ScenarioParams::sigma_g2},
    {"regime", &ScenarioParams::regime},
    {"p_avg_db", &ScenarioParams::p_avg_db},
    {"q_avg_db", &ScenarioParams::q_avg_db},
    {"p_pk_db", &ScenarioParams::p_pk_db},
    {"q_pk_db", &ScenarioParams::q_pk_db},
    {"xi", &ScenarioParams::xi},
    {"mc_count", &ScenarioParams::mc_count},
    {"seed", &ScenarioParams::seed},
    {"eps", &ScenarioParams::eps},
    {"delta", &ScenarioParams::delta},
    {"step", &ScenarioParams::step},
    {"max_outer", &ScenarioParams::max_outer},
    {"max_inner", &ScenarioParams::max_inner},
    {"subgradient_iters", &ScenarioParams::subgradient_iters},
}};

const std::array<std::string_view, 25> kKeys = [] {
  std::array<std::string_view, 25> out{};
  for (std::size_t i = 0; i < kTable.size(); ++i) out[i] = kTable[i].key;
  return out;
}();

const KeyEntry* find_key(std::string_view key) {
  for (const KeyEntry& e : kTable) {
    if (e.key == key) return &e;
  }
  return nullptr;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <class T>
T parse_value(std::string_view key, std::string_view text) {
  T v{};
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    fail(ErrorCode::kParseError, "invalid value '" + std::string(text) +
                                     "' for key '" + std::string(key) + "'");
  }
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(v)) {
      fail(ErrorCode::kParseError,
           "value for key '" + std::string(key) + "' must be finite");
    }
  }
  return v;
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

void ScenarioParams::set(std::string_view key, std::string_view value) {
  const KeyEntry* entry = find_key(key);
  if (entry == nullptr) {
    fail(ErrorCode::kUnknownKey, "unknown key '" + std::string(key) + "'");
  }
  std::visit(Overloaded{
                 [&](std::string ScenarioParams::*f) {
                   const std::string v(value);
                   if (key == "csi") {
                     if (v != "perfect" && v != "imp_int" && v != "imp_both" &&
                         v != "statistical") {
                       fail(ErrorCode::kParseError,
                            "csi must be one of perfect|imp_int|imp_both|statistical");
                     }
                   } else if (v != "avg_avg" && v != "peak_avg" && v != "avg_peak") {
                     fail(ErrorCode::kParseError,
                          "regime must be one of avg_avg|peak_avg|avg_peak");
                   }
                   this->*f = v;
                 },
                 [&](auto ScenarioParams::*f) {
                   using T = std::remove_reference_t<decltype(this->*f)>;
                   this->*f = parse_value<T>(key, value);
                 },
             },
             entry->field);
}

std::string ScenarioParams::get(std::string_view key) const {
  const KeyEntry* entry = find_key(key);
  if (entry == nullptr) {
    fail(ErrorCode::kUnknownKey, "unknown key '" + std::string(key) + "'");
  }
  return std::visit(Overloaded{
                        [&](std::string ScenarioParams::*f) { return this->*f; },
                        [&](double ScenarioParams::*f) {
                          return format_number(this->*f);
                        },
                        [&](auto ScenarioParams::*f) {
                          return std::to_string(this->*f);
                        },
                    },
                    entry->field);
}

std::span<const std::string_view> ScenarioParams::keys() { return kKeys; }

bool ScenarioParams::is_numeric(std::string_view key) {
  const KeyEntry* entry = find_key(key);
  return entry != nullptr &&
         !std::holds_alternative<std::string ScenarioParams::*>(entry->field);
}

Scenario ScenarioParams::scenario() const {
  Scenario s;
  s.sensing = {p_d, p_f, prior_idle, 1.0 - prior_idle};
  s.budget = {n0, sigma_s2, frame_len, sense_len, p_c};
  const double p_avg = db_to_linear(p_avg_db);
  const double q_avg = db_to_linear(q_avg_db);
  const double p_pk = db_to_linear(p_pk_db);
  const double q_pk = db_to_linear(q_pk_db);
  if (regime == "avg_avg") {
    s.regime = AvgTxAvgInt{p_avg, q_avg};
  } else if (regime == "peak_avg") {
    s.regime = PeakTxAvgInt{p_pk, p_pk, q_avg};
  } else {
    s.regime = AvgTxPeakInt{p_avg, q_pk, q_pk, xi, xi};
  }
  if (csi == "perfect") {
    s.csi = PerfectBoth{};
  } else if (csi == "imp_int") {
    s.csi = PerfectTxImperfectInt{sigma_g2};
  } else if (csi == "imp_both") {
    s.csi = ImperfectBoth{sigma_h2, sigma_g2};
  } else {
    s.csi = StatisticalBoth{};
  }
  s.validate();
  return s;
}

SolverConfig ScenarioParams::config() const {
  SolverConfig c;
  c.eps = eps;
  c.delta = delta;
  c.step = step;
  c.max_outer = max_outer;
  c.max_inner = max_inner;
  c.subgradient_iters = subgradient_iters;
  c.mc_count = mc_count;
  c.seed = seed;
  c.validate();
  return c;
}

ScenarioParams parse_scenario(std::string_view text) {
  ScenarioParams out;
  int line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (eq == std::string_view::npos) {
      fail(ErrorCode::kParseError, where + "expected 'key = value'");
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      fail(ErrorCode::kParseError, where + "expected 'key = value'");
    }
    try {
      out.set(key, value);
    } catch (const Error& e) {
      throw Error(e.code(), where + e.what());
    }
  }
  return out;
}

ScenarioParams load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIoError, "cannot open scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string format_report(const SolveReport& r) {
  std::string out;
  auto line = [&](std::string_view k, const std::string& v) {
    out.append(k).append("=").append(v).append("\n");
  };
  line("status", r.status);
  line("regime", r.regime);
  line("csi", r.csi);
  line("ee_star", format_number(r.ee_star));
  line("ee_std_err", format_number(r.ee_std_err));
  line("rate", format_number(r.rate));
  line("avg_p0", format_number(r.avg_p0));
  line("avg_p1", format_number(r.avg_p1));
  line("p_tot", format_number(r.p_tot));
  line("interference", format_number(r.interference));
  line("lambda", format_number(r.lambda));
  line("nu", format_number(r.nu));
  line("alpha_star", format_number(r.alpha_star));
  line("f_star", format_number(r.f_star));
  line("outer_iters", std::to_string(r.outer_iters));
  line("inner_iters", std::to_string(r.inner_iters));
  line("warm_start", r.warm_start ? "true" : "false");
  for (const Residual& res : r.residuals) {
    line("residual_" + res.name + "_slack", format_number(res.slack()));
    line("residual_" + res.name + "_complementary",
         format_number(res.complementary()));
  }
  std::string trace;
  for (std::size_t i = 0; i < r.alpha_trace.size(); ++i) {
    if (i > 0) trace += ",";
    trace += format_number(r.alpha_trace[i]);
  }
  line("alpha_trace", trace);
  return out;
}

std::string sweep_row(double sweep_value, const SolveReport& r) {
  std::string out = format_number(sweep_value);
  for (double v : {r.ee_star, r.rate, r.avg_p0, r.avg_p1, r.p_tot, r.lambda, r.nu}) {
    out += "," + format_number(v);
  }
  out += "," + std::to_string(r.outer_iters) + "," + r.status + "\n";
  return out;
}

std::string run_sweep(const ScenarioParams& base, std::string_view key,
                      std::span<const double> values) {
  const KeyEntry* entry = find_key(key);
  if (entry == nullptr) {
    fail(ErrorCode::kUnknownKey, "unknown sweep key '" + std::string(key) + "'");
  }
  require(ScenarioParams::is_numeric(key),
          "sweep key '" + std::string(key) + "' is not a numeric field");
  std::string out(kSweepHeader);
  out += "\n";
  for (double v : values) {
    ScenarioParams p = base;
    std::visit(Overloaded{
                   [](std::string ScenarioParams::*) {},
                   [&](double ScenarioParams::*f) { p.*f = v; },
                   [&](auto ScenarioParams::*f) {
                     using T = std::remove_reference_t<decltype(p.*f)>;
                     require(v == std::floor(v) && v >= 0.0,
                             "sweep values for '" + std::string(key) +
                                 "' must be nonnegative integers");
                     p.*f = static_cast<T>(v);
                   },
               },
               entry->field);
    SolveReport r;
    try {
      r = solve(p.scenario(), p.config());
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNonConvergence) throw;
      const double nan = std::nan("");
      r.status = "maxiter";
      r.ee_star = r.rate = r.avg_p0 = r.avg_p1 = r.p_tot = r.lambda = r.nu = nan;
    }
    out += sweep_row(v, r);
  }
  return out;
}

}  // namespace cree
