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

#include "cree/cree.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "cree/error.hpp"
#include "cree/figures.hpp"
#include "cree/scenario_io.hpp"
#include "cree/solver.hpp"
#include "cree/validate.hpp"

struct cree_scenario {
  cree::ScenarioParams params;
};

struct cree_report {
  cree::SolveReport report;
};

namespace {

thread_local std::string g_last_error;

cree_status set_error(cree_status status, const std::string& what) {
  g_last_error = what;
  return status;
}

template <class F>
cree_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return CREE_OK;
  } catch (const cree::Error& e) {
    return set_error(static_cast<cree_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(CREE_INTERNAL_ERROR, "out of memory");
  } catch (const std::exception& e) {
    return set_error(CREE_INTERNAL_ERROR, e.what());
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void need(const void* p, const char* what) {
  cree::require(p != nullptr, std::string(what) + " must not be null");
}

}  // namespace

extern "C" {

const char* cree_last_error(void) { return g_last_error.c_str(); }

const char* cree_status_name(cree_status status) {
  switch (status) {
    case CREE_OK: return "ok";
    case CREE_INVALID_ARGUMENT: return "invalid_argument";
    case CREE_POSTERIOR_UNDEFINED: return "posterior_undefined";
    case CREE_DEGENERATE_DISTRIBUTION: return "degenerate_distribution";
    case CREE_UNBOUNDED_WATER_LEVEL: return "unbounded_water_level";
    case CREE_QUADRATURE_FAILURE: return "quadrature_failure";
    case CREE_UNDEFINED_EE: return "undefined_energy_efficiency";
    case CREE_NON_CONVERGENCE: return "non_convergence";
    case CREE_PARSE_ERROR: return "parse_error";
    case CREE_IO_ERROR: return "io_error";
    case CREE_UNKNOWN_KEY: return "unknown_key";
    case CREE_INTERNAL_ERROR: return "internal_error";
  }
  return "unknown_status";
}

cree_status cree_scenario_new(cree_scenario** out) {
  return guarded([&] {
    need(out, "out");
    *out = new cree_scenario{};
  });
}

cree_status cree_scenario_load(const char* path, cree_scenario** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new cree_scenario{cree::load_scenario(path)};
  });
}

cree_status cree_scenario_parse(const char* text, cree_scenario** out) {
  return guarded([&] {
    need(text, "text");
    need(out, "out");
    *out = new cree_scenario{cree::parse_scenario(text)};
  });
}

cree_status cree_scenario_set(cree_scenario* scenario, const char* key,
                              const char* value) {
  return guarded([&] {
    need(scenario, "scenario");
    need(key, "key");
    need(value, "value");
    scenario->params.set(key, value);
  });
}

cree_status cree_scenario_get(const cree_scenario* scenario, const char* key,
                              char** out) {
  return guarded([&] {
    need(scenario, "scenario");
    need(key, "key");
    need(out, "out");
    *out = dup_string(scenario->params.get(key));
  });
}

void cree_scenario_free(cree_scenario* scenario) { delete scenario; }

cree_status cree_solve(const cree_scenario* scenario, cree_report** out) {
  return guarded([&] {
    need(scenario, "scenario");
    need(out, "out");
    const cree::Scenario sc = scenario->params.scenario();
    const cree::SolverConfig cfg = scenario->params.config();
    *out = new cree_report{cree::solve(sc, cfg)};
  });
}

int cree_report_ok(const cree_report* report) {
  return report != nullptr && report->report.ok() ? 1 : 0;
}

cree_status cree_report_get(const cree_report* report, const char* field,
                            double* out) {
  return guarded([&] {
    need(report, "report");
    need(field, "field");
    need(out, "out");
    const cree::SolveReport& r = report->report;
    const std::string f(field);
    if (f == "ee_star") *out = r.ee_star;
    else if (f == "ee_std_err") *out = r.ee_std_err;
    else if (f == "rate") *out = r.rate;
    else if (f == "avg_p0") *out = r.avg_p0;
    else if (f == "avg_p1") *out = r.avg_p1;
    else if (f == "p_tot") *out = r.p_tot;
    else if (f == "interference") *out = r.interference;
    else if (f == "lambda") *out = r.lambda;
    else if (f == "nu") *out = r.nu;
    else if (f == "alpha_star") *out = r.alpha_star;
    else if (f == "f_star") *out = r.f_star;
    else if (f == "outer_iters") *out = r.outer_iters;
    else if (f == "inner_iters") *out = r.inner_iters;
    else cree::fail(cree::ErrorCode::kUnknownKey, "unknown report field '" + f + "'");
  });
}

size_t cree_report_trace_size(const cree_report* report) {
  return report == nullptr ? 0 : report->report.alpha_trace.size();
}

cree_status cree_report_trace(const cree_report* report, double* out,
                              size_t capacity) {
  return guarded([&] {
    need(report, "report");
    const auto& trace = report->report.alpha_trace;
    cree::require(capacity >= trace.size(), "trace buffer too small");
    if (!trace.empty()) need(out, "out");
    std::copy(trace.begin(), trace.end(), out);
  });
}

cree_status cree_report_format(const cree_report* report, char** out) {
  return guarded([&] {
    need(report, "report");
    need(out, "out");
    *out = dup_string(cree::format_report(report->report));
  });
}

void cree_report_free(cree_report* report) { delete report; }

cree_status cree_sweep(const cree_scenario* scenario, const char* key,
                       const double* values, size_t count, char** csv) {
  return guarded([&] {
    need(scenario, "scenario");
    need(key, "key");
    need(csv, "csv");
    cree::require(count > 0, "sweep needs at least one value");
    need(values, "values");
    *csv = dup_string(cree::run_sweep(scenario->params, key, {values, count}));
  });
}

cree_status cree_figure(int id, const char* out_dir, uint64_t seed,
                        int64_t mc_count) {
  return guarded([&] {
    need(out_dir, "out_dir");
    cree::require(mc_count >= 0, "mc_count must be nonnegative");
    cree::FigureOptions opt;
    opt.seed = seed;
    opt.mc_count = mc_count;
    cree::write_figure(cree::run_figure(id, opt), out_dir);
  });
}

cree_status cree_validate(uint64_t seed, double eps, char** report,
                          int* all_pass) {
  return guarded([&] {
    need(report, "report");
    need(all_pass, "all_pass");
    cree::require(eps > 0.0, "eps must be positive");
    const auto results = cree::run_validation({seed, eps});
    bool ok = true;
    for (const auto& r : results) ok = ok && r.pass;
    *report = dup_string(cree::format_validation(results));
    *all_pass = ok ? 1 : 0;
  });
}

void cree_string_free(char* s) { std::free(s); }

}  // extern "C"
