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

#include "cree/solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>

#include <boost/math/tools/toms748_solve.hpp>

#include "cree/error.hpp"

namespace cree {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool has_tx_constraint(const ConstraintRegime& r) {
  return !std::holds_alternative<PeakTxAvgInt>(r);
}

bool has_interference_constraint(const ConstraintRegime& r) {
  return !std::holds_alternative<AvgTxPeakInt>(r);
}

double tx_limit(const ConstraintRegime& r) {
  if (const auto* a = std::get_if<AvgTxAvgInt>(&r)) return a->p_avg;
  if (const auto* a = std::get_if<AvgTxPeakInt>(&r)) return a->p_avg;
  return kInf;
}

double interference_limit(const ConstraintRegime& r) {
  if (const auto* a = std::get_if<AvgTxAvgInt>(&r)) return a->q_avg;
  if (const auto* a = std::get_if<PeakTxAvgInt>(&r)) return a->q_avg;
  return kInf;
}

struct Moments {
  double sr = 0.0, st = 0.0, srr = 0.0, stt = 0.0, srt = 0.0;
  double sp0 = 0.0, sp1 = 0.0, si = 0.0;
  std::size_t n = 0;

  void add(double r, double t) {
    sr += r;
    st += t;
    srr += r * r;
    stt += t * t;
    srt += r * t;
    ++n;
  }
};

void finish(const Moments& mo, std::size_t power_units, Evaluation& e) {
  const double n = static_cast<double>(mo.n);
  const double pn = static_cast<double>(power_units);
  e.rate = mo.sr / n;
  e.tx_power = mo.st / n;
  e.avg_p0 = mo.sp0 / pn;
  e.avg_p1 = mo.sp1 / pn;
  e.interference = mo.si / pn;
  e.rate_var = std::max(0.0, mo.srr / n - e.rate * e.rate);
  e.tx_var = std::max(0.0, mo.stt / n - e.tx_power * e.tx_power);
  e.rate_tx_cov = mo.srt / n - e.rate * e.tx_power;
  e.units = mo.n;
}

// The rule used for statistical knowledge: a transmitter that sees no
// realization behaves like one with an uninformative estimate.
const CsiLevel kStatisticalRule = ImperfectBoth{0.0, 0.0};

}  // namespace

void Scenario::validate() const {
  sensing.validate();
  derive_sensing(sensing);
  budget.validate();
  cree::validate(regime);
  cree::validate(csi);
}

void SolverConfig::validate() const {
  require(eps > 0.0 && delta > 0.0 && step > 0.0,
          "solver tolerances and step must be positive");
  require(max_outer >= 1 && max_inner >= 1, "iteration caps must be at least 1");
  require(subgradient_iters >= 0, "subgradient budget must be nonnegative");
  require(alpha_init >= 0.0 && lambda_init >= 0.0 && nu_init >= 0.0,
          "initial alpha and multipliers must be nonnegative");
  require(mc_count >= 1, "mc_count must be positive");
}

ExpectationEngine::ExpectationEngine(const Scenario& scenario,
                                     const SolverConfig& config)
    : scenario_(scenario), model_(scenario.sensing, scenario.budget) {
  scenario_.validate();
  config.validate();
  double sigma_h2 = 0.0;
  if (const auto* c = std::get_if<ImperfectBoth>(&scenario_.csi)) {
    sigma_h2 = c->sigma_h2;
  }
  samples_ = sample_links({1.0, sigma_h2},
                          {1.0, interference_error_var(scenario_.csi)},
                          config.seed, config.mc_count);
  prepare();
}

ExpectationEngine::ExpectationEngine(const Scenario& scenario, SampleSet samples)
    : scenario_(scenario),
      model_(scenario.sensing, scenario.budget),
      samples_(std::move(samples)) {
  scenario_.validate();
  require(!samples_.draws.empty(), "sample set must not be empty");
  prepare();
}

void ExpectationEngine::prepare() {
  const CsiLevel& csi = scenario_.csi;
  const auto* peak_int = std::get_if<AvgTxPeakInt>(&scenario_.regime);
  statistical_ = std::holds_alternative<StatisticalBoth>(csi);
  if (statistical_) {
    std::vector<double> gains;
    gains.reserve(samples_.draws.size());
    double g_sum = 0.0;
    for (const ChannelDraw& d : samples_.draws) {
      gains.push_back(d.h2);
      g_sum += d.g2;
    }
    empirical_ = ConditionalQuadrature::empirical(gains);
    const double g_mean = g_sum / static_cast<double>(samples_.draws.size());
    mean_draw_ = {0.0, g_mean, 0.0, g_mean};
    if (peak_int != nullptr) {
      // Outage cap against the sampled law of |g|^2.
      std::vector<double> g2;
      g2.reserve(samples_.draws.size());
      for (const ChannelDraw& d : samples_.draws) g2.push_back(d.g2);
      auto quantile = [&g2](double p) {
        const auto n = static_cast<double>(g2.size());
        const auto k = static_cast<std::size_t>(
            std::min(n - 1.0, std::max(0.0, std::ceil(p * n) - 1.0)));
        std::nth_element(g2.begin(), g2.begin() + static_cast<std::ptrdiff_t>(k), g2.end());
        return g2[k];
      };
      quantiles_.push_back({quantile(1.0 - peak_int->xi0), quantile(1.0 - peak_int->xi1)});
    }
    return;
  }
  if (const auto* c = std::get_if<ImperfectBoth>(&csi)) {
    quadratures_.reserve(samples_.draws.size());
    for (const ChannelDraw& d : samples_.draws) {
      quadratures_.emplace_back(d.h_hat2, c->sigma_h2);
    }
  }
  if (peak_int != nullptr && !std::holds_alternative<PerfectBoth>(csi)) {
    quantiles_.reserve(samples_.draws.size());
    for (const ChannelDraw& d : samples_.draws) {
      quantiles_.push_back(
          interference_quantiles(d, *peak_int, interference_error_var(csi)));
    }
  }
}

PowerPair ExpectationEngine::power(std::size_t draw, const Multipliers& m) const {
  DrawContext ctx;
  if (statistical_) {
    ctx.tx_quadrature = &empirical_;
    if (!quantiles_.empty()) ctx.interference_quantiles = quantiles_.front();
    return allocate(mean_draw_, m, kStatisticalRule, scenario_.regime, model_, ctx);
  }
  if (!quadratures_.empty()) ctx.tx_quadrature = &quadratures_[draw];
  if (!quantiles_.empty()) ctx.interference_quantiles = quantiles_[draw];
  return allocate(samples_.draws.at(draw), m, scenario_.csi, scenario_.regime,
                  model_, ctx);
}

Evaluation ExpectationEngine::evaluate(const Multipliers& m) const {
  ++evaluations_;
  const SensingDerived& sd = model_.derived();
  const LinkBudget& lb = model_.budget();
  const double pr0 = sd.pr_idle_decision;
  const double pr1 = sd.pr_busy_decision;
  const double rho0 = model_.interference_weight(Decision::kIdle);
  const double rho1 = model_.interference_weight(Decision::kBusy);
  Evaluation e;
  Moments mo;
  try {
    if (statistical_) {
      const PowerPair pp = power(0, m);
      const double t = pr0 * pp.p0 + pr1 * pp.p1;
      for (const ChannelDraw& d : samples_.draws) {
        mo.add(rate_realization(pp, d.h2, sd, lb), t);
      }
      mo.sp0 = pp.p0;
      mo.sp1 = pp.p1;
      mo.si = (rho0 * pp.p0 + rho1 * pp.p1) * mean_draw_.g2;
      finish(mo, 1, e);
      return e;
    }
    for (std::size_t i = 0; i < samples_.draws.size(); ++i) {
      const ChannelDraw& d = samples_.draws[i];
      const PowerPair pp = power(i, m);
      double r = 0.0;
      if (quadratures_.empty()) {
        r = rate_realization(pp, d.h2, sd, lb);
      } else {
        const auto nodes = quadratures_[i].nodes();
        const auto weights = quadratures_[i].weights();
        for (std::size_t j = 0; j < nodes.size(); ++j) {
          r += weights[j] * rate_realization(pp, nodes[j], sd, lb);
        }
      }
      mo.add(r, pr0 * pp.p0 + pr1 * pp.p1);
      mo.sp0 += pp.p0;
      mo.sp1 += pp.p1;
      mo.si += (rho0 * pp.p0 + rho1 * pp.p1) *
               priced_interference_gain(d, scenario_.csi);
    }
  } catch (const Error& err) {
    if (err.code() != ErrorCode::kUnboundedWaterLevel) throw;
    Evaluation out;
    out.unbounded = true;
    out.tx_power = kInf;
    out.interference = kInf;
    return out;
  }
  finish(mo, samples_.draws.size(), e);
  return e;
}

namespace {

// State of one inner solve: counts evaluations and builds residuals.
class InnerProblem {
 public:
  InnerProblem(double alpha, const ExpectationEngine& engine,
               const SolverConfig& config)
      : alpha_(alpha), engine_(engine), config_(config) {
    const ConstraintRegime& r = engine.scenario().regime;
    has_tx_ = has_tx_constraint(r);
    has_int_ = has_interference_constraint(r);
    p_avg_ = tx_limit(r);
    q_avg_ = interference_limit(r);
  }

  Evaluation eval(Multipliers m) {
    if (++iterations_ > config_.max_inner) {
      fail(ErrorCode::kNonConvergence,
           "inner loop exceeded max_inner expectation evaluations");
    }
    m.alpha = alpha_;
    return engine_.evaluate(m);
  }

  double tx_slack(const Evaluation& e) const {
    return e.unbounded ? -kInf : p_avg_ - e.tx_power;
  }
  double int_slack(const Evaluation& e) const {
    return e.unbounded ? -kInf : q_avg_ - e.interference;
  }

  std::vector<Residual> residuals(const Multipliers& m,
                                  const Evaluation& e) const {
    std::vector<Residual> out;
    if (has_tx_) out.push_back({"tx_power", p_avg_, e.tx_power, m.lambda});
    if (has_int_) {
      out.push_back({"interference", q_avg_, e.interference, m.nu});
    }
    return out;
  }

  bool satisfied(const Multipliers& m, const Evaluation& e) const {
    if (e.unbounded) return false;
    for (const Residual& r : residuals(m, e)) {
      if (r.slack() < -config_.delta) return false;
      if (std::abs(r.complementary()) > config_.delta) return false;
    }
    return true;
  }

  bool has_tx() const { return has_tx_; }
  bool has_int() const { return has_int_; }
  double alpha() const { return alpha_; }
  int iterations() const { return iterations_; }
  const SolverConfig& config() const { return config_; }

 private:
  double alpha_;
  const ExpectationEngine& engine_;
  const SolverConfig& config_;
  bool has_tx_ = false;
  bool has_int_ = false;
  double p_avg_ = kInf;
  double q_avg_ = kInf;
  int iterations_ = 0;
};

// One point of a monotone line search: the searched multiplier x, the slack
// of its constraint, and the full state there.
struct Probe {
  double x = 0.0;
  double slack = 0.0;
  Multipliers m;
  Evaluation e;
};

// Smallest-residual x >= 0 with slack(x) >= 0 and x * slack(x) <= delta/4
// for a nondecreasing slack. Returns nullopt when the slack stays infinite
// at positive x (no finite multiplier can price the constraint).
std::optional<Probe> monotone_root(const std::function<Probe(double)>& fn,
                                   double warm, double delta) {
  const double target = 0.25 * delta;
  auto done = [&](const Probe& p) {
    return p.slack >= 0.0 && p.x * p.slack <= target;
  };
  Probe lo = fn(0.0);
  if (lo.slack >= 0.0) return lo;

  Probe hi;
  double x = warm > 0.0 ? warm : 1.0;
  for (int k = 0;; ++k) {
    if (k > 400) {
      fail(ErrorCode::kNonConvergence, "multiplier bracket search diverged");
    }
    Probe p = fn(x);
    if (p.slack == -kInf) return std::nullopt;
    if (p.slack >= 0.0) {
      hi = p;
      break;
    }
    lo = p;
    x *= 4.0;
  }
  for (int k = 0; lo.slack == -kInf; ++k) {
    if (k > 400) {
      fail(ErrorCode::kNonConvergence, "multiplier bracket search diverged");
    }
    const double mid = lo.x == 0.0 ? hi.x / 16.0 : 0.5 * (lo.x + hi.x);
    Probe p = fn(mid);
    (p.slack >= 0.0 ? hi : lo) = p;
  }
  if (done(hi)) return hi;

  std::map<double, Probe> seen{{lo.x, lo}, {hi.x, hi}};
  auto f = [&](double v) {
    Probe p = fn(v);
    seen[v] = p;
    return p.slack;
  };
  auto tol = [&](double a, double b) {
    for (double v : {a, b}) {
      auto it = seen.find(v);
      if (it != seen.end() && done(it->second)) return true;
    }
    return b - a <= 1e-15 * (1.0 + std::abs(b));
  };
  std::uintmax_t max_iter = 200;
  const auto [a, b] =
      boost::math::tools::toms748_solve(f, lo.x, hi.x, lo.slack, hi.slack, tol,
                                        max_iter);
  (void)a;
  (void)b;
  // Both x and slack(x) are nondecreasing, so the smallest feasible probe has
  // the smallest complementary residual.
  for (const auto& [v, p] : seen) {
    if (p.slack >= 0.0) return p;
  }
  return hi;
}

InnerResult package(InnerProblem& prob, const Multipliers& m, const Evaluation& e) {
  InnerResult out;
  out.multipliers = m;
  out.multipliers.alpha = prob.alpha();
  out.evaluation = e;
  out.residuals = prob.residuals(m, e);
  out.iterations = prob.iterations();
  out.converged = prob.satisfied(m, e);
  return out;
}

}  // namespace

InnerResult subgradient_inner(double alpha, const Multipliers& start,
                              const ExpectationEngine& engine,
                              const SolverConfig& config) {
  require(config.step > 0.0, "subgradient step must be positive");
  require(alpha >= 0.0, "alpha must be nonnegative");
  InnerProblem prob(alpha, engine, config);
  Multipliers m = start;
  m.lambda = prob.has_tx() ? std::max(0.0, m.lambda) : 0.0;
  m.nu = prob.has_int() ? std::max(0.0, m.nu) : 0.0;

  // Constant-step projected subgradient updates.
  const Multipliers warm = m;
  for (int k = 0; k <= config.subgradient_iters; ++k) {
    const Evaluation e = prob.eval(m);
    if (prob.satisfied(m, e)) return package(prob, m, e);
    if (e.unbounded || k == config.subgradient_iters) break;
    if (prob.has_tx()) {
      m.lambda = std::max(0.0, m.lambda - config.step * prob.tx_slack(e));
    }
    if (prob.has_int()) {
      m.nu = std::max(0.0, m.nu - config.step * prob.int_slack(e));
    }
  }

  // Exact line searches on the dual: each slack is nondecreasing in its own
  // multiplier.
  auto lambda_probe = [&](double nu) {
    return [&, nu](double lambda) {
      Probe p;
      p.x = lambda;
      p.m = {lambda, nu, alpha};
      p.e = prob.eval(p.m);
      p.slack = prob.tx_slack(p.e);
      return p;
    };
  };
  auto nu_probe = [&](double lambda) {
    return [&, lambda](double nu) {
      Probe p;
      p.x = nu;
      p.m = {lambda, nu, alpha};
      p.e = prob.eval(p.m);
      p.slack = prob.int_slack(p.e);
      return p;
    };
  };
  auto unpriced = [] {
    fail(ErrorCode::kUnboundedWaterLevel,
         "no finite multiplier bounds the water level");
  };

  if (!prob.has_int()) {
    const auto p = monotone_root(lambda_probe(0.0), warm.lambda, config.delta);
    if (!p) unpriced();
    return package(prob, p->m, p->e);
  }
  if (!prob.has_tx()) {
    const auto p = monotone_root(nu_probe(0.0), warm.nu, config.delta);
    if (!p) unpriced();
    return package(prob, p->m, p->e);
  }

  // Both average constraints. Try each one alone first.
  const auto only_tx = monotone_root(lambda_probe(0.0), warm.lambda, config.delta);
  if (!only_tx) unpriced();
  if (prob.int_slack(only_tx->e) >= 0.0) {
    return package(prob, only_tx->m, only_tx->e);
  }
  const auto only_int = monotone_root(nu_probe(0.0), warm.nu, config.delta);
  if (only_int && prob.tx_slack(only_int->e) >= 0.0) {
    return package(prob, only_int->m, only_int->e);
  }
  // Both bind. With lambda*(nu) the exact tx root, the interference slack is
  // the derivative of a convex function of nu, hence nondecreasing.
  auto nested = [&](double nu) {
    const auto inner = monotone_root(lambda_probe(nu), warm.lambda, config.delta);
    if (!inner) unpriced();
    Probe p = *inner;
    p.x = nu;
    p.slack = prob.int_slack(p.e);
    return p;
  };
  const double nu_warm =
      only_int ? only_int->m.nu : std::max(warm.nu, 1.0);
  const auto p = monotone_root(nested, nu_warm, config.delta);
  if (!p) unpriced();
  return package(prob, p->m, p->e);
}

FValue eval_F(double alpha, const ExpectationEngine& engine,
              const SolverConfig& config, const Multipliers& start) {
  FValue out;
  out.inner = subgradient_inner(alpha, start, engine, config);
  const Evaluation& e = out.inner.evaluation;
  out.value = e.rate - alpha * (e.tx_power + engine.model().budget().p_c);
  return out;
}

SolveReport dinkelbach_solve(const ExpectationEngine& engine,
                             const SolverConfig& config) {
  config.validate();
  const Scenario& sc = engine.scenario();
  const double p_c = sc.budget.p_c;
  SolveReport rep;
  rep.regime = regime_name(sc.regime);
  rep.csi = csi_name(sc.csi);

  double alpha = config.alpha_init;
  Multipliers m{config.lambda_init, config.nu_init, alpha};
  FValue fv;
  bool converged = false;
  for (int n = 1; n <= config.max_outer; ++n) {
    fv = eval_F(alpha, engine, config, m);
    m = fv.inner.multipliers;
    rep.alpha_trace.push_back(alpha);
    rep.outer_iters = n;
    rep.inner_iters += fv.inner.iterations;
    if (std::abs(fv.value) <= config.eps) {
      converged = true;
      break;
    }
    const Evaluation& e = fv.inner.evaluation;
    const double denom = e.tx_power + p_c;
    if (!(denom > 0.0)) {
      fail(ErrorCode::kUndefinedEnergyEfficiency,
           "energy efficiency undefined: zero circuit power and zero transmit power");
    }
    alpha = e.rate / denom;
  }

  const Evaluation& e = fv.inner.evaluation;
  rep.status = converged && fv.inner.converged ? "ok" : "maxiter";
  rep.alpha_star = alpha;
  rep.f_star = fv.value;
  rep.rate = e.rate;
  rep.avg_p0 = e.avg_p0;
  rep.avg_p1 = e.avg_p1;
  rep.p_tot = e.tx_power;
  rep.interference = e.interference;
  rep.lambda = fv.inner.multipliers.lambda;
  rep.nu = fv.inner.multipliers.nu;
  rep.residuals = fv.inner.residuals;
  rep.ee_star = energy_efficiency(e.rate, e.avg_p0, e.avg_p1,
                                  engine.model().derived(), sc.budget);
  // Delta method for a ratio of sample means.
  const double denom = e.tx_power + p_c;
  const double unit_var = e.rate_var - 2.0 * rep.ee_star * e.rate_tx_cov +
                          rep.ee_star * rep.ee_star * e.tx_var;
  rep.ee_std_err = e.units > 0 ? std::sqrt(std::max(0.0, unit_var) /
                                           static_cast<double>(e.units)) /
                                     denom
                               : 0.0;
  return rep;
}

SolveReport solve_statistical(const ExpectationEngine& engine,
                              const SolverConfig& config) {
  require(std::holds_alternative<StatisticalBoth>(engine.scenario().csi),
          "solve_statistical needs statistical channel knowledge");
  return dinkelbach_solve(engine, config);
}

SolveReport solve(const Scenario& scenario, const SolverConfig& config) {
  const ExpectationEngine engine(scenario, config);
  if (std::holds_alternative<StatisticalBoth>(scenario.csi)) {
    return solve_statistical(engine, config);
  }
  return dinkelbach_solve(engine, config);
}

}  // namespace cree
