#include "seb/newton.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "seb/kernels.hpp"
#include "seb/truncation.hpp"

namespace seb {

const char* to_string(Algorithm a) noexcept {
  switch (a) {
    case Algorithm::inexact_newton_cg: return "inewton";
    case Algorithm::classical_newton_cg: return "newton";
    case Algorithm::smoothing_lbfgs: return "lbfgs";
  }
  return "unknown";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) noexcept {
  if (name == "inewton") return Algorithm::inexact_newton_cg;
  if (name == "newton") return Algorithm::classical_newton_cg;
  if (name == "lbfgs") return Algorithm::smoothing_lbfgs;
  return std::nullopt;
}

double StageStats::mean_active_set() const noexcept {
  if (active_set_sizes.empty()) return 0.0;
  const double total = std::accumulate(active_set_sizes.begin(), active_set_sizes.end(), 0.0);
  return total / static_cast<double>(active_set_sizes.size());
}

double default_eps2(double mu) noexcept { return std::max(1e-5, std::min(1e-1, mu / 10.0)); }

double default_eps3(double) noexcept { return 1e-2; }

double SolverConfig::mu(std::size_t k) const {
  if (mu_schedule) return mu_schedule(k);
  return mu0 * std::pow(sigma, static_cast<double>(k));
}

std::size_t SolverConfig::cg_cap(std::size_t n) const noexcept {
  return cg_max_iters > 0 ? cg_max_iters : std::min<std::size_t>(n, 200);
}

void SolverConfig::validate(std::size_t n) const {
  auto require = [](bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
  };
  require(eps1 >= 0.0, "eps1 must be >= 0");
  require(c1 > 0.0 && c1 < 1.0, "c1 must lie in (0, 1)");
  require(beta > 0.0 && beta < 1.0, "beta must lie in (0, 1)");
  if (!mu_schedule) {
    require(mu0 > 0.0 && std::isfinite(mu0), "mu0 must be positive");
    require(sigma > 0.0 && sigma < 1.0, "sigma must lie in (0, 1)");
  }
  require(static_cast<bool>(eps2_schedule), "eps2 schedule is empty");
  require(static_cast<bool>(eps3_schedule), "eps3 schedule is empty");
  require(max_backtracks > 0, "max_backtracks must be positive");
  require(max_inner_iters > 0, "max_inner_iters must be positive");
  require(lbfgs_memory > 0, "lbfgs_memory must be positive");
  require(x0.empty() || x0.size() == n, "x0 dimension does not match the instance");
}

ArmijoResult armijo_search(const Instance& instance, double mu, std::span<const double> x,
                           std::span<const double> d, std::span<const double> g_tilde,
                           double f_x, const SolverConfig& cfg, EvalWorkspace& trial) {
  const double slope = kernels::dot(d, g_tilde);
  if (!(slope < 0.0)) throw LineSearchError("line search: direction is not a descent direction");
  const std::size_t n = x.size();
  Vector x_trial(n);
  ArmijoResult res;
  double alpha = 1.0;
  for (std::size_t l = 0; l <= cfg.max_backtracks; ++l) {
    for (std::size_t j = 0; j < n; ++j) x_trial[j] = x[j] + alpha * d[j];
    build_workspace(instance, x_trial, mu, trial);
    const double f_trial = smoothed_objective(trial);
    if (f_trial <= f_x + cfg.c1 * alpha * slope) {
      res.alpha = alpha;
      res.backtracks = l;
      res.f_new = f_trial;
      return res;
    }
    alpha *= cfg.beta;
  }
  throw LineSearchError("line search failed after " + std::to_string(cfg.max_backtracks) +
                        " backtracks (mu=" + std::to_string(mu) +
                        ", slope=" + std::to_string(slope) + ")");
}

namespace detail {

InnerResult newton_stage(const Instance& instance, double mu, std::span<const double> x_start,
                         const SolverConfig& cfg, bool truncate) {
  const double eps2 = cfg.eps2_schedule(mu);
  const double eps3 = truncate ? cfg.eps3_schedule(mu) : 0.0;
  const std::size_t cg_cap = cfg.cg_cap(instance.dimension());
  const SolveObserver* obs = cfg.observer;

  InnerResult out;
  out.stats.mu = mu;
  out.stats.eps2 = eps2;

  EvalWorkspace ws = build_workspace(instance, x_start, mu);
  EvalWorkspace trial;
  double f_x = smoothed_objective(ws);

  for (std::size_t j = 0;; ++j) {
    const ActiveSet active = build_active_set(ws, eps3);
    const Vector gt = truncated_gradient(ws, active);
    const double g_norm = kernels::norm(gt);
    out.stats.active_set_sizes.push_back(active.size());
    if (g_norm <= eps2) {
      out.stats.final_gradient_norm = g_norm;
      break;
    }
    if (j >= cfg.max_inner_iters)
      throw ConvergenceError("Newton stage at mu=" + std::to_string(mu) + " did not reach |grad| <= " +
                             std::to_string(eps2) + " in " + std::to_string(j) + " iterations");

    const StructuredHessian hess = truncated_hessian(ws, active, gt);
    const LinearOperator op = [&hess](std::span<const double> in, std::span<double> o) {
      hess.apply(in, o);
    };
    const double eta = forcing_term(g_norm);
    const CgOutcome cg = cg_solve(op, gt, eta, cg_cap);
    out.stats.cg_iterations += cg.iterations;
    if (obs && obs->on_cg) obs->on_cg(CgEvent{mu, gt, eta, cg, op});

    const ArmijoResult step = armijo_search(instance, mu, ws.x(), cg.direction, gt, f_x, cfg, trial);
    out.stats.backtracks += step.backtracks;
    if (obs && obs->on_armijo)
      obs->on_armijo(ArmijoEvent{instance, mu, ws.x(), cg.direction, gt, f_x, step});

    std::swap(ws, trial);
    f_x = step.f_new;
    ++out.stats.inner_iterations;
  }
  out.stats.final_smoothed_objective = f_x;
  out.x.assign(ws.x().begin(), ws.x().end());
  return out;
}

SolveReport run_continuation(const Instance& instance, const SolverConfig& cfg,
                             Algorithm algorithm, const StageSolver& stage) {
  constexpr std::size_t kMaxStages = 400;
  // mu_k = 0.1^k lands a few ulps above the decimal eps1 it is meant to hit.
  constexpr double kStopSlack = 1.0 + 1e-9;

  cfg.validate(instance.dimension());
  const auto t0 = std::chrono::steady_clock::now();

  SolveReport report;
  report.algorithm = algorithm;
  Vector x = cfg.x0.empty() ? Vector(instance.dimension(), 0.0) : cfg.x0;
  double last_mu = 0.0;

  for (std::size_t k = 0;; ++k) {
    if (k >= kMaxStages) throw ConvergenceError("mu schedule did not reach eps1");
    const double mu = cfg.mu(k);
    if (!(mu > 0.0)) throw ConvergenceError("mu schedule produced a non-positive value");
    InnerResult r = stage(mu, x);
    x = std::move(r.x);
    last_mu = mu;
    if (cfg.observer && cfg.observer->on_stage_end)
      cfg.observer->on_stage_end(StageEvent{instance, x, r.stats});
    report.stages.push_back(std::move(r.stats));

    const bool done = cfg.include_final_mu_stage ? mu <= cfg.eps1 * kStopSlack
                                                 : cfg.mu(k + 1) <= cfg.eps1 * kStopSlack;
    if (done) break;
  }

  report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report.objective_nonsmooth = objective_nonsmooth(instance, x);
  report.objective_smoothed_final = smoothed_objective(build_workspace(instance, x, last_mu));
  report.x_final = std::move(x);
  return report;
}

}  // namespace detail

InnerResult solve_inner(const Instance& instance, double mu, std::span<const double> x_start,
                        const SolverConfig& cfg) {
  return detail::newton_stage(instance, mu, x_start, cfg, true);
}

SolveReport solve(const Instance& instance, const SolverConfig& cfg) {
  return detail::run_continuation(
      instance, cfg, Algorithm::inexact_newton_cg,
      [&](double mu, std::span<const double> x) { return solve_inner(instance, mu, x, cfg); });
}

}  // namespace seb
