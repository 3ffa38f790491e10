#include "seb/baselines.hpp"

#include <cmath>

#include "seb/kernels.hpp"
#include "seb/smooth_model.hpp"

namespace seb {

SolveReport solve_classical_newton_cg(const Instance& instance, const SolverConfig& cfg) {
  return detail::run_continuation(
      instance, cfg, Algorithm::classical_newton_cg, [&](double mu, std::span<const double> x) {
        return detail::newton_stage(instance, mu, x, cfg, false);
      });
}

LbfgsMemory::LbfgsMemory(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("L-BFGS memory capacity must be positive");
}

bool LbfgsMemory::push(Vector s, Vector y) {
  if (s.size() != y.size()) throw std::invalid_argument("L-BFGS pair dimension mismatch");
  const double ys = kernels::dot(y, s);
  if (!(ys > 0.0) || !std::isfinite(ys)) return false;
  if (pairs_.size() == capacity_) pairs_.pop_front();
  pairs_.push_back(Pair{std::move(s), std::move(y), 1.0 / ys});
  return true;
}

Vector lbfgs_direction(const LbfgsMemory& memory, std::span<const double> gradient) {
  using kernels::dot;
  const std::size_t n = gradient.size();
  Vector q(gradient.begin(), gradient.end());
  const auto& pairs = memory.pairs();
  std::vector<double> alpha(pairs.size());

  for (std::size_t k = pairs.size(); k-- > 0;) {
    const auto& p = pairs[k];
    alpha[k] = p.rho * dot(p.s, q);
    for (std::size_t j = 0; j < n; ++j) q[j] -= alpha[k] * p.y[j];
  }
  if (!pairs.empty()) {
    const auto& newest = pairs.back();
    const double gamma = dot(newest.s, newest.y) / dot(newest.y, newest.y);
    for (double& v : q) v *= gamma;
  }
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto& p = pairs[k];
    const double b = p.rho * dot(p.y, q);
    for (std::size_t j = 0; j < n; ++j) q[j] += (alpha[k] - b) * p.s[j];
  }
  for (double& v : q) v = -v;
  return q;
}

namespace {

InnerResult lbfgs_stage(const Instance& instance, double mu, std::span<const double> x_start,
                        const SolverConfig& cfg) {
  const double eps2 = cfg.eps2_schedule(mu);
  const std::size_t n = instance.dimension();
  const std::size_t m = instance.size();

  InnerResult out;
  out.stats.mu = mu;
  out.stats.eps2 = eps2;

  LbfgsMemory memory(cfg.lbfgs_memory);
  EvalWorkspace ws = build_workspace(instance, x_start, mu);
  EvalWorkspace trial;
  double f_x = smoothed_objective(ws);
  Vector grad = smoothed_gradient(ws);

  for (std::size_t j = 0;; ++j) {
    const double g_norm = kernels::norm(grad);
    out.stats.active_set_sizes.push_back(m);
    if (g_norm <= eps2) {
      out.stats.final_gradient_norm = g_norm;
      break;
    }
    if (j >= cfg.max_inner_iters)
      throw ConvergenceError("L-BFGS stage at mu=" + std::to_string(mu) +
                             " did not reach |grad| <= " + std::to_string(eps2) + " in " +
                             std::to_string(j) + " iterations");

    Vector d = lbfgs_direction(memory, grad);
    const double slope = kernels::dot(d, grad);
    if (!(slope < 0.0) || !std::isfinite(slope)) {
      memory.clear();
      d = lbfgs_direction(memory, grad);
    }

    const ArmijoResult step = armijo_search(instance, mu, ws.x(), d, grad, f_x, cfg, trial);
    out.stats.backtracks += step.backtracks;
    if (cfg.observer && cfg.observer->on_armijo)
      cfg.observer->on_armijo(ArmijoEvent{instance, mu, ws.x(), d, grad, f_x, step});

    Vector grad_new = smoothed_gradient(trial);
    Vector s(n), y(n);
    for (std::size_t k = 0; k < n; ++k) {
      s[k] = trial.x()[k] - ws.x()[k];
      y[k] = grad_new[k] - grad[k];
    }
    memory.push(std::move(s), std::move(y));

    std::swap(ws, trial);
    grad = std::move(grad_new);
    f_x = step.f_new;
    ++out.stats.inner_iterations;
  }
  out.stats.final_smoothed_objective = f_x;
  out.x.assign(ws.x().begin(), ws.x().end());
  return out;
}

}  // namespace

SolveReport solve_smoothing_lbfgs(const Instance& instance, const SolverConfig& cfg) {
  return detail::run_continuation(
      instance, cfg, Algorithm::smoothing_lbfgs,
      [&](double mu, std::span<const double> x) { return lbfgs_stage(instance, mu, x, cfg); });
}

SolveReport run_algorithm(Algorithm algorithm, const Instance& instance, const SolverConfig& cfg) {
  switch (algorithm) {
    case Algorithm::inexact_newton_cg: return solve(instance, cfg);
    case Algorithm::classical_newton_cg: return solve_classical_newton_cg(instance, cfg);
    case Algorithm::smoothing_lbfgs: return solve_smoothing_lbfgs(instance, cfg);
  }
  throw std::invalid_argument("unknown algorithm");
}

}  // namespace seb
