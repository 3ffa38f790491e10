#pragma once

// Inexact Newton-CG with mu-continuation.
//
// Outer loop: mu_k = mu0 * sigma^k, each stage warm-started from the
// previous one, until mu_k <= eps1. Inner loop at fixed mu: build the active
// set, stop if |grad f~| <= eps2(mu), otherwise solve the truncated Newton
// system by CG with forcing term min(0.5, sqrt|grad f~|) and take an Armijo
// step on the full smoothed objective.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "seb/cg.hpp"
#include "seb/problem.hpp"
#include "seb/smooth_model.hpp"

namespace seb {

enum class Algorithm { inexact_newton_cg, classical_newton_cg, smoothing_lbfgs };

/// Short CLI names: inewton, newton, lbfgs.
const char* to_string(Algorithm a) noexcept;
std::optional<Algorithm> parse_algorithm(std::string_view name) noexcept;

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LineSearchError : public SolverError {
 public:
  using SolverError::SolverError;
};

class ConvergenceError : public SolverError {
 public:
  using SolverError::SolverError;
};

struct StageStats {
  double mu = 0.0;
  double eps2 = 0.0;
  std::size_t inner_iterations = 0;
  std::size_t cg_iterations = 0;
  std::size_t backtracks = 0;
  /// |S| at every point where the active set was built, final point included.
  std::vector<std::size_t> active_set_sizes;
  double final_gradient_norm = 0.0;
  double final_smoothed_objective = 0.0;

  double mean_active_set() const noexcept;
};

struct ArmijoResult {
  double alpha = 1.0;
  std::size_t backtracks = 0;  ///< the exponent l in alpha = beta^l
  double f_new = 0.0;
};

struct CgEvent {
  double mu;
  std::span<const double> gradient;
  double eta;
  const CgOutcome& outcome;
  const LinearOperator& hessian;
};

struct ArmijoEvent {
  const Instance& instance;
  double mu;
  std::span<const double> x;
  std::span<const double> direction;
  std::span<const double> gradient;
  double f_x;
  const ArmijoResult& result;
};

struct StageEvent {
  const Instance& instance;
  std::span<const double> x;
  const StageStats& stats;
};

/// Optional instrumentation hooks; all spans are only valid during the call.
struct SolveObserver {
  std::function<void(const CgEvent&)> on_cg;
  std::function<void(const ArmijoEvent&)> on_armijo;
  std::function<void(const StageEvent&)> on_stage_end;
};

double default_eps2(double mu) noexcept;  ///< max(1e-5, min(1e-1, mu / 10))
double default_eps3(double mu) noexcept;  ///< 1e-2

struct SolverConfig {
  double eps1 = 1e-6;
  double c1 = 1e-4;
  double beta = 0.5;
  double mu0 = 1.0;
  double sigma = 0.1;
  /// Overrides mu0 * sigma^k when set.
  std::function<double(std::size_t)> mu_schedule;
  std::function<double(double)> eps2_schedule = default_eps2;
  std::function<double(double)> eps3_schedule = default_eps3;
  std::size_t max_backtracks = 60;
  /// 0 selects min(n, 200).
  std::size_t cg_max_iters = 0;
  std::size_t max_inner_iters = 10000;
  std::size_t lbfgs_memory = 5;
  /// Also solve the first stage with mu_k <= eps1 before stopping.
  bool include_final_mu_stage = false;
  /// Empty means the zero vector.
  Vector x0;
  const SolveObserver* observer = nullptr;

  double mu(std::size_t k) const;
  std::size_t cg_cap(std::size_t n) const noexcept;
  /// Throws std::invalid_argument for out-of-range parameters.
  void validate(std::size_t n) const;
};

struct SolveReport {
  Algorithm algorithm = Algorithm::inexact_newton_cg;
  Vector x_final;
  double objective_nonsmooth = 0.0;
  double objective_smoothed_final = 0.0;
  std::vector<StageStats> stages;
  double wall_time_seconds = 0.0;
};

/// Smallest l >= 0 with f(x + beta^l d; mu) <= f_x + c1 beta^l d^T g_tilde.
/// The workspace at the accepted point is left in `trial`.
/// Throws LineSearchError after cfg.max_backtracks reductions.
ArmijoResult armijo_search(const Instance& instance, double mu, std::span<const double> x,
                           std::span<const double> d, std::span<const double> g_tilde,
                           double f_x, const SolverConfig& cfg, EvalWorkspace& trial);

struct InnerResult {
  Vector x;
  StageStats stats;
};

/// One inexact Newton-CG stage at fixed mu.
InnerResult solve_inner(const Instance& instance, double mu, std::span<const double> x_start,
                        const SolverConfig& cfg);

SolveReport solve(const Instance& instance, const SolverConfig& cfg);

namespace detail {

using StageSolver = std::function<InnerResult(double mu, std::span<const double> x_start)>;

/// Shared outer loop of all three algorithms.
SolveReport run_continuation(const Instance& instance, const SolverConfig& cfg,
                             Algorithm algorithm, const StageSolver& stage);

/// Newton-CG stage; eps3 == 0 at every mu gives the classical method.
InnerResult newton_stage(const Instance& instance, double mu, std::span<const double> x_start,
                         const SolverConfig& cfg, bool truncate);

}  // namespace detail

}  // namespace seb
