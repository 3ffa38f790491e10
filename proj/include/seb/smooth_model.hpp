#pragma once

// Log-exponential smoothing of f(x) = max_i (|x - c_i| + r_i):
//
//   f(x; mu) = mu * ln sum_i exp(f_i(x; mu) / mu),  f_i = g_i + r_i,
//   g_i = sqrt(|x - c_i|^2 + mu^2).
//
// All exponentials are taken relative to f_inf = max_i f_i, so every exponent
// is <= 0 and nothing overflows for any mu > 0.

#include <cstddef>
#include <span>

#include "seb/kernels.hpp"
#include "seb/problem.hpp"

namespace seb {

/// Per-point quantities at a fixed (x, mu), shared by the objective, gradient
/// and Hessian-vector evaluations. Holds a non-owning pointer to the instance.
class EvalWorkspace {
 public:
  EvalWorkspace() = default;

  const Instance& instance() const noexcept { return *instance_; }
  std::span<const double> x() const noexcept { return x_; }
  double mu() const noexcept { return mu_; }

  std::span<const double> g() const noexcept { return g_; }
  std::span<const double> fi() const noexcept { return fi_; }
  /// exp((f_i - f_inf) / mu), each in (0, 1] up to underflow.
  std::span<const double> shifted_exp() const noexcept { return e_; }
  std::span<const double> lambda() const noexcept { return lambda_; }
  double f_inf() const noexcept { return f_inf_; }
  /// sum_i shifted_exp()[i], in [1, m].
  double exp_sum() const noexcept { return exp_sum_; }

 private:
  friend void build_workspace(const Instance&, std::span<const double>, double, EvalWorkspace&);

  const Instance* instance_ = nullptr;
  Vector x_;
  double mu_ = 0.0;
  Vector g_, fi_, e_, lambda_;
  double f_inf_ = 0.0;
  double exp_sum_ = 0.0;
};

/// Throws std::invalid_argument on dimension mismatch or mu <= 0, and
/// std::domain_error on a non-finite coordinate in x.
void build_workspace(const Instance& instance, std::span<const double> x, double mu,
                     EvalWorkspace& ws);
EvalWorkspace build_workspace(const Instance& instance, std::span<const double> x, double mu);

/// max_i (|x - c_i| + r_i).
double objective_nonsmooth(const Instance& instance, std::span<const double> x);

double smoothed_objective(const EvalWorkspace& ws) noexcept;
Vector smoothed_gradient(const EvalWorkspace& ws);
Vector exact_hessian_vector(const EvalWorkspace& ws, std::span<const double> d);

/// Matrix-free Hessian of a (possibly truncated) smoothed objective:
///
///   H d = sum_k a_k ((x - c_k)^T d) (x - c_k) + s d - (grad^T d) grad / mu,
///   a_k = (1/mu - 1/g_k) w_k / g_k^2,   s = sum_k w_k / g_k,
///
/// where w are the combination weights over the index set and grad is the
/// matching gradient. a, s and grad/mu do not depend on d; they are computed
/// once here and reused by every apply() in a CG solve.
class StructuredHessian {
 public:
  StructuredHessian(const EvalWorkspace& ws, IndexSet indices, std::span<const double> weights,
                    std::span<const double> gradient);

  void apply(std::span<const double> d, std::span<double> out) const;
  Vector operator()(std::span<const double> d) const;

  std::size_t dimension() const noexcept { return grad_.size(); }

 private:
  const EvalWorkspace* ws_;
  IndexSet indices_;
  Vector coeff_;
  double diag_ = 0.0;
  Vector grad_;
  Vector grad_over_mu_;
};

}  // namespace seb
