#pragma once

// Adaptive truncation of the smoothed model. Only balls whose weight
// lambda_i reaches eps = mu * eps3 / (10 m) take part in the truncated
// objective, gradient and Hessian; for mu, eps3 in (0, 1] the errors against
// the full model are bounded by
//
//   f(x;mu) - f~(x;mu)          <= mu^2 eps3 / 9
//   |grad f - grad f~|          <= mu eps3 / 5
//   |hess f - hess f~|_2        <= 4 eps3 / 5.

#include <cstddef>
#include <span>
#include <vector>

#include "seb/kernels.hpp"
#include "seb/smooth_model.hpp"

namespace seb {

struct ActiveSet {
  std::vector<std::size_t> indices;  ///< ascending, 0-based
  Vector lambda_tilde;               ///< renormalized weights, aligned with indices
  double eps = 0.0;
  double mu = 0.0;
  double exp_sum = 0.0;  ///< sum over the set of exp((f_i - f_inf) / mu)
  std::size_t m = 0;

  std::size_t size() const noexcept { return indices.size(); }
  bool full() const noexcept { return indices.size() == m; }
  IndexSet index_set() const noexcept {
    return full() ? IndexSet::all(m) : IndexSet::of(indices);
  }
};

/// eps3 must lie in [0, 1]; eps3 = 0 keeps every ball. Weights are
/// e_i / sum_{j in S} e_j from the cached shifted exponentials, so a full set
/// reproduces ws.lambda() bit for bit.
ActiveSet build_active_set(const EvalWorkspace& ws, double eps3);

/// The untruncated set {0..m-1} with lambda_tilde = lambda.
ActiveSet full_active_set(const EvalWorkspace& ws);

double truncated_objective(const EvalWorkspace& ws, const ActiveSet& s) noexcept;
Vector truncated_gradient(const EvalWorkspace& ws, const ActiveSet& s);

/// One-off product; CG solves should hold a truncated_hessian() instead so
/// the d-independent terms are built once.
Vector truncated_hessian_vector(const EvalWorkspace& ws, const ActiveSet& s,
                                std::span<const double> d, std::span<const double> gtilde);

/// gtilde must be truncated_gradient(ws, s). Keeps references to ws and s.
StructuredHessian truncated_hessian(const EvalWorkspace& ws, const ActiveSet& s,
                                    std::span<const double> gtilde);

}  // namespace seb
