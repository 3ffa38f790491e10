#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>

#include "seb/problem.hpp"

namespace seb {

/// out = H * in for a symmetric positive definite H.
using LinearOperator = std::function<void(std::span<const double> in, std::span<double> out)>;

enum class CgStatus { converged, iteration_cap, curvature_breakdown };

const char* to_string(CgStatus status) noexcept;

struct CgOutcome {
  Vector direction;
  /// |H d + g| recomputed with an explicit operator application.
  double residual_norm = 0.0;
  std::size_t iterations = 0;
  std::size_t operator_applications = 0;
  CgStatus status = CgStatus::converged;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// min(0.5, sqrt(|grad|)).
double forcing_term(double gradient_norm) noexcept;

inline constexpr double kCurvatureTolerance = 1e-14;
inline constexpr std::size_t kResidualRefresh = 50;

/// Conjugate gradients on H d = -g from d = 0, stopping once
/// |H d + g| <= eta |g|. The recurrence residual is replaced by the true one
/// every kResidualRefresh iterations, and a recurrence-declared convergence
/// is confirmed with an explicit product before it is reported.
///
/// On curvature breakdown (p^T H p <= kCurvatureTolerance |p|^2) the current
/// iterate is returned, or -g if no step has been taken yet.
/// Throws NumericalError when a non-finite value appears.
CgOutcome cg_solve(const LinearOperator& hv, std::span<const double> g, double eta,
                   std::size_t max_iters);

}  // namespace seb
