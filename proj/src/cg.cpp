#include "seb/cg.hpp"

#include <algorithm>
#include <cmath>

#include "seb/kernels.hpp"

namespace seb {

const char* to_string(CgStatus status) noexcept {
  switch (status) {
    case CgStatus::converged: return "converged";
    case CgStatus::iteration_cap: return "iteration_cap";
    case CgStatus::curvature_breakdown: return "curvature_breakdown";
  }
  return "unknown";
}

double forcing_term(double gradient_norm) noexcept {
  return std::min(0.5, std::sqrt(gradient_norm));
}

namespace {

void check_finite(double v, const char* what, std::size_t iter) {
  if (!std::isfinite(v))
    throw NumericalError(std::string("CG: non-finite ") + what + " at iteration " +
                         std::to_string(iter));
}

}  // namespace

CgOutcome cg_solve(const LinearOperator& hv, std::span<const double> g, double eta,
                   std::size_t max_iters) {
  using kernels::dot;
  const std::size_t n = g.size();
  const double g_norm = kernels::norm(g);
  if (!(g_norm > 0.0)) throw std::invalid_argument("cg_solve: gradient must be nonzero");
  if (max_iters == 0) throw std::invalid_argument("cg_solve: max_iters must be positive");
  check_finite(g_norm, "gradient norm", 0);
  const double target = eta * g_norm;

  CgOutcome out;
  out.direction.assign(n, 0.0);
  Vector& d = out.direction;
  Vector r(g.begin(), g.end());  // r = H d + g
  Vector p(n);
  Vector hp(n);
  for (std::size_t j = 0; j < n; ++j) p[j] = -r[j];
  double rr = dot(r, r);

  // Overwrites r with H d + g and returns |r|^2.
  auto true_residual = [&] {
    hv(d, hp);
    ++out.operator_applications;
    for (std::size_t j = 0; j < n; ++j) r[j] = hp[j] + g[j];
    return dot(r, r);
  };

  std::size_t k = 0;
  for (;;) {
    if (k >= max_iters) {
      out.status = CgStatus::iteration_cap;
      out.residual_norm = k == 0 ? g_norm : std::sqrt(true_residual());
      break;
    }
    hv(p, hp);
    ++out.operator_applications;
    const double curvature = dot(p, hp);
    check_finite(curvature, "curvature", k);
    if (curvature <= kCurvatureTolerance * dot(p, p)) {
      out.status = CgStatus::curvature_breakdown;
      if (k == 0)
        for (std::size_t j = 0; j < n; ++j) d[j] = -g[j];
      out.residual_norm = std::sqrt(true_residual());
      break;
    }
    const double alpha = rr / curvature;
    for (std::size_t j = 0; j < n; ++j) {
      d[j] += alpha * p[j];
      r[j] += alpha * hp[j];
    }
    ++k;
    double rr_new = dot(r, r);
    check_finite(rr_new, "residual", k);

    bool restart = false;
    if (std::sqrt(rr_new) <= target) {
      rr_new = true_residual();
      if (std::sqrt(rr_new) <= target) {
        out.status = CgStatus::converged;
        out.residual_norm = std::sqrt(rr_new);
        break;
      }
      // Recurrence drifted from the true residual: restart from the latter.
      restart = true;
    } else if (k % kResidualRefresh == 0) {
      rr_new = true_residual();
    }

    if (restart) {
      for (std::size_t j = 0; j < n; ++j) p[j] = -r[j];
    } else {
      const double beta = rr_new / rr;
      for (std::size_t j = 0; j < n; ++j) p[j] = -r[j] + beta * p[j];
    }
    rr = rr_new;
  }
  out.iterations = k;
  return out;
}

}  // namespace seb
