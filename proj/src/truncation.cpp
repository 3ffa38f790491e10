#include "seb/truncation.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace seb {

ActiveSet build_active_set(const EvalWorkspace& ws, double eps3) {
  if (!(eps3 >= 0.0 && eps3 <= 1.0)) throw std::invalid_argument("eps3 must lie in [0, 1]");
  const std::size_t m = ws.instance().size();
  ActiveSet s;
  s.m = m;
  s.mu = ws.mu();
  s.eps = ws.mu() * eps3 / (10.0 * static_cast<double>(m));

  auto lambda = ws.lambda();
  for (std::size_t i = 0; i < m; ++i)
    if (lambda[i] >= s.eps) s.indices.push_back(i);

  if (s.indices.empty()) {
    // lambda of the largest f_i is >= 1/m > eps whenever mu * eps3 < 10.
    std::fprintf(stderr, "seb: empty active set (mu=%g, eps=%g)\n", s.mu, s.eps);
    std::abort();
  }

  auto e = ws.shifted_exp();
  if (s.full()) {
    s.exp_sum = ws.exp_sum();
    s.lambda_tilde.assign(lambda.begin(), lambda.end());
    return s;
  }
  Vector picked(s.indices.size());
  for (std::size_t k = 0; k < picked.size(); ++k) picked[k] = e[s.indices[k]];
  s.exp_sum = kernels::sum(picked);
  const double inv = 1.0 / s.exp_sum;
  s.lambda_tilde.resize(picked.size());
  for (std::size_t k = 0; k < picked.size(); ++k) s.lambda_tilde[k] = picked[k] * inv;
  return s;
}

ActiveSet full_active_set(const EvalWorkspace& ws) { return build_active_set(ws, 0.0); }

double truncated_objective(const EvalWorkspace& ws, const ActiveSet& s) noexcept {
  return ws.f_inf() + ws.mu() * std::log(s.exp_sum);
}

Vector truncated_gradient(const EvalWorkspace& ws, const ActiveSet& s) {
  const IndexSet idx = s.index_set();
  Vector w(idx.size());
  for (std::size_t k = 0; k < w.size(); ++k) w[k] = s.lambda_tilde[k] / ws.g()[idx[k]];
  Vector grad(ws.instance().dimension());
  kernels::weighted_offsets(ws.instance(), ws.x(), idx, w, grad);
  return grad;
}

StructuredHessian truncated_hessian(const EvalWorkspace& ws, const ActiveSet& s,
                                    std::span<const double> gtilde) {
  return StructuredHessian(ws, s.index_set(), s.lambda_tilde, gtilde);
}

Vector truncated_hessian_vector(const EvalWorkspace& ws, const ActiveSet& s,
                                std::span<const double> d, std::span<const double> gtilde) {
  return truncated_hessian(ws, s, gtilde)(d);
}

}  // namespace seb
