#include "seb/smooth_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace seb {

void build_workspace(const Instance& instance, std::span<const double> x, double mu,
                     EvalWorkspace& ws) {
  const std::size_t m = instance.size();
  if (x.size() != instance.dimension())
    throw std::invalid_argument("dimension mismatch: x has " + std::to_string(x.size()) +
                                " entries, instance has n = " +
                                std::to_string(instance.dimension()));
  if (!(mu > 0.0) || !std::isfinite(mu)) throw std::invalid_argument("mu must be positive");
  for (double v : x)
    if (!std::isfinite(v)) throw std::domain_error("non-finite coordinate in x");

  ws.instance_ = &instance;
  ws.x_.assign(x.begin(), x.end());
  ws.mu_ = mu;
  ws.g_.resize(m);
  ws.fi_.resize(m);
  ws.e_.resize(m);
  ws.lambda_.resize(m);

  ws.f_inf_ = kernels::distances(instance, ws.x_, mu, ws.g_, ws.fi_);
  kernels::shifted_exponentials(ws.fi_, ws.f_inf_, mu, ws.e_);
  ws.exp_sum_ = kernels::sum(ws.e_);
  const double inv = 1.0 / ws.exp_sum_;
  for (std::size_t i = 0; i < m; ++i) ws.lambda_[i] = ws.e_[i] * inv;
}

EvalWorkspace build_workspace(const Instance& instance, std::span<const double> x, double mu) {
  EvalWorkspace ws;
  build_workspace(instance, x, mu, ws);
  return ws;
}

double objective_nonsmooth(const Instance& instance, std::span<const double> x) {
  if (x.size() != instance.dimension())
    throw std::invalid_argument("dimension mismatch: x has " + std::to_string(x.size()) +
                                " entries, instance has n = " +
                                std::to_string(instance.dimension()));
  double best = -INFINITY;
  for (std::size_t i = 0; i < instance.size(); ++i) {
    auto c = instance.center(i);
    double s = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) s += (x[j] - c[j]) * (x[j] - c[j]);
    best = std::max(best, std::sqrt(s) + instance.radius(i));
  }
  return best;
}

double smoothed_objective(const EvalWorkspace& ws) noexcept {
  return ws.f_inf() + ws.mu() * std::log(ws.exp_sum());
}

Vector smoothed_gradient(const EvalWorkspace& ws) {
  const std::size_t m = ws.instance().size();
  Vector w(m);
  for (std::size_t i = 0; i < m; ++i) w[i] = ws.lambda()[i] / ws.g()[i];
  Vector grad(ws.instance().dimension());
  kernels::weighted_offsets(ws.instance(), ws.x(), IndexSet::all(m), w, grad);
  return grad;
}

Vector exact_hessian_vector(const EvalWorkspace& ws, std::span<const double> d) {
  const Vector grad = smoothed_gradient(ws);
  return StructuredHessian(ws, IndexSet::all(ws.instance().size()), ws.lambda(), grad)(d);
}

StructuredHessian::StructuredHessian(const EvalWorkspace& ws, IndexSet indices,
                                     std::span<const double> weights,
                                     std::span<const double> gradient)
    : ws_(&ws), indices_(indices), grad_(gradient.begin(), gradient.end()) {
  const double mu = ws.mu();
  const std::size_t count = indices.size();
  coeff_.resize(count);
  Vector scaled(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double gk = ws.g()[indices[k]];
    coeff_[k] = (1.0 / mu - 1.0 / gk) * weights[k] / (gk * gk);
    scaled[k] = weights[k] / gk;
  }
  diag_ = kernels::sum(scaled);
  grad_over_mu_.resize(grad_.size());
  for (std::size_t j = 0; j < grad_.size(); ++j) grad_over_mu_[j] = grad_[j] / mu;
}

void StructuredHessian::apply(std::span<const double> d, std::span<double> out) const {
  if (d.size() != grad_.size() || out.size() != grad_.size())
    throw std::invalid_argument("Hessian-vector product: dimension mismatch");
  kernels::rank_one_sum(ws_->instance(), ws_->x(), indices_, coeff_, d, out);
  const double gd = kernels::dot(grad_, d);
  for (std::size_t j = 0; j < out.size(); ++j) out[j] += diag_ * d[j] - gd * grad_over_mu_[j];
}

Vector StructuredHessian::operator()(std::span<const double> d) const {
  Vector out(grad_.size());
  apply(d, out);
  return out;
}

}  // namespace seb
