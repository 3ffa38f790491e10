#include <algorithm>
#include <cmath>

#include "seb/kernels.hpp"

namespace seb::reference {

double distances(const Instance& inst, std::span<const double> x, double mu, std::span<double> g,
                 std::span<double> f) {
  double f_max = -INFINITY;
  for (std::size_t i = 0; i < inst.size(); ++i) {
    auto c = inst.center(i);
    double s = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) s += (x[j] - c[j]) * (x[j] - c[j]);
    g[i] = std::sqrt(s + mu * mu);
    f[i] = g[i] + inst.radius(i);
    f_max = std::max(f_max, f[i]);
  }
  return f_max;
}

void shifted_exponentials(std::span<const double> f, double f_max, double mu, std::span<double> e) {
  for (std::size_t i = 0; i < f.size(); ++i) e[i] = std::exp((f[i] - f_max) / mu);
}

double sum(std::span<const double> v) {
  double s = 0.0;
  for (double t : v) s += t;
  return s;
}

void weighted_offsets(const Instance& inst, std::span<const double> x, IndexSet idx,
                      std::span<const double> w, std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t k = 0; k < idx.size(); ++k) {
    auto c = inst.center(idx[k]);
    for (std::size_t j = 0; j < c.size(); ++j) out[j] += w[k] * (x[j] - c[j]);
  }
}

void rank_one_sum(const Instance& inst, std::span<const double> x, IndexSet idx,
                  std::span<const double> a, std::span<const double> d, std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t k = 0; k < idx.size(); ++k) {
    auto c = inst.center(idx[k]);
    double t = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) t += (x[j] - c[j]) * d[j];
    for (std::size_t j = 0; j < c.size(); ++j) out[j] += a[k] * t * (x[j] - c[j]);
  }
}

}  // namespace seb::reference
