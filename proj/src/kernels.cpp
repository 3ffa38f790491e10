#include "seb/kernels.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <vector>

#ifdef SEB_HAVE_OPENMP
#include <omp.h>
#endif

namespace seb::kernels {

namespace {

int g_threads = 1;

std::size_t block_count(std::size_t terms) { return (terms + kBlock - 1) / kBlock; }

// Four independent accumulators; the compiler may not reassociate a single
// running sum, so this is what lets the inner loops vectorize.
inline double sq_dist(const double* x, const double* c, std::size_t n) {
  double s0 = 0, s1 = 0, s2 = 0, s3 = 0;
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const double d0 = x[j] - c[j], d1 = x[j + 1] - c[j + 1];
    const double d2 = x[j + 2] - c[j + 2], d3 = x[j + 3] - c[j + 3];
    s0 += d0 * d0;
    s1 += d1 * d1;
    s2 += d2 * d2;
    s3 += d3 * d3;
  }
  for (; j < n; ++j) {
    const double d = x[j] - c[j];
    s0 += d * d;
  }
  return (s0 + s1) + (s2 + s3);
}

inline double offset_dot(const double* x, const double* c, const double* d, std::size_t n) {
  double s0 = 0, s1 = 0, s2 = 0, s3 = 0;
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    s0 += (x[j] - c[j]) * d[j];
    s1 += (x[j + 1] - c[j + 1]) * d[j + 1];
    s2 += (x[j + 2] - c[j + 2]) * d[j + 2];
    s3 += (x[j + 3] - c[j + 3]) * d[j + 3];
  }
  for (; j < n; ++j) s0 += (x[j] - c[j]) * d[j];
  return (s0 + s1) + (s2 + s3);
}

inline void axpy_offset(double w, const double* x, const double* c, double* acc, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) acc[j] += w * (x[j] - c[j]);
}

std::vector<double>& scratch(std::size_t size) {
  thread_local std::vector<double> buf;
  if (buf.size() < size) buf.resize(size);
  return buf;
}

// Sums nb partial vectors of length n stored back to back in `parts` by a
// fixed pairwise tree; the result ends up in parts[0..n).
void tree_combine(double* parts, std::size_t nb, std::size_t n) {
  const int nt = g_threads;
  for (std::size_t stride = 1; stride < nb; stride *= 2) {
    const auto pairs = static_cast<std::ptrdiff_t>((nb + 2 * stride - 1) / (2 * stride));
#pragma omp parallel for schedule(static) num_threads(nt) if (nt > 1 && pairs > 1)
    for (std::ptrdiff_t p = 0; p < pairs; ++p) {
      const std::size_t b = static_cast<std::size_t>(p) * 2 * stride;
      if (b + stride >= nb) continue;
      double* dst = parts + b * n;
      const double* src = parts + (b + stride) * n;
      for (std::size_t j = 0; j < n; ++j) dst[j] += src[j];
    }
  }
}

// Block-partitioned vector reduction: block_body(k0, k1, acc) accumulates
// terms [k0, k1) into the zeroed length-n accumulator acc.
template <class BlockBody>
void reduce_vectors(std::size_t terms, std::size_t n, std::span<double> out, BlockBody&& block_body) {
  assert(out.size() == n);
  if (terms == 0) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  const std::size_t nb = block_count(terms);
  auto& buf = scratch(nb * n);
  double* parts = buf.data();
  const int nt = g_threads;
#pragma omp parallel for schedule(static) num_threads(nt) if (nt > 1 && nb > 1)
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nb); ++b) {
    double* acc = parts + static_cast<std::size_t>(b) * n;
    std::fill(acc, acc + n, 0.0);
    const std::size_t k0 = static_cast<std::size_t>(b) * kBlock;
    block_body(k0, std::min(terms, k0 + kBlock), acc);
  }
  tree_combine(parts, nb, n);
  std::copy(parts, parts + n, out.begin());
}

}  // namespace

void set_num_threads(int threads) { g_threads = std::max(1, threads); }

int num_threads() noexcept { return g_threads; }

double distances(const Instance& inst, std::span<const double> x, double mu, std::span<double> g,
                 std::span<double> f) {
  const std::size_t m = inst.size();
  const std::size_t n = inst.dimension();
  const double mu2 = mu * mu;
  const double* xd = x.data();
  const int nt = g_threads;
#pragma omp parallel for schedule(static) num_threads(nt) if (nt > 1)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(m); ++i) {
    const auto u = static_cast<std::size_t>(i);
    g[u] = std::sqrt(sq_dist(xd, inst.center(u).data(), n) + mu2);
    f[u] = g[u] + inst.radius(u);
  }
  return *std::max_element(f.begin(), f.begin() + static_cast<std::ptrdiff_t>(m));
}

void shifted_exponentials(std::span<const double> f, double f_max, double mu, std::span<double> e) {
  const int nt = g_threads;
  const double inv_mu = 1.0 / mu;
#pragma omp parallel for schedule(static) num_threads(nt) if (nt > 1)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(f.size()); ++i) {
    const auto u = static_cast<std::size_t>(i);
    e[u] = std::exp((f[u] - f_max) * inv_mu);
  }
}

double sum(std::span<const double> v) {
  if (v.empty()) return 0.0;
  const std::size_t nb = block_count(v.size());
  auto& buf = scratch(nb);
  double* parts = buf.data();
  const int nt = g_threads;
#pragma omp parallel for schedule(static) num_threads(nt) if (nt > 1 && nb > 1)
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nb); ++b) {
    const std::size_t k0 = static_cast<std::size_t>(b) * kBlock;
    const std::size_t k1 = std::min(v.size(), k0 + kBlock);
    double s = 0.0;
    for (std::size_t k = k0; k < k1; ++k) s += v[k];
    parts[b] = s;
  }
  for (std::size_t stride = 1; stride < nb; stride *= 2)
    for (std::size_t b = 0; b + stride < nb; b += 2 * stride) parts[b] += parts[b + stride];
  return parts[0];
}

void weighted_offsets(const Instance& inst, std::span<const double> x, IndexSet idx,
                      std::span<const double> w, std::span<double> out) {
  const std::size_t n = inst.dimension();
  const double* xd = x.data();
  reduce_vectors(idx.size(), n, out, [&](std::size_t k0, std::size_t k1, double* acc) {
    for (std::size_t k = k0; k < k1; ++k)
      axpy_offset(w[k], xd, inst.center(idx[k]).data(), acc, n);
  });
}

void rank_one_sum(const Instance& inst, std::span<const double> x, IndexSet idx,
                  std::span<const double> a, std::span<const double> d, std::span<double> out) {
  const std::size_t n = inst.dimension();
  const double* xd = x.data();
  const double* dd = d.data();
  reduce_vectors(idx.size(), n, out, [&](std::size_t k0, std::size_t k1, double* acc) {
    for (std::size_t k = k0; k < k1; ++k) {
      const double* c = inst.center(idx[k]).data();
      axpy_offset(a[k] * offset_dot(xd, c, dd, n), xd, c, acc, n);
    }
  });
}

double dot(std::span<const double> a, std::span<const double> b) noexcept {
  double s0 = 0, s1 = 0, s2 = 0, s3 = 0;
  const std::size_t n = a.size();
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    s0 += a[j] * b[j];
    s1 += a[j + 1] * b[j + 1];
    s2 += a[j + 2] * b[j + 2];
    s3 += a[j + 3] * b[j + 3];
  }
  for (; j < n; ++j) s0 += a[j] * b[j];
  return (s0 + s1) + (s2 + s3);
}

double norm(std::span<const double> a) noexcept { return std::sqrt(dot(a, a)); }

}  // namespace seb::kernels
