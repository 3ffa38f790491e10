#pragma once

// Data-parallel reductions over the balls of an instance.
//
// Every m-term sum is split into fixed blocks of kBlock consecutive terms.
// Each block is accumulated sequentially, then the block partials are
// combined by a fixed binary tree. The partition depends on the term count
// only, so results are bit-identical for any thread count, and the rounding
// error grows with log(m / kBlock) instead of m.
//
// seb::reference holds plain serial loops with the same contracts. They are
// kept for testing and benchmarking against these kernels.

#include <cstddef>
#include <span>

#include "seb/problem.hpp"

namespace seb {

/// Ordered subset of ball indices. An empty list means all of 0..m-1.
struct IndexSet {
  std::span<const std::size_t> list;
  std::size_t count = 0;

  static IndexSet all(std::size_t m) noexcept { return {{}, m}; }
  static IndexSet of(std::span<const std::size_t> l) noexcept { return {l, l.size()}; }

  std::size_t operator[](std::size_t k) const noexcept { return list.empty() ? k : list[k]; }
  std::size_t size() const noexcept { return count; }
};

namespace kernels {

inline constexpr std::size_t kBlock = 128;

/// Threads used by the kernels; 1 runs without entering a parallel region.
void set_num_threads(int threads);
int num_threads() noexcept;

/// g[i] = sqrt(|x - c_i|^2 + mu^2), f[i] = g[i] + r_i. Returns max_i f[i].
double distances(const Instance& inst, std::span<const double> x, double mu, std::span<double> g,
                 std::span<double> f);

/// e[i] = exp((f[i] - f_max) / mu). Every exponent is <= 0.
void shifted_exponentials(std::span<const double> f, double f_max, double mu, std::span<double> e);

double sum(std::span<const double> v);

/// out = sum_k w[k] * (x - c_{idx[k]}).
void weighted_offsets(const Instance& inst, std::span<const double> x, IndexSet idx,
                      std::span<const double> w, std::span<double> out);

/// out = sum_k a[k] * ((x - c_{idx[k]})^T d) * (x - c_{idx[k]}).
void rank_one_sum(const Instance& inst, std::span<const double> x, IndexSet idx,
                  std::span<const double> a, std::span<const double> d, std::span<double> out);

double dot(std::span<const double> a, std::span<const double> b) noexcept;
double norm(std::span<const double> a) noexcept;

}  // namespace kernels

namespace reference {

double distances(const Instance& inst, std::span<const double> x, double mu, std::span<double> g,
                 std::span<double> f);
void shifted_exponentials(std::span<const double> f, double f_max, double mu, std::span<double> e);
double sum(std::span<const double> v);
void weighted_offsets(const Instance& inst, std::span<const double> x, IndexSet idx,
                      std::span<const double> w, std::span<double> out);
void rank_one_sum(const Instance& inst, std::span<const double> x, IndexSet idx,
                  std::span<const double> a, std::span<const double> d, std::span<double> out);

}  // namespace reference

}  // namespace seb
