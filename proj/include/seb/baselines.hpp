#pragma once

#include <cstddef>
#include <deque>
#include <span>

#include "seb/newton.hpp"
#include "seb/problem.hpp"

namespace seb {

/// Newton-CG with the exact gradient and Hessian-vector product, i.e. the
/// inexact solver with every ball kept in the active set.
SolveReport solve_classical_newton_cg(const Instance& instance, const SolverConfig& cfg);

/// Bounded history of (s, y) pairs for limited-memory BFGS.
class LbfgsMemory {
 public:
  struct Pair {
    Vector s;
    Vector y;
    double rho;  ///< 1 / (y^T s)
  };

  explicit LbfgsMemory(std::size_t capacity);

  /// Stores the pair unless y^T s <= 0 (or non-finite); returns whether it
  /// was kept. The oldest pair is dropped once capacity is reached.
  bool push(Vector s, Vector y);
  void clear() noexcept { pairs_.clear(); }

  std::size_t size() const noexcept { return pairs_.size(); }
  std::size_t capacity() const noexcept { return capacity_; }
  const std::deque<Pair>& pairs() const noexcept { return pairs_; }

 private:
  std::size_t capacity_;
  std::deque<Pair> pairs_;
};

/// -H g by the two-loop recursion with initial scaling s^T y / y^T y taken
/// from the newest pair (identity when the memory is empty).
Vector lbfgs_direction(const LbfgsMemory& memory, std::span<const double> gradient);

/// mu-continuation with an L-BFGS inner solver on f(x; mu), stopping each
/// stage at |grad f(x; mu)| <= eps2(mu). Uses the same Armijo rule as the
/// Newton solvers, with the exact gradient.
SolveReport solve_smoothing_lbfgs(const Instance& instance, const SolverConfig& cfg);

/// Dispatches on the algorithm.
SolveReport run_algorithm(Algorithm algorithm, const Instance& instance, const SolverConfig& cfg);

}  // namespace seb
