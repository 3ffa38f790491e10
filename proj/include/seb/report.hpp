#pragma once

// Machine-readable outputs of the command-line front end: the JSON solve
// report and the benchmark CSV.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "seb/newton.hpp"

namespace seb {

/// Keys: algorithm, m, n, objective, smoothed_objective, wall_time_seconds
/// (only when timing), stages[{mu, inner_iters, cg_iters, mean_active_set,
/// grad_norm}], x (only when emit_x).
nlohmann::json report_to_json(const SolveReport& report, const Instance& instance, bool emit_x,
                              bool timing);

struct BenchCell {
  std::size_t m = 0;
  std::size_t n = 0;
};

struct BenchRow {
  std::size_t m = 0;
  std::size_t n = 0;
  Algorithm algorithm = Algorithm::inexact_newton_cg;
  double wall_time_seconds = 0.0;
  double objective = 0.0;
  std::vector<StageStats> stage_stats;
  /// "ok", or a failure class: line_search, non_convergence, numerical, error.
  std::string status = "ok";
};

/// Fixed (m, n) grids ("table1", "table2", "table3"),
/// with m scaled by `scale` (rounded, at least 1). Throws
/// std::invalid_argument for an unknown suite or non-positive scale.
std::vector<BenchCell> bench_suite(std::string_view name, double scale = 1.0);

/// Parses "16000x100,32000x100".
std::vector<BenchCell> parse_cells(std::string_view text);

/// Runs every (cell, algorithm) pair in order on generated instances.
/// Failures are recorded per row and never thrown.
std::vector<BenchRow> run_bench(std::span<const BenchCell> cells,
                                std::span<const Algorithm> algorithms, const SolverConfig& cfg);

/// RFC-4180 CSV, LF line endings, header m,n,algorithm,time_seconds,objective,status.
/// With timing off the time_seconds field is left empty.
void write_bench_csv(std::span<const BenchRow> rows, std::ostream& out, bool timing);

/// Shortest decimal that round-trips, or 17 significant digits when
/// `digits17` is set.
std::string format_real(double v, bool digits17 = false);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

}  // namespace seb
