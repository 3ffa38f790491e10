#include "seb/report.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <ostream>

#include "seb/baselines.hpp"

namespace seb {

nlohmann::json report_to_json(const SolveReport& report, const Instance& instance, bool emit_x,
                              bool timing) {
  nlohmann::json j;
  j["algorithm"] = to_string(report.algorithm);
  j["m"] = instance.size();
  j["n"] = instance.dimension();
  j["objective"] = report.objective_nonsmooth;
  j["smoothed_objective"] = report.objective_smoothed_final;
  if (timing) j["wall_time_seconds"] = report.wall_time_seconds;
  auto& stages = j["stages"] = nlohmann::json::array();
  for (const StageStats& s : report.stages) {
    stages.push_back({{"mu", s.mu},
                      {"inner_iters", s.inner_iterations},
                      {"cg_iters", s.cg_iterations},
                      {"mean_active_set", s.mean_active_set()},
                      {"grad_norm", s.final_gradient_norm}});
  }
  if (emit_x) j["x"] = report.x_final;
  return j;
}

namespace {

std::vector<BenchCell> table(std::string_view name) {
  if (name == "table1")
    return {{10000, 1000}, {20000, 1000}, {30000, 1000}, {40000, 1000},
            {50000, 1000}, {100000, 1000}, {10000, 2000}, {20000, 2000},
            {30000, 2000}, {40000, 2000}, {50000, 2000}, {100000, 2000}};
  if (name == "table2")
    return {{16000, 100},  {32000, 100},  {64000, 100},   {128000, 100},
            {256000, 100}, {512000, 100}, {1024000, 100}, {2048000, 100}};
  if (name == "table3")
    return {{2000, 5000},    {2000, 10000},   {5000, 5000},     {5000, 10000},
            {8000, 7000},    {100000, 8000},  {100000, 10000},  {200000, 10000}};
  throw std::invalid_argument("unknown suite '" + std::string(name) +
                              "' (expected table1, table2, table3 or custom)");
}

std::string csv_field(std::string_view v) {
  if (v.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(v);
  std::string out = "\"";
  for (char c : v) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::vector<BenchCell> bench_suite(std::string_view name, double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw std::invalid_argument("scale must be positive");
  std::vector<BenchCell> cells = table(name);
  for (BenchCell& c : cells)
    c.m = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(static_cast<double>(c.m) * scale)));
  return cells;
}

std::vector<BenchCell> parse_cells(std::string_view text) {
  std::vector<BenchCell> cells;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const std::string_view item = text.substr(0, comma);
    const auto x = item.find('x');
    BenchCell c;
    auto parse = [&](std::string_view s, std::size_t& v) {
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      return ec == std::errc() && p == s.data() + s.size() && v > 0;
    };
    if (x == std::string_view::npos || !parse(item.substr(0, x), c.m) ||
        !parse(item.substr(x + 1), c.n))
      throw std::invalid_argument("malformed cell '" + std::string(item) + "' (expected MxN)");
    cells.push_back(c);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
    if (text.empty()) throw std::invalid_argument("trailing ',' in cell list");
  }
  if (cells.empty()) throw std::invalid_argument("no cells given");
  return cells;
}

std::vector<BenchRow> run_bench(std::span<const BenchCell> cells,
                                std::span<const Algorithm> algorithms, const SolverConfig& cfg) {
  std::vector<BenchRow> rows;
  for (const BenchCell& cell : cells) {
    const Instance inst = generate_instance(cell.m, cell.n);
    for (Algorithm a : algorithms) {
      BenchRow row;
      row.m = cell.m;
      row.n = cell.n;
      row.algorithm = a;
      try {
        SolveReport rep = run_algorithm(a, inst, cfg);
        row.wall_time_seconds = rep.wall_time_seconds;
        row.objective = rep.objective_nonsmooth;
        row.stage_stats = std::move(rep.stages);
        if (!std::isfinite(row.objective)) row.status = "numerical";
      } catch (const LineSearchError&) {
        row.status = "line_search";
      } catch (const ConvergenceError&) {
        row.status = "non_convergence";
      } catch (const NumericalError&) {
        row.status = "numerical";
      } catch (const std::exception&) {
        row.status = "error";
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void write_bench_csv(std::span<const BenchRow> rows, std::ostream& out, bool timing) {
  out << "m,n,algorithm,time_seconds,objective,status\n";
  for (const BenchRow& r : rows) {
    const bool ok = r.status == "ok";
    out << r.m << ',' << r.n << ',' << to_string(r.algorithm) << ','
        << (timing && ok ? format_real(r.wall_time_seconds) : std::string()) << ','
        << (ok ? format_real(r.objective, true) : std::string()) << ',' << csv_field(r.status)
        << '\n';
  }
}

std::string format_real(double v, bool digits17) {
  std::array<char, 64> buf{};
  auto [p, ec] = digits17 ? std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                          std::chars_format::general, 17)
                          : std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), p);
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace seb
