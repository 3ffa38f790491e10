// seb: generate, solve and benchmark smallest-enclosing-ball instances.
//
// Exit codes: 0 success, 2 usage error, 3 unreadable/corrupt/unwritable file,
// 4 solver did not converge (line search or iteration cap), 5 numerical
// failure, 6 one or more benchmark cells failed, 1 anything else.
// Every failure prints exactly one line "seb: error[<kind>]: <message>" to stderr.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "seb/baselines.hpp"
#include "seb/kernels.hpp"
#include "seb/problem.hpp"
#include "seb/report.hpp"

namespace {

enum Exit : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,
  kIo = 3,
  kNoConvergence = 4,
  kNumerical = 5,
  kBenchFailure = 6,
};

struct Failure {
  Exit code;
  std::string kind;
  std::string message;
};

int fail(const Failure& f) {
  std::string msg = f.message;
  for (char& c : msg)
    if (c == '\n' || c == '\r') c = ' ';
  std::fprintf(stderr, "seb: error[%s]: %s\n", f.kind.c_str(), msg.c_str());
  return f.code;
}

// Overrides shared by solve and bench; unset options keep the defaults.
struct ConfigFlags {
  std::optional<double> eps1, c1, beta, eps3, mu0, sigma;
  std::optional<std::size_t> lbfgs_memory, cg_max_iters, max_backtracks, max_inner_iters;
  bool include_final_mu_stage = false;

  void attach(CLI::App& app) {
    app.add_option("--eps1", eps1, "Stop once mu_k <= eps1 (default 1e-6)");
    app.add_option("--c1", c1, "Armijo constant (default 1e-4)");
    app.add_option("--beta", beta, "Backtracking factor (default 0.5)");
    app.add_option("--eps3", eps3, "Constant truncation level in [0,1] (default 1e-2)");
    app.add_option("--mu0", mu0, "Initial smoothing parameter (default 1)");
    app.add_option("--sigma", sigma, "mu reduction factor per stage (default 0.1)");
    app.add_option("--lbfgs-memory", lbfgs_memory, "L-BFGS pairs kept (default 5)");
    app.add_option("--cg-max-iters", cg_max_iters, "CG iteration cap (default min(n,200))");
    app.add_option("--max-backtracks", max_backtracks, "Line-search cap (default 60)");
    app.add_option("--max-inner-iters", max_inner_iters, "Per-stage iteration cap (default 10000)");
    app.add_flag("--include-final-mu-stage", include_final_mu_stage,
                 "Also solve the first stage with mu_k <= eps1");
  }

  seb::SolverConfig build() const {
    seb::SolverConfig cfg;
    if (eps1) cfg.eps1 = *eps1;
    if (c1) cfg.c1 = *c1;
    if (beta) cfg.beta = *beta;
    if (mu0) cfg.mu0 = *mu0;
    if (sigma) cfg.sigma = *sigma;
    if (eps3) {
      if (!(*eps3 >= 0.0 && *eps3 <= 1.0)) throw std::invalid_argument("--eps3 must lie in [0, 1]");
      const double v = *eps3;
      cfg.eps3_schedule = [v](double) { return v; };
    }
    if (lbfgs_memory) cfg.lbfgs_memory = *lbfgs_memory;
    if (cg_max_iters) cfg.cg_max_iters = *cg_max_iters;
    if (max_backtracks) cfg.max_backtracks = *max_backtracks;
    if (max_inner_iters) cfg.max_inner_iters = *max_inner_iters;
    cfg.include_final_mu_stage = include_final_mu_stage;
    return cfg;
  }
};

int default_threads() {
  if (const char* env = std::getenv("SEB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<int>(v);
  }
  return 1;
}

std::optional<seb::Format> parse_format(const std::string& s) {
  if (s == "text") return seb::Format::text;
  if (s == "binary") return seb::Format::binary;
  return std::nullopt;
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::ios_base::failure("cannot open " + path + " for writing");
  out << content;
  out.flush();
  if (!out) throw std::ios_base::failure("failed to write " + path);
}

Failure classify(const std::exception& e) {
  if (dynamic_cast<const seb::FormatError*>(&e)) return {kIo, "format", e.what()};
  if (dynamic_cast<const std::ios_base::failure*>(&e)) return {kIo, "io", e.what()};
  if (dynamic_cast<const seb::LineSearchError*>(&e)) return {kNoConvergence, "line_search", e.what()};
  if (dynamic_cast<const seb::ConvergenceError*>(&e))
    return {kNoConvergence, "non_convergence", e.what()};
  if (dynamic_cast<const seb::NumericalError*>(&e)) return {kNumerical, "numerical", e.what()};
  if (dynamic_cast<const std::invalid_argument*>(&e)) return {kUsage, "usage", e.what()};
  return {kInternal, "internal", e.what()};
}

struct GenerateArgs {
  std::size_t m = 0, n = 0;
  std::string out;
  std::string format = "binary";
};

int cmd_generate(const GenerateArgs& a) {
  if (a.m < 1) return fail({kUsage, "usage", "m must be >= 1"});
  if (a.n < 1) return fail({kUsage, "usage", "n must be >= 1"});
  const auto fmt = parse_format(a.format);
  if (!fmt) return fail({kUsage, "usage", "--format must be text or binary"});

  const seb::Instance inst = seb::generate_instance(a.m, a.n);
  std::ostringstream buf(std::ios::binary);
  seb::write_instance(inst, buf, *fmt);
  const std::string bytes = buf.str();
  try {
    write_output(a.out, bytes);
  } catch (const std::exception& e) {
    return fail({kIo, "io", e.what()});
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx",
                static_cast<unsigned long long>(seb::fnv1a64(bytes)));
  std::fprintf(a.out.empty() || a.out == "-" ? stderr : stdout, "m=%zu n=%zu checksum=fnv1a64:%s\n",
               a.m, a.n, hex);
  return kOk;
}

struct SolveArgs {
  std::string input;
  std::string format = "auto";
  std::string algorithm = "inewton";
  std::string out;
  bool emit_x = false;
  bool no_timing = false;
  ConfigFlags config;
};

int cmd_solve(const SolveArgs& a) {
  const auto algorithm = seb::parse_algorithm(a.algorithm);
  if (!algorithm) return fail({kUsage, "usage", "--algorithm must be inewton, newton or lbfgs"});
  seb::SolverConfig cfg;
  try {
    cfg = a.config.build();
  } catch (const std::exception& e) {
    return fail({kUsage, "usage", e.what()});
  }

  std::optional<seb::Instance> inst;
  try {
    seb::Format fmt{};
    if (a.format == "auto") {
      fmt = seb::detect_format(a.input);
    } else if (auto f = parse_format(a.format)) {
      fmt = *f;
    } else {
      return fail({kUsage, "usage", "--format must be auto, text or binary"});
    }
    inst.emplace(seb::load_instance(a.input, fmt));
  } catch (const seb::FormatError& e) {
    return fail({kIo, "format", e.what()});
  } catch (const std::exception& e) {
    return fail({kIo, "io", e.what()});
  }

  try {
    cfg.validate(inst->dimension());
    const seb::SolveReport rep = seb::run_algorithm(*algorithm, *inst, cfg);
    const auto json = seb::report_to_json(rep, *inst, a.emit_x, !a.no_timing);
    write_output(a.out, json.dump(2) + "\n");
    std::fprintf(stderr, "seb: %s m=%zu n=%zu objective=%s\n", seb::to_string(rep.algorithm),
                 inst->size(), inst->dimension(),
                 seb::format_real(rep.objective_nonsmooth, true).c_str());
    return kOk;
  } catch (const std::exception& e) {
    return fail(classify(e));
  }
}

struct BenchArgs {
  std::string suite;
  double scale = 1.0;
  std::string cells;
  std::string algorithms = "inewton,newton,lbfgs";
  std::string out;
  bool no_timing = false;
  ConfigFlags config;
};

int cmd_bench(const BenchArgs& a) {
  std::vector<seb::Algorithm> algorithms;
  {
    std::stringstream ss(a.algorithms);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      const auto alg = seb::parse_algorithm(item);
      if (!alg) return fail({kUsage, "usage", "unknown algorithm '" + item + "'"});
      algorithms.push_back(*alg);
    }
  }
  if (algorithms.empty()) return fail({kUsage, "usage", "--algorithms must name at least one algorithm"});

  std::vector<seb::BenchCell> cells;
  seb::SolverConfig cfg;
  try {
    cfg = a.config.build();
    if (a.suite == "custom") {
      if (a.cells.empty()) return fail({kUsage, "usage", "--suite custom requires --cells MxN,..."});
      cells = seb::parse_cells(a.cells);
      if (a.scale != 1.0)
        for (auto& c : cells)
          c.m = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(c.m * a.scale)));
    } else {
      cells = seb::bench_suite(a.suite, a.scale);
    }
  } catch (const std::exception& e) {
    return fail({kUsage, "usage", e.what()});
  }

  const auto rows = seb::run_bench(cells, algorithms, cfg);
  std::ostringstream csv;
  seb::write_bench_csv(rows, csv, !a.no_timing);
  try {
    write_output(a.out, csv.str());
  } catch (const std::exception& e) {
    return fail({kIo, "io", e.what()});
  }
  std::size_t failed = 0;
  for (const auto& r : rows)
    if (r.status != "ok") ++failed;
  if (failed > 0)
    return fail({kBenchFailure, "bench", std::to_string(failed) + " of " +
                                             std::to_string(rows.size()) + " cells failed"});
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Smallest enclosing ball of balls: inexact Newton-CG solver and benchmarks"};
  app.require_subcommand(1);
  int threads = default_threads();
  app.add_option("--threads", threads, "Kernel threads (default $SEB_THREADS or 1)")
      ->check(CLI::PositiveNumber);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Write the deterministic test instance");
  g->add_option("--m", gen.m, "Number of balls")->required();
  g->add_option("--n", gen.n, "Dimension")->required();
  g->add_option("--out", gen.out, "Output path ('-' for stdout)")->required();
  g->add_option("--format", gen.format, "text or binary (default binary)");

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "Solve an instance and print a JSON report");
  s->add_option("--input", solve.input, "Instance file")->required();
  s->add_option("--format", solve.format, "auto, text or binary (default auto)");
  s->add_option("--algorithm", solve.algorithm, "inewton, newton or lbfgs (default inewton)");
  s->add_option("--out", solve.out, "Report path (default stdout)");
  s->add_flag("--emit-x", solve.emit_x, "Include the final center in the report");
  s->add_flag("--no-timing", solve.no_timing, "Omit wall-clock fields");
  solve.config.attach(*s);

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "Run a benchmark suite and print CSV");
  b->add_option("--suite", bench.suite, "table1, table2, table3 or custom")->required();
  b->add_option("--scale", bench.scale, "Multiply every m by this factor");
  b->add_option("--cells", bench.cells, "Cells for --suite custom, e.g. 1000x100,2000x100");
  b->add_option("--algorithms", bench.algorithms, "Comma-separated list (default all three)");
  b->add_option("--out", bench.out, "CSV path (default stdout)");
  b->add_flag("--no-timing", bench.no_timing, "Leave time_seconds empty");
  bench.config.attach(*b);

  for (auto* sub : {g, s, b})
    sub->add_option("--threads", threads, "Kernel threads (default $SEB_THREADS or 1)")
        ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail({kUsage, "usage", e.what()});
  }

  seb::kernels::set_num_threads(threads);
  try {
    if (g->parsed()) return cmd_generate(gen);
    if (s->parsed()) return cmd_solve(solve);
    if (b->parsed()) return cmd_bench(bench);
  } catch (const std::exception& e) {
    return fail(classify(e));
  }
  return kInternal;
}
