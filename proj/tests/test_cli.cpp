#include <doctest.h>
#include <unistd.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("seb_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Run run(const std::string& args) {
  const fs::path out = scratch() / "stdout", err = scratch() / "stderr";
  const std::string cmd = std::string("'") + SEB_CLI_PATH + "' " + args + " >'" + out.string() +
                          "' 2>'" + err.string() + "'";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

std::string path(const std::string& name) { return "'" + (scratch() / name).string() + "'"; }

}  // namespace

TEST_CASE("cli: generate is deterministic and reports a checksum") {
  const Run a = run("generate --m 100 --n 10 --out " + path("a.bin"));
  const Run b = run("generate --m 100 --n 10 --out " + path("b.bin") + " --threads 3");
  CHECK(a.code == 0);
  CHECK(a.out.rfind("m=100 n=10 checksum=fnv1a64:", 0) == 0);
  CHECK(a.out == b.out);
  CHECK(slurp(scratch() / "a.bin") == slurp(scratch() / "b.bin"));

  const Run t = run("generate --m 1 --n 2 --format text --out -");
  CHECK(t.code == 0);
  CHECK(t.out == "1 2\n76.07421875 53.0517578125 8.056640625\n");
}

TEST_CASE("cli: usage errors exit 2 with one diagnostic line") {
  const Run z = run("generate --m 0 --n 5 --out " + path("z.bin"));
  CHECK(z.code == 2);
  CHECK(z.err == "seb: error[usage]: m must be >= 1\n");
  CHECK(run("").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("bench --suite table9").code == 2);
  CHECK(run("bench --suite custom --cells 10x2 --algorithms ,").code == 2);
  CHECK(run("bench --suite custom --cells 10x2 --algorithms qn").code == 2);
  CHECK(run("generate --m 5 --n 5 --out - --threads 0").code == 2);
}

TEST_CASE("cli: corrupt or missing input exits 3") {
  {
    std::ofstream(scratch() / "bad.txt") << "2 2\n1 0 0\n";
  }
  const Run bad = run("solve --input " + path("bad.txt"));
  CHECK(bad.code == 3);
  CHECK(bad.err.rfind("seb: error[format]:", 0) == 0);
  CHECK(bad.err.find('\n') == bad.err.size() - 1);
  CHECK(run("solve --input " + path("does_not_exist")).code == 3);
}

TEST_CASE("cli: solving one ball returns its radius") {
  {
    std::ofstream(scratch() / "one.txt") << "1 2\n1.0 0.0 0.0\n";
  }
  const Run r = run("solve --input " + path("one.txt") + " --emit-x --no-timing");
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["objective"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(j["x"][0].get<double>() == doctest::Approx(0.0).epsilon(1e-9));
  CHECK_FALSE(j.contains("wall_time_seconds"));
  CHECK(r.err.rfind("seb: inewton m=1 n=2 objective=", 0) == 0);
}

TEST_CASE("cli: algorithms agree and eps3 = 0 reproduces the classical stages") {
  REQUIRE(run("generate --m 2000 --n 50 --out " + path("g.bin")).code == 0);
  auto solve = [&](const std::string& extra) {
    const Run r = run("solve --input " + path("g.bin") + " --no-timing " + extra);
    REQUIRE(r.code == 0);
    return nlohmann::json::parse(r.out);
  };
  const auto in = solve("--algorithm inewton");
  const auto nw = solve("--algorithm newton");
  const auto lb = solve("--algorithm lbfgs");
  const double ref = in["objective"].get<double>();
  CHECK(std::abs(nw["objective"].get<double>() - ref) <= 1e-7 * ref);
  CHECK(std::abs(lb["objective"].get<double>() - ref) <= 1e-7 * ref);

  const auto zero = solve("--algorithm inewton --eps3 0");
  CHECK(zero["stages"] == nw["stages"]);
  CHECK(zero["objective"] == nw["objective"]);
  CHECK(solve("--algorithm inewton --threads 2") == in);
}

TEST_CASE("cli: bench output is byte-identical across runs without timing") {
  const std::string args = "bench --suite custom --cells 200x10,50x3 --no-timing --out ";
  REQUIRE(run(args + path("b1.csv")).code == 0);
  REQUIRE(run(args + path("b2.csv")).code == 0);
  const std::string a = slurp(scratch() / "b1.csv");
  CHECK(a == slurp(scratch() / "b2.csv"));
  CHECK(a.rfind("m,n,algorithm,time_seconds,objective,status\n200,10,inewton,,", 0) == 0);

  const Run failed = run("bench --suite custom --cells 30x3 --max-inner-iters 1 --eps1 1e-12");
  CHECK(failed.code == 6);
  CHECK(failed.out.find("non_convergence") != std::string::npos);
}
