#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hamcert/cli.hpp"
#include "hamcert/config.hpp"

using namespace hamcert;

namespace {

namespace fs = std::filesystem;

#ifndef HAMCERT_CONFIG_DIR
#define HAMCERT_CONFIG_DIR "configs"
#endif

std::string config_path(const std::string& name) {
  return std::string(HAMCERT_CONFIG_DIR) + "/" + name;
}

int run(std::vector<std::string> args) {
  std::vector<const char*> argv = {"hamcert"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string write_temp(const std::string& name, const std::string& text) {
  fs::path p = fs::temp_directory_path() / name;
  std::ofstream out(p);
  out << text;
  return p.string();
}

}  // namespace

TEST_CASE("config loading and validation") {
  ProblemConfig cfg = load_config(config_path("example2.cfg"));
  CHECK(cfg.kernel_builtin == "lidstone4");
  CHECK(cfg.cone.size() == 2);
  CHECK(cfg.cone[0].xi_override == doctest::Approx(0.25));
  CHECK(cfg.cone[1].ab.hi == doctest::Approx(1.0 / 3.0));
  CHECK(cfg.lambdas == std::vector<double>{0.1, 0.2});
  REQUIRE(cfg.finf.has_value());
  CHECK(std::isinf(*cfg.finf));

  KernelSurface K = build_kernel(cfg);
  CHECK(K.max_order() == 3);
  NonlinearitySpec f = build_nonlinearity(cfg, K.max_order());
  CHECK(f.state_arity == 4);
}

TEST_CASE("config error paths carry context") {
  CHECK_THROWS_AS(load_config("/nonexistent/x.cfg"), ConfigError);

  auto expect_error = [](const std::string& text, const std::string& needle) {
    try {
      parse_config_text(text);
      FAIL_CHECK("expected ConfigError for:\n" << text);
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };
  expect_error("kernel.builtin = bogus\nf.builtin = example1_f\n", "bogus");
  expect_error("kernel.builtin = example1\n", "f.builtin or f.expr");
  expect_error("kernel.builtin = example1\nf.builtin = example1_f\nsolver.lambda = -1\n",
               "positive");
  expect_error(
      "kernel.builtin = example1\nf.builtin = example1_f\ncone.orders = 0\n"
      "cone.order0.a = 0\ncone.order0.b = 2\ncone.order0.c = 0\ncone.order0.d = 1\n",
      "inside [0, T]");
  expect_error("kernel.builtin = example1\nf.builtin = example1_f\nbroken line\n",
               "key = value");
  expect_error("kernel.builtin = example1\nf.builtin = example1_f\nmystery.key = 1\n",
               "unknown key");
}

TEST_CASE("explicit kernels parse, derive and validate") {
  // second-order Dirichlet kernel spelled out as monomial triples
  std::string text =
      "kernel.m = 1\n"
      "kernel.T = 1\n"
      "kernel.order0.upper = (1,1,1) (1,0,-1)\n"
      "kernel.order0.lower = (1,1,1) (0,1,-1)\n"
      "f.expr = t*abs(x0)\n";
  ProblemConfig cfg = parse_config_text(text);
  KernelSurface K = build_kernel(cfg);
  CHECK(K.eval_deriv(0, 0.5, 0.5) == doctest::Approx(-0.25));
  CHECK(K.eval_deriv(1, 0.25, 0.75) == doctest::Approx(-0.25));  // s - 1

  // a wrong explicit derivative is rejected
  std::string bad = text +
                    "kernel.order1.upper = (0,0,5)\n"
                    "kernel.order1.lower = (0,1,1)\n";
  ProblemConfig cfg_bad = parse_config_text(bad);
  CHECK_THROWS_AS(build_kernel(cfg_bad), ConfigError);
}

TEST_CASE("certify on the third-order config reports the half-line window") {
  fs::path report = fs::temp_directory_path() / "hamcert_ex1_report.txt";
  int code = run({"--report", report.string(), "certify", config_path("example1.cfg")});
  CHECK(code == 0);
  std::string text = slurp(report.string());
  CHECK(text.find("existence_window = (4") != std::string::npos);
  CHECK(text.find("inf)") != std::string::npos);
  // multiplicity is out of reach here
  CHECK(text.find("conditions = none") != std::string::npos);
  double lo = 0.0;
  auto pos = text.find("existence_window = (");
  REQUIRE(pos != std::string::npos);
  REQUIRE(std::sscanf(text.c_str() + pos, "existence_window = (%lf", &lo) == 1);
  CHECK(std::abs(lo - 4.0) < 1e-6);
}

TEST_CASE("certify on the beam config finds the C1 window") {
  fs::path report = fs::temp_directory_path() / "hamcert_ex2_report.txt";
  fs::path csv = fs::temp_directory_path() / "hamcert_ex2_conditions.csv";
  std::string cfg_text = slurp(config_path("example2.cfg"));
  cfg_text += "\noutput.csv = " + csv.string() + "\n";
  std::string cfg = write_temp("hamcert_ex2.cfg", cfg_text);
  int code = run({"--report", report.string(), "certify", cfg});
  CHECK(code == 0);
  std::string text = slurp(report.string());
  auto pos = text.find("best_C1_window = (0, ");
  REQUIRE(pos != std::string::npos);
  double hi = 0.0;
  REQUIRE(std::sscanf(text.c_str() + pos, "best_C1_window = (0, %lf", &hi) == 1);
  CHECK(std::abs(hi - 0.4171) < 1e-3);
  CHECK(text.find("C1 rho = (") != std::string::npos);

  std::string table = slurp(csv.string());
  CHECK(table.find("lambda,condition") != std::string::npos);
  CHECK(table.find("C1") != std::string::npos);
}

TEST_CASE("certify exits 2 when no window exists") {
  std::string cfg = write_temp("hamcert_zero.cfg",
                               "kernel.m = 1\n"
                               "kernel.T = 1\n"
                               "kernel.order0.upper = 0\n"
                               "kernel.order0.lower = 0\n"
                               "f.expr = t*abs(x0)\n"
                               "f.f0 = 1\n"
                               "f.finf = 0\n");
  fs::path report = fs::temp_directory_path() / "hamcert_zero_report.txt";
  CHECK(run({"--report", report.string(), "certify", cfg}) == 2);
}

TEST_CASE("reports are byte-identical across runs") {
  fs::path a = fs::temp_directory_path() / "hamcert_det_a.txt";
  fs::path b = fs::temp_directory_path() / "hamcert_det_b.txt";
  REQUIRE(run({"--report", a.string(), "certify", config_path("example1.cfg")}) == 0);
  REQUIRE(run({"--report", b.string(), "certify", config_path("example1.cfg")}) == 0);
  CHECK(slurp(a.string()) == slurp(b.string()));
}

TEST_CASE("solve on the beam config inside the window") {
  fs::path report = fs::temp_directory_path() / "hamcert_solve2.txt";
  fs::path csv = fs::temp_directory_path() / "hamcert_solve2.csv";
  std::string cfg_text = slurp(config_path("example2.cfg"));
  cfg_text += "\noutput.solution = " + csv.string() + "\n";
  std::string cfg = write_temp("hamcert_solve2.cfg", cfg_text);
  int code = run({"--report", report.string(), "--grid", "80", "solve", cfg, "--lambda", "0.1"});
  CHECK(code == 0);
  std::string text = slurp(report.string());
  CHECK(text.find("converged = true") != std::string::npos);
  CHECK(text.find("cone_member = true") != std::string::npos);
  CHECK(text.find("trivial_fixed_point = false") != std::string::npos);
  std::string sol = slurp(csv.string());
  CHECK(sol.find("t,u0,u1,u2,u3") != std::string::npos);
}

TEST_CASE("solve rejects nonpositive lambda") {
  CHECK(run({"solve", config_path("example2.cfg"), "--lambda", "0"}) == 1);
  CHECK(run({"solve", config_path("example2.cfg"), "--lambda", "-2"}) == 1);
}

TEST_CASE("solve flags the trivial fixed point") {
  fs::path report = fs::temp_directory_path() / "hamcert_solve1.txt";
  int code =
      run({"--report", report.string(), "--grid", "80", "solve", config_path("example1.cfg"),
           "--lambda", "5"});
  CHECK(code == 0);
  std::string text = slurp(report.string());
  CHECK(text.find("trivial_fixed_point = true") != std::string::npos);
}

TEST_CASE("solve emits an svg plot on request") {
  fs::path csv = fs::temp_directory_path() / "hamcert_plot.csv";
  std::string cfg_text = slurp(config_path("example2.cfg"));
  cfg_text += "\noutput.solution = " + csv.string() + "\n";
  std::string cfg = write_temp("hamcert_plot.cfg", cfg_text);
  fs::path report = fs::temp_directory_path() / "hamcert_plot.txt";
  int code = run({"--report", report.string(), "--grid", "80", "--plots", "solve", cfg,
                  "--lambda", "0.1"});
  CHECK(code == 0);
  std::string svg = slurp(csv.string() + ".svg");
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("polyline") != std::string::npos);
}

TEST_CASE("signs subcommand") {
  fs::path report = fs::temp_directory_path() / "hamcert_signs.txt";
  CHECK(run({"--report", report.string(), "signs", "--n", "2", "--density", "15"}) == 0);
  std::string text = slurp(report.string());
  CHECK(text.find("all_pass = true") != std::string::npos);
  CHECK(run({"signs", "--n", "1"}) == 1);  // family starts at n = 2
}

TEST_CASE("certify runs on the sixth-order config") {
  fs::path report = fs::temp_directory_path() / "hamcert_lidstone_report.txt";
  int code = run({"--report", report.string(), "certify", config_path("lidstone.cfg")});
  CHECK(code == 0);
  std::string text = slurp(report.string());
  CHECK(text.find("J1 = {2, 3}") != std::string::npos);
  CHECK(text.find("C1") != std::string::npos);
}
