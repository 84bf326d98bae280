#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sphtp/bench.hpp"
#include "sphtp/tenprod.hpp"
#include "sphtp/verify.hpp"

using namespace sphtp;

namespace {

constexpr std::uint64_t kSeed = 42;

struct Line {
  bool ok = true;
  std::ostringstream detail;
  void need(const CheckResult& r) {
    ok = ok && r.passed;
    detail << r.name << " max_dev " << r.max_deviation << " cases " << r.cases;
    if (!r.passed) detail << " [" << r.failure << "]";
    detail << "; ";
  }
};

int failures = 0;

void report(int n, const std::string& title, const Line& line) {
  std::printf("%s %d %s: %s\n", line.ok ? "PASS" : "FAIL", n, title.c_str(), line.detail.str().c_str());
  std::fflush(stdout);
  if (!line.ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + SPHTP_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

int main() {
  {
    Line l;
    const auto t0 = std::chrono::steady_clock::now();
    l.need(checks::generalized_gaunt_formula(3, 1, kSeed, 1e-10));
    const double s = seconds_since(t0);
    l.ok = l.ok && s <= 120.0;
    l.detail << s << " s";
    report(1, "generalized Gaunt formula, j,l <= 3, s <= 1", l);
  }
  {
    Line l;
    const auto t0 = std::chrono::steady_clock::now();
    l.need(checks::selection_iff(6));
    const double s = seconds_since(t0);
    l.ok = l.ok && s <= 300.0;
    l.detail << s << " s";
    report(2, "selection rules iff nonzero, labels <= 6", l);
  }
  {
    Line l;
    l.need(checks::completeness(10));
    report(3, "find_valid_ells completeness, j <= 10", l);
  }
  {
    Line l;
    l.need(checks::simulation(4, 20, kSeed, 1e-10));
    // The cross-product path explicitly, with GTP producing nothing there.
    std::mt19937_64 rng(kSeed);
    IrrepCoeffs x, y;
    x.L = y.L = 1;
    x.block(1) = random_irrep_coeffs(1, rng).block(1);
    y.block(1) = random_irrep_coeffs(1, rng).block(1);
    const Eigen::VectorXcd want = cgtp_path(x.block(1), y.block(1), 1);
    const double sim = (simulate_cgtp_path(x.block(1), y.block(1), 1) - want).cwiseAbs().maxCoeff();
    const double g = gtp(x, y, 1).output.block(1).cwiseAbs().maxCoeff();
    l.ok = l.ok && sim <= 1e-10 && want.norm() > 1e-3 && g <= 1e-12;
    l.detail << "(1,1,1) sim err " << sim << ", |cgtp| " << want.norm() << ", |gtp| " << g;
    report(4, "CGTP simulation via VSTP, j <= 4, 20 pairs", l);
  }
  {
    Line l;
    l.need(checks::tpo_equivariance(4, 10, kSeed, 1e-10));
    report(5, "tensor product equivariance, L <= 4, 10 rotations", l);
  }
  {
    Line l;
    BenchOptions opt;
    opt.repeats = 1;
    opt.seed = kSeed;
    opt.flop_budget = UINT64_MAX;
    const std::vector<int> Ls = {8, 16, 32};
    auto slope = [&](Method m) {
      const auto recs = run_bench(m, Setting::MIMO, Ls, opt);
      const double s = fit_slope(recs, 3).slope;
      l.detail << to_string(m) << " " << s << "; ";
      return s;
    };
    auto within = [](double v, double lo, double hi) { return lo <= v && v <= hi; };
    const double naive = slope(Method::cgtp_naive), sparse = slope(Method::cgtp_sparse);
    const double g = slope(Method::gtp_grid), v = slope(Method::vstp_grid), sim = slope(Method::cgtp_vstp_sim);
    l.ok = within(naive, 5.5, 6.5) && within(sparse, 4.5, 5.5) && within(g, 2.5, 3.5) && within(v, 2.5, 3.5) &&
           std::abs(sim - (v + 2.0)) <= 0.5;
    report(6, "MIMO FLOP scaling slopes over L in {8,16,32}", l);
  }
  {
    Line l;
    l.need(checks::sht_round_trip(32, kSeed));
    l.need(checks::tsh_round_trip(2, 32, kSeed));
    l.need(checks::sh_orthonormality(8));
    report(7, "transform round trips and orthonormality", l);
  }
  {
    Line l;
    l.need(checks::ninej_spin1_table(6));
    report(8, "9j contraction vs spin-1 closed forms, a,b,c <= 6", l);
  }
  {
    Line l;
    auto t0 = std::chrono::steady_clock::now();
    const int qc = run_cli("verify --quick");
    const double qs = seconds_since(t0);
    t0 = std::chrono::steady_clock::now();
    const int fc = run_cli("verify --full");
    const double fs = seconds_since(t0);
    l.ok = qc == 0 && qs <= 60.0 && fc == 0 && fs <= 900.0;
    l.detail << "quick exit " << qc << " in " << qs << " s; full exit " << fc << " in " << fs << " s";
    report(9, "verify runtimes", l);
  }
  std::printf("%s: %d of 9 criteria failed\n", failures ? "FAILED" : "OK", failures);
  return failures ? 1 : 0;
}
