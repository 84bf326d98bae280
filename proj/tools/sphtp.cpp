#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "sphtp/bench.hpp"
#include "sphtp/coeff_io.hpp"
#include "sphtp/errors.hpp"
#include "sphtp/rules.hpp"
#include "sphtp/tenprod.hpp"
#include "sphtp/verify.hpp"

using namespace sphtp;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kUsage = 2;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::vector<int> int_list(const std::string& text, std::size_t n, const char* what) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(std::string(what) + ": '" + item + "' is not an integer");
    }
  }
  if (n && out.size() != n) throw UsageError(std::string(what) + ": expected " + std::to_string(n) + " comma-separated integers");
  return out;
}

std::vector<std::string> str_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") std::cout << text;
  else write_text_file(path, text);
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

json vector_json(const Eigen::VectorXcd& v) {
  json re = json::array(), im = json::array();
  for (const auto& c : v) {
    re.push_back(c.real());
    im.push_back(c.imag());
  }
  return {{"re", re}, {"im", im}};
}

Eigen::VectorXcd single_block(const IrrepCoeffs& x, int j, const std::string& name) {
  const auto* v = x.find(BlockKey{j, std::nullopt, std::nullopt});
  if (!v) throw UsageError(name + " has no untagged block j=" + std::to_string(j));
  return *v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spherical tensor products: coefficients, transforms, tensor products, rules, benchmarks"};
  app.fallthrough();
  app.require_subcommand(1);

  double tolerance = 1e-10;
  std::uint64_t seed = 42;
  app.add_option("--tolerance", tolerance, "Tolerance for generic numerical checks")->capture_default_str();
  auto* seed_opt = app.add_option("--seed", seed, "Random seed")->capture_default_str();

  // coeff
  auto* coeff = app.add_subcommand("coeff", "Exact Clebsch-Gordan and 9j values");
  coeff->require_subcommand(1);
  auto* coeff_cg = coeff->add_subcommand("cg", "C^{j3,m3}_{j1,m1,j2,m2}");
  int j1 = 0, m1 = 0, j2 = 0, m2 = 0, j3 = 0, m3 = 0;
  coeff_cg->add_option("--j1", j1)->required();
  coeff_cg->add_option("--m1", m1)->required();
  coeff_cg->add_option("--j2", j2)->required();
  coeff_cg->add_option("--m2", m2)->required();
  coeff_cg->add_option("--j3", j3)->required();
  coeff_cg->add_option("--m3", m3)->required();
  auto* coeff_9j = coeff->add_subcommand("9j", "Wigner 9j symbol");
  std::string grid_text;
  coeff_9j->add_option("--grid", grid_text, "j1,l1,s1,j2,l2,s2,j3,l3,s3 (row major)")->required();

  // transform
  auto* transform = app.add_subcommand("transform", "Spherical harmonic transforms of coefficient files");
  transform->require_subcommand(1);
  auto* t_forward = transform->add_subcommand("forward", "Sample dump to coefficients");
  auto* t_inverse = transform->add_subcommand("inverse", "Coefficients to a sample dump");
  int t_s = 0, t_L = -1, t_Lg = -1, digits = 17;
  std::string t_in, t_out;
  for (auto* sub : {t_forward, t_inverse}) {
    sub->add_option("--s", t_s, "Spin of the signal")->capture_default_str();
    sub->add_option("--in", t_in, "Input JSON")->required();
    sub->add_option("--out", t_out, "Output JSON (stdout when omitted)");
    sub->add_option("--digits", digits, "Significant digits for floats")->check(CLI::Range(1, 17))->capture_default_str();
  }
  t_forward->add_option("--L", t_L, "Band limit of the result (defaults to the dump's L)");
  t_inverse->add_option("--Lg", t_Lg, "Grid band limit (defaults to the file's L)");

  // tp
  auto* tp = app.add_subcommand("tp", "Tensor products");
  tp->require_subcommand(1);
  std::string x_path, y_path, tp_out, mode_text = "sparse";
  int l3 = 0;
  auto* tp_cgtp = tp->add_subcommand("cgtp", "Clebsch-Gordan tensor product over all paths");
  auto* tp_gtp = tp->add_subcommand("gtp", "Gaunt tensor product");
  auto* tp_vstp = tp->add_subcommand("vstp", "Vector signal tensor product");
  for (auto* sub : {tp_cgtp, tp_gtp, tp_vstp}) {
    sub->add_option("--x", x_path)->required();
    sub->add_option("--y", y_path)->required();
    sub->add_option("--l3", l3, "Output band limit")->required();
    sub->add_option("--out", tp_out, "Output JSON (stdout when omitted)");
    sub->add_option("--digits", digits)->check(CLI::Range(1, 17))->capture_default_str();
  }
  tp_cgtp->add_option("--mode", mode_text)->check(CLI::IsMember({"naive", "sparse"}))->capture_default_str();
  auto* tp_sim = tp->add_subcommand("simulate", "One CGTP path recovered from a single VSTP");
  tp_sim->add_option("--j1", j1)->required();
  tp_sim->add_option("--j2", j2)->required();
  tp_sim->add_option("--j3", j3)->required();
  tp_sim->add_option("--x", x_path, "Scalar coefficient file with block j1 (random when omitted)");
  tp_sim->add_option("--y", y_path, "Scalar coefficient file with block j2 (random when omitted)");
  tp_sim->add_option("--digits", digits)->check(CLI::Range(1, 17))->capture_default_str();

  // rules
  auto* rules = app.add_subcommand("rules", "Selection rules and interactability");
  rules->require_subcommand(1);
  auto* r_check = rules->add_subcommand("check", "Rule verdicts for a vector path");
  std::string path_text, j_text;
  r_check->add_option("--path", path_text, "j1,l1,j2,l2,j3,l3")->required();
  auto* r_find = rules->add_subcommand("find-ells", "Constructive l assignment");
  r_find->add_option("--j", j_text, "j1,j2,j3")->required();
  auto* r_expr = rules->add_subcommand("expressivity", "Number of TSH blocks for spin s and band limit L");
  int e_s = 1, e_L = 8;
  r_expr->add_option("--s", e_s)->required();
  r_expr->add_option("--L", e_L)->required();

  // bench
  auto* bench = app.add_subcommand("bench", "FLOP-counted benchmarks");
  bench->require_subcommand(1);
  auto* b_run = bench->add_subcommand("run", "Run benchmark cells");
  std::string methods_text = "cgtp_naive,cgtp_sparse,gtp_grid,vstp_grid,istp_grid";
  std::string setting_text = "MIMO", L_text = "4,8,16,32", csv_path, svg_path;
  BenchOptions bopt;
  b_run->add_option("--methods", methods_text)->capture_default_str();
  b_run->add_option("--setting", setting_text)->check(CLI::IsMember({"SISO", "SIMO", "MIMO"}))->capture_default_str();
  b_run->add_option("--L", L_text, "Ascending band limits")->capture_default_str();
  b_run->add_option("--repeats", bopt.repeats)->check(CLI::PositiveNumber)->capture_default_str();
  b_run->add_option("--spins", bopt.istp_spin, "Spin of all three istp_grid signals")->capture_default_str();
  b_run->add_option("--budget", bopt.flop_budget, "Skip cells above this many MACs")->capture_default_str();
  b_run->add_option("--csv", csv_path);
  b_run->add_option("--svg", svg_path);

  // verify
  auto* verify = app.add_subcommand("verify", "Run the invariant suites");
  bool quick = false, full = false, as_json = false;
  std::string filter, fault_cg;
  auto* q_flag = verify->add_flag("--quick", quick, "Bounded suites");
  verify->add_flag("--full", full, "Exhaustive bounds")->excludes(q_flag);
  verify->add_flag("--json", as_json, "Machine-readable report on stdout");
  verify->add_option("--filter", filter, "Only checks whose name contains this");
  verify->add_option("--fault-cg", fault_cg, "Flip the sign of one CG value: j1,m1,j2,m2,j3,m3")->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  std::cerr << "# resolved config\n" << app.config_to_str(true, false);

  try {
    if (*coeff_cg) {
      const ExactRational v = cg({j1, m1, j2, m2, j3, m3});
      std::cout << v.to_string() << " " << fmt("%.17g", v.to_double()) << "\n";
      return kOk;
    }
    if (*coeff_9j) {
      const auto g = int_list(grid_text, 9, "--grid");
      NineJKey key;
      std::copy(g.begin(), g.end(), key.v.begin());
      const ExactRational v = wigner_9j(key);
      std::cout << v.to_string() << " " << fmt("%.17g", v.to_double()) << "\n";
      return kOk;
    }

    if (*t_inverse) {
      const json doc = read_json_file(t_in);
      if (json_spin(doc) != t_s) {
        throw UsageError("--s " + std::to_string(t_s) + " does not match s=" + std::to_string(json_spin(doc)) + " in " + t_in);
      }
      json out;
      if (t_s == 0) {
        const IrrepCoeffs x = irrep_from_json(doc);
        const int Lg = t_Lg < 0 ? x.L : t_Lg;
        out = samples_to_json(to_sphere(x, make_grid(Lg)), x.L);
      } else {
        const TshCoeffs x = tsh_from_json(doc);
        const int Lg = t_Lg < 0 ? x.L() : t_Lg;
        if (Lg < x.L()) throw PreconditionError("grid band limit Lg=" + std::to_string(Lg) + " is below L=" + std::to_string(x.L()));
        out = samples_to_json(tsh_encode(x, make_grid(Lg)), x.L());
      }
      write_output(t_out, canonical_json(out, digits));
      return kOk;
    }
    if (*t_forward) {
      const json doc = read_json_file(t_in);
      if (json_spin(doc) != t_s) {
        throw UsageError("--s " + std::to_string(t_s) + " does not match s=" + std::to_string(json_spin(doc)) + " in " + t_in);
      }
      int L = 0;
      const SpinSignal f = samples_from_json(doc, &L);
      if (t_L >= 0) L = t_L;
      const json out = t_s == 0 ? to_json(from_sphere(to_scalar_signal(f), L)) : to_json(tsh_decode(f, L));
      write_output(t_out, canonical_json(out, digits));
      return kOk;
    }

    if (*tp_cgtp || *tp_gtp) {
      const IrrepCoeffs x = irrep_from_json(read_json_file(x_path));
      const IrrepCoeffs y = irrep_from_json(read_json_file(y_path));
      const auto r = *tp_cgtp ? cgtp_full(x, y, l3, mode_text == "naive" ? CgtpMode::naive : CgtpMode::sparse)
                              : gtp(x, y, l3);
      std::cerr << "flops " << r.flops << "\n";
      write_output(tp_out, canonical_json(to_json(r.output), digits));
      return kOk;
    }
    if (*tp_vstp) {
      const TshCoeffs x = tsh_from_json(read_json_file(x_path));
      const TshCoeffs y = tsh_from_json(read_json_file(y_path));
      const auto r = vstp(x, y, l3);
      std::cerr << "flops " << r.flops << "\n";
      write_output(tp_out, canonical_json(to_json(r.output), digits));
      return kOk;
    }
    if (*tp_sim) {
      std::mt19937_64 rng(seed);
      auto input = [&](const std::string& path, int j, const char* name) -> Eigen::VectorXcd {
        if (!path.empty()) return single_block(irrep_from_json(read_json_file(path)), j, name);
        std::normal_distribution<double> n(0.0, 1.0);
        Eigen::VectorXcd v(2 * j + 1);
        for (auto& c : v) c = cplx(n(rng), n(rng));
        return v;
      };
      if (j1 < 0 || j2 < 0 || j3 < 0) throw UsageError("degrees must be non-negative");
      const Eigen::VectorXcd x = input(x_path, j1, "--x"), y = input(y_path, j2, "--y");
      std::uint64_t flops = 0;
      const Eigen::VectorXcd z = simulate_cgtp_path(x, y, j3, nullptr, &flops);
      const Eigen::VectorXcd ref = cgtp_path(x, y, j3);
      json out = vector_json(z);
      out["j"] = j3;
      if (!(j1 == 0 && j2 == 0 && j3 == 0)) {
        const auto l = find_valid_ells(j1, j2, j3);
        out["l"] = l;
      }
      out["flops"] = flops;
      out["max_abs_error_vs_cgtp"] = z.size() ? (z - ref).cwiseAbs().maxCoeff() : 0.0;
      std::cout << canonical_json(out, digits);
      return kOk;
    }

    if (*r_check) {
      const auto p = int_list(path_text, 6, "--path");
      const PathKey key = PathKey::vector(p[0], p[1], p[2], p[3], p[4], p[5]);
      const RuleReport r = vstp_rules(key);
      static const char* names[5] = {"each (j,l,1) is a triangle", "(j1,j2,j3) is a triangle",
                                     "(l1,l2,l3) is a triangle", "l1+l2+l3 is even",
                                     "no j_a=l_a with the other two columns equal"};
      for (int i = 0; i < 5; ++i) {
        std::cout << "rule " << i + 1 << " " << (r.rule[static_cast<std::size_t>(i)] ? "pass" : "fail") << "  "
                  << names[i] << "\n";
      }
      std::cout << "path " << key.str() << " " << (r.passed ? "allowed" : "forbidden") << "\n";
      std::cout << "coefficient " << fmt("%.17g", r.coefficient) << "\n";
      return kOk;
    }
    if (*r_find) {
      const auto j = int_list(j_text, 3, "--j");
      try {
        const auto l = find_valid_ells(j[0], j[1], j[2]);
        const PathKey key = PathKey::vector(j[0], l[0], j[1], l[1], j[2], l[2]);
        std::cout << l[0] << "," << l[1] << "," << l[2] << "\n";
        std::cout << "coefficient " << fmt("%.17g", generalized_gaunt(key)) << "\n";
      } catch (const NotInteractable& e) {
        std::cout << "not interactable: " << e.what() << "\n";
      }
      return kOk;
    }
    if (*r_expr) {
      if (e_s < 0 || e_L < 0) throw UsageError("--s and --L must be non-negative");
      std::cout << expressivity_count(e_s, e_L) << "\n";
      return kOk;
    }

    if (*b_run) {
      if (seed_opt->count() == 0) throw UsageError("bench run requires --seed");
      bopt.seed = seed;
      const Setting setting = parse_setting(setting_text);
      const auto Ls = int_list(L_text, 0, "--L");
      std::vector<BenchRecord> all;
      std::vector<std::string> skipped;
      std::printf("%-14s %-5s %5s %16s %12s\n", "method", "set", "L", "flops", "walltime_s");
      for (const auto& name : str_list(methods_text)) {
        Method m;
        try {
          m = parse_method(name);
        } catch (const std::invalid_argument& e) {
          throw UsageError(e.what());
        }
        const auto recs = run_bench(m, setting, Ls, bopt, &skipped);
        for (const auto& r : recs) {
          std::printf("%-14s %-5s %5d %16llu %12.6g\n", to_string(r.method).c_str(), to_string(r.setting).c_str(), r.L,
                      static_cast<unsigned long long>(r.flops), r.walltime_s);
        }
        if (recs.size() >= 3) {
          const SlopeFit fit = fit_slope(recs, 3);
          std::printf("%-14s %-5s slope %.3f (r2 %.4f, L %d..%d)\n", name.c_str(), setting_text.c_str(), fit.slope,
                      fit.r2, fit.L_min, fit.L_max);
        }
        all.insert(all.end(), recs.begin(), recs.end());
      }
      for (const auto& s : skipped) std::cerr << "skipped " << s << "\n";
      if (!csv_path.empty()) emit_csv(all, csv_path);
      if (!svg_path.empty()) emit_svg(all, svg_path);
      return kOk;
    }

    if (*verify) {
      VerifyConfig cfg;
      cfg.level = full ? VerifyLevel::full : VerifyLevel::quick;
      cfg.tolerance = tolerance;
      cfg.seed = seed;
      if (!fault_cg.empty()) {
        const auto k = int_list(fault_cg, 6, "--fault-cg");
        testing::set_cg_sign_fault(CgKey{k[0], k[1], k[2], k[3], k[4], k[5]});
      }
      auto progress = [&](const CheckResult& r) {
        std::FILE* stream = as_json ? stderr : stdout;
        std::fprintf(stream, "%s %-26s %-8s max_dev %.3e tol %.1e cases %ld %.2fs\n", r.passed ? "PASS" : "FAIL",
                     r.name.c_str(), r.module.c_str(), r.max_deviation, r.tolerance, r.cases, r.seconds);
        if (!r.passed) std::fprintf(stream, "     failing case: %s\n", r.failure.c_str());
        std::fflush(stream);
      };
      const VerifyReport report = run_verify(cfg, filter, progress);
      if (report.checks.empty()) throw UsageError("no check matches --filter '" + filter + "'");
      if (as_json) std::cout << report_json(report);
      else std::cout << (report.passed() ? "verify: all checks passed\n" : "verify: FAILED\n");
      return report.passed() ? kOk : kVerifyFailed;
    }
  } catch (const SchemaError& e) {
    std::cerr << "schema error at " << (e.pointer().empty() ? "/" : e.pointer()) << ": " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
