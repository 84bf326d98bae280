#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sphtp {

enum class Method { cgtp_naive, cgtp_sparse, gtp_grid, vstp_grid, istp_grid, cgtp_vstp_sim };
enum class Setting { SISO, SIMO, MIMO };

std::string to_string(Method m);
std::string to_string(Setting s);
/// Throw std::invalid_argument on unknown names.
Method parse_method(const std::string& name);
Setting parse_setting(const std::string& name);
const std::vector<Method>& all_methods();

struct BenchRecord {
  Method method = Method::cgtp_naive;
  Setting setting = Setting::SISO;
  int L = 0;
  std::uint64_t flops = 0;
  double walltime_s = 0.0;
  int repeats = 1;
  bool operator==(const BenchRecord&) const = default;
};

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  int L_min = 0;
  int L_max = 0;
};

struct BenchOptions {
  int repeats = 5;
  std::uint64_t seed = 42;
  /// Spin used by istp_grid for all three signals.
  int istp_spin = 2;
  /// Cells whose projected MAC count exceeds this are skipped. Defaults to
  /// SPHTP_FLOP_BUDGET from the environment, else 4e10.
  std::uint64_t flop_budget = default_flop_budget();
  /// Feed all-zero inputs instead of random ones.
  bool zero_inputs = false;

  static std::uint64_t default_flop_budget();
};

/// MAC count a cell will perform, derived from loop bounds without running
/// the products.
std::uint64_t projected_flops(Method method, Setting setting, int L, const BenchOptions& opt = {});

/// Executes one cell `repeats` times; walltime is the median. Throws
/// std::logic_error if the count changes between repeats.
BenchRecord run_cell(Method method, Setting setting, int L, const BenchOptions& opt = {});

/// One record per L. Over-budget cells are left out and described in
/// *skipped when given. L_list must be strictly ascending.
std::vector<BenchRecord> run_bench(Method method, Setting setting, const std::vector<int>& L_list,
                                   const BenchOptions& opt = {},
                                   std::vector<std::string>* skipped = nullptr);

/// Least squares of log(flops) against log(L). Needs >= 4 records (or
/// min_points), positive flops and at least two distinct L.
SlopeFit fit_slope(const std::vector<BenchRecord>& records, std::size_t min_points = 4);

void write_csv(const std::vector<BenchRecord>& records, std::ostream& out);
std::vector<BenchRecord> read_csv(std::istream& in);
void emit_csv(const std::vector<BenchRecord>& records, const std::filesystem::path& path);
std::vector<BenchRecord> parse_csv_file(const std::filesystem::path& path);

/// Log-log chart, one polyline per (method, setting) series.
void emit_svg(const std::vector<BenchRecord>& records, const std::filesystem::path& path);

}  // namespace sphtp
