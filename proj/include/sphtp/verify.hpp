#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace sphtp {

enum class VerifyLevel { quick, full };

struct VerifyConfig {
  VerifyLevel level = VerifyLevel::quick;
  /// Tolerance for the checks specified at the generic 1e-10 level.
  double tolerance = 1e-10;
  std::uint64_t seed = 42;
};

struct CheckResult {
  std::string name;
  std::string module;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  long cases = 0;
  bool passed = true;
  /// First failing case, empty on success.
  std::string failure;
  double seconds = 0.0;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool passed() const;
};

struct NamedCheck {
  std::string name;
  std::string module;
  std::function<CheckResult(const VerifyConfig&)> run;
};

/// Every invariant suite, in report order.
const std::vector<NamedCheck>& verify_checks();

/// Runs all checks whose name contains `filter` (all when empty). `progress`
/// is called after each check.
VerifyReport run_verify(const VerifyConfig& cfg, const std::string& filter = "",
                        const std::function<void(const CheckResult&)>& progress = {});

/// Canonical JSON of a report.
std::string report_json(const VerifyReport& report);

/// Individual suites with explicit bounds.
namespace checks {
CheckResult cg_orthogonality(int jmax);
CheckResult cg_symmetry(int jmax);
CheckResult wigner_d_product(int lmax, int rotations, std::uint64_t seed, double tol);
CheckResult wigner_d_unitarity(int jmax, int rotations, std::uint64_t seed);
/// Also reports a failure unless every one of the 27 (lam, mu, nu) cells was
/// compared on at least one coupling grid.
CheckResult ninej_spin1_table(int abc_max);
CheckResult ninej_row_swap(int entry_max);
CheckResult sh_orthonormality(int Lg);
CheckResult sht_round_trip(int Lmax, std::uint64_t seed);
CheckResult d_to_sh(int lmax, int rotations, std::uint64_t seed, double tol);
CheckResult gaunt_quadrature(int lmax);
CheckResult sht_equivariance(int L, int rotations, std::uint64_t seed, double tol);
CheckResult tsh_round_trip(int smax, int Lmax, std::uint64_t seed);
CheckResult tsh_orthonormality(int smax, int L);
CheckResult tsh_equivariance(int smax, int L, int rotations, std::uint64_t seed, double tol);
CheckResult tsh_scalar_reduction(int lmax);
CheckResult tpo_equivariance(int L, int rotations, std::uint64_t seed, double tol);
CheckResult generalized_gaunt_formula(int jl_max, int smax, std::uint64_t seed, double tol);
CheckResult gtp_gaunt(int lmax, std::uint64_t seed);
CheckResult simulation(int jmax, int pairs, std::uint64_t seed, double tol);
CheckResult bilinearity(int L, std::uint64_t seed);
CheckResult cgtp_flop_counts(int jmax);
CheckResult selection_iff(int max_label);
CheckResult completeness(int jmax);
CheckResult interactable_search(int jmax);
CheckResult gtp_exclusion(int lmax);
CheckResult expressivity(int Lmax);
CheckResult bench_counts(int Lmax);
}  // namespace checks

}  // namespace sphtp
