#pragma once

#include <array>

#include "sphtp/tenprod.hpp"

namespace sphtp {

struct RuleReport {
  bool passed = false;
  /// Rules 1..5 at indices 0..4.
  std::array<bool, 5> rule{};
  double coefficient = 0.0;
};

/// Scalar multiplying C^{j3,m3}_{j1,m1,j2,m2} Y^{l3,s3}_{j3,m3} in the
/// decomposition of the coupled product of two tensor spherical harmonics:
///   sqrt((2j1+1)(2j2+1)(2l1+1)(2l2+1)(2s3+1)/4pi) * 9j * C^{l3,0}_{l1,0,l2,0}
/// Spin (1,1,1) paths use the closed-form 9j table.
double generalized_gaunt(const PathKey& p);

/// Exact zero test for the same coefficient.
bool generalized_gaunt_nonzero(const PathKey& p);

/// Flags the five VSTP selection rules by pattern, without consulting the 9j.
/// Rule 5 also fails when j_i = l_i for every i: the first two columns of the
/// 9j then coincide and the odd column swap forces it to vanish.
/// The coefficient is filled in from generalized_gaunt.
RuleReport vstp_rules(const PathKey& p);

/// (l1, l2, l3) making (j1, j2, j3) reachable by one VSTP. Throws
/// TriangleViolation for non-coupling labels and NotInteractable for (0,0,0).
std::array<int, 3> find_valid_ells(int j1, int j2, int j3);

bool interactable(int j1, int j2, int j3);

/// Exhaustive search over l <= max(j)+1 for a path passing vstp_rules.
bool interactable_by_search(int j1, int j2, int j3);

/// #{(j, l) : triangle(j, l, s), l <= L}.
long expressivity_count(int s, int L);

}  // namespace sphtp
