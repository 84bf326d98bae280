#include "sphtp/rules.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "sphtp/errors.hpp"

namespace sphtp {

namespace {

bool spin_one(const PathKey& p) { return p.s1 == 1 && p.s2 == 1 && p.s3 == 1; }

double ninej_double(const PathKey& p) {
  if (spin_one(p)) {
    const int lam = p.j1 - p.l1, mu = p.j2 - p.l2, nu = p.j3 - p.l3;
    if (std::abs(lam) > 1 || std::abs(mu) > 1 || std::abs(nu) > 1) return 0.0;
    return wigner_9j_spin1(p.l1, lam, p.l2, mu, p.l3, nu);
  }
  return wigner_9j(p.ninej()).to_double();
}

bool any_negative(const PathKey& p) {
  return std::min({p.j1, p.l1, p.s1, p.j2, p.l2, p.s2, p.j3, p.l3, p.s3}) < 0;
}

}  // namespace

std::string PathKey::str() const {
  auto t = [](int a, int b, int c) {
    return std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c);
  };
  return "(" + t(j1, l1, s1) + "; " + t(j2, l2, s2) + "; " + t(j3, l3, s3) + ")";
}

double generalized_gaunt(const PathKey& p) {
  if (any_negative(p)) return 0.0;
  const ExactRational c0 = cg_zero(p.l1, p.l2, p.l3);
  if (c0.is_zero()) return 0.0;
  const double nj = ninej_double(p);
  if (nj == 0.0) return 0.0;
  const double pref = std::sqrt((2.0 * p.j1 + 1) * (2.0 * p.j2 + 1) * (2.0 * p.l1 + 1) *
                                (2.0 * p.l2 + 1) * (2.0 * p.s3 + 1) / (4.0 * std::numbers::pi));
  return pref * nj * c0.to_double();
}

bool generalized_gaunt_nonzero(const PathKey& p) {
  if (any_negative(p)) return false;
  return !cg_zero(p.l1, p.l2, p.l3).is_zero() && !wigner_9j(p.ninej()).is_zero();
}

namespace {

RuleReport rule_flags(const PathKey& p) {
  RuleReport r;
  const std::array<int, 3> j{p.j1, p.j2, p.j3};
  const std::array<int, 3> l{p.l1, p.l2, p.l3};
  r.rule[0] = triangle(j[0], l[0], 1) && triangle(j[1], l[1], 1) && triangle(j[2], l[2], 1);
  r.rule[1] = triangle(j[0], j[1], j[2]);
  r.rule[2] = triangle(l[0], l[1], l[2]);
  r.rule[3] = (l[0] + l[1] + l[2]) % 2 == 0;
  bool pattern = false;
  for (int a = 0; a < 3; ++a) {
    const int b = (a + 1) % 3, c = (a + 2) % 3;
    if (j[a] == l[a] && j[b] == j[c] && l[b] == l[c]) pattern = true;
  }
  if (j == l) pattern = true;
  r.rule[4] = !pattern;
  r.passed = std::all_of(r.rule.begin(), r.rule.end(), [](bool f) { return f; });
  return r;
}

}  // namespace

RuleReport vstp_rules(const PathKey& p) {
  RuleReport r = rule_flags(p);
  r.coefficient = generalized_gaunt(p);
  return r;
}

std::array<int, 3> find_valid_ells(int j1, int j2, int j3) {
  if (!triangle(j1, j2, j3)) {
    throw TriangleViolation("find_valid_ells: (" + std::to_string(j1) + "," + std::to_string(j2) +
                            "," + std::to_string(j3) + ") does not satisfy the triangle condition");
  }
  if (j1 == 0 && j2 == 0 && j3 == 0) {
    throw NotInteractable("find_valid_ells: (0,0,0) is scalar multiplication");
  }
  const std::array<int, 3> j{j1, j2, j3};
  std::array<int, 3> idx{0, 1, 2};
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return j[a] < j[b]; });
  const int a = j[idx[0]], b = j[idx[1]], c = j[idx[2]];
  const bool even = (a + b + c) % 2 == 0;

  std::array<int, 3> ls{};
  if (a < b && b < c) {
    ls = even ? std::array{a, b + 1, c - 1} : std::array{a, b, c - 1};
  } else if (a == b && b < c) {
    ls = even ? std::array{a, b + 1, c - 1} : std::array{a, b + 1, c};
  } else if (a < b && b == c) {
    ls = even ? std::array{a + 1, b, c - 1} : std::array{a + 1, b, c};
  } else if (a % 2 == 0) {
    ls = {a - 1, a, a + 1};
  } else {
    ls = {a - 1, a, a};
  }

  std::array<int, 3> out{};
  for (int k = 0; k < 3; ++k) out[idx[k]] = ls[k];
  return out;
}

bool interactable(int j1, int j2, int j3) {
  return triangle(j1, j2, j3) && !(j1 == 0 && j2 == 0 && j3 == 0);
}

bool interactable_by_search(int j1, int j2, int j3) {
  if (j1 < 0 || j2 < 0 || j3 < 0) return false;
  const int lmax = std::max({j1, j2, j3}) + 1;
  for (int l1 = 0; l1 <= lmax; ++l1) {
    for (int l2 = 0; l2 <= lmax; ++l2) {
      for (int l3 = 0; l3 <= lmax; ++l3) {
        if (rule_flags(PathKey::vector(j1, l1, j2, l2, j3, l3)).passed) return true;
      }
    }
  }
  return false;
}

long expressivity_count(int s, int L) {
  if (L < 0 || s < 0) return 0;
  return static_cast<long>(tsh_keys(s, L).size());
}

}  // namespace sphtp
