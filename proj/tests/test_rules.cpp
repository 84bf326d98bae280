#include <doctest.h>

#include <cmath>

#include "sphtp/errors.hpp"
#include "sphtp/rules.hpp"

using namespace sphtp;

TEST_CASE("rule flags on documented paths") {
  const auto r111 = vstp_rules(PathKey::vector(1, 1, 1, 1, 1, 1));
  CHECK_FALSE(r111.passed);
  CHECK(r111.rule[0]);
  CHECK(r111.rule[1]);
  CHECK(r111.rule[2]);
  CHECK_FALSE(r111.rule[3]);
  CHECK_FALSE(r111.rule[4]);
  CHECK(r111.coefficient == 0.0);

  const auto r2 = vstp_rules(PathKey::vector(2, 2, 1, 1, 1, 1));
  CHECK_FALSE(r2.rule[4]);
  CHECK(r2.rule[3]);

  const auto odd = vstp_rules(PathKey::vector(1, 0, 1, 1, 1, 2));
  CHECK_FALSE(odd.rule[3]);

  const auto far = vstp_rules(PathKey::vector(3, 1, 1, 1, 2, 2));
  CHECK_FALSE(far.rule[0]);
}

TEST_CASE("identical j and l columns force a zero") {
  const PathKey p = PathKey::vector(1, 1, 2, 2, 3, 3);
  const auto r = vstp_rules(p);
  CHECK(r.rule[0]);
  CHECK(r.rule[1]);
  CHECK(r.rule[2]);
  CHECK(r.rule[3]);
  CHECK_FALSE(r.rule[4]);
  CHECK_FALSE(generalized_gaunt_nonzero(p));
}

TEST_CASE("generalized Gaunt values against an independent table") {
  struct Row {
    PathKey p;
    double value;
  };
  const Row rows[] = {
      {{1, 0, 1, 1, 1, 1, 1, 1, 1}, 0.14104739588693907174},
      {{1, 1, 1, 2, 3, 1, 3, 2, 1}, 0.054067125471860572462},
      {{2, 1, 1, 2, 3, 1, 2, 2, 1}, -0.11920680675222402564},
      {{1, 1, 0, 2, 2, 0, 3, 3, 0}, 0.31986542793438462121},
      {{2, 1, 1, 1, 1, 0, 2, 2, 1}, -0.15450968080927583214},
      {{1, 2, 1, 2, 3, 1, 3, 3, 1}, -0.027529632787052895766},
      {{1, 0, 1, 1, 0, 1, 1, 1, 1}, 0.0},
      {{1, 1, 1, 1, 1, 1, 2, 2, 1}, 0.0},
  };
  for (const auto& r : rows) {
    CAPTURE(r.p.str());
    CHECK(generalized_gaunt(r.p) == doctest::Approx(r.value).epsilon(1e-13));
    CHECK(generalized_gaunt_nonzero(r.p) == (r.value != 0.0));
  }
}

TEST_CASE("scalar paths reduce to the Gaunt coefficient") {
  for (int l1 = 0; l1 <= 3; ++l1)
    for (int l2 = 0; l2 <= 3; ++l2)
      for (int l3 = std::abs(l1 - l2); l3 <= l1 + l2; ++l3) {
        const double g = generalized_gaunt({l1, l1, 0, l2, l2, 0, l3, l3, 0});
        const double want = gaunt_coefficient(l1, 0, l2, 0, l3, 0) / cg_value({l1, 0, l2, 0, l3, 0});
        if ((l1 + l2 + l3) % 2) CHECK(g == 0.0);
        else CHECK(g == doctest::Approx(want).epsilon(1e-12));
      }
}

TEST_CASE("find_valid_ells casework") {
  using A = std::array<int, 3>;
  CHECK(find_valid_ells(1, 1, 1) == A{0, 1, 1});
  CHECK(find_valid_ells(2, 2, 2) == A{1, 2, 3});
  CHECK(find_valid_ells(1, 2, 3) == A{1, 3, 2});
  CHECK(find_valid_ells(1, 2, 2) == A{2, 2, 2});
  CHECK(find_valid_ells(2, 3, 4) == A{2, 3, 3});
  CHECK(find_valid_ells(1, 1, 2) == A{1, 2, 1});
  CHECK(find_valid_ells(2, 2, 1) == A{2, 2, 2});
  // Unsorted input is handled through the sort permutation.
  CHECK(find_valid_ells(3, 1, 2) == A{2, 1, 3});
  CHECK_THROWS_AS(find_valid_ells(0, 0, 0), NotInteractable);
  CHECK_THROWS_AS(find_valid_ells(1, 1, 3), TriangleViolation);
}

TEST_CASE("every assignment passes the rules with a nonzero coefficient") {
  for (int j1 = 0; j1 <= 8; ++j1)
    for (int j2 = 0; j2 <= 8; ++j2)
      for (int j3 = std::abs(j1 - j2); j3 <= std::min(j1 + j2, 8); ++j3) {
        if (j1 + j2 + j3 == 0) continue;
        const auto l = find_valid_ells(j1, j2, j3);
        const PathKey p = PathKey::vector(j1, l[0], j2, l[1], j3, l[2]);
        CAPTURE(p.str());
        CHECK(vstp_rules(p).passed);
        CHECK(generalized_gaunt_nonzero(p));
      }
}

TEST_CASE("rule flags match the exact coefficient") {
  int mismatches = 0;
  for (int j1 = 0; j1 <= 4; ++j1)
    for (int l1 = 0; l1 <= 4; ++l1)
      for (int j2 = 0; j2 <= 4; ++j2)
        for (int l2 = 0; l2 <= 4; ++l2)
          for (int j3 = 0; j3 <= 4; ++j3)
            for (int l3 = 0; l3 <= 4; ++l3) {
              const PathKey p = PathKey::vector(j1, l1, j2, l2, j3, l3);
              mismatches += vstp_rules(p).passed != generalized_gaunt_nonzero(p);
            }
  CHECK(mismatches == 0);
}

TEST_CASE("interactability") {
  CHECK_FALSE(interactable(0, 0, 0));
  CHECK(interactable(1, 1, 1));
  CHECK_FALSE(interactable(1, 1, 3));
  for (int a = 0; a <= 5; ++a)
    for (int b = 0; b <= 5; ++b)
      for (int c = 0; c <= 5; ++c) CHECK(interactable(a, b, c) == interactable_by_search(a, b, c));
}

TEST_CASE("expressivity") {
  CHECK(expressivity_count(0, 8) == 9);
  CHECK(expressivity_count(1, 8) == 25);
  CHECK(expressivity_count(2, 8) == 39);
  CHECK(expressivity_count(1, 0) == 1);
  CHECK(expressivity_count(-1, 3) == 0);
}
