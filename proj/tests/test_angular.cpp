#include <doctest.h>

#include <cmath>
#include <numbers>
#include <thread>

#include "sphtp/angular.hpp"
#include "sphtp/sht.hpp"

using namespace sphtp;

namespace {

// Wigner's explicit sum, evaluated in long double.
long double small_d_oracle(int j, int mp, int m, long double beta) {
  auto f = [](int n) { return std::tgamma(static_cast<long double>(n) + 1); };
  const long double c = std::cos(beta / 2), s = std::sin(beta / 2);
  long double sum = 0;
  for (int k = 0; k <= 2 * j; ++k) {
    if (j + m - k < 0 || j - k - mp < 0 || k - m + mp < 0) continue;
    const long double term = std::pow(c, 2 * j - 2 * k + m - mp) * std::pow(s, 2 * k - m + mp) /
                             (f(j + m - k) * f(k) * f(j - k - mp) * f(k - m + mp));
    sum += ((k - m + mp) % 2 == 0 ? 1 : -1) * term;
  }
  return std::sqrt(f(j + mp) * f(j - mp) * f(j + m) * f(j - m)) * sum;
}

}  // namespace

TEST_CASE("triangle") {
  CHECK(triangle(1, 1, 2));
  CHECK(triangle(0, 3, 3));
  CHECK_FALSE(triangle(1, 1, 3));
  CHECK_FALSE(triangle(-1, 0, 1));
  CHECK(triangle_delta(2, 3, 5) == 1);
  CHECK(triangle_delta(2, 3, 6) == 0);
}

TEST_CASE("CG values against an independent table") {
  struct Row {
    CgKey key;
    const char* exact;
    double value;
  };
  const Row rows[] = {
      {{1, 1, 1, -1, 2, 0}, "1*sqrt(1/6)", 0.40824829046386301637},
      {{2, 1, 1, 0, 2, 1}, "1*sqrt(1/6)", 0.40824829046386301637},
      {{3, -2, 2, 1, 4, -1}, "-1*sqrt(7/20)", -0.59160797830996160426},
      {{2, 2, 2, -2, 3, 0}, "1*sqrt(1/10)", 0.31622776601683793320},
      {{3, 3, 3, -3, 0, 0}, "1*sqrt(1/7)", 0.37796447300922722721},
      {{4, 2, 3, -1, 5, 1}, "1*sqrt(1849/16380)", 0.33597851550592171989},
      {{1, 0, 1, 0, 0, 0}, "-1*sqrt(1/3)", -0.57735026918962576451},
  };
  for (const auto& r : rows) {
    CAPTURE(r.exact);
    CHECK(cg(r.key).to_double() == doctest::Approx(r.value).epsilon(1e-15));
    CHECK(cg(r.key).to_string() == r.exact);
  }
  CHECK(cg({1, 1, 1, -1, 2, 0}).to_string() == "1*sqrt(1/6)");
  CHECK(cg({1, 0, 1, 0, 0, 0}).to_string() == "-1*sqrt(1/3)");
}

TEST_CASE("CG zeros") {
  CHECK(cg({1, 0, 1, 0, 1, 0}).is_zero());           // odd parity at m = 0
  CHECK(cg({1, 1, 1, 1, 1, 1}).is_zero());           // m1 + m2 != m3
  CHECK(cg({1, 0, 1, 0, 3, 0}).is_zero());           // triangle fails
  CHECK(cg_zero(1, 1, 1).is_zero());
  CHECK_FALSE(cg_zero(1, 1, 2).is_zero());
}

TEST_CASE("CG reordering symmetry, exhaustive to 3") {
  for (int j = 0; j <= 3; ++j)
    for (int l = 0; l <= 3; ++l)
      for (int s = 0; s <= 3; ++s)
        for (int mj = -j; mj <= j; ++mj)
          for (int ml = -l; ml <= l; ++ml) {
            const int ms = mj - ml;
            if (std::abs(ms) > s) continue;
            const auto lhs = cg({l, ml, s, ms, j, mj});
            const auto rhs = ExactRational::from_root((l - ml) % 2 == 0 ? 1 : -1, mpq_class(2 * j + 1) / (2 * s + 1)) *
                             cg({j, mj, l, -ml, s, ms});
            CHECK(lhs == rhs);
          }
}

TEST_CASE("float CG tables agree with exact values") {
  for (int j1 = 0; j1 <= 4; ++j1)
    for (int j2 = 0; j2 <= 4; ++j2)
      for (int j3 = std::abs(j1 - j2); j3 <= j1 + j2; ++j3) {
        const auto t = cg_table(j1, j2, j3);
        for (int m1 = -j1; m1 <= j1; ++m1)
          for (int m2 = -j2; m2 <= j2; ++m2) {
            const double want = std::abs(m1 + m2) <= j3 ? cg_value({j1, m1, j2, m2, j3, m1 + m2}) : 0.0;
            CHECK(std::abs((*t)(m1, m2) - want) < 1e-14);
          }
      }
  const auto big = cg_table(32, 32, 64);
  CHECK((*big)(32, 32) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("9j values against an independent table") {
  struct Row {
    NineJKey key;
    double value;
  };
  const Row rows[] = {
      {{{1, 1, 1, 1, 1, 1, 1, 1, 1}}, 0.0},
      {{{1, 2, 1, 2, 1, 1, 2, 2, 1}}, -0.029814239699997195952},
      {{{2, 2, 1, 3, 3, 1, 2, 3, 1}}, 0.017496355305594129273},
      {{{3, 2, 1, 2, 3, 1, 3, 3, 1}}, 0.015272070966424250553},
      {{{1, 1, 0, 1, 1, 2, 2, 2, 2}}, 0.039440531887330773617},
      {{{2, 1, 1, 1, 2, 1, 2, 2, 1}}, 0.029814239699997195952},
      {{{0, 1, 1, 1, 0, 1, 1, 1, 1}}, -1.0 / 9.0},
  };
  for (const auto& r : rows) {
    CHECK(wigner_9j(r.key).to_double() == doctest::Approx(r.value).epsilon(1e-14));
  }
  CHECK(wigner_9j({{1, 2, 1, 2, 1, 1, 2, 2, 1}}).to_string() == "-1*sqrt(1/1125)");
  CHECK(wigner_9j({{1, 1, 1, 1, 1, 1, 1, 1, 1}}).is_zero());
}

TEST_CASE("9j vanishes when a row or column does not couple") {
  CHECK(wigner_9j({{0, 0, 1, 0, 0, 1, 0, 0, 1}}).is_zero());
  CHECK(wigner_9j({{1, 1, 3, 1, 1, 1, 2, 2, 2}}).is_zero());
}

TEST_CASE("spin-1 9j table agrees with the contraction on every cell") {
  int cells = 0;
  for (int lam = -1; lam <= 1; ++lam)
    for (int mu = -1; mu <= 1; ++mu)
      for (int nu = -1; nu <= 1; ++nu) {
        bool seen = false;
        for (int a = 1; a <= 4; ++a)
          for (int b = 1; b <= 4; ++b)
            for (int c = 1; c <= 4; ++c) {
              const double t = wigner_9j_spin1(a, lam, b, mu, c, nu);
              const double e = wigner_9j({{a + lam, a, 1, b + mu, b, 1, c + nu, c, 1}}).to_double();
              CHECK(std::abs(t - e) < 1e-12);
              seen = seen || e != 0.0;
            }
        if (lam == 0 && mu == 0 && nu == 0) CHECK_FALSE(seen);
        cells += seen;
      }
  // The unshifted cell has two equal columns and is identically zero.
  CHECK(cells == 26);
  CHECK(wigner_9j_spin1(0, 1, 0, 1, 0, 1) == doctest::Approx(1.0 / std::sqrt(27.0)).epsilon(1e-14));
  CHECK_THROWS_AS(wigner_9j_spin1(1, 2, 1, 0, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(wigner_9j_spin1(0, -1, 1, 0, 1, 0), std::invalid_argument);
}

TEST_CASE("small d matches Wigner's explicit sum") {
  for (double beta : {0.0, 0.3, 1.1, 2.0, 3.0}) {
    for (int j = 0; j <= 6; ++j) {
      const Eigen::MatrixXd d = wigner_small_d(j, beta);
      for (int mp = -j; mp <= j; ++mp)
        for (int m = -j; m <= j; ++m) {
          CHECK(std::abs(d(mp + j, m + j) - static_cast<double>(small_d_oracle(j, mp, m, beta))) < 1e-12);
        }
    }
  }
}

TEST_CASE("D reduces to spherical harmonics") {
  const EulerAngles g{0.4, 1.2, 2.0};
  const Eigen::Vector3d z = rotation_matrix(g) * Eigen::Vector3d::UnitZ();
  const double theta = std::acos(z.z()), phi = std::atan2(z.y(), z.x());
  CHECK(theta == doctest::Approx(1.2));
  CHECK(phi == doctest::Approx(0.4));
  for (int l = 0; l <= 5; ++l) {
    const Eigen::MatrixXcd d = wigner_d_matrix(l, g);
    for (int m = -l; m <= l; ++m) {
      const cplx want = std::sqrt(4 * std::numbers::pi / (2 * l + 1)) * std::conj(sh_eval(l, m, theta, phi));
      CHECK(std::abs(d(m + l, l) - want) < 1e-13);
    }
  }
}

TEST_CASE("D is a unitary representation") {
  std::mt19937_64 rng(11);
  for (int r = 0; r < 5; ++r) {
    const EulerAngles g1 = random_rotation(rng), g2 = random_rotation(rng);
    const Eigen::Matrix3d R = rotation_matrix(g1) * rotation_matrix(g2);
    // Recover zyz angles of the composed rotation.
    const double beta = std::acos(std::clamp(R(2, 2), -1.0, 1.0));
    const double alpha = std::atan2(R(1, 2), R(0, 2));
    const double gamma = std::atan2(R(2, 1), -R(2, 0));
    CHECK((rotation_matrix({alpha, beta, gamma}) - R).cwiseAbs().maxCoeff() < 1e-12);
    for (int j = 0; j <= 5; ++j) {
      const Eigen::MatrixXcd d1 = wigner_d_matrix(j, g1), d2 = wigner_d_matrix(j, g2);
      const Eigen::MatrixXcd d12 = wigner_d_matrix(j, alpha, beta, gamma);
      CHECK((d1 * d2 - d12).cwiseAbs().maxCoeff() < 1e-12);
      const auto n = 2 * j + 1;
      CHECK((d1 * d1.adjoint() - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("rotation matrices are proper") {
  std::mt19937_64 rng(5);
  for (int r = 0; r < 10; ++r) {
    const Eigen::Matrix3d R = rotation_matrix(random_rotation(rng));
    CHECK((R * R.transpose() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(R.determinant() == doctest::Approx(1.0));
  }
}

TEST_CASE("sign fault hook") {
  const CgKey k{1, 1, 1, 0, 2, 1};
  const auto before = cg(k);
  testing::set_cg_sign_fault(k);
  CHECK(cg(k) == -before);
  testing::set_cg_sign_fault(std::nullopt);
  CHECK(cg(k) == before);
}

TEST_CASE("caches are safe under concurrent use") {
  std::vector<double> ref;
  for (int j1 = 0; j1 <= 4; ++j1)
    for (int j2 = 0; j2 <= 4; ++j2)
      for (int j3 = std::abs(j1 - j2); j3 <= j1 + j2; ++j3) {
        ref.push_back(cg_value({j1, 0, j2, 0, j3, 0}));
        ref.push_back(wigner_9j_spin1(j1, 0, j2, 1, j3, 1));
      }
  std::vector<std::thread> pool;
  std::vector<int> bad(8, 0);
  for (int t = 0; t < 8; ++t) {
    pool.emplace_back([t, &bad, &ref] {
      std::size_t i = 0;
      int& b = bad[static_cast<std::size_t>(t)];
      for (int j1 = 0; j1 <= 4; ++j1)
        for (int j2 = 0; j2 <= 4; ++j2)
          for (int j3 = std::abs(j1 - j2); j3 <= j1 + j2; ++j3) {
            if (std::abs((*cg_table(j1, j2, j3))(0, 0) - ref[i++]) > 1e-14) ++b;
            if (std::abs(wigner_9j({{j1, j1, 1, j2 + 1, j2, 1, j3 + 1, j3, 1}}).to_double() - ref[i++]) > 1e-13) ++b;
          }
    });
  }
  for (auto& th : pool) th.join();
  for (int b : bad) CHECK(b == 0);
}
