#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sphtp/errors.hpp"
#include "sphtp/tsh.hpp"

using namespace sphtp;

namespace {

double max_diff(const TshCoeffs& a, const TshCoeffs& b) {
  double d = 0.0;
  for (const auto& [k, v] : a.blocks()) {
    const auto* w = b.find(k.first, k.second);
    REQUIRE(w != nullptr);
    d = std::max(d, (v - *w).cwiseAbs().maxCoeff());
  }
  return d;
}

Eigen::Vector3d unit(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

}  // namespace

TEST_CASE("admissible keys") {
  const auto k0 = tsh_keys(0, 3);
  CHECK(k0.size() == 4);
  for (auto [j, l] : k0) CHECK(j == l);

  const auto k1 = tsh_keys(1, 2);
  const std::vector<TshCoeffs::Key> want = {{0, 1}, {1, 0}, {1, 1}, {1, 2}, {2, 1}, {2, 2}, {3, 2}};
  CHECK(k1 == want);

  TshCoeffs x(1, 2);
  CHECK_THROWS_AS(x.block(3, 1), TriangleViolation);
  CHECK_THROWS_AS(x.block(3, 3), PreconditionError);
  CHECK(x.block(2, 1).size() == 5);
}

TEST_CASE("spin 0 reduces to scalar harmonics") {
  for (int l = 0; l <= 5; ++l)
    for (int m = -l; m <= l; ++m) {
      const auto v = tsh_eval(l, m, l, 0, 0.8, -1.9);
      REQUIRE(v.size() == 1);
      CHECK(std::abs(v(0) - sh_eval(l, m, 0.8, -1.9)) < 1e-15);
    }
}

TEST_CASE("spin-1 harmonic with j = 0") {
  // Only ml = -ms contributes, with C^{0,0}_{1,-ms,1,ms} = (-1)^(1+ms) / sqrt(3).
  const double th = 1.1, ph = 0.6;
  const Eigen::Vector3d r = unit(th, ph);
  const double c = 1.0 / std::sqrt(8 * std::numbers::pi);
  const auto v = tsh_eval(0, 0, 1, 1, th, ph);
  CHECK(std::abs(v(0) + c * cplx(r.x(), r.y())) < 1e-15);
  CHECK(std::abs(v(1) + r.z() / std::sqrt(4 * std::numbers::pi)) < 1e-15);
  CHECK(std::abs(v(2) - c * cplx(r.x(), -r.y())) < 1e-15);
}

TEST_CASE("round trips") {
  std::mt19937_64 rng(9);
  for (int s = 0; s <= 2; ++s)
    for (int L : {0, 1, 4, 12, 32}) {
      const auto x = random_tsh_coeffs(s, L, rng);
      CHECK(max_diff(x, tsh_decode(tsh_encode(x, make_grid(L)), L)) < 1e-12);
    }
}

TEST_CASE("orthonormality") {
  for (int s = 0; s <= 2; ++s) CHECK(tsh_orthonormality_check(s, 4) < 1e-12);
}

TEST_CASE("encode is equivariant") {
  std::mt19937_64 rng(10);
  const int L = 3;
  const auto grid = make_grid(L);
  for (int s = 0; s <= 2; ++s) {
    const auto g = random_rotation(rng);
    const Eigen::Matrix3d R = rotation_matrix(g);
    const Eigen::MatrixXcd ds = wigner_d_matrix(s, g);
    const auto x = random_tsh_coeffs(s, L, rng);
    const auto f = tsh_encode(rotate(x, g), grid);
    double dev = 0.0;
    for (int i = 0; i < grid->n_theta(); ++i)
      for (int k = 0; k < grid->n_phi; ++k) {
        const Eigen::Vector3d p = R.transpose() * unit(grid->theta[i], grid->phi[k]);
        const double th = std::acos(std::clamp(p.z(), -1.0, 1.0)), ph = std::atan2(p.y(), p.x());
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(2 * s + 1);
        for (const auto& [key, c] : x.blocks())
          for (int m = -key.first; m <= key.first; ++m) v += c(m + key.first) * tsh_eval(key.first, m, key.second, s, th, ph);
        const Eigen::VectorXcd want = ds * v;
        for (int ms = -s; ms <= s; ++ms) dev = std::max(dev, std::abs(f(i, k, ms) - want(ms + s)));
      }
    CHECK(dev < 1e-12);
  }
}

TEST_CASE("encode matches pointwise evaluation") {
  std::mt19937_64 rng(12);
  const auto x = random_tsh_coeffs(1, 2, rng);
  const auto grid = make_grid(3);
  const auto f = tsh_encode(x, grid);
  double dev = 0.0;
  for (int i = 0; i < grid->n_theta(); ++i)
    for (int k = 0; k < grid->n_phi; ++k) {
      Eigen::VectorXcd v = Eigen::VectorXcd::Zero(3);
      for (const auto& [key, c] : x.blocks())
        for (int m = -key.first; m <= key.first; ++m)
          v += c(m + key.first) * tsh_eval(key.first, m, key.second, 1, grid->theta[i], grid->phi[k]);
      for (int ms = -1; ms <= 1; ++ms) dev = std::max(dev, std::abs(f(i, k, ms) - v(ms + 1)));
    }
  CHECK(dev < 1e-13);
}

TEST_CASE("decode needs a large enough grid") {
  std::mt19937_64 rng(13);
  const auto x = random_tsh_coeffs(1, 4, rng);
  const auto f = tsh_encode(x, make_grid(4));
  CHECK_THROWS_AS(tsh_decode(f, 5), PreconditionError);
  CHECK_THROWS_AS(tsh_encode(x, make_grid(3)), PreconditionError);
}
