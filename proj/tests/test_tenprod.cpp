#include <doctest.h>

#include <cmath>

#include "sphtp/errors.hpp"
#include "sphtp/rules.hpp"
#include "sphtp/tenprod.hpp"

using namespace sphtp;

namespace {

Eigen::VectorXcd random_vec(int j, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Eigen::VectorXcd v(2 * j + 1);
  for (auto& c : v) c = cplx(n(rng), n(rng));
  return v;
}

Eigen::VectorXcd basis(int j, int m) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(2 * j + 1);
  v(m + j) = 1.0;
  return v;
}

// Spherical components (v_{-1}, v_0, v_{+1}) of a Cartesian vector.
Eigen::Vector3cd spherical(const Eigen::Vector3cd& c) {
  const double r = 1.0 / std::sqrt(2.0);
  const cplx i(0, 1);
  return {r * (c.x() - i * c.y()), c.z(), -r * (c.x() + i * c.y())};
}

// Eigen's cross() conjugates complex results; this one is bilinear.
Eigen::Vector3cd cross(const Eigen::Vector3cd& a, const Eigen::Vector3cd& b) {
  return {a.y() * b.z() - a.z() * b.y(), a.z() * b.x() - a.x() * b.z(), a.x() * b.y() - a.y() * b.x()};
}

}  // namespace

TEST_CASE("cgtp path on basis vectors") {
  // C^{1,1}_{1,1,1,0} = 1/sqrt2, C^{0,0}_{1,1,1,-1} = 1/sqrt3.
  const auto z = cgtp_path(basis(1, 1), basis(1, 0), 1);
  CHECK(std::abs(z(2) - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(z(0)) + std::abs(z(1)) < 1e-15);
  const auto s = cgtp_path(basis(1, 1), basis(1, -1), 0);
  CHECK(std::abs(s(0) - 1.0 / std::sqrt(3.0)) < 1e-15);
  CHECK_THROWS_AS(cgtp_path(basis(1, 0), basis(1, 0), 3), TriangleViolation);
}

TEST_CASE("naive and sparse agree and count loop iterations") {
  std::mt19937_64 rng(1);
  for (int j1 = 0; j1 <= 4; ++j1)
    for (int j2 = 0; j2 <= 4; ++j2)
      for (int j3 = std::abs(j1 - j2); j3 <= j1 + j2; ++j3) {
        const auto x = random_vec(j1, rng), y = random_vec(j2, rng);
        std::uint64_t fn = 0, fs = 0;
        const auto a = cgtp_path(x, y, j3, CgtpMode::naive, &fn);
        const auto b = cgtp_path(x, y, j3, CgtpMode::sparse, &fs);
        CHECK((a - b).cwiseAbs().maxCoeff() < 1e-14);
        CHECK(fn == static_cast<std::uint64_t>((2 * j1 + 1) * (2 * j2 + 1) * (2 * j3 + 1)));
        std::uint64_t pairs = 0;
        for (int m1 = -j1; m1 <= j1; ++m1)
          for (int m2 = -j2; m2 <= j2; ++m2) pairs += std::abs(m1 + m2) <= j3;
        CHECK(fs == pairs);
        CHECK(fs == cgtp_sparse_flops(j1, j2, j3));
      }
}

TEST_CASE("cgtp is equivariant") {
  std::mt19937_64 rng(2);
  for (int j1 = 0; j1 <= 3; ++j1)
    for (int j2 = 0; j2 <= 3; ++j2)
      for (int j3 = std::abs(j1 - j2); j3 <= j1 + j2; ++j3) {
        const auto g = random_rotation(rng);
        const auto x = random_vec(j1, rng), y = random_vec(j2, rng);
        const Eigen::VectorXcd lhs =
            cgtp_path(wigner_d_matrix(j1, g) * x, wigner_d_matrix(j2, g) * y, j3);
        const Eigen::VectorXcd rhs = wigner_d_matrix(j3, g) * cgtp_path(x, y, j3);
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
      }
}

TEST_CASE("cgtp_full keeps paths apart") {
  std::mt19937_64 rng(3);
  const auto x = random_irrep_coeffs(1, rng), y = random_irrep_coeffs(1, rng);
  const auto r = cgtp_full(x, y, 2, CgtpMode::sparse);
  // Paths (0,0)->0, (0,1)->1, (1,0)->1, (1,1)->0,1,2.
  CHECK(r.output.blocks.size() == 6);
  CHECK(r.output.find(BlockKey{1, std::nullopt, std::pair{0, 1}}) != nullptr);
  CHECK(r.output.find(BlockKey{2, std::nullopt, std::pair{1, 1}}) != nullptr);
  const auto clipped = cgtp_full(x, y, 1, CgtpMode::sparse);
  CHECK(clipped.output.blocks.size() == 5);
}

TEST_CASE("spin-1 pointwise product is a cross product") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n;
  const auto grid = make_grid(2);
  SpinSignal f = zero_spin_signal(1, grid), g = zero_spin_signal(1, grid);
  std::vector<Eigen::Vector3cd> fc, gc;
  for (int i = 0; i < grid->n_theta(); ++i)
    for (int k = 0; k < grid->n_phi; ++k) {
      Eigen::Vector3cd a, b;
      for (int c = 0; c < 3; ++c) {
        a(c) = cplx(n(rng), n(rng));
        b(c) = cplx(n(rng), n(rng));
      }
      fc.push_back(a);
      gc.push_back(b);
      const auto sa = spherical(a), sb = spherical(b);
      for (int m = -1; m <= 1; ++m) {
        f(i, k, m) = sa(m + 1);
        g(i, k, m) = sb(m + 1);
      }
    }
  const SpinSignal h = pointwise_spin_tp(f, g, 1);
  double dev = 0.0;
  std::size_t p = 0;
  for (int i = 0; i < grid->n_theta(); ++i)
    for (int k = 0; k < grid->n_phi; ++k, ++p) {
      const Eigen::Vector3cd want = spherical(cplx(0, 1) / std::sqrt(2.0) * cross(fc[p], gc[p]));
      for (int m = -1; m <= 1; ++m) dev = std::max(dev, std::abs(h(i, k, m) - want(m + 1)));
    }
  CHECK(dev < 1e-14);
}

TEST_CASE("gtp reproduces Gaunt coefficients") {
  std::mt19937_64 rng(5);
  for (int l1 = 0; l1 <= 3; ++l1)
    for (int l2 = 0; l2 <= 3; ++l2) {
      IrrepCoeffs x, y;
      x.L = l1;
      y.L = l2;
      x.block(l1) = random_vec(l1, rng);
      y.block(l2) = random_vec(l2, rng);
      const auto out = gtp(x, y, l1 + l2).output;
      for (int l3 = 0; l3 <= l1 + l2; ++l3) {
        Eigen::VectorXcd want = Eigen::VectorXcd::Zero(2 * l3 + 1);
        for (int m1 = -l1; m1 <= l1; ++m1)
          for (int m2 = -l2; m2 <= l2; ++m2)
            if (std::abs(m1 + m2) <= l3)
              want(m1 + m2 + l3) += gaunt_coefficient(l1, m1, l2, m2, l3, m1 + m2) * x.block(l1)(m1 + l1) *
                                    y.block(l2)(m2 + l2);
        const auto* got = out.find(BlockKey{l3, std::nullopt, std::nullopt});
        REQUIRE(got != nullptr);
        CHECK((*got - want).cwiseAbs().maxCoeff() < 1e-12);
        if ((l1 + l2 + l3) % 2 == 1) CHECK(got->cwiseAbs().maxCoeff() < 1e-13);
      }
    }
}

TEST_CASE("vstp blocks follow the generalized Gaunt formula") {
  std::mt19937_64 rng(6);
  const auto x = random_vec(1, rng), y = random_vec(1, rng);
  TshCoeffs tx(1, 1), ty(1, 1);
  tx.set(1, 0, x);
  ty.set(1, 1, y);
  const auto out = vstp(tx, ty, 2).output;
  // (1,0) x (1,1) -> (1,0) breaks the l-parity rule.
  CHECK(out.find(1, 0)->cwiseAbs().maxCoeff() < 1e-13);
  const double c = generalized_gaunt(PathKey::vector(1, 0, 1, 1, 1, 1));
  CHECK(std::abs(c) > 0.1);
  CHECK((*out.find(1, 1) - c * cgtp_path(x, y, 1)).cwiseAbs().maxCoeff() < 1e-12);
  // With j = l in every column the first two columns of the 9j coincide.
  TshCoeffs tz(1, 1);
  tz.set(1, 1, x);
  CHECK(generalized_gaunt(PathKey::vector(1, 1, 1, 1, 2, 2)) == 0.0);
  CHECK(vstp(tz, ty, 2).output.find(2, 2)->cwiseAbs().maxCoeff() < 1e-13);
  CHECK_THROWS_AS(vstp(as_scalar_tsh(random_irrep_coeffs(1, rng)), ty, 2), std::invalid_argument);
}

TEST_CASE("istp preconditions and flop accounting") {
  std::mt19937_64 rng(7);
  const auto x = random_tsh_coeffs(1, 2, rng), y = random_tsh_coeffs(1, 2, rng);
  CHECK_THROWS_AS(istp(x, y, 3, 4), TriangleViolation);
  CHECK_THROWS_AS(istp(x, y, 1, 4, make_grid(3)), PreconditionError);
  CHECK_THROWS_AS(istp(x, y, 1, 5), PreconditionError);
  const auto r = istp(x, y, 1, 4);
  std::uint64_t want = 0;
  const auto grid = make_grid(4);
  const auto f = tsh_encode(x, grid, &want);
  const auto g = tsh_encode(y, grid, &want);
  tsh_decode(pointwise_spin_tp(f, g, 1, &want), 4, &want);
  CHECK(r.flops == want);
}

TEST_CASE("simulation recovers cgtp paths, including the cross product") {
  std::mt19937_64 rng(8);
  for (int j1 = 0; j1 <= 3; ++j1)
    for (int j2 = 0; j2 <= 3; ++j2)
      for (int j3 = std::abs(j1 - j2); j3 <= j1 + j2; ++j3) {
        const auto x = random_vec(j1, rng), y = random_vec(j2, rng);
        CHECK((simulate_cgtp_path(x, y, j3) - cgtp_path(x, y, j3)).cwiseAbs().maxCoeff() < 1e-10);
      }
  // The (1,1,1) path is antisymmetric: GTP cannot produce it.
  const auto x = random_vec(1, rng);
  CHECK(cgtp_path(x, x, 1).cwiseAbs().maxCoeff() < 1e-15);
  IrrepCoeffs a;
  a.L = 1;
  a.block(1) = x;
  IrrepCoeffs b = a;
  b.block(1) = random_vec(1, rng);
  CHECK(gtp(a, b, 1).output.block(1).cwiseAbs().maxCoeff() < 1e-13);
  CHECK((simulate_cgtp_path(a.block(1), b.block(1), 1) - cgtp_path(a.block(1), b.block(1), 1)).norm() < 1e-10);
  CHECK_THROWS_AS(simulate_cgtp_path(x, x, 3), TriangleViolation);
}

TEST_CASE("tensor products are bilinear") {
  std::mt19937_64 rng(9);
  const auto x1 = random_tsh_coeffs(1, 2, rng), x2 = random_tsh_coeffs(1, 2, rng), y = random_tsh_coeffs(1, 2, rng);
  const cplx a(0.3, 1.2), b(-0.8, 0.1);
  TshCoeffs xs(1, 2);
  for (const auto& [k, v] : x1.blocks()) xs.block(k.first, k.second) = a * v + b * *x2.find(k.first, k.second);
  const auto lhs = vstp(xs, y, 4).output;
  const auto r1 = vstp(x1, y, 4).output, r2 = vstp(x2, y, 4).output;
  double dev = 0.0;
  for (const auto& [k, v] : lhs.blocks())
    dev = std::max(dev, (v - a * *r1.find(k.first, k.second) - b * *r2.find(k.first, k.second)).cwiseAbs().maxCoeff());
  CHECK(dev < 1e-12);
}
