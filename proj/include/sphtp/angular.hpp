#pragma once

#include <Eigen/Dense>

#include <array>
#include <compare>
#include <memory>
#include <optional>
#include <random>
#include <vector>

#include "sphtp/exact.hpp"

namespace sphtp {

/// An SO(3) irrep degree. Components are indexed m = -j..j.
struct IrrepLabel {
  int j = 0;
  int dim() const { return 2 * j + 1; }
  bool contains(int m) const { return -j <= m && m <= j; }
};

/// Labels of C^{j3,m3}_{j1,m1,j2,m2} = <j1 m1 j2 m2 | j3 m3>.
struct CgKey {
  int j1 = 0, m1 = 0, j2 = 0, m2 = 0, j3 = 0, m3 = 0;
  bool valid() const;
  auto operator<=>(const CgKey&) const = default;
};

/// Rows (j1 l1 s1 / j2 l2 s2 / j3 l3 s3), stored row-major.
struct NineJKey {
  std::array<int, 9> v{};
  int operator()(int row, int col) const { return v[static_cast<std::size_t>(3 * row + col)]; }
  auto operator<=>(const NineJKey&) const = default;
};

/// zyz Euler angles of an active rotation R = Rz(alpha) Ry(beta) Rz(gamma).
struct EulerAngles {
  double alpha = 0.0, beta = 0.0, gamma = 0.0;
};

/// 1 iff a, b, c satisfy the triangle inequalities. Throws std::invalid_argument
/// on negative input.
int triangle_delta(int a, int b, int c);

/// Non-throwing form; false for negative input.
bool triangle(int a, int b, int c) noexcept;

/// Condon-Shortley Clebsch-Gordan coefficient via the Racah sum, memoized.
ExactRational cg(const CgKey& key);
inline double cg_value(const CgKey& key) { return cg(key).to_double(); }

/// C^{l3,0}_{l1,0,l2,0}; nonzero iff triangle(l1,l2,l3) and l1+l2+l3 even.
ExactRational cg_zero(int l1, int l2, int l3);

/// Wigner 9j symbol by contracting the six CG coefficients of the two
/// coupling orders over all magnetic quantum numbers, exactly.
ExactRational wigner_9j(const NineJKey& key);

/// {a+lam a 1; b+mu b 1; c+nu c 1} from the spin-1 closed-form table.
/// Throws std::invalid_argument when lam, mu, nu are outside {-1,0,1} or a
/// shifted entry is negative.
double wigner_9j_spin1(int a, int lam, int b, int mu, int c, int nu);

/// d^j_{m,n}(beta), rows/cols ordered m, n = -j..j.
Eigen::MatrixXd wigner_small_d(int j, double beta);

/// D^j_{m,n}(alpha,beta,gamma) = e^{-i m alpha} d^j_{m,n}(beta) e^{-i n gamma}.
Eigen::MatrixXcd wigner_d_matrix(int j, double alpha, double beta, double gamma);
inline Eigen::MatrixXcd wigner_d_matrix(int j, const EulerAngles& g) {
  return wigner_d_matrix(j, g.alpha, g.beta, g.gamma);
}

/// Cartesian 3x3 matrix of the same active rotation.
Eigen::Matrix3d rotation_matrix(const EulerAngles& g);

/// Haar-uniform random rotation.
EulerAngles random_rotation(std::mt19937_64& rng);

/// Dense double-precision CG values for one coupling (j1, j2) -> j3, indexed
/// by (m1, m2) with m3 = m1 + m2 implied. Entries with |m1+m2| > j3 are zero.
struct CgTable {
  int j1 = 0, j2 = 0, j3 = 0;
  std::vector<double> values;

  double operator()(int m1, int m2) const {
    return values[static_cast<std::size_t>((m1 + j1) * (2 * j2 + 1) + (m2 + j2))];
  }
};

/// Built from the highest-weight closed form and the lowering recursion.
/// Small tables are cached; the returned pointer stays valid regardless.
std::shared_ptr<const CgTable> cg_table(int j1, int j2, int j3);

namespace testing {
/// Flips the sign of one CG coefficient returned by cg(). Used to check that
/// the verification suite catches a broken symmetry. Pass nullopt to clear.
void set_cg_sign_fault(std::optional<CgKey> key);
}  // namespace testing

}  // namespace sphtp
