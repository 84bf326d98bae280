#include "sphtp/angular.hpp"

#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "racah.hpp"

namespace sphtp {

namespace {

std::uint64_t pack6(int a, int b, int c, int d, int e, int f) {
  auto u = [](int x) { return static_cast<std::uint64_t>(x + 512) & 0x3ffu; };
  return u(a) | u(b) << 10 | u(c) << 20 | u(d) << 30 | u(e) << 40 | u(f) << 50;
}

template <class V>
class Memo {
 public:
  template <class Make>
  const V& get(std::uint64_t key, Make&& make) {
    {
      std::shared_lock lock(mutex_);
      if (auto it = map_.find(key); it != map_.end()) return it->second;
    }
    V value = make();
    std::unique_lock lock(mutex_);
    return map_.try_emplace(key, std::move(value)).first->second;
  }

 private:
  std::shared_mutex mutex_;
  std::unordered_map<std::uint64_t, V> map_;
};

Memo<ExactRational>& cg_memo() {
  static Memo<ExactRational> memo;
  return memo;
}

Memo<mpq_class>& racah_memo() {
  static Memo<mpq_class> memo;
  return memo;
}

std::mutex fault_mutex;
std::optional<CgKey> fault_key;

}  // namespace

bool CgKey::valid() const {
  return j1 >= 0 && j2 >= 0 && j3 >= 0 && std::abs(m1) <= j1 && std::abs(m2) <= j2 &&
         std::abs(m3) <= j3;
}

int triangle_delta(int a, int b, int c) {
  if (a < 0 || b < 0 || c < 0) {
    throw std::invalid_argument("triangle_delta: negative argument");
  }
  return triangle(a, b, c) ? 1 : 0;
}

bool triangle(int a, int b, int c) noexcept {
  return a >= 0 && b >= 0 && c >= 0 && a <= b + c && b <= a + c && c <= a + b;
}

namespace detail {

mpq_class triangle_factor(int j1, int j2, int j3) {
  mpq_class t(factorial(j1 + j2 - j3) * factorial(j1 - j2 + j3) * factorial(-j1 + j2 + j3) *
                   (2 * j3 + 1),
               factorial(j1 + j2 + j3 + 1));
  t.canonicalize();
  return t;
}

mpq_class racah_sum(int j1, int m1, int j2, int m2, int j3, int m3) {
  const CgKey key{j1, m1, j2, m2, j3, m3};
  if (!key.valid() || m1 + m2 != m3 || !triangle(j1, j2, j3)) return 0;
  const int kmin = std::max({0, j2 - j3 - m1, j1 - j3 + m2});
  const int kmax = std::min({j1 + j2 - j3, j1 - m1, j2 + m2});
  mpq_class sum = 0;
  for (int k = kmin; k <= kmax; ++k) {
    mpz_class den = factorial(k) * factorial(j1 + j2 - j3 - k) * factorial(j1 - m1 - k) *
                    factorial(j2 + m2 - k) * factorial(j3 - j2 + m1 + k) *
                    factorial(j3 - j1 - m2 + k);
    mpq_class term(k % 2 == 0 ? 1 : -1, den);
    term.canonicalize();
    sum += term;
  }
  return sum;
}

const mpq_class& racah_weighted(int j1, int m1, int j2, int m2, int j3, int m3) {
  return racah_memo().get(pack6(j1, m1, j2, m2, j3, m3), [&] {
    mpq_class s = racah_sum(j1, m1, j2, m2, j3, m3);
    if (sgn(s) != 0) {
      s *= magnetic_factor(j1, m1) * magnetic_factor(j2, m2) * magnetic_factor(j3, m3);
    }
    return s;
  });
}

}  // namespace detail

ExactRational cg(const CgKey& k) {
  if (!k.valid()) return {};
  ExactRational value = cg_memo().get(pack6(k.j1, k.m1, k.j2, k.m2, k.j3, k.m3), [&] {
    const mpq_class s = detail::racah_sum(k.j1, k.m1, k.j2, k.m2, k.j3, k.m3);
    if (sgn(s) == 0) return ExactRational{};
    const mpq_class radicand = detail::triangle_factor(k.j1, k.j2, k.j3) *
                               mpq_class(detail::magnetic_factor(k.j1, k.m1) *
                                         detail::magnetic_factor(k.j2, k.m2) *
                                         detail::magnetic_factor(k.j3, k.m3));
    return ExactRational::from_root(s, radicand);
  });
  {
    std::lock_guard lock(fault_mutex);
    if (fault_key && *fault_key == k) value = -value;
  }
  return value;
}

ExactRational cg_zero(int l1, int l2, int l3) {
  if (l1 < 0 || l2 < 0 || l3 < 0) return {};
  return cg({l1, 0, l2, 0, l3, 0});
}

Eigen::MatrixXd wigner_small_d(int j, double beta) {
  const int n = 2 * j + 1;
  if (j == 0) return Eigen::MatrixXd::Ones(1, 1);
  // J_y in the |j m> basis, m = -j..j; d(beta) = exp(-i beta J_y).
  Eigen::MatrixXcd jy = Eigen::MatrixXcd::Zero(n, n);
  for (int m = -j; m < j; ++m) {
    const double up = std::sqrt(static_cast<double>(j * (j + 1) - m * (m + 1)));
    // <m+1|J+|m> = up; J_y = (J+ - J-) / (2i)
    jy(m + 1 + j, m + j) = std::complex<double>(0.0, -0.5 * up);
    jy(m + j, m + 1 + j) = std::complex<double>(0.0, 0.5 * up);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(jy);
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  Eigen::VectorXcd phase(n);
  for (int i = 0; i < n; ++i) phase(i) = std::polar(1.0, -beta * lambda(i));
  const Eigen::MatrixXcd& v = eig.eigenvectors();
  const Eigen::MatrixXcd d = v * phase.asDiagonal() * v.adjoint();
  return d.real();
}

Eigen::MatrixXcd wigner_d_matrix(int j, double alpha, double beta, double gamma) {
  if (j < 0) throw std::invalid_argument("wigner_d_matrix: negative degree");
  const Eigen::MatrixXd d = wigner_small_d(j, beta);
  const int n = 2 * j + 1;
  Eigen::MatrixXcd out(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const int m = r - j, mp = c - j;
      out(r, c) = std::polar(1.0, -m * alpha - mp * gamma) * d(r, c);
    }
  }
  return out;
}

Eigen::Matrix3d rotation_matrix(const EulerAngles& g) {
  using Eigen::AngleAxisd;
  using Eigen::Vector3d;
  return (AngleAxisd(g.alpha, Vector3d::UnitZ()) * AngleAxisd(g.beta, Vector3d::UnitY()) *
          AngleAxisd(g.gamma, Vector3d::UnitZ()))
      .toRotationMatrix();
}

EulerAngles random_rotation(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  constexpr double two_pi = 2.0 * std::numbers::pi;
  EulerAngles g;
  g.alpha = two_pi * u(rng);
  g.beta = std::acos(std::clamp(1.0 - 2.0 * u(rng), -1.0, 1.0));
  g.gamma = two_pi * u(rng);
  return g;
}

namespace testing {
void set_cg_sign_fault(std::optional<CgKey> key) {
  std::lock_guard lock(fault_mutex);
  fault_key = key;
}
}  // namespace testing

}  // namespace sphtp
