#pragma once

#include <map>
#include <utility>

#include "sphtp/sht.hpp"

namespace sphtp {

/// Spin-s samples on a grid: 2s+1 components per point, m_s = -s..s,
/// component index fastest.
struct SpinSignal {
  int s = 0;
  std::shared_ptr<const SphereGrid> grid;
  std::vector<cplx> values;

  int ncomp() const { return 2 * s + 1; }
  cplx& operator()(int i, int k, int ms) { return values[index(i, k, ms)]; }
  const cplx& operator()(int i, int k, int ms) const { return values[index(i, k, ms)]; }

 private:
  std::size_t index(int i, int k, int ms) const {
    return (static_cast<std::size_t>(i) * grid->n_phi + k) * ncomp() + (ms + s);
  }
};

SpinSignal zero_spin_signal(int s, std::shared_ptr<const SphereGrid> grid);

/// TSH expansion coefficients keyed by (j, l), canonical order ascending j
/// then l. Keys always satisfy triangle(j, l, s) and l <= L.
class TshCoeffs {
 public:
  using Key = std::pair<int, int>;

  TshCoeffs() = default;
  TshCoeffs(int s, int L);

  int s() const { return s_; }
  int L() const { return L_; }
  const std::map<Key, Eigen::VectorXcd>& blocks() const { return blocks_; }

  /// Block (j, l), created as zeros. Throws TriangleViolation or
  /// PreconditionError for inadmissible keys.
  Eigen::VectorXcd& block(int j, int l);
  const Eigen::VectorXcd* find(int j, int l) const;
  void set(int j, int l, const Eigen::VectorXcd& v);

 private:
  int s_ = 0;
  int L_ = 0;
  std::map<Key, Eigen::VectorXcd> blocks_;
};

/// Every admissible (j, l) for spin s and l <= L, canonical order.
std::vector<TshCoeffs::Key> tsh_keys(int s, int L);

TshCoeffs random_tsh_coeffs(int s, int L, std::mt19937_64& rng);
TshCoeffs rotate(const TshCoeffs& x, const EulerAngles& g);

/// (Y^{l,s}_{j,mj})_{ms} = sum_{ml} C^{j,mj}_{l,ml,s,ms} Y_l^{ml}, ms = -s..s.
Eigen::VectorXcd tsh_eval(int j, int mj, int l, int s, double theta, double phi);

/// Synthesis through the per-(ms, l) scalar coefficients and 2s+1 scalar
/// transforms.
SpinSignal tsh_encode(const TshCoeffs& x, std::shared_ptr<const SphereGrid> grid,
                      std::uint64_t* flops = nullptr);

/// Analysis: component-wise scalar transforms, then CG extraction of every
/// admissible (j, l) with l <= L.
TshCoeffs tsh_decode(const SpinSignal& f, int L, std::uint64_t* flops = nullptr);

/// max |<Y_a, Y_b> - delta_ab| over all TSH with l <= L, by quadrature.
double tsh_orthonormality_check(int s, int L);

}  // namespace sphtp
