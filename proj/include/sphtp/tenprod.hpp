#pragma once

#include <compare>
#include <cstdint>
#include <string>

#include "sphtp/sht.hpp"
#include "sphtp/tsh.hpp"

namespace sphtp {

/// Full coupling label (j1 l1 s1; j2 l2 s2; j3 l3 s3). Pure CGTP paths leave
/// l and s at zero.
struct PathKey {
  int j1 = 0, l1 = 0, s1 = 0;
  int j2 = 0, l2 = 0, s2 = 0;
  int j3 = 0, l3 = 0, s3 = 0;

  static PathKey vector(int j1, int l1, int j2, int l2, int j3, int l3) {
    return {j1, l1, 1, j2, l2, 1, j3, l3, 1};
  }
  NineJKey ninej() const { return NineJKey{{j1, l1, s1, j2, l2, s2, j3, l3, s3}}; }
  std::string str() const;
  auto operator<=>(const PathKey&) const = default;
};

template <class Out>
struct TpoResult {
  Out output;
  std::uint64_t flops = 0;
};

enum class CgtpMode { naive, sparse };

/// z_{m3} = sum C^{j3,m3}_{j1,m1,j2,m2} x_{m1} y_{m2}. `naive` walks every
/// (m3, m1, m2) triple; `sparse` only those with m3 = m1 + m2.
Eigen::VectorXcd cgtp_path(const Eigen::VectorXcd& x, const Eigen::VectorXcd& y, int j3,
                           CgtpMode mode = CgtpMode::sparse, std::uint64_t* flops = nullptr);

/// Every admissible (j1, j2, j3 <= L3) path; output blocks are tagged with
/// their source path (j1, j2).
TpoResult<IrrepCoeffs> cgtp_full(const IrrepCoeffs& x, const IrrepCoeffs& y, int L3, CgtpMode mode);

/// Per-point CG coupling of a spin-s1 and a spin-s2 signal into spin s3.
SpinSignal pointwise_spin_tp(const SpinSignal& f, const SpinSignal& g, int s3,
                             std::uint64_t* flops = nullptr);

/// Encode both inputs as spin signals, couple pointwise into spin s3, decode
/// at band limit L3. A null grid selects make_grid(x.L + y.L).
TpoResult<TshCoeffs> istp(const TshCoeffs& x, const TshCoeffs& y, int s3, int L3,
                          std::shared_ptr<const SphereGrid> grid = nullptr);

/// Gaunt tensor product: istp with spins (0, 0, 0) on untagged scalar blocks.
TpoResult<IrrepCoeffs> gtp(const IrrepCoeffs& x, const IrrepCoeffs& y, int L3,
                           std::shared_ptr<const SphereGrid> grid = nullptr);

/// Vector signal tensor product: istp with spins (1, 1, 1).
TpoResult<TshCoeffs> vstp(const TshCoeffs& x, const TshCoeffs& y, int L3,
                          std::shared_ptr<const SphereGrid> grid = nullptr);

/// One CGTP path recovered from a single VSTP: the l labels come from
/// find_valid_ells and the output block is divided by the generalized Gaunt
/// coefficient. (0, 0, 0) is a plain product. Throws NumericalDegeneracy if
/// the coefficient is unexpectedly tiny.
Eigen::VectorXcd simulate_cgtp_path(const Eigen::VectorXcd& x, const Eigen::VectorXcd& y, int j3,
                                    std::shared_ptr<const SphereGrid> grid = nullptr,
                                    std::uint64_t* flops = nullptr);

/// Scalar blocks j as TSH blocks (j, j) of spin 0, and back.
TshCoeffs as_scalar_tsh(const IrrepCoeffs& x);
IrrepCoeffs from_scalar_tsh(const TshCoeffs& x);

/// Loop counts of cgtp_path.
std::uint64_t cgtp_naive_flops(int j1, int j2, int j3);
std::uint64_t cgtp_sparse_flops(int j1, int j2, int j3);

}  // namespace sphtp
