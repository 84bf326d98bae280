#pragma once

#include <Eigen/Dense>

#include <complex>
#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "sphtp/angular.hpp"

namespace sphtp {

using cplx = std::complex<double>;

/// Gauss-Legendre in cos(theta) times a uniform phi ring.
///
/// Integrates exactly any band-limited product of total degree <= 2 Lg.
/// Normalized associated Legendre values for every l, m <= Lg at each theta
/// node and the phi twiddles are precomputed; the grid is immutable after
/// construction.
struct SphereGrid {
  int Lg = 0;
  int n_phi = 1;
  std::vector<double> theta;
  std::vector<double> cos_theta;
  std::vector<double> weights;
  std::vector<double> phi;
  /// exp(2 pi i r / n_phi), r = 0 .. n_phi-1.
  std::vector<cplx> twiddle;
  /// P̄_l^m(cos theta_i) for 0 <= m <= l <= Lg, row i, triangular index.
  std::vector<double> plm;

  int n_theta() const { return Lg + 1; }
  std::size_t size() const { return static_cast<std::size_t>(n_theta()) * n_phi; }
  double legendre(int i, int l, int m) const {
    return plm[static_cast<std::size_t>(i) * tri_size() + tri_index(l, m)];
  }
  std::size_t tri_size() const { return static_cast<std::size_t>(Lg + 1) * (Lg + 2) / 2; }
  static std::size_t tri_index(int l, int m) { return static_cast<std::size_t>(l) * (l + 1) / 2 + m; }
};

/// Grids are cached by Lg; the same pointer is returned for repeated calls.
std::shared_ptr<const SphereGrid> make_grid(int Lg);

/// Complex samples on a grid, theta-major.
struct ScalarSignal {
  std::shared_ptr<const SphereGrid> grid;
  std::vector<cplx> values;

  cplx& operator()(int i, int k) { return values[static_cast<std::size_t>(i) * grid->n_phi + k]; }
  const cplx& operator()(int i, int k) const {
    return values[static_cast<std::size_t>(i) * grid->n_phi + k];
  }
};

/// Block label: degree j, optional orbital tag l, optional source path (j1, j2).
struct BlockKey {
  int j = 0;
  std::optional<int> l;
  std::optional<std::pair<int, int>> path;
  auto operator<=>(const BlockKey&) const = default;
};

/// Irrep coefficient blocks x^{(j)}_m, m = -j..j, in canonical key order.
struct IrrepCoeffs {
  int L = 0;
  std::map<BlockKey, Eigen::VectorXcd> blocks;

  /// Untagged block j; created as zeros if absent.
  Eigen::VectorXcd& block(int j);
  const Eigen::VectorXcd* find(const BlockKey& key) const;
  /// Throws std::invalid_argument if a block has the wrong length or j > L.
  void validate() const;
};

/// Random untagged blocks j = 0..L with standard normal real/imag parts.
IrrepCoeffs random_irrep_coeffs(int L, std::mt19937_64& rng);

/// Applies D^{(j)}(g) to every block.
IrrepCoeffs rotate(const IrrepCoeffs& x, const EulerAngles& g);

/// All P̄_l^m(cos theta) for 0 <= m <= l <= lmax in triangular order, such
/// that Y_l^m = P̄_l^m e^{i m phi} for m >= 0 (Condon-Shortley phase included).
std::vector<double> normalized_legendre(int lmax, double cos_theta, double sin_theta);

/// Complex spherical harmonic Y_l^m(theta, phi). Throws std::invalid_argument
/// when |m| > l.
cplx sh_eval(int l, int m, double theta, double phi);

/// Synthesis f(theta_i, phi_k) = sum x^{(l)}_m Y_l^m. Tags are ignored and
/// blocks of equal j are summed. Adds complex MACs to *flops when given.
ScalarSignal to_sphere(const IrrepCoeffs& x, std::shared_ptr<const SphereGrid> grid,
                       std::uint64_t* flops = nullptr);

/// Analysis x^{(l)}_m = quadrature of f conj(Y_l^m), l = 0..L.
IrrepCoeffs from_sphere(const ScalarSignal& f, int L, std::uint64_t* flops = nullptr);

/// Integral of Y_{l1}^{m1} Y_{l2}^{m2} conj(Y_{l3}^{m3}) over the sphere.
double gaunt_coefficient(int l1, int m1, int l2, int m2, int l3, int m3);

/// MACs of one synthesis or analysis at band limit L on grid Lg.
std::uint64_t sht_flops(int L, int Lg);

/// max |<Y_a, Y_b> - delta_ab| over l <= Lg by grid quadrature.
double sh_orthonormality_deviation(int Lg);

}  // namespace sphtp
