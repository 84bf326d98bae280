#include "sphtp/sht.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "sphtp/errors.hpp"

namespace sphtp {

namespace {

constexpr double kPi = std::numbers::pi;

// Newton iteration on P_n for the n-point Gauss-Legendre rule. Nodes are
// returned in ascending theta (descending cos theta).
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(static_cast<std::size_t>(n), 0.0);
  w.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      // p1 = P_n(z), p0 = P_{n-1}(z)
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
    }
    const double wi = 2.0 / ((1.0 - z * z) * dp * dp);
    x[static_cast<std::size_t>(i)] = z;
    x[static_cast<std::size_t>(n - 1 - i)] = -z;
    w[static_cast<std::size_t>(i)] = wi;
    w[static_cast<std::size_t>(n - 1 - i)] = wi;
  }
  if (n % 2 == 1) x[static_cast<std::size_t>(n / 2)] = 0.0;
}

std::shared_ptr<const SphereGrid> build_grid(int Lg) {
  auto g = std::make_shared<SphereGrid>();
  g->Lg = Lg;
  g->n_phi = 2 * Lg + 1;
  const int nt = Lg + 1;
  if (nt == 1) {
    g->cos_theta = {0.0};
    g->weights = {2.0};
  } else {
    gauss_legendre(nt, g->cos_theta, g->weights);
  }
  g->theta.resize(static_cast<std::size_t>(nt));
  for (int i = 0; i < nt; ++i) g->theta[static_cast<std::size_t>(i)] = std::acos(g->cos_theta[static_cast<std::size_t>(i)]);

  g->phi.resize(static_cast<std::size_t>(g->n_phi));
  g->twiddle.resize(static_cast<std::size_t>(g->n_phi));
  for (int r = 0; r < g->n_phi; ++r) {
    const double a = 2.0 * kPi * r / g->n_phi;
    g->phi[static_cast<std::size_t>(r)] = a;
    g->twiddle[static_cast<std::size_t>(r)] = std::polar(1.0, a);
  }

  g->plm.resize(static_cast<std::size_t>(nt) * g->tri_size());
  for (int i = 0; i < nt; ++i) {
    const double ct = g->cos_theta[static_cast<std::size_t>(i)];
    const double st = std::sin(g->theta[static_cast<std::size_t>(i)]);
    const auto row = normalized_legendre(Lg, ct, st);
    std::copy(row.begin(), row.end(), g->plm.begin() + static_cast<std::ptrdiff_t>(i * g->tri_size()));
  }
  return g;
}

}  // namespace

std::shared_ptr<const SphereGrid> make_grid(int Lg) {
  if (Lg < 0) throw PreconditionError("make_grid: Lg must be non-negative");
  static std::mutex mutex;
  static std::unordered_map<int, std::shared_ptr<const SphereGrid>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[Lg];
  if (!slot) slot = build_grid(Lg);
  return slot;
}

std::vector<double> normalized_legendre(int lmax, double ct, double st) {
  std::vector<double> p(static_cast<std::size_t>(lmax + 1) * (lmax + 2) / 2, 0.0);
  auto at = [&](int l, int m) -> double& { return p[SphereGrid::tri_index(l, m)]; };
  at(0, 0) = 1.0 / std::sqrt(4.0 * kPi);
  for (int m = 1; m <= lmax; ++m) {
    at(m, m) = -std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * st * at(m - 1, m - 1);
  }
  for (int m = 0; m < lmax; ++m) {
    at(m + 1, m) = std::sqrt(2.0 * m + 3.0) * ct * at(m, m);
    for (int l = m + 2; l <= lmax; ++l) {
      const double ll = static_cast<double>(l) * l, mm = static_cast<double>(m) * m;
      const double a = std::sqrt((4.0 * ll - 1.0) / (ll - mm));
      const double lm1 = static_cast<double>(l - 1) * (l - 1);
      const double b = std::sqrt((lm1 - mm) / (4.0 * lm1 - 1.0));
      at(l, m) = a * (ct * at(l - 1, m) - b * at(l - 2, m));
    }
  }
  return p;
}

cplx sh_eval(int l, int m, double theta, double phi) {
  if (l < 0 || std::abs(m) > l) {
    throw std::invalid_argument("sh_eval: need |m| <= l, got l=" + std::to_string(l) +
                                " m=" + std::to_string(m));
  }
  const auto p = normalized_legendre(l, std::cos(theta), std::sin(theta));
  const int am = std::abs(m);
  const double v = p[SphereGrid::tri_index(l, am)];
  const cplx y = v * std::polar(1.0, am * phi);
  if (m >= 0) return y;
  return (am % 2 == 0 ? 1.0 : -1.0) * std::conj(y);
}

Eigen::VectorXcd& IrrepCoeffs::block(int j) {
  auto [it, inserted] = blocks.try_emplace(BlockKey{j, std::nullopt, std::nullopt});
  if (inserted) it->second = Eigen::VectorXcd::Zero(2 * j + 1);
  return it->second;
}

const Eigen::VectorXcd* IrrepCoeffs::find(const BlockKey& key) const {
  auto it = blocks.find(key);
  return it == blocks.end() ? nullptr : &it->second;
}

void IrrepCoeffs::validate() const {
  for (const auto& [key, v] : blocks) {
    if (key.j < 0 || key.j > L) {
      throw std::invalid_argument("IrrepCoeffs: block j=" + std::to_string(key.j) +
                                  " outside 0.." + std::to_string(L));
    }
    if (v.size() != 2 * key.j + 1) {
      throw std::invalid_argument("IrrepCoeffs: block j=" + std::to_string(key.j) +
                                  " has length " + std::to_string(v.size()));
    }
  }
}

IrrepCoeffs random_irrep_coeffs(int L, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  IrrepCoeffs x;
  x.L = L;
  for (int j = 0; j <= L; ++j) {
    auto& b = x.block(j);
    for (auto& c : b) c = cplx(n(rng), n(rng));
  }
  return x;
}

IrrepCoeffs rotate(const IrrepCoeffs& x, const EulerAngles& g) {
  IrrepCoeffs out;
  out.L = x.L;
  std::map<int, Eigen::MatrixXcd> d;
  for (const auto& [key, v] : x.blocks) {
    auto it = d.find(key.j);
    if (it == d.end()) it = d.emplace(key.j, wigner_d_matrix(key.j, g)).first;
    out.blocks[key] = it->second * v;
  }
  return out;
}

std::uint64_t sht_flops(int L, int Lg) {
  const auto nt = static_cast<std::uint64_t>(Lg + 1);
  const auto np = static_cast<std::uint64_t>(2 * Lg + 1);
  const auto l1 = static_cast<std::uint64_t>(L + 1);
  return nt * l1 * l1 + nt * np * static_cast<std::uint64_t>(2 * L + 1);
}

ScalarSignal to_sphere(const IrrepCoeffs& x, std::shared_ptr<const SphereGrid> grid,
                       std::uint64_t* flops) {
  if (!grid) throw std::invalid_argument("to_sphere: null grid");
  int L = 0;
  for (const auto& [key, v] : x.blocks) L = std::max(L, key.j);
  L = std::max(L, x.L);
  if (grid->Lg < L) {
    throw PreconditionError("to_sphere: grid Lg=" + std::to_string(grid->Lg) +
                            " below band limit L=" + std::to_string(L));
  }
  // Dense (l, m) table, m offset by L.
  const int nm = 2 * L + 1;
  std::vector<cplx> dense(static_cast<std::size_t>((L + 1) * nm), cplx{});
  for (const auto& [key, v] : x.blocks) {
    for (int m = -key.j; m <= key.j; ++m) {
      dense[static_cast<std::size_t>(key.j * nm + m + L)] += v(m + key.j);
    }
  }

  ScalarSignal f{grid, std::vector<cplx>(grid->size(), cplx{})};
  const int nt = grid->n_theta(), np = grid->n_phi;
  std::vector<cplx> fm(static_cast<std::size_t>(nm));
  for (int i = 0; i < nt; ++i) {
    for (int m = -L; m <= L; ++m) {
      const int am = std::abs(m);
      const double sgn = (m < 0 && am % 2 == 1) ? -1.0 : 1.0;
      cplx acc{};
      for (int l = am; l <= L; ++l) {
        acc += dense[static_cast<std::size_t>(l * nm + m + L)] * grid->legendre(i, l, am);
      }
      fm[static_cast<std::size_t>(m + L)] = sgn * acc;
    }
    for (int k = 0; k < np; ++k) {
      cplx acc{};
      for (int m = -L; m <= L; ++m) {
        int r = (m * k) % np;
        if (r < 0) r += np;
        acc += fm[static_cast<std::size_t>(m + L)] * grid->twiddle[static_cast<std::size_t>(r)];
      }
      f(i, k) = acc;
    }
  }
  if (flops) *flops += sht_flops(L, grid->Lg);
  return f;
}

IrrepCoeffs from_sphere(const ScalarSignal& f, int L, std::uint64_t* flops) {
  if (!f.grid) throw std::invalid_argument("from_sphere: null grid");
  const auto& grid = *f.grid;
  if (L < 0 || L > grid.Lg) {
    throw PreconditionError("from_sphere: L=" + std::to_string(L) + " exceeds grid Lg=" +
                            std::to_string(grid.Lg));
  }
  if (f.values.size() != grid.size()) throw std::invalid_argument("from_sphere: size mismatch");
  const int nt = grid.n_theta(), np = grid.n_phi, nm = 2 * L + 1;
  const double dphi = 2.0 * kPi / np;

  // gm[i][m]: phi quadrature of row i against exp(-i m phi).
  std::vector<cplx> gm(static_cast<std::size_t>(nt * nm));
  for (int i = 0; i < nt; ++i) {
    for (int m = -L; m <= L; ++m) {
      cplx acc{};
      for (int k = 0; k < np; ++k) {
        int r = (-m * k) % np;
        if (r < 0) r += np;
        acc += f(i, k) * grid.twiddle[static_cast<std::size_t>(r)];
      }
      gm[static_cast<std::size_t>(i * nm + m + L)] = acc * dphi;
    }
  }

  IrrepCoeffs x;
  x.L = L;
  for (int l = 0; l <= L; ++l) {
    auto& b = x.block(l);
    for (int m = -l; m <= l; ++m) {
      const int am = std::abs(m);
      const double sgn = (m < 0 && am % 2 == 1) ? -1.0 : 1.0;
      cplx acc{};
      for (int i = 0; i < nt; ++i) {
        acc += gm[static_cast<std::size_t>(i * nm + m + L)] *
               (grid.weights[static_cast<std::size_t>(i)] * grid.legendre(i, l, am));
      }
      b(m + l) = sgn * acc;
    }
  }
  if (flops) *flops += sht_flops(L, grid.Lg);
  return x;
}

double gaunt_coefficient(int l1, int m1, int l2, int m2, int l3, int m3) {
  if (l1 < 0 || l2 < 0 || l3 < 0) return 0.0;
  if (std::abs(m1) > l1 || std::abs(m2) > l2 || std::abs(m3) > l3) return 0.0;
  const ExactRational a = cg({l1, m1, l2, m2, l3, m3});
  if (a.is_zero()) return 0.0;
  const ExactRational b = cg_zero(l1, l2, l3);
  if (b.is_zero()) return 0.0;
  const double pref = std::sqrt((2.0 * l1 + 1.0) * (2.0 * l2 + 1.0) / (4.0 * kPi * (2.0 * l3 + 1.0)));
  return pref * (a * b).to_double();
}

double sh_orthonormality_deviation(int Lg) {
  const auto grid = make_grid(Lg);
  const int nt = grid->n_theta(), np = grid->n_phi;
  const double dphi = 2.0 * kPi / np;
  // Rows indexed by (l, m); columns by grid point, weighted once.
  const int nlm = (Lg + 1) * (Lg + 1);
  Eigen::MatrixXcd y(nlm, nt * np);
  for (int l = 0; l <= Lg; ++l) {
    for (int m = -l; m <= l; ++m) {
      const int row = l * l + l + m;
      const int am = std::abs(m);
      const double sgn = (m < 0 && am % 2 == 1) ? -1.0 : 1.0;
      for (int i = 0; i < nt; ++i) {
        const double w = std::sqrt(grid->weights[static_cast<std::size_t>(i)] * dphi);
        for (int k = 0; k < np; ++k) {
          int r = (m * k) % np;
          if (r < 0) r += np;
          y(row, i * np + k) = sgn * w * grid->legendre(i, l, am) * grid->twiddle[static_cast<std::size_t>(r)];
        }
      }
    }
  }
  const Eigen::MatrixXcd gram = y.conjugate() * y.transpose();
  return (gram - Eigen::MatrixXcd::Identity(nlm, nlm)).cwiseAbs().maxCoeff();
}

}  // namespace sphtp
