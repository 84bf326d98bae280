#include "sphtp/tsh.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "sphtp/errors.hpp"

namespace sphtp {

namespace {

std::string key_str(int j, int l, int s) {
  return "(j=" + std::to_string(j) + ", l=" + std::to_string(l) + ", s=" + std::to_string(s) + ")";
}

double y_sign(int m) { return (m < 0 && (-m) % 2 == 1) ? -1.0 : 1.0; }

}  // namespace

SpinSignal zero_spin_signal(int s, std::shared_ptr<const SphereGrid> grid) {
  SpinSignal f;
  f.s = s;
  f.values.assign(grid->size() * static_cast<std::size_t>(2 * s + 1), cplx{});
  f.grid = std::move(grid);
  return f;
}

TshCoeffs::TshCoeffs(int s, int L) : s_(s), L_(L) {
  if (s < 0 || L < 0) throw std::invalid_argument("TshCoeffs: negative spin or band limit");
}

Eigen::VectorXcd& TshCoeffs::block(int j, int l) {
  if (!triangle(j, l, s_)) throw TriangleViolation("TshCoeffs: inadmissible key " + key_str(j, l, s_));
  if (l > L_) throw PreconditionError("TshCoeffs: l above band limit in " + key_str(j, l, s_));
  auto [it, inserted] = blocks_.try_emplace(Key{j, l});
  if (inserted) it->second = Eigen::VectorXcd::Zero(2 * j + 1);
  return it->second;
}

const Eigen::VectorXcd* TshCoeffs::find(int j, int l) const {
  auto it = blocks_.find(Key{j, l});
  return it == blocks_.end() ? nullptr : &it->second;
}

void TshCoeffs::set(int j, int l, const Eigen::VectorXcd& v) {
  if (v.size() != 2 * j + 1) throw std::invalid_argument("TshCoeffs: wrong block length for " + key_str(j, l, s_));
  block(j, l) = v;
}

std::vector<TshCoeffs::Key> tsh_keys(int s, int L) {
  std::vector<TshCoeffs::Key> keys;
  for (int j = 0; j <= L + s; ++j) {
    for (int l = std::abs(j - s); l <= std::min(j + s, L); ++l) keys.emplace_back(j, l);
  }
  return keys;
}

TshCoeffs random_tsh_coeffs(int s, int L, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  TshCoeffs x(s, L);
  for (auto [j, l] : tsh_keys(s, L)) {
    auto& b = x.block(j, l);
    for (auto& c : b) c = cplx(n(rng), n(rng));
  }
  return x;
}

TshCoeffs rotate(const TshCoeffs& x, const EulerAngles& g) {
  TshCoeffs out(x.s(), x.L());
  for (const auto& [key, v] : x.blocks()) out.set(key.first, key.second, wigner_d_matrix(key.first, g) * v);
  return out;
}

Eigen::VectorXcd tsh_eval(int j, int mj, int l, int s, double theta, double phi) {
  if (!triangle(j, l, s)) throw TriangleViolation("tsh_eval: inadmissible " + key_str(j, l, s));
  if (std::abs(mj) > j) throw std::invalid_argument("tsh_eval: |mj| > j");
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(2 * s + 1);
  for (int ms = -s; ms <= s; ++ms) {
    const int ml = mj - ms;
    if (std::abs(ml) > l) continue;
    out(ms + s) = cg_value({l, ml, s, ms, j, mj}) * sh_eval(l, ml, theta, phi);
  }
  return out;
}

SpinSignal tsh_encode(const TshCoeffs& x, std::shared_ptr<const SphereGrid> grid, std::uint64_t* flops) {
  if (!grid) throw std::invalid_argument("tsh_encode: null grid");
  if (grid->Lg < x.L()) {
    throw PreconditionError("tsh_encode: grid Lg=" + std::to_string(grid->Lg) + " below band limit L=" +
                            std::to_string(x.L()));
  }
  const int s = x.s();
  // B[ms] holds scalar coefficients sum_j A^{(j,l)}_{ms, ml} per degree l.
  std::vector<IrrepCoeffs> b(static_cast<std::size_t>(2 * s + 1));
  for (auto& bm : b) {
    bm.L = x.L();
    for (int l = 0; l <= x.L(); ++l) bm.block(l);
  }
  std::uint64_t macs = 0;
  for (const auto& [key, v] : x.blocks()) {
    const auto [j, l] = key;
    const auto table = cg_table(l, s, j);
    for (int ms = -s; ms <= s; ++ms) {
      auto& dst = b[static_cast<std::size_t>(ms + s)].block(l);
      for (int ml = -l; ml <= l; ++ml) {
        const int mj = ml + ms;
        if (std::abs(mj) > j) continue;
        dst(ml + l) += (*table)(ml, ms) * v(mj + j);
        ++macs;
      }
    }
  }

  SpinSignal f = zero_spin_signal(s, grid);
  const int nt = grid->n_theta(), np = grid->n_phi;
  for (int ms = -s; ms <= s; ++ms) {
    const ScalarSignal comp = to_sphere(b[static_cast<std::size_t>(ms + s)], grid, &macs);
    for (int i = 0; i < nt; ++i) {
      for (int k = 0; k < np; ++k) f(i, k, ms) = comp(i, k);
    }
  }
  if (flops) *flops += macs;
  return f;
}

TshCoeffs tsh_decode(const SpinSignal& f, int L, std::uint64_t* flops) {
  if (!f.grid) throw std::invalid_argument("tsh_decode: null grid");
  if (L < 0 || L > f.grid->Lg) {
    throw PreconditionError("tsh_decode: L=" + std::to_string(L) + " exceeds grid Lg=" + std::to_string(f.grid->Lg));
  }
  const int s = f.s;
  const int nt = f.grid->n_theta(), np = f.grid->n_phi;
  std::uint64_t macs = 0;
  std::vector<IrrepCoeffs> b;
  b.reserve(static_cast<std::size_t>(2 * s + 1));
  for (int ms = -s; ms <= s; ++ms) {
    ScalarSignal comp{f.grid, std::vector<cplx>(f.grid->size())};
    for (int i = 0; i < nt; ++i) {
      for (int k = 0; k < np; ++k) comp(i, k) = f(i, k, ms);
    }
    b.push_back(from_sphere(comp, L, &macs));
  }

  TshCoeffs z(s, L);
  for (auto [j, l] : tsh_keys(s, L)) {
    const auto table = cg_table(l, s, j);
    auto& out = z.block(j, l);
    for (int ms = -s; ms <= s; ++ms) {
      const auto& src = b[static_cast<std::size_t>(ms + s)].block(l);
      for (int ml = -l; ml <= l; ++ml) {
        const int mj = ml + ms;
        if (std::abs(mj) > j) continue;
        out(mj + j) += (*table)(ml, ms) * src(ml + l);
        ++macs;
      }
    }
  }
  if (flops) *flops += macs;
  return z;
}

double tsh_orthonormality_check(int s, int L) {
  if (s < 0 || L < 0) throw std::invalid_argument("tsh_orthonormality_check: negative argument");
  const auto grid = make_grid(L);
  const int nt = grid->n_theta(), np = grid->n_phi, nc = 2 * s + 1;
  const double dphi = 2.0 * std::numbers::pi / np;
  const auto keys = tsh_keys(s, L);
  int rows = 0;
  for (auto [j, l] : keys) rows += 2 * j + 1;
  Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(rows, nt * np * nc);
  int row = 0;
  for (auto [j, l] : keys) {
    const auto table = cg_table(l, s, j);
    for (int mj = -j; mj <= j; ++mj, ++row) {
      for (int ms = -s; ms <= s; ++ms) {
        const int ml = mj - ms;
        if (std::abs(ml) > l) continue;
        const double c = (*table)(ml, ms) * y_sign(ml);
        for (int i = 0; i < nt; ++i) {
          const double w = std::sqrt(grid->weights[static_cast<std::size_t>(i)] * dphi);
          const double p = grid->legendre(i, l, std::abs(ml));
          for (int k = 0; k < np; ++k) {
            int r = (ml * k) % np;
            if (r < 0) r += np;
            y(row, (i * np + k) * nc + ms + s) = c * w * p * grid->twiddle[static_cast<std::size_t>(r)];
          }
        }
      }
    }
  }
  const Eigen::MatrixXcd gram = y.conjugate() * y.transpose();
  return (gram - Eigen::MatrixXcd::Identity(rows, rows)).cwiseAbs().maxCoeff();
}

}  // namespace sphtp
