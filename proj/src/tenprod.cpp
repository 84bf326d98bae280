#include "sphtp/tenprod.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "sphtp/errors.hpp"
#include "sphtp/rules.hpp"

namespace sphtp {

namespace {

int degree_of(const Eigen::VectorXcd& v, const char* what) {
  if (v.size() < 1 || v.size() % 2 == 0) {
    throw std::invalid_argument(std::string(what) + ": block length must be 2j+1");
  }
  return static_cast<int>((v.size() - 1) / 2);
}

void require_triangle(int j1, int j2, int j3, const char* what) {
  if (!triangle(j1, j2, j3)) {
    throw TriangleViolation(std::string(what) + ": (" + std::to_string(j1) + "," + std::to_string(j2) +
                            "," + std::to_string(j3) + ") does not couple");
  }
}

}  // namespace

std::uint64_t cgtp_naive_flops(int j1, int j2, int j3) {
  return static_cast<std::uint64_t>(2 * j1 + 1) * (2 * j2 + 1) * (2 * j3 + 1);
}

std::uint64_t cgtp_sparse_flops(int j1, int j2, int j3) {
  std::uint64_t n = 0;
  for (int m1 = -j1; m1 <= j1; ++m1) {
    const int lo = std::max(-j2, -j3 - m1), hi = std::min(j2, j3 - m1);
    if (hi >= lo) n += static_cast<std::uint64_t>(hi - lo + 1);
  }
  return n;
}

Eigen::VectorXcd cgtp_path(const Eigen::VectorXcd& x, const Eigen::VectorXcd& y, int j3, CgtpMode mode,
                           std::uint64_t* flops) {
  const int j1 = degree_of(x, "cgtp_path"), j2 = degree_of(y, "cgtp_path");
  require_triangle(j1, j2, j3, "cgtp_path");
  const auto table = cg_table(j1, j2, j3);
  Eigen::VectorXcd z = Eigen::VectorXcd::Zero(2 * j3 + 1);
  std::uint64_t macs = 0;
  if (mode == CgtpMode::naive) {
    for (int m3 = -j3; m3 <= j3; ++m3) {
      cplx acc{};
      for (int m1 = -j1; m1 <= j1; ++m1) {
        for (int m2 = -j2; m2 <= j2; ++m2) {
          const double c = (m1 + m2 == m3) ? (*table)(m1, m2) : 0.0;
          acc += c * x(m1 + j1) * y(m2 + j2);
          ++macs;
        }
      }
      z(m3 + j3) = acc;
    }
  } else {
    for (int m1 = -j1; m1 <= j1; ++m1) {
      const int lo = std::max(-j2, -j3 - m1), hi = std::min(j2, j3 - m1);
      for (int m2 = lo; m2 <= hi; ++m2) {
        z(m1 + m2 + j3) += (*table)(m1, m2) * x(m1 + j1) * y(m2 + j2);
        ++macs;
      }
    }
  }
  if (flops) *flops += macs;
  return z;
}

TpoResult<IrrepCoeffs> cgtp_full(const IrrepCoeffs& x, const IrrepCoeffs& y, int L3, CgtpMode mode) {
  TpoResult<IrrepCoeffs> r;
  r.output.L = L3;
  for (const auto& [kx, vx] : x.blocks) {
    if (kx.l || kx.path) throw std::invalid_argument("cgtp_full: inputs must carry untagged blocks");
    for (const auto& [ky, vy] : y.blocks) {
      if (ky.l || ky.path) throw std::invalid_argument("cgtp_full: inputs must carry untagged blocks");
      for (int j3 = std::abs(kx.j - ky.j); j3 <= std::min(kx.j + ky.j, L3); ++j3) {
        r.output.blocks[BlockKey{j3, std::nullopt, std::pair{kx.j, ky.j}}] =
            cgtp_path(vx, vy, j3, mode, &r.flops);
      }
    }
  }
  return r;
}

SpinSignal pointwise_spin_tp(const SpinSignal& f, const SpinSignal& g, int s3, std::uint64_t* flops) {
  if (!f.grid || !g.grid || f.grid->Lg != g.grid->Lg) {
    throw PreconditionError("pointwise_spin_tp: signals live on different grids");
  }
  require_triangle(f.s, g.s, s3, "pointwise_spin_tp");
  const int s1 = f.s, s2 = g.s;
  const auto table = cg_table(s1, s2, s3);
  SpinSignal h = zero_spin_signal(s3, f.grid);
  const int nt = f.grid->n_theta(), np = f.grid->n_phi;
  for (int i = 0; i < nt; ++i) {
    for (int k = 0; k < np; ++k) {
      for (int m1 = -s1; m1 <= s1; ++m1) {
        const int lo = std::max(-s2, -s3 - m1), hi = std::min(s2, s3 - m1);
        for (int m2 = lo; m2 <= hi; ++m2) h(i, k, m1 + m2) += (*table)(m1, m2) * f(i, k, m1) * g(i, k, m2);
      }
    }
  }
  if (flops) *flops += static_cast<std::uint64_t>(nt) * np * cgtp_sparse_flops(s1, s2, s3);
  return h;
}

TpoResult<TshCoeffs> istp(const TshCoeffs& x, const TshCoeffs& y, int s3, int L3,
                          std::shared_ptr<const SphereGrid> grid) {
  if (!grid) grid = make_grid(x.L() + y.L());
  if (grid->Lg < x.L() + y.L()) {
    throw PreconditionError("istp: grid Lg=" + std::to_string(grid->Lg) + " below x.L + y.L = " +
                            std::to_string(x.L() + y.L()));
  }
  if (L3 < 0 || L3 > grid->Lg) {
    throw PreconditionError("istp: L3=" + std::to_string(L3) + " outside 0.." + std::to_string(grid->Lg));
  }
  require_triangle(x.s(), y.s(), s3, "istp");
  TpoResult<TshCoeffs> r;
  const SpinSignal f = tsh_encode(x, grid, &r.flops);
  const SpinSignal g = tsh_encode(y, grid, &r.flops);
  const SpinSignal h = pointwise_spin_tp(f, g, s3, &r.flops);
  r.output = tsh_decode(h, L3, &r.flops);
  return r;
}

TshCoeffs as_scalar_tsh(const IrrepCoeffs& x) {
  TshCoeffs t(0, x.L);
  for (const auto& [key, v] : x.blocks) t.block(key.j, key.j) += v;
  return t;
}

IrrepCoeffs from_scalar_tsh(const TshCoeffs& x) {
  if (x.s() != 0) throw std::invalid_argument("from_scalar_tsh: spin must be 0");
  IrrepCoeffs out;
  out.L = x.L();
  for (const auto& [key, v] : x.blocks()) out.block(key.first) = v;
  return out;
}

TpoResult<IrrepCoeffs> gtp(const IrrepCoeffs& x, const IrrepCoeffs& y, int L3,
                           std::shared_ptr<const SphereGrid> grid) {
  auto r = istp(as_scalar_tsh(x), as_scalar_tsh(y), 0, L3, std::move(grid));
  return {from_scalar_tsh(r.output), r.flops};
}

TpoResult<TshCoeffs> vstp(const TshCoeffs& x, const TshCoeffs& y, int L3,
                          std::shared_ptr<const SphereGrid> grid) {
  if (x.s() != 1 || y.s() != 1) throw std::invalid_argument("vstp: inputs must have spin 1");
  return istp(x, y, 1, L3, std::move(grid));
}

Eigen::VectorXcd simulate_cgtp_path(const Eigen::VectorXcd& x, const Eigen::VectorXcd& y, int j3,
                                    std::shared_ptr<const SphereGrid> grid, std::uint64_t* flops) {
  const int j1 = degree_of(x, "simulate_cgtp_path"), j2 = degree_of(y, "simulate_cgtp_path");
  require_triangle(j1, j2, j3, "simulate_cgtp_path");
  if (j1 == 0 && j2 == 0 && j3 == 0) {
    if (flops) *flops += 1;
    return Eigen::VectorXcd::Constant(1, x(0) * y(0));
  }
  const auto [l1, l2, l3] = find_valid_ells(j1, j2, j3);
  const PathKey path = PathKey::vector(j1, l1, j2, l2, j3, l3);
  const double coeff = generalized_gaunt(path);
  if (std::abs(coeff) < 1e-13) {
    throw NumericalDegeneracy("simulate_cgtp_path: coefficient " + std::to_string(coeff) + " for path " +
                              path.str());
  }
  TshCoeffs tx(1, l1), ty(1, l2);
  tx.set(j1, l1, x);
  ty.set(j2, l2, y);
  const auto r = vstp(tx, ty, l3, std::move(grid));
  if (flops) *flops += r.flops;
  const Eigen::VectorXcd* out = r.output.find(j3, l3);
  if (!out) throw std::logic_error("simulate_cgtp_path: missing output block");
  return *out / coeff;
}

}  // namespace sphtp
