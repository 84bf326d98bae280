#include "sphtp/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "sphtp/bench.hpp"
#include "sphtp/coeff_io.hpp"
#include "sphtp/errors.hpp"
#include "sphtp/rules.hpp"
#include "sphtp/tenprod.hpp"

namespace sphtp {

namespace {

using Clock = std::chrono::steady_clock;
constexpr double kPi = std::numbers::pi;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

class Tracker {
 public:
  Tracker(std::string name, std::string module, double tol) : start_(Clock::now()) {
    r_.name = std::move(name);
    r_.module = std::move(module);
    r_.tolerance = tol;
  }

  template <class Describe>
  void add(double dev, Describe&& describe) {
    ++r_.cases;
    if (std::isnan(dev) || dev > r_.max_deviation) r_.max_deviation = std::isnan(dev) ? INFINITY : dev;
    if (!(dev <= r_.tolerance) && r_.failure.empty()) r_.failure = describe() + " (deviation " + fmt(dev) + ")";
  }

  void fail(const std::string& what) {
    ++r_.cases;
    r_.max_deviation = std::max(r_.max_deviation, 1.0);
    if (r_.failure.empty()) r_.failure = what;
  }

  CheckResult finish() {
    r_.passed = r_.failure.empty();
    r_.seconds = std::chrono::duration<double>(Clock::now() - start_).count();
    return r_;
  }

 private:
  CheckResult r_;
  Clock::time_point start_;
};

std::string labels(std::initializer_list<int> v) {
  std::string s = "(";
  bool first = true;
  for (int x : v) {
    if (!first) s += ",";
    s += std::to_string(x);
    first = false;
  }
  return s + ")";
}

Eigen::Vector3d unit(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

std::pair<double, double> angles(const Eigen::Vector3d& v) {
  const double z = std::clamp(v.z() / v.norm(), -1.0, 1.0);
  return {std::acos(z), std::atan2(v.y(), v.x())};
}

double max_diff(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  if (a.size() != b.size()) return INFINITY;
  return a.size() == 0 ? 0.0 : (a - b).cwiseAbs().maxCoeff();
}

double max_diff(const IrrepCoeffs& a, const IrrepCoeffs& b) {
  double d = 0.0;
  for (const auto& [k, v] : a.blocks) {
    const auto* w = b.find(k);
    d = std::max(d, w ? max_diff(v, *w) : v.cwiseAbs().maxCoeff());
  }
  for (const auto& [k, v] : b.blocks) {
    if (!a.find(k)) d = std::max(d, v.cwiseAbs().maxCoeff());
  }
  return d;
}

double max_diff(const TshCoeffs& a, const TshCoeffs& b) {
  double d = 0.0;
  for (const auto& [k, v] : a.blocks()) {
    const auto* w = b.find(k.first, k.second);
    d = std::max(d, w ? max_diff(v, *w) : v.cwiseAbs().maxCoeff());
  }
  for (const auto& [k, v] : b.blocks()) {
    if (!a.find(k.first, k.second)) d = std::max(d, v.cwiseAbs().maxCoeff());
  }
  return d;
}

Eigen::VectorXcd random_vec(int j, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::VectorXcd v(2 * j + 1);
  for (auto& c : v) c = cplx(n(rng), n(rng));
  return v;
}

IrrepCoeffs scaled_sum(const IrrepCoeffs& a, cplx alpha, const IrrepCoeffs& b, cplx beta) {
  IrrepCoeffs out = a;
  for (auto& [k, v] : out.blocks) v *= alpha;
  for (const auto& [k, v] : b.blocks) {
    auto it = out.blocks.find(k);
    if (it == out.blocks.end()) out.blocks[k] = beta * v;
    else it->second += beta * v;
  }
  return out;
}

TshCoeffs scaled_sum(const TshCoeffs& a, cplx alpha, const TshCoeffs& b, cplx beta) {
  TshCoeffs out(a.s(), std::max(a.L(), b.L()));
  for (const auto& [k, v] : a.blocks()) out.block(k.first, k.second) += alpha * v;
  for (const auto& [k, v] : b.blocks()) out.block(k.first, k.second) += beta * v;
  return out;
}

int sign_pow(int e) { return (e % 2 == 0) ? 1 : -1; }

}  // namespace

namespace checks {

CheckResult cg_orthogonality(int jmax) {
  Tracker t("cg_orthogonality", "angular", 0.0);
  for (int j1 = 0; j1 <= jmax; ++j1) {
    for (int j2 = 0; j2 <= jmax; ++j2) {
      for (int j3 = std::abs(j1 - j2); j3 <= j1 + j2; ++j3) {
        for (int j3p = std::abs(j1 - j2); j3p <= j1 + j2; ++j3p) {
          for (int m3 = -j3; m3 <= j3; ++m3) {
            for (int m3p = -j3p; m3p <= j3p; ++m3p) {
              RadicalSum sum;
              for (int m1 = -j1; m1 <= j1; ++m1) {
                for (int m2 = -j2; m2 <= j2; ++m2) {
                  sum += cg({j1, m1, j2, m2, j3, m3}) * cg({j1, m1, j2, m2, j3p, m3p});
                }
              }
              const ExactRational v = sum.value();
              const bool delta = j3 == j3p && m3 == m3p;
              const ExactRational want = delta ? ExactRational::one() : ExactRational{};
              t.add(v == want ? 0.0 : std::max(1.0, std::abs(v.to_double() - (delta ? 1.0 : 0.0))),
                    [&] { return "j1,j2=" + labels({j1, j2}) + " (j3,m3)=" + labels({j3, m3}) +
                                 " (j3',m3')=" + labels({j3p, m3p}) + " sum=" + v.to_string(); });
            }
          }
        }
      }
    }
  }
  return t.finish();
}

CheckResult cg_symmetry(int jmax) {
  Tracker t("cg_symmetry", "angular", 0.0);
  for (int j = 0; j <= jmax; ++j) {
    for (int l = 0; l <= jmax; ++l) {
      for (int s = 0; s <= jmax; ++s) {
        for (int mj = -j; mj <= j; ++mj) {
          for (int ml = -l; ml <= l; ++ml) {
            const int ms = mj - ml;
            if (std::abs(ms) > s) continue;
            const ExactRational lhs = cg({l, ml, s, ms, j, mj});
            const ExactRational factor =
                ExactRational::from_root(sign_pow(l - ml), mpq_class(2 * j + 1) / (2 * s + 1));
            const ExactRational rhs = factor * cg({j, mj, l, -ml, s, ms});
            t.add(lhs == rhs ? 0.0 : 1.0, [&] {
              return "C^{" + labels({j, mj}) + "}_{" + labels({l, ml, s, ms}) + "}=" + lhs.to_string() +
                     " but reordered form gives " + rhs.to_string();
            });
          }
        }
      }
    }
  }
  return t.finish();
}

CheckResult wigner_d_product(int lmax, int rotations, std::uint64_t seed, double tol) {
  Tracker t("wigner_d_product", "angular", tol);
  std::mt19937_64 rng(seed);
  for (int r = 0; r < rotations; ++r) {
    const EulerAngles g = random_rotation(rng);
    std::vector<Eigen::MatrixXcd> d;
    for (int l = 0; l <= 2 * lmax; ++l) d.push_back(wigner_d_matrix(l, g));
    for (int l1 = 0; l1 <= lmax; ++l1) {
      for (int l2 = 0; l2 <= lmax; ++l2) {
        for (int m1 = -l1; m1 <= l1; ++m1)
          for (int n1 = -l1; n1 <= l1; ++n1)
            for (int m2 = -l2; m2 <= l2; ++m2)
              for (int n2 = -l2; n2 <= l2; ++n2) {
                const cplx lhs = d[l1](m1 + l1, n1 + l1) * d[l2](m2 + l2, n2 + l2);
                cplx rhs{};
                const int m = m1 + m2, n = n1 + n2;
                for (int l3 = std::abs(l1 - l2); l3 <= l1 + l2; ++l3) {
                  if (std::abs(m) > l3 || std::abs(n) > l3) continue;
                  rhs += cg_value({l1, m1, l2, m2, l3, m}) * cg_value({l1, n1, l2, n2, l3, n}) *
                         d[l3](m + l3, n + l3);
                }
                t.add(std::abs(lhs - rhs), [&] { return "l1,l2=" + labels({l1, l2}) + " m,n=" + labels({m1, n1, m2, n2}); });
              }
      }
    }
  }
  return t.finish();
}

CheckResult wigner_d_unitarity(int jmax, int rotations, std::uint64_t seed) {
  Tracker t("wigner_d_unitarity", "angular", 1e-12);
  std::mt19937_64 rng(seed);
  for (int r = 0; r < rotations; ++r) {
    const EulerAngles g = random_rotation(rng);
    for (int j = 0; j <= jmax; ++j) {
      const Eigen::MatrixXcd d = wigner_d_matrix(j, g);
      const int n = 2 * j + 1;
      const double dev = (d * d.adjoint() - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
      t.add(dev, [&] { return "j=" + std::to_string(j) + " rotation " + std::to_string(r); });
    }
  }
  return t.finish();
}

CheckResult ninej_spin1_table(int abc_max) {
  Tracker t("ninej_spin1_table", "angular", 1e-12);
  std::set<int> cells;
  for (int a = 0; a <= abc_max; ++a)
    for (int b = 0; b <= abc_max; ++b)
      for (int c = 0; c <= abc_max; ++c)
        for (int lam = -1; lam <= 1; ++lam)
          for (int mu = -1; mu <= 1; ++mu)
            for (int nu = -1; nu <= 1; ++nu) {
              if (a + lam < 0 || b + mu < 0 || c + nu < 0) continue;
              const NineJKey key{{a + lam, a, 1, b + mu, b, 1, c + nu, c, 1}};
              bool couples = true;
              for (int i = 0; i < 3; ++i) {
                couples = couples && triangle(key(i, 0), key(i, 1), key(i, 2)) &&
                          triangle(key(0, i), key(1, i), key(2, i));
              }
              const double table = wigner_9j_spin1(a, lam, b, mu, c, nu);
              const double exact = wigner_9j(key).to_double();
              if (couples) cells.insert((lam + 1) * 9 + (mu + 1) * 3 + (nu + 1));
              t.add(std::abs(table - exact), [&] {
                return "a,b,c=" + labels({a, b, c}) + " (lam,mu,nu)=" + labels({lam, mu, nu}) +
                       " table=" + fmt(table) + " contraction=" + fmt(exact);
              });
            }
  if (cells.size() != 27) t.fail("only " + std::to_string(cells.size()) + " of 27 table cells exercised");
  return t.finish();
}

CheckResult ninej_row_swap(int entry_max) {
  Tracker t("ninej_row_swap", "angular", 0.0);
  const int base = entry_max + 1;
  int total = 1;
  for (int i = 0; i < 9; ++i) total *= base;
  for (int code = 0; code < total; ++code) {
    NineJKey k;
    int c = code;
    for (int i = 0; i < 9; ++i) {
      k.v[static_cast<std::size_t>(i)] = c % base;
      c /= base;
    }
    const ExactRational v = wigner_9j(k);
    if (v.is_zero()) continue;
    int sum = 0;
    for (int x : k.v) sum += x;
    const int ph = sign_pow(sum);
    const int swaps[3][2] = {{0, 1}, {0, 2}, {1, 2}};
    for (const auto& sw : swaps) {
      NineJKey kk = k;
      for (int col = 0; col < 3; ++col) {
        std::swap(kk.v[static_cast<std::size_t>(3 * sw[0] + col)], kk.v[static_cast<std::size_t>(3 * sw[1] + col)]);
      }
      const ExactRational w = wigner_9j(kk);
      const ExactRational want = ph > 0 ? v : -v;
      t.add(w == want ? 0.0 : 1.0, [&] {
        std::string s = "grid";
        for (int x : k.v) s += " " + std::to_string(x);
        return s + " rows " + labels({sw[0], sw[1]}) + ": " + w.to_string() + " vs " + want.to_string();
      });
    }
  }
  return t.finish();
}

CheckResult sh_orthonormality(int Lg) {
  Tracker t("sh_orthonormality", "sht", 1e-12);
  t.add(sh_orthonormality_deviation(Lg), [&] { return "Lg=" + std::to_string(Lg); });
  return t.finish();
}

CheckResult sht_round_trip(int Lmax, std::uint64_t seed) {
  Tracker t("sht_round_trip", "sht", 1e-12);
  std::mt19937_64 rng(seed);
  for (int L : {0, 1, 2, 3, 4, 5, 6, 7, 8, 12, 16, 24, 32}) {
    if (L > Lmax) break;
    const IrrepCoeffs x = random_irrep_coeffs(L, rng);
    const IrrepCoeffs y = from_sphere(to_sphere(x, make_grid(L)), L);
    t.add(max_diff(x, y), [&] { return "L=" + std::to_string(L); });
  }
  return t.finish();
}

CheckResult d_to_sh(int lmax, int rotations, std::uint64_t seed, double tol) {
  Tracker t("d_to_sh_reduction", "sht", tol);
  std::mt19937_64 rng(seed);
  for (int r = 0; r < rotations; ++r) {
    const EulerAngles g = random_rotation(rng);
    const auto [theta, phi] = angles(rotation_matrix(g) * Eigen::Vector3d::UnitZ());
    for (int l = 0; l <= lmax; ++l) {
      const Eigen::MatrixXcd d = wigner_d_matrix(l, g);
      for (int m = -l; m <= l; ++m) {
        const cplx want = std::sqrt(4 * kPi / (2 * l + 1)) * std::conj(sh_eval(l, m, theta, phi));
        t.add(std::abs(d(m + l, l) - want), [&] { return "l,m=" + labels({l, m}) + " rotation " + std::to_string(r); });
      }
    }
  }
  return t.finish();
}

CheckResult gaunt_quadrature(int lmax) {
  Tracker t("gaunt_quadrature", "sht", 1e-11);
  std::map<int, std::vector<std::vector<cplx>>> tables;  // Lg -> (l,m) -> samples
  auto table_for = [&](int Lg) -> const std::vector<std::vector<cplx>>& {
    auto it = tables.find(Lg);
    if (it != tables.end()) return it->second;
    const auto grid = make_grid(Lg);
    std::vector<std::vector<cplx>> tab(static_cast<std::size_t>((lmax + 1) * (lmax + 1)));
    for (int l = 0; l <= lmax; ++l)
      for (int m = -l; m <= l; ++m) {
        auto& row = tab[static_cast<std::size_t>(l * l + l + m)];
        for (int i = 0; i < grid->n_theta(); ++i)
          for (int k = 0; k < grid->n_phi; ++k) row.push_back(sh_eval(l, m, grid->theta[i], grid->phi[k]));
      }
    return tables.emplace(Lg, std::move(tab)).first->second;
  };
  for (int l1 = 0; l1 <= lmax; ++l1)
    for (int l2 = 0; l2 <= lmax; ++l2) {
      const int Lg = std::max(l1 + l2, lmax);
      const auto grid = make_grid(Lg);
      const auto& tab = table_for(Lg);
      const double dphi = 2 * kPi / grid->n_phi;
      for (int l3 = 0; l3 <= lmax; ++l3)
        for (int m1 = -l1; m1 <= l1; ++m1)
          for (int m2 = -l2; m2 <= l2; ++m2)
            for (int m3 = -l3; m3 <= l3; ++m3) {
              const auto& y1 = tab[static_cast<std::size_t>(l1 * l1 + l1 + m1)];
              const auto& y2 = tab[static_cast<std::size_t>(l2 * l2 + l2 + m2)];
              const auto& y3 = tab[static_cast<std::size_t>(l3 * l3 + l3 + m3)];
              cplx q{};
              for (int i = 0; i < grid->n_theta(); ++i) {
                cplx row{};
                for (int k = 0; k < grid->n_phi; ++k) {
                  const std::size_t p = static_cast<std::size_t>(i * grid->n_phi + k);
                  row += y1[p] * y2[p] * std::conj(y3[p]);
                }
                q += grid->weights[static_cast<std::size_t>(i)] * dphi * row;
              }
              const double g = gaunt_coefficient(l1, m1, l2, m2, l3, m3);
              t.add(std::abs(q - g), [&] { return "(l,m)=" + labels({l1, m1, l2, m2, l3, m3}); });
            }
    }
  return t.finish();
}

CheckResult sht_equivariance(int L, int rotations, std::uint64_t seed, double tol) {
  Tracker t("sht_equivariance", "sht", tol);
  std::mt19937_64 rng(seed);
  const auto grid = make_grid(L);
  for (int r = 0; r < rotations; ++r) {
    const EulerAngles g = random_rotation(rng);
    const Eigen::Matrix3d R = rotation_matrix(g);
    const IrrepCoeffs x = random_irrep_coeffs(L, rng);
    const ScalarSignal lhs = to_sphere(rotate(x, g), grid);
    for (int i = 0; i < grid->n_theta(); ++i)
      for (int k = 0; k < grid->n_phi; ++k) {
        const auto [th, ph] = angles(R.transpose() * unit(grid->theta[i], grid->phi[k]));
        cplx rhs{};
        for (const auto& [key, v] : x.blocks)
          for (int m = -key.j; m <= key.j; ++m) rhs += v(m + key.j) * sh_eval(key.j, m, th, ph);
        t.add(std::abs(lhs(i, k) - rhs), [&] { return "rotation " + std::to_string(r) + " node " + labels({i, k}); });
      }
  }
  return t.finish();
}

CheckResult tsh_round_trip(int smax, int Lmax, std::uint64_t seed) {
  Tracker t("tsh_round_trip", "tsh", 1e-12);
  std::mt19937_64 rng(seed);
  for (int s = 0; s <= smax; ++s)
    for (int L : {0, 1, 2, 3, 4, 6, 8, 12, 16, 24, 32}) {
      if (L > Lmax) break;
      const TshCoeffs x = random_tsh_coeffs(s, L, rng);
      const TshCoeffs y = tsh_decode(tsh_encode(x, make_grid(L)), L);
      t.add(max_diff(x, y), [&] { return "s=" + std::to_string(s) + " L=" + std::to_string(L); });
    }
  return t.finish();
}

CheckResult tsh_orthonormality(int smax, int L) {
  Tracker t("tsh_orthonormality", "tsh", 1e-12);
  for (int s = 0; s <= smax; ++s) {
    t.add(tsh_orthonormality_check(s, std::max(L, s)),
          [&] { return "s=" + std::to_string(s) + " L=" + std::to_string(std::max(L, s)); });
  }
  return t.finish();
}

CheckResult tsh_equivariance(int smax, int L, int rotations, std::uint64_t seed, double tol) {
  Tracker t("tsh_equivariance", "tsh", tol);
  std::mt19937_64 rng(seed);
  const auto grid = make_grid(L);
  for (int s = 0; s <= smax; ++s)
    for (int r = 0; r < rotations; ++r) {
      const EulerAngles g = random_rotation(rng);
      const Eigen::Matrix3d R = rotation_matrix(g);
      const Eigen::MatrixXcd ds = wigner_d_matrix(s, g);
      const TshCoeffs x = random_tsh_coeffs(s, L, rng);
      const SpinSignal lhs = tsh_encode(rotate(x, g), grid);
      for (int i = 0; i < grid->n_theta(); ++i)
        for (int k = 0; k < grid->n_phi; ++k) {
          const auto [th, ph] = angles(R.transpose() * unit(grid->theta[i], grid->phi[k]));
          Eigen::VectorXcd f = Eigen::VectorXcd::Zero(2 * s + 1);
          for (const auto& [key, v] : x.blocks())
            for (int m = -key.first; m <= key.first; ++m)
              f += v(m + key.first) * tsh_eval(key.first, m, key.second, s, th, ph);
          const Eigen::VectorXcd rhs = ds * f;
          double dev = 0.0;
          for (int ms = -s; ms <= s; ++ms) dev = std::max(dev, std::abs(lhs(i, k, ms) - rhs(ms + s)));
          t.add(dev, [&] { return "s=" + std::to_string(s) + " rotation " + std::to_string(r) + " node " + labels({i, k}); });
        }
    }
  return t.finish();
}

CheckResult tsh_scalar_reduction(int lmax) {
  Tracker t("tsh_scalar_reduction", "tsh", 1e-14);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int l = 0; l <= lmax; ++l)
    for (int m = -l; m <= l; ++m)
      for (int p = 0; p < 4; ++p) {
        const double th = std::acos(1 - 2 * u(rng)), ph = 2 * kPi * u(rng);
        const Eigen::VectorXcd v = tsh_eval(l, m, l, 0, th, ph);
        t.add(std::abs(v(0) - sh_eval(l, m, th, ph)), [&] { return "l,m=" + labels({l, m}); });
      }
  return t.finish();
}

CheckResult tpo_equivariance(int L, int rotations, std::uint64_t seed, double tol) {
  Tracker t("tpo_equivariance", "tenprod", tol);
  std::mt19937_64 rng(seed);
  for (int r = 0; r < rotations; ++r) {
    const EulerAngles g = random_rotation(rng);
    const IrrepCoeffs x = random_irrep_coeffs(L, rng), y = random_irrep_coeffs(L, rng);
    for (CgtpMode mode : {CgtpMode::naive, CgtpMode::sparse}) {
      const auto a = cgtp_full(rotate(x, g), rotate(y, g), 2 * L, mode).output;
      const auto b = rotate(cgtp_full(x, y, 2 * L, mode).output, g);
      t.add(max_diff(a, b), [&] { return std::string("cgtp_full ") + (mode == CgtpMode::naive ? "naive" : "sparse") +
                                         " rotation " + std::to_string(r); });
    }
    {
      const auto a = gtp(rotate(x, g), rotate(y, g), 2 * L).output;
      const auto b = rotate(gtp(x, y, 2 * L).output, g);
      t.add(max_diff(a, b), [&] { return "gtp rotation " + std::to_string(r); });
    }
    const int spins[][3] = {{1, 1, 1}, {0, 1, 1}, {1, 0, 1}, {1, 1, 0}, {0, 0, 0}};
    for (const auto& sp : spins) {
      const TshCoeffs tx = random_tsh_coeffs(sp[0], L, rng), ty = random_tsh_coeffs(sp[1], L, rng);
      const auto a = istp(rotate(tx, g), rotate(ty, g), sp[2], 2 * L).output;
      const auto b = rotate(istp(tx, ty, sp[2], 2 * L).output, g);
      t.add(max_diff(a, b), [&] {
        return (sp[0] + sp[1] + sp[2] == 3 ? std::string("vstp") : "istp" + labels({sp[0], sp[1], sp[2]})) +
               " rotation " + std::to_string(r);
      });
    }
  }
  return t.finish();
}

CheckResult generalized_gaunt_formula(int jl_max, int smax, std::uint64_t seed, double tol) {
  Tracker t("generalized_gaunt_formula", "tenprod", tol);
  std::mt19937_64 rng(seed);
  for (int s1 = 0; s1 <= smax; ++s1)
    for (int s2 = 0; s2 <= smax; ++s2)
      for (int s3 = 0; s3 <= smax; ++s3) {
        if (!triangle(s1, s2, s3)) continue;
        for (auto [j1, l1] : tsh_keys(s1, jl_max)) {
          if (j1 > jl_max) continue;
          for (auto [j2, l2] : tsh_keys(s2, jl_max)) {
            if (j2 > jl_max) continue;
            const Eigen::VectorXcd x = random_vec(j1, rng), y = random_vec(j2, rng);
            TshCoeffs tx(s1, l1), ty(s2, l2);
            tx.set(j1, l1, x);
            ty.set(j2, l2, y);
            const auto out = istp(tx, ty, s3, l1 + l2).output;
            for (const auto& [key, z] : out.blocks()) {
              const auto [j3, l3] = key;
              Eigen::VectorXcd want = Eigen::VectorXcd::Zero(2 * j3 + 1);
              if (triangle(j1, j2, j3)) {
                const double c = generalized_gaunt({j1, l1, s1, j2, l2, s2, j3, l3, s3});
                if (c != 0.0) want = c * cgtp_path(x, y, j3);
              }
              t.add(max_diff(z, want), [&] {
                return "path " + PathKey{j1, l1, s1, j2, l2, s2, j3, l3, s3}.str();
              });
            }
          }
        }
      }
  return t.finish();
}

CheckResult gtp_gaunt(int lmax, std::uint64_t seed) {
  Tracker t("gtp_gaunt", "tenprod", 1e-11);
  std::mt19937_64 rng(seed);
  for (int l1 = 0; l1 <= lmax; ++l1)
    for (int l2 = 0; l2 <= lmax; ++l2) {
      IrrepCoeffs x, y;
      x.L = l1;
      y.L = l2;
      x.block(l1) = random_vec(l1, rng);
      y.block(l2) = random_vec(l2, rng);
      const auto out = gtp(x, y, l1 + l2).output;
      for (const auto& [key, z] : out.blocks) {
        const int l3 = key.j;
        Eigen::VectorXcd want = Eigen::VectorXcd::Zero(2 * l3 + 1);
        for (int m1 = -l1; m1 <= l1; ++m1)
          for (int m2 = -l2; m2 <= l2; ++m2) {
            if (std::abs(m1 + m2) > l3) continue;
            want(m1 + m2 + l3) += gaunt_coefficient(l1, m1, l2, m2, l3, m1 + m2) * x.blocks.begin()->second(m1 + l1) *
                                  y.blocks.begin()->second(m2 + l2);
          }
        t.add(max_diff(z, want), [&] { return "l=" + labels({l1, l2, l3}); });
      }
    }
  return t.finish();
}

CheckResult simulation(int jmax, int pairs, std::uint64_t seed, double tol) {
  Tracker t("cgtp_simulation", "tenprod", tol);
  std::mt19937_64 rng(seed);
  for (int j1 = 0; j1 <= jmax; ++j1)
    for (int j2 = 0; j2 <= jmax; ++j2)
      for (int j3 = 0; j3 <= jmax; ++j3) {
        if (!triangle(j1, j2, j3)) continue;
        for (int p = 0; p < pairs; ++p) {
          const Eigen::VectorXcd x = random_vec(j1, rng), y = random_vec(j2, rng);
          double dev;
          try {
            dev = max_diff(simulate_cgtp_path(x, y, j3), cgtp_path(x, y, j3));
          } catch (const std::exception& e) {
            t.fail("j=" + labels({j1, j2, j3}) + ": " + e.what());
            continue;
          }
          t.add(dev, [&] { return "j=" + labels({j1, j2, j3}) + " pair " + std::to_string(p); });
        }
      }
  return t.finish();
}

CheckResult bilinearity(int L, std::uint64_t seed) {
  Tracker t("bilinearity", "tenprod", 1e-12);
  std::mt19937_64 rng(seed);
  const cplx a(0.7, -0.3), b(-1.1, 0.4);
  const IrrepCoeffs x = random_irrep_coeffs(L, rng), x2 = random_irrep_coeffs(L, rng), y = random_irrep_coeffs(L, rng);
  const IrrepCoeffs xs = scaled_sum(x, a, x2, b);
  auto check_irrep = [&](const char* name, auto&& T) {
    const IrrepCoeffs lhs = T(xs, y), rhs = scaled_sum(T(x, y), a, T(x2, y), b);
    const IrrepCoeffs lhs2 = T(y, xs), rhs2 = scaled_sum(T(y, x), a, T(y, x2), b);
    t.add(std::max(max_diff(lhs, rhs), max_diff(lhs2, rhs2)), [&] { return std::string(name); });
  };
  check_irrep("cgtp_full naive", [&](const IrrepCoeffs& p, const IrrepCoeffs& q) { return cgtp_full(p, q, 2 * L, CgtpMode::naive).output; });
  check_irrep("cgtp_full sparse", [&](const IrrepCoeffs& p, const IrrepCoeffs& q) { return cgtp_full(p, q, 2 * L, CgtpMode::sparse).output; });
  check_irrep("gtp", [&](const IrrepCoeffs& p, const IrrepCoeffs& q) { return gtp(p, q, 2 * L).output; });
  for (int s : {1, 2}) {
    const TshCoeffs u = random_tsh_coeffs(s, L, rng), u2 = random_tsh_coeffs(s, L, rng), v = random_tsh_coeffs(s, L, rng);
    const TshCoeffs us = scaled_sum(u, a, u2, b);
    const auto T = [&](const TshCoeffs& p, const TshCoeffs& q) { return istp(p, q, s, 2 * L).output; };
    const double d = std::max(max_diff(T(us, v), scaled_sum(T(u, v), a, T(u2, v), b)),
                              max_diff(T(v, us), scaled_sum(T(v, u), a, T(v, u2), b)));
    t.add(d, [&] { return s == 1 ? std::string("vstp") : "istp s=" + std::to_string(s); });
  }
  return t.finish();
}

CheckResult cgtp_flop_counts(int jmax) {
  Tracker t("cgtp_flop_counts", "tenprod", 0.0);
  std::mt19937_64 rng(3);
  for (int j1 = 0; j1 <= jmax; ++j1)
    for (int j2 = 0; j2 <= jmax; ++j2)
      for (int j3 = std::abs(j1 - j2); j3 <= j1 + j2; ++j3) {
        const Eigen::VectorXcd x = random_vec(j1, rng), y = random_vec(j2, rng);
        std::uint64_t naive = 0, sparse = 0;
        cgtp_path(x, y, j3, CgtpMode::naive, &naive);
        cgtp_path(x, y, j3, CgtpMode::sparse, &sparse);
        std::uint64_t pairs = 0;
        for (int m3 = -j3; m3 <= j3; ++m3)
          for (int m1 = -j1; m1 <= j1; ++m1)
            for (int m2 = -j2; m2 <= j2; ++m2) pairs += (m1 + m2 == m3);
        const std::uint64_t loops = static_cast<std::uint64_t>(2 * j1 + 1) * (2 * j2 + 1) * (2 * j3 + 1);
        t.add(static_cast<double>(naive != loops) + static_cast<double>(sparse != pairs), [&] {
          return "j=" + labels({j1, j2, j3}) + " naive " + std::to_string(naive) + "/" + std::to_string(loops) +
                 " sparse " + std::to_string(sparse) + "/" + std::to_string(pairs);
        });
      }
  return t.finish();
}

CheckResult selection_iff(int max_label) {
  Tracker t("selection_rule_iff", "rules", 0.0);
  const int n = max_label;
  for (int j1 = 0; j1 <= n; ++j1)
    for (int l1 = 0; l1 <= n; ++l1)
      for (int j2 = 0; j2 <= n; ++j2)
        for (int l2 = 0; l2 <= n; ++l2)
          for (int j3 = 0; j3 <= n; ++j3)
            for (int l3 = 0; l3 <= n; ++l3) {
              const PathKey p = PathKey::vector(j1, l1, j2, l2, j3, l3);
              const RuleReport r = vstp_rules(p);
              const bool nonzero = generalized_gaunt_nonzero(p);
              const bool consistent = r.passed == nonzero && r.passed == (r.coefficient != 0.0);
              t.add(consistent ? 0.0 : 1.0, [&] {
                return "path " + p.str() + " rules " + (r.passed ? "pass" : "fail") + ", exact coefficient " +
                       (nonzero ? "nonzero" : "zero") + ", float " + fmt(r.coefficient);
              });
            }
  return t.finish();
}

CheckResult completeness(int jmax) {
  Tracker t("completeness", "rules", 0.0);
  for (int j1 = 0; j1 <= jmax; ++j1)
    for (int j2 = 0; j2 <= jmax; ++j2)
      for (int j3 = 0; j3 <= jmax; ++j3) {
        if (!triangle(j1, j2, j3)) continue;
        const std::string where = "j=" + labels({j1, j2, j3});
        if (j1 == 0 && j2 == 0 && j3 == 0) {
          try {
            find_valid_ells(0, 0, 0);
            t.fail(where + ": expected NotInteractable");
          } catch (const NotInteractable&) {
            t.add(0.0, [] { return std::string(); });
          }
          continue;
        }
        const auto l = find_valid_ells(j1, j2, j3);
        const PathKey p = PathKey::vector(j1, l[0], j2, l[1], j3, l[2]);
        const bool ok = vstp_rules(p).passed && generalized_gaunt_nonzero(p);
        t.add(ok ? 0.0 : 1.0, [&] { return where + " assigned l=" + labels({l[0], l[1], l[2]}); });
      }
  return t.finish();
}

CheckResult interactable_search(int jmax) {
  Tracker t("interactable_search", "rules", 0.0);
  for (int j1 = 0; j1 <= jmax; ++j1)
    for (int j2 = 0; j2 <= jmax; ++j2)
      for (int j3 = 0; j3 <= jmax; ++j3) {
        const bool a = interactable(j1, j2, j3), b = interactable_by_search(j1, j2, j3);
        t.add(a == b ? 0.0 : 1.0, [&] { return "j=" + labels({j1, j2, j3}); });
      }
  return t.finish();
}

CheckResult gtp_exclusion(int lmax) {
  Tracker t("gtp_exclusion", "rules", 0.0);
  for (int l1 = 0; l1 <= lmax; ++l1)
    for (int l2 = 0; l2 <= lmax; ++l2)
      for (int l3 = 0; l3 <= lmax; ++l3) {
        const bool want = triangle(l1, l2, l3) && (l1 + l2 + l3) % 2 == 0;
        const bool got = generalized_gaunt_nonzero({l1, l1, 0, l2, l2, 0, l3, l3, 0});
        t.add(want == got ? 0.0 : 1.0, [&] { return "l=" + labels({l1, l2, l3}); });
      }
  return t.finish();
}

CheckResult expressivity(int Lmax) {
  Tracker t("expressivity", "rules", 0.1);
  for (int L = 0; L <= Lmax; ++L) {
    t.add(expressivity_count(0, L) == L + 1 ? 0.0 : 1.0, [&] { return "s=0 L=" + std::to_string(L); });
  }
  for (int s = 0; s <= 2; ++s) {
    for (int L = 0; L <= std::min(Lmax, 8); ++L) {
      long brute = 0;
      for (int l = 0; l <= L; ++l)
        for (int j = 0; j <= L + s + 1; ++j) brute += triangle(j, l, s);
      t.add(brute == expressivity_count(s, L) ? 0.0 : 1.0,
            [&] { return "enumeration s=" + std::to_string(s) + " L=" + std::to_string(L); });
    }
    const double ratio = static_cast<double>(expressivity_count(s, Lmax)) / ((2.0 * s + 1) * (Lmax + 1));
    t.add(std::abs(1.0 - ratio), [&] { return "ratio s=" + std::to_string(s) + " L=" + std::to_string(Lmax); });
  }
  return t.finish();
}

CheckResult bench_counts(int Lmax) {
  Tracker t("bench_flop_counts", "bench", 0.0);
  BenchOptions opt;
  opt.repeats = 2;
  BenchOptions zero = opt;
  zero.zero_inputs = true;
  for (Method m : all_methods())
    for (Setting s : {Setting::SISO, Setting::SIMO, Setting::MIMO}) {
      std::uint64_t prev = 0;
      for (int L = 1; L <= Lmax; ++L) {
        const std::string where = to_string(m) + " " + to_string(s) + " L=" + std::to_string(L);
        const BenchRecord r = run_cell(m, s, L, opt);
        const BenchRecord z = run_cell(m, s, L, zero);
        const std::uint64_t proj = projected_flops(m, s, L, opt);
        t.add(r.flops == proj ? 0.0 : 1.0,
              [&] { return where + " measured " + std::to_string(r.flops) + " projected " + std::to_string(proj); });
        t.add(r.flops == z.flops ? 0.0 : 1.0, [&] { return where + " zero inputs change the count"; });
        t.add(r.flops >= prev ? 0.0 : 1.0, [&] { return where + " count decreased with L"; });
        prev = r.flops;
      }
    }
  for (int L = 1; L <= Lmax; ++L) {
    const auto n = projected_flops(Method::cgtp_naive, Setting::SISO, L);
    const auto s = projected_flops(Method::cgtp_sparse, Setting::SISO, L);
    t.add(s <= n ? 0.0 : 1.0, [&] { return "SISO sparse exceeds naive at L=" + std::to_string(L); });
  }
  return t.finish();
}

}  // namespace checks

bool VerifyReport::passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

const std::vector<NamedCheck>& verify_checks() {
  using L = VerifyLevel;
  auto q = [](const VerifyConfig& c) { return c.level == L::quick; };
  static const std::vector<NamedCheck> list = {
      {"cg_orthogonality", "angular", [=](const VerifyConfig& c) { return checks::cg_orthogonality(q(c) ? 2 : 3); }},
      {"cg_symmetry", "angular", [=](const VerifyConfig&) { return checks::cg_symmetry(3); }},
      {"wigner_d_product", "angular",
       [=](const VerifyConfig& c) { return checks::wigner_d_product(2, q(c) ? 5 : 20, c.seed, c.tolerance); }},
      {"wigner_d_unitarity", "angular",
       [=](const VerifyConfig& c) { return checks::wigner_d_unitarity(8, q(c) ? 10 : 50, c.seed); }},
      {"ninej_spin1_table", "angular", [=](const VerifyConfig& c) { return checks::ninej_spin1_table(q(c) ? 3 : 6); }},
      {"ninej_row_swap", "angular", [=](const VerifyConfig& c) { return checks::ninej_row_swap(q(c) ? 2 : 3); }},
      {"sh_orthonormality", "sht", [=](const VerifyConfig&) { return checks::sh_orthonormality(8); }},
      {"sht_round_trip", "sht", [=](const VerifyConfig& c) { return checks::sht_round_trip(q(c) ? 8 : 32, c.seed); }},
      {"d_to_sh_reduction", "sht",
       [=](const VerifyConfig& c) { return checks::d_to_sh(4, 20, c.seed, c.tolerance); }},
      {"gaunt_quadrature", "sht", [=](const VerifyConfig& c) { return checks::gaunt_quadrature(q(c) ? 3 : 4); }},
      {"sht_equivariance", "sht",
       [=](const VerifyConfig& c) { return checks::sht_equivariance(4, q(c) ? 3 : 10, c.seed, c.tolerance); }},
      {"tsh_round_trip", "tsh", [=](const VerifyConfig& c) { return checks::tsh_round_trip(2, q(c) ? 8 : 16, c.seed); }},
      {"tsh_orthonormality", "tsh", [=](const VerifyConfig& c) { return checks::tsh_orthonormality(2, q(c) ? 4 : 5); }},
      {"tsh_equivariance", "tsh",
       [=](const VerifyConfig& c) { return checks::tsh_equivariance(1, 4, q(c) ? 2 : 10, c.seed, c.tolerance); }},
      {"tsh_scalar_reduction", "tsh", [=](const VerifyConfig& c) { return checks::tsh_scalar_reduction(q(c) ? 4 : 8); }},
      {"tpo_equivariance", "tenprod",
       [=](const VerifyConfig& c) { return checks::tpo_equivariance(q(c) ? 2 : 4, q(c) ? 3 : 10, c.seed, c.tolerance); }},
      {"generalized_gaunt_formula", "tenprod",
       [=](const VerifyConfig& c) { return checks::generalized_gaunt_formula(q(c) ? 2 : 3, 1, c.seed, c.tolerance); }},
      {"gtp_gaunt", "tenprod", [=](const VerifyConfig& c) { return checks::gtp_gaunt(q(c) ? 3 : 4, c.seed); }},
      {"cgtp_simulation", "tenprod",
       [=](const VerifyConfig& c) { return checks::simulation(q(c) ? 2 : 4, q(c) ? 3 : 20, c.seed, c.tolerance); }},
      {"bilinearity", "tenprod", [=](const VerifyConfig& c) { return checks::bilinearity(q(c) ? 3 : 4, c.seed); }},
      {"cgtp_flop_counts", "tenprod", [=](const VerifyConfig& c) { return checks::cgtp_flop_counts(q(c) ? 6 : 10); }},
      {"selection_rule_iff", "rules", [=](const VerifyConfig& c) { return checks::selection_iff(q(c) ? 3 : 6); }},
      {"completeness", "rules", [=](const VerifyConfig& c) { return checks::completeness(q(c) ? 6 : 10); }},
      {"interactable_search", "rules", [=](const VerifyConfig& c) { return checks::interactable_search(q(c) ? 4 : 8); }},
      {"gtp_exclusion", "rules", [=](const VerifyConfig& c) { return checks::gtp_exclusion(q(c) ? 4 : 6); }},
      {"expressivity", "rules", [=](const VerifyConfig&) { return checks::expressivity(64); }},
      {"bench_flop_counts", "bench", [=](const VerifyConfig& c) { return checks::bench_counts(q(c) ? 4 : 8); }},
  };
  return list;
}

VerifyReport run_verify(const VerifyConfig& cfg, const std::string& filter,
                        const std::function<void(const CheckResult&)>& progress) {
  VerifyReport report;
  for (const auto& c : verify_checks()) {
    if (!filter.empty() && c.name.find(filter) == std::string::npos) continue;
    CheckResult r;
    try {
      r = c.run(cfg);
    } catch (const std::exception& e) {
      r.name = c.name;
      r.module = c.module;
      r.passed = false;
      r.failure = std::string("exception: ") + e.what();
    }
    if (progress) progress(r);
    report.checks.push_back(std::move(r));
  }
  return report;
}

std::string report_json(const VerifyReport& report) {
  nlohmann::json j;
  j["passed"] = report.passed();
  j["checks"] = nlohmann::json::array();
  for (const auto& c : report.checks) {
    nlohmann::json e;
    e["name"] = c.name;
    e["module"] = c.module;
    e["max_deviation"] = c.max_deviation;
    e["tolerance"] = c.tolerance;
    e["cases"] = c.cases;
    e["passed"] = c.passed;
    e["failure"] = c.failure;
    e["seconds"] = c.seconds;
    j["checks"].push_back(std::move(e));
  }
  return canonical_json(j);
}

}  // namespace sphtp
