#include <cmath>
#include <initializer_list>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>

#include "racah.hpp"
#include "sphtp/angular.hpp"

namespace sphtp {

namespace {

bool rows_and_columns_couple(const NineJKey& k) {
  for (int i = 0; i < 3; ++i) {
    if (!triangle(k(i, 0), k(i, 1), k(i, 2))) return false;
    if (!triangle(k(0, i), k(1, i), k(2, i))) return false;
  }
  return true;
}

// Contracts
//   <(j1 l1)s1, (j2 l2)s2, (s1 s2)s3 | (j1 j2)j3, (l1 l2)l3, (j3 l3)s3>
// over all magnetic labels at fixed total projection M = 0. Each CG is
// sqrt(T * F F F) * S; every (j, m) pair occurs in exactly two of the six
// coefficients, so the F factors leave the square root and the sum is rational:
//   overlap = sqrt(prod T) * sum_m G1 G2 G6 S3 S4 S5
// with G = S * F F F attached to the three coefficients that cover each pair once.
ExactRational contract_9j(const NineJKey& k) {
  const int j1 = k(0, 0), l1 = k(0, 1), s1 = k(0, 2);
  const int j2 = k(1, 0), l2 = k(1, 1), s2 = k(1, 2);
  const int j3 = k(2, 0), l3 = k(2, 1), s3 = k(2, 2);
  constexpr int big_m = 0;

  mpq_class sum = 0;
  for (int m1 = -j1; m1 <= j1; ++m1) {
    for (int n1 = -l1; n1 <= l1; ++n1) {
      const int mu1 = m1 + n1;
      const int mu2 = big_m - mu1;
      if (std::abs(mu1) > s1 || std::abs(mu2) > s2) continue;
      const mpq_class& g1 = detail::racah_weighted(j1, m1, l1, n1, s1, mu1);
      if (sgn(g1) == 0) continue;
      const mpq_class s3v = detail::racah_sum(s1, mu1, s2, mu2, s3, big_m);
      if (sgn(s3v) == 0) continue;
      for (int m2 = -j2; m2 <= j2; ++m2) {
        const int n2 = mu2 - m2;
        const int mu3 = m1 + m2;
        const int nu3 = n1 + n2;
        if (std::abs(n2) > l2 || std::abs(mu3) > j3 || std::abs(nu3) > l3) continue;
        const mpq_class& g2 = detail::racah_weighted(j2, m2, l2, n2, s2, mu2);
        if (sgn(g2) == 0) continue;
        const mpq_class& g6 = detail::racah_weighted(j3, mu3, l3, nu3, s3, big_m);
        if (sgn(g6) == 0) continue;
        const mpq_class s4 = detail::racah_sum(j1, m1, j2, m2, j3, mu3);
        if (sgn(s4) == 0) continue;
        const mpq_class s5 = detail::racah_sum(l1, n1, l2, n2, l3, nu3);
        if (sgn(s5) == 0) continue;
        sum += g1 * g2 * g6 * s3v * s4 * s5;
      }
    }
  }
  if (sgn(sum) == 0) return {};

  const mpq_class roots = detail::triangle_factor(j1, l1, s1) * detail::triangle_factor(j2, l2, s2) *
                          detail::triangle_factor(s1, s2, s3) * detail::triangle_factor(j1, j2, j3) *
                          detail::triangle_factor(l1, l2, l3) * detail::triangle_factor(j3, l3, s3);
  const mpq_class norm((2 * s1 + 1) * (2 * s2 + 1) * (2 * j3 + 1) * (2 * l3 + 1));
  return ExactRational::from_root(sum, roots / norm);
}

struct NineJCache {
  std::shared_mutex mutex;
  std::map<NineJKey, ExactRational> map;
};

NineJCache& ninej_cache() {
  static NineJCache cache;
  return cache;
}

long double log_fact(int n) { return std::lgamma(static_cast<long double>(n) + 1.0L); }

// pref * sqrt( prod(linear) * prod(fnum!) / ((3 if third) * prod(fden!)) ).
// A negative argument in fden is 1/inf and yields zero.
double closed_form(double pref, std::initializer_list<int> linear, std::initializer_list<int> fnum,
                   std::initializer_list<int> fden, bool third = true) {
  if (pref == 0.0) return 0.0;
  for (int d : fden) {
    if (d < 0) return 0.0;
  }
  long double lg = third ? -std::log(3.0L) : 0.0L;
  for (int x : linear) {
    if (x == 0) return 0.0;
    if (x < 0) throw std::logic_error("wigner_9j_spin1: negative linear factor on a coupling grid");
    lg += std::log(static_cast<long double>(x));
  }
  for (int n : fnum) {
    if (n < 0) throw std::logic_error("wigner_9j_spin1: negative factorial on a coupling grid");
    lg += log_fact(n);
  }
  for (int d : fden) lg -= log_fact(d);
  return static_cast<double>(static_cast<long double>(pref) * std::exp(0.5L * lg));
}

}  // namespace

ExactRational wigner_9j(const NineJKey& key) {
  for (int x : key.v) {
    if (x < 0) throw std::invalid_argument("wigner_9j: negative entry");
  }
  if (!rows_and_columns_couple(key)) return {};
  auto& cache = ninej_cache();
  {
    std::shared_lock lock(cache.mutex);
    if (auto it = cache.map.find(key); it != cache.map.end()) return it->second;
  }
  ExactRational value = contract_9j(key);
  std::unique_lock lock(cache.mutex);
  return cache.map.try_emplace(key, std::move(value)).first->second;
}

double wigner_9j_spin1(int a, int lam, int b, int mu, int c, int nu) {
  auto unit = [](int x) { return x >= -1 && x <= 1; };
  if (!unit(lam) || !unit(mu) || !unit(nu)) {
    throw std::invalid_argument("wigner_9j_spin1: shifts must be in {-1, 0, 1}");
  }
  if (a < 0 || b < 0 || c < 0 || a + lam < 0 || b + mu < 0 || c + nu < 0) {
    throw std::invalid_argument("wigner_9j_spin1: negative entry");
  }
  const NineJKey grid{{a + lam, a, 1, b + mu, b, 1, c + nu, c, 1}};
  if (!rows_and_columns_couple(grid)) return 0.0;

  const int s = a + b + c;
  const int A = 2 * a, B = 2 * b, C = 2 * c;
  switch ((lam + 1) * 9 + (mu + 1) * 3 + (nu + 1)) {
    // nu = +1
    case 2 * 9 + 2 * 3 + 2:  // (1, 1)
      return closed_form(1, {s - C + 1, s - B + 1, s - A + 1}, {s + 4, A, B, C},
                         {s + 1, A + 3, B + 3, C + 3});
    case 2 * 9 + 1 * 3 + 2:  // (1, 0)
      return closed_form(c - a, {2}, {s + 3, s - B + 2, A, B - 1, C},
                         {s + 1, s - B, A + 3, B + 2, C + 3});
    case 2 * 9 + 0 * 3 + 2:  // (1, -1)
      return closed_form(-1, {s + 2, s - C, s - A}, {s - B + 3, A, B - 2, C},
                         {s - B, A + 3, B + 1, C + 3});
    case 1 * 9 + 2 * 3 + 2:  // (0, 1)
      return closed_form(b - c, {2}, {s + 3, s - A + 2, A - 1, B, C},
                         {s + 1, s - A, A + 2, B + 3, C + 3});
    case 1 * 9 + 1 * 3 + 2:  // (0, 0)
      return closed_form(2 * (c + 1), {s + 2, s - C, s - B + 1, s - A + 1}, {A - 1, B - 1, C},
                         {A + 2, B + 2, C + 3});
    case 1 * 9 + 0 * 3 + 2:  // (0, -1)
      return closed_form(-(c + b + 1), {2}, {s - C, s - B + 2, A - 1, B - 2, C},
                         {s - C - 2, s - B, A + 2, B + 1, C + 3});
    case 0 * 9 + 2 * 3 + 2:  // (-1, 1)
      return closed_form(-1, {s + 2, s - C, s - B}, {s - A + 3, A - 2, B, C},
                         {s - A, A + 1, B + 3, C + 3});
    case 0 * 9 + 1 * 3 + 2:  // (-1, 0)
      return closed_form(a + c + 1, {2}, {s - C, s - A + 2, A - 2, B - 1, C},
                         {s - C - 2, s - A, A + 1, B + 2, C + 3});
    case 0 * 9 + 0 * 3 + 2:  // (-1, -1)
      return closed_form(-1, {s + 1, s - B + 1, s - A + 1}, {s - C, A - 2, B - 2, C},
                         {s - C - 3, A + 1, B + 1, C + 3});
    // nu = 0
    case 2 * 9 + 2 * 3 + 1:
      return closed_form(a - b, {2}, {s + 3, s - C + 2, A, B, C - 1},
                         {s + 1, s - C, A + 3, B + 3, C + 2});
    case 2 * 9 + 1 * 3 + 1:
      return closed_form(2 * (a + 1), {s + 2, s - C + 1, s - B + 1, s - A}, {A, B - 1, C - 1},
                         {A + 3, B + 2, C + 2});
    case 2 * 9 + 0 * 3 + 1:
      return closed_form(a + b + 1, {2}, {s - B + 2, s - A, A, B - 2, C - 1},
                         {s - B, s - A - 2, A + 3, B + 1, C + 2});
    case 1 * 9 + 2 * 3 + 1:
      return closed_form(2 * (b + 1), {s + 2, s - C + 1, s - B, s - A + 1}, {A - 1, B, C - 1},
                         {A + 2, B + 3, C + 2});
    case 1 * 9 + 1 * 3 + 1:
      return 0.0;
    case 1 * 9 + 0 * 3 + 1:
      return closed_form(2 * b, {s + 1, s - C, s - B + 1, s - A}, {A - 1, B - 2, C - 1},
                         {A + 2, B + 1, C + 2});
    case 0 * 9 + 2 * 3 + 1:
      return closed_form(-(a + b + 1), {2}, {s - B, s - A + 2, A - 2, B, C - 1},
                         {s - B - 2, s - A, A + 1, B + 3, C + 2});
    case 0 * 9 + 1 * 3 + 1:
      return closed_form(2 * a, {s + 1, s - C, s - B, s - A + 1}, {A - 2, B - 1, C - 1},
                         {A + 1, B + 2, C + 2});
    case 0 * 9 + 0 * 3 + 1:
      return closed_form(b - a, {2}, {s + 1, s - C, A - 2, B - 2, C - 1},
                         {s - 1, s - C - 2, A + 1, B + 1, C + 2});
    // nu = -1
    case 2 * 9 + 2 * 3 + 0:
      return closed_form(-1, {s + 2, s - B, s - A}, {s - C + 3, A, B, C - 2},
                         {s - C, A + 3, B + 3, C + 1});
    case 2 * 9 + 1 * 3 + 0:
      return closed_form(-(a + c + 1), {2}, {s - C + 2, s - A, A, B - 1, C - 2},
                         {s - C, s - A - 2, A + 3, B + 2, C + 1});
    case 2 * 9 + 0 * 3 + 0:
      return closed_form(-1, {s + 1, s - C + 1, s - B + 1}, {s - A, A, B - 2, C - 2},
                         {s - A - 3, A + 3, B + 1, C + 1});
    case 1 * 9 + 2 * 3 + 0:
      return closed_form(b + c + 1, {2}, {s - C + 2, s - B, A - 1, B, C - 2},
                         {s - C, s - B - 2, A + 2, B + 3, C + 1});
    case 1 * 9 + 1 * 3 + 0:
      return closed_form(2 * c, {s + 1, s - C + 1, s - B, s - A}, {A - 1, B - 1, C - 2},
                         {A + 2, B + 2, C + 1});
    case 1 * 9 + 0 * 3 + 0:
      return closed_form(c - b, {2}, {s + 1, s - A, A - 1, B - 2, C - 2},
                         {s - 1, s - A - 2, A + 2, B + 1, C + 1});
    case 0 * 9 + 2 * 3 + 0:
      return closed_form(-1, {s + 1, s - C + 1, s - A + 1}, {s - B, A - 2, B, C - 2},
                         {s - B - 3, A + 1, B + 3, C + 1});
    case 0 * 9 + 1 * 3 + 0:
      return closed_form(a - c, {2}, {s + 1, s - B, A - 2, B - 1, C - 2},
                         {s - 1, s - B - 2, A + 1, B + 2, C + 1});
    case 0 * 9 + 0 * 3 + 0:
      return closed_form(1, {s - C, s - B, s - A}, {s + 1, A - 2, B - 2, C - 2},
                         {s - 2, A + 1, B + 1, C + 1});
    default:
      break;
  }
  throw std::logic_error("wigner_9j_spin1: unreachable");
}

}  // namespace sphtp
