#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

namespace sphtp {

/// Arbitrary-precision n!. Values are computed once and shared.
const mpz_class& factorial(int n);

/// A real number of the form sign * sqrt(p / q) with gcd(p, q) = 1.
///
/// Clebsch-Gordan coefficients and Wigner 9j symbols of integer angular
/// momenta are all of this form, which lets zero tests be exact.
class ExactRational {
 public:
  ExactRational() = default;

  /// sign(coeff) * sqrt(coeff^2 * radicand). `radicand` must be >= 0.
  static ExactRational from_root(const mpq_class& coeff, const mpq_class& radicand = 1);
  /// sign * sqrt(ratio); sign is forced to 0 when ratio == 0.
  static ExactRational from_signed_square(int sign, const mpq_class& ratio);
  static ExactRational one() { return from_signed_square(1, 1); }

  int sign() const { return sign_; }
  const mpz_class& p() const { return p_; }
  const mpz_class& q() const { return q_; }
  bool is_zero() const { return sign_ == 0; }
  /// p / q, i.e. the value squared.
  mpq_class square() const;

  double to_double() const;
  /// `sign*sqrt(p/q)`, e.g. `-1*sqrt(1/27)`.
  std::string to_string() const;

  ExactRational operator-() const;
  friend ExactRational operator*(const ExactRational& a, const ExactRational& b);
  friend bool operator==(const ExactRational& a, const ExactRational& b) {
    return a.sign_ == b.sign_ && a.p_ == b.p_ && a.q_ == b.q_;
  }

 private:
  int sign_ = 0;
  mpz_class p_ = 0;
  mpz_class q_ = 1;
};

/// Exact accumulator for sums of ExactRational values that share a common
/// square-free radical, as happens in CG orthogonality sums and recoupling
/// contractions. Adding a term whose radical differs from the running one
/// throws std::domain_error.
class RadicalSum {
 public:
  RadicalSum& operator+=(const ExactRational& term);
  ExactRational value() const;

 private:
  std::optional<mpq_class> radicand_;
  mpq_class coeff_ = 0;
};

/// Exact square root of a non-negative rational, if it is a perfect square.
std::optional<mpq_class> exact_sqrt(const mpq_class& r);

}  // namespace sphtp
