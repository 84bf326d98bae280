#include "sphtp/exact.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace sphtp {

namespace {

constexpr int kMaxFactorial = 1024;

const std::vector<mpz_class>& factorial_table() {
  static const std::vector<mpz_class> table = [] {
    std::vector<mpz_class> t(kMaxFactorial + 1);
    t[0] = 1;
    for (int i = 1; i <= kMaxFactorial; ++i) t[i] = t[i - 1] * i;
    return t;
  }();
  return table;
}

}  // namespace

const mpz_class& factorial(int n) {
  if (n < 0 || n > kMaxFactorial) {
    throw std::out_of_range("factorial argument out of range: " + std::to_string(n));
  }
  return factorial_table()[static_cast<std::size_t>(n)];
}

std::optional<mpq_class> exact_sqrt(const mpq_class& r) {
  if (sgn(r) < 0) return std::nullopt;
  const mpz_class& num = r.get_num();
  const mpz_class& den = r.get_den();
  if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t())) {
    return std::nullopt;
  }
  mpz_class a, b;
  mpz_sqrt(a.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(b.get_mpz_t(), den.get_mpz_t());
  mpq_class out(a, b);
  out.canonicalize();
  return out;
}

ExactRational ExactRational::from_signed_square(int sign, const mpq_class& ratio) {
  if (sgn(ratio) < 0) throw std::domain_error("negative radicand");
  ExactRational out;
  if (sign == 0 || sgn(ratio) == 0) return out;
  mpq_class r = ratio;
  r.canonicalize();
  out.sign_ = sign > 0 ? 1 : -1;
  out.p_ = r.get_num();
  out.q_ = r.get_den();
  return out;
}

ExactRational ExactRational::from_root(const mpq_class& coeff, const mpq_class& radicand) {
  return from_signed_square(sgn(coeff), coeff * coeff * radicand);
}

mpq_class ExactRational::square() const {
  mpq_class r(p_, q_);
  r.canonicalize();
  return r;
}

double ExactRational::to_double() const {
  if (sign_ == 0) return 0.0;
  // Split exponents so huge numerators and denominators do not overflow.
  long ep = 0, eq = 0;
  const double mp = mpz_get_d_2exp(&ep, p_.get_mpz_t());
  const double mq = mpz_get_d_2exp(&eq, q_.get_mpz_t());
  long e = ep - eq;
  double m = mp / mq;
  if (e % 2 != 0) {
    m *= 2.0;
    e -= 1;
  }
  return sign_ * std::ldexp(std::sqrt(m), static_cast<int>(e / 2));
}

std::string ExactRational::to_string() const {
  return std::to_string(sign_) + "*sqrt(" + p_.get_str() + "/" + q_.get_str() + ")";
}

ExactRational ExactRational::operator-() const {
  ExactRational out = *this;
  out.sign_ = -sign_;
  return out;
}

ExactRational operator*(const ExactRational& a, const ExactRational& b) {
  if (a.is_zero() || b.is_zero()) return {};
  return ExactRational::from_signed_square(a.sign_ * b.sign_, a.square() * b.square());
}

RadicalSum& RadicalSum::operator+=(const ExactRational& term) {
  if (term.is_zero()) return *this;
  if (!radicand_) {
    radicand_ = term.square();
    coeff_ += term.sign();
    return *this;
  }
  const auto ratio = exact_sqrt(term.square() / *radicand_);
  if (!ratio) throw std::domain_error("RadicalSum: incommensurable radicals");
  coeff_ += term.sign() * *ratio;
  return *this;
}

ExactRational RadicalSum::value() const {
  if (!radicand_) return {};
  return ExactRational::from_root(coeff_, *radicand_);
}

}  // namespace sphtp
