#pragma once

// Pieces of the Racah closed form shared by the CG and 9j code.
//
//   C^{j3 m3}_{j1 m1 j2 m2} = sqrt(T(j1,j2,j3) * F(j1,m1) F(j2,m2) F(j3,m3)) * S
//
// with T the m-independent triangle factor, F(j,m) = (j+m)!(j-m)! and S the
// alternating Racah sum.

#include <gmpxx.h>

#include "sphtp/exact.hpp"

namespace sphtp::detail {

/// (2 j3 + 1) (j1+j2-j3)! (j1-j2+j3)! (-j1+j2+j3)! / (j1+j2+j3+1)!
mpq_class triangle_factor(int j1, int j2, int j3);

inline mpz_class magnetic_factor(int j, int m) { return factorial(j + m) * factorial(j - m); }

/// The Racah sum S; zero when the labels cannot couple.
mpq_class racah_sum(int j1, int m1, int j2, int m2, int j3, int m3);

/// S * F(j1,m1) F(j2,m2) F(j3,m3), memoized. Used by the 9j contraction.
const mpq_class& racah_weighted(int j1, int m1, int j2, int m2, int j3, int m3);

}  // namespace sphtp::detail
