#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace qcorr {

using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

/// 2^-k as an exact rational.
inline Rational inv_pow2(unsigned k) {
  mpz_class den = 1;
  den <<= k;
  Rational q(mpz_class(1), den);
  return q;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

}  // namespace qcorr
