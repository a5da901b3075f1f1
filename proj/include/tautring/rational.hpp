#ifndef TAUTRING_RATIONAL_HPP
#define TAUTRING_RATIONAL_HPP

#include <gmpxx.h>

#include <string>

#include "tautring/error.hpp"

namespace tautring {

using Rational = mpq_class;
using Integer = mpz_class;

/// Always "p/q", even for integers, so the format is uniform.
inline std::string to_fraction_string(const Rational& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline Rational parse_fraction(const std::string& s) {
  Rational r;
  if (s.empty() || s.find_first_of(".eE") != std::string::npos || r.set_str(s, 10) != 0)
    throw InvalidInput("not a fraction string: '" + s + "'");
  if (r.get_den() == 0) throw InvalidInput("zero denominator: '" + s + "'");
  r.canonicalize();
  return r;
}

inline Integer factorial(long n) {
  Integer f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
  return f;
}

inline Integer binomial(long n, long k) {
  if (k < 0 || k > n) return 0;
  Integer b;
  mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return b;
}

}  // namespace tautring

#endif  // TAUTRING_RATIONAL_HPP
