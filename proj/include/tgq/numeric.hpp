#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>

#include "tgq/errors.hpp"

namespace tgq {

// All integer quantities are unbounded; tower orders overflow 64 bits fast.
using Int = mpz_class;

// Canonical reduced fraction with positive denominator (gmp keeps arithmetic
// results canonical; construction goes through make_rational).
using Rational = mpq_class;

inline Int gcd(const Int& a, const Int& b) {
  Int r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline Int gcd(const Int& a, const Int& b, const Int& c) {
  return gcd(gcd(a, b), c);
}

inline Int lcm(const Int& a, const Int& b) {
  Int r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline Int lcm(const Int& a, const Int& b, const Int& c) {
  return lcm(lcm(a, b), c);
}

// d | a
inline bool divides(const Int& d, const Int& a) {
  if (d == 0) return a == 0;
  return mpz_divisible_p(a.get_mpz_t(), d.get_mpz_t()) != 0;
}

inline Rational make_rational(const Int& num, const Int& den) {
  if (den == 0) throw InconsistentData("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

inline unsigned long to_ulong_checked(const Int& v, const std::string& what) {
  if (v < 0 || !v.fits_ulong_p())
    throw TowerTooLarge(what + " " + v.get_str() + " exceeds machine range");
  return v.get_ui();
}

// base^exp, refusing results above max_bits bits.
inline Int checked_pow(const Int& base, const Int& exp, std::size_t max_bits) {
  if (exp < 0) throw InconsistentData("negative exponent");
  if (exp == 0) return Int(1);
  if (base == 0) return Int(0);
  unsigned long e = to_ulong_checked(exp, "exponent");
  if (base != 1 && base != -1) {
    std::size_t base_bits = mpz_sizeinbase(base.get_mpz_t(), 2);
    if (e > max_bits || base_bits > max_bits / e)
      throw TowerTooLarge("power " + base.get_str() + "^" + exp.get_str() +
                          " exceeds the size guard");
  }
  Int r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

inline std::string to_string(const Int& v) { return v.get_str(); }

inline std::string to_string(const Rational& q) {
  if (is_integer(q)) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

}  // namespace tgq
