#pragma once

#include <gmpxx.h>

#include <complex>
#include <string>

namespace pararc {

// GMP keeps mpq_class canonical (lowest terms, positive denominator) after
// every arithmetic operation; values built from strings must be
// canonicalized explicitly, which parse_rational does.
using Rational = mpq_class;
using BigInt = mpz_class;
using Complex = std::complex<double>;

Rational parse_rational(const std::string& text);
std::string to_string(const Rational& q);
double to_double(const Rational& q);
Complex to_complex(const Rational& q);

// Integer power with non-negative exponent.
Rational pow(const Rational& base, unsigned exponent);

} // namespace pararc
