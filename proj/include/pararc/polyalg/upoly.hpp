#pragma once

#include "pararc/polyalg/exact_poly.hpp"

#include <utility>
#include <vector>

namespace pararc::polyalg {

// Dense univariate polynomial over Q, coefficient i multiplies x^i.
// Normalized: no trailing zero coefficients (the zero polynomial is empty).
using UPoly = std::vector<Rational>;

namespace upoly {

int degree(const UPoly& p);
void trim(UPoly& p);
UPoly add(const UPoly& a, const UPoly& b);
UPoly sub(const UPoly& a, const UPoly& b);
UPoly mul(const UPoly& a, const UPoly& b);
UPoly scale(const UPoly& a, const Rational& c);
std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b);
UPoly derivative(const UPoly& p);
UPoly monic(const UPoly& p);
UPoly gcd(const UPoly& a, const UPoly& b);
Rational eval(const UPoly& p, const Rational& x);
Complex eval(const UPoly& p, Complex x);

// Squarefree factorization p = c * prod f_i^i (Yun); entry (f_i, i) for
// every nonconstant f_i.
std::vector<std::pair<UPoly, int>> squarefree_decomposition(const UPoly& p);
// Multiplicity of the root x of p (0 if not a root).
int root_multiplicity(const UPoly& p, const Rational& x);

// Rational roots (without multiplicity), each verified by exact
// evaluation. Candidates come from continued-fraction convergents of the
// real numeric roots with denominators bounded by the leading coefficient.
std::vector<Rational> rational_roots(const UPoly& p);

std::vector<Complex> complex_roots(const UPoly& p);
// Coefficients divided by a common power of two so huge values stay finite;
// the result is proportional to p, not equal to it.
std::vector<Complex> to_complex_scaled(const UPoly& p);

UPoly from_poly(const ExactPoly& p, const std::string& var);
ExactPoly to_poly(const UPoly& p, const std::vector<std::string>& vars, const std::string& var);

} // namespace upoly
} // namespace pararc::polyalg
