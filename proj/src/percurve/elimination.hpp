#pragma once

// Common zeros of a finite system of bivariate polynomials by resultant
// elimination, with exact extraction of rational coordinates.

#include "local.hpp"
#include "pararc/polyalg/upoly.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pararc::percurve::detail {

struct Solution {
    std::vector<Complex> location;
    std::optional<std::vector<Rational>> exact;
    // Minimal polynomial of an irrational first coordinate, when quadratic.
    std::optional<ExactPoly> x_minpoly;
};

struct EliminationOptions {
    double tolerance = 1e-10;
    double merge_radius = 1e-6;
    int root_budget = 400;
};

// eqs must share the same two-variable list (x, y). Throws
// NonIsolatedSingularityError if the zero set is not finite.
std::vector<Solution> solve_bivariate(const std::vector<ExactPoly>& eqs,
                                      const EliminationOptions& opts);

// Univariate eliminant in vars[0]: gcd of the nonzero pairwise resultants
// with respect to vars[1]. Returns the zero polynomial if all vanish.
ExactPoly eliminant(const std::vector<ExactPoly>& eqs, const std::string& keep,
                    const std::string& eliminate);

// Least-squares Gauss-Newton polish of a square or overdetermined system.
// Returns the maximum relative residual at the final point.
double gauss_newton(const std::vector<CompiledPoly>& f,
                    const std::vector<std::vector<CompiledPoly>>& jac, std::vector<Complex>& x,
                    int max_iter = 60);

double max_relative_residual(const std::vector<CompiledPoly>& f, const std::vector<Complex>& x);

// Monic quadratic with rational coefficients vanishing at x0 and dividing f,
// if one exists.
std::optional<polyalg::UPoly> quadratic_minimal_poly(const polyalg::UPoly& f, Complex x0);

bool lex_less(const std::vector<Complex>& a, const std::vector<Complex>& b);

} // namespace pararc::percurve::detail
