#pragma once

#include "pararc/polyalg/exact_poly.hpp"

#include <string>

namespace pararc::polyalg {

struct DegreeCaps {
    int z_degree = 40;
    int parameter_total_degree = 64;
};

// n-fold composition p o p o ... o p in the distinguished variable.
// Throws ResourceError if deg_var(p)^n or the parameter degree of the
// result exceeds the caps.
ExactPoly iterate(const ExactPoly& p, int n, const std::string& var = "z",
                  const DegreeCaps& caps = {});

enum class ResultantMethod {
    Automatic,
    Subresultant, // subresultant PRS over Q[params]
    Bareiss,      // fraction-free Sylvester determinant
    Interpolation // integer nodes + exact univariate resultants
};

// Res_var(p, q). A factor of degree 0 in var gives the usual power
// convention Res(c, q) = c^deg(q).
ExactPoly resultant(const ExactPoly& p, const ExactPoly& q, const std::string& var,
                    ResultantMethod method = ResultantMethod::Automatic);

// Evaluation-interpolation resultant. node_budget is the number of
// candidate integer nodes allowed per parameter; it must cover the
// Sylvester degree bound plus one, and any node where a leading
// coefficient vanishes is skipped.
ExactPoly resultant_by_interpolation(const ExactPoly& p, const ExactPoly& q,
                                     const std::string& var, int node_budget = 1024);

// Per-parameter degree bounds of Res_var(p, q) from the Sylvester shape.
std::map<std::string, int> resultant_degree_bounds(const ExactPoly& p, const ExactPoly& q,
                                                   const std::string& var);

struct Discriminant {
    ExactPoly poly;
    // false when the leading coefficient was not a unit and the raw
    // resultant Res(p, dp/dvar) was returned instead.
    bool normalized = true;
};

// (-1)^{d(d-1)/2} Res_var(p, p') / lc(p).
Discriminant discriminant(const ExactPoly& p, const std::string& var,
                          ResultantMethod method = ResultantMethod::Automatic);

// Exact multivariate division; throws DomainError if q does not divide p.
ExactPoly exact_divide(const ExactPoly& p, const ExactPoly& q);
bool divides(const ExactPoly& q, const ExactPoly& p);

// Multivariate gcd over Q, normalized to a primitive integer polynomial with
// positive leading coefficient.
ExactPoly gcd(const ExactPoly& p, const ExactPoly& q);

// p / gcd(p, dp/dx_1, ..., dp/dx_k): every irreducible factor once.
ExactPoly squarefree_part(const ExactPoly& p);

} // namespace pararc::polyalg
