#pragma once

#include "pararc/polyalg/exact_poly.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pararc::percurve {

struct MembershipResult {
    bool member = false;
    // Recovered (a, b) with poly = (z^d + a)^d + b.
    std::optional<std::pair<Complex, Complex>> witness;
    std::string reason;
};

// Decides whether a monic centered polynomial of degree d^2 (coefficients in
// ascending order) has exactly d+1 distinct critical points, each of local
// degree d, with d of them sharing one image.
MembershipResult validate_family_membership(const std::vector<Complex>& coeffs,
                                            double tolerance = 1e-8);
// Univariate polynomial in its single variable.
MembershipResult validate_family_membership(const polyalg::ExactPoly& poly,
                                            double tolerance = 1e-8);

} // namespace pararc::percurve
