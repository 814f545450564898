#pragma once

#include "pararc/percurve/family.hpp"
#include "pararc/polyalg/algebra.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace pararc::percurve {

// Per_n(r) of a family: a polynomial in the family parameters (and in the
// multiplier symbol when r is symbolic).
struct PlaneCurve {
    FamilySpec family;
    int period = 1;
    Multiplier multiplier;
    ExactPoly poly;
    bool squarefree = false;
    // s with poly == s * reference, when a reference polynomial is known.
    std::optional<Rational> scalar_vs_paper;
    // Lower-period factor divided out for n >= 2 (constant 1 if none).
    std::optional<ExactPoly> removed_factor;

    // Variables of poly other than z, in family order (then r if symbolic).
    std::vector<std::string> params() const;
};

struct CurveOptions {
    // Exact elimination is only attempted up to this period.
    int max_exact_period = 2;
    polyalg::DegreeCaps caps;
    // Directory holding reference polynomials; empty disables the lookup.
    std::string reference_dir = std::string(PARARC_DATA_DIR) + "/reference";
};

// r == 1: discriminant of f^n(z) - z. Otherwise Res_z(f^n(z) - z, (f^n)'(z) - r).
// The result is square-free; for n >= 2 the factors belonging to fixed
// points of multiplier +1 and -1 are divided out and reported.
PlaneCurve per_curve(const FamilySpec& family, int n, const Multiplier& r,
                     const CurveOptions& opts = {});

// Reference polynomial for (family, n, r) if one ships in reference_dir.
// A symbolic-r reference is specialized when r is an exact rational.
std::optional<ExactPoly> reference_polynomial(const FamilySpec& family, int n, const Multiplier& r,
                                              const std::string& reference_dir);

// Wrap an arbitrary polynomial as a curve (for tests and degree bookkeeping).
PlaneCurve curve_from_poly(const ExactPoly& poly);

std::vector<Complex> gradient(const PlaneCurve& curve, const std::vector<Complex>& point);
std::vector<Rational> gradient_exact(const PlaneCurve& curve, const std::vector<Rational>& point);

// {"family", "d", "n", "r", "poly", "scalar_vs_paper", "removed_factor", "squarefree"}
nlohmann::json curve_report(const PlaneCurve& curve);

} // namespace pararc::percurve
