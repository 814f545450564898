#pragma once

#include "pararc/percurve/curve.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pararc::percurve {

// A linear form sum coeffs[i] * x_i in the local coordinates at a point.
struct LinearFactor {
    std::vector<Complex> coeffs;
    int multiplicity = 1;
};

struct TangentCone {
    // Degree of the lowest nonvanishing homogeneous part (0 if h(p) != 0).
    int degree = 0;
    std::vector<LinearFactor> factors;
    // Ternary forms: rank of the span of the (m-1)-th partial derivatives.
    int rank = 0;
    // Jet vanished up to the inspection limit.
    bool unclassified = false;
    // Set when the homogeneous part was computed in exact arithmetic.
    bool exact = false;
    std::string description;
};

struct SingularPoint {
    std::vector<Complex> location;
    std::optional<std::vector<Rational>> exact_location;
    // Minimal polynomials of irrational coordinates, e.g. "16a^2 - 12a + 9".
    std::string exact_note;
    double residual_h = 0.0;
    double residual_grad = 0.0;
    int multiplicity = 0;
    TangentCone tangent_cone;
    std::optional<int> milnor;
    std::string label;
    std::string stratum;
    Complex hessian_det{0.0, 0.0};
};

struct Region {
    std::vector<Complex> center;
    double radius = 1.0;
};

struct SingularOptions {
    // Relative residual bound for |h| and |grad h|.
    double tolerance = 1e-10;
    double merge_radius = 1e-6;
    // Numeric region search: number of Gauss-Newton starts and the cap on
    // elimination roots before a resource error is raised.
    int starts = 400;
    int root_budget = 400;
    std::uint64_t seed = 20240601;
    // Total degree above which two-parameter curves are also searched
    // numerically instead of by elimination.
    int elimination_degree_limit = 12;
    bool classify = true;
};

// Singular points of a square-free curve in 2 or 3 parameters. Two-parameter
// curves use exact elimination (unless a region is given or the degree is
// above the limit); three-parameter curves are searched numerically in the
// region. Results are classified and sorted lexicographically.
std::vector<SingularPoint> singular_points(const PlaneCurve& curve,
                                           const std::optional<Region>& region = std::nullopt,
                                           const SingularOptions& opts = {});

// Lowest nonvanishing jet at a point and its factorization.
TangentCone tangent_cone(const PlaneCurve& curve, const std::vector<Complex>& point,
                         double tolerance = 1e-7);
TangentCone tangent_cone_exact(const PlaneCurve& curve, const std::vector<Rational>& point);

enum class MilnorMethod { Intersection, Morsification };

// Milnor number of a two-parameter curve at a point; 0 at non-singular points.
// Intersection: multiplicity of the point's first coordinate in
// Res_b(h_a, h_b) after a fiber check (with up to three shears).
int milnor_number(const PlaneCurve& curve, const std::vector<Complex>& point,
                  MilnorMethod method = MilnorMethod::Intersection, double tolerance = 1e-8);
int milnor_number_exact(const PlaneCurve& curve, const std::vector<Rational>& point);

struct CriticalPoint {
    std::vector<Complex> location;
    std::optional<std::vector<Rational>> exact_location;
    Complex hessian_det{0.0, 0.0};
    Complex value{0.0, 0.0};
    bool nondegenerate = true;
};

// All critical points (h_a = h_b = 0) of a two-parameter polynomial.
std::vector<CriticalPoint> critical_points(const ExactPoly& h, const SingularOptions& opts = {});

struct MorsificationStep {
    Rational r;
    std::vector<CriticalPoint> points;
};

struct MorsificationTrack {
    std::vector<MorsificationStep> steps;
    // trajectories[j][k] indexes steps[k].points for trajectory j (-1 if lost).
    std::vector<std::vector<int>> trajectories;
    bool collision = false;
};

// Default ladder r = 9/10, 99/100, 999/1000, 9999/10000.
std::vector<Rational> default_r_ladder();

// Critical points of h_r within radius of target for each r on the path.
MorsificationTrack track_morsification(const FamilySpec& family, int n,
                                       const std::vector<Rational>& r_path,
                                       const std::vector<Complex>& target, double radius);

// Number of critical points of h_r within radius of the point at the last
// ladder rung; used as the morsification Milnor number.
int milnor_by_morsification(const FamilySpec& family, int n, const std::vector<Complex>& point,
                            double radius = 0.1, const std::vector<Rational>& ladder = {});

// (D-1)(D-2)/2 - sum of delta invariants (node, cusp: 1; ordinary triple
// point: 3).
int degree_genus(const PlaneCurve& curve, const std::vector<SingularPoint>& singular);
int degree_genus(int total_degree, const std::vector<SingularPoint>& singular);

struct StratumResult {
    std::string label; // "V0", "V1", "V2", "nonsingular"
    bool subresultant_condition = false;
};

StratumResult quartic_strata(const std::vector<Rational>& point);
StratumResult quartic_strata(const std::vector<Complex>& point, double tolerance = 1e-8);

// Exact sample points of the quartic strata: (a, 1, a^2/4) on V1 and
// (-3m^2/2, 1-m^3, -3m^4/16) on V2 for small nonzero rationals.
std::vector<std::vector<Rational>> quartic_v1_samples(int count);
std::vector<std::vector<Rational>> quartic_v2_samples(int count);

// Build a classified singular point at an exact rational location.
SingularPoint classify_exact(const PlaneCurve& curve, const std::vector<Rational>& point);
// Build a classified singular point at a numeric location.
SingularPoint classify_numeric(const PlaneCurve& curve, const std::vector<Complex>& point,
                               const SingularOptions& opts = {});

nlohmann::json singular_report(const std::vector<SingularPoint>& points);

} // namespace pararc::percurve
