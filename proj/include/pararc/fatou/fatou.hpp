#pragma once

#include "pararc/polyalg/rational.hpp"

#include <nlohmann/json.hpp>

#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace pararc::fatou {

struct FatouConfig {
    // Cycle refinement: |P^k(z) - z| after Newton polishing.
    double cycle_tolerance = 1e-10;
    // Roots of P^k(z) - z whose multiplier is this close to 1 are parabolic.
    double multiplier_tolerance = 1e-4;
    // Relative size of the quadratic jet coefficient below which q = 2.
    double cusp_tolerance = 1e-6;
    // Petal acceptance: |alpha w| below petal_radius and arg(-alpha w)
    // within petal_angle of the attracting direction.
    double petal_radius = 0.05;
    double petal_angle = std::numbers::pi / 3.0;
    // Orbits are followed until |alpha w| drops below this before the
    // asymptotic expansion is evaluated.
    double asymptotic_radius = 0.01;
    // Number of power-series correction terms in the asymptotic expansion.
    int series_terms = 12;
    long max_iterations = 1000000;
    double escape_radius = 1e8;
    // Arc tracing: tolerance on the achieved height.
    double height_tolerance = 1e-11;
    // Arc speeds below this are flagged.
    double speed_threshold = 1e-4;
};

// P(z) = (z^d + a)^d + b. For the antiholomorphic map f(z) = conj(z)^d + c
// the second iterate f o f is P with a = conj(c), b = c, and c is kept.
struct MapParameter {
    int d = 2;
    Complex a{0.0, 0.0};
    Complex b{0.0, 0.0};
    std::optional<Complex> c;

    static MapParameter multicorn(int d, Complex c);
    static MapParameter biquadratic(int d, Complex a, Complex b);

    Complex P(Complex z) const;
    Complex dP(Complex z) const;
    // Antiholomorphic map; requires c.
    Complex f(Complex z) const;
};

struct ParabolicCycle {
    MapParameter param;
    int k = 1;
    // Orbit of the base point under P: points[i + 1] = P(points[i]).
    std::vector<Complex> points;
    // (P^k)'(points[0]).
    Complex multiplier{1.0, 0.0};
    // Number of petals of P^k at the base point.
    int q = 1;
    // P^k(z0 + w) = z0 + multiplier w + alpha w^2 + beta w^3 + ...
    Complex alpha{0.0, 0.0};
    Complex beta{0.0, 0.0};
    // max_i |P(points[i]) - points[i+1 mod k]|.
    double residual = 0.0;
};

// Parabolic cycle of exact period k of P (for the antiholomorphic family,
// an odd period k cycle of f). Throws NotParabolicError if none exists and
// NumericError if the jet is degenerate beyond two petals.
ParabolicCycle find_parabolic_cycle(const MapParameter& param, int k, const FatouConfig& cfg = {});

// Attracting Fatou coordinate of P^k at the base point, extended to the
// whole cycle of basins by Phi(P(z)) = Phi(z) + 1/k.
class FatouCoordinate {
  public:
    FatouCoordinate(ParabolicCycle cycle, const FatouConfig& cfg = {});

    Complex operator()(Complex z) const;
    // Asymptotic expansion at w = z - z0 for w deep in the petal.
    Complex asymptotic(Complex w) const;

    const ParabolicCycle& cycle() const { return cycle_; }
    Complex constant() const { return constant_; }
    FatouCoordinate shifted(Complex delta) const;
    // Same coordinate with Phi(z) = value.
    FatouCoordinate rebased(Complex z, Complex value = 0.0) const;
    // Residual offset mu in Phi(f^k(z)) = conj(Phi(z)) + 1/2 + i mu on probe
    // points, and the largest deviation from that relation.
    struct Symmetry {
        double mu = 0.0;
        double spread = 0.0;
        double real_defect = 0.0;
    };
    Symmetry antiholomorphic_symmetry() const;
    // Points of the attracting petal near the base point.
    std::vector<Complex> probe_points(int count) const;
    // min(1, |alpha|^2 / |beta|): shrinks the petal radii where the cubic
    // jet term competes with the quadratic one, near cusps.
    double petal_scale() const;

  private:
    ParabolicCycle cycle_;
    FatouConfig cfg_;
    Complex log_coeff_{0.0, 0.0};
    std::vector<Complex> series_;
    Complex constant_{0.0, 0.0};
};

// Fatou coordinate; for antiholomorphic parameters the additive constant
// puts the equator on the real axis. Throws CuspError when q = 2.
FatouCoordinate fatou_coordinate(const ParabolicCycle& cycle, const FatouConfig& cfg = {});

// Im Phi(c) for the normalized antiholomorphic Fatou coordinate.
double critical_ecalle_height(Complex c, int k, int d = 2, const FatouConfig& cfg = {});

// Phi(P^((k-1)/2)(a^d + b)) - Phi(b).
Complex fatou_vector(Complex a, Complex b, int k, int d = 2, const FatouConfig& cfg = {});
Complex fatou_vector(const FatouCoordinate& phi);

struct ArcSample {
    int k = 1;
    int arc = 0;
    double h_target = 0.0;
    double theta = 0.0;
    Complex c{0.0, 0.0};
    double h_achieved = 0.0;
    Complex fatou_vector{0.0, 0.0};
    // Relative residual of Per_k(1) at (conj c, c).
    double curve_residual = 0.0;
    // Central-difference speed |dc/dh|, when computed.
    std::optional<double> speed;
};

// Period-1 parabolic parameters: the fixed point z0 = rho e^{i theta} with
// rho = d^(-1/(d-1)) is parabolic for c = z0 - conj(z0)^d. Arc j spans
// theta in ((2j-1) pi/(d+1), (2j+1) pi/(d+1)) between two cusps.
Complex period_one_parameter(int d, double theta);
std::pair<double, double> period_one_arc_interval(int d, int arc);

// Parameters on an arc with the requested critical Ecalle heights.
std::vector<ArcSample> arc_trace(int k, const std::vector<double>& heights, int arc = 0, int d = 2,
                                 const FatouConfig& cfg = {});

struct SpeedReport {
    // speeds[i] belongs to samples[i + 1].
    std::vector<double> speeds;
    std::vector<std::size_t> flagged;
};
SpeedReport arc_derivative_check(const std::vector<ArcSample>& samples,
                                 double threshold = 1e-4);

// Piecewise-linear shear of the Ecalle cylinder, 1-periodic in Re zeta.
// Throws DomainError if |Im w| >= 1/4.
Complex deformation_map_L(Complex zeta, Complex w);
// max |L_w(conj(z) + 1/2) - (conj(L_w(z)) + 1/2)| over the given points.
double commutation_defect(Complex w, const std::vector<Complex>& points);

nlohmann::json to_json(const ParabolicCycle& cycle);
nlohmann::json to_json(const ArcSample& sample);
// Header and one line per sample, columns as in arc_csv_header().
std::string arc_csv_header();
std::string arc_csv_row(const ArcSample& sample);

} // namespace pararc::fatou
