#pragma once

#include "pararc/polyalg/rational.hpp"

#include <functional>
#include <span>
#include <vector>

namespace pararc::numeric {

struct AberthOptions {
    int max_iterations = 2000;
    // Stop once every correction is below tol * max(1, |z|).
    double tolerance = 1e-15;
    // Offset of the starting angle, in fractions of a full turn.
    double angle_offset = 0.0731;
};

struct AberthResult {
    std::vector<Complex> roots;
    int iterations = 0;
    bool converged = false;
};

// Newton ratio p(z)/p'(z) of a monic-like polynomial of known degree.
using NewtonRatio = std::function<Complex(Complex)>;

// Simultaneous Aberth-Ehrlich iteration. Only the Newton ratio is needed,
// so the polynomial may be given implicitly (for instance as an iterate of
// a map evaluated by composition). Starting points lie on a circle of the
// given radius.
AberthResult aberth(int degree, const NewtonRatio& ratio, double radius,
                    const AberthOptions& opts = {});
// Same iteration from caller-supplied starting points, one per root.
AberthResult aberth(std::vector<Complex> initial, const NewtonRatio& ratio,
                    const AberthOptions& opts = {});

// All complex roots of sum coeffs[i] z^i (coeffs.back() != 0), polished by
// Newton. Multiple roots come back as clusters.
std::vector<Complex> poly_roots(std::span<const Complex> coeffs, const AberthOptions& opts = {});

// Upper bound on root moduli (Fujiwara).
double root_radius_bound(std::span<const Complex> coeffs);

Complex horner(std::span<const Complex> coeffs, Complex z);

// Group points whose mutual distance is below radius (single linkage);
// returns cluster means and sizes in a deterministic order.
struct Cluster {
    Complex center;
    int size = 0;
};
std::vector<Cluster> cluster_points(const std::vector<Complex>& pts, double radius);

// Deterministic ordering for complex values: real part, then imaginary,
// each rounded to 1e-9 so roundoff-level differences do not reorder.
bool complex_less(Complex a, Complex b);

} // namespace pararc::numeric
