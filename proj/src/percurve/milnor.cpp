#include "elimination.hpp"
#include "local.hpp"
#include "pararc/errors.hpp"
#include "pararc/numeric/roots.hpp"
#include "pararc/percurve/singular.hpp"
#include "pararc/polyalg/algebra.hpp"
#include "pararc/polyalg/upoly.hpp"

#include <algorithm>
#include <cmath>

namespace pararc::percurve {

namespace upoly = polyalg::upoly;
using polyalg::UPoly;

namespace {

// Shears a -> a + lambda b tried in order when the fiber check fails.
const Rational kShears[] = {Rational(0), Rational(1, 3), Rational(-2, 5), Rational(3, 7)};

ExactPoly two_param_poly(const PlaneCurve& curve) {
    auto params = curve.params();
    if (params.size() != 2) {
        throw DomainError("Milnor numbers are computed for two-parameter curves");
    }
    return curve.poly.with_vars(params);
}

ExactPoly sheared(const ExactPoly& h, const Rational& lambda) {
    if (lambda == 0) {
        return h;
    }
    const auto& v = h.vars();
    ExactPoly repl = ExactPoly::variable(v, v[0]) + ExactPoly::variable(v, v[1]) * lambda;
    return h.substitute(v[0], repl);
}

Complex hessian_det_numeric(const detail::CompiledJet& jet, const std::vector<Complex>& p) {
    return jet.hess[0][0].eval(p) * jet.hess[1][1].eval(p) -
           jet.hess[0][1].eval(p) * jet.hess[1][0].eval(p);
}

double hessian_scale(const detail::CompiledJet& jet, const std::vector<Complex>& p) {
    return jet.hess[0][0].scale(p) * jet.hess[1][1].scale(p) +
           jet.hess[0][1].scale(p) * jet.hess[1][0].scale(p);
}

std::vector<Complex> fiber_coeffs(const ExactPoly& p, Complex a0) {
    const auto& v = p.vars();
    std::vector<Complex> out;
    for (const auto& c : p.coefficients_in(v[1])) {
        out.push_back(c.eval(std::map<std::string, Complex>{{v[0], a0}}));
    }
    return out;
}

double rel_abs(const std::vector<Complex>& coeffs, Complex x) {
    Complex v = 0.0;
    double s = 0.0;
    double ax = std::abs(x);
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        v = v * x + *it;
        s = s * ax + std::abs(*it);
    }
    return s > 0.0 ? std::abs(v) / s : 0.0;
}

} // namespace

int milnor_number_exact(const PlaneCurve& curve, const std::vector<Rational>& point) {
    const ExactPoly h = two_param_poly(curve);
    const auto& v = h.vars();
    if (point.size() != 2) {
        throw DomainError("point must have two coordinates");
    }
    std::map<std::string, Rational> at = {{v[0], point[0]}, {v[1], point[1]}};
    const ExactPoly ha = h.derivative(v[0]);
    const ExactPoly hb = h.derivative(v[1]);
    if (h.eval_exact(at) != 0 || ha.eval_exact(at) != 0 || hb.eval_exact(at) != 0) {
        return 0;
    }
    const Rational det = ha.derivative(v[0]).eval_exact(at) * hb.derivative(v[1]).eval_exact(at) -
                         ha.derivative(v[1]).eval_exact(at) * hb.derivative(v[0]).eval_exact(at);
    if (det != 0) {
        return 1;
    }
    for (const auto& lambda : kShears) {
        const ExactPoly hs = sheared(h, lambda);
        const Rational a0 = point[0] - lambda * point[1];
        const Rational b0 = point[1];
        const ExactPoly fa = hs.derivative(v[0]);
        const ExactPoly fb = hs.derivative(v[1]);
        if (fa.is_zero() || fb.is_zero()) {
            throw NonIsolatedSingularityError("a partial derivative vanishes identically");
        }
        const ExactPoly R = polyalg::resultant(fa, fb, v[1]);
        if (R.is_zero()) {
            throw NonIsolatedSingularityError("gradient vanishes along a curve through the point");
        }
        // Leading coefficients in b must not both vanish over a0.
        const bool lc_ok = fa.leading_coefficient(v[1]).eval_exact({{v[0], a0}}) != 0 ||
                           fb.leading_coefficient(v[1]).eval_exact({{v[0], a0}}) != 0;
        UPoly ga = upoly::from_poly(fa.substitute(v[0], a0).with_vars(v), v[1]);
        UPoly gb = upoly::from_poly(fb.substitute(v[0], a0).with_vars(v), v[1]);
        UPoly g = upoly::gcd(ga, gb);
        bool single = false;
        if (!g.empty()) {
            UPoly sq = {Rational(1)};
            for (const auto& [f, m] : upoly::squarefree_decomposition(g)) {
                sq = upoly::mul(sq, f);
            }
            single = upoly::degree(sq) == 1 && upoly::eval(sq, b0) == 0;
        }
        if (!lc_ok || !single) {
            continue;
        }
        return upoly::root_multiplicity(upoly::from_poly(R, v[0]), a0);
    }
    throw NumericError("fiber check failed after every shear");
}

int milnor_number(const PlaneCurve& curve, const std::vector<Complex>& point, MilnorMethod method,
                  double tolerance) {
    if (method == MilnorMethod::Morsification) {
        return milnor_by_morsification(curve.family, curve.period, point);
    }
    const ExactPoly h = two_param_poly(curve);
    const auto& v = h.vars();
    if (point.size() != 2) {
        throw DomainError("point must have two coordinates");
    }
    detail::CompiledJet jet(h);
    if (std::abs(jet.h.eval(point)) > tolerance * std::max(jet.h.scale(point), 1e-300)) {
        return 0;
    }
    for (int i = 0; i < 2; ++i) {
        double s = std::max(jet.grad[std::size_t(i)].scale(point), 1e-300);
        if (std::abs(jet.grad[std::size_t(i)].eval(point)) > tolerance * s) {
            return 0;
        }
    }
    if (std::abs(hessian_det_numeric(jet, point)) > 1e-6 * hessian_scale(jet, point)) {
        return 1;
    }
    for (const auto& lambda : kShears) {
        const ExactPoly hs = sheared(h, lambda);
        const Complex a0 = point[0] - to_complex(lambda) * point[1];
        const Complex b0 = point[1];
        const ExactPoly fa = hs.derivative(v[0]);
        const ExactPoly fb = hs.derivative(v[1]);
        if (fa.is_zero() || fb.is_zero()) {
            throw NonIsolatedSingularityError("a partial derivative vanishes identically");
        }
        const ExactPoly R = polyalg::resultant(fa, fb, v[1]);
        if (R.is_zero()) {
            throw NonIsolatedSingularityError("gradient vanishes along a curve through the point");
        }
        // Fiber over a0: common zeros of fa(a0, .) and fb(a0, .).
        auto ca = fiber_coeffs(fa, a0);
        auto cb = fiber_coeffs(fb, a0);
        auto lc_small = [](const std::vector<Complex>& c) {
            double big = 0.0;
            for (auto x : c) {
                big = std::max(big, std::abs(x));
            }
            return std::abs(c.back()) <= 1e-10 * big;
        };
        if (lc_small(ca) && lc_small(cb)) {
            continue;
        }
        const auto& src = (ca.size() <= cb.size() && !lc_small(ca)) || lc_small(cb) ? ca : cb;
        const auto& other = &src == &ca ? cb : ca;
        std::vector<Complex> common;
        if (src.size() >= 2) {
            for (Complex b : numeric::poly_roots(src)) {
                if (rel_abs(other, b) <= 1e-6) {
                    common.push_back(b);
                }
            }
        }
        auto clusters = numeric::cluster_points(common, 1e-4 * (1.0 + std::abs(b0)));
        if (clusters.size() != 1 || std::abs(clusters[0].center - b0) > 1e-4 * (1.0 + std::abs(b0))) {
            continue;
        }
        // Multiplicity of a0: index of the square-free factor containing it.
        UPoly Ru = upoly::from_poly(R, v[0]);
        int best_mult = 0;
        double best_dist = 1e300;
        for (const auto& [f, m] : upoly::squarefree_decomposition(Ru)) {
            for (Complex root : upoly::complex_roots(f)) {
                double d = std::abs(root - a0);
                if (d < best_dist) {
                    best_dist = d;
                    best_mult = m;
                }
            }
        }
        if (best_dist > 1e-6 * (1.0 + std::abs(a0))) {
            throw NumericError("point is not a root of the gradient eliminant");
        }
        return best_mult;
    }
    throw NumericError("fiber check failed after every shear");
}

std::vector<CriticalPoint> critical_points(const ExactPoly& h, const SingularOptions& opts) {
    if (h.vars().size() != 2) {
        throw DomainError("critical_points needs a two-variable polynomial");
    }
    const auto& v = h.vars();
    detail::EliminationOptions eo;
    eo.tolerance = 1e-9;
    eo.merge_radius = opts.merge_radius;
    eo.root_budget = opts.root_budget;
    auto sols = detail::solve_bivariate({h.derivative(v[0]), h.derivative(v[1])}, eo);
    detail::CompiledJet jet(h);
    std::vector<CriticalPoint> out;
    for (const auto& s : sols) {
        CriticalPoint cp;
        cp.location = s.location;
        cp.exact_location = s.exact;
        if (s.exact) {
            std::map<std::string, Rational> at = {{v[0], (*s.exact)[0]}, {v[1], (*s.exact)[1]}};
            ExactPoly ha = h.derivative(v[0]);
            ExactPoly hb = h.derivative(v[1]);
            Rational det = ha.derivative(v[0]).eval_exact(at) * hb.derivative(v[1]).eval_exact(at) -
                           ha.derivative(v[1]).eval_exact(at) * hb.derivative(v[0]).eval_exact(at);
            cp.hessian_det = to_complex(det);
            cp.nondegenerate = det != 0;
            cp.value = to_complex(h.eval_exact(at));
        } else {
            cp.hessian_det = hessian_det_numeric(jet, s.location);
            cp.nondegenerate =
                std::abs(cp.hessian_det) > 1e-6 * hessian_scale(jet, s.location);
            cp.value = jet.h.eval(s.location);
        }
        out.push_back(std::move(cp));
    }
    return out;
}

std::vector<Rational> default_r_ladder() {
    return {Rational(9, 10), Rational(99, 100), Rational(999, 1000), Rational(9999, 10000)};
}

MorsificationTrack track_morsification(const FamilySpec& family, int n,
                                       const std::vector<Rational>& r_path,
                                       const std::vector<Complex>& target, double radius) {
    for (std::size_t i = 1; i < r_path.size(); ++i) {
        if (r_path[i] <= r_path[i - 1]) {
            throw DomainError("r path must be strictly increasing");
        }
    }
    MorsificationTrack track;
    CurveOptions co;
    co.reference_dir.clear();
    for (const auto& r : r_path) {
        PlaneCurve c = per_curve(family, n, Multiplier::exact(r), co);
        MorsificationStep step;
        step.r = r;
        for (auto& cp : critical_points(c.poly.with_vars(c.params()))) {
            double d = 0.0;
            for (std::size_t i = 0; i < target.size(); ++i) {
                d = std::max(d, std::abs(cp.location[i] - target[i]));
            }
            if (d <= radius) {
                step.points.push_back(std::move(cp));
            }
        }
        track.steps.push_back(std::move(step));
    }
    // Nearest-neighbour continuation between consecutive rungs.
    const std::size_t K = track.steps.size();
    for (std::size_t k = 0; k < K; ++k) {
        const auto& pts = track.steps[k].points;
        std::vector<char> claimed(pts.size(), 0);
        if (k > 0) {
            for (auto& traj : track.trajectories) {
                int last = traj[k - 1];
                if (last < 0 || pts.empty()) {
                    traj.push_back(-1);
                    continue;
                }
                const auto& from = track.steps[k - 1].points[std::size_t(last)].location;
                std::size_t best = 0;
                double best_d = 1e300;
                for (std::size_t i = 0; i < pts.size(); ++i) {
                    double d = std::abs(pts[i].location[0] - from[0]) +
                               std::abs(pts[i].location[1] - from[1]);
                    if (d < best_d) {
                        best_d = d;
                        best = i;
                    }
                }
                if (claimed[best]) {
                    track.collision = true;
                }
                claimed[best] = 1;
                traj.push_back(int(best));
            }
        }
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (!claimed[i]) {
                std::vector<int> traj(k, -1);
                traj.push_back(int(i));
                track.trajectories.push_back(std::move(traj));
            }
        }
    }
    return track;
}

int milnor_by_morsification(const FamilySpec& family, int n, const std::vector<Complex>& point,
                            double radius, const std::vector<Rational>& ladder) {
    auto path = ladder.empty() ? default_r_ladder() : ladder;
    auto track = track_morsification(family, n, path, point, radius);
    const auto& last = track.steps.back();
    int total = 0;
    for (const auto& cp : last.points) {
        if (!cp.nondegenerate) {
            throw NumericError("degenerate critical point persists at r = " + to_string(last.r));
        }
        total += 1;
    }
    return total;
}

} // namespace pararc::percurve
