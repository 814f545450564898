#include "pararc/percurve/singular.hpp"

#include "elimination.hpp"
#include "local.hpp"
#include "pararc/errors.hpp"
#include "pararc/numeric/roots.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace pararc::percurve {

namespace {

using detail::CompiledJet;
using detail::CompiledPoly;

ExactPoly over_params(const PlaneCurve& curve) { return curve.poly.with_vars(curve.params()); }

std::vector<Complex> to_complex_vec(const std::vector<Rational>& p) {
    std::vector<Complex> out;
    for (const auto& q : p) {
        out.push_back(to_complex(q));
    }
    return out;
}

template <class T>
T determinant(const std::vector<std::vector<T>>& m) {
    if (m.size() == 2) {
        return m[0][0] * m[1][1] - m[0][1] * m[1][0];
    }
    if (m.size() == 3) {
        return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
               m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
               m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    }
    throw DomainError("Hessian determinant supports 2 or 3 parameters");
}

// Value of the degree-3 part of h at the point along the direction of a
// tangent line, relative to its natural scale.
bool cubic_transverse(const ExactPoly& h, const std::vector<Complex>& point,
                      const LinearFactor& tangent) {
    if (point.size() != 2) {
        return false;
    }
    const Complex u = tangent.coeffs[0];
    const Complex v = tangent.coeffs[1];
    const Complex dir[2] = {-v, u};
    Complex value = 0.0;
    double scale = 0.0;
    for (const auto& [m, t] : detail::taylor_at(h, point)) {
        if (detail::monomial_degree(m, 2) != 3) {
            continue;
        }
        Complex mono = std::pow(dir[0], int(m[0])) * std::pow(dir[1], int(m[1]));
        value += t.value * mono;
        scale += std::max(t.scale, std::abs(t.value)) * std::abs(mono);
    }
    return scale > 0.0 && std::abs(value) > 1e-7 * scale;
}

std::string label_for(const ExactPoly& h, const SingularPoint& sp) {
    const auto& cone = sp.tangent_cone;
    const std::size_t n = sp.location.size();
    if (cone.unclassified) {
        return "higher/unclassified";
    }
    if (cone.degree == 2) {
        if (n == 2) {
            if (cone.factors.size() == 2) {
                return "node";
            }
            if (cone.factors.size() == 1 && cone.factors[0].multiplicity == 2) {
                if (sp.milnor && *sp.milnor == 2 &&
                    cubic_transverse(h, sp.location, cone.factors[0])) {
                    return "ordinary-cusp";
                }
                return "double-point-single-tangent";
            }
        } else {
            if (cone.rank == 2) {
                return "node";
            }
            if (cone.rank == 1) {
                return "double-point-single-tangent";
            }
        }
        return "higher/unclassified";
    }
    if (cone.degree == 3) {
        return "triple-point";
    }
    return "higher/unclassified";
}

void finish(const PlaneCurve& curve, SingularPoint& sp) {
    const ExactPoly h = over_params(curve);
    sp.multiplicity = sp.tangent_cone.degree;
    if (sp.multiplicity >= 2) {
        sp.label = label_for(h, sp);
    } else {
        sp.label = sp.multiplicity == 1 ? "nonsingular" : "not-on-curve";
    }
    if (curve.family.kind == FamilyKind::Quartic && sp.location.size() == 3 &&
        curve.period == 1 && curve.multiplier.is_one()) {
        sp.stratum = sp.exact_location ? quartic_strata(*sp.exact_location).label
                                       : quartic_strata(sp.location).label;
    }
}

std::vector<SingularPoint> region_search(const PlaneCurve& curve, const Region& region,
                                         const SingularOptions& opts) {
    const ExactPoly h = over_params(curve);
    const std::size_t n = h.vars().size();
    if (region.center.size() != n) {
        throw DomainError("region center dimension does not match the curve parameters");
    }
    CompiledJet jet(h);
    std::vector<CompiledPoly> f = {jet.h};
    std::vector<std::vector<CompiledPoly>> jac = {jet.grad};
    for (std::size_t i = 0; i < n; ++i) {
        f.push_back(jet.grad[i]);
        jac.push_back(jet.hess[i]);
    }
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::vector<Complex>> found;
    for (int s = 0; s < opts.starts; ++s) {
        std::vector<Complex> x(n);
        for (std::size_t i = 0; i < n; ++i) {
            double rad = region.radius * std::sqrt(unit(rng));
            double ang = 2.0 * std::numbers::pi * unit(rng);
            x[i] = region.center[i] + std::polar(rad, ang);
        }
        double res = detail::gauss_newton(f, jac, x, 80);
        if (res > opts.tolerance) {
            continue;
        }
        double dist = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            dist = std::max(dist, std::abs(x[i] - region.center[i]));
        }
        if (dist > 1.5 * region.radius) {
            continue;
        }
        bool dup = false;
        for (const auto& y : found) {
            double d = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                d = std::max(d, std::abs(x[i] - y[i]));
            }
            if (d < opts.merge_radius) {
                dup = true;
                break;
            }
        }
        if (!dup) {
            found.push_back(x);
        }
    }
    std::vector<SingularPoint> out;
    for (const auto& x : found) {
        out.push_back(classify_numeric(curve, x, opts));
    }
    return out;
}

} // namespace

SingularPoint classify_exact(const PlaneCurve& curve, const std::vector<Rational>& point) {
    const ExactPoly h = over_params(curve);
    const auto& vars = h.vars();
    if (point.size() != vars.size()) {
        throw DomainError("point dimension does not match the curve parameters");
    }
    SingularPoint sp;
    sp.exact_location = point;
    sp.location = to_complex_vec(point);
    std::map<std::string, Rational> at;
    for (std::size_t i = 0; i < vars.size(); ++i) {
        at[vars[i]] = point[i];
    }
    const CompiledPoly hc(h);
    const double scale = std::max(hc.scale(sp.location), 1e-300);
    sp.residual_h = std::abs(to_double(h.eval_exact(at))) / scale;
    std::vector<std::vector<Rational>> hess;
    for (const auto& v : vars) {
        ExactPoly d = h.derivative(v);
        double s = std::max(CompiledPoly(d).scale(sp.location), 1e-300);
        sp.residual_grad = std::max(sp.residual_grad, std::abs(to_double(d.eval_exact(at))) / s);
        std::vector<Rational> row;
        for (const auto& w : vars) {
            row.push_back(d.derivative(w).eval_exact(at));
        }
        hess.push_back(std::move(row));
    }
    if (vars.size() == 2 || vars.size() == 3) {
        sp.hessian_det = to_complex(determinant(hess));
    }
    sp.tangent_cone = tangent_cone_exact(curve, point);
    if (vars.size() == 2 && sp.tangent_cone.degree >= 2) {
        try {
            sp.milnor = milnor_number_exact(curve, point);
        } catch (const std::runtime_error&) {
            sp.milnor.reset();
        }
    }
    finish(curve, sp);
    return sp;
}

SingularPoint classify_numeric(const PlaneCurve& curve, const std::vector<Complex>& point,
                               const SingularOptions& opts) {
    const ExactPoly h = over_params(curve);
    const std::size_t n = h.vars().size();
    if (point.size() != n) {
        throw DomainError("point dimension does not match the curve parameters");
    }
    SingularPoint sp;
    sp.location = point;
    CompiledJet jet(h);
    sp.residual_h = std::abs(jet.h.eval(point)) / std::max(jet.h.scale(point), 1e-300);
    std::vector<std::vector<Complex>> hess(n, std::vector<Complex>(n));
    for (std::size_t i = 0; i < n; ++i) {
        sp.residual_grad = std::max(sp.residual_grad, std::abs(jet.grad[i].eval(point)) /
                                                          std::max(jet.grad[i].scale(point), 1e-300));
        for (std::size_t j = 0; j < n; ++j) {
            hess[i][j] = jet.hess[i][j].eval(point);
        }
    }
    if (n == 2 || n == 3) {
        sp.hessian_det = determinant(hess);
    }
    sp.tangent_cone = tangent_cone(curve, point);
    if (n == 2 && sp.tangent_cone.degree >= 2 && opts.classify) {
        try {
            sp.milnor = milnor_number(curve, point);
        } catch (const std::runtime_error&) {
            sp.milnor.reset();
        }
    }
    finish(curve, sp);
    return sp;
}

std::vector<SingularPoint> singular_points(const PlaneCurve& curve,
                                           const std::optional<Region>& region,
                                           const SingularOptions& opts) {
    const ExactPoly h = over_params(curve);
    const auto& vars = h.vars();
    if (vars.size() != 2 && vars.size() != 3) {
        throw DomainError("singular_points supports curves in 2 or 3 parameters");
    }
    std::vector<SingularPoint> out;
    const bool eliminate =
        vars.size() == 2 && !region && h.total_degree() <= opts.elimination_degree_limit;
    if (eliminate) {
        std::vector<ExactPoly> eqs = {h};
        for (const auto& v : vars) {
            eqs.push_back(h.derivative(v));
        }
        detail::EliminationOptions eo;
        eo.tolerance = opts.tolerance;
        eo.merge_radius = opts.merge_radius;
        eo.root_budget = opts.root_budget;
        auto sols = detail::solve_bivariate(eqs, eo);
        // Minimal polynomials of second coordinates, by eliminating the first.
        bool need_swap = std::any_of(sols.begin(), sols.end(),
                                     [](const auto& s) { return s.x_minpoly.has_value(); });
        ExactPoly y_elim;
        if (need_swap) {
            std::vector<std::string> rev = {vars[1], vars[0]};
            std::vector<ExactPoly> rev_eqs;
            for (const auto& e : eqs) {
                rev_eqs.push_back(e.with_vars(rev));
            }
            y_elim = detail::eliminant(rev_eqs, vars[1], vars[0]);
        }
        for (const auto& s : sols) {
            SingularPoint sp = s.exact ? classify_exact(curve, *s.exact)
                                       : classify_numeric(curve, s.location, opts);
            if (s.x_minpoly) {
                sp.exact_note = vars[0] + ": " + s.x_minpoly->to_string() + " = 0";
                if (!y_elim.is_zero()) {
                    auto yu = polyalg::upoly::from_poly(y_elim, vars[1]);
                    if (auto q = detail::quadratic_minimal_poly(yu, s.location[1])) {
                        sp.exact_note += "; " + vars[1] + ": " +
                                         polyalg::upoly::to_poly(*q, {vars[1]}, vars[1]).primitive_integer().to_string() +
                                         " = 0";
                    }
                }
            }
            out.push_back(std::move(sp));
        }
    } else {
        Region reg = region.value_or(Region{std::vector<Complex>(vars.size(), 0.0), 2.0});
        out = region_search(curve, reg, opts);
    }
    std::sort(out.begin(), out.end(), [](const SingularPoint& a, const SingularPoint& b) {
        return detail::lex_less(a.location, b.location);
    });
    return out;
}

nlohmann::json singular_report(const std::vector<SingularPoint>& points) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& sp : points) {
        nlohmann::json j;
        nlohmann::json loc = nlohmann::json::array();
        for (auto c : sp.location) {
            loc.push_back({c.real(), c.imag()});
        }
        j["location"] = loc;
        if (sp.exact_location) {
            nlohmann::json ex = nlohmann::json::array();
            for (const auto& q : *sp.exact_location) {
                ex.push_back(to_string(q));
            }
            j["exact_location"] = ex;
        }
        if (!sp.exact_note.empty()) {
            j["exact_note"] = sp.exact_note;
        }
        j["residuals"] = {{"h", sp.residual_h}, {"grad", sp.residual_grad}};
        j["multiplicity"] = sp.multiplicity;
        nlohmann::json cone;
        cone["degree"] = sp.tangent_cone.degree;
        cone["rank"] = sp.tangent_cone.rank;
        cone["description"] = sp.tangent_cone.description;
        nlohmann::json factors = nlohmann::json::array();
        for (const auto& f : sp.tangent_cone.factors) {
            nlohmann::json coeffs = nlohmann::json::array();
            for (auto c : f.coeffs) {
                coeffs.push_back({c.real(), c.imag()});
            }
            factors.push_back({{"coeffs", coeffs}, {"multiplicity", f.multiplicity}});
        }
        cone["factors"] = factors;
        j["tangent_cone"] = cone;
        j["milnor"] = sp.milnor ? nlohmann::json(*sp.milnor) : nlohmann::json();
        j["label"] = sp.label;
        j["stratum"] = sp.stratum.empty() ? nlohmann::json() : nlohmann::json(sp.stratum);
        j["hessian_det"] = {sp.hessian_det.real(), sp.hessian_det.imag()};
        arr.push_back(j);
    }
    return arr;
}

} // namespace pararc::percurve
