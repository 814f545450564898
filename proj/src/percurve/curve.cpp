#include "pararc/percurve/curve.hpp"

#include "pararc/errors.hpp"

#include <filesystem>
#include <fstream>

namespace pararc::percurve {

using polyalg::discriminant;
using polyalg::exact_divide;
using polyalg::gcd;
using polyalg::resultant;
using polyalg::squarefree_part;

std::vector<std::string> PlaneCurve::params() const {
    std::vector<std::string> out;
    for (const auto& v : poly.vars()) {
        if (v != "z") {
            out.push_back(v);
        }
    }
    return out;
}

namespace {

std::vector<std::string> curve_vars(const FamilySpec& family, const Multiplier& r) {
    std::vector<std::string> vars = family.params;
    if (r.is_symbolic()) {
        vars.push_back(r.symbol);
    }
    return vars;
}

ExactPoly raw_multiplier_curve(const FamilySpec& family, int n, const Multiplier& r,
                               const polyalg::DegreeCaps& caps) {
    ExactPoly fn;
    try {
        fn = polyalg::iterate(family.map, n, "z", caps);
    } catch (const ResourceError& e) {
        throw ResourceError(std::string(e.what()) +
                            "; use numeric continuation (the arc command) for this period");
    }
    auto vars = polyalg::unify_vars(fn.vars(), curve_vars(family, r));
    fn = fn.with_vars(vars);
    const ExactPoly g = fn - ExactPoly::variable(vars, "z");
    if (r.is_one()) {
        return discriminant(g, "z").poly;
    }
    const ExactPoly rr = r.is_symbolic() ? ExactPoly::variable(vars, r.symbol)
                                         : ExactPoly::constant(vars, *r.value);
    return resultant(g, fn.derivative("z") - rr, "z");
}

} // namespace

PlaneCurve per_curve(const FamilySpec& family, int n, const Multiplier& r,
                     const CurveOptions& opts) {
    if (n < 1) {
        throw DomainError("period must be positive");
    }
    if (n > opts.max_exact_period) {
        throw ResourceError("exact Per_n is limited to n <= " +
                            std::to_string(opts.max_exact_period) +
                            "; use numeric continuation (the arc command) instead");
    }
    PlaneCurve curve;
    curve.family = family;
    curve.period = n;
    curve.multiplier = r;
    const auto vars = curve_vars(family, r);

    ExactPoly raw = raw_multiplier_curve(family, n, r, opts.caps);
    if (raw.is_zero()) {
        throw DomainError("multiplier curve vanishes identically");
    }
    ExactPoly poly = squarefree_part(raw).with_vars(vars);

    if (n >= 2) {
        // Fixed points with multiplier +1 or -1 are multiple roots of
        // f^n(z) - z for every even n (and +1 for all n).
        ExactPoly removed = ExactPoly::constant(vars, Rational(1));
        std::vector<Rational> lower = {Rational(1)};
        if (n % 2 == 0) {
            lower.emplace_back(-1);
        }
        for (const auto& m : lower) {
            ExactPoly low = squarefree_part(raw_multiplier_curve(family, 1, Multiplier::exact(m),
                                                                 opts.caps))
                                .with_vars(vars);
            ExactPoly g = gcd(poly, low);
            if (!g.is_constant()) {
                poly = exact_divide(poly, g);
                removed *= g;
            }
        }
        curve.removed_factor = removed.primitive_integer();
    }
    curve.poly = poly.primitive_integer();
    curve.squarefree = true;

    if (!opts.reference_dir.empty()) {
        if (auto ref = reference_polynomial(family, n, r, opts.reference_dir)) {
            curve.scalar_vs_paper = polyalg::proportionality_scalar(*ref, curve.poly);
        }
    }
    return curve;
}

std::optional<ExactPoly> reference_polynomial(const FamilySpec& family, int n, const Multiplier& r,
                                              const std::string& reference_dir) {
    namespace fs = std::filesystem;
    const std::string stem = reference_dir + "/" + family.tag() + "_per" + std::to_string(n) + "_";
    auto load = [](const fs::path& path) -> std::optional<ExactPoly> {
        std::ifstream in(path);
        if (!in) {
            return std::nullopt;
        }
        auto j = nlohmann::json::parse(in);
        return polyalg::poly_from_json(j.at("poly"));
    };
    if (r.is_one()) {
        if (auto p = load(stem + "1.json")) {
            return p;
        }
    }
    auto symbolic = load(stem + "r.json");
    if (!symbolic) {
        return std::nullopt;
    }
    if (r.is_symbolic()) {
        if (r.symbol != "r") {
            return symbolic->substitute(
                "r", ExactPoly::variable(polyalg::unify_vars(symbolic->vars(), {r.symbol}), r.symbol));
        }
        return symbolic;
    }
    return symbolic->substitute("r", *r.value).compacted();
}

PlaneCurve curve_from_poly(const ExactPoly& poly) {
    PlaneCurve c;
    c.poly = poly;
    c.squarefree = false;
    return c;
}

std::vector<Complex> gradient(const PlaneCurve& curve, const std::vector<Complex>& point) {
    const auto params = curve.params();
    if (point.size() != params.size()) {
        throw DomainError("point dimension does not match the curve parameters");
    }
    std::map<std::string, Complex> at;
    for (std::size_t i = 0; i < params.size(); ++i) {
        at[params[i]] = point[i];
    }
    std::vector<Complex> out;
    for (const auto& v : params) {
        out.push_back(curve.poly.derivative(v).eval(at));
    }
    return out;
}

std::vector<Rational> gradient_exact(const PlaneCurve& curve, const std::vector<Rational>& point) {
    const auto params = curve.params();
    if (point.size() != params.size()) {
        throw DomainError("point dimension does not match the curve parameters");
    }
    std::map<std::string, Rational> at;
    for (std::size_t i = 0; i < params.size(); ++i) {
        at[params[i]] = point[i];
    }
    std::vector<Rational> out;
    for (const auto& v : params) {
        out.push_back(curve.poly.derivative(v).eval_exact(at));
    }
    return out;
}

nlohmann::json curve_report(const PlaneCurve& curve) {
    nlohmann::json j;
    j["family"] = curve.family.name();
    j["d"] = curve.family.d;
    j["n"] = curve.period;
    j["r"] = curve.multiplier.to_string();
    j["poly"] = polyalg::to_json(curve.poly);
    j["poly_text"] = curve.poly.to_string();
    j["squarefree"] = curve.squarefree;
    j["scalar_vs_paper"] =
        curve.scalar_vs_paper ? nlohmann::json(to_string(*curve.scalar_vs_paper)) : nlohmann::json();
    if (curve.removed_factor) {
        j["removed_factor"] = curve.removed_factor->to_string();
    }
    return j;
}

} // namespace pararc::percurve
