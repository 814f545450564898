#include "pararc/errors.hpp"
#include "pararc/percurve/singular.hpp"

#include <algorithm>
#include <cmath>

namespace pararc::percurve {

namespace {

int delta_invariant(const SingularPoint& sp) {
    if (sp.label == "node" || sp.label == "ordinary-cusp") {
        return 1;
    }
    if (sp.label == "triple-point") {
        const auto& cone = sp.tangent_cone;
        bool ordinary = cone.factors.size() == 3 &&
                        std::all_of(cone.factors.begin(), cone.factors.end(),
                                    [](const LinearFactor& f) { return f.multiplicity == 1; });
        if (ordinary) {
            return 3;
        }
    }
    throw DomainError("no delta invariant known for singularity of type '" + sp.label + "'");
}

template <class T>
T subresultant_expr(const T& a, const T& b, const T& c) {
    return T(36) + T(8) * a * a * a - T(72) * b + T(36) * b * b - T(32) * a * c;
}

// Small nonzero rationals 1, -1, 2, -2, 1/2, -1/2, 3, -3, ...
std::vector<Rational> sample_values(int count) {
    std::vector<Rational> out;
    for (int den = 1; int(out.size()) < count; ++den) {
        for (int num = 1; num <= 3 && int(out.size()) < count; ++num) {
            Rational q(num, den);
            q.canonicalize();
            if (std::find(out.begin(), out.end(), q) != out.end()) {
                continue;
            }
            out.push_back(q);
            if (int(out.size()) < count) {
                out.push_back(-q);
            }
        }
    }
    return out;
}

} // namespace

int degree_genus(int total_degree, const std::vector<SingularPoint>& singular) {
    int genus = (total_degree - 1) * (total_degree - 2) / 2;
    for (const auto& sp : singular) {
        genus -= delta_invariant(sp);
    }
    if (genus < 0) {
        throw DomainError("singular list is inconsistent with degree " +
                          std::to_string(total_degree) + ": genus would be " +
                          std::to_string(genus));
    }
    return genus;
}

int degree_genus(const PlaneCurve& curve, const std::vector<SingularPoint>& singular) {
    return degree_genus(curve.poly.with_vars(curve.params()).total_degree(), singular);
}

StratumResult quartic_strata(const std::vector<Rational>& p) {
    if (p.size() != 3) {
        throw DomainError("quartic strata need a point (a, b, c)");
    }
    const Rational& a = p[0];
    const Rational& b = p[1];
    const Rational& c = p[2];
    StratumResult out;
    out.subresultant_condition = subresultant_expr<Rational>(a, b, c) == 0;
    if (a == 0 && b == 1 && c == 0) {
        out.label = "V0";
    } else if (b == 1 && a * a - 4 * c == 0) {
        out.label = "V1";
    } else if (Rational(8 * a * a * a + 27 * (1 - b) * (1 - b)) == 0 && a * a + 12 * c == 0) {
        out.label = "V2";
    } else {
        out.label = "nonsingular";
    }
    return out;
}

StratumResult quartic_strata(const std::vector<Complex>& p, double tolerance) {
    if (p.size() != 3) {
        throw DomainError("quartic strata need a point (a, b, c)");
    }
    const Complex a = p[0];
    const Complex b = p[1];
    const Complex c = p[2];
    const double s = 1.0 + std::max({std::abs(a), std::abs(b), std::abs(c)});
    auto zero = [&](Complex v, int degree) { return std::abs(v) <= tolerance * std::pow(s, degree); };
    StratumResult out;
    out.subresultant_condition = zero(subresultant_expr<Complex>(a, b, c), 3);
    if (zero(a, 1) && zero(b - 1.0, 1) && zero(c, 1)) {
        out.label = "V0";
    } else if (zero(b - 1.0, 1) && zero(a * a - 4.0 * c, 2)) {
        out.label = "V1";
    } else if (zero(8.0 * a * a * a + 27.0 * (1.0 - b) * (1.0 - b), 3) && zero(a * a + 12.0 * c, 2)) {
        out.label = "V2";
    } else {
        out.label = "nonsingular";
    }
    return out;
}

std::vector<std::vector<Rational>> quartic_v1_samples(int count) {
    std::vector<std::vector<Rational>> out;
    for (const auto& a : sample_values(count)) {
        out.push_back({a, Rational(1), Rational(a * a / 4)});
    }
    return out;
}

std::vector<std::vector<Rational>> quartic_v2_samples(int count) {
    std::vector<std::vector<Rational>> out;
    for (const auto& m : sample_values(count)) {
        Rational m2 = m * m;
        out.push_back({Rational(-3 * m2 / 2), Rational(1 - m2 * m), Rational(-3 * m2 * m2 / 16)});
    }
    return out;
}

} // namespace pararc::percurve
