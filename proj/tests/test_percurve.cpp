#include "pararc/errors.hpp"
#include "pararc/numeric/roots.hpp"
#include "pararc/percurve/curve.hpp"
#include "pararc/percurve/membership.hpp"
#include "pararc/percurve/singular.hpp"
#include "test_support.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace pararc;
using namespace pararc::percurve;
using testsupport::load_reference;

namespace {

const Complex kOmega = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);

Rational q(long n, long d = 1) {
    Rational r(n, d);
    r.canonicalize();
    return r;
}

double dist(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        d = std::max(d, std::abs(a[i] - b[i]));
    }
    return d;
}

// Independent evaluation of h1 for the biquadratic family.
Complex h1_direct(Complex a, Complex b) {
    return 256.0 * a * a * a + 288.0 * a * b + 256.0 * a * a * b * b + 256.0 * b * b * b - 27.0;
}

} // namespace

TEST_CASE("per_curve reproduces the reference curves up to a scalar") {
    for (auto [fam, name] : {std::pair{FamilySpec::biquadratic(2), "biquadratic2"},
                             std::pair{FamilySpec::cubic(), "cubic"}}) {
        CAPTURE(name);
        auto c1 = per_curve(fam, 1, Multiplier::exact(1));
        REQUIRE(c1.scalar_vs_paper.has_value());
        CHECK(*c1.scalar_vs_paper != 0);
        CHECK(c1.squarefree);
        auto cr = per_curve(fam, 1, Multiplier::symbolic());
        REQUIRE(cr.scalar_vs_paper.has_value());
    }
    auto q1 = per_curve(FamilySpec::quartic(), 1, Multiplier::exact(1));
    REQUIRE(q1.scalar_vs_paper.has_value());
}

TEST_CASE("h_r at r = 1 reproduces h_1") {
    ExactPoly hr = load_reference("biquadratic2_per1_r.json");
    ExactPoly h1 = load_reference("biquadratic2_per1_1.json");
    CHECK(hr.substitute("r", q(1)).with_vars(h1.vars()) == h1);
    auto cr = per_curve(FamilySpec::biquadratic(2), 1, Multiplier::symbolic());
    auto c1 = per_curve(FamilySpec::biquadratic(2), 1, Multiplier::exact(1));
    auto sub = cr.poly.substitute("r", q(1)).with_vars(c1.poly.vars());
    CHECK(polyalg::proportionality_scalar(c1.poly, sub).has_value());
}

TEST_CASE("exact multiplier specializes the symbolic curve") {
    auto cr = per_curve(FamilySpec::cubic(), 1, Multiplier::symbolic());
    for (auto r : {q(1, 2), q(-1), q(9, 10)}) {
        auto c = per_curve(FamilySpec::cubic(), 1, Multiplier::exact(r));
        auto sub = cr.poly.substitute("r", r).with_vars(c.poly.vars());
        CHECK(polyalg::proportionality_scalar(c.poly, sub).has_value());
    }
}

TEST_CASE("period two curve has the fixed point factors removed") {
    auto c2 = per_curve(FamilySpec::cubic(), 2, Multiplier::exact(1));
    auto c1 = per_curve(FamilySpec::cubic(), 1, Multiplier::exact(1));
    auto cm = per_curve(FamilySpec::cubic(), 1, Multiplier::exact(-1));
    CHECK(c2.removed_factor.has_value());
    auto g1 = polyalg::gcd(c2.poly, c1.poly.with_vars(c2.poly.vars()));
    auto gm = polyalg::gcd(c2.poly, cm.poly.with_vars(c2.poly.vars()));
    CHECK(g1.is_constant());
    CHECK(gm.is_constant());
    // Numeric check: at a point of Per_2(1) some 2-cycle has multiplier 1.
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g;
    Complex a{g(rng), g(rng)};
    auto fib = c2.poly.with_vars({"a", "b"}).coefficients_in("b");
    std::vector<Complex> coeffs;
    for (auto& cf : fib) {
        coeffs.push_back(cf.eval(std::map<std::string, Complex>{{"a", a}}));
    }
    auto bs = numeric::poly_roots(coeffs);
    REQUIRE(!bs.empty());
    Complex b = bs.front();
    auto f = [&](Complex z) { return z * z * z - 3.0 * a * z + b; };
    auto df = [&](Complex z) { return 3.0 * z * z - 3.0 * a; };
    // Newton on f(f(z)) - z from a grid of starts.
    double best = 1e9;
    for (int i = -20; i <= 20; ++i) {
        for (int j = -20; j <= 20; ++j) {
            Complex z{0.2 * i, 0.2 * j};
            for (int it = 0; it < 60; ++it) {
                Complex w = f(z);
                Complex val = f(w) - z;
                Complex der = df(w) * df(z) - 1.0;
                if (std::abs(der) < 1e-14) {
                    break;
                }
                z -= val / der;
            }
            if (std::abs(f(f(z)) - z) < 1e-9 && std::abs(f(z) - z) > 1e-6) {
                best = std::min(best, std::abs(df(f(z)) * df(z) - 1.0));
            }
        }
    }
    CHECK(best < 1e-5);
}

TEST_CASE("iterate degree cap is reported with advice") {
    CurveOptions opts;
    CHECK_THROWS_AS(per_curve(FamilySpec::biquadratic(2), 3, Multiplier::exact(1), opts),
                    ResourceError);
}

TEST_CASE("biquadratic h1 has exactly three ordinary cusps") {
    auto c = per_curve(FamilySpec::biquadratic(2), 1, Multiplier::exact(1));
    auto pts = singular_points(c);
    REQUIRE(pts.size() == 3);
    std::vector<std::vector<Complex>> expected = {
        {-0.75, -0.75}, {-0.75 * kOmega, -0.75 * kOmega * kOmega},
        {-0.75 * kOmega * kOmega, -0.75 * kOmega}};
    for (const auto& e : expected) {
        bool found = false;
        for (const auto& p : pts) {
            if (dist(p.location, e) < 1e-9) {
                found = true;
                CHECK(p.label == "ordinary-cusp");
                REQUIRE(p.milnor.has_value());
                CHECK(*p.milnor == 2);
                REQUIRE(p.tangent_cone.factors.size() == 1);
                CHECK(p.tangent_cone.factors[0].multiplicity == 2);
                CHECK(std::abs(h1_direct(e[0], e[1])) < 1e-9);
                CHECK(p.residual_h <= 1e-10);
                CHECK(p.residual_grad <= 1e-10);
            }
        }
        CHECK(found);
    }
    int exact = 0;
    for (const auto& p : pts) {
        if (p.exact_location) {
            ++exact;
            CHECK((*p.exact_location)[0] == q(-3, 4));
            CHECK((*p.exact_location)[1] == q(-3, 4));
        } else {
            CHECK(p.exact_note.find("16*a^2 - 12*a + 9") != std::string::npos);
        }
    }
    CHECK(exact == 1);
}

TEST_CASE("cubic family Per_1 at multiplier one has a single cusp") {
    auto c = per_curve(FamilySpec::cubic(), 1, Multiplier::exact(1));
    auto pts = singular_points(c);
    REQUIRE(pts.size() == 1);
    REQUIRE(pts[0].exact_location.has_value());
    CHECK((*pts[0].exact_location)[0] == q(-1, 3));
    CHECK((*pts[0].exact_location)[1] == 0);
    CHECK(pts[0].label == "ordinary-cusp");
    CHECK(milnor_number_exact(c, {q(-1, 3), q(0)}) == 2);
}

TEST_CASE("singular point invariants") {
    auto c = per_curve(FamilySpec::biquadratic(2), 1, Multiplier::exact(1));
    auto h = c.poly.with_vars(c.params());
    for (const auto& p : singular_points(c)) {
        if (p.exact_location) {
            std::map<std::string, Rational> at = {{"a", (*p.exact_location)[0]},
                                                  {"b", (*p.exact_location)[1]}};
            CHECK(h.eval_exact(at) == 0);
            CHECK(h.derivative("a").eval_exact(at) == 0);
            CHECK(h.derivative("b").eval_exact(at) == 0);
        }
        int sum = 0;
        for (const auto& f : p.tangent_cone.factors) {
            sum += f.multiplicity;
        }
        CHECK(sum == p.tangent_cone.degree);
    }
}

TEST_CASE("tangent cone of h1 at the real cusp") {
    auto c = per_curve(FamilySpec::biquadratic(2), 1, Multiplier::exact(1));
    auto exact = tangent_cone_exact(c, {q(-3, 4), q(-3, 4)});
    CHECK(exact.degree == 2);
    REQUIRE(exact.factors.size() == 1);
    CHECK(exact.factors[0].multiplicity == 2);
    auto num = tangent_cone(c, {-0.75, -0.75});
    CHECK(num.degree == 2);
    REQUIRE(num.factors.size() == 1);
    // Both describe the same line up to scale.
    auto u = exact.factors[0].coeffs;
    auto v = num.factors[0].coeffs;
    CHECK(std::abs(u[0] * v[1] - u[1] * v[0]) < 1e-6);
    auto smooth = tangent_cone(c, {0.0, std::cbrt(27.0 / 256.0)});
    CHECK(smooth.degree == 1);
}

TEST_CASE("quartic strata classification") {
    CHECK(quartic_strata(std::vector<Rational>{q(0), q(1), q(0)}).label == "V0");
    CHECK(quartic_strata(std::vector<Rational>{q(2), q(1), q(1)}).label == "V1");
    CHECK(quartic_strata(std::vector<Rational>{q(-3, 2), q(0), q(-3, 16)}).label == "V2");
    CHECK(quartic_strata(std::vector<Rational>{q(1), q(2), q(3)}).label == "nonsingular");
    for (auto p : {std::vector<Rational>{q(0), q(1), q(0)}, std::vector<Rational>{q(2), q(1), q(1)},
                   std::vector<Rational>{q(-3, 2), q(0), q(-3, 16)}}) {
        CHECK(quartic_strata(p).subresultant_condition);
    }
    CHECK(quartic_strata(std::vector<Complex>{2.0 + 1e-12, 1.0, 1.0}).label == "V1");
}

TEST_CASE("quartic Per_1 singular strata") {
    auto c = per_curve(FamilySpec::quartic(), 1, Multiplier::exact(1));
    auto h = c.poly.with_vars(c.params());
    auto on_curve = [&](const std::vector<Rational>& p) {
        return h.eval_exact({{"a", p[0]}, {"b", p[1]}, {"c", p[2]}}) == 0;
    };
    CHECK(on_curve({q(2), q(1), q(1)}));
    CHECK(on_curve({q(-3, 2), q(0), q(-3, 16)}));

    auto v0 = classify_exact(c, {q(0), q(1), q(0)});
    CHECK(v0.label == "triple-point");
    CHECK(v0.stratum == "V0");
    REQUIRE(v0.tangent_cone.factors.size() == 1);
    CHECK(v0.tangent_cone.factors[0].multiplicity == 3);

    auto two = tangent_cone_exact(c, {q(2), q(1), q(1)});
    CHECK(two.degree == 2);
    CHECK(two.factors.size() == 2);

    for (const auto& p : quartic_v1_samples(4)) {
        CHECK(on_curve(p));
        auto sp = classify_exact(c, p);
        CHECK(sp.label == "node");
        CHECK(sp.stratum == "V1");
    }
    for (const auto& p : quartic_v2_samples(4)) {
        CHECK(on_curve(p));
        auto sp = classify_exact(c, p);
        CHECK(sp.label == "double-point-single-tangent");
        CHECK(sp.stratum == "V2");
    }
}

TEST_CASE("numeric region search recovers a V1 point") {
    auto c = per_curve(FamilySpec::quartic(), 1, Multiplier::exact(1));
    Region reg{{2.0, 1.0, 1.0}, 0.05};
    SingularOptions opts;
    opts.starts = 60;
    auto pts = singular_points(c, reg, opts);
    REQUIRE(!pts.empty());
    for (const auto& p : pts) {
        CHECK(p.residual_h <= 1e-10);
        CHECK(p.stratum == "V1");
    }
}

TEST_CASE("cubic h_r critical points are exact") {
    for (auto r : {q(9, 10), q(99, 100), q(1, 2)}) {
        auto c = per_curve(FamilySpec::cubic(), 1, Multiplier::exact(r));
        auto cps = critical_points(c.poly.with_vars(c.params()));
        std::vector<std::vector<Rational>> expected = {{Rational((r - 3) / 6), q(0)},
                                                       {Rational(-(r + 1) / 6), q(0)}};
        for (const auto& e : expected) {
            bool found = false;
            for (const auto& cp : cps) {
                if (cp.exact_location && *cp.exact_location == e) {
                    found = true;
                    CHECK(cp.nondegenerate);
                }
            }
            CHECK(found);
        }
    }
}

TEST_CASE("biquadratic morsification near the real cusp") {
    auto track = track_morsification(FamilySpec::biquadratic(2), 1, default_r_ladder(),
                                     {-0.75, -0.75}, 0.1);
    REQUIRE(track.steps.size() == 4);
    CHECK(track.steps[1].r == q(99, 100));
    CHECK(track.steps[1].points.size() == 2);
    double prev = 1e9;
    for (const auto& step : track.steps) {
        REQUIRE(step.points.size() == 2);
        double far = 0.0;
        for (const auto& cp : step.points) {
            CHECK(cp.nondegenerate);
            far = std::max(far, dist(cp.location, {-0.75, -0.75}));
        }
        CHECK(far < prev);
        prev = far;
    }
    CHECK(track.trajectories.size() == 2);
    CHECK_THROWS_AS(track_morsification(FamilySpec::biquadratic(2), 1, {q(99, 100), q(9, 10)},
                                        {-0.75, -0.75}, 0.1),
                    DomainError);
}

TEST_CASE("Milnor number by intersection agrees with morsification") {
    auto bq = per_curve(FamilySpec::biquadratic(2), 1, Multiplier::exact(1));
    CHECK(milnor_number(bq, {-0.75, -0.75}) == 2);
    CHECK(milnor_number(bq, {-0.75, -0.75}, MilnorMethod::Morsification) == 2);
    CHECK(milnor_number_exact(bq, {q(-3, 4), q(-3, 4)}) == 2);
    auto cu = per_curve(FamilySpec::cubic(), 1, Multiplier::exact(1));
    CHECK(milnor_number(cu, {-1.0 / 3.0, 0.0}) == 2);
    CHECK(milnor_number(cu, {-1.0 / 3.0, 0.0}, MilnorMethod::Morsification) == 2);
    CHECK(milnor_number(bq, {0.0, 0.0}) == 0);
}

TEST_CASE("Milnor numbers of model singularities") {
    std::vector<std::string> v = {"a", "b"};
    auto node = curve_from_poly(ExactPoly::parse("a^2 - b^2 + a^3", v));
    CHECK(milnor_number_exact(node, {q(0), q(0)}) == 1);
    auto cusp = curve_from_poly(ExactPoly::parse("a^2 - b^3", v));
    CHECK(milnor_number_exact(cusp, {q(0), q(0)}) == 2);
    CHECK(milnor_number(cusp, {0.0, 0.0}) == 2);
    auto tacnode = curve_from_poly(ExactPoly::parse("a^2 - b^4", v));
    CHECK(milnor_number_exact(tacnode, {q(0), q(0)}) == 3);
    auto triple = curve_from_poly(ExactPoly::parse("a^3 - a*b^2 + b^5", v));
    CHECK(milnor_number_exact(triple, {q(0), q(0)}) == 4);
    auto line2 = curve_from_poly(ExactPoly::parse("a^2 - 2*a*b + b^2", v));
    CHECK_THROWS_AS(milnor_number_exact(line2, {q(0), q(0)}), NonIsolatedSingularityError);
}

TEST_CASE("degree-genus formula") {
    auto c = per_curve(FamilySpec::biquadratic(2), 1, Multiplier::exact(1));
    auto pts = singular_points(c);
    CHECK(degree_genus(c, pts) == 0);
    CHECK(degree_genus(3, {}) == 1);
    CHECK(degree_genus(2, {}) == 0);
    std::vector<SingularPoint> many(4);
    for (auto& p : many) {
        p.label = "node";
    }
    CHECK_THROWS_AS(degree_genus(4, many), DomainError);
}

TEST_CASE("family membership predicate") {
    std::vector<std::string> z = {"z"};
    auto m = validate_family_membership(ExactPoly::parse("(z^2 + 1)^2", z));
    CHECK(m.member);
    REQUIRE(m.witness.has_value());
    CHECK(std::abs(m.witness->first - 1.0) < 1e-8);
    CHECK(std::abs(m.witness->second) < 1e-8);
    CHECK_FALSE(validate_family_membership(ExactPoly::parse("z^4", z)).member);
    CHECK_FALSE(validate_family_membership(ExactPoly::parse("z^4 + z", z)).member);
    auto m3 = validate_family_membership(ExactPoly::parse("(z^3 - 2)^3 + 1/2", z));
    CHECK(m3.member);
    REQUIRE(m3.witness.has_value());
    CHECK(std::abs(m3.witness->first + 2.0) < 1e-6);
    CHECK(std::abs(m3.witness->second - 0.5) < 1e-6);
    // Complex parameters.
    Complex a{0.3, -1.1}, b{-0.4, 0.25};
    std::vector<Complex> coeffs = {a * a + b, 0.0, 2.0 * a, 0.0, 1.0};
    auto mc = validate_family_membership(coeffs);
    CHECK(mc.member);
    // Perturbing the constant-free structure breaks membership.
    coeffs[1] = 0.05;
    CHECK_FALSE(validate_family_membership(coeffs).member);
}

TEST_CASE("tricorn slice of h1 is real") {
    ExactPoly h1 = load_reference("biquadratic2_per1_1.json");
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g;
    for (int i = 0; i < 200; ++i) {
        Complex cc{g(rng), g(rng)};
        Complex s = h1.eval(std::map<std::string, Complex>{{"a", std::conj(cc)}, {"b", cc}});
        CHECK(std::abs(s.imag()) <= 1e-12 * (1.0 + std::abs(s)));
    }
}

TEST_CASE("reports serialize") {
    auto c = per_curve(FamilySpec::cubic(), 1, Multiplier::exact(1));
    auto j = curve_report(c);
    CHECK(j.contains("family"));
    CHECK(j.contains("poly"));
    CHECK(j.contains("scalar_vs_paper"));
    auto s = singular_report(singular_points(c));
    REQUIRE(s.is_array());
    CHECK(s[0]["label"] == "ordinary-cusp");
    CHECK(s[0]["milnor"] == 2);
}
