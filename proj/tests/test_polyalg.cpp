#include "doctest.h"

#include "pararc/errors.hpp"
#include "pararc/polyalg/algebra.hpp"
#include "pararc/polyalg/upoly.hpp"
#include "test_support.hpp"

#include <cmath>

using namespace pararc;
using namespace pararc::polyalg;
using testsupport::load_reference;
using testsupport::random_poly;

namespace {

ExactPoly P(const std::string& s, std::vector<std::string> vars) {
    return ExactPoly::parse(s, std::move(vars));
}

bool proportional(const ExactPoly& a, const ExactPoly& b) {
    return proportionality_scalar(a, b).has_value();
}

} // namespace

TEST_CASE("rational canonical form") {
    Rational q = parse_rational("6/-8");
    CHECK(q == Rational(-3, 4));
    CHECK(q.get_den() > 0);
    CHECK(to_string(parse_rational("10/4")) == "5/2");
    CHECK_THROWS_AS(parse_rational("1/0"), DomainError);
}

TEST_CASE("parse and print") {
    auto p = P("(z^2+a)^2+b", {"z", "a", "b"});
    CHECK(p == P("z^4 + 2*a*z^2 + a^2 + b", {"z", "a", "b"}));
    CHECK(p.degree("z") == 4);
    CHECK(p.total_degree_without("z") == 2);
    CHECK(P(p.to_string(), {"z", "a", "b"}) == p);
    CHECK(P("3/4*x - -x", {"x"}) == P("7/4*x", {"x"}));
    CHECK_THROWS_AS(P("x + y", {"x"}), DomainError);
    CHECK_THROWS_AS(P("x +", {"x"}), DomainError);
}

TEST_CASE("no stored zero coefficients") {
    auto x = P("x", {"x", "y"});
    auto y = P("y", {"x", "y"});
    auto d = (x + y) * (x - y) - (x * x - y * y);
    CHECK(d.is_zero());
    CHECK(d.size() == 0);
}

TEST_CASE("iterate") {
    auto f = P("z^2+c", {"z", "c"});
    CHECK(iterate(f, 1) == f);
    CHECK(iterate(f, 2) == P("z^4 + 2*c*z^2 + c^2 + c", {"z", "c"}));
    auto g = P("(z^2+a)^2+b", {"z", "a", "b"});
    CHECK(iterate(g, 2).degree("z") == 16);
    CHECK_THROWS_AS(iterate(g, 3), ResourceError);
    try {
        iterate(g, 3);
    } catch (const ResourceError& e) {
        CHECK(std::string(e.what()).find("40") != std::string::npos);
    }
    DegreeCaps loose{100, 200};
    CHECK(iterate(g, 3, "z", loose).degree("z") == 64);
}

TEST_CASE("iterate agrees with numeric iteration") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.4, 1.4);
    const std::vector<std::string> forms = {"z^2+c", "z^3 - 3*c*z + 1/2", "z^2 + c*z"};
    for (const auto& form : forms) {
        auto f = P(form, {"z", "c"});
        for (int n = 1; n <= 3; ++n) {
            auto fn = iterate(f, n);
            for (int trial = 0; trial < 10; ++trial) {
                Complex c(u(rng), u(rng));
                Complex z(u(rng) * 0.7, u(rng) * 0.7);
                Complex w = z;
                for (int i = 0; i < n; ++i) {
                    w = f.eval({{"z", w}, {"c", c}});
                }
                Complex v = fn.eval({{"z", z}, {"c", c}});
                CHECK(std::abs(v - w) <= 1e-10 * std::max(1.0, std::abs(w)));
            }
        }
    }
}

TEST_CASE("resultant small cases") {
    auto r1 = resultant(P("z^2 - t", {"z", "t"}), P("z - 1", {"z", "t"}), "z");
    CHECK(r1 == P("1 - t", {"z", "t"}));
    // Sylvester determinant by hand: rows (1,a,b), (2,a,0), (0,2,a).
    auto p = P("z^2 + a*z + b", {"z", "a", "b"});
    auto q = P("2*z + a", {"z", "a", "b"});
    auto expect = P("4*b - a^2", {"z", "a", "b"});
    for (auto m : {ResultantMethod::Automatic, ResultantMethod::Subresultant,
                   ResultantMethod::Bareiss, ResultantMethod::Interpolation}) {
        CHECK(resultant(p, q, "z", m) == expect);
    }
    CHECK_THROWS_AS(resultant(ExactPoly({"z"}), q, "z"), DomainError);
    // Res(z^2-1, z-2) = (1-2)(-1-2) = 3.
    auto u = resultant(P("z^2 - 1", {"z"}), P("z - 2", {"z"}), "z");
    CHECK(u == ExactPoly::constant({"z"}, Rational(3)));
}

TEST_CASE("resultant properties on random instances") {
    std::mt19937_64 rng(2024);
    const std::vector<std::string> vars = {"z", "a"};
    for (int trial = 0; trial < 12; ++trial) {
        auto p = random_poly(rng, vars, {3, 2}, 5) + P("z^3", vars);
        auto q1 = random_poly(rng, vars, {2, 1}, 4) + P("2*z^2", vars);
        auto q2 = random_poly(rng, vars, {1, 2}, 3) + P("z", vars);
        int dp = p.degree("z");
        int dq = q1.degree("z");
        auto r_pq = resultant(p, q1, "z");
        auto r_qp = resultant(q1, p, "z");
        CHECK(r_pq == r_qp * Rational((dp * dq) % 2 ? -1 : 1));
        CHECK(resultant(p, q1 * q2, "z") == r_pq * resultant(p, q2, "z"));
        auto direct = resultant(p, q1, "z", ResultantMethod::Bareiss);
        CHECK(resultant_by_interpolation(p, q1, "z") == direct);
        CHECK(resultant(p, q1, "z", ResultantMethod::Subresultant) == direct);
    }
}

TEST_CASE("interpolation honours node budget") {
    auto p = P("z^3 + a*z + b", {"z", "a", "b"});
    auto q = p.derivative("z");
    auto bounds = resultant_degree_bounds(p, q, "z");
    CHECK(bounds.at("a") == 5);
    CHECK(bounds.at("b") == 2);
    CHECK_THROWS_AS(resultant_by_interpolation(p, q, "z", 2), ResourceError);
    try {
        resultant_by_interpolation(p, q, "z", 2);
    } catch (const ResourceError& e) {
        CHECK(std::string(e.what()).find("requires") != std::string::npos);
    }
    CHECK(resultant_by_interpolation(p, q, "z", 6) == resultant(p, q, "z"));
}

TEST_CASE("interpolation skips nodes where the leading coefficient vanishes") {
    // lc = a vanishes at the first node a = 0.
    auto p = P("a*z^2 + z + b", {"z", "a", "b"});
    auto q = P("z - b", {"z", "a", "b"});
    CHECK(resultant_by_interpolation(p, q, "z") == resultant(p, q, "z", ResultantMethod::Bareiss));
}

TEST_CASE("discriminant") {
    auto quad = discriminant(P("z^2 + b*z + c", {"z", "b", "c"}), "z");
    CHECK(quad.normalized);
    CHECK(quad.poly == P("b^2 - 4*c", {"z", "b", "c"}));
    CHECK_THROWS_AS(discriminant(P("z + 1", {"z"}), "z"), DomainError);

    // prod (r_i - r_j)^2 for distinct rational roots.
    const std::vector<Rational> roots = {Rational(-2), Rational(1, 3), Rational(5, 2), Rational(4)};
    ExactPoly f = ExactPoly::constant({"z"}, Rational(1));
    Rational expect = 1;
    for (std::size_t i = 0; i < roots.size(); ++i) {
        f *= P("z", {"z"}) - ExactPoly::constant({"z"}, roots[i]);
        for (std::size_t j = i + 1; j < roots.size(); ++j) {
            expect *= (roots[i] - roots[j]) * (roots[i] - roots[j]);
        }
    }
    CHECK(discriminant(f, "z").poly == ExactPoly::constant({"z"}, expect));

    auto nonunit = discriminant(P("a*z^2 + z + 1", {"z", "a"}), "z");
    CHECK_FALSE(nonunit.normalized);
    CHECK(proportional(nonunit.poly, P("1 - 4*a", {"z", "a"}) * P("a", {"z", "a"})));
}

TEST_CASE("discriminant of the biquadratic fixed-point equation") {
    auto f = P("(z^2+a)^2+b - z", {"z", "a", "b"});
    auto h1 = load_reference("biquadratic2_per1_1.json");
    auto disc = discriminant(f, "z").poly;
    CHECK(proportional(disc, h1));
    CHECK(resultant_by_interpolation(f, f.derivative("z"), "z") ==
          resultant(f, f.derivative("z"), "z", ResultantMethod::Bareiss));
}

TEST_CASE("cubic family multiplier curve") {
    auto f = P("z^3 - 3*a*z + b", {"z", "a", "b", "r"});
    auto g = f - P("z", {"z"});
    auto fr = f.derivative("z") - P("r", {"r"});
    auto res = resultant(g, fr, "z");
    CHECK(proportional(res, load_reference("cubic_per1_r.json")));
    CHECK(resultant_by_interpolation(g, fr, "z") == resultant(g, fr, "z", ResultantMethod::Bareiss));
    CHECK(proportional(discriminant(g, "z").poly, load_reference("cubic_per1_1.json")));
}

TEST_CASE("quartic fixed-point discriminant by interpolation") {
    auto g = P("z^4 + a*z^2 + b*z + c - z", {"z", "a", "b", "c"});
    auto res = resultant_by_interpolation(g, g.derivative("z"), "z");
    CHECK(proportional(res, load_reference("quartic_per1_1.json")));
}

TEST_CASE("evaluation at distinguished points") {
    auto h1 = load_reference("biquadratic2_per1_1.json");
    CHECK(h1.eval_exact({{"a", Rational(-3, 4)}, {"b", Rational(-3, 4)}}) == 0);
    CHECK(h1.eval_exact({{"a", Rational(0)}, {"b", Rational(0)}}) == -27);
    auto quartic = load_reference("quartic_per1_1.json");
    CHECK(quartic.eval_exact({{"a", 0}, {"b", 1}, {"c", 0}}) == 0);
    CHECK_THROWS_AS(h1.eval(std::map<std::string, Complex>{{"a", 1.0}}), DomainError);
}

TEST_CASE("exact division and gcd") {
    const std::vector<std::string> v = {"a", "b"};
    auto f = P("a^2 - b^2", v);
    CHECK(exact_divide(f, P("a - b", v)) == P("a + b", v));
    CHECK_THROWS_AS(exact_divide(f, P("a + 1", v)), DomainError);
    CHECK(divides(P("a + b", v), f));
    CHECK_FALSE(divides(P("a + 2*b", v), f));
    CHECK(gcd(P("(a-b)^2*(a+1)", v), P("(a-b)*(b+3)", v)) == P("a - b", v));
    CHECK(gcd(P("6*a + 6", v), P("4*a + 4", v)) == P("a + 1", v));
    CHECK(gcd(P("a", v), P("b", v)) == ExactPoly::constant(v, Rational(1)));
}

TEST_CASE("square-free part") {
    const std::vector<std::string> v = {"a", "b"};
    CHECK(proportional(squarefree_part(P("(a-b)^2", v)), P("a - b", v)));
    CHECK(proportional(squarefree_part(P("a^2*b^3 + a^2*b^2", v)), P("a*b*(b+1)", v)));
    auto h1 = load_reference("biquadratic2_per1_1.json");
    CHECK(proportional(squarefree_part(h1), h1));
    auto sq = squarefree_part(h1 * h1 * P("a + b", {"a", "b"}));
    CHECK(proportional(sq, h1 * P("a + b", {"a", "b"})));
}

TEST_CASE("json round trip") {
    auto h1 = load_reference("biquadratic2_per1_1.json");
    auto back = poly_from_json(to_json(h1 * Rational(3, 7)));
    CHECK(back == h1 * Rational(3, 7));
    CHECK_THROWS_AS(poly_from_json(nlohmann::json::object()), DomainError);
}

TEST_CASE("univariate helpers") {
    UPoly p = upoly::from_poly(P("(x-1)^2*(x+2)*(3*x-1)", {"x"}), "x");
    auto roots = upoly::rational_roots(p);
    REQUIRE(roots.size() == 3);
    CHECK(roots[0] == -2);
    CHECK(roots[1] == Rational(1, 3));
    CHECK(roots[2] == 1);
    CHECK(upoly::root_multiplicity(p, Rational(1)) == 2);
    auto sq = upoly::squarefree_decomposition(p);
    REQUIRE(sq.size() == 2);
    CHECK(sq[1].second == 2);
}
