#include "pararc/errors.hpp"
#include "pararc/fatou/fatou.hpp"
#include "pararc/hausdorff/hausdorff.hpp"
#include "pararc/numeric/roots.hpp"
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace pararc;
using namespace pararc::hausdorff;

namespace {

using CPoly = std::vector<Complex>;

CPoly multiply(const CPoly& a, const CPoly& b) {
    CPoly r(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            r[i + j] += a[i] * b[j];
        }
    }
    return r;
}

// Coefficients of (z^2 + c) iterated n times, minus z.
CPoly expanded_iterate(Complex c, int n) {
    CPoly p{0.0, 1.0};
    for (int i = 0; i < n; ++i) {
        p = multiply(p, p);
        p[0] += c;
    }
    p[1] -= 1.0;
    return p;
}

double nearest(const std::vector<PeriodicPoint>& pts, Complex z) {
    double best = 1e300;
    for (const auto& p : pts) {
        best = std::min(best, std::abs(p.z - z));
    }
    return best;
}

} // namespace

TEST_CASE("periodic points of z^2 are zero and roots of unity") {
    for (int n : {3, 6, 10}) {
        auto set = periodic_points(PolyMap::unicritical(2, 0.0), n);
        const long M = (1L << n) - 1;
        CHECK(set.counted == M + 1);
        CHECK(set.points.size() == std::size_t(M + 1));
        CHECK(set.excluded == 1);
        CHECK(set.max_residual <= 1e-9);
        for (const auto& p : set.points) {
            if (std::abs(p.z) < 1e-12) {
                CHECK_FALSE(p.repelling);
                continue;
            }
            CHECK(std::abs(std::abs(p.z) - 1.0) < 1e-12);
            CHECK(std::abs(std::abs(p.multiplier) - std::ldexp(1.0, n)) < 1e-6 * std::ldexp(1.0, n));
            CHECK(p.repelling);
        }
        for (long k = 0; k < M; ++k) {
            CHECK(nearest(set.points, std::polar(1.0, 2.0 * std::numbers::pi * double(k) / double(M))) < 1e-12);
        }
    }
}

TEST_CASE("periodic points agree with roots of the expanded iterate") {
    for (Complex c : {Complex(-0.1, 0.05), Complex(0.2, -0.3), Complex(-0.5, 0.1)}) {
        for (int n : {2, 3, 4}) {
            auto set = periodic_points(PolyMap::unicritical(2, c), n);
            auto coeffs = expanded_iterate(c, n);
            auto roots = numeric::poly_roots(coeffs);
            CHECK(set.counted == long(roots.size()));
            for (Complex r : roots) {
                CHECK(nearest(set.points, r) < 1e-8);
            }
        }
    }
}

TEST_CASE("lower periods and multipliers along orbits") {
    auto set = periodic_points(PolyMap::unicritical(2, Complex(-0.1, 0.05)), 6);
    int lower = 0;
    for (const auto& p : set.points) {
        CHECK(6 % p.period == 0);
        CHECK(p.lower_period == (p.period < 6));
        lower += p.lower_period ? 1 : 0;
    }
    // Exact periods 1, 2, 3 contribute 2 + 2 + 6 points.
    CHECK(lower == 10);
}

TEST_CASE("parabolic fixed point is excluded") {
    auto set = periodic_points(PolyMap::unicritical(2, 0.25), 4);
    int excluded = 0;
    for (const auto& p : set.points) {
        if (p.parabolic_excluded) {
            ++excluded;
            CHECK(std::abs(p.z - 0.5) < 1e-6);
            CHECK(p.multiplicity == 2);
        }
    }
    CHECK(excluded == 1);
    CHECK(set.counted == 16);
}

TEST_CASE("excluded points are exactly the parabolic cycle") {
    for (double theta : {0.0, 0.5, -0.8}) {
        const Complex c = fatou::period_one_parameter(2, theta);
        const auto cyc = fatou::find_parabolic_cycle(fatou::MapParameter::multicorn(2, c), 1);
        auto set = periodic_points(PolyMap::multicorn(2, c), 8);
        CHECK(set.counted == 256);
        for (const auto& p : set.points) {
            // Forward orbit under f lands on the parabolic point.
            Complex w = p.z;
            double closest = std::abs(w - cyc.points[0]);
            for (int i = 0; i < 8; ++i) {
                w = set.map.step(w);
                closest = std::min(closest, std::abs(w - cyc.points[0]));
            }
            CHECK(p.parabolic_excluded == (closest < 1e-6));
        }
    }
}

TEST_CASE("periodic point preconditions") {
    CHECK_THROWS_AS(periodic_points(PolyMap::unicritical(2, 0.0), 15), ResourceError);
    CHECK_THROWS_AS(periodic_points(PolyMap::multicorn(2, 0.0), 3), DomainError);
    CHECK_THROWS_AS(periodic_points(PolyMap::multicorn(2, 0.0), 16), ResourceError);
    CHECK_THROWS_AS(PolyMap::unicritical(1, 0.0), DomainError);
}

TEST_CASE("pressure calibration on z^2") {
    for (int n = 8; n <= 14; n += 2) {
        auto set = periodic_points(PolyMap::unicritical(2, 0.0), n);
        CHECK(std::abs(pressure(set, 0.0) / std::log(2.0) - 1.0) <= 0.02);
        CHECK(std::abs(pressure(set, 1.0)) <= 0.02 * std::log(2.0));
        // Closed form: (1/n) log((2^n - 1) 2^(-n t)).
        const double exact = std::log(std::ldexp(1.0, n) - 1.0) / n - 0.7 * std::log(2.0);
        CHECK(pressure(set, 0.7) == doctest::Approx(exact).epsilon(1e-12));
    }
}

TEST_CASE("pressure is non-increasing in t") {
    std::vector<double> grid;
    for (int i = 0; i <= 40; ++i) {
        grid.push_back(0.05 * i);
    }
    for (Complex c : {Complex(0.0), Complex(0.25), Complex(-0.1, 0.05), Complex(-0.75, 0.1)}) {
        auto curve = pressure_curve(PolyMap::unicritical(2, c), {4, 6, 8}, grid);
        for (const auto& row : curve.values) {
            for (std::size_t j = 1; j < row.size(); ++j) {
                CHECK(row[j] <= row[j - 1]);
            }
        }
        CHECK(std::abs(curve.extrapolated[0] / std::log(2.0) - 1.0) < 0.1);
        CHECK(curve.zero.has_value());
    }
}

TEST_CASE("pressure of an orbit set without repelling points") {
    auto set = periodic_points(PolyMap::unicritical(2, 0.0), 2);
    for (auto& p : set.points) {
        p.repelling = false;
    }
    CHECK_THROWS_AS(pressure(set, 1.0), DegenerateError);
}

TEST_CASE("Bowen dimension of the circle") {
    auto est = hd_bowen(PolyMap::unicritical(2, 0.0));
    CHECK(std::abs(est.dimension - 1.0) <= 0.02);
    CHECK(est.error < 0.01);
    CHECK(std::abs(est.entropy - std::log(2.0)) < 0.01);
}

TEST_CASE("Bowen dimension near zero follows the quadratic expansion") {
    HausdorffConfig cfg;
    cfg.t_tolerance = 1e-7;
    double previous = 2.0;
    for (double r : {0.1, 0.05, 0.02}) {
        const Complex c = std::polar(r, 2.0);
        auto est = hd_bowen(PolyMap::unicritical(2, c), cfg);
        CHECK(est.dimension > 1.0);
        CHECK(est.dimension < previous);
        previous = est.dimension;
        const double expansion = 1.0 + r * r / (4.0 * std::log(2.0));
        // Sums over hyperbolic periodic points converge geometrically, so the
        // longest period is accurate up to its own bias log2(1 - 2^-12) / 12;
        // the extrapolation stays within its reported error.
        CHECK(std::abs(est.roots.back() - expansion) < 2.0 * r * r * r + 5e-5);
        CHECK(std::abs(est.dimension - expansion) <= est.error + 2.0 * r * r * r);
    }
}

TEST_CASE("Bowen estimate is stable when the ladder grows") {
    const auto map = PolyMap::unicritical(2, Complex(-0.1, 0.05));
    HausdorffConfig a;
    HausdorffConfig b;
    b.ladder = {8, 10, 12, 14};
    auto ea = hd_bowen(map, a);
    auto eb = hd_bowen(map, b);
    CHECK(std::abs(ea.dimension - eb.dimension) <= std::max(ea.error, eb.error));
    CHECK(bowen_ladder(map, 14) == std::vector<int>{8, 10, 12, 14});
    CHECK(bowen_ladder(PolyMap::multicorn(2, 0.0), 12) == std::vector<int>{6, 8, 10, 12});
}

TEST_CASE("dimension from the second and fourth iterates agree") {
    const Complex c = fatou::period_one_parameter(2, 0.3);
    auto two = hd_bowen(PolyMap::multicorn(2, c));
    HausdorffConfig cfg;
    cfg.ladder = {2, 3};
    auto four = hd_bowen(PolyMap::composition(2, {std::conj(c), c, std::conj(c), c}), cfg);
    CHECK(std::abs(two.dimension - four.dimension) <= two.error + four.error);
    // Same periodic points, so the raw roots coincide.
    CHECK(four.roots[0] == doctest::Approx(two.roots[1]).epsilon(1e-12));
    CHECK(four.roots[1] == doctest::Approx(two.roots[3]).epsilon(1e-12));
}

TEST_CASE("missing sign change is reported") {
    HausdorffConfig cfg;
    cfg.ladder = {6};
    CHECK_THROWS_AS(hd_bowen(PolyMap::multicorn(2, Complex(0.2836, 0.3599)), cfg), BracketError);
}

TEST_CASE("box counting calibration") {
    auto circle = hd_box(PolyMap::unicritical(2, 0.0));
    CHECK(std::abs(circle.dimension - 1.0) <= 0.03);
    CHECK(circle.r2 > 0.99);
    CHECK_FALSE(circle.low_confidence);
    CHECK(circle.points >= 1000000);
    auto interval = hd_box(PolyMap::unicritical(2, -2.0));
    CHECK(std::abs(interval.dimension - 1.0) <= 0.03);
    CHECK_THROWS_AS(hd_box(PolyMap::unicritical(2, 0.0), 4), DomainError);
}

TEST_CASE("box counting is reproducible from the seed") {
    HausdorffConfig cfg;
    cfg.box_points = 100000;
    auto a = hd_box(PolyMap::unicritical(2, -1.0), cfg);
    auto b = hd_box(PolyMap::unicritical(2, -1.0), cfg);
    CHECK(a.counts == b.counts);
    cfg.seed += 1;
    auto c = hd_box(PolyMap::unicritical(2, -1.0), cfg);
    CHECK(std::abs(a.dimension - c.dimension) < 0.05);
}

TEST_CASE("box and Bowen estimates agree at hyperbolic parameters") {
    double worst = 0.0;
    for (Complex c : {Complex(0.0), Complex(-0.1, 0.05), Complex(-1.0), Complex(0.2, 0.3),
                      Complex(-0.12, 0.6)}) {
        auto bowen = hd_bowen(PolyMap::unicritical(2, c));
        auto box = hd_box(PolyMap::unicritical(2, c));
        const double gap = std::abs(bowen.dimension - box.dimension);
        MESSAGE("c = " << c << "  bowen " << bowen.dimension << " +- " << bowen.error << "  box "
                       << box.dimension << "  gap " << gap);
        worst = std::max(worst, gap);
        CAPTURE(c);
        CHECK(gap <= bowen.error + 0.05);
    }
    MESSAGE("largest discrepancy " << worst);
}

TEST_CASE("constant profile has zero residual") {
    const Complex c = fatou::period_one_parameter(2, 0.2);
    HausdorffConfig cfg;
    cfg.box_points = 20000;
    std::vector<ProfileInput> in(5, ProfileInput{0.0, c});
    auto prof = arc_hd_profile(in, 2, cfg);
    CHECK(prof.jump_stat == 0.0);
    REQUIRE(prof.fit_residuals.size() == 3);
    for (double r : prof.fit_residuals) {
        CHECK(r < 1e-12);
    }
    CHECK_FALSE(prof.has_gaps);
}

TEST_CASE("profile along the period-one arc") {
    std::vector<double> hs;
    for (int i = 0; i <= 10; ++i) {
        hs.push_back(-1.0 + 0.2 * i);
    }
    auto prof = arc_hd_profile(fatou::arc_trace(1, hs));
    REQUIRE(prof.samples.size() == 11);
    CHECK_FALSE(prof.has_gaps);
    for (const auto& s : prof.samples) {
        REQUIRE(s.hd_pressure);
        REQUIRE(s.hd_box);
        CHECK(*s.hd_pressure > 0.0);
        CHECK(*s.hd_pressure < 2.0);
        CHECK(*s.hd_box > 0.0);
        CHECK(*s.hd_box < 2.0);
    }
    CHECK(prof.jump_stat < 0.02);
    REQUIRE(prof.symmetry_defect);
    CHECK(*prof.symmetry_defect <= *prof.symmetry_bound);
    CHECK(prof.fit_residuals.back() < prof.min_error);
    const auto& mid = prof.samples[5];
    CHECK(std::abs(*mid.hd_pressure - *mid.hd_box) <= 0.05);
    CHECK(profile_csv_header() == "h,c_re,c_im,hd_pressure,hd_err,hd_box,box_r2,fit_residual,jump_stat");
    auto j = to_json(prof);
    CHECK(j["samples"].size() == 11);
}
