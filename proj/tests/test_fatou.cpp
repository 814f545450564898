#include "pararc/errors.hpp"
#include "pararc/fatou/fatou.hpp"
#include "doctest.h"

#include <cmath>
#include <random>

using namespace pararc;
using namespace pararc::fatou;

namespace {

std::vector<Complex> random_petal_points(const FatouCoordinate& phi, int count, unsigned seed) {
    const auto& cyc = phi.cycle();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> t(0.005, 0.05);
    std::uniform_real_distribution<double> ang(-0.5, 0.5);
    std::vector<Complex> out;
    for (int i = 0; i < count; ++i) {
        out.push_back(cyc.points[0] - std::polar(t(rng) * phi.petal_scale(), ang(rng)) / cyc.alpha);
    }
    return out;
}

// Slice equation of the biquadratic Per_1(1) on a = conj(c), b = c.
double slice_value(Complex c) {
    return 512.0 * std::real(c * c * c) + 288.0 * std::norm(c) + 256.0 * std::norm(c) * std::norm(c) -
           27.0;
}

} // namespace

TEST_CASE("tricorn c = 1/4 has a simple parabolic fixed point at 1/2") {
    auto cyc = find_parabolic_cycle(MapParameter::multicorn(2, 0.25), 1);
    REQUIRE(cyc.points.size() == 1);
    CHECK(std::abs(cyc.points[0] - 0.5) < 1e-10);
    CHECK(std::abs(cyc.multiplier - 1.0) < 1e-6);
    CHECK(cyc.q == 1);
    // P(z) = (z^2 + 1/4)^2 + 1/4 has P''(1/2)/2 = 2.
    CHECK(std::abs(cyc.alpha - 2.0) < 1e-10);
    CHECK(std::abs(cyc.param.f(cyc.points[0]) - cyc.points[0]) < 1e-10);
}

TEST_CASE("tricorn c = -3/4 is a cusp") {
    auto cyc = find_parabolic_cycle(MapParameter::multicorn(2, -0.75), 1);
    CHECK(cyc.q == 2);
    CHECK(std::abs(cyc.points[0] + 0.5) < 1e-6);
    CHECK_THROWS_AS(critical_ecalle_height(-0.75, 1), CuspError);
    CHECK_THROWS_AS(fatou_coordinate(cyc), CuspError);
}

TEST_CASE("superattracting parameter is not parabolic") {
    CHECK_THROWS_AS(find_parabolic_cycle(MapParameter::multicorn(2, 0.0), 1), NotParabolicError);
    CHECK_THROWS_AS(find_parabolic_cycle(MapParameter::multicorn(2, 0.0), 3), NotParabolicError);
}

TEST_CASE("Fatou coordinate satisfies the Abel equation") {
    auto cyc = find_parabolic_cycle(MapParameter::multicorn(2, period_one_parameter(2, 0.4)), 1);
    auto phi = fatou_coordinate(cyc);
    for (Complex z : random_petal_points(phi, 100, 3)) {
        CHECK(std::abs(phi(cyc.param.P(z)) - phi(z) - 1.0) <= 1e-6);
    }
}

TEST_CASE("Fatou coordinate does not depend on where the expansion is evaluated") {
    for (double theta : {0.0, 0.4, -0.7}) {
        auto cyc = find_parabolic_cycle(MapParameter::multicorn(2, period_one_parameter(2, theta)), 1);
        FatouConfig shallow;
        shallow.asymptotic_radius = 0.05;
        FatouConfig deep;
        deep.asymptotic_radius = 0.01;
        FatouConfig short_series;
        short_series.series_terms = 0;
        short_series.asymptotic_radius = 1e-4;
        FatouCoordinate a(cyc, shallow);
        FatouCoordinate b(cyc, deep);
        FatouCoordinate c(cyc, short_series);
        for (Complex z : random_petal_points(a, 20, 5)) {
            CHECK(std::abs(a(z) - b(z)) <= 1e-9);
            // Two-term asymptotics alone are accurate to O(|alpha w|).
            CHECK(std::abs(a(z) - c(z)) <= 1e-4);
        }
    }
}

TEST_CASE("normalized coordinate conjugates f to conj + 1/2") {
    for (double theta : {0.0, 0.3, -0.6, 0.85}) {
        auto cyc = find_parabolic_cycle(MapParameter::multicorn(2, period_one_parameter(2, theta)), 1);
        auto phi = fatou_coordinate(cyc);
        for (Complex z : random_petal_points(phi, 100, 9)) {
            Complex lhs = phi(cyc.param.f(z));
            Complex rhs = std::conj(phi(z)) + 0.5;
            CHECK(std::abs(lhs - rhs) <= 1e-6);
        }
        auto sym = phi.antiholomorphic_symmetry();
        CHECK(std::abs(sym.mu) < 1e-9);
    }
}

TEST_CASE("critical Ecalle height vanishes on the real axis") {
    CHECK(std::abs(critical_ecalle_height(0.25, 1)) < 1e-5);
    // Mirror parameters have opposite heights.
    Complex c = period_one_parameter(2, 0.35);
    CHECK(std::abs(critical_ecalle_height(c, 1) + critical_ecalle_height(std::conj(c), 1)) < 1e-8);
}

TEST_CASE("Fatou vector at c = 1/4") {
    CHECK(std::abs(fatou_vector(0.25, 0.25, 1) - Complex(0.5, 0.0)) < 1e-3);
}

TEST_CASE("Fatou vector is independent of the normalization") {
    Complex c = period_one_parameter(2, 0.5);
    auto cyc = find_parabolic_cycle(MapParameter::multicorn(2, c), 1);
    auto phi = fatou_coordinate(cyc);
    const Complex v = fatou_vector(phi);
    for (Complex p : phi.probe_points(4)) {
        CHECK(std::abs(fatou_vector(phi.rebased(p, Complex(3.0, -2.0))) - v) < 1e-9);
    }
    CHECK(std::abs(fatou_vector(phi.shifted(Complex(0.0, 7.0))) - v) < 1e-9);
    // The holomorphic computation never sees the equator normalization.
    CHECK(std::abs(fatou_vector(std::conj(c), c, 1) - v) < 1e-9);
}

TEST_CASE("period-one parametrization lies on the slice curve") {
    for (int i = -9; i <= 9; ++i) {
        Complex c = period_one_parameter(2, 0.1 * i);
        CHECK(std::abs(slice_value(c)) < 1e-12);
    }
    CHECK(std::abs(period_one_parameter(2, 0.0) - 0.25) < 1e-15);
    // Cusps at the arc ends.
    auto [lo, hi] = period_one_arc_interval(2, 0);
    CHECK(std::abs(period_one_parameter(2, hi) - (-0.75) * std::polar(1.0, -2.0 * std::acos(-1.0) / 3.0)) < 1e-12);
    CHECK(std::abs(period_one_parameter(2, lo) - (-0.75) * std::polar(1.0, 2.0 * std::acos(-1.0) / 3.0)) < 1e-12);
    auto cyc = find_parabolic_cycle(MapParameter::multicorn(2, period_one_parameter(2, hi)), 1);
    CHECK(cyc.q == 2);
}

TEST_CASE("arc trace round trip") {
    auto samples = arc_trace(1, {-1.0, -0.5, 0.0, 0.5, 1.0});
    REQUIRE(samples.size() == 5);
    CHECK(std::abs(samples[2].c - 0.25) <= 1e-8);
    for (const auto& s : samples) {
        CAPTURE(s.h_target);
        CHECK(std::abs(s.h_achieved - s.h_target) <= 1e-5);
        CHECK(std::abs(critical_ecalle_height(s.c, 1) - s.h_target) <= 1e-5);
        CHECK(std::abs(s.fatou_vector.imag() + 2.0 * s.h_achieved) <= 2e-3);
        double re = s.fatou_vector.real() - 0.5;
        CHECK(std::abs(re - std::round(re)) <= 2e-3);
        CHECK(s.curve_residual <= 1e-8);
        CHECK(std::abs(slice_value(s.c)) <= 1e-8);
    }
    // Heights increase along the arc in the direction of positive Im c.
    CHECK(samples[4].c.imag() > samples[3].c.imag());
}

TEST_CASE("arc trace on a non-real arc and in degree three") {
    auto s = arc_trace(1, {0.25}, 1);
    REQUIRE(s.size() == 1);
    CHECK(std::abs(s[0].h_achieved - 0.25) <= 1e-5);
    auto cubic = arc_trace(1, {0.0, 0.3}, 0, 3);
    CHECK(std::abs(cubic[0].c.imag()) < 1e-8);
    CHECK(std::abs(cubic[1].h_achieved - 0.3) <= 1e-5);
    CHECK_THROWS_AS(arc_trace(3, {0.0}), DomainError);
}

TEST_CASE("arc speeds are bounded away from zero") {
    std::vector<double> hs;
    for (int i = 0; i <= 20; ++i) {
        hs.push_back(-1.0 + 0.1 * i);
    }
    auto samples = arc_trace(1, hs);
    auto rep = arc_derivative_check(samples);
    CHECK(rep.speeds.size() == 19);
    CHECK(rep.flagged.empty());
    for (double v : rep.speeds) {
        CHECK(v > 1e-4);
    }
    std::vector<ArcSample> rev(samples.rbegin(), samples.rend());
    auto rrep = arc_derivative_check(rev);
    for (std::size_t i = 0; i < rep.speeds.size(); ++i) {
        CHECK(rrep.speeds[rep.speeds.size() - 1 - i] == doctest::Approx(rep.speeds[i]).epsilon(1e-12));
    }
    std::vector<ArcSample> flat = samples;
    for (auto& s : flat) {
        s.c = 0.25;
    }
    auto frep = arc_derivative_check(flat);
    CHECK(frep.flagged.size() == frep.speeds.size());
    CHECK_THROWS_AS(arc_derivative_check({samples[0], samples[1]}), DomainError);
}

TEST_CASE("deformation map values") {
    const Complex I(0.0, 1.0);
    const Complex w(1.0, 0.125);
    CHECK(std::abs(deformation_map_L(0.25, w) - (0.125 + I)) < 1e-15);
    CHECK(std::abs(deformation_map_L(0.75, w) - (0.875 - I)) < 1e-15);
    CHECK(std::abs(deformation_map_L(0.25, 1.0) - (0.25 + I)) < 1e-15);
    CHECK(std::abs(deformation_map_L(0.75, 1.0) - (0.75 - I)) < 1e-15);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 50; ++i) {
        Complex z(u(rng), u(rng));
        CHECK(deformation_map_L(z, 0.0) == z);
        Complex w2(u(rng), 0.2 * u(rng) / 2.0);
        CHECK(std::abs(deformation_map_L(0.25, w2) - (0.25 + I * w2)) < 1e-14);
        CHECK(std::abs(deformation_map_L(0.75, w2) - (0.75 - I * w2)) < 1e-14);
        CHECK(std::abs(deformation_map_L(z + 1.0, w2) - deformation_map_L(z, w2) - 1.0) < 1e-12);
    }
    CHECK_THROWS_AS(deformation_map_L(0.5, Complex(0.0, 0.25)), DomainError);
}

TEST_CASE("deformation map commutes with the half twist only for real w") {
    std::vector<Complex> grid;
    for (int i = 0; i <= 20; ++i) {
        for (int j = -5; j <= 5; ++j) {
            grid.emplace_back(0.05 * i, 0.3 * j);
        }
    }
    for (int i = 0; i < 20; ++i) {
        CHECK(commutation_defect(-3.0 + 0.3 * i, grid) < 1e-12);
    }
    CHECK(commutation_defect(Complex(0.0, 0.125), grid) > 0.01);
}

TEST_CASE("arc CSV layout") {
    CHECK(arc_csv_header() == "h_target,c_re,c_im,h_achieved,fv_re,fv_im,curve_residual,speed");
    ArcSample s;
    s.c = 0.25;
    CHECK(arc_csv_row(s).rfind("0,0.25,0,", 0) == 0);
    auto j = to_json(s);
    CHECK(j["speed"].is_null());
}
