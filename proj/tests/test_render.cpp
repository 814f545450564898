#include "pararc/errors.hpp"
#include "pararc/fatou/fatou.hpp"
#include "pararc/render/render.hpp"
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

using namespace pararc;
using namespace pararc::render;

namespace {

// Both escaping and bounded pixels within the given Chebyshev radius.
bool straddles(const Image& img, int x, int y, int radius) {
    bool escaped = false, bounded = false;
    for (int dy = -radius; dy <= radius; ++dy) {
        for (int dx = -radius; dx <= radius; ++dx) {
            const int u = x + dx, v = y + dy;
            if (u < 0 || v < 0 || u >= img.w || v >= img.h) {
                continue;
            }
            (img.escape_at(u, v) < 0 ? bounded : escaped) = true;
        }
    }
    return escaped && bounded;
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

} // namespace

TEST_CASE("julia set of z^2 is the closed unit disk") {
    ImageSpec spec;
    spec.mode = Mode::Julia;
    spec.julia_c = 0.0;
    CHECK(escape_count(spec, 0.0) == -1);
    CHECK(escape_count(spec, Complex(0.6, -0.7)) == -1);
    const int n = escape_count(spec, 2.0);
    CHECK(n >= 0);
    CHECK(n <= 2);
    CHECK(escape_count(spec, Complex(5.0, 0.0)) == 0);

    spec.pixels_w = spec.pixels_h = 101;
    spec.width = 3.0;
    const Image img = render::render(spec);
    for (int y = 0; y < img.h; ++y) {
        for (int x = 0; x < img.w; ++x) {
            const double r = std::abs(pixel_to_point(spec, x, y));
            if (r < 0.98) {
                CHECK(img.escape_at(x, y) == -1);
                CHECK(img.pixel(x, y) == RGB{0, 0, 0});
            } else if (r > 1.02) {
                CHECK(img.escape_at(x, y) >= 0);
            }
        }
    }
}

TEST_CASE("pixel mapping round trip") {
    ImageSpec spec;
    spec.center = Complex(-0.3, 0.2);
    spec.width = 1.5;
    spec.pixels_w = 300;
    spec.pixels_h = 200;
    for (int y : {0, 17, 199}) {
        for (int x : {0, 123, 299}) {
            int u = -1, v = -1;
            REQUIRE(point_to_pixel(spec, pixel_to_point(spec, x, y), u, v));
            CHECK(u == x);
            CHECK(v == y);
        }
    }
    int u = 0, v = 0;
    CHECK_FALSE(point_to_pixel(spec, Complex(10.0, 0.0), u, v));
    // Up in the plane is up in the image.
    CHECK(pixel_to_point(spec, 0, 0).imag() > pixel_to_point(spec, 0, 199).imag());
}

TEST_CASE("rendering is deterministic across thread counts") {
    ImageSpec spec;
    spec.pixels_w = 160;
    spec.pixels_h = 120;
    spec.overlays.push_back(tricorn_cusps());
    const auto a = ppm_bytes(render::render(spec));
    const auto b = ppm_bytes(render::render(spec));
    spec.threads = 4;
    const auto c = ppm_bytes(render::render(spec));
    CHECK(a == b);
    CHECK(a == c);
    const std::string header = "P6\n160 120\n255\n";
    REQUIRE(a.size() == header.size() + 3 * 160 * 120);
    CHECK(std::string(a.begin(), a.begin() + long(header.size())) == header);
}

TEST_CASE("tricorn escape counts have threefold and mirror symmetry") {
    ImageSpec spec;
    spec.max_iter = 200;
    const Complex omega = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    int total = 0, mismatched = 0;
    for (int i = 0; i < 2000; ++i) {
        const Complex c(u(rng), u(rng));
        const int e0 = escape_count(spec, c);
        for (Complex image : {omega * c, omega * omega * c, std::conj(c)}) {
            const int e = escape_count(spec, image);
            ++total;
            if (e != e0) {
                ++mismatched;
                // Only roundoff at the escape threshold can separate them.
                CHECK(e >= 0);
                CHECK(e0 >= 0);
                CHECK(std::abs(e - e0) <= 1);
            }
        }
    }
    CHECK(mismatched * 100 <= total);
}

TEST_CASE("multibrot and slice modes") {
    ImageSpec spec;
    spec.mode = Mode::Multibrot;
    CHECK(escape_count(spec, -1.0) == -1);
    CHECK(escape_count(spec, 0.25) == -1);
    CHECK(escape_count(spec, 0.3) >= 0);
    spec.d = 3;
    CHECK(escape_count(spec, Complex(0.0, 0.5)) == -1);

    // a = 0 reduces the slice to z^4 + b.
    ImageSpec slice;
    slice.mode = Mode::BiquadraticSlice;
    slice.slice_fixed = 'a';
    slice.slice_value = 0.0;
    ImageSpec quartic;
    quartic.mode = Mode::Multibrot;
    quartic.d = 4;
    for (Complex b : {Complex(0.1, 0.2), Complex(0.9, 0.0), Complex(-0.8, 0.3), Complex(0.0, 1.2)}) {
        CHECK((escape_count(slice, b) < 0) == (escape_count(quartic, b) < 0));
    }
    // The antiholomorphic slice a = conj(b) contains the tricorn parameters.
    ImageSpec tricorn;
    for (Complex c : {Complex(-0.2, 0.1), Complex(0.3, 0.0), Complex(-1.0, 0.0)}) {
        ImageSpec s = slice;
        s.slice_value = std::conj(c);
        CHECK((escape_count(s, c) < 0) == (escape_count(tricorn, c) < 0));
    }
}

TEST_CASE("cusp markers and arc overlay sit on the tricorn boundary") {
    ImageSpec spec;
    spec.pixels_w = spec.pixels_h = 512;
    spec.width = 4.0;
    spec.max_iter = 500;
    const Overlay cusps = tricorn_cusps();
    std::vector<double> heights;
    for (int i = 0; i <= 20; ++i) {
        heights.push_back(-2.0 + 0.2 * i);
    }
    Overlay arc;
    arc.polyline = true;
    for (const auto& s : fatou::arc_trace(1, heights)) {
        arc.points.push_back(s.c);
    }
    spec.overlays = {cusps, arc};
    const Image img = render::render(spec);
    for (Complex p : arc.points) {
        int x = 0, y = 0;
        REQUIRE(point_to_pixel(spec, p, x, y));
        INFO("arc point " << p);
        CHECK(straddles(img, x, y, 3));
        CHECK(img.pixel(x, y) == arc.color);
    }
    // Cusps are the rotated corners of the deltoid and lie in the set.
    const Complex omega = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
    REQUIRE(cusps.points.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        const Complex p = cusps.points[i];
        CHECK(std::abs(cusps.points[(i + 1) % 3] - omega * p) < 1e-12);
        int x = 0, y = 0;
        REQUIRE(point_to_pixel(spec, p, x, y));
        CHECK(img.pixel(x, y) == cusps.color);
        CHECK(escape_count(spec, p) == -1);
        CHECK(escape_count(spec, 0.9 * p) == -1);
    }
}

TEST_CASE("overlay points outside the view are clipped") {
    ImageSpec spec;
    spec.pixels_w = spec.pixels_h = 64;
    Overlay far;
    far.polyline = true;
    far.points = {Complex(100.0, 100.0), Complex(-1e6, 3.0), Complex(0.0, 0.0), Complex(1e9, -1e9)};
    spec.overlays = {far};
    Image img;
    CHECK_NOTHROW(img = render::render(spec));
    int x = 0, y = 0;
    REQUIRE(point_to_pixel(spec, 0.0, x, y));
    CHECK(img.pixel(x, y) == far.color);

    // A segment between two far away endpoints still crosses the view.
    Overlay across;
    across.polyline = true;
    across.marker_radius = 0;
    across.color = {1, 2, 3};
    across.points = {Complex(-1e12, 0.0), Complex(1e12, 0.0)};
    spec.overlays = {across};
    img = render::render(spec);
    for (int u = 0; u < img.w; ++u) {
        CHECK(img.pixel(u, y) == across.color);
    }
}

TEST_CASE("spec validation") {
    ImageSpec spec;
    spec.pixels_w = 8193;
    CHECK_THROWS_AS(render::render(spec), DomainError);
    spec.pixels_w = 0;
    CHECK_THROWS_AS(spec.validate(), DomainError);
    spec = {};
    spec.escape_radius = 1.5;
    CHECK_THROWS_AS(spec.validate(), DomainError);
    spec = {};
    spec.max_iter = 0;
    CHECK_THROWS_AS(spec.validate(), DomainError);
    spec = {};
    spec.d = 1;
    CHECK_THROWS_AS(spec.validate(), DomainError);
    spec = {};
    spec.slice_fixed = 'x';
    CHECK_THROWS_AS(spec.validate(), DomainError);
    CHECK_THROWS_AS(parse_mode("mandelbar"), DomainError);
    for (Mode m : {Mode::Multicorn, Mode::Multibrot, Mode::BiquadraticSlice, Mode::Julia}) {
        CHECK(parse_mode(to_string(m)) == m);
    }
}

TEST_CASE("ppm output and io errors") {
    ImageSpec spec;
    spec.pixels_w = 8;
    spec.pixels_h = 4;
    const Image img = render::render(spec);
    const std::string path = temp_path("pararc_render_test.ppm");
    write_ppm(img, path);
    std::ifstream is(path, std::ios::binary);
    const std::vector<char> bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    const auto expected = ppm_bytes(img);
    CHECK(std::vector<std::uint8_t>(bytes.begin(), bytes.end()) == expected);
    const auto commented = ppm_bytes(img, "seed 1\nthreads 2");
    const std::string want = "P6\n# seed 1 threads 2\n8 4\n255\n";
    REQUIRE(commented.size() == want.size() + img.rgb.size());
    CHECK(std::string(commented.begin(), commented.begin() + long(want.size())) == want);
    std::filesystem::remove(path);

    const std::string bad = "/nonexistent-dir/out.ppm";
    try {
        write_ppm(img, bad);
        FAIL("expected IoError");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find(bad) != std::string::npos);
    }
    CHECK_THROWS_AS(load_overlay("/nonexistent-dir/arc.csv"), IoError);
}

TEST_CASE("overlays load from arc csv and singular json") {
    const auto samples = fatou::arc_trace(1, {-0.5, 0.0, 0.5});
    const std::string csv = temp_path("pararc_arc.csv");
    {
        std::ofstream os(csv);
        os << fatou::arc_csv_header() << "\n";
        for (const auto& s : samples) {
            os << fatou::arc_csv_row(s) << "\n";
        }
    }
    const Overlay arc = load_overlay(csv);
    CHECK(arc.polyline);
    REQUIRE(arc.points.size() == samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        CHECK(std::abs(arc.points[i] - samples[i].c) < 1e-12);
    }

    const std::string json = temp_path("pararc_singular.json");
    {
        std::ofstream os(json);
        os << R"({"singular_points": [{"location": [[0.25, -0.5], [0.25, 0.5]], "type": "node"},
                                      {"location": [[-1.0, 0.0], [-1.0, 0.0]], "type": "cusp"}]})";
    }
    const Overlay sing = load_overlay(json);
    CHECK_FALSE(sing.polyline);
    REQUIRE(sing.points.size() == 2);
    CHECK(sing.points[0] == Complex(0.25, 0.5));
    CHECK(sing.points[1] == Complex(-1.0, 0.0));

    {
        std::ofstream os(json);
        os << "{not json";
    }
    CHECK_THROWS_AS(load_overlay(json), IoError);
    std::filesystem::remove(csv);
    std::filesystem::remove(json);
}
