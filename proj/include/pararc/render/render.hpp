#pragma once

#include "pararc/polyalg/rational.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace pararc::render {

using RGB = std::array<std::uint8_t, 3>;

enum class Mode {
    // Parameter planes: the pixel is c (or the free slice coordinate).
    Multicorn,
    Multibrot,
    BiquadraticSlice,
    // Dynamical plane of a fixed map: the pixel is the starting point.
    Julia,
};

struct Overlay {
    std::string name;
    std::vector<Complex> points;
    // Join consecutive points with line segments.
    bool polyline = false;
    RGB color{255, 0, 0};
    // Half-width of the square marker drawn at every point.
    int marker_radius = 2;
};

struct ImageSpec {
    Complex center{0.0, 0.0};
    // Width of the view in the complex plane; the height follows the aspect.
    double width = 4.0;
    int pixels_w = 512;
    int pixels_h = 512;
    int max_iter = 256;
    double escape_radius = 4.0;
    Mode mode = Mode::Multicorn;
    int d = 2;
    // BiquadraticSlice: the fixed coordinate ('a' or 'b') and its value.
    char slice_fixed = 'a';
    Complex slice_value{0.0, 0.0};
    // Julia: the parameter and whether the map is conj(z)^d + c.
    Complex julia_c{0.0, 0.0};
    bool julia_antiholomorphic = false;
    std::vector<Overlay> overlays;
    int threads = 1;

    // Throws DomainError unless 1 <= pixels <= 8192, max_iter >= 1,
    // escape_radius >= 2, width > 0, d >= 2 and slice_fixed is 'a' or 'b'.
    void validate() const;
};

struct Image {
    int w = 0;
    int h = 0;
    std::vector<std::uint8_t> rgb;
    // Iterations before escape per pixel, -1 when the orbit stays bounded.
    std::vector<int> escape;

    int escape_at(int x, int y) const { return escape[std::size_t(y) * std::size_t(w) + std::size_t(x)]; }
    RGB pixel(int x, int y) const;
};

// Escape-time iteration for one point of the view; -1 if bounded after
// max_iter iterations. For the slice both critical orbits are followed.
int escape_count(const ImageSpec& spec, Complex point);

Complex pixel_to_point(const ImageSpec& spec, int x, int y);
// Nearest pixel; false when the point lies outside the view.
bool point_to_pixel(const ImageSpec& spec, Complex p, int& x, int& y);

Image render(const ImageSpec& spec);

// Binary PPM; a non-empty comment is stored as one header comment line.
std::vector<std::uint8_t> ppm_bytes(const Image& image, const std::string& comment = {});
void write_ppm(const Image& image, const std::string& path, const std::string& comment = {});

// Parameter points from an arc CSV (c_re, c_im columns, '#' lines skipped) or a singular-point
// JSON report (last coordinate of each location, i.e. c = b on the
// antiholomorphic slice). Throws IoError naming the path.
Overlay load_overlay(const std::string& path);

// Markers at -3/4 times the cube roots of unity: the period-one cusps of
// the tricorn.
Overlay tricorn_cusps();

Mode parse_mode(const std::string& text);
std::string to_string(Mode mode);

} // namespace pararc::render
