#include "pararc/render/render.hpp"

#include "pararc/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <thread>

namespace pararc::render {

namespace {

Complex ipow(Complex z, int d) {
    Complex r = z;
    for (int i = 1; i < d; ++i) {
        r *= z;
    }
    return r;
}

struct Escape {
    int count = -1;
    double modulus = 0.0;
};

template <class Step>
Escape follow(Complex z, int first, const ImageSpec& spec, Step step) {
    const double r2 = spec.escape_radius * spec.escape_radius;
    for (int n = first; n <= spec.max_iter; ++n) {
        if (std::norm(z) > r2) {
            return {n, std::abs(z)};
        }
        if (n == spec.max_iter) {
            break;
        }
        z = step(z);
    }
    return {};
}

Escape escape_of(const ImageSpec& spec, Complex p) {
    const int d = spec.d;
    switch (spec.mode) {
    case Mode::Multicorn:
        return follow(Complex(0.0), 0, spec, [&](Complex z) { return ipow(std::conj(z), d) + p; });
    case Mode::Multibrot:
        return follow(Complex(0.0), 0, spec, [&](Complex z) { return ipow(z, d) + p; });
    case Mode::Julia: {
        const Complex c = spec.julia_c;
        if (spec.julia_antiholomorphic) {
            return follow(p, 0, spec, [&](Complex z) { return ipow(std::conj(z), d) + c; });
        }
        return follow(p, 0, spec, [&](Complex z) { return ipow(z, d) + c; });
    }
    case Mode::BiquadraticSlice: {
        const Complex a = spec.slice_fixed == 'a' ? spec.slice_value : p;
        const Complex b = spec.slice_fixed == 'a' ? p : spec.slice_value;
        auto P = [&](Complex z) { return ipow(ipow(z, d) + a, d) + b; };
        // Critical values: P(0) = a^d + b and P(w) = b for w^d = -a.
        const Escape e1 = follow(ipow(a, d) + b, 1, spec, P);
        const Escape e2 = follow(b, 1, spec, P);
        if (e1.count < 0) {
            return e2;
        }
        if (e2.count < 0 || e1.count <= e2.count) {
            return e1;
        }
        return e2;
    }
    }
    return {};
}

RGB shade(const ImageSpec& spec, const Escape& e) {
    if (e.count < 0) {
        return {0, 0, 0};
    }
    // Normalized iteration count folded into repeating grey bands.
    const double deg = spec.mode == Mode::BiquadraticSlice ? double(spec.d * spec.d) : double(spec.d);
    double nu = double(e.count);
    if (e.modulus > 1.0) {
        const double ll = std::log(std::log(e.modulus) / std::log(spec.escape_radius));
        nu += 1.0 - ll / std::log(deg);
    }
    const double frac = nu / 16.0 - std::floor(nu / 16.0);
    const auto g = std::uint8_t(std::lround(80.0 + 175.0 * frac));
    return {g, g, g};
}

void put(Image& img, int x, int y, const RGB& color) {
    if (x < 0 || y < 0 || x >= img.w || y >= img.h) {
        return;
    }
    const std::size_t i = 3 * (std::size_t(y) * std::size_t(img.w) + std::size_t(x));
    img.rgb[i] = color[0];
    img.rgb[i + 1] = color[1];
    img.rgb[i + 2] = color[2];
}

// Fractional pixel coordinates without clipping.
void raw_pixel(const ImageSpec& spec, Complex p, double& fx, double& fy) {
    const double scale = double(spec.pixels_w) / spec.width;
    fx = (p.real() - spec.center.real()) * scale + 0.5 * double(spec.pixels_w) - 0.5;
    fy = 0.5 * double(spec.pixels_h) - 0.5 - (p.imag() - spec.center.imag()) * scale;
}

// Liang-Barsky clip of the segment to the rectangle [lo, hi] in both axes.
bool clip(double& x0, double& y0, double& x1, double& y1, double xlo, double xhi, double ylo,
          double yhi) {
    double t0 = 0.0, t1 = 1.0;
    const double dx = x1 - x0, dy = y1 - y0;
    const double p[4] = {-dx, dx, -dy, dy};
    const double q[4] = {x0 - xlo, xhi - x0, y0 - ylo, yhi - y0};
    for (int i = 0; i < 4; ++i) {
        if (p[i] == 0.0) {
            if (q[i] < 0.0) {
                return false;
            }
            continue;
        }
        const double t = q[i] / p[i];
        if (p[i] < 0.0) {
            t0 = std::max(t0, t);
        } else {
            t1 = std::min(t1, t);
        }
        if (t0 > t1) {
            return false;
        }
    }
    const double ax = x0 + t0 * dx, ay = y0 + t0 * dy;
    x1 = x0 + t1 * dx;
    y1 = y0 + t1 * dy;
    x0 = ax;
    y0 = ay;
    return std::isfinite(x0) && std::isfinite(y0) && std::isfinite(x1) && std::isfinite(y1);
}

void draw_line(Image& img, double fx0, double fy0, double fx1, double fy1, const RGB& color) {
    if (!clip(fx0, fy0, fx1, fy1, -0.5, img.w - 0.5, -0.5, img.h - 0.5)) {
        return;
    }
    long x0 = std::lround(fx0), y0 = std::lround(fy0);
    const long x1 = std::lround(fx1), y1 = std::lround(fy1);
    const long dx = std::labs(x1 - x0), sx = x0 < x1 ? 1 : -1;
    const long dy = -std::labs(y1 - y0), sy = y0 < y1 ? 1 : -1;
    long err = dx + dy;
    while (true) {
        put(img, int(x0), int(y0), color);
        if (x0 == x1 && y0 == y1) {
            break;
        }
        const long e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x0 += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y0 += sy;
        }
    }
}

void draw_overlay(Image& img, const ImageSpec& spec, const Overlay& ov) {
    double px = 0.0, py = 0.0;
    bool have_prev = false;
    const int r = ov.marker_radius;
    for (Complex p : ov.points) {
        double fx = 0.0, fy = 0.0;
        raw_pixel(spec, p, fx, fy);
        if (ov.polyline && have_prev) {
            draw_line(img, px, py, fx, fy, ov.color);
        }
        if (fx > -r - 1.0 && fy > -r - 1.0 && fx < img.w + r + 1.0 && fy < img.h + r + 1.0) {
            const int x = int(std::lround(fx)), y = int(std::lround(fy));
            for (int dy = -r; dy <= r; ++dy) {
                for (int dx = -r; dx <= r; ++dx) {
                    put(img, x + dx, y + dy, ov.color);
                }
            }
        }
        px = fx;
        py = fy;
        have_prev = true;
    }
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) {
        out.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

Complex json_point(const nlohmann::json& item) {
    if (item.contains("location")) {
        const auto& loc = item["location"];
        const auto& last = loc.back();
        return {last[0].get<double>(), last[1].get<double>()};
    }
    return {item.at("c_re").get<double>(), item.at("c_im").get<double>()};
}

} // namespace

void ImageSpec::validate() const {
    if (pixels_w < 1 || pixels_h < 1 || pixels_w > 8192 || pixels_h > 8192) {
        throw DomainError("image size must be between 1 and 8192 pixels per side");
    }
    if (max_iter < 1) {
        throw DomainError("max_iter must be positive");
    }
    if (!(escape_radius >= 2.0)) {
        throw DomainError("escape radius must be at least 2");
    }
    if (!(width > 0.0)) {
        throw DomainError("view width must be positive");
    }
    if (d < 2) {
        throw DomainError("degree must be at least 2");
    }
    if (slice_fixed != 'a' && slice_fixed != 'b') {
        throw DomainError("slice_fixed must be 'a' or 'b'");
    }
}

RGB Image::pixel(int x, int y) const {
    const std::size_t i = 3 * (std::size_t(y) * std::size_t(w) + std::size_t(x));
    return {rgb[i], rgb[i + 1], rgb[i + 2]};
}

int escape_count(const ImageSpec& spec, Complex point) { return escape_of(spec, point).count; }

Complex pixel_to_point(const ImageSpec& spec, int x, int y) {
    const double step = spec.width / double(spec.pixels_w);
    const double re = spec.center.real() + (double(x) + 0.5 - 0.5 * double(spec.pixels_w)) * step;
    const double im = spec.center.imag() - (double(y) + 0.5 - 0.5 * double(spec.pixels_h)) * step;
    return {re, im};
}

bool point_to_pixel(const ImageSpec& spec, Complex p, int& x, int& y) {
    double fx = 0.0, fy = 0.0;
    raw_pixel(spec, p, fx, fy);
    if (!(fx >= -0.5 && fy >= -0.5 && fx < spec.pixels_w - 0.5 && fy < spec.pixels_h - 0.5)) {
        return false;
    }
    x = int(std::lround(fx));
    y = int(std::lround(fy));
    return true;
}

Image render(const ImageSpec& spec) {
    spec.validate();
    Image img;
    img.w = spec.pixels_w;
    img.h = spec.pixels_h;
    img.rgb.assign(3 * std::size_t(img.w) * std::size_t(img.h), 0);
    img.escape.assign(std::size_t(img.w) * std::size_t(img.h), -1);
    auto rows = [&](int y0, int y1) {
        for (int y = y0; y < y1; ++y) {
            for (int x = 0; x < img.w; ++x) {
                const Escape e = escape_of(spec, pixel_to_point(spec, x, y));
                img.escape[std::size_t(y) * std::size_t(img.w) + std::size_t(x)] = e.count;
                put(img, x, y, shade(spec, e));
            }
        }
    };
    const int threads = std::clamp(spec.threads, 1, std::max(1, img.h));
    if (threads == 1) {
        rows(0, img.h);
    } else {
        // Each worker owns a contiguous block of rows, so the result does not
        // depend on scheduling.
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back(rows, img.h * t / threads, img.h * (t + 1) / threads);
        }
        for (auto& th : pool) {
            th.join();
        }
    }
    for (const auto& ov : spec.overlays) {
        draw_overlay(img, spec, ov);
    }
    return img;
}

std::vector<std::uint8_t> ppm_bytes(const Image& image, const std::string& comment) {
    std::string header = "P6\n";
    if (!comment.empty()) {
        std::string line = comment;
        std::replace(line.begin(), line.end(), '\n', ' ');
        std::replace(line.begin(), line.end(), '\r', ' ');
        header += "# " + line + "\n";
    }
    header += std::to_string(image.w) + " " + std::to_string(image.h) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.insert(out.end(), image.rgb.begin(), image.rgb.end());
    return out;
}

void write_ppm(const Image& image, const std::string& path, const std::string& comment) {
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw IoError("cannot open " + path + " for writing");
    }
    const auto bytes = ppm_bytes(image, comment);
    os.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
    if (!os) {
        throw IoError("failed writing " + path);
    }
}

Overlay load_overlay(const std::string& path) {
    std::ifstream is(path);
    if (!is) {
        throw IoError("cannot open overlay " + path);
    }
    Overlay ov;
    ov.name = std::filesystem::path(path).stem().string();
    const std::string ext = std::filesystem::path(path).extension().string();
    if (ext == ".csv") {
        std::string line;
        while (std::getline(is, line) && (line.empty() || line[0] == '#')) {
        }
        if (line.empty() || line[0] == '#') {
            throw IoError("empty overlay " + path);
        }
        const auto header = split_csv(line);
        const auto re_col = std::find(header.begin(), header.end(), "c_re") - header.begin();
        const auto im_col = std::find(header.begin(), header.end(), "c_im") - header.begin();
        if (re_col >= long(header.size()) || im_col >= long(header.size())) {
            throw IoError("overlay " + path + " has no c_re and c_im columns");
        }
        while (std::getline(is, line)) {
            if (line.empty() || line[0] == '#') {
                continue;
            }
            const auto cells = split_csv(line);
            if (cells.size() <= std::size_t(std::max(re_col, im_col))) {
                continue;
            }
            try {
                ov.points.emplace_back(std::stod(cells[std::size_t(re_col)]), std::stod(cells[std::size_t(im_col)]));
            } catch (const std::exception&) {
                throw IoError("malformed row in overlay " + path + ": " + line);
            }
        }
        ov.polyline = true;
        ov.color = {255, 40, 40};
        ov.marker_radius = 1;
        return ov;
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(is);
    } catch (const nlohmann::json::exception& e) {
        throw IoError("cannot parse overlay " + path + ": " + e.what());
    }
    const nlohmann::json* items = &j;
    for (const char* key : {"singular_points", "samples"}) {
        if (j.is_object() && j.contains(key)) {
            items = &j[key];
        }
    }
    if (!items->is_array()) {
        throw IoError("overlay " + path + " holds no list of points");
    }
    try {
        for (const auto& item : *items) {
            ov.points.push_back(json_point(item));
        }
    } catch (const nlohmann::json::exception& e) {
        throw IoError("malformed point in overlay " + path + ": " + e.what());
    }
    ov.polyline = items != &j && j.contains("samples");
    ov.color = ov.polyline ? RGB{255, 40, 40} : RGB{40, 220, 40};
    ov.marker_radius = ov.polyline ? 1 : 3;
    return ov;
}

Overlay tricorn_cusps() {
    Overlay ov;
    ov.name = "cusps";
    for (int k = 0; k < 3; ++k) {
        ov.points.push_back(-0.75 * std::polar(1.0, 2.0 * std::numbers::pi * double(k) / 3.0));
    }
    ov.color = {40, 220, 40};
    ov.marker_radius = 3;
    return ov;
}

Mode parse_mode(const std::string& text) {
    if (text == "multicorn") {
        return Mode::Multicorn;
    }
    if (text == "multibrot") {
        return Mode::Multibrot;
    }
    if (text == "biquadratic-slice" || text == "slice") {
        return Mode::BiquadraticSlice;
    }
    if (text == "julia") {
        return Mode::Julia;
    }
    throw DomainError("unknown render mode '" + text + "'");
}

std::string to_string(Mode mode) {
    switch (mode) {
    case Mode::Multicorn:
        return "multicorn";
    case Mode::Multibrot:
        return "multibrot";
    case Mode::BiquadraticSlice:
        return "biquadratic-slice";
    case Mode::Julia:
        return "julia";
    }
    return "unknown";
}

} // namespace pararc::render
