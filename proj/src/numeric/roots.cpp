#include "pararc/numeric/roots.hpp"

#include "pararc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pararc::numeric {

Complex horner(std::span<const Complex> coeffs, Complex z) {
    Complex acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        acc = acc * z + *it;
    }
    return acc;
}

double root_radius_bound(std::span<const Complex> coeffs) {
    const std::size_t n = coeffs.size() - 1;
    const double lead = std::abs(coeffs[n]);
    double bound = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
        double c = std::abs(coeffs[n - k]) / lead;
        if (k == n) {
            c /= 2.0;
        }
        bound = std::max(bound, std::pow(c, 1.0 / double(k)));
    }
    return 2.0 * bound;
}

AberthResult aberth(int degree, const NewtonRatio& ratio, double radius,
                    const AberthOptions& opts) {
    AberthResult out;
    if (degree <= 0) {
        out.converged = true;
        return out;
    }
    const auto n = static_cast<std::size_t>(degree);
    std::vector<Complex> z(n);
    const double two_pi = 2.0 * std::numbers::pi;
    for (std::size_t k = 0; k < n; ++k) {
        double angle = two_pi * (double(k) / double(n) + opts.angle_offset / double(n));
        z[k] = std::polar(radius, angle);
    }
    return aberth(std::move(z), ratio, opts);
}

AberthResult aberth(std::vector<Complex> z, const NewtonRatio& ratio, const AberthOptions& opts) {
    AberthResult out;
    const std::size_t n = z.size();
    if (n == 0) {
        out.converged = true;
        return out;
    }
    std::vector<char> done(n, 0);
    std::vector<Complex> w(n);
    for (int it = 0; it < opts.max_iterations; ++it) {
        out.iterations = it + 1;
        bool all_done = true;
        for (std::size_t i = 0; i < n; ++i) {
            if (done[i]) {
                continue;
            }
            Complex r = ratio(z[i]);
            if (!std::isfinite(r.real()) || !std::isfinite(r.imag())) {
                // Landed on an exact root (p' finite, p = 0 gives r = 0) or
                // on a critical point; nudge deterministically.
                z[i] += Complex(1e-7, 1e-7) * std::max(1.0, std::abs(z[i]));
                all_done = false;
                continue;
            }
            Complex s = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i) {
                    s += 1.0 / (z[i] - z[j]);
                }
            }
            Complex denom = 1.0 - r * s;
            Complex step = (std::abs(denom) > 0.0) ? r / denom : r;
            z[i] -= step;
            if (std::abs(step) <= opts.tolerance * std::max(1.0, std::abs(z[i]))) {
                done[i] = 1;
            } else {
                all_done = false;
            }
        }
        if (all_done) {
            out.converged = true;
            break;
        }
    }
    out.roots = std::move(z);
    return out;
}

std::vector<Complex> poly_roots(std::span<const Complex> coeffs, const AberthOptions& opts) {
    if (coeffs.empty() || std::abs(coeffs.back()) == 0.0) {
        throw DomainError("poly_roots: leading coefficient must be nonzero");
    }
    const int n = int(coeffs.size()) - 1;
    if (n == 0) {
        return {};
    }
    std::vector<Complex> deriv(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) {
        deriv[std::size_t(i) - 1] = coeffs[std::size_t(i)] * double(i);
    }
    auto ratio = [&](Complex z) {
        return horner(coeffs, z) / horner(std::span<const Complex>(deriv), z);
    };
    auto res = aberth(n, ratio, root_radius_bound(coeffs), opts);
    // Newton polish; keep the polished value only if the residual improves.
    for (auto& z : res.roots) {
        for (int k = 0; k < 4; ++k) {
            Complex r = ratio(z);
            if (!std::isfinite(r.real()) || !std::isfinite(r.imag())) {
                break;
            }
            Complex cand = z - r;
            if (std::abs(horner(coeffs, cand)) < std::abs(horner(coeffs, z))) {
                z = cand;
            } else {
                break;
            }
        }
    }
    return res.roots;
}

std::vector<Cluster> cluster_points(const std::vector<Complex>& pts, double radius) {
    const std::size_t n = pts.size();
    std::vector<std::size_t> parent(n);
    for (std::size_t i = 0; i < n; ++i) {
        parent[i] = i;
    }
    auto find = [&](std::size_t i) {
        while (parent[i] != i) {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        return i;
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (std::abs(pts[i] - pts[j]) < radius) {
                parent[find(i)] = find(j);
            }
        }
    }
    std::vector<Cluster> out;
    std::vector<std::size_t> roots;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t r = find(i);
        auto it = std::find(roots.begin(), roots.end(), r);
        std::size_t idx;
        if (it == roots.end()) {
            roots.push_back(r);
            out.push_back({});
            idx = out.size() - 1;
        } else {
            idx = static_cast<std::size_t>(it - roots.begin());
        }
        out[idx].center += pts[i];
        out[idx].size += 1;
    }
    for (auto& c : out) {
        c.center /= double(c.size);
    }
    std::sort(out.begin(), out.end(),
              [](const Cluster& a, const Cluster& b) { return complex_less(a.center, b.center); });
    return out;
}

bool complex_less(Complex a, Complex b) {
    // Compare on a coarse grid first so that values differing only by
    // roundoff order consistently.
    auto q = [](double x) { return std::round(x * 1e9); };
    if (q(a.real()) != q(b.real())) {
        return q(a.real()) < q(b.real());
    }
    return q(a.imag()) < q(b.imag());
}

} // namespace pararc::numeric
