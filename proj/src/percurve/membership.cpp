#include "pararc/percurve/membership.hpp"

#include "pararc/errors.hpp"
#include "pararc/numeric/roots.hpp"
#include "pararc/polyalg/upoly.hpp"

#include <algorithm>
#include <cmath>

namespace pararc::percurve {

namespace {

MembershipResult reject(std::string reason) { return {false, std::nullopt, std::move(reason)}; }

double binomial(int n, int k) {
    double b = 1.0;
    for (int i = 1; i <= k; ++i) {
        b = b * (n - k + i) / i;
    }
    return b;
}

} // namespace

MembershipResult validate_family_membership(const std::vector<Complex>& coeffs_in,
                                            double tolerance) {
    std::vector<Complex> c = coeffs_in;
    while (!c.empty() && c.back() == 0.0) {
        c.pop_back();
    }
    const int N = int(c.size()) - 1;
    const int d = int(std::lround(std::sqrt(double(std::max(N, 0)))));
    if (N < 4 || d * d != N) {
        return reject("degree " + std::to_string(N) + " is not a square d^2 with d >= 2");
    }
    if (std::abs(c.back() - 1.0) > tolerance) {
        return reject("polynomial is not monic");
    }
    double big = 0.0;
    for (auto x : c) {
        big = std::max(big, std::abs(x));
    }
    std::vector<Complex> deriv;
    for (int k = 1; k <= N; ++k) {
        deriv.push_back(double(k) * c[std::size_t(k)]);
    }
    auto roots = numeric::poly_roots(deriv);
    double rmax = 1.0;
    for (auto r : roots) {
        rmax = std::max(rmax, std::abs(r));
    }
    // Multiple critical points spread as eps^(1/k); cluster accordingly.
    auto clusters = numeric::cluster_points(roots, std::max(1e-4, std::sqrt(tolerance)) * rmax);
    if (int(clusters.size()) != d + 1) {
        return reject("found " + std::to_string(clusters.size()) +
                      " distinct critical points instead of " + std::to_string(d + 1));
    }
    for (const auto& cl : clusters) {
        if (cl.size != d - 1) {
            return reject("a critical point has local degree " + std::to_string(cl.size + 1) +
                          " instead of " + std::to_string(d));
        }
    }
    std::vector<Complex> images;
    for (const auto& cl : clusters) {
        images.push_back(numeric::horner(c, cl.center));
    }
    const double image_tol = std::max(1e-6, std::sqrt(tolerance)) * (1.0 + big);
    for (std::size_t skip = 0; skip <= std::size_t(d); ++skip) {
        std::vector<std::size_t> group;
        for (std::size_t i = 0; i <= std::size_t(d); ++i) {
            if (i != skip) {
                group.push_back(i);
            }
        }
        bool shared = true;
        for (auto i : group) {
            shared = shared && std::abs(images[i] - images[group[0]]) <= image_tol;
        }
        if (!shared) {
            continue;
        }
        Complex b = 0.0;
        Complex prod = 1.0;
        for (auto i : group) {
            b += images[i];
            prod *= clusters[i].center;
        }
        b /= double(group.size());
        Complex a = (d % 2 == 0 ? 1.0 : -1.0) * prod;
        // Coefficients of (z^d + a)^d + b.
        std::vector<Complex> expect(std::size_t(N) + 1, 0.0);
        for (int k = 0; k <= d; ++k) {
            expect[std::size_t(k * d)] += binomial(d, k) * std::pow(a, d - k);
        }
        expect[0] += b;
        double err = 0.0;
        for (int k = 0; k <= N; ++k) {
            err = std::max(err, std::abs(expect[std::size_t(k)] - c[std::size_t(k)]));
        }
        if (err > image_tol) {
            return reject("coefficients do not match (z^d + a)^d + b for the recovered witness");
        }
        if (std::abs(a) <= image_tol) {
            return reject("recovered a vanishes");
        }
        return {true, std::make_pair(a, b), "member"};
    }
    return reject("no " + std::to_string(d) + " critical points share an image");
}

MembershipResult validate_family_membership(const polyalg::ExactPoly& poly, double tolerance) {
    auto used = poly.used_vars();
    if (used.size() > 1) {
        throw DomainError("membership test needs a univariate polynomial");
    }
    std::string var = used.empty() ? (poly.vars().empty() ? "z" : poly.vars().front()) : used.front();
    std::vector<Complex> coeffs;
    for (const auto& c : polyalg::upoly::from_poly(poly.with_vars({var}), var)) {
        coeffs.push_back(to_complex(c));
    }
    return validate_family_membership(coeffs, tolerance);
}

} // namespace pararc::percurve
