#include "jet.hpp"

#include "pararc/errors.hpp"
#include "pararc/fatou/fatou.hpp"
#include "pararc/numeric/roots.hpp"

#include <algorithm>
#include <cmath>

namespace pararc::fatou {

MapParameter MapParameter::multicorn(int d, Complex c) {
    if (d < 2) {
        throw DomainError("degree must be at least 2");
    }
    return {d, std::conj(c), c, c};
}

MapParameter MapParameter::biquadratic(int d, Complex a, Complex b) {
    if (d < 2) {
        throw DomainError("degree must be at least 2");
    }
    return {d, a, b, std::nullopt};
}

Complex MapParameter::P(Complex z) const { return std::pow(std::pow(z, d) + a, d) + b; }

Complex MapParameter::dP(Complex z) const {
    const Complex u = std::pow(z, d) + a;
    return double(d * d) * std::pow(u, d - 1) * std::pow(z, d - 1);
}

Complex MapParameter::f(Complex z) const {
    if (!c) {
        throw DomainError("antiholomorphic map needs the parameter c");
    }
    return std::pow(std::conj(z), d) + *c;
}

namespace detail {

Complex d2P(const MapParameter& p, Complex z) {
    const int d = p.d;
    const Complex u = std::pow(z, d) + p.a;
    const Complex du = double(d) * std::pow(z, d - 1);
    const Complex d2u = double(d * (d - 1)) * std::pow(z, d - 2);
    return double(d * (d - 1)) * std::pow(u, d - 2) * du * du + double(d) * std::pow(u, d - 1) * d2u;
}

IterateJet iterate_jet(const MapParameter& p, int k, Complex z) {
    IterateJet j{z, 1.0, 0.0};
    for (int i = 0; i < k; ++i) {
        const Complex d1 = p.dP(j.value);
        const Complex d2 = d2P(p, j.value);
        j.second = d2 * j.first * j.first + d1 * j.second;
        j.first = d1 * j.first;
        j.value = p.P(j.value);
    }
    return j;
}

Series local_series(const MapParameter& p, int k, Complex z0, std::size_t order) {
    Series s(order + 1, 0.0);
    s[1] = 1.0;
    Complex z = z0;
    for (int i = 0; i < k; ++i) {
        Series x = s;
        x[0] = z;
        Series u = series_pow(x, p.d, order);
        u[0] += p.a;
        Series t = series_pow(u, p.d, order);
        t[0] += p.b;
        z = t[0];
        t[0] = 0.0;
        s = std::move(t);
    }
    s[0] = z - z0;
    return s;
}

} // namespace detail

namespace {

double escape_bound(const MapParameter& p) {
    const double ra = std::pow(std::abs(p.a), 1.0 / p.d);
    const double rb = std::pow(std::abs(p.b), 1.0 / (p.d * p.d));
    return 2.0 + 2.0 * std::max(ra, rb);
}

Complex polish(const MapParameter& p, int k, Complex z) {
    for (int it = 0; it < 200; ++it) {
        auto j = detail::iterate_jet(p, k, z);
        if (j.second == 0.0) {
            break;
        }
        Complex step = (j.first - 1.0) / j.second;
        z -= step;
        if (std::abs(step) <= 1e-16 * (1.0 + std::abs(z))) {
            break;
        }
    }
    return z;
}

int exact_period(const MapParameter& p, Complex z, int k) {
    Complex x = z;
    for (int j = 1; j <= k; ++j) {
        x = p.P(x);
        if (std::abs(x - z) <= 1e-7 * (1.0 + std::abs(z))) {
            return j;
        }
    }
    return 0;
}

} // namespace

ParabolicCycle find_parabolic_cycle(const MapParameter& param, int k, const FatouConfig& cfg) {
    if (k < 1) {
        throw DomainError("period must be positive");
    }
    const double degree = std::pow(double(param.d), 2.0 * k);
    if (degree > 4096) {
        throw ResourceError("P^k has degree " + std::to_string(long(degree)) +
                            ", above the root-finding limit of 4096");
    }
    auto ratio = [&](Complex z) {
        auto j = detail::iterate_jet(param, k, z);
        return (j.value - z) / (j.first - 1.0);
    };
    numeric::AberthOptions ao;
    auto roots = numeric::aberth(int(degree), ratio, escape_bound(param), ao).roots;
    std::vector<Complex> candidates;
    for (Complex z : roots) {
        auto j = detail::iterate_jet(param, k, z);
        if (std::abs(j.first - 1.0) <= cfg.multiplier_tolerance) {
            candidates.push_back(z);
        }
    }
    std::vector<Complex> refined;
    for (const auto& cl : numeric::cluster_points(candidates, 1e-4)) {
        refined.push_back(polish(param, k, cl.center));
    }
    std::sort(refined.begin(), refined.end(), numeric::complex_less);
    std::vector<std::vector<Complex>> cycles;
    for (Complex z : refined) {
        auto j = detail::iterate_jet(param, k, z);
        if (std::abs(j.first - 1.0) > cfg.multiplier_tolerance ||
            std::abs(j.value - z) > 1e-7 * (1.0 + std::abs(z)) || exact_period(param, z, k) != k) {
            continue;
        }
        bool seen = false;
        for (const auto& cyc : cycles) {
            for (Complex y : cyc) {
                seen = seen || std::abs(y - z) <= 1e-6 * (1.0 + std::abs(z));
            }
        }
        if (seen) {
            continue;
        }
        std::vector<Complex> orbit = {z};
        for (int i = 1; i < k; ++i) {
            orbit.push_back(param.P(orbit.back()));
        }
        cycles.push_back(std::move(orbit));
    }
    if (cycles.empty()) {
        throw NotParabolicError("no cycle of exact period " + std::to_string(k) +
                                " with multiplier 1 was found");
    }
    ParabolicCycle cycle;
    cycle.param = param;
    cycle.k = k;
    cycle.points = cycles.front();
    for (int i = 0; i < k; ++i) {
        const Complex next = cycle.points[std::size_t((i + 1) % k)];
        cycle.residual = std::max(cycle.residual, std::abs(param.P(cycle.points[std::size_t(i)]) - next));
    }
    auto s = detail::local_series(param, k, cycle.points[0], 3);
    cycle.multiplier = s[1];
    cycle.alpha = s[2];
    cycle.beta = s[3];
    if (std::abs(cycle.alpha) > cfg.cusp_tolerance * (1.0 + std::sqrt(std::abs(cycle.beta)))) {
        cycle.q = 1;
    } else if (std::abs(cycle.beta) > cfg.cusp_tolerance) {
        cycle.q = 2;
    } else {
        throw NumericError("parabolic jet is degenerate beyond two petals");
    }
    if (cycle.residual > cfg.cycle_tolerance * (1.0 + std::abs(cycle.points[0]))) {
        throw NumericError("parabolic cycle residual " + std::to_string(cycle.residual) +
                           " exceeds the tolerance");
    }
    return cycle;
}

nlohmann::json to_json(const ParabolicCycle& cycle) {
    auto cj = [](Complex z) { return nlohmann::json::array({z.real(), z.imag()}); };
    nlohmann::json pts = nlohmann::json::array();
    for (Complex z : cycle.points) {
        pts.push_back(cj(z));
    }
    nlohmann::json j = {{"d", cycle.param.d},
                        {"a", cj(cycle.param.a)},
                        {"b", cj(cycle.param.b)},
                        {"k", cycle.k},
                        {"points", pts},
                        {"multiplier", cj(cycle.multiplier)},
                        {"q", cycle.q},
                        {"alpha", cj(cycle.alpha)},
                        {"beta", cj(cycle.beta)},
                        {"residual", cycle.residual}};
    if (cycle.param.c) {
        j["c"] = cj(*cycle.param.c);
    }
    return j;
}

} // namespace pararc::fatou
