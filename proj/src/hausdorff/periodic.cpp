#include "pararc/errors.hpp"
#include "pararc/hausdorff/hausdorff.hpp"
#include "detail.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <utility>

namespace pararc::hausdorff {

namespace {

using detail::ipow;

struct Jet {
    Complex value;
    Complex deriv;
    bool escaped = false;
};

// m passes of the map together with the derivative.
Jet iterate(const PolyMap& map, int m, Complex z) {
    Complex dz = 1.0;
    const int d = map.d();
    for (int j = 0; j < m; ++j) {
        for (Complex s : map.stages()) {
            const Complex zp = ipow(z, d - 1);
            dz *= double(d) * zp;
            z = zp * z + s;
            if (!(std::abs(z) < 1e100)) {
                return {z, dz, true};
            }
        }
    }
    return {z, dz, false};
}

double scale_of(Complex z) { return std::max(1.0, std::abs(z)); }

// Newton ratio of F(z) = map^m(z) - z; far out F behaves like z^N.
Complex newton_ratio(const PolyMap& map, int m, long N, Complex z) {
    Jet j = iterate(map, m, z);
    if (j.escaped) {
        return z / double(N);
    }
    Complex den = j.deriv - 1.0;
    if (std::abs(den) == 0.0) {
        return 0.0;
    }
    return (j.value - z) / den;
}

double residual(const PolyMap& map, int m, Complex z) {
    Jet j = iterate(map, m, z);
    return j.escaped ? std::numeric_limits<double>::infinity() : std::abs(j.value - z);
}

// Newton steps kept only while the residual decreases.
Complex polish(const PolyMap& map, int m, long N, Complex z) {
    double r = residual(map, m, z);
    for (int it = 0; it < 80 && r > 0.0; ++it) {
        Complex step = newton_ratio(map, m, N, z);
        if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) {
            break;
        }
        Complex cand = z - step;
        double rc = residual(map, m, cand);
        if (!(rc < r)) {
            break;
        }
        z = cand;
        r = rc;
        if (std::abs(step) <= 1e-16 * scale_of(z)) {
            break;
        }
    }
    return z;
}

// Preimage tree of a base point near the Julia set, one level per stage.
// Node i of level l has parent i / d and branch digit i % d.
std::vector<std::vector<Complex>> preimage_tree(const PolyMap& map, int levels) {
    const int d = map.d();
    const auto& st = map.stages();
    const std::size_t S = st.size();
    // Base point: a generic point of the Julia set from random inverse
    // iteration. Principal branches alone may settle on a parabolic point.
    std::mt19937_64 rng(0x5eed);
    std::vector<int> digits(S, 0);
    Complex beta = 1.0;
    for (int i = 0; i < 200; ++i) {
        for (auto& g : digits) {
            g = int(rng() % std::uint64_t(d));
        }
        beta = map.inverse_pass(beta, digits.data());
    }
    std::vector<std::vector<Complex>> tree(std::size_t(levels) + 1);
    tree[0] = {beta};
    for (int l = 1; l <= levels; ++l) {
        const Complex s = st[S - 1 - std::size_t(l - 1) % S];
        const auto& prev = tree[std::size_t(l) - 1];
        auto& cur = tree[std::size_t(l)];
        cur.resize(prev.size() * std::size_t(d));
        for (std::size_t i = 0; i < prev.size(); ++i) {
            for (int k = 0; k < d; ++k) {
                cur[i * std::size_t(d) + std::size_t(k)] = detail::root_branch(prev[i] - s, d, k);
            }
        }
    }
    return tree;
}

// Fixed point of the inverse branch of the iterate that follows the path of
// leaf `leaf`, by repeated pullback with nearest-root continuation.
Complex branch_fixed_point(const PolyMap& map, const std::vector<std::vector<Complex>>& tree,
                           std::size_t leaf) {
    const int d = map.d();
    const auto& st = map.stages();
    const std::size_t S = st.size();
    const std::size_t L = tree.size() - 1;
    std::vector<Complex> unit(std::size_t(d), 0.0);
    for (int k = 0; k < d; ++k) {
        unit[std::size_t(k)] = std::polar(1.0, 2.0 * std::numbers::pi * double(k) / double(d));
    }
    std::vector<std::size_t> path(L + 1);
    std::size_t idx = leaf;
    for (std::size_t l = L + 1; l-- > 0;) {
        path[l] = idx;
        idx /= std::size_t(d);
    }
    Complex z = tree[L][leaf];
    for (int it = 0; it < 400; ++it) {
        Complex y = z;
        for (std::size_t l = 1; l <= L; ++l) {
            const Complex s = st[S - 1 - (l - 1) % S];
            const Complex r = detail::root_branch(y - s, d, 0);
            const Complex target = tree[l][path[l]];
            Complex best = r;
            double bd = std::abs(r - target);
            for (int k = 1; k < d; ++k) {
                const Complex cand = r * unit[std::size_t(k)];
                const double dist = std::abs(cand - target);
                if (dist < bd) {
                    bd = dist;
                    best = cand;
                }
            }
            y = best;
        }
        const double step = std::abs(y - z);
        z = y;
        if (step <= 1e-15 * scale_of(z)) {
            break;
        }
    }
    return z;
}

// Second and third derivatives of m passes at z.
std::pair<Complex, Complex> higher_derivatives(const PolyMap& map, int m, Complex z) {
    const int d = map.d();
    const double dd = d;
    // k-th derivative of z^d is d!/(d-k)! z^(d-k).
    auto power_derivative = [&](Complex x, int k) -> Complex {
        if (k > d) {
            return 0.0;
        }
        double coef = 1.0;
        for (int i = 0; i < k; ++i) {
            coef *= dd - double(i);
        }
        return k == d ? Complex(coef) : coef * ipow(x, d - k);
    };
    Complex u1 = 1.0, u2 = 0.0, u3 = 0.0;
    for (int j = 0; j < m; ++j) {
        for (Complex s : map.stages()) {
            const Complex g1 = power_derivative(z, 1);
            const Complex g2 = power_derivative(z, 2);
            const Complex g3 = power_derivative(z, 3);
            u3 = g3 * u1 * u1 * u1 + 3.0 * g2 * u1 * u2 + g1 * u3;
            u2 = g2 * u1 * u1 + g1 * u2;
            u1 = g1 * u1;
            z = ipow(z, d) + s;
        }
    }
    return {u2, u3};
}

struct Root {
    Complex z;
    Complex mult;
    int multiplicity = 1;
};

bool near_multiple(Complex mult) { return std::abs(mult - 1.0) < 1e-3; }

// Merge approximations of the same root. Simple roots merge below 1e-11;
// approximations of a multiple root (multiplier near 1) are only accurate to
// about the square root of machine precision and merge below 1e-5.
std::vector<Root> merge_roots(const PolyMap& map, int m, std::vector<Complex> pts) {
    std::sort(pts.begin(), pts.end(),
              [](Complex a, Complex b) { return a.real() < b.real(); });
    std::vector<Complex> mults(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        mults[i] = iterate(map, m, pts[i]).deriv;
    }
    std::vector<std::size_t> parent(pts.size());
    std::iota(parent.begin(), parent.end(), std::size_t(0));
    auto find = [&](std::size_t i) {
        while (parent[i] != i) {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        return i;
    };
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            const double dx = pts[j].real() - pts[i].real();
            if (dx > 1e-5 * scale_of(pts[i])) {
                break;
            }
            const double dist = std::abs(pts[j] - pts[i]);
            const bool multiple = near_multiple(mults[i]) && near_multiple(mults[j]);
            const double tol = (multiple ? 1e-5 : 1e-11) * scale_of(pts[i]);
            if (dist < tol) {
                parent[find(i)] = find(j);
            }
        }
    }
    std::vector<Root> out;
    std::vector<long> slot(pts.size(), -1);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const std::size_t r = find(i);
        if (slot[r] < 0) {
            slot[r] = long(out.size());
            out.push_back({pts[i], mults[i], 0});
        }
        out[std::size_t(slot[r])].multiplicity += 1;
    }
    // Leaf counts do not reflect multiplicity; read it off the jet. Roots of
    // F(z) - z with F' = 1 are double unless F'' vanishes too.
    for (auto& r : out) {
        if (!near_multiple(r.mult)) {
            r.multiplicity = 1;
            continue;
        }
        const auto [f2, f3] = higher_derivatives(map, m, r.z);
        r.multiplicity = std::abs(f2) > 1e-4 * std::max(1.0, std::abs(f3)) ? 2 : 3;
    }
    return out;
}

long counted(const std::vector<Root>& roots) {
    long c = 0;
    for (const auto& r : roots) {
        c += r.multiplicity;
    }
    return c;
}

// Aberth iteration on the missing roots with the known roots held fixed.
std::vector<Complex> deflated_aberth(const PolyMap& map, int m, long N,
                                     const std::vector<Root>& known, long missing) {
    std::vector<Complex> z(static_cast<std::size_t>(missing));
    for (std::size_t k = 0; k < z.size(); ++k) {
        const double angle = 2.0 * std::numbers::pi * (double(k) + 0.0731) / double(z.size());
        z[k] = std::polar(0.3, angle);
    }
    std::vector<char> done(z.size(), 0);
    for (int it = 0; it < 1000; ++it) {
        bool all_done = true;
        for (std::size_t i = 0; i < z.size(); ++i) {
            if (done[i]) {
                continue;
            }
            Complex r = newton_ratio(map, m, N, z[i]);
            if (!std::isfinite(r.real()) || !std::isfinite(r.imag())) {
                z[i] += Complex(1e-7, 1e-7);
                all_done = false;
                continue;
            }
            Complex s = 0.0;
            for (const auto& k : known) {
                s += double(k.multiplicity) / (z[i] - k.z);
            }
            for (std::size_t j = 0; j < z.size(); ++j) {
                if (j != i) {
                    s += 1.0 / (z[i] - z[j]);
                }
            }
            const Complex den = 1.0 - r * s;
            const Complex step = std::abs(den) > 0.0 ? r / den : r;
            z[i] -= step;
            if (std::abs(step) <= 1e-14 * scale_of(z[i])) {
                done[i] = 1;
            } else {
                all_done = false;
            }
        }
        if (all_done) {
            break;
        }
    }
    for (auto& p : z) {
        p = polish(map, m, N, p);
    }
    return z;
}

int exact_period(const PolyMap& map, int n, Complex z) {
    for (int p = 1; p < n; ++p) {
        if (n % p != 0) {
            continue;
        }
        Complex w = z;
        for (int i = 0; i < p; ++i) {
            w = map.step(w);
        }
        if (std::abs(w - z) <= 1e-7 * scale_of(z)) {
            return p;
        }
    }
    return n;
}

} // namespace

PeriodicOrbitSet periodic_points(const PolyMap& map, int n, const HausdorffConfig& cfg) {
    const int spp = map.steps_per_pass();
    if (n <= 0 || n % spp != 0) {
        std::ostringstream os;
        os << "period " << n << " is not a positive multiple of " << spp;
        throw DomainError(os.str());
    }
    const int m = n / spp;
    const std::size_t S = map.stages().size();
    const double log_count = double(m) * double(S) * std::log2(double(map.d()));
    if (log_count > std::log2(double(cfg.degree_cap))) {
        std::ostringstream os;
        os << "periodic points: degree " << map.d() << "^" << m * int(S) << " exceeds the cap "
           << cfg.degree_cap;
        throw ResourceError(os.str());
    }
    const long N = std::lround(std::exp2(log_count));

    const auto tree = preimage_tree(map, m * int(S));
    // Pullback may stall between cylinders; only converged leaves are kept
    // and the rest are recovered by the deflated iteration below.
    auto converged = [&](Complex z) {
        return residual(map, m, z) <= cfg.stagnation_tolerance ||
               std::abs(newton_ratio(map, m, N, z)) <= cfg.stagnation_tolerance * scale_of(z);
    };
    std::vector<Complex> approx;
    approx.reserve(static_cast<std::size_t>(N));
    for (std::size_t i = 0; i < std::size_t(N); ++i) {
        const Complex z = polish(map, m, N, branch_fixed_point(map, tree, i));
        if (converged(z)) {
            approx.push_back(z);
        }
    }
    auto roots = merge_roots(map, m, approx);
    long have = counted(roots);
    for (int round = 0; round < 3 && have < N; ++round) {
        auto extra = deflated_aberth(map, m, N, roots, N - have);
        std::erase_if(extra, [&](Complex z) { return !converged(z); });
        for (const auto& r : roots) {
            for (int k = 0; k < r.multiplicity; ++k) {
                extra.push_back(r.z);
            }
        }
        roots = merge_roots(map, m, extra);
        have = counted(roots);
    }
    if (have != N) {
        std::ostringstream os;
        os << "periodic points: found " << have << " of " << N << " fixed points of the period-"
           << n << " iterate of " << map.describe();
        throw NumericError(os.str());
    }

    PeriodicOrbitSet out{map, n, {}, N, have, 0, 0.0};
    for (const auto& r : roots) {
        PeriodicPoint p;
        p.z = r.z;
        p.multiplier = iterate(map, m, r.z).deriv;
        p.residual = residual(map, m, r.z);
        p.multiplicity = r.multiplicity;
        p.period = exact_period(map, n, r.z);
        p.lower_period = p.period < n;
        const double a = std::abs(p.multiplier);
        p.parabolic_excluded = std::abs(a - 1.0) <= cfg.parabolic_delta;
        p.repelling = a > 1.0 + cfg.parabolic_delta;
        if (!p.repelling) {
            out.excluded += p.multiplicity;
        }
        out.max_residual = std::max(out.max_residual, p.residual);
        out.points.push_back(p);
    }
    if (out.max_residual > cfg.stagnation_tolerance) {
        std::ostringstream os;
        os << "periodic points: refinement stagnated at residual " << out.max_residual
           << " for period " << n << " of " << map.describe();
        throw NumericError(os.str());
    }
    std::sort(out.points.begin(), out.points.end(), [](const PeriodicPoint& a, const PeriodicPoint& b) {
        const double ra = std::abs(a.z), rb = std::abs(b.z);
        if (ra != rb) {
            return ra < rb;
        }
        return std::arg(a.z) < std::arg(b.z);
    });
    return out;
}

} // namespace pararc::hausdorff
