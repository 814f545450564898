#include "pararc/errors.hpp"
#include "pararc/hausdorff/hausdorff.hpp"
#include "detail.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

namespace pararc::hausdorff {

namespace {

// Value at 1/n = 0 of the line through (1/n1, v1) and (1/n2, v2).
double richardson(int n1, double v1, int n2, double v2) {
    return (double(n2) * v2 - double(n1) * v1) / double(n2 - n1);
}

} // namespace

double pressure(const PeriodicOrbitSet& set, double t) {
    // log-sum-exp in the stored point order.
    std::vector<double> terms;
    terms.reserve(set.points.size());
    for (const auto& p : set.points) {
        if (p.repelling) {
            terms.push_back(std::log(double(p.multiplicity)) - t * std::log(std::abs(p.multiplier)));
        }
    }
    if (terms.empty()) {
        std::ostringstream os;
        os << "pressure: no repelling points of period " << set.n << " for " << set.map.describe();
        throw DegenerateError(os.str());
    }
    const double mx = *std::max_element(terms.begin(), terms.end());
    double s = 0.0;
    for (double v : terms) {
        s += std::exp(v - mx);
    }
    return (mx + std::log(s)) / double(set.n);
}

double pressure(const PolyMap& map, double t, int n, const HausdorffConfig& cfg) {
    return pressure(periodic_points(map, n, cfg), t);
}

PressureCurve pressure_curve(const PolyMap& map, const std::vector<int>& periods,
                             const std::vector<double>& t_grid, const HausdorffConfig& cfg) {
    if (periods.empty()) {
        throw DomainError("pressure curve needs at least one period");
    }
    PressureCurve out;
    out.t_grid = t_grid;
    out.periods = periods;
    for (int n : periods) {
        const auto set = periodic_points(map, n, cfg);
        std::vector<double> row;
        row.reserve(t_grid.size());
        for (double t : t_grid) {
            row.push_back(pressure(set, t));
        }
        out.values.push_back(std::move(row));
    }
    const std::size_t k = periods.size();
    for (std::size_t j = 0; j < t_grid.size(); ++j) {
        out.extrapolated.push_back(
            k < 2 ? out.values[0][j]
                  : richardson(periods[k - 2], out.values[k - 2][j], periods[k - 1], out.values[k - 1][j]));
    }
    for (std::size_t j = 1; j < t_grid.size(); ++j) {
        const double a = out.extrapolated[j - 1], b = out.extrapolated[j];
        if (a > 0.0 && b <= 0.0) {
            out.zero = t_grid[j - 1] + (t_grid[j] - t_grid[j - 1]) * a / (a - b);
            break;
        }
    }
    return out;
}

std::vector<int> bowen_ladder(const PolyMap& map, int n_max) {
    const int spp = map.steps_per_pass();
    const int step = std::lcm(2, spp);
    if (n_max <= 0 || n_max % spp != 0) {
        throw DomainError("n_max must be a positive multiple of the steps per pass");
    }
    std::vector<int> out;
    for (int n = n_max - 3 * step; n <= n_max; n += step) {
        if (n > 0) {
            out.push_back(n);
        }
    }
    return out;
}

BowenEstimate hd_bowen(const PolyMap& map, const HausdorffConfig& cfg) {
    if (cfg.ladder.empty()) {
        throw DomainError("empty period ladder");
    }
    std::vector<int> ladder = cfg.ladder;
    std::sort(ladder.begin(), ladder.end());
    BowenEstimate out;
    std::vector<double> entropies;
    for (int n : ladder) {
        const auto set = periodic_points(map, n, cfg);
        const double p0 = pressure(set, 0.0);
        const double p2 = pressure(set, 2.0);
        if (!(p0 > 0.0 && p2 < 0.0)) {
            std::ostringstream os;
            os << "pressure has no sign change on [0, 2] at period " << n << ": P(0) = " << p0
               << ", P(2) = " << p2;
            throw BracketError(os.str());
        }
        double lo = 0.0, hi = 2.0;
        while (hi - lo > cfg.t_tolerance) {
            const double mid = 0.5 * (lo + hi);
            (pressure(set, mid) > 0.0 ? lo : hi) = mid;
        }
        out.periods.push_back(n);
        out.roots.push_back(0.5 * (lo + hi));
        entropies.push_back(p0);
    }
    const std::size_t k = ladder.size();
    if (k >= 2) {
        out.dimension = richardson(ladder[k - 2], out.roots[k - 2], ladder[k - 1], out.roots[k - 1]);
        out.entropy = richardson(ladder[k - 2], entropies[k - 2], ladder[k - 1], entropies[k - 1]);
    } else {
        out.dimension = out.roots[0];
        out.entropy = entropies[0];
    }
    double lo = out.dimension, hi = out.dimension;
    for (double r : out.roots) {
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    out.error = std::max(hi - lo, cfg.t_tolerance);
    return out;
}

BoxEstimate hd_box(const PolyMap& map, const HausdorffConfig& cfg) {
    return hd_box(map, cfg.box_max_level, cfg);
}

BoxEstimate hd_box(const PolyMap& map, int depth, const HausdorffConfig& cfg) {
    if (depth <= cfg.box_min_level + 1 || depth > 24) {
        throw DomainError("box depth must exceed the minimum level by two and be at most 24");
    }
    if (cfg.box_points < 1000) {
        throw DomainError("box counting needs at least 1000 points");
    }
    const std::size_t S = map.stages().size();
    std::mt19937_64 rng(cfg.seed);
    std::uniform_int_distribution<int> digit(0, map.d() - 1);
    std::vector<int> digits(S);
    Complex z = 1.0;
    auto advance = [&] {
        for (auto& g : digits) {
            g = digit(rng);
        }
        z = map.inverse_pass(z, digits.data());
    };
    for (long i = 0; i < cfg.burn_in; ++i) {
        advance();
    }
    std::vector<Complex> pts(static_cast<std::size_t>(cfg.box_points));
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (auto& p : pts) {
        advance();
        p = z;
        xmin = std::min(xmin, z.real());
        xmax = std::max(xmax, z.real());
        ymin = std::min(ymin, z.imag());
        ymax = std::max(ymax, z.imag());
    }
    const double side = std::max({xmax - xmin, ymax - ymin, 1e-12}) * (1.0 + 1e-9);

    BoxEstimate out;
    out.points = cfg.box_points;
    std::vector<std::uint64_t> keys(pts.size());
    for (int level = cfg.box_min_level; level <= depth; ++level) {
        const double cells = std::ldexp(1.0, level);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const auto ix = std::uint64_t((pts[i].real() - xmin) / side * cells);
            const auto iy = std::uint64_t((pts[i].imag() - ymin) / side * cells);
            keys[i] = (ix << 32) | iy;
        }
        std::sort(keys.begin(), keys.end());
        const auto distinct = std::unique(keys.begin(), keys.end()) - keys.begin();
        out.levels.push_back(level);
        out.counts.push_back(long(distinct));
    }
    // Least squares of log2 N against level.
    const double n = double(out.levels.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < out.levels.size(); ++i) {
        const double x = out.levels[i];
        const double y = std::log2(double(out.counts[i]));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    const double cov = sxy - sx * sy / n;
    const double vx = sxx - sx * sx / n;
    const double vy = syy - sy * sy / n;
    out.dimension = cov / vx;
    out.r2 = vy > 0.0 ? cov * cov / (vx * vy) : 1.0;
    out.low_confidence = out.r2 < cfg.min_r2;
    return out;
}

nlohmann::json to_json(const BowenEstimate& est) {
    return {{"dimension", est.dimension}, {"error", est.error},  {"periods", est.periods},
            {"roots", est.roots},         {"entropy", est.entropy}};
}

nlohmann::json to_json(const BoxEstimate& est) {
    return {{"dimension", est.dimension}, {"r2", est.r2},         {"low_confidence", est.low_confidence},
            {"levels", est.levels},       {"counts", est.counts}, {"points", est.points}};
}

} // namespace pararc::hausdorff
