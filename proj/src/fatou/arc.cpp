#include "pararc/errors.hpp"
#include "pararc/fatou/fatou.hpp"
#include "pararc/percurve/curve.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <cmath>
#include <cstdio>
#include <numbers>

namespace pararc::fatou {

namespace {

constexpr double kPi = std::numbers::pi;

double curve_residual(const polyalg::ExactPoly& h, Complex c) {
    const std::vector<Complex> at = {std::conj(c), c};
    const double scale = std::max(h.eval_abs_scale(at), 1e-300);
    return std::abs(h.eval(at)) / scale;
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace

Complex period_one_parameter(int d, double theta) {
    if (d < 2) {
        throw DomainError("degree must be at least 2");
    }
    const double rho = std::pow(double(d), -1.0 / double(d - 1));
    const Complex z0 = std::polar(rho, theta);
    return z0 - std::pow(std::conj(z0), d);
}

std::pair<double, double> period_one_arc_interval(int d, int arc) {
    if (arc < 0 || arc > d) {
        throw DomainError("arc index must lie in [0, " + std::to_string(d) + "]");
    }
    const double step = kPi / double(d + 1);
    return {double(2 * arc - 1) * step, double(2 * arc + 1) * step};
}

std::vector<ArcSample> arc_trace(int k, const std::vector<double>& heights, int arc, int d,
                                 const FatouConfig& cfg) {
    if (k != 1) {
        throw DomainError("arc tracing is implemented for period 1 only");
    }
    const auto [lo, hi] = period_one_arc_interval(d, arc);
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    auto height = [&](double theta) {
        return critical_ecalle_height(period_one_parameter(d, theta), 1, d, cfg);
    };
    const double h_center = height(center);
    const double probe = 1e-3 * half;
    const double orientation = height(center + probe) > height(center - probe) ? 1.0 : -1.0;

    const auto curve = percurve::per_curve(percurve::FamilySpec::biquadratic(d), 1,
                                           percurve::Multiplier::exact(1));
    const auto h = curve.poly.with_vars(curve.params());

    std::vector<ArcSample> out;
    for (double target : heights) {
        if (!std::isfinite(target)) {
            throw DomainError("requested height is not finite");
        }
        double theta_a = center;
        double f_a = h_center - target;
        double theta_b = center;
        double f_b = f_a;
        if (f_a != 0.0) {
            // March toward the cusp on the side where the height moves
            // toward the target, halving the remaining gap each step.
            const double dir = (target > h_center ? 1.0 : -1.0) * orientation;
            const double end = dir > 0 ? hi : lo;
            bool bracketed = false;
            double theta = center;
            double step = 0.05 * half;
            for (int i = 0; i < 80 && !bracketed; ++i) {
                double next = theta + dir * step;
                if ((end - next) * dir <= 0.25 * std::abs(end - theta)) {
                    next = theta + 0.5 * (end - theta);
                }
                double f_next;
                try {
                    f_next = height(next) - target;
                } catch (const NumericError& e) {
                    throw DomainError("height " + fmt(target) +
                                      " is out of reach before the cusp: " + e.what());
                }
                if ((f_next > 0) != (f_a > 0) || f_next == 0.0) {
                    theta_b = next;
                    f_b = f_next;
                    bracketed = true;
                } else {
                    theta_a = next;
                    f_a = f_next;
                    theta = next;
                    step *= 1.5;
                }
            }
            if (!bracketed) {
                throw DomainError("height " + fmt(target) + " is out of reach before the cusp");
            }
        }
        double theta_root = theta_a;
        if (f_a != 0.0 && f_b != 0.0) {
            std::uintmax_t max_iter = 200;
            auto tol = [](double x, double y) { return std::abs(x - y) <= 1e-15; };
            auto f = [&](double t) { return height(t) - target; };
            auto [x0, x1] = boost::math::tools::toms748_solve(
                f, std::min(theta_a, theta_b), std::max(theta_a, theta_b),
                theta_a < theta_b ? f_a : f_b, theta_a < theta_b ? f_b : f_a, tol, max_iter);
            theta_root = 0.5 * (x0 + x1);
        } else if (f_b == 0.0) {
            theta_root = theta_b;
        }
        ArcSample s;
        s.k = k;
        s.arc = arc;
        s.h_target = target;
        s.theta = theta_root;
        s.c = period_one_parameter(d, theta_root);
        auto cycle = find_parabolic_cycle(MapParameter::multicorn(d, s.c), k, cfg);
        auto phi = fatou_coordinate(cycle, cfg);
        s.h_achieved = phi(s.c).imag();
        s.fatou_vector = fatou_vector(phi);
        s.curve_residual = curve_residual(h, s.c);
        out.push_back(s);
    }
    return out;
}

SpeedReport arc_derivative_check(const std::vector<ArcSample>& samples, double threshold) {
    if (samples.size() < 3) {
        throw DomainError("speed check needs at least 3 samples");
    }
    SpeedReport r;
    for (std::size_t i = 1; i + 1 < samples.size(); ++i) {
        const double dh = samples[i + 1].h_target - samples[i - 1].h_target;
        if (dh == 0.0) {
            throw DomainError("neighbouring samples share the same height");
        }
        const double v = std::abs(samples[i + 1].c - samples[i - 1].c) / std::abs(dh);
        r.speeds.push_back(v);
        if (v < threshold) {
            r.flagged.push_back(i);
        }
    }
    return r;
}

Complex deformation_map_L(Complex zeta, Complex w) {
    if (std::abs(w.imag()) >= 0.25) {
        throw DomainError("|Im w| must be below 1/4");
    }
    const Complex I(0.0, 1.0);
    const double n = std::floor(zeta.real());
    const double x = zeta.real() - n;
    const Complex z0 = zeta - n;
    Complex v;
    if (x <= 0.25) {
        v = z0 + 4.0 * I * w * x;
    } else if (x <= 0.5) {
        v = z0 + 2.0 * I * w * (1.0 - 2.0 * x);
    } else if (x <= 0.75) {
        v = z0 - 2.0 * I * w * (2.0 * x - 1.0);
    } else {
        v = z0 - 4.0 * I * w * (1.0 - x);
    }
    return v + n;
}

double commutation_defect(Complex w, const std::vector<Complex>& points) {
    double worst = 0.0;
    for (Complex z : points) {
        const Complex lhs = deformation_map_L(std::conj(z) + 0.5, w);
        const Complex rhs = std::conj(deformation_map_L(z, w)) + 0.5;
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

nlohmann::json to_json(const ArcSample& s) {
    nlohmann::json j = {{"k", s.k},
                        {"arc", s.arc},
                        {"h_target", s.h_target},
                        {"theta", s.theta},
                        {"c_re", s.c.real()},
                        {"c_im", s.c.imag()},
                        {"h_achieved", s.h_achieved},
                        {"fv_re", s.fatou_vector.real()},
                        {"fv_im", s.fatou_vector.imag()},
                        {"curve_residual", s.curve_residual}};
    j["speed"] = s.speed ? nlohmann::json(*s.speed) : nlohmann::json();
    return j;
}

std::string arc_csv_header() {
    return "h_target,c_re,c_im,h_achieved,fv_re,fv_im,curve_residual,speed";
}

std::string arc_csv_row(const ArcSample& s) {
    return fmt(s.h_target) + "," + fmt(s.c.real()) + "," + fmt(s.c.imag()) + "," +
           fmt(s.h_achieved) + "," + fmt(s.fatou_vector.real()) + "," +
           fmt(s.fatou_vector.imag()) + "," + fmt(s.curve_residual) + "," +
           (s.speed ? fmt(*s.speed) : std::string());
}

} // namespace pararc::fatou
