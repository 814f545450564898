#include "pararc/errors.hpp"
#include "pararc/fatou/fatou.hpp"
#include "pararc/hausdorff/hausdorff.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace pararc::hausdorff {

namespace {

// Residuals of the least-squares polynomial of the given degree in h.
std::vector<double> fit_residuals(const std::vector<double>& h, const std::vector<double>& y, int degree) {
    const auto n = Eigen::Index(h.size());
    double hs = 0.0;
    for (double v : h) {
        hs = std::max(hs, std::abs(v));
    }
    hs = hs > 0.0 ? hs : 1.0;
    Eigen::MatrixXd A(n, degree + 1);
    Eigen::VectorXd b(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double p = 1.0;
        for (int k = 0; k <= degree; ++k) {
            A(i, k) = p;
            p *= h[std::size_t(i)] / hs;
        }
        b(i) = y[std::size_t(i)];
    }
    const Eigen::VectorXd coef = A.completeOrthogonalDecomposition().solve(b);
    const Eigen::VectorXd r = A * coef - b;
    return {r.data(), r.data() + r.size()};
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

HDProfile arc_hd_profile(const std::vector<ProfileInput>& inputs, int d, const HausdorffConfig& cfg) {
    HDProfile out;
    for (const auto& in : inputs) {
        HDSample s;
        s.h = in.h;
        s.c = in.c;
        const PolyMap map = PolyMap::multicorn(d, in.c);
        try {
            const auto est = hd_bowen(map, cfg);
            s.hd_pressure = est.dimension;
            s.hd_err = est.error;
        } catch (const std::runtime_error& e) {
            s.error = e.what();
        }
        try {
            const auto box = hd_box(map, cfg);
            s.hd_box = box.dimension;
            s.box_r2 = box.r2;
        } catch (const std::runtime_error& e) {
            s.error += (s.error.empty() ? "" : "; ") + std::string(e.what());
        }
        out.has_gaps = out.has_gaps || !s.error.empty();
        out.samples.push_back(std::move(s));
    }
    std::stable_sort(out.samples.begin(), out.samples.end(),
                     [](const HDSample& a, const HDSample& b) { return a.h < b.h; });

    std::vector<double> hs, ys;
    std::vector<std::size_t> idx;
    double min_err = 0.0;
    for (std::size_t i = 0; i < out.samples.size(); ++i) {
        const auto& s = out.samples[i];
        if (s.hd_pressure) {
            hs.push_back(s.h);
            ys.push_back(*s.hd_pressure);
            idx.push_back(i);
            min_err = ys.size() == 1 ? s.hd_err : std::min(min_err, s.hd_err);
        }
    }
    out.min_error = min_err;
    for (int degree = 2; degree <= 4; ++degree) {
        if (hs.size() < std::size_t(degree) + 1) {
            break;
        }
        const auto r = fit_residuals(hs, ys, degree);
        double mx = 0.0;
        for (std::size_t i = 0; i < r.size(); ++i) {
            mx = std::max(mx, std::abs(r[i]));
            out.samples[idx[i]].fit_residual = r[i];
        }
        out.fit_residuals.push_back(mx);
    }
    for (std::size_t i = 1; i < ys.size(); ++i) {
        out.jump_stat = std::max(out.jump_stat, std::abs(ys[i] - ys[i - 1]));
    }
    // Mirror pairs: f at conj(c) is conjugate to f at c, so hd(h) = hd(-h)
    // whenever c(-h) = conj c(h).
    for (std::size_t i = 0; i < idx.size(); ++i) {
        const auto& a = out.samples[idx[i]];
        if (a.h <= 0.0) {
            continue;
        }
        for (std::size_t j = 0; j < idx.size(); ++j) {
            const auto& b = out.samples[idx[j]];
            if (std::abs(a.h + b.h) > 1e-12 || std::abs(a.c - std::conj(b.c)) > 1e-8) {
                continue;
            }
            const double defect = std::abs(*a.hd_pressure - *b.hd_pressure);
            const double bound = a.hd_err + b.hd_err;
            if (!out.symmetry_defect || defect > *out.symmetry_defect) {
                out.symmetry_defect = defect;
            }
            out.symmetry_bound = out.symmetry_bound ? std::min(*out.symmetry_bound, bound) : bound;
        }
    }
    return out;
}

HDProfile arc_hd_profile(const std::vector<fatou::ArcSample>& samples, int d, const HausdorffConfig& cfg) {
    std::vector<ProfileInput> in;
    in.reserve(samples.size());
    for (const auto& s : samples) {
        in.push_back({s.h_target, s.c});
    }
    return arc_hd_profile(in, d, cfg);
}

std::string profile_csv_header() {
    return "h,c_re,c_im,hd_pressure,hd_err,hd_box,box_r2,fit_residual,jump_stat";
}

std::string profile_csv_row(const HDProfile& profile, const HDSample& s) {
    auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
    std::ostringstream os;
    os << format_double(s.h) << ',' << format_double(s.c.real()) << ',' << format_double(s.c.imag()) << ','
       << opt(s.hd_pressure) << ',' << format_double(s.hd_err) << ',' << opt(s.hd_box) << ','
       << format_double(s.box_r2) << ',' << opt(s.fit_residual) << ',' << format_double(profile.jump_stat);
    return os.str();
}

nlohmann::json to_json(const HDProfile& profile) {
    nlohmann::json rows = nlohmann::json::array();
    auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
    for (const auto& s : profile.samples) {
        rows.push_back({{"h", s.h},
                        {"c_re", s.c.real()},
                        {"c_im", s.c.imag()},
                        {"hd_pressure", opt(s.hd_pressure)},
                        {"hd_err", s.hd_err},
                        {"hd_box", opt(s.hd_box)},
                        {"box_r2", s.box_r2},
                        {"fit_residual", opt(s.fit_residual)},
                        {"jump_stat", profile.jump_stat},
                        {"error", s.error}});
    }
    return {{"samples", rows},
            {"fit_residuals", profile.fit_residuals},
            {"jump_stat", profile.jump_stat},
            {"symmetry_defect", opt(profile.symmetry_defect)},
            {"symmetry_bound", opt(profile.symmetry_bound)},
            {"min_error", profile.min_error},
            {"has_gaps", profile.has_gaps}};
}

} // namespace pararc::hausdorff
