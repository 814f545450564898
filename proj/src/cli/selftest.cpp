#include "pararc/cli/cli.hpp"

#include "pararc/errors.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <ostream>

namespace pararc::cli {

namespace {

namespace fs = std::filesystem;
using percurve::FamilySpec;
using percurve::Multiplier;

const Complex kOmega = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

Rational q(long n, long d = 1) {
    Rational r(n, d);
    r.canonicalize();
    return r;
}

double dist(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
        d = std::max(d, std::abs(a[i] - b[i]));
    }
    return d;
}

void write_json(const fs::path& path, const nlohmann::json& j) {
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    os << j.dump(2) << "\n";
}

// Collects failed checks of one criterion.
struct Checks {
    std::vector<std::string> failures;
    std::vector<std::string> notes;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            failures.push_back(what);
        }
    }
    void note(const std::string& text) { notes.push_back(text); }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Polynomial displayed in a reference file, parsed from its expression text.
polyalg::ExactPoly reference_expression(const RunConfig& cfg, const std::string& file) {
    const std::string path = cfg.curve.reference_dir + "/" + file;
    std::ifstream is(path);
    if (!is) {
        throw IoError("missing reference file " + path);
    }
    const auto j = nlohmann::json::parse(is);
    return polyalg::ExactPoly::parse(j.at("expression").get<std::string>(),
                                      j.at("vars").get<std::vector<std::string>>());
}

nlohmann::json curve_artifact(const RunConfig& cfg, const percurve::PlaneCurve& c) {
    auto j = percurve::curve_report(c);
    j["config"] = to_json(cfg);
    return j;
}

} // namespace

std::vector<Criterion> run_selftest(const RunConfig& base, const std::string& dir_name,
                                    std::ostream* progress) {
    RunConfig cfg = base;
    cfg.out = dir_name;
    std::error_code ec;
    fs::create_directories(dir_name, ec);
    if (ec) {
        throw IoError("cannot create output directory " + dir_name + ": " + ec.message());
    }
    const fs::path dir(dir_name);
    const auto hcfg = cfg.hausdorff_config();
    const auto sopts = cfg.singular_options();

    std::vector<Criterion> results;
    auto run = [&](int id, const std::string& title, double limit, const std::function<void(Checks&)>& body) {
        Criterion c;
        c.id = id;
        c.title = title;
        Checks checks;
        const auto t0 = Clock::now();
        try {
            body(checks);
        } catch (const std::exception& e) {
            checks.failures.push_back(std::string("error: ") + e.what());
        }
        c.seconds = seconds_since(t0);
        if (limit > 0.0 && c.seconds > limit) {
            checks.failures.push_back("exceeded the " + num(limit) + " s limit");
        }
        c.pass = checks.failures.empty();
        std::string detail;
        for (const auto& s : c.pass ? checks.notes : checks.failures) {
            detail += (detail.empty() ? "" : "; ") + s;
        }
        c.detail = detail;
        if (progress) {
            *progress << "[" << id << "] " << (c.pass ? "PASS" : "FAIL") << " " << title << " ("
                      << num(c.seconds) << " s) " << c.detail << std::endl;
        }
        results.push_back(c);
    };

    // 1. Curves equal the reference polynomials up to one rational scalar.
    run(1, "curve identities", 0.0, [&](Checks& ck) {
        struct Case {
            FamilySpec fam;
            Multiplier r;
            const char* file;
        };
        const std::vector<Case> cases = {
            {FamilySpec::biquadratic(2), Multiplier::exact(1), "biquadratic2_per1_1.json"},
            {FamilySpec::biquadratic(2), Multiplier::symbolic(), "biquadratic2_per1_r.json"},
            {FamilySpec::cubic(), Multiplier::exact(1), "cubic_per1_1.json"},
            {FamilySpec::cubic(), Multiplier::symbolic(), "cubic_per1_r.json"},
            {FamilySpec::quartic(), Multiplier::exact(1), "quartic_per1_1.json"},
        };
        for (const auto& cs : cases) {
            const std::string name = cs.fam.tag() + " r=" + cs.r.to_string();
            const auto t0 = Clock::now();
            const auto curve = percurve::per_curve(cs.fam, 1, cs.r, cfg.curve);
            const double secs = seconds_since(t0);
            const auto ref = reference_expression(cfg, cs.file);
            const auto mine = curve.poly.compacted().with_vars(ref.vars());
            const auto s = polyalg::proportionality_scalar(mine, ref);
            ck.require(s.has_value() && *s != 0, name + " is not a scalar multiple of the reference");
            ck.require(secs < 1.0, name + " took longer than 1 s");
            if (s) {
                ck.note(name + " scalar " + to_string(*s));
            }
            write_json(dir / ("curve_" + cs.fam.tag() + "_r" + cs.r.to_string() + ".json"),
                       curve_artifact(cfg, curve));
        }
    });

    // 2. Singular loci of the biquadratic, cubic and quartic families.
    std::vector<percurve::SingularPoint> h1_points;
    percurve::PlaneCurve h1;
    run(2, "singular loci", 10.0, [&](Checks& ck) {
        using namespace percurve;
        h1 = per_curve(FamilySpec::biquadratic(2), 1, Multiplier::exact(1), cfg.curve);
        h1_points = singular_points(h1, std::nullopt, sopts);
        ck.require(h1_points.size() == 3, "biquadratic has " + std::to_string(h1_points.size()) +
                                              " singular points, expected 3");
        const std::vector<std::vector<Complex>> expected = {
            {-0.75, -0.75}, {-0.75 * kOmega, -0.75 * kOmega * kOmega}, {-0.75 * kOmega * kOmega, -0.75 * kOmega}};
        for (const auto& e : expected) {
            const SingularPoint* hit = nullptr;
            for (const auto& p : h1_points) {
                if (dist(p.location, e) <= 1e-10) {
                    hit = &p;
                }
            }
            const std::string where = "cusp near (" + num(e[0].real()) + "," + num(e[0].imag()) + ")";
            ck.require(hit != nullptr, where + " not found within 1e-10");
            if (hit) {
                ck.require(hit->label == "ordinary-cusp", where + " labelled " + hit->label);
                ck.require(hit->milnor && *hit->milnor == 2, where + " Milnor number is not 2");
                ck.require(hit->tangent_cone.factors.size() == 1 &&
                               hit->tangent_cone.factors[0].multiplicity == 2,
                           where + " has no double tangent");
                ck.require(hit->residual_h <= 1e-10 && hit->residual_grad <= 1e-10,
                           where + " residual above 1e-10");
            }
        }
        write_json(dir / "singular_biquadratic2.json",
                   {{"singular_points", singular_report(h1_points)}, {"config", to_json(cfg)}});

        const auto cubic = per_curve(FamilySpec::cubic(), 1, Multiplier::exact(1), cfg.curve);
        const auto cpts = singular_points(cubic, std::nullopt, sopts);
        ck.require(cpts.size() == 1 && cpts[0].exact_location &&
                       *cpts[0].exact_location == std::vector<Rational>{q(-1, 3), q(0)},
                   "cubic singular set is not exactly {(-1/3, 0)}");
        write_json(dir / "singular_cubic.json",
                   {{"singular_points", singular_report(cpts)}, {"config", to_json(cfg)}});

        const auto quartic = per_curve(FamilySpec::quartic(), 1, Multiplier::exact(1), cfg.curve);
        const auto h = quartic.poly.with_vars(quartic.params());
        auto vanishes = [&](const std::vector<Rational>& p) {
            return h.eval_exact({{"a", p[0]}, {"b", p[1]}, {"c", p[2]}}) == 0;
        };
        ck.require(vanishes({q(2), q(1), q(1)}), "quartic curve does not vanish at (2,1,1)");
        ck.require(vanishes({q(-3, 2), q(0), q(-3, 16)}), "quartic curve does not vanish at (-3/2,0,-3/16)");
        ck.require(quartic_strata(std::vector<Rational>{q(2), q(1), q(1)}).label == "V1",
                   "(2,1,1) is not on V1");
        ck.require(quartic_strata(std::vector<Rational>{q(-3, 2), q(0), q(-3, 16)}).label == "V2",
                   "(-3/2,0,-3/16) is not on V2");
        std::vector<SingularPoint> qpts;
        const auto v0 = classify_exact(quartic, {q(0), q(1), q(0)});
        qpts.push_back(v0);
        ck.require(v0.label == "triple-point" && v0.stratum == "V0", "(0,1,0) is not a V0 triple point");
        ck.require(v0.tangent_cone.factors.size() == 1 && v0.tangent_cone.factors[0].multiplicity == 3,
                   "(0,1,0) has no tangent of multiplicity 3");
        for (const auto& p : quartic_v1_samples(3)) {
            const auto sp = classify_exact(quartic, p);
            ck.require(vanishes(p) && sp.label == "node" && sp.stratum == "V1", "V1 sample is not a node");
            qpts.push_back(sp);
        }
        for (const auto& p : quartic_v2_samples(3)) {
            const auto sp = classify_exact(quartic, p);
            ck.require(vanishes(p) && sp.label == "double-point-single-tangent" && sp.stratum == "V2",
                       "V2 sample is not a double point with a single tangent");
            qpts.push_back(sp);
        }
        write_json(dir / "singular_quartic.json",
                   {{"singular_points", singular_report(qpts)}, {"config", to_json(cfg)}});
        ck.note("3 cusps, cubic (-1/3,0), quartic V0 triple point, 3 V1 nodes, 3 V2 single-tangent points");
    });

    // 3. Double point of the nested cubic family.
    run(3, "nested-cubic double point", 60.0, [&](Checks& ck) {
        using namespace percurve;
        const auto curve = per_curve(FamilySpec::nested_cubic(), 1, Multiplier::exact(1), cfg.curve);
        const std::vector<Complex> target{{0.7698, 0.7698}, {0.7698, -0.7698}};
        const auto pts = singular_points(curve, Region{target, 0.05}, sopts);
        const SingularPoint* hit = nullptr;
        for (const auto& p : pts) {
            if (dist(p.location, target) <= 1e-3) {
                hit = &p;
            }
        }
        ck.require(hit != nullptr, "no singular point within 1e-3 of the target");
        if (hit) {
            ck.require(hit->label == "node", "labelled " + hit->label + ", expected node");
            ck.require(hit->tangent_cone.factors.size() == 2, "tangent cone does not have two distinct lines");
            ck.note("node at distance " + num(dist(hit->location, target)) + ", residual " +
                    num(hit->residual_h));
        }
        write_json(dir / "singular_nested_cubic.json",
                   {{"singular_points", singular_report(pts)}, {"config", to_json(cfg)}});
    });

    // 4. Morsification of the cusps.
    run(4, "morsification", 5.0, [&](Checks& ck) {
        using namespace percurve;
        for (const auto& r : {q(9, 10), q(99, 100)}) {
            const auto c = per_curve(FamilySpec::cubic(), 1, Multiplier::exact(r), cfg.curve);
            const auto cps = critical_points(c.poly.with_vars(c.params()), sopts);
            for (const auto& e : {std::vector<Rational>{Rational((r - 3) / 6), q(0)},
                                  std::vector<Rational>{Rational(-(r + 1) / 6), q(0)}}) {
                bool found = false;
                for (const auto& cp : cps) {
                    found = found || (cp.exact_location && *cp.exact_location == e && cp.nondegenerate);
                }
                ck.require(found, "cubic r=" + to_string(r) + " lacks critical point (" + to_string(e[0]) + ", 0)");
            }
        }
        const auto track = track_morsification(FamilySpec::biquadratic(2), 1, default_r_ladder(),
                                               {-0.75, -0.75}, 0.1);
        double prev = 1e300;
        for (const auto& step : track.steps) {
            double far = 0.0;
            bool nondeg = true;
            for (const auto& cp : step.points) {
                far = std::max(far, dist(cp.location, {-0.75, -0.75}));
                nondeg = nondeg && cp.nondegenerate;
            }
            const std::string rs = to_string(step.r);
            if (step.r == q(99, 100)) {
                ck.require(step.points.size() == 2 && nondeg && far < 0.1,
                           "r=99/100 does not give two non-degenerate critical points within 0.1");
                ck.note("r=99/100 distance " + num(far));
            }
            ck.require(step.points.size() == 2 && far < prev, "critical points do not approach the cusp at r=" + rs);
            prev = far;
        }
    });

    // 5. Genus of Per_1(1) of the biquadratic family.
    run(5, "genus", 0.0, [&](Checks& ck) {
        if (h1_points.empty()) {
            h1 = percurve::per_curve(FamilySpec::biquadratic(2), 1, Multiplier::exact(1), cfg.curve);
            h1_points = percurve::singular_points(h1, std::nullopt, sopts);
        }
        const int g = percurve::degree_genus(h1, h1_points);
        ck.require(g == 0, "genus " + std::to_string(g) + ", expected 0");
        ck.note("degree " + std::to_string(h1.poly.total_degree()) + ", genus " + std::to_string(g));
    });

    // 6. Deformation map values and commutation with the half twist.
    run(6, "deformation map", 0.0, [&](Checks& ck) {
        const Complex I(0.0, 1.0);
        const Complex w(1.0, 0.125);
        ck.require(fatou::deformation_map_L(0.25, w) == 0.125 + I, "L_{1+i/8}(1/4) != 1/8+i");
        ck.require(fatou::deformation_map_L(0.75, w) == 0.875 - I, "L_{1+i/8}(3/4) != 7/8-i");
        ck.require(fatou::deformation_map_L(0.25, 1.0) == 0.25 + I, "L_1(1/4) != 1/4+i");
        ck.require(fatou::deformation_map_L(0.75, 1.0) == 0.75 - I, "L_1(3/4) != 3/4-i");
        std::vector<Complex> grid;
        for (int i = 0; i <= 20; ++i) {
            for (int j = -5; j <= 5; ++j) {
                grid.emplace_back(0.05 * i, 0.3 * j);
            }
        }
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            worst = std::max(worst, fatou::commutation_defect(-3.0 + 0.3 * i, grid));
        }
        const double complex_w = fatou::commutation_defect(Complex(0.0, 0.125), grid);
        ck.require(worst < 1e-12, "real w commutation defect " + num(worst));
        ck.require(complex_w > 0.01, "w = i/8 commutation defect " + num(complex_w));
        ck.note("real defect " + num(worst) + ", i/8 defect " + num(complex_w));
    });

    // 7. Heights, Fatou vectors and the real point of the arc.
    run(7, "Ecalle/Fatou consistency", 300.0, [&](Checks& ck) {
        const std::vector<double> hs{-1.0, -0.5, 0.0, 0.5, 1.0};
        const auto samples = fatou::arc_trace(1, hs, 0, 2, cfg.fatou);
        double worst_h = 0.0, worst_im = 0.0, worst_re = 0.0, c0 = 1.0;
        for (const auto& s : samples) {
            if (s.h_target == 0.0) {
                c0 = std::abs(s.c - 0.25);
            }
            worst_h = std::max(worst_h, std::abs(fatou::critical_ecalle_height(s.c, 1, 2, cfg.fatou) - s.h_target));
            worst_im = std::max(worst_im, std::abs(s.fatou_vector.imag() + 2.0 * s.h_target));
            const double re = s.fatou_vector.real() - 0.5;
            worst_re = std::max(worst_re, std::abs(re - std::round(re)));
        }
        ck.require(c0 <= 1e-8, "|c(0) - 1/4| = " + num(c0));
        ck.require(worst_h <= 1e-5, "height round trip error " + num(worst_h));
        ck.require(worst_im <= 2e-3, "Im FV + 2h error " + num(worst_im));
        ck.require(worst_re <= 2e-3, "Re FV - 1/2 error " + num(worst_re));
        ck.note("|c(0)-1/4| " + num(c0) + ", height " + num(worst_h) + ", Im FV " + num(worst_im) +
                ", Re FV " + num(worst_re));
    });

    // 8. Arc speeds on 21 samples, also the arc artifact and the image.
    run(8, "arc regularity", 0.0, [&](Checks& ck) {
        const auto res = cmd_arc(cfg, 1, 0, 2, parse_range("-1:1:21"));
        double slowest = 1e300;
        int speeds = 0;
        for (const auto& s : res.report.at("samples")) {
            if (!s.at("speed").is_null()) {
                slowest = std::min(slowest, s.at("speed").get<double>());
                ++speeds;
            }
        }
        ck.require(speeds == 19, "expected 19 central differences, got " + std::to_string(speeds));
        ck.require(slowest > 1e-4, "slowest speed " + num(slowest));
        ck.require(res.within_tolerance, "arc samples flagged or curve residual above 1e-8");
        ck.note("slowest |dc/dh| " + num(slowest));
        render::ImageSpec spec;
        spec.pixels_w = spec.pixels_h = 256;
        spec.max_iter = cfg.render_max_iter;
        cmd_render(cfg, spec, {(dir / "arc.csv").string()}, true, "tricorn.ppm");
    });

    // 9. Calibration of the dimension estimators on z^2.
    run(9, "estimator calibration", 600.0, [&](Checks& ck) {
        using namespace hausdorff;
        const auto circle = PolyMap::unicritical(2, 0.0);
        const auto bowen = hd_bowen(circle, hcfg);
        ck.require(std::abs(bowen.dimension - 1.0) <= 0.02, "hd_bowen(0) = " + num(bowen.dimension));
        const double log2 = std::log(2.0);
        for (int n : {8, 10, 12}) {
            const auto set = periodic_points(circle, n, hcfg);
            const double p0 = pressure(set, 0.0), p1 = pressure(set, 1.0);
            ck.require(std::abs(p0 - log2) <= 0.02 * log2, "P_" + std::to_string(n) + "(0) = " + num(p0));
            ck.require(std::abs(p1) <= 0.02, "P_" + std::to_string(n) + "(1) = " + num(p1));
        }
        const auto box0 = hd_box(circle, hcfg);
        const auto box2 = hd_box(PolyMap::unicritical(2, -2.0), hcfg);
        ck.require(std::abs(box0.dimension - 1.0) <= 0.03, "hd_box(0) = " + num(box0.dimension));
        ck.require(std::abs(box2.dimension - 1.0) <= 0.03, "hd_box(-2) = " + num(box2.dimension));

        std::vector<double> grid;
        for (int i = 0; i <= 40; ++i) {
            grid.push_back(0.05 * i);
        }
        nlohmann::json curves = nlohmann::json::array();
        const std::vector<std::pair<PolyMap, std::vector<int>>> maps = {
            {circle, {8, 10, 12}},
            {PolyMap::multicorn(2, 0.25), hcfg.ladder},
            {PolyMap::unicritical(2, Complex(-0.1, 0.05)), {8, 10, 12}}};
        for (const auto& [map, periods] : maps) {
            const auto pc = pressure_curve(map, periods, grid, hcfg);
            for (std::size_t i = 0; i < pc.values.size(); ++i) {
                for (std::size_t j = 1; j < grid.size(); ++j) {
                    ck.require(pc.values[i][j] <= pc.values[i][j - 1],
                               "P_n increases on " + map.describe() + " at n=" + std::to_string(periods[i]));
                }
            }
            curves.push_back({{"map", map.describe()}, {"periods", pc.periods}, {"t", pc.t_grid},
                              {"values", pc.values}, {"extrapolated", pc.extrapolated}});
        }
        write_json(dir / "calibration.json", {{"bowen", to_json(bowen)},
                                              {"box_c0", to_json(box0)},
                                              {"box_cm2", to_json(box2)},
                                              {"pressure_curves", curves},
                                              {"config", to_json(cfg)}});
        ck.note("bowen " + num(bowen.dimension) + ", box(0) " + num(box0.dimension) + ", box(-2) " +
                num(box2.dimension));
    });

    // 10. Dimension profile along the period-one arc.
    run(10, "dimension profile", 3600.0, [&](Checks& ck) {
        using namespace hausdorff;
        const auto samples = fatou::arc_trace(1, parse_range("-1:1:11"), 0, 2, cfg.fatou);
        const auto profile = arc_hd_profile(samples, 2, hcfg);
        ck.require(!profile.has_gaps, "profile has failed samples");
        ck.require(profile.jump_stat < 0.02, "jump statistic " + num(profile.jump_stat));
        const double fit4 = profile.fit_residuals.empty() ? 1e300 : profile.fit_residuals.back();
        ck.require(fit4 < profile.min_error,
                   "degree-4 fit residual " + num(fit4) + " not below error " + num(profile.min_error));
        ck.require(profile.symmetry_defect && profile.symmetry_bound &&
                       *profile.symmetry_defect <= *profile.symmetry_bound,
                   "mirror defect exceeds the combined error bars");
        double gap = 1e300;
        for (const auto& s : profile.samples) {
            if (std::abs(s.h) < 1e-12 && s.hd_pressure && s.hd_box) {
                gap = std::abs(*s.hd_pressure - *s.hd_box);
            }
        }
        ck.require(gap <= 0.05, "|hd_pressure - hd_box| at h=0 is " + num(gap));
        std::string csv = "# config " + to_json(cfg).dump() + "\n" + profile_csv_header() + "\n";
        for (const auto& s : profile.samples) {
            csv += profile_csv_row(profile, s) + "\n";
        }
        std::ofstream(dir / "hd_profile.csv", std::ios::binary) << csv;
        auto j = to_json(profile);
        j["config"] = to_json(cfg);
        write_json(dir / "hd_profile.json", j);
        ck.note("jump " + num(profile.jump_stat) + ", fit " + num(fit4) + " < " + num(profile.min_error) +
                ", mirror " + num(profile.symmetry_defect.value_or(-1.0)) + ", box gap " + num(gap));
    });

    nlohmann::json summary = nlohmann::json::array();
    for (const auto& c : results) {
        summary.push_back({{"id", c.id}, {"title", c.title}, {"pass", c.pass}, {"detail", c.detail}});
    }
    write_json(dir / "selftest.json", {{"criteria", summary}, {"config", to_json(cfg)}});
    return results;
}

} // namespace pararc::cli
