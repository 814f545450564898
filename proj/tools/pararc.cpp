#include "pararc/cli/cli.hpp"
#include "pararc/errors.hpp"

#include "CLI11.hpp"

#include <iostream>

using namespace pararc;
using namespace pararc::cli;

namespace {

percurve::Region parse_region(const std::vector<std::string>& coords, double radius) {
    percurve::Region region;
    for (const auto& c : coords) {
        region.center.push_back(parse_complex(c));
    }
    region.radius = radius;
    return region;
}

void print_files(const CommandResult& res) {
    for (const auto& f : res.files) {
        std::cout << "wrote " << f << "\n";
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Parabolic arcs, Per_n curves and Julia set dimensions"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    std::optional<std::string> out;
    app.add_option("--config", config_path, "JSON file overriding RunConfig defaults")->check(CLI::ExistingFile);
    app.add_option("--seed", seed, "Seed for every stochastic estimator");
    app.add_option("--threads", threads, "Worker thread cap")->check(CLI::PositiveNumber);
    app.add_option("--out", out, "Output directory");

    auto* curve = app.add_subcommand("curve", "Compute Per_n(r) of a family");
    std::string family = "biquadratic";
    int d = 2, n = 1;
    std::string r = "1";
    curve->add_option("--family", family, "biquadratic, cubic, quartic or nested-cubic");
    curve->add_option("--d", d, "Degree of the biquadratic family");
    curve->add_option("--n", n, "Period");
    curve->add_option("--r", r, "Multiplier: rational such as 1/2, or a symbol");

    auto* singular = app.add_subcommand("singular", "Singular points of Per_n(1)");
    std::vector<std::string> region_center;
    double region_radius = 0.05;
    int samples = 3;
    singular->add_option("--family", family, "biquadratic, cubic, quartic or nested-cubic");
    singular->add_option("--d", d, "Degree of the biquadratic family");
    singular->add_option("--n", n, "Period");
    singular->add_option("--region", region_center, "Search centre, one re,im per parameter");
    singular->add_option("--radius", region_radius, "Search radius");
    singular->add_option("--samples", samples, "Quartic stratum samples per stratum");

    auto* arc = app.add_subcommand("arc", "Trace a parabolic arc of the multicorn");
    arc->set_help_flag("--help", "Print this help message and exit");
    int k = 1, arc_index = 0;
    std::string h_range = "-1:1:21";
    arc->add_option("--k", k, "Period of the arc");
    arc->add_option("--arc", arc_index, "Arc index between consecutive cusps");
    arc->add_option("--d", d, "Degree");
    arc->add_option("--h", h_range, "Critical Ecalle heights as lo:hi:count");

    auto* hd = app.add_subcommand("hd", "Hausdorff dimension profile along an arc");
    std::string arc_csv;
    hd->add_option("--arc", arc_csv, "Arc CSV written by the arc command")->required()->check(CLI::ExistingFile);
    hd->add_option("--d", d, "Degree");

    auto* rend = app.add_subcommand("render", "Render a parameter plane or Julia set to PPM");
    std::string mode = "multicorn", center = "0,0", slice = "a=0,0", julia = "0,0", file = "render.ppm";
    double width = 4.0, escape = 4.0;
    int pw = 512, ph = 512;
    std::optional<int> max_iter;
    bool anti = false, cusps = false;
    std::vector<std::string> overlays;
    rend->add_option("--mode", mode, "multicorn, multibrot, biquadratic-slice or julia");
    rend->add_option("--d", d, "Degree");
    rend->add_option("--center", center, "View centre re,im");
    rend->add_option("--width", width, "View width");
    rend->add_option("--pixels-w", pw, "Image width in pixels");
    rend->add_option("--pixels-h", ph, "Image height in pixels");
    rend->add_option("--max-iter", max_iter, "Iteration cap");
    rend->add_option("--escape-radius", escape, "Escape radius");
    rend->add_option("--slice", slice, "Fixed slice coordinate, a=re,im or b=re,im");
    rend->add_option("--julia-c", julia, "Julia parameter re,im");
    rend->add_flag("--antiholomorphic", anti, "Julia set of conj(z)^d + c");
    rend->add_option("--overlay", overlays, "Arc CSV or singular-point JSON to draw");
    rend->add_flag("--cusps", cusps, "Mark the period-one tricorn cusps");
    rend->add_option("--file", file, "Output file name inside the output directory");

    auto* self = app.add_subcommand("selftest", "Run the acceptance suite and write its artifacts");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
        if (seed) {
            cfg.seed = *seed;
        }
        if (threads) {
            cfg.threads = *threads;
        }
        if (out) {
            cfg.out = *out;
        }

        CommandResult res;
        if (*curve) {
            res = cmd_curve(cfg, family, d, n, r);
            const auto& s = res.report.at("scalar_vs_paper");
            std::cout << res.report.at("poly_text").get<std::string>() << "\n"
                      << "scalar_vs_paper " << (s.is_null() ? std::string("none") : s.get<std::string>()) << "\n";
        } else if (*singular) {
            std::optional<percurve::Region> region;
            if (!region_center.empty()) {
                region = parse_region(region_center, region_radius);
            }
            res = cmd_singular(cfg, family, d, n, region, samples);
            for (const auto& p : res.report.at("singular_points")) {
                std::cout << p.at("label").get<std::string>() << " at " << p.at("location").dump() << "\n";
            }
        } else if (*arc) {
            res = cmd_arc(cfg, k, arc_index, d, parse_range(h_range));
            std::cout << res.report.at("samples").size() << " samples, "
                      << res.report.at("flagged").size() << " flagged\n";
        } else if (*hd) {
            res = cmd_hd(cfg, arc_csv, d);
            std::cout << "jump statistic " << res.report.at("jump_stat").dump() << "\n";
        } else if (*rend) {
            render::ImageSpec spec;
            spec.mode = render::parse_mode(mode);
            spec.d = d;
            spec.center = parse_complex(center);
            spec.width = width;
            spec.pixels_w = pw;
            spec.pixels_h = ph;
            spec.max_iter = max_iter.value_or(cfg.render_max_iter);
            spec.escape_radius = escape;
            if (slice.size() < 3 || (slice[0] != 'a' && slice[0] != 'b') || slice[1] != '=') {
                throw DomainError("--slice must look like a=re,im or b=re,im");
            }
            spec.slice_fixed = slice[0];
            spec.slice_value = parse_complex(slice.substr(2));
            spec.julia_c = parse_complex(julia);
            spec.julia_antiholomorphic = anti;
            res = cmd_render(cfg, spec, overlays, cusps, file);
        } else if (*self) {
            const auto results = run_selftest(cfg, cfg.out, &std::cout);
            for (const auto& c : results) {
                res.within_tolerance = res.within_tolerance && c.pass;
            }
            res.files.push_back(cfg.out + "/selftest.json");
        }
        print_files(res);
        return res.within_tolerance ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code(e);
    }
}
