#include "pararc/cli/cli.hpp"

#include "pararc/errors.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace pararc::cli {

namespace {

namespace fs = std::filesystem;

void check_known_keys(const nlohmann::json& patch, const nlohmann::json& known, const std::string& where) {
    for (auto it = patch.begin(); it != patch.end(); ++it) {
        const std::string path = where.empty() ? it.key() : where + "." + it.key();
        if (!known.contains(it.key())) {
            throw DomainError("unknown config key '" + path + "'");
        }
        if (it->is_object()) {
            if (!known[it.key()].is_object()) {
                throw DomainError("config key '" + path + "' is not a section");
            }
            check_known_keys(*it, known[it.key()], path);
        }
    }
}

fs::path out_dir(const RunConfig& cfg) {
    std::error_code ec;
    fs::create_directories(cfg.out, ec);
    if (ec) {
        throw IoError("cannot create output directory " + cfg.out + ": " + ec.message());
    }
    return fs::path(cfg.out);
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    os << text;
    if (!os) {
        throw IoError("failed writing " + path.string());
    }
}

std::string config_line(const RunConfig& cfg) { return "# config " + to_json(cfg).dump() + "\n"; }

std::string sanitize(std::string s) {
    for (char& ch : s) {
        if (ch == '/') {
            ch = '_';
        } else if (ch == '-') {
            ch = 'm';
        }
    }
    return s;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream is(text);
    while (std::getline(is, cell, sep)) {
        out.push_back(cell);
    }
    if (!text.empty() && text.back() == sep) {
        out.emplace_back();
    }
    return out;
}

double parse_double(const std::string& text, const std::string& what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size()) {
        throw DomainError("cannot parse " + what + " '" + text + "'");
    }
    return v;
}

} // namespace

percurve::SingularOptions RunConfig::singular_options() const {
    auto o = singular;
    o.seed = seed;
    return o;
}

hausdorff::HausdorffConfig RunConfig::hausdorff_config() const {
    auto h = hausdorff;
    h.seed = seed;
    h.ladder.clear();
    for (int n = n_max - 6; n <= n_max; n += 2) {
        if (n > 0) {
            h.ladder.push_back(n);
        }
    }
    return h;
}

nlohmann::json to_json(const RunConfig& cfg) {
    const auto& c = cfg.curve;
    const auto& s = cfg.singular;
    const auto& f = cfg.fatou;
    const auto& h = cfg.hausdorff;
    return {
        {"seed", cfg.seed},
        {"threads", cfg.threads},
        {"out", cfg.out},
        {"n_max", cfg.n_max},
        {"render_max_iter", cfg.render_max_iter},
        {"curve",
         {{"max_exact_period", c.max_exact_period},
          {"z_degree_cap", c.caps.z_degree},
          {"parameter_degree_cap", c.caps.parameter_total_degree},
          {"reference_dir", c.reference_dir}}},
        {"singular",
         {{"tolerance", s.tolerance},
          {"merge_radius", s.merge_radius},
          {"starts", s.starts},
          {"root_budget", s.root_budget},
          {"elimination_degree_limit", s.elimination_degree_limit}}},
        {"fatou",
         {{"cycle_tolerance", f.cycle_tolerance},
          {"multiplier_tolerance", f.multiplier_tolerance},
          {"cusp_tolerance", f.cusp_tolerance},
          {"petal_radius", f.petal_radius},
          {"petal_angle", f.petal_angle},
          {"asymptotic_radius", f.asymptotic_radius},
          {"series_terms", f.series_terms},
          {"max_iterations", f.max_iterations},
          {"escape_radius", f.escape_radius},
          {"height_tolerance", f.height_tolerance},
          {"speed_threshold", f.speed_threshold}}},
        {"hausdorff",
         {{"parabolic_delta", h.parabolic_delta},
          {"degree_cap", h.degree_cap},
          {"point_tolerance", h.point_tolerance},
          {"stagnation_tolerance", h.stagnation_tolerance},
          {"t_tolerance", h.t_tolerance},
          {"box_points", h.box_points},
          {"burn_in", h.burn_in},
          {"box_min_level", h.box_min_level},
          {"box_max_level", h.box_max_level},
          {"min_r2", h.min_r2}}},
    };
}

RunConfig config_from_json(const nlohmann::json& patch, RunConfig base) {
    if (!patch.is_object()) {
        throw DomainError("config must be a JSON object");
    }
    nlohmann::json j = to_json(base);
    check_known_keys(patch, j, "");
    j.merge_patch(patch);
    RunConfig cfg = base;
    try {
        cfg.seed = j.at("seed").get<std::uint64_t>();
        cfg.threads = j.at("threads").get<int>();
        cfg.out = j.at("out").get<std::string>();
        cfg.n_max = j.at("n_max").get<int>();
        cfg.render_max_iter = j.at("render_max_iter").get<int>();
        const auto& c = j.at("curve");
        cfg.curve.max_exact_period = c.at("max_exact_period").get<int>();
        cfg.curve.caps.z_degree = c.at("z_degree_cap").get<int>();
        cfg.curve.caps.parameter_total_degree = c.at("parameter_degree_cap").get<int>();
        cfg.curve.reference_dir = c.at("reference_dir").get<std::string>();
        const auto& s = j.at("singular");
        cfg.singular.tolerance = s.at("tolerance").get<double>();
        cfg.singular.merge_radius = s.at("merge_radius").get<double>();
        cfg.singular.starts = s.at("starts").get<int>();
        cfg.singular.root_budget = s.at("root_budget").get<int>();
        cfg.singular.elimination_degree_limit = s.at("elimination_degree_limit").get<int>();
        const auto& f = j.at("fatou");
        cfg.fatou.cycle_tolerance = f.at("cycle_tolerance").get<double>();
        cfg.fatou.multiplier_tolerance = f.at("multiplier_tolerance").get<double>();
        cfg.fatou.cusp_tolerance = f.at("cusp_tolerance").get<double>();
        cfg.fatou.petal_radius = f.at("petal_radius").get<double>();
        cfg.fatou.petal_angle = f.at("petal_angle").get<double>();
        cfg.fatou.asymptotic_radius = f.at("asymptotic_radius").get<double>();
        cfg.fatou.series_terms = f.at("series_terms").get<int>();
        cfg.fatou.max_iterations = f.at("max_iterations").get<long>();
        cfg.fatou.escape_radius = f.at("escape_radius").get<double>();
        cfg.fatou.height_tolerance = f.at("height_tolerance").get<double>();
        cfg.fatou.speed_threshold = f.at("speed_threshold").get<double>();
        const auto& h = j.at("hausdorff");
        cfg.hausdorff.parabolic_delta = h.at("parabolic_delta").get<double>();
        cfg.hausdorff.degree_cap = h.at("degree_cap").get<long>();
        cfg.hausdorff.point_tolerance = h.at("point_tolerance").get<double>();
        cfg.hausdorff.stagnation_tolerance = h.at("stagnation_tolerance").get<double>();
        cfg.hausdorff.t_tolerance = h.at("t_tolerance").get<double>();
        cfg.hausdorff.box_points = h.at("box_points").get<long>();
        cfg.hausdorff.burn_in = h.at("burn_in").get<long>();
        cfg.hausdorff.box_min_level = h.at("box_min_level").get<int>();
        cfg.hausdorff.box_max_level = h.at("box_max_level").get<int>();
        cfg.hausdorff.min_r2 = h.at("min_r2").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("bad config value: ") + e.what());
    }
    if (cfg.threads < 1) {
        throw DomainError("threads must be at least 1");
    }
    if (cfg.n_max < 2) {
        throw DomainError("n_max must be at least 2");
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) {
        throw IoError("cannot open config " + path);
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(is);
    } catch (const nlohmann::json::exception& e) {
        throw IoError("cannot parse config " + path + ": " + e.what());
    }
    return config_from_json(j);
}

std::vector<double> parse_range(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) {
        throw DomainError("range must look like lo:hi:count, got '" + text + "'");
    }
    const double lo = parse_double(parts[0], "range start");
    const double hi = parse_double(parts[1], "range end");
    const double count = parse_double(parts[2], "range count");
    if (count < 1 || count != std::floor(count) || count > 1e6) {
        throw DomainError("range count must be a positive integer, got '" + parts[2] + "'");
    }
    const int n = int(count);
    std::vector<double> out;
    for (int i = 0; i < n; ++i) {
        out.push_back(n == 1 ? lo : lo + (hi - lo) * double(i) / double(n - 1));
    }
    return out;
}

Complex parse_complex(const std::string& text) {
    const auto parts = split(text, ',');
    if (parts.size() == 1) {
        return {parse_double(parts[0], "number"), 0.0};
    }
    if (parts.size() == 2) {
        return {parse_double(parts[0], "real part"), parse_double(parts[1], "imaginary part")};
    }
    throw DomainError("complex numbers are written re,im; got '" + text + "'");
}

int exit_code(const std::exception& e) {
    if (dynamic_cast<const DomainError*>(&e)) {
        return 3;
    }
    if (dynamic_cast<const ResourceError*>(&e)) {
        return 4;
    }
    if (dynamic_cast<const NumericError*>(&e)) {
        return 5;
    }
    if (dynamic_cast<const IoError*>(&e)) {
        return 6;
    }
    return 7;
}

CommandResult cmd_curve(const RunConfig& cfg, const std::string& family, int d, int n,
                        const std::string& r) {
    const auto fam = percurve::FamilySpec::from_name(family, d);
    const auto mult = percurve::Multiplier::parse(r);
    const auto curve = percurve::per_curve(fam, n, mult, cfg.curve);
    CommandResult res;
    res.report = percurve::curve_report(curve);
    res.report["config"] = to_json(cfg);
    const auto path = out_dir(cfg) / ("curve_" + fam.tag() + "_n" + std::to_string(n) + "_r" +
                                      sanitize(mult.to_string()) + ".json");
    write_text(path, res.report.dump(2) + "\n");
    res.files.push_back(path.string());
    return res;
}

CommandResult cmd_singular(const RunConfig& cfg, const std::string& family, int d, int n,
                           const std::optional<percurve::Region>& region, int samples) {
    using namespace percurve;
    const auto fam = FamilySpec::from_name(family, d);
    const auto curve = per_curve(fam, n, Multiplier::exact(1), cfg.curve);
    const auto opts = cfg.singular_options();
    std::vector<SingularPoint> points;
    if (fam.kind == FamilyKind::Quartic && n == 1 && !region) {
        // The singular set is not finite; report the triple point and exact
        // samples of the two curve strata.
        points.push_back(classify_exact(curve, {Rational(0), Rational(1), Rational(0)}));
        for (const auto& p : quartic_v1_samples(samples)) {
            points.push_back(classify_exact(curve, p));
        }
        for (const auto& p : quartic_v2_samples(samples)) {
            points.push_back(classify_exact(curve, p));
        }
    } else {
        points = singular_points(curve, region, opts);
    }
    CommandResult res;
    res.report = {{"family", fam.name()},
                  {"d", fam.d},
                  {"n", n},
                  {"singular_points", singular_report(points)},
                  {"config", to_json(cfg)}};
    if (region) {
        nlohmann::json center = nlohmann::json::array();
        for (Complex c : region->center) {
            center.push_back({c.real(), c.imag()});
        }
        res.report["region"] = {{"center", center}, {"radius", region->radius}};
    }
    for (const auto& p : points) {
        if (p.residual_h > opts.tolerance || p.residual_grad > opts.tolerance) {
            res.within_tolerance = false;
        }
    }
    const auto path = out_dir(cfg) / ("singular_" + fam.tag() + "_n" + std::to_string(n) + ".json");
    write_text(path, res.report.dump(2) + "\n");
    res.files.push_back(path.string());
    return res;
}

CommandResult cmd_arc(const RunConfig& cfg, int k, int arc, int d, const std::vector<double>& heights) {
    auto samples = fatou::arc_trace(k, heights, arc, d, cfg.fatou);
    CommandResult res;
    nlohmann::json flagged = nlohmann::json::array();
    if (samples.size() >= 3) {
        const auto rep = fatou::arc_derivative_check(samples, cfg.fatou.speed_threshold);
        for (std::size_t i = 0; i < rep.speeds.size(); ++i) {
            samples[i + 1].speed = rep.speeds[i];
        }
        for (auto i : rep.flagged) {
            flagged.push_back(i);
        }
        res.within_tolerance = rep.flagged.empty();
    }
    std::string csv = config_line(cfg) + fatou::arc_csv_header() + "\n";
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& s : samples) {
        csv += fatou::arc_csv_row(s) + "\n";
        rows.push_back(fatou::to_json(s));
        if (!(s.curve_residual <= 1e-8)) {
            res.within_tolerance = false;
        }
    }
    res.report = {{"k", k}, {"arc", arc}, {"d", d}, {"samples", rows}, {"flagged", flagged},
                  {"config", to_json(cfg)}};
    const auto dir = out_dir(cfg);
    write_text(dir / "arc.csv", csv);
    write_text(dir / "arc.json", res.report.dump(2) + "\n");
    res.files = {(dir / "arc.csv").string(), (dir / "arc.json").string()};
    return res;
}

std::vector<hausdorff::ProfileInput> read_arc_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) {
        throw IoError("cannot open arc file " + path);
    }
    std::string line;
    while (std::getline(is, line) && (line.empty() || line[0] == '#')) {
    }
    const auto header = split(line, ',');
    auto column = [&](std::initializer_list<const char*> names) -> std::size_t {
        for (const char* name : names) {
            auto it = std::find(header.begin(), header.end(), name);
            if (it != header.end()) {
                return std::size_t(it - header.begin());
            }
        }
        throw IoError("arc file " + path + " lacks a column " + *names.begin());
    };
    const std::size_t hc = column({"h_target", "h"});
    const std::size_t rc = column({"c_re"});
    const std::size_t ic = column({"c_im"});
    std::vector<hausdorff::ProfileInput> out;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        const auto cells = split(line, ',');
        if (cells.size() <= std::max({hc, rc, ic})) {
            throw IoError("short row in " + path + ": " + line);
        }
        try {
            out.push_back({parse_double(cells[hc], "height"),
                           {parse_double(cells[rc], "c_re"), parse_double(cells[ic], "c_im")}});
        } catch (const DomainError& e) {
            throw IoError("malformed row in " + path + ": " + e.what());
        }
    }
    if (out.empty()) {
        throw IoError("arc file " + path + " has no samples");
    }
    return out;
}

CommandResult cmd_hd(const RunConfig& cfg, const std::string& arc_csv, int d) {
    const auto inputs = read_arc_csv(arc_csv);
    const auto profile = hausdorff::arc_hd_profile(inputs, d, cfg.hausdorff_config());
    std::string csv = config_line(cfg) + hausdorff::profile_csv_header() + "\n";
    for (const auto& s : profile.samples) {
        csv += hausdorff::profile_csv_row(profile, s) + "\n";
    }
    CommandResult res;
    res.report = hausdorff::to_json(profile);
    res.report["config"] = to_json(cfg);
    res.within_tolerance = !profile.has_gaps;
    const auto dir = out_dir(cfg);
    write_text(dir / "hd_profile.csv", csv);
    write_text(dir / "hd_profile.json", res.report.dump(2) + "\n");
    res.files = {(dir / "hd_profile.csv").string(), (dir / "hd_profile.json").string()};
    return res;
}

CommandResult cmd_render(const RunConfig& cfg, render::ImageSpec spec,
                         const std::vector<std::string>& overlays, bool cusps, const std::string& file) {
    spec.threads = cfg.threads;
    for (const auto& path : overlays) {
        spec.overlays.push_back(render::load_overlay(path));
    }
    if (cusps) {
        spec.overlays.push_back(render::tricorn_cusps());
    }
    const auto img = render::render(spec);
    nlohmann::json view = {{"mode", render::to_string(spec.mode)},
                           {"d", spec.d},
                           {"center", {spec.center.real(), spec.center.imag()}},
                           {"width", spec.width},
                           {"pixels", {spec.pixels_w, spec.pixels_h}},
                           {"max_iter", spec.max_iter},
                           {"escape_radius", spec.escape_radius}};
    if (spec.mode == render::Mode::Julia) {
        view["julia_c"] = {spec.julia_c.real(), spec.julia_c.imag()};
        view["antiholomorphic"] = spec.julia_antiholomorphic;
    }
    if (spec.mode == render::Mode::BiquadraticSlice) {
        view["slice_fixed"] = std::string(1, spec.slice_fixed);
        view["slice_value"] = {spec.slice_value.real(), spec.slice_value.imag()};
    }
    nlohmann::json layers = nlohmann::json::array();
    for (const auto& ov : spec.overlays) {
        layers.push_back({{"name", ov.name}, {"points", ov.points.size()}, {"polyline", ov.polyline}});
    }
    view["overlays"] = layers;
    const nlohmann::json meta = {{"view", view}, {"config", to_json(cfg)}};
    const auto path = out_dir(cfg) / file;
    render::write_ppm(img, path.string(), meta.dump());
    CommandResult res;
    res.report = meta;
    res.files.push_back(path.string());
    return res;
}

} // namespace pararc::cli
