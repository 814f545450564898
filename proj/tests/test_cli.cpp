#include "pararc/cli/cli.hpp"
#include "pararc/errors.hpp"
#include "test_support.hpp"

#include <filesystem>
#include <fstream>
#include <iterator>

using namespace pararc;
using namespace pararc::cli;

namespace {

namespace fs = std::filesystem;

RunConfig scratch_config(const std::string& name) {
    RunConfig cfg;
    cfg.out = (fs::temp_directory_path() / ("pararc_cli_" + name)).string();
    fs::remove_all(cfg.out);
    return cfg;
}

std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

} // namespace

TEST_CASE("range and complex parsing") {
    const auto r = parse_range("-1:1:21");
    REQUIRE(r.size() == 21);
    CHECK(r.front() == -1.0);
    CHECK(r.back() == 1.0);
    CHECK(r[10] == doctest::Approx(0.0));
    CHECK(parse_range("0.5:2:1") == std::vector<double>{0.5});
    CHECK_THROWS_AS(parse_range("0:1"), DomainError);
    CHECK_THROWS_AS(parse_range("0:1:0"), DomainError);
    CHECK_THROWS_AS(parse_range("0:1:2.5"), DomainError);
    CHECK_THROWS_AS(parse_range("a:1:3"), DomainError);
    CHECK(parse_complex("0.25") == Complex(0.25, 0.0));
    CHECK(parse_complex("-0.75,0.5") == Complex(-0.75, 0.5));
    CHECK_THROWS_AS(parse_complex("1,2,3"), DomainError);
    CHECK_THROWS_AS(parse_complex("1x"), DomainError);
}

TEST_CASE("run config round trips through JSON and rejects unknown keys") {
    RunConfig cfg;
    cfg.seed = 7;
    cfg.threads = 3;
    cfg.fatou.series_terms = 5;
    cfg.hausdorff.box_points = 5000;
    const auto j = to_json(cfg);
    const auto back = config_from_json(j);
    CHECK(to_json(back) == j);

    const auto patched = config_from_json(nlohmann::json{{"hausdorff", {{"t_tolerance", 1e-3}}}});
    CHECK(patched.hausdorff.t_tolerance == 1e-3);
    CHECK(patched.hausdorff.box_points == RunConfig{}.hausdorff.box_points);

    CHECK_THROWS_AS(config_from_json(nlohmann::json{{"sede", 1}}), DomainError);
    CHECK_THROWS_AS(config_from_json(nlohmann::json{{"fatou", {{"petals", 2}}}}), DomainError);
    CHECK_THROWS_AS(config_from_json(nlohmann::json{{"threads", 0}}), DomainError);
    CHECK_THROWS_AS(config_from_json(nlohmann::json{{"seed", "x"}}), DomainError);
    CHECK_THROWS_AS(load_config("/nonexistent-dir/cfg.json"), IoError);
}

TEST_CASE("seed and period cap reach the estimators") {
    RunConfig cfg;
    cfg.seed = 99;
    cfg.n_max = 10;
    const auto h = cfg.hausdorff_config();
    CHECK(h.seed == 99);
    CHECK(h.ladder == std::vector<int>{4, 6, 8, 10});
    CHECK(cfg.singular_options().seed == 99);
}

TEST_CASE("exit codes follow the error class") {
    CHECK(exit_code(DomainError("x")) == 3);
    CHECK(exit_code(NonIsolatedSingularityError("x")) == 3);
    CHECK(exit_code(ResourceError("x")) == 4);
    CHECK(exit_code(NumericError("x")) == 5);
    CHECK(exit_code(CuspError("x")) == 5);
    CHECK(exit_code(BracketError("x")) == 5);
    CHECK(exit_code(IoError("x")) == 6);
    CHECK(exit_code(std::runtime_error("x")) == 7);
}

TEST_CASE("curve command reports the reference scalar") {
    const auto cfg = scratch_config("curve");
    auto res = cmd_curve(cfg, "biquadratic", 2, 1, "1");
    CHECK(!res.report.at("scalar_vs_paper").is_null());
    REQUIRE(res.files.size() == 1);
    const auto j = nlohmann::json::parse(slurp(res.files[0]));
    CHECK(j.at("config") == to_json(cfg));
    CHECK(j.at("family") == "biquadratic");

    res = cmd_curve(cfg, "cubic", 2, 1, "1");
    const auto cubic = polyalg::poly_from_json(res.report.at("poly"));
    const auto expected = polyalg::ExactPoly::parse("4 + 36*a + 108*a^2 + 108*a^3 - 27*b^2", {"a", "b"});
    CHECK(polyalg::proportionality_scalar(cubic.compacted().with_vars({"a", "b"}), expected).has_value());

    // An exact multiplier specializes the symbolic curve.
    res = cmd_curve(cfg, "biquadratic", 2, 1, "1/2");
    const auto half = polyalg::poly_from_json(res.report.at("poly"));
    const auto hr = testsupport::load_reference("biquadratic2_per1_r.json");
    const auto hr_half = hr.substitute("r", Rational(1, 2)).compacted();
    CHECK(polyalg::proportionality_scalar(half.compacted().with_vars(hr_half.vars()), hr_half).has_value());

    CHECK_THROWS_AS(cmd_curve(cfg, "sextic", 2, 1, "1"), DomainError);
    CHECK_THROWS_AS(cmd_curve(cfg, "biquadratic", 2, 3, "1"), ResourceError);
    fs::remove_all(cfg.out);
}

TEST_CASE("singular command") {
    const auto cfg = scratch_config("singular");
    auto res = cmd_singular(cfg, "cubic", 2, 1, std::nullopt);
    CHECK(res.within_tolerance);
    REQUIRE(res.report.at("singular_points").size() == 1);
    CHECK(res.report.at("singular_points")[0].at("exact_location") == nlohmann::json({"-1/3", "0"}));

    res = cmd_singular(cfg, "quartic", 2, 1, std::nullopt, 2);
    const auto& pts = res.report.at("singular_points");
    REQUIRE(pts.size() == 5);
    CHECK(pts[0].at("label") == "triple-point");
    CHECK(pts[1].at("label") == "node");
    CHECK(pts[3].at("label") == "double-point-single-tangent");

    // The report doubles as a render overlay.
    const auto ov = render::load_overlay(res.files.at(0));
    CHECK(ov.points.size() == 5);
    fs::remove_all(cfg.out);
}

TEST_CASE("arc, hd and render commands chain through their files") {
    auto cfg = scratch_config("chain");
    cfg.hausdorff.box_points = 20000;
    cfg.n_max = 8;
    const auto arc = cmd_arc(cfg, 1, 0, 2, parse_range("-0.5:0.5:3"));
    CHECK(arc.within_tolerance);
    REQUIRE(arc.files.size() == 2);
    const std::string csv = slurp(arc.files[0]);
    CHECK(csv.rfind("# config {", 0) == 0);
    int rows = 0;
    for (char ch : csv) {
        rows += ch == '\n';
    }
    CHECK(rows == 5);
    for (const auto& s : arc.report.at("samples")) {
        CHECK(s.at("curve_residual").get<double>() <= 1e-8);
    }

    const auto inputs = read_arc_csv(arc.files[0]);
    REQUIRE(inputs.size() == 3);
    CHECK(std::abs(inputs[1].c - Complex(0.25, 0.0)) < 1e-8);

    const auto hd = cmd_hd(cfg, arc.files[0], 2);
    CHECK(hd.report.at("samples").size() == 3);
    CHECK(hd.report.contains("jump_stat"));
    const std::string profile = slurp(hd.files.at(0));
    CHECK(profile.find(hausdorff::profile_csv_header()) != std::string::npos);

    render::ImageSpec spec;
    spec.pixels_w = 64;
    spec.pixels_h = 48;
    const auto img = cmd_render(cfg, spec, {arc.files[0]}, true, "t.ppm");
    const std::string ppm = slurp(img.files.at(0));
    CHECK(ppm.rfind("P6\n# {", 0) == 0);
    CHECK(ppm.find("\n64 48\n255\n") != std::string::npos);
    CHECK(img.report.at("view").at("overlays").size() == 2);

    CHECK_THROWS_AS(cmd_hd(cfg, cfg.out + "/missing.csv", 2), IoError);
    {
        std::ofstream os(cfg.out + "/bad.csv");
        os << "h,x\n0,1\n";
    }
    CHECK_THROWS_AS(read_arc_csv(cfg.out + "/bad.csv"), IoError);
    fs::remove_all(cfg.out);
}
