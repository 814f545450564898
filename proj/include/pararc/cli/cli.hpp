#pragma once

#include "pararc/fatou/fatou.hpp"
#include "pararc/hausdorff/hausdorff.hpp"
#include "pararc/percurve/singular.hpp"
#include "pararc/render/render.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace pararc::cli {

// Everything a command needs to be reproduced. The seed overrides the
// seeds of the stochastic estimators and threads caps every worker pool.
struct RunConfig {
    std::uint64_t seed = 20240611;
    int threads = 1;
    std::string out = "out";
    percurve::CurveOptions curve;
    percurve::SingularOptions singular;
    fatou::FatouConfig fatou;
    hausdorff::HausdorffConfig hausdorff;
    // Longest period of the Bowen ladder, in steps of the map.
    int n_max = 12;
    int render_max_iter = 500;

    percurve::SingularOptions singular_options() const;
    hausdorff::HausdorffConfig hausdorff_config() const;
};

nlohmann::json to_json(const RunConfig& cfg);
// Fields present in j override those of base; unknown keys are rejected.
RunConfig config_from_json(const nlohmann::json& j, RunConfig base = {});
RunConfig load_config(const std::string& path);

// "lo:hi:count" with count >= 1, endpoints included.
std::vector<double> parse_range(const std::string& text);
// "re,im" or a real number.
Complex parse_complex(const std::string& text);

// Exit codes: 0 success, 1 a tolerance was missed, 2 usage, 3 domain,
// 4 resource, 5 numeric, 6 io, 7 anything else.
int exit_code(const std::exception& e);

struct CommandResult {
    nlohmann::json report;
    std::vector<std::string> files;
    bool within_tolerance = true;
};

CommandResult cmd_curve(const RunConfig& cfg, const std::string& family, int d, int n,
                        const std::string& r);
CommandResult cmd_singular(const RunConfig& cfg, const std::string& family, int d, int n,
                           const std::optional<percurve::Region>& region, int samples = 3);
CommandResult cmd_arc(const RunConfig& cfg, int k, int arc, int d, const std::vector<double>& heights);
CommandResult cmd_hd(const RunConfig& cfg, const std::string& arc_csv, int d);
CommandResult cmd_render(const RunConfig& cfg, render::ImageSpec spec,
                         const std::vector<std::string>& overlays, bool cusps,
                         const std::string& file = "render.ppm");

// Profile inputs from an arc CSV (h_target or h, c_re, c_im columns).
std::vector<hausdorff::ProfileInput> read_arc_csv(const std::string& path);

struct Criterion {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

// Acceptance suite: evaluates criteria 1 to 10 and writes every artifact
// (curves, singular points, arc, pressure, profile, image, summary) into
// dir. Artifacts carry no timing, so equal configs give equal bytes.
std::vector<Criterion> run_selftest(const RunConfig& cfg, const std::string& dir,
                                    std::ostream* progress = nullptr);

} // namespace pararc::cli
