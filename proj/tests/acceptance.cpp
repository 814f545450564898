// One pass/fail line per acceptance criterion.
// Usage: acceptance <path to pararc executable> <scratch directory>

#include "pararc/cli/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

namespace fs = std::filesystem;

namespace {

std::string read_bytes(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

// Empty when both trees hold the same files with the same bytes.
std::string compare_trees(const fs::path& a, const fs::path& b, int& files) {
    std::ostringstream diff;
    files = 0;
    for (const auto& e : fs::directory_iterator(a)) {
        const fs::path other = b / e.path().filename();
        ++files;
        if (!fs::exists(other)) {
            diff << e.path().filename().string() << " missing in the second run; ";
        } else if (read_bytes(e.path()) != read_bytes(other)) {
            diff << e.path().filename().string() << " differs; ";
        }
    }
    for (const auto& e : fs::directory_iterator(b)) {
        if (!fs::exists(a / e.path().filename())) {
            diff << e.path().filename().string() << " missing in the first run; ";
        }
    }
    return diff.str();
}

void line(int id, bool pass, const std::string& title, double seconds, const std::string& detail) {
    std::printf("criterion %2d: %s  %-28s %8.2f s  %s\n", id, pass ? "PASS" : "FAIL", title.c_str(), seconds,
                detail.c_str());
}

} // namespace

int main(int argc, char** argv) {
    if (argc != 3) {
        std::cerr << "usage: acceptance <pararc executable> <scratch directory>\n";
        return 2;
    }
    const std::string exe = argv[1];
    const fs::path scratch = argv[2];
    const fs::path out = scratch / "selftest";
    const fs::path first = scratch / "selftest.first";
    fs::remove_all(out);
    fs::remove_all(first);
    fs::create_directories(scratch);

    // First run through the command line, second in process, same RunConfig.
    const std::string cmd = "\"" + exe + "\" --out \"" + out.string() + "\" selftest > \"" +
                            (scratch / "selftest_cli.log").string() + "\" 2>&1";
    const int cli_status = std::system(cmd.c_str());
    std::error_code ec;
    fs::rename(out, first, ec);

    pararc::cli::RunConfig cfg;
    cfg.out = out.string();
    const auto results = pararc::cli::run_selftest(cfg, cfg.out);

    bool all = true;
    for (const auto& c : results) {
        line(c.id, c.pass, c.title, c.seconds, c.detail);
        all = all && c.pass;
    }

    int files = 0;
    std::string detail;
    bool same = false;
    if (ec || !fs::exists(first)) {
        detail = "command line selftest produced no output (status " + std::to_string(cli_status) + ")";
    } else {
        detail = compare_trees(first, out, files);
        same = detail.empty() && files > 0;
        if (same) {
            detail = std::to_string(files) + " CSV/JSON/PPM files byte-identical across two runs";
        }
    }
    line(11, same, "determinism", 0.0, detail);
    all = all && same;
    return all ? 0 : 1;
}
