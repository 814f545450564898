#pragma once

#include "pararc/polyalg/rational.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pararc::fatou {
struct ArcSample;
}

namespace pararc::hausdorff {

struct HausdorffConfig {
    // Points with ||multiplier| - 1| <= delta are excluded as parabolic.
    double parabolic_delta = 1e-6;
    // Largest admissible number of fixed points of the iterate.
    long degree_cap = 1L << 14;
    // Target residual |F^n(z) - z| per periodic point after refinement.
    double point_tolerance = 1e-9;
    // Refinement gives up above this residual.
    double stagnation_tolerance = 1e-8;
    // Bisection tolerance for the pressure zero on [0, 2].
    double t_tolerance = 1e-4;
    // Periods (in steps of the map) used for the Bowen estimate.
    std::vector<int> ladder{6, 8, 10, 12};
    // Box counting: point cloud size, discarded prefix, dyadic levels.
    long box_points = 1000000;
    long burn_in = 1000;
    int box_min_level = 4;
    int box_max_level = 10;
    double min_r2 = 0.99;
    std::uint64_t seed = 20240611;
};

// Polynomial dynamics given as a cycle of unicritical stages
// z -> z^d + stages[0], then z^d + stages[1], and so on. One pass through
// all stages accounts for steps_per_pass steps of the underlying map. For
// the antiholomorphic map conj(z)^d + c the pass is its holomorphic second
// iterate with stages {conj c, c}.
class PolyMap {
  public:
    static PolyMap unicritical(int d, Complex c);
    static PolyMap multicorn(int d, Complex c);
    static PolyMap composition(int d, std::vector<Complex> stages);

    int d() const { return d_; }
    const std::vector<Complex>& stages() const { return stages_; }
    int steps_per_pass() const { return steps_per_pass_; }
    bool antiholomorphic() const { return antiholomorphic_; }
    std::optional<Complex> parameter() const { return c_; }
    // Degree of one step of the underlying map.
    long step_degree() const;
    long pass_degree() const;

    Complex pass(Complex z) const;
    // One step of the underlying map (conjugating for the multicorn).
    Complex step(Complex z) const;
    // Preimage of y under one pass along the branch digits[i] in [0, d).
    Complex inverse_pass(Complex y, const int* digits) const;

    std::string describe() const;

  private:
    int d_ = 2;
    std::vector<Complex> stages_;
    int steps_per_pass_ = 1;
    bool antiholomorphic_ = false;
    std::optional<Complex> c_;
};

struct PeriodicPoint {
    Complex z{0.0, 0.0};
    // Derivative of the n-th iterate at z (modulus is what matters for the
    // antiholomorphic map).
    Complex multiplier{0.0, 0.0};
    double residual = 0.0;
    // Exact period in steps of the map.
    int period = 0;
    int multiplicity = 1;
    bool repelling = false;
    bool parabolic_excluded = false;
    bool lower_period = false;
};

struct PeriodicOrbitSet {
    PolyMap map;
    // Period in steps of the map.
    int n = 0;
    // Sorted by modulus, then argument.
    std::vector<PeriodicPoint> points;
    // Number of fixed points of the iterate counted with multiplicity.
    long expected_count = 0;
    long counted = 0;
    long excluded = 0;
    double max_residual = 0.0;
};

// Fixed points of the n-step iterate. n must be a multiple of the steps
// per pass. Throws ResourceError above the degree cap and NumericError when
// refinement stagnates.
PeriodicOrbitSet periodic_points(const PolyMap& map, int n, const HausdorffConfig& cfg = {});

// P_n(t) = (1/n) log sum over repelling points of |multiplier|^(-t).
// Throws DegenerateError when no repelling point remains.
double pressure(const PeriodicOrbitSet& set, double t);
double pressure(const PolyMap& map, double t, int n, const HausdorffConfig& cfg = {});

struct PressureCurve {
    std::vector<double> t_grid;
    std::vector<int> periods;
    // values[i][j] = P_{periods[i]}(t_grid[j]).
    std::vector<std::vector<double>> values;
    // Extrapolated in 1/n from the last two periods.
    std::vector<double> extrapolated;
    std::optional<double> zero;
};
PressureCurve pressure_curve(const PolyMap& map, const std::vector<int>& periods,
                             const std::vector<double>& t_grid, const HausdorffConfig& cfg = {});

struct BowenEstimate {
    double dimension = 0.0;
    // Spread of the ladder roots together with the extrapolated value.
    double error = 0.0;
    std::vector<int> periods;
    std::vector<double> roots;
    // P_n(0) extrapolated in 1/n.
    double entropy = 0.0;
};
// Zero of t -> P_n(t) on [0, 2] for each period of the ladder, extrapolated
// linearly in 1/n from the two longest periods. Throws BracketError when
// P_n has no sign change on [0, 2].
BowenEstimate hd_bowen(const PolyMap& map, const HausdorffConfig& cfg = {});
// Ladder of the four periods ending at n_max in steps of two passes.
std::vector<int> bowen_ladder(const PolyMap& map, int n_max);

struct BoxEstimate {
    double dimension = 0.0;
    double r2 = 0.0;
    bool low_confidence = false;
    std::vector<int> levels;
    std::vector<long> counts;
    long points = 0;
};
// Box-counting dimension of the inverse-iteration cloud on dyadic grids of
// levels box_min_level..depth over the bounding square.
BoxEstimate hd_box(const PolyMap& map, int depth, const HausdorffConfig& cfg = {});
BoxEstimate hd_box(const PolyMap& map, const HausdorffConfig& cfg = {});

struct ProfileInput {
    double h = 0.0;
    Complex c{0.0, 0.0};
};

struct HDSample {
    double h = 0.0;
    Complex c{0.0, 0.0};
    std::optional<double> hd_pressure;
    double hd_err = 0.0;
    std::optional<double> hd_box;
    double box_r2 = 0.0;
    // Residual of the highest-degree fit at this sample.
    std::optional<double> fit_residual;
    std::string error;
};

struct HDProfile {
    std::vector<HDSample> samples;
    // Max absolute residual of least-squares fits of degree 2, 3, 4 in h.
    std::vector<double> fit_residuals;
    // Largest change of hd_pressure between consecutive samples.
    double jump_stat = 0.0;
    // Largest |hd(h) - hd(-h)| and the combined error bar at that pair, if
    // mirrored heights are present.
    std::optional<double> symmetry_defect;
    std::optional<double> symmetry_bound;
    double min_error = 0.0;
    bool has_gaps = false;
};

// hd_bowen and hd_box per sample for the multicorn of degree d.
HDProfile arc_hd_profile(const std::vector<ProfileInput>& samples, int d = 2,
                         const HausdorffConfig& cfg = {});
HDProfile arc_hd_profile(const std::vector<fatou::ArcSample>& samples, int d = 2,
                         const HausdorffConfig& cfg = {});

std::string profile_csv_header();
std::string profile_csv_row(const HDProfile& profile, const HDSample& sample);
nlohmann::json to_json(const HDProfile& profile);
nlohmann::json to_json(const BowenEstimate& est);
nlohmann::json to_json(const BoxEstimate& est);

} // namespace pararc::hausdorff
