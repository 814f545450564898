#include "jet.hpp"

#include "pararc/errors.hpp"
#include "pararc/fatou/fatou.hpp"

#include <cmath>

namespace pararc::fatou {

FatouCoordinate::FatouCoordinate(ParabolicCycle cycle, const FatouConfig& cfg)
    : cycle_(std::move(cycle)), cfg_(cfg) {
    if (cycle_.q != 1) {
        throw CuspError("Fatou coordinates are built for simple parabolic points only");
    }
    const std::size_t K = std::size_t(std::max(cfg_.series_terms, 0));
    const std::size_t N = K + 2;
    detail::Series g = detail::local_series(cycle_.param, cycle_.k, cycle_.points[0], N + 1);
    g[0] = 0.0;
    g[1] = 1.0;
    const Complex alpha = g[2];
    const Complex beta = g[3];
    log_coeff_ = 1.0 - beta / (alpha * alpha);

    // Phi(w) = -1/(alpha w) + A log(-alpha w) + sum_k a_k w^k solves
    // Phi(g(w)) = Phi(w) + 1 order by order.
    detail::Series S(N + 1, 0.0);
    for (std::size_t i = 0; i <= N; ++i) {
        S[i] = g[i + 1];
    }
    detail::Series inv = detail::series_inverse(S, N + 1);
    detail::Series lg = detail::series_log(S, N);
    detail::Series E(N + 1, 0.0);
    for (std::size_t j = 0; j <= N; ++j) {
        E[j] = -inv[j + 1] / alpha + log_coeff_ * lg[j];
    }
    E[0] -= 1.0;
    std::vector<detail::Series> powers(K + 1);
    for (std::size_t k = 1; k <= K; ++k) {
        powers[k] = detail::series_pow(g, int(k), N);
    }
    series_.assign(K + 1, 0.0);
    for (std::size_t j = 2; j <= K + 1; ++j) {
        Complex rhs = E[j];
        for (std::size_t k = 1; k + 2 <= j; ++k) {
            rhs += series_[k] * powers[k][j];
        }
        series_[j - 1] = -rhs / (double(j - 1) * alpha);
    }
}

double FatouCoordinate::petal_scale() const {
    const double a2 = std::norm(cycle_.alpha);
    const double b = std::abs(cycle_.beta);
    return b > a2 ? a2 / b : 1.0;
}

Complex FatouCoordinate::asymptotic(Complex w) const {
    const Complex alpha = cycle_.alpha;
    Complex value = -1.0 / (alpha * w) + log_coeff_ * std::log(-alpha * w);
    Complex wk = 1.0;
    for (std::size_t k = 1; k < series_.size(); ++k) {
        wk *= w;
        value += series_[k] * wk;
    }
    return value + constant_;
}

Complex FatouCoordinate::operator()(Complex z) const {
    const Complex z0 = cycle_.points[0];
    const Complex alpha = cycle_.alpha;
    const double k = double(cycle_.k);
    const long cap = cfg_.max_iterations * cycle_.k;
    const double radius = cfg_.asymptotic_radius * petal_scale();
    Complex x = z;
    for (long s = 0; s <= cap; ++s) {
        const Complex w = x - z0;
        const Complex u = -alpha * w;
        if (std::abs(u) < radius) {
            if (w == 0.0) {
                throw PetalError("orbit lands exactly on the parabolic point");
            }
            if (std::abs(std::arg(u)) < cfg_.petal_angle) {
                return asymptotic(w) - double(s) / k;
            }
        }
        x = cycle_.param.P(x);
        if (!std::isfinite(x.real()) || !std::isfinite(x.imag()) ||
            std::abs(x) > cfg_.escape_radius) {
            throw PetalError("orbit escapes before reaching the attracting petal");
        }
    }
    throw ResourceError("orbit did not settle in the petal within " +
                        std::to_string(cfg_.max_iterations) + " iterations");
}

FatouCoordinate FatouCoordinate::shifted(Complex delta) const {
    FatouCoordinate out = *this;
    out.constant_ += delta;
    return out;
}

FatouCoordinate FatouCoordinate::rebased(Complex z, Complex value) const {
    return shifted(value - (*this)(z));
}

std::vector<Complex> FatouCoordinate::probe_points(int count) const {
    std::vector<Complex> out;
    const Complex dir = -1.0 / cycle_.alpha;
    const double scale = petal_scale();
    for (int i = 0; i < count; ++i) {
        const double t = (0.02 + 0.02 * double(i % 3)) * scale;
        const double phi = -0.3 + 0.3 * double((i / 3) % 3);
        out.push_back(cycle_.points[0] + dir * std::polar(t, phi));
    }
    return out;
}

FatouCoordinate::Symmetry FatouCoordinate::antiholomorphic_symmetry() const {
    if (!cycle_.param.c) {
        throw DomainError("antiholomorphic symmetry needs a multicorn parameter");
    }
    const auto probes = probe_points(9);
    std::vector<Complex> defects;
    for (Complex p : probes) {
        Complex y = p;
        for (int i = 0; i < cycle_.k; ++i) {
            y = cycle_.param.f(y);
        }
        defects.push_back((*this)(y) - std::conj((*this)(p)) - 0.5);
    }
    Symmetry s;
    for (Complex d : defects) {
        s.mu += d.imag() / double(defects.size());
        s.real_defect = std::max(s.real_defect, std::abs(d.real()));
    }
    for (Complex d : defects) {
        s.spread = std::max(s.spread, std::abs(d.imag() - s.mu));
    }
    return s;
}

FatouCoordinate fatou_coordinate(const ParabolicCycle& cycle, const FatouConfig& cfg) {
    FatouCoordinate phi(cycle, cfg);
    if (!cycle.param.c) {
        return phi;
    }
    const auto sym = phi.antiholomorphic_symmetry();
    return phi.shifted(Complex(0.0, -sym.mu / 2.0));
}

double critical_ecalle_height(Complex c, int k, int d, const FatouConfig& cfg) {
    if (k % 2 == 0) {
        throw DomainError("critical Ecalle heights are defined for odd periods");
    }
    auto cycle = find_parabolic_cycle(MapParameter::multicorn(d, c), k, cfg);
    if (cycle.q != 1) {
        throw CuspError("parameter is a parabolic cusp");
    }
    return fatou_coordinate(cycle, cfg)(c).imag();
}

Complex fatou_vector(const FatouCoordinate& phi) {
    const auto& cyc = phi.cycle();
    if (cyc.k % 2 == 0) {
        throw DomainError("Fatou vectors are defined for odd periods");
    }
    Complex x = std::pow(cyc.param.a, cyc.param.d) + cyc.param.b;
    for (int i = 0; i < (cyc.k - 1) / 2; ++i) {
        x = cyc.param.P(x);
    }
    return phi(x) - phi(cyc.param.b);
}

Complex fatou_vector(Complex a, Complex b, int k, int d, const FatouConfig& cfg) {
    auto cycle = find_parabolic_cycle(MapParameter::biquadratic(d, a, b), k, cfg);
    if (cycle.q != 1) {
        throw CuspError("parameter is a parabolic cusp");
    }
    return fatou_vector(FatouCoordinate(cycle, cfg));
}

} // namespace pararc::fatou
