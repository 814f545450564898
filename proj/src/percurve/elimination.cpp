#include "elimination.hpp"

#include "pararc/errors.hpp"
#include "pararc/numeric/roots.hpp"
#include "pararc/polyalg/algebra.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace pararc::percurve::detail {

namespace upoly = polyalg::upoly;
using polyalg::UPoly;

namespace {

// Best rational approximation with denominator at most max_den.
std::optional<Rational> approximate_rational(double x, long max_den) {
    if (!std::isfinite(x)) {
        return std::nullopt;
    }
    long h0 = 1, h1 = 0, k0 = 0, k1 = 1;
    double r = x;
    for (int i = 0; i < 40; ++i) {
        double a = std::floor(r);
        if (std::abs(a) > 1e12) {
            break;
        }
        long ai = long(a);
        long h2 = ai * h0 + h1;
        long k2 = ai * k0 + k1;
        if (k2 > max_den) {
            break;
        }
        h1 = h0;
        k1 = k0;
        h0 = h2;
        k0 = k2;
        double frac = r - a;
        if (std::abs(frac) < 1e-12) {
            break;
        }
        r = 1.0 / frac;
    }
    if (k0 == 0) {
        return std::nullopt;
    }
    Rational q(h0, k0);
    q.canonicalize();
    return q;
}

// Coefficients (ascending in y) of p(x0, y) evaluated numerically.
std::vector<Complex> fiber_coefficients(const ExactPoly& p, const std::string& x,
                                        const std::string& y, Complex x0) {
    std::vector<Complex> out;
    for (const auto& c : p.coefficients_in(y)) {
        out.push_back(c.eval(std::map<std::string, Complex>{{x, x0}}));
    }
    double big = 0.0;
    for (auto c : out) {
        big = std::max(big, std::abs(c));
    }
    while (!out.empty() && std::abs(out.back()) <= 1e-13 * big) {
        out.pop_back();
    }
    return out;
}

void merge_into(std::vector<Solution>& sols, Solution s, double radius) {
    for (auto& t : sols) {
        double d = 0.0;
        for (std::size_t i = 0; i < s.location.size(); ++i) {
            d = std::max(d, std::abs(t.location[i] - s.location[i]));
        }
        if (d < radius) {
            if (!t.exact && s.exact) {
                t = std::move(s);
            }
            return;
        }
    }
    sols.push_back(std::move(s));
}

} // namespace

bool lex_less(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
        if (numeric::complex_less(a[i], b[i])) {
            return true;
        }
        if (numeric::complex_less(b[i], a[i])) {
            return false;
        }
    }
    return a.size() < b.size();
}

double max_relative_residual(const std::vector<CompiledPoly>& f, const std::vector<Complex>& x) {
    double worst = 0.0;
    for (const auto& p : f) {
        double s = std::max(p.scale(x), 1e-300);
        worst = std::max(worst, std::abs(p.eval(x)) / s);
    }
    return worst;
}

double gauss_newton(const std::vector<CompiledPoly>& f,
                    const std::vector<std::vector<CompiledPoly>>& jac, std::vector<Complex>& x,
                    int max_iter) {
    const auto m = Eigen::Index(f.size());
    const auto n = Eigen::Index(x.size());
    Eigen::VectorXcd F(m);
    Eigen::MatrixXcd J(m, n);
    for (int it = 0; it < max_iter; ++it) {
        for (Eigen::Index k = 0; k < m; ++k) {
            const auto ku = std::size_t(k);
            double s = std::max(f[ku].scale(x), 1e-300);
            F(k) = f[ku].eval(x) / s;
            for (Eigen::Index j = 0; j < n; ++j) {
                J(k, j) = jac[ku][std::size_t(j)].eval(x) / s;
            }
        }
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(J.rows(), J.cols());
        cod.setThreshold(1e-10);
        cod.compute(J);
        Eigen::VectorXcd dx = cod.solve(-F);
        double norm_x = 0.0;
        for (const auto& v : x) {
            norm_x = std::max(norm_x, std::abs(v));
        }
        bool finite = true;
        for (Eigen::Index j = 0; j < n; ++j) {
            finite = finite && std::isfinite(dx(j).real()) && std::isfinite(dx(j).imag());
        }
        if (!finite) {
            break;
        }
        // Damp steps that leave the natural scale of the point.
        double step = dx.cwiseAbs().maxCoeff();
        double limit = 0.5 * (1.0 + norm_x);
        if (step > limit) {
            dx *= limit / step;
        }
        for (Eigen::Index j = 0; j < n; ++j) {
            x[std::size_t(j)] += dx(j);
        }
        if (step <= 1e-15 * (1.0 + norm_x)) {
            break;
        }
    }
    return max_relative_residual(f, x);
}

std::optional<UPoly> quadratic_minimal_poly(const UPoly& f, Complex x0) {
    UPoly sqf = {Rational(1)};
    for (const auto& [factor, mult] : upoly::squarefree_decomposition(f)) {
        sqf = upoly::mul(sqf, factor);
    }
    for (Complex x1 : upoly::complex_roots(sqf)) {
        if (std::abs(x1 - x0) < 1e-9 * (1.0 + std::abs(x0))) {
            continue;
        }
        Complex s = x0 + x1;
        Complex p = x0 * x1;
        if (std::abs(s.imag()) > 1e-9 * (1.0 + std::abs(s)) ||
            std::abs(p.imag()) > 1e-9 * (1.0 + std::abs(p))) {
            continue;
        }
        auto sq = approximate_rational(s.real(), 1000000);
        auto pq = approximate_rational(p.real(), 1000000);
        if (!sq || !pq) {
            continue;
        }
        UPoly q = {*pq, -*sq, Rational(1)};
        if (upoly::divmod(f, q).second.empty()) {
            return q;
        }
    }
    return std::nullopt;
}

ExactPoly eliminant(const std::vector<ExactPoly>& eqs, const std::string& keep,
                    const std::string& eliminate) {
    std::vector<ExactPoly> with_y;
    ExactPoly g;
    bool have = false;
    auto absorb = [&](const ExactPoly& p) {
        if (p.is_zero()) {
            return;
        }
        g = have ? polyalg::gcd(g, p) : p.primitive_integer();
        have = true;
    };
    for (const auto& e : eqs) {
        if (e.is_zero()) {
            continue;
        }
        if (e.degree(eliminate) > 0) {
            with_y.push_back(e);
        } else {
            absorb(e);
        }
    }
    for (std::size_t i = 0; i < with_y.size(); ++i) {
        for (std::size_t j = i + 1; j < with_y.size(); ++j) {
            absorb(polyalg::resultant(with_y[i], with_y[j], eliminate));
        }
    }
    (void)keep;
    if (!have) {
        return eqs.empty() ? ExactPoly() : ExactPoly(eqs.front().vars());
    }
    return g;
}

std::vector<Solution> solve_bivariate(const std::vector<ExactPoly>& eqs_in,
                                      const EliminationOptions& opts) {
    std::vector<ExactPoly> eqs;
    for (const auto& e : eqs_in) {
        if (!e.is_zero()) {
            eqs.push_back(e);
        }
    }
    if (eqs.empty()) {
        throw NonIsolatedSingularityError("empty system has a non-finite zero set");
    }
    const auto& vars = eqs.front().vars();
    if (vars.size() != 2) {
        throw DomainError("bivariate elimination needs exactly two variables");
    }
    const std::string x = vars[0];
    const std::string y = vars[1];
    ExactPoly R = eliminant(eqs, x, y);
    if (R.is_zero()) {
        throw NonIsolatedSingularityError("eliminant vanishes identically: zero set is not finite");
    }
    UPoly Ru = upoly::from_poly(R, x);
    std::vector<Solution> sols;
    if (upoly::degree(Ru) <= 0) {
        return sols;
    }

    std::vector<CompiledPoly> f;
    std::vector<std::vector<CompiledPoly>> jac;
    for (const auto& e : eqs) {
        f.emplace_back(e);
        jac.push_back({CompiledPoly(e.derivative(x)), CompiledPoly(e.derivative(y))});
    }

    // Rational first coordinates: exact fibers.
    const auto rational_x = upoly::rational_roots(Ru);
    for (const auto& x0 : rational_x) {
        UPoly G;
        bool any = false;
        for (const auto& e : eqs) {
            UPoly fe = upoly::from_poly(e.substitute(x, x0).with_vars(vars), y);
            if (fe.empty()) {
                continue;
            }
            G = any ? upoly::gcd(G, fe) : upoly::monic(fe);
            any = true;
        }
        if (!any) {
            throw NonIsolatedSingularityError("system vanishes on the whole line " + x + " = " +
                                              to_string(x0));
        }
        if (upoly::degree(G) <= 0) {
            continue;
        }
        UPoly rest = G;
        for (const auto& y0 : upoly::rational_roots(G)) {
            merge_into(sols, {{to_complex(x0), to_complex(y0)}, std::vector<Rational>{x0, y0}, {}},
                       opts.merge_radius);
            while (upoly::eval(rest, y0) == 0) {
                rest = upoly::divmod(rest, UPoly{-y0, Rational(1)}).first;
            }
        }
        for (Complex y0 : upoly::complex_roots(rest)) {
            merge_into(sols, {{to_complex(x0), y0}, std::nullopt, {}}, opts.merge_radius);
        }
    }

    // Irrational first coordinates: numeric fibers.
    UPoly irr = {Rational(1)};
    for (const auto& [factor, mult] : upoly::squarefree_decomposition(Ru)) {
        irr = upoly::mul(irr, factor);
    }
    for (const auto& x0 : rational_x) {
        irr = upoly::divmod(irr, UPoly{-x0, Rational(1)}).first;
    }
    if (upoly::degree(irr) > opts.root_budget) {
        throw ResourceError("eliminant has " + std::to_string(upoly::degree(irr)) +
                            " irrational roots, above the root budget of " +
                            std::to_string(opts.root_budget));
    }
    if (upoly::degree(irr) <= 0) {
        std::sort(sols.begin(), sols.end(),
                  [](const Solution& a, const Solution& b) { return lex_less(a.location, b.location); });
        return sols;
    }
    // Source equation for fiber roots: smallest positive degree in y.
    std::size_t src = eqs.size();
    for (std::size_t i = 0; i < eqs.size(); ++i) {
        int d = eqs[i].degree(y);
        if (d > 0 && (src == eqs.size() || d < eqs[src].degree(y))) {
            src = i;
        }
    }
    for (Complex x0 : upoly::complex_roots(irr)) {
        std::optional<ExactPoly> minpoly;
        if (auto q = quadratic_minimal_poly(irr, x0)) {
            minpoly = upoly::to_poly(*q, {x}, x).primitive_integer();
        }
        std::vector<Complex> ys;
        if (src < eqs.size()) {
            auto coeffs = fiber_coefficients(eqs[src], x, y, x0);
            if (coeffs.size() >= 2) {
                ys = numeric::poly_roots(coeffs);
            }
        }
        for (Complex y0 : ys) {
            std::vector<Complex> pt = {x0, y0};
            if (max_relative_residual(f, pt) > 1e-5) {
                continue;
            }
            gauss_newton(f, jac, pt);
            if (max_relative_residual(f, pt) <= opts.tolerance) {
                merge_into(sols, {pt, std::nullopt, minpoly}, opts.merge_radius);
            }
        }
    }
    std::sort(sols.begin(), sols.end(),
              [](const Solution& a, const Solution& b) { return lex_less(a.location, b.location); });
    return sols;
}

} // namespace pararc::percurve::detail
