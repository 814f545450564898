#include "local.hpp"

#include <cmath>

namespace pararc::percurve::detail {

CompiledPoly::CompiledPoly(const ExactPoly& p) : nvars_(p.vars().size()) {
    terms_.reserve(p.size());
    for (const auto& [m, c] : p.terms()) {
        terms_.emplace_back(m, c.get_d());
        for (std::size_t i = 0; i < nvars_; ++i) {
            max_exp_ = std::max(max_exp_, int(m[i]));
        }
    }
}

namespace {

template <class T, class F>
std::vector<std::vector<T>> powers(const std::vector<T>& x, int max_exp, F&& fn) {
    std::vector<std::vector<T>> pw(x.size(), std::vector<T>(std::size_t(max_exp) + 1));
    for (std::size_t i = 0; i < x.size(); ++i) {
        T v = fn(x[i]);
        pw[i][0] = T(1);
        for (int e = 1; e <= max_exp; ++e) {
            pw[i][std::size_t(e)] = pw[i][std::size_t(e) - 1] * v;
        }
    }
    return pw;
}

} // namespace

Complex CompiledPoly::eval(const std::vector<Complex>& x) const {
    auto pw = powers(x, max_exp_, [](Complex v) { return v; });
    Complex sum = 0.0;
    for (const auto& [m, c] : terms_) {
        Complex t = c;
        for (std::size_t i = 0; i < nvars_; ++i) {
            t *= pw[i][m[i]];
        }
        sum += t;
    }
    return sum;
}

double CompiledPoly::scale(const std::vector<Complex>& x) const {
    std::vector<double> ax(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        ax[i] = std::abs(x[i]);
    }
    auto pw = powers(ax, max_exp_, [](double v) { return v; });
    double sum = 0.0;
    for (const auto& [m, c] : terms_) {
        double t = std::abs(c);
        for (std::size_t i = 0; i < nvars_; ++i) {
            t *= pw[i][m[i]];
        }
        sum += t;
    }
    return sum;
}

CompiledJet::CompiledJet(const ExactPoly& poly) : h(poly) {
    const auto& vars = poly.vars();
    for (const auto& v : vars) {
        ExactPoly d = poly.derivative(v);
        grad.emplace_back(d);
        std::vector<CompiledPoly> row;
        for (const auto& w : vars) {
            row.emplace_back(d.derivative(w));
        }
        hess.push_back(std::move(row));
    }
}

std::map<Monomial, TaylorTerm> taylor_at(const ExactPoly& h, const std::vector<Complex>& point) {
    const std::size_t n = h.vars().size();
    int max_exp = 0;
    for (const auto& [m, c] : h.terms()) {
        for (std::size_t i = 0; i < n; ++i) {
            max_exp = std::max(max_exp, int(m[i]));
        }
    }
    // Binomial table.
    std::vector<std::vector<double>> binom(std::size_t(max_exp) + 1);
    for (int e = 0; e <= max_exp; ++e) {
        binom[std::size_t(e)].assign(std::size_t(e) + 1, 1.0);
        for (int k = 1; k < e; ++k) {
            binom[std::size_t(e)][std::size_t(k)] =
                binom[std::size_t(e) - 1][std::size_t(k) - 1] + binom[std::size_t(e) - 1][std::size_t(k)];
        }
    }
    auto pw = powers(point, max_exp, [](Complex v) { return v; });

    std::map<Monomial, TaylorTerm> out;
    for (const auto& [m, c] : h.terms()) {
        const double cd = c.get_d();
        // Expand prod_i (x_i + p_i)^{m_i} one variable at a time.
        std::vector<std::pair<Monomial, Complex>> partial = {{Monomial{}, Complex(cd)}};
        for (std::size_t i = 0; i < n; ++i) {
            const int e = m[i];
            if (e == 0) {
                continue;
            }
            std::vector<std::pair<Monomial, Complex>> next;
            next.reserve(partial.size() * std::size_t(e + 1));
            for (const auto& [pm, pv] : partial) {
                for (int k = 0; k <= e; ++k) {
                    Monomial nm = pm;
                    nm[i] = static_cast<std::uint16_t>(k);
                    next.emplace_back(nm, pv * binom[std::size_t(e)][std::size_t(k)] *
                                              pw[i][std::size_t(e - k)]);
                }
            }
            partial = std::move(next);
        }
        for (const auto& [pm, pv] : partial) {
            auto& t = out[pm];
            t.value += pv;
            t.scale += std::abs(pv);
        }
    }
    return out;
}

int monomial_degree(const Monomial& m, std::size_t nvars) {
    int d = 0;
    for (std::size_t i = 0; i < nvars; ++i) {
        d += m[i];
    }
    return d;
}

} // namespace pararc::percurve::detail
