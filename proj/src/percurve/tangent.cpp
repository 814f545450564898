#include "local.hpp"
#include "pararc/errors.hpp"
#include "pararc/numeric/roots.hpp"
#include "pararc/percurve/singular.hpp"
#include "pararc/polyalg/upoly.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>

namespace pararc::percurve {

namespace {

using detail::monomial_degree;
using polyalg::Monomial;
using polyalg::UPoly;

constexpr int kMaxJetDegree = 6;

// Homogeneous form of degree m: coefficient per exponent multi-index.
struct Form {
    int m = 0;
    std::size_t nvars = 0;
    std::map<Monomial, Complex> terms;
};

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) {
        f *= i;
    }
    return f;
}

// Rows are the (m-1)-th partial derivatives of the form, each a linear form.
Eigen::MatrixXcd derivative_rows(const Form& f) {
    std::map<Monomial, Eigen::VectorXcd> by_beta;
    for (const auto& [e, c] : f.terms) {
        double fact = 1.0;
        for (std::size_t j = 0; j < f.nvars; ++j) {
            fact *= factorial(e[j]);
        }
        for (std::size_t i = 0; i < f.nvars; ++i) {
            if (e[i] == 0) {
                continue;
            }
            Monomial beta = e;
            beta[i] -= 1;
            auto it = by_beta.find(beta);
            if (it == by_beta.end()) {
                it = by_beta.emplace(beta, Eigen::VectorXcd::Zero(Eigen::Index(f.nvars))).first;
            }
            it->second(Eigen::Index(i)) += c * fact;
        }
    }
    Eigen::MatrixXcd out(Eigen::Index(by_beta.size()), Eigen::Index(f.nvars));
    Eigen::Index r = 0;
    for (const auto& [beta, row] : by_beta) {
        out.row(r++) = row.transpose();
    }
    return out;
}

int numeric_rank(const Eigen::MatrixXcd& m, double rel_tol) {
    if (m.rows() == 0) {
        return 0;
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) {
        return 0;
    }
    int rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s(i) > rel_tol * s(0)) {
            ++rank;
        }
    }
    return rank;
}

std::vector<Complex> normalized(std::vector<Complex> v) {
    // Scale so the first coefficient of largest modulus becomes 1.
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (std::abs(v[i]) > std::abs(v[best]) * (1.0 + 1e-9)) {
            best = i;
        }
    }
    Complex s = v[best];
    if (std::abs(s) > 0.0) {
        for (auto& x : v) {
            x /= s;
        }
    }
    return v;
}

void factor_binary_numeric(const Form& f, TangentCone& cone) {
    std::vector<Complex> g(std::size_t(f.m) + 1, 0.0);
    for (const auto& [e, c] : f.terms) {
        g[e[0]] = c;
    }
    int kmax = f.m;
    while (kmax > 0 && std::abs(g[std::size_t(kmax)]) == 0.0) {
        --kmax;
    }
    if (kmax >= 1) {
        std::vector<Complex> coeffs(g.begin(), g.begin() + kmax + 1);
        auto roots = numeric::poly_roots(coeffs);
        double big = 1.0;
        for (auto r : roots) {
            big = std::max(big, std::abs(r));
        }
        for (const auto& cl : numeric::cluster_points(roots, 1e-4 * big)) {
            cone.factors.push_back({normalized({1.0, -cl.center}), cl.size});
        }
    }
    if (f.m - kmax > 0) {
        cone.factors.push_back({{0.0, 1.0}, f.m - kmax});
    }
}

// Two distinct planes of a rank-2 ternary quadric.
void factor_rank2_quadric(const Form& f, TangentCone& cone) {
    // F(x) = x^T A x with A symmetric.
    Eigen::Matrix3cd A = Eigen::Matrix3cd::Zero();
    for (const auto& [e, c] : f.terms) {
        std::vector<int> idx;
        for (int i = 0; i < 3; ++i) {
            for (int k = 0; k < e[std::size_t(i)]; ++k) {
                idx.push_back(i);
            }
        }
        if (idx[0] == idx[1]) {
            A(idx[0], idx[0]) += c;
        } else {
            A(idx[0], idx[1]) += 0.5 * c;
            A(idx[1], idx[0]) += 0.5 * c;
        }
    }
    Eigen::JacobiSVD<Eigen::Matrix3cd> svd(A, Eigen::ComputeFullV);
    Eigen::Vector3cd k = svd.matrixV().col(2);
    Eigen::Vector3cd e1 = svd.matrixV().col(0);
    Eigen::Vector3cd e2 = svd.matrixV().col(1);
    Complex q11 = e1.transpose() * A * e1;
    Complex q12 = e1.transpose() * A * e2;
    Complex q22 = e2.transpose() * A * e2;
    Eigen::Matrix3cd M;
    M.row(0) = k.transpose();
    M.row(1) = e1.transpose();
    M.row(2) = e2.transpose();
    auto solve = [&](Complex alpha, Complex beta) {
        Eigen::Vector3cd rhs(0.0, alpha, beta);
        Eigen::Vector3cd l = M.fullPivLu().solve(rhs);
        return normalized({l(0), l(1), l(2)});
    };
    bool s_major = std::abs(q11) >= std::abs(q22);
    Complex a = s_major ? q11 : q22;
    Complex disc = std::sqrt(q12 * q12 - q11 * q22);
    for (Complex root : {(-q12 + disc) / a, (-q12 - disc) / a}) {
        if (s_major) {
            cone.factors.push_back({solve(1.0, -root), 1});
        } else {
            cone.factors.push_back({solve(-root, 1.0), 1});
        }
    }
}

void describe(TangentCone& cone, std::size_t nvars) {
    if (cone.unclassified) {
        cone.description = "jet vanishes through degree " + std::to_string(kMaxJetDegree);
        return;
    }
    if (cone.degree == 0) {
        cone.description = "point is not on the curve";
        return;
    }
    if (cone.degree == 1) {
        cone.description = "non-singular point";
        return;
    }
    const std::string what = nvars == 2 ? "tangent line" : "tangent plane";
    if (cone.factors.size() == 1 && cone.factors[0].multiplicity == cone.degree) {
        cone.description = "one " + what + " of multiplicity " + std::to_string(cone.degree);
    } else if (!cone.factors.empty()) {
        int distinct = int(cone.factors.size());
        cone.description = std::to_string(distinct) + " distinct " + what + "s";
    } else {
        cone.description = "degree " + std::to_string(cone.degree) + " cone of rank " +
                           std::to_string(cone.rank) + " without linear factors";
    }
}

void factor_form(const Form& f, TangentCone& cone, double rank_tol) {
    Eigen::MatrixXcd rows = derivative_rows(f);
    cone.rank = numeric_rank(rows, rank_tol);
    if (f.nvars == 2) {
        if (cone.factors.empty()) {
            factor_binary_numeric(f, cone);
        }
        return;
    }
    if (f.nvars != 3) {
        return;
    }
    if (cone.rank == 1) {
        Eigen::Index best = 0;
        rows.rowwise().norm().maxCoeff(&best);
        Eigen::VectorXcd r = rows.row(best);
        cone.factors.push_back({normalized({r(0), r(1), r(2)}), f.m});
    } else if (f.m == 2 && cone.rank == 2) {
        factor_rank2_quadric(f, cone);
    }
}

ExactPoly curve_poly_over_params(const PlaneCurve& curve) {
    return curve.poly.with_vars(curve.params());
}

} // namespace

TangentCone tangent_cone(const PlaneCurve& curve, const std::vector<Complex>& point,
                         double tolerance) {
    const ExactPoly h = curve_poly_over_params(curve);
    const std::size_t n = h.vars().size();
    if (point.size() != n) {
        throw DomainError("point dimension does not match the curve parameters");
    }
    auto taylor = detail::taylor_at(h, point);
    TangentCone cone;
    std::map<int, Form> forms;
    for (const auto& [m, t] : taylor) {
        if (std::abs(t.value) <= tolerance * t.scale) {
            continue;
        }
        int deg = monomial_degree(m, n);
        auto& f = forms[deg];
        f.m = deg;
        f.nvars = n;
        f.terms[m] = t.value;
    }
    if (forms.empty() || forms.begin()->first > kMaxJetDegree) {
        cone.unclassified = true;
        describe(cone, n);
        return cone;
    }
    const Form& f = forms.begin()->second;
    cone.degree = f.m;
    if (f.m >= 1) {
        factor_form(f, cone, 1e-6);
    }
    describe(cone, n);
    return cone;
}

TangentCone tangent_cone_exact(const PlaneCurve& curve, const std::vector<Rational>& point) {
    const ExactPoly h = curve_poly_over_params(curve);
    const auto& vars = h.vars();
    const std::size_t n = vars.size();
    if (point.size() != n) {
        throw DomainError("point dimension does not match the curve parameters");
    }
    std::map<std::string, Rational> shift;
    for (std::size_t i = 0; i < n; ++i) {
        shift[vars[i]] = point[i];
    }
    const ExactPoly local = h.shifted(shift);
    TangentCone cone;
    cone.exact = true;
    if (local.is_zero()) {
        cone.unclassified = true;
        describe(cone, n);
        return cone;
    }
    int m = std::numeric_limits<int>::max();
    for (const auto& [e, c] : local.terms()) {
        m = std::min(m, monomial_degree(e, n));
    }
    if (m > kMaxJetDegree) {
        cone.unclassified = true;
        describe(cone, n);
        return cone;
    }
    cone.degree = m;
    Form f;
    f.m = m;
    f.nvars = n;
    UPoly g(std::size_t(m) + 1);
    for (const auto& [e, c] : local.terms()) {
        if (monomial_degree(e, n) == m) {
            f.terms[e] = c.get_d();
            if (n == 2) {
                g[e[0]] = c;
            }
        }
    }
    if (m >= 1 && n == 2) {
        // Exact multiplicities from the square-free decomposition of the
        // dehomogenized form.
        polyalg::upoly::trim(g);
        int kmax = polyalg::upoly::degree(g);
        for (const auto& [factor, mult] : polyalg::upoly::squarefree_decomposition(g)) {
            UPoly rest = factor;
            for (const auto& root : polyalg::upoly::rational_roots(factor)) {
                cone.factors.push_back({normalized({1.0, -to_complex(root)}), mult});
                rest = polyalg::upoly::divmod(rest, UPoly{-root, Rational(1)}).first;
            }
            for (Complex root : polyalg::upoly::complex_roots(rest)) {
                cone.factors.push_back({normalized({1.0, -root}), mult});
            }
        }
        if (m - kmax > 0) {
            cone.factors.push_back({{0.0, 1.0}, m - kmax});
        }
    }
    if (m >= 1) {
        factor_form(f, cone, 1e-9);
    }
    describe(cone, n);
    return cone;
}

} // namespace pararc::percurve
