#include "pararc/polyalg/algebra.hpp"

#include "pararc/errors.hpp"
#include "pararc/polyalg/upoly.hpp"

#include <algorithm>
#include <optional>

namespace pararc::polyalg {

namespace {

// Coefficient rings for the generic dense algorithms below. Each provides
// exact division, which is all the fraction-free methods require.
struct RationalRing {
    using T = Rational;
    T zero() const { return 0; }
    T one() const { return 1; }
    static bool is_zero(const T& x) { return x == 0; }
    T div(const T& a, const T& b) const { return a / b; }
};

struct PolyRing {
    using T = ExactPoly;
    std::vector<std::string> vars;
    T zero() const { return ExactPoly(vars); }
    T one() const { return ExactPoly::constant(vars, Rational(1)); }
    static bool is_zero(const T& x) { return x.is_zero(); }
    T div(const T& a, const T& b) const { return exact_divide(a, b); }
};

template <class Ring>
using Dense = std::vector<typename Ring::T>;

template <class Ring>
void trim(const Ring&, Dense<Ring>& a) {
    while (!a.empty() && Ring::is_zero(a.back())) {
        a.pop_back();
    }
}

template <class Ring>
typename Ring::T power(const Ring& ring, const typename Ring::T& x, int e) {
    typename Ring::T acc = ring.one();
    for (int i = 0; i < e; ++i) {
        acc = acc * x;
    }
    return acc;
}

// lc(B)^{deg A - deg B + 1} A = Q B + R.
template <class Ring>
Dense<Ring> pseudo_remainder(const Ring& ring, Dense<Ring> r, const Dense<Ring>& b) {
    const int db = int(b.size()) - 1;
    int e = int(r.size()) - 1 - db + 1;
    const auto& lb = b.back();
    while (!r.empty() && int(r.size()) - 1 >= db) {
        auto c = r.back();
        std::size_t shift = r.size() - b.size();
        for (auto& x : r) {
            x = x * lb;
        }
        for (std::size_t j = 0; j < b.size(); ++j) {
            r[shift + j] -= c * b[j];
        }
        r.pop_back();
        trim(ring, r);
        --e;
    }
    if (e > 0) {
        auto f = power(ring, lb, e);
        for (auto& x : r) {
            x = x * f;
        }
    }
    return r;
}

// Subresultant PRS resultant over an integral domain.
template <class Ring>
typename Ring::T subresultant(const Ring& ring, Dense<Ring> a, Dense<Ring> b) {
    trim(ring, a);
    trim(ring, b);
    if (a.empty() || b.empty()) {
        return ring.zero();
    }
    int da = int(a.size()) - 1;
    int db = int(b.size()) - 1;
    if (da == 0) {
        return power(ring, a[0], db);
    }
    if (db == 0) {
        return power(ring, b[0], da);
    }
    int sign = 1;
    if (da < db) {
        std::swap(a, b);
        if ((da & 1) && (db & 1)) {
            sign = -1;
        }
    }
    auto g = ring.one();
    auto h = ring.one();
    while (true) {
        int degA = int(a.size()) - 1;
        int degB = int(b.size()) - 1;
        int delta = degA - degB;
        if ((degA & 1) && (degB & 1)) {
            sign = -sign;
        }
        Dense<Ring> r = pseudo_remainder(ring, a, b);
        a = std::move(b);
        if (r.empty()) {
            return ring.zero();
        }
        typename Ring::T divisor = g * power(ring, h, delta);
        for (auto& x : r) {
            x = ring.div(x, divisor);
        }
        b = std::move(r);
        g = a.back();
        if (delta == 0) {
            // h unchanged
        } else {
            h = ring.div(power(ring, g, delta), power(ring, h, delta - 1));
        }
        if (b.size() == 1) {
            break;
        }
    }
    int degA = int(a.size()) - 1;
    auto res = ring.div(power(ring, b[0], degA), power(ring, h, degA - 1));
    if (sign < 0) {
        res = ring.zero() - res;
    }
    return res;
}

template <class Ring>
std::vector<Dense<Ring>> sylvester(const Ring& ring, const Dense<Ring>& a, const Dense<Ring>& b) {
    const std::size_t m = a.size() - 1;
    const std::size_t n = b.size() - 1;
    const std::size_t dim = m + n;
    std::vector<Dense<Ring>> mat(dim, Dense<Ring>(dim, ring.zero()));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k <= m; ++k) {
            mat[i][i + k] = a[m - k];
        }
    }
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t k = 0; k <= n; ++k) {
            mat[n + i][i + k] = b[n - k];
        }
    }
    return mat;
}

template <class Ring>
typename Ring::T bareiss_determinant(const Ring& ring, std::vector<Dense<Ring>> mat) {
    const std::size_t n = mat.size();
    if (n == 0) {
        return ring.one();
    }
    int sign = 1;
    auto prev = ring.one();
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (Ring::is_zero(mat[k][k])) {
            std::size_t pivot = k + 1;
            while (pivot < n && Ring::is_zero(mat[pivot][k])) {
                ++pivot;
            }
            if (pivot == n) {
                return ring.zero();
            }
            std::swap(mat[k], mat[pivot]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                mat[i][j] = ring.div(mat[k][k] * mat[i][j] - mat[i][k] * mat[k][j], prev);
            }
        }
        prev = mat[k][k];
    }
    auto det = mat[n - 1][n - 1];
    if (sign < 0) {
        det = ring.zero() - det;
    }
    return det;
}

template <class Ring>
typename Ring::T bareiss_resultant(const Ring& ring, Dense<Ring> a, Dense<Ring> b) {
    trim(ring, a);
    trim(ring, b);
    if (a.empty() || b.empty()) {
        return ring.zero();
    }
    int da = int(a.size()) - 1;
    int db = int(b.size()) - 1;
    if (da == 0) {
        return power(ring, a[0], db);
    }
    if (db == 0) {
        return power(ring, b[0], da);
    }
    return bareiss_determinant(ring, sylvester(ring, a, b));
}

Dense<PolyRing> to_dense(const ExactPoly& p, const std::string& var) {
    return p.coefficients_in(var);
}

Dense<RationalRing> to_dense_q(const ExactPoly& p, const std::string& var) {
    return upoly::from_poly(p, var);
}

std::vector<std::string> parameters_of(const ExactPoly& p, const ExactPoly& q,
                                       const std::string& var) {
    std::vector<std::string> out;
    for (const auto& v : unify_vars(p.vars(), q.vars())) {
        if (v != var && (p.degree(v) > 0 || q.degree(v) > 0)) {
            out.push_back(v);
        }
    }
    return out;
}

void require_nonzero(const ExactPoly& p, const ExactPoly& q) {
    if (p.is_zero() || q.is_zero()) {
        throw DomainError("resultant of a zero polynomial");
    }
}

ExactPoly interpolate_rec(const ExactPoly& p, const ExactPoly& q, const std::string& var,
                          std::vector<std::string> params, int budget,
                          const std::vector<std::string>& vars) {
    if (params.empty()) {
        RationalRing ring;
        Rational r = subresultant(ring, to_dense_q(p, var), to_dense_q(q, var));
        return ExactPoly::constant(vars, r);
    }
    const std::string v = params.back();
    params.pop_back();
    const int bound = q.degree(var) * p.degree(v) + p.degree(var) * q.degree(v);
    const int need = bound + 1;
    if (budget < need) {
        throw ResourceError("interpolation in '" + v + "' requires " + std::to_string(need) +
                            " nodes but the budget is " + std::to_string(budget));
    }
    const ExactPoly lcp = p.leading_coefficient(var);
    const ExactPoly lcq = q.leading_coefficient(var);
    std::vector<Rational> nodes;
    std::vector<ExactPoly> values;
    for (int k = 0; k < budget && int(nodes.size()) < need; ++k) {
        // 0, 1, -1, 2, -2, ...
        long x = (k % 2 == 1) ? (k + 1) / 2 : -(k / 2);
        Rational node(x);
        if (lcp.substitute(v, node).is_zero() || lcq.substitute(v, node).is_zero()) {
            continue;
        }
        values.push_back(
            interpolate_rec(p.substitute(v, node), q.substitute(v, node), var, params, budget, vars));
        nodes.push_back(node);
    }
    if (int(nodes.size()) < need) {
        throw ResourceError("interpolation in '" + v + "' requires " + std::to_string(need) +
                            " usable nodes; only " + std::to_string(nodes.size()) +
                            " found within the budget of " + std::to_string(budget));
    }
    // Newton divided differences with polynomial values.
    const std::size_t n = nodes.size();
    for (std::size_t j = 1; j < n; ++j) {
        for (std::size_t i = n - 1; i >= j; --i) {
            Rational inv = Rational(1) / (nodes[i] - nodes[i - j]);
            values[i] = (values[i] - values[i - 1]) * inv;
        }
    }
    ExactPoly x = ExactPoly::variable(vars, v);
    ExactPoly result = values[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) {
        result = result * (x - ExactPoly::constant(vars, nodes[i])) + values[i];
    }
    return result;
}

Dense<PolyRing> primitive_part_dense(const Dense<PolyRing>& a);

ExactPoly content_in(const ExactPoly& p, const std::string& x) {
    ExactPoly g(p.vars());
    for (const auto& c : p.coefficients_in(x)) {
        if (!c.is_zero()) {
            g = g.is_zero() ? c.primitive_integer() : gcd(g, c);
        }
    }
    return g;
}

Dense<PolyRing> primitive_part_dense(const Dense<PolyRing>& a) {
    if (a.empty()) {
        return a;
    }
    ExactPoly g(a.front().vars());
    for (const auto& c : a) {
        if (!c.is_zero()) {
            g = g.is_zero() ? c.primitive_integer() : gcd(g, c);
        }
    }
    Dense<PolyRing> out;
    out.reserve(a.size());
    for (const auto& c : a) {
        out.push_back(exact_divide(c, g));
    }
    return out;
}

ExactPoly from_dense(const Dense<PolyRing>& a, const std::vector<std::string>& vars,
                     const std::string& x) {
    ExactPoly out(vars);
    ExactPoly xv = ExactPoly::variable(vars, x);
    for (auto it = a.rbegin(); it != a.rend(); ++it) {
        out = out * xv + *it;
    }
    return out;
}

BigInt max_norm(const ExactPoly& p) {
    BigInt m = 0;
    for (const auto& [e, c] : p.terms()) {
        BigInt v = abs(c.get_num());
        if (v > m) {
            m = v;
        }
    }
    return m;
}

BigInt integer_content(const ExactPoly& p) {
    BigInt g = 0;
    for (const auto& [e, c] : p.terms()) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_num_mpz_t());
    }
    return g;
}

// Coefficientwise remainder in (-xi/2, xi/2].
ExactPoly symmetric_mod(const ExactPoly& p, const BigInt& xi) {
    ExactPoly out(p.vars());
    const BigInt half = xi / 2;
    for (const auto& [e, c] : p.terms()) {
        BigInt r;
        mpz_fdiv_r(r.get_mpz_t(), c.get_num_mpz_t(), xi.get_mpz_t());
        if (r > half) {
            r -= xi;
        }
        if (r != 0) {
            out.add_term(e, Rational(r));
        }
    }
    return out;
}

constexpr std::size_t kHeuristicBitLimit = 4000000;

// Gcd of integer polynomials by evaluation at a large integer and xi-adic
// reconstruction, checked by exact division. Empty if no point succeeds.
std::optional<ExactPoly> heuristic_gcd(const ExactPoly& a, const ExactPoly& b) {
    const auto& vars = a.vars();
    std::string x;
    for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
        if (a.degree(*it) > 0 || b.degree(*it) > 0) {
            x = *it;
            break;
        }
    }
    if (x.empty()) {
        BigInt g;
        mpz_gcd(g.get_mpz_t(), a.constant_term().get_num_mpz_t(),
                b.constant_term().get_num_mpz_t());
        return ExactPoly::constant(vars, Rational(g));
    }
    const int da = a.degree(x);
    const int db = b.degree(x);
    const int dmax = std::max(std::max(da, db), 1);
    const int dmin = std::min(da, db);
    BigInt xi = 2 * std::min(max_norm(a), max_norm(b)) + 29;
    for (int attempt = 0; attempt < 6; ++attempt) {
        if (mpz_sizeinbase(xi.get_mpz_t(), 2) * std::size_t(dmax) > kHeuristicBitLimit) {
            return std::nullopt;
        }
        auto g = heuristic_gcd(a.substitute(x, Rational(xi)), b.substitute(x, Rational(xi)));
        if (g) {
            ExactPoly rest = *g;
            ExactPoly G(vars);
            const ExactPoly xv = ExactPoly::variable(vars, x);
            ExactPoly power = ExactPoly::constant(vars, Rational(1));
            bool ok = true;
            for (int i = 0; !rest.is_zero(); ++i) {
                if (i > dmin) {
                    ok = false;
                    break;
                }
                ExactPoly gi = symmetric_mod(rest, xi);
                G += gi * power;
                rest -= gi;
                rest *= Rational(1) / Rational(xi);
                power *= xv;
            }
            if (ok && !G.is_zero()) {
                const BigInt cg = integer_content(G);
                G *= Rational(1) / Rational(cg);
                if (divides(G, a) && divides(G, b)) {
                    BigInt c;
                    const BigInt ca = integer_content(a);
                    const BigInt cb = integer_content(b);
                    mpz_gcd(c.get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
                    return G * Rational(c);
                }
            }
        }
        xi = xi * 73794 / 27011;
    }
    return std::nullopt;
}

} // namespace

ExactPoly iterate(const ExactPoly& p, int n, const std::string& var, const DegreeCaps& caps) {
    if (n < 1) {
        throw DomainError("iterate: n must be positive");
    }
    const int d = p.degree(var);
    if (d < 1) {
        throw DomainError("iterate: polynomial must have positive degree in '" + var + "'");
    }
    long long deg = 1;
    for (int i = 0; i < n; ++i) {
        deg *= d;
        if (deg > caps.z_degree) {
            throw ResourceError("iterate: degree " + std::to_string(d) + "^" + std::to_string(n) +
                                " exceeds the z-degree cap of " + std::to_string(caps.z_degree));
        }
    }
    ExactPoly result = p;
    for (int i = 1; i < n; ++i) {
        result = p.substitute(var, result);
    }
    const int param_deg = result.total_degree_without(var);
    if (param_deg > caps.parameter_total_degree) {
        throw ResourceError("iterate: parameter degree " + std::to_string(param_deg) +
                            " exceeds the cap of " +
                            std::to_string(caps.parameter_total_degree));
    }
    return result;
}

std::map<std::string, int> resultant_degree_bounds(const ExactPoly& p, const ExactPoly& q,
                                                   const std::string& var) {
    std::map<std::string, int> out;
    for (const auto& v : parameters_of(p, q, var)) {
        out[v] = q.degree(var) * p.degree(v) + p.degree(var) * q.degree(v);
    }
    return out;
}

ExactPoly resultant(const ExactPoly& p, const ExactPoly& q, const std::string& var,
                    ResultantMethod method) {
    require_nonzero(p, q);
    auto vars = unify_vars(p.vars(), q.vars());
    if (std::find(vars.begin(), vars.end(), var) == vars.end()) {
        vars = unify_vars(vars, {var});
    }
    const ExactPoly a = p.with_vars(vars);
    const ExactPoly b = q.with_vars(vars);
    const auto params = parameters_of(a, b, var);
    if (method == ResultantMethod::Automatic) {
        if (params.empty()) {
            method = ResultantMethod::Subresultant;
        } else if (a.degree(var) + b.degree(var) <= 10) {
            method = ResultantMethod::Bareiss;
        } else {
            method = ResultantMethod::Interpolation;
        }
    }
    switch (method) {
    case ResultantMethod::Subresultant:
        if (params.empty()) {
            RationalRing ring;
            return ExactPoly::constant(vars, subresultant(ring, to_dense_q(a, var),
                                                          to_dense_q(b, var)));
        } else {
            PolyRing ring{vars};
            return subresultant(ring, to_dense(a, var), to_dense(b, var));
        }
    case ResultantMethod::Bareiss: {
        PolyRing ring{vars};
        return bareiss_resultant(ring, to_dense(a, var), to_dense(b, var));
    }
    case ResultantMethod::Interpolation:
        return resultant_by_interpolation(a, b, var);
    case ResultantMethod::Automatic:
        break;
    }
    throw DomainError("unknown resultant method");
}

ExactPoly resultant_by_interpolation(const ExactPoly& p, const ExactPoly& q,
                                     const std::string& var, int node_budget) {
    require_nonzero(p, q);
    auto vars = unify_vars(p.vars(), q.vars());
    if (std::find(vars.begin(), vars.end(), var) == vars.end()) {
        vars = unify_vars(vars, {var});
    }
    const ExactPoly a = p.with_vars(vars);
    const ExactPoly b = q.with_vars(vars);
    if (a.degree(var) == 0 || b.degree(var) == 0) {
        PolyRing ring{vars};
        return subresultant(ring, to_dense(a, var), to_dense(b, var));
    }
    return interpolate_rec(a, b, var, parameters_of(a, b, var), node_budget, vars);
}

Discriminant discriminant(const ExactPoly& p, const std::string& var, ResultantMethod method) {
    const int d = p.degree(var);
    if (d < 2) {
        throw DomainError("discriminant needs degree >= 2 in '" + var + "'");
    }
    ExactPoly r = resultant(p, p.derivative(var), var, method);
    ExactPoly lc = p.leading_coefficient(var);
    if (!lc.is_constant()) {
        return {r, false};
    }
    Rational scale = Rational(1) / lc.constant_term();
    if (((d * (d - 1)) / 2) % 2 == 1) {
        scale = -scale;
    }
    r *= scale;
    return {r, true};
}

ExactPoly exact_divide(const ExactPoly& p, const ExactPoly& q) {
    if (q.is_zero()) {
        throw DomainError("division by the zero polynomial");
    }
    auto vars = unify_vars(p.vars(), q.vars());
    ExactPoly r = p.with_vars(vars);
    const ExactPoly d = q.with_vars(vars);
    if (d.is_constant()) {
        r *= Rational(1) / d.constant_term();
        return r;
    }
    const auto [lm, lc] = d.leading_term();
    ExactPoly quotient(vars);
    while (!r.is_zero()) {
        auto [m, c] = r.leading_term();
        Monomial t{};
        for (std::size_t i = 0; i < kMaxVars; ++i) {
            if (m[i] < lm[i]) {
                throw DomainError("polynomial division is not exact");
            }
            t[i] = static_cast<std::uint16_t>(m[i] - lm[i]);
        }
        Rational coeff = c / lc;
        ExactPoly term(vars);
        term.add_term(t, coeff);
        quotient.add_term(t, coeff);
        r -= term * d;
    }
    return quotient;
}

bool divides(const ExactPoly& q, const ExactPoly& p) {
    try {
        (void)exact_divide(p, q);
        return true;
    } catch (const DomainError&) {
        return false;
    }
}

ExactPoly gcd(const ExactPoly& p, const ExactPoly& q) {
    if (p.is_zero() && q.is_zero()) {
        return p;
    }
    if (p.is_zero()) {
        return q.primitive_integer();
    }
    if (q.is_zero()) {
        return p.primitive_integer();
    }
    const auto vars = unify_vars(p.vars(), q.vars());
    const ExactPoly a = p.with_vars(vars);
    const ExactPoly b = q.with_vars(vars);
    if (a.is_constant() || b.is_constant()) {
        return ExactPoly::constant(vars, Rational(1));
    }
    if (auto h = heuristic_gcd(a.primitive_integer(), b.primitive_integer())) {
        return h->primitive_integer();
    }
    std::string x;
    for (const auto& v : vars) {
        if (a.degree(v) > 0 || b.degree(v) > 0) {
            x = v;
            break;
        }
    }
    if (a.degree(x) == 0) {
        return gcd(a, content_in(b, x));
    }
    if (b.degree(x) == 0) {
        return gcd(content_in(a, x), b);
    }
    const ExactPoly ca = content_in(a, x);
    const ExactPoly cb = content_in(b, x);
    const ExactPoly cg = gcd(ca, cb);
    PolyRing ring{vars};
    Dense<PolyRing> A = to_dense(exact_divide(a, ca), x);
    Dense<PolyRing> B = to_dense(exact_divide(b, cb), x);
    if (A.size() < B.size()) {
        std::swap(A, B);
    }
    while (!B.empty() && B.size() > 1) {
        Dense<PolyRing> R = pseudo_remainder(ring, A, B);
        A = std::move(B);
        B = primitive_part_dense(R);
    }
    ExactPoly g = B.empty() ? from_dense(primitive_part_dense(A), vars, x)
                            : ExactPoly::constant(vars, Rational(1));
    return (cg * g).primitive_integer();
}

ExactPoly squarefree_part(const ExactPoly& p) {
    if (p.is_zero()) {
        throw DomainError("square-free part of the zero polynomial");
    }
    if (p.is_constant()) {
        return p;
    }
    ExactPoly g = p;
    for (const auto& v : p.used_vars()) {
        g = gcd(g, p.derivative(v));
        if (g.is_constant()) {
            return p;
        }
    }
    return exact_divide(p, g);
}

} // namespace pararc::polyalg
