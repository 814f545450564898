#include "pararc/polyalg/upoly.hpp"

#include "pararc/errors.hpp"
#include "pararc/numeric/roots.hpp"

#include <algorithm>
#include <cmath>

namespace pararc::polyalg::upoly {

int degree(const UPoly& p) { return int(p.size()) - 1; }

void trim(UPoly& p) {
    while (!p.empty() && p.back() == 0) {
        p.pop_back();
    }
}

UPoly add(const UPoly& a, const UPoly& b) {
    UPoly out(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < a.size(); ++i) {
        out[i] += a[i];
    }
    for (std::size_t i = 0; i < b.size(); ++i) {
        out[i] += b[i];
    }
    trim(out);
    return out;
}

UPoly sub(const UPoly& a, const UPoly& b) {
    UPoly out(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < a.size(); ++i) {
        out[i] += a[i];
    }
    for (std::size_t i = 0; i < b.size(); ++i) {
        out[i] -= b[i];
    }
    trim(out);
    return out;
}

UPoly mul(const UPoly& a, const UPoly& b) {
    if (a.empty() || b.empty()) {
        return {};
    }
    UPoly out(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) {
            continue;
        }
        for (std::size_t j = 0; j < b.size(); ++j) {
            out[i + j] += a[i] * b[j];
        }
    }
    trim(out);
    return out;
}

UPoly scale(const UPoly& a, const Rational& c) {
    if (c == 0) {
        return {};
    }
    UPoly out = a;
    for (auto& x : out) {
        x *= c;
    }
    return out;
}

std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b) {
    if (b.empty()) {
        throw DomainError("univariate division by zero polynomial");
    }
    UPoly r = a;
    trim(r);
    if (r.size() < b.size()) {
        return {{}, r};
    }
    UPoly q(r.size() - b.size() + 1);
    const Rational& lb = b.back();
    while (!r.empty() && r.size() >= b.size()) {
        std::size_t shift = r.size() - b.size();
        Rational c = r.back() / lb;
        q[shift] = c;
        for (std::size_t j = 0; j < b.size(); ++j) {
            r[shift + j] -= c * b[j];
        }
        r.pop_back();
        trim(r);
    }
    trim(q);
    return {q, r};
}

UPoly derivative(const UPoly& p) {
    if (p.size() <= 1) {
        return {};
    }
    UPoly out(p.size() - 1);
    for (std::size_t i = 1; i < p.size(); ++i) {
        out[i - 1] = p[i] * Rational(static_cast<unsigned long>(i));
    }
    trim(out);
    return out;
}

UPoly monic(const UPoly& p) {
    if (p.empty()) {
        return p;
    }
    return scale(p, Rational(1) / p.back());
}

UPoly gcd(const UPoly& a, const UPoly& b) {
    UPoly x = a;
    UPoly y = b;
    trim(x);
    trim(y);
    while (!y.empty()) {
        auto [q, r] = divmod(x, y);
        x = std::move(y);
        y = std::move(r);
    }
    return monic(x);
}

Rational eval(const UPoly& p, const Rational& x) {
    Rational acc = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) {
        acc = acc * x + *it;
    }
    return acc;
}

Complex eval(const UPoly& p, Complex x) {
    Complex acc = 0.0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) {
        acc = acc * x + it->get_d();
    }
    return acc;
}

std::vector<std::pair<UPoly, int>> squarefree_decomposition(const UPoly& p) {
    std::vector<std::pair<UPoly, int>> out;
    if (degree(p) <= 0) {
        return out;
    }
    // Yun's algorithm.
    UPoly f = monic(p);
    UPoly df = derivative(f);
    UPoly a = gcd(f, df);
    UPoly b = divmod(f, a).first;
    UPoly c = divmod(df, a).first;
    UPoly d = sub(c, derivative(b));
    int i = 1;
    while (degree(b) > 0) {
        UPoly g = gcd(b, d);
        if (degree(g) > 0) {
            out.emplace_back(g, i);
        }
        b = divmod(b, g).first;
        c = divmod(d, g).first;
        d = sub(c, derivative(b));
        ++i;
    }
    return out;
}

int root_multiplicity(const UPoly& p, const Rational& x) {
    if (p.empty()) {
        throw DomainError("root multiplicity in the zero polynomial");
    }
    UPoly lin = {-x, Rational(1)};
    UPoly q = p;
    int m = 0;
    while (degree(q) >= 1) {
        auto [quot, rem] = divmod(q, lin);
        if (!rem.empty()) {
            break;
        }
        q = std::move(quot);
        ++m;
    }
    return m;
}

std::vector<Complex> to_complex_scaled(const UPoly& p) {
    // Scale by a power of two so that huge integer coefficients convert
    // without overflow.
    long max_exp = 0;
    bool any = false;
    for (const auto& c : p) {
        if (c == 0) {
            continue;
        }
        long e = long(mpz_sizeinbase(c.get_num_mpz_t(), 2)) -
                 long(mpz_sizeinbase(c.get_den_mpz_t(), 2));
        max_exp = any ? std::max(max_exp, e) : e;
        any = true;
    }
    std::vector<Complex> out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        Rational s = p[i];
        if (max_exp > 0) {
            mpq_div_2exp(s.get_mpq_t(), s.get_mpq_t(), static_cast<mp_bitcnt_t>(max_exp));
        } else if (max_exp < 0) {
            mpq_mul_2exp(s.get_mpq_t(), s.get_mpq_t(), static_cast<mp_bitcnt_t>(-max_exp));
        }
        out[i] = s.get_d();
    }
    return out;
}

std::vector<Complex> complex_roots(const UPoly& p) {
    if (degree(p) <= 0) {
        return {};
    }
    auto c = to_complex_scaled(p);
    // Strip zero roots exactly.
    std::size_t lead_zero = 0;
    while (lead_zero < p.size() && p[lead_zero] == 0) {
        ++lead_zero;
    }
    std::vector<Complex> rest(c.begin() + long(lead_zero), c.end());
    std::vector<Complex> roots = numeric::poly_roots(rest);
    roots.insert(roots.end(), lead_zero, Complex(0.0, 0.0));
    return roots;
}

namespace {

// Continued-fraction convergents of x with denominators up to max_den.
std::vector<Rational> convergents(double x, const BigInt& max_den) {
    std::vector<Rational> out;
    BigInt h_prev = 1, h = 0;
    BigInt k_prev = 0, k = 1;
    double r = x;
    for (int i = 0; i < 40; ++i) {
        double fl = std::floor(r);
        if (std::abs(fl) > 1e15) {
            break;
        }
        BigInt a(fl);
        BigInt h_next = a * h_prev + h;
        BigInt k_next = a * k_prev + k;
        if (abs(k_next) > max_den) {
            break;
        }
        h = h_prev;
        k = k_prev;
        h_prev = h_next;
        k_prev = k_next;
        Rational q(h_prev, k_prev);
        q.canonicalize();
        out.push_back(q);
        double frac = r - fl;
        if (std::abs(frac) < 1e-14) {
            break;
        }
        r = 1.0 / frac;
    }
    return out;
}

} // namespace

std::vector<Rational> rational_roots(const UPoly& p) {
    std::vector<Rational> out;
    if (degree(p) <= 0) {
        return out;
    }
    // Work with the squarefree part so numeric roots are simple.
    UPoly sq = {Rational(1)};
    for (const auto& [f, mult] : squarefree_decomposition(p)) {
        sq = mul(sq, f);
    }
    if (eval(sq, Rational(0)) == 0) {
        out.emplace_back(0);
    }
    // Integer leading coefficient bounds denominators of rational roots.
    BigInt den_lcm = 1;
    for (const auto& c : sq) {
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den_mpz_t());
    }
    Rational lead = sq.back() * Rational(den_lcm);
    BigInt max_den = abs(lead.get_num());
    for (Complex z : complex_roots(sq)) {
        if (std::abs(z.imag()) > 1e-6 * std::max(1.0, std::abs(z.real()))) {
            continue;
        }
        for (const auto& q : convergents(z.real(), max_den)) {
            if (q != 0 && eval(sq, q) == 0 &&
                std::find(out.begin(), out.end(), q) == out.end()) {
                out.push_back(q);
                break;
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

UPoly from_poly(const ExactPoly& p, const std::string& var) {
    for (const auto& v : p.vars()) {
        if (v != var && p.degree(v) > 0) {
            throw DomainError("polynomial is not univariate in '" + var + "'");
        }
    }
    UPoly out(std::size_t(std::max(p.degree(var), 0)) + 1);
    if (p.is_zero()) {
        return {};
    }
    std::size_t idx = p.has_var(var) ? p.var_index(var) : kMaxVars;
    for (const auto& [m, c] : p.terms()) {
        std::size_t e = idx < kMaxVars ? m[idx] : 0;
        out[e] = c;
    }
    trim(out);
    return out;
}

ExactPoly to_poly(const UPoly& p, const std::vector<std::string>& vars, const std::string& var) {
    ExactPoly out(vars);
    std::size_t idx = out.var_index(var);
    for (std::size_t i = 0; i < p.size(); ++i) {
        Monomial m{};
        m.fill(0);
        m[idx] = static_cast<std::uint16_t>(i);
        out.add_term(m, p[i]);
    }
    return out;
}

} // namespace pararc::polyalg::upoly
