#include "pararc/polyalg/exact_poly.hpp"

#include "pararc/errors.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace pararc {

Rational parse_rational(const std::string& text) {
    Rational q;
    if (q.set_str(text, 10) != 0) {
        throw DomainError("not a rational number: '" + text + "'");
    }
    if (q.get_den() == 0) {
        throw DomainError("zero denominator in '" + text + "'");
    }
    q.canonicalize();
    return q;
}

std::string to_string(const Rational& q) { return q.get_str(10); }

double to_double(const Rational& q) { return q.get_d(); }

Complex to_complex(const Rational& q) { return {q.get_d(), 0.0}; }

Rational pow(const Rational& base, unsigned exponent) {
    Rational num;
    Rational den;
    mpz_pow_ui(num.get_num_mpz_t(), base.get_num_mpz_t(), exponent);
    mpz_pow_ui(den.get_num_mpz_t(), base.get_den_mpz_t(), exponent);
    return num / den;
}

} // namespace pararc

namespace pararc::polyalg {

namespace {

Monomial zero_monomial() {
    Monomial m{};
    m.fill(0);
    return m;
}

Monomial add_monomials(const Monomial& a, const Monomial& b) {
    Monomial m{};
    for (std::size_t i = 0; i < kMaxVars; ++i) {
        unsigned s = unsigned(a[i]) + unsigned(b[i]);
        if (s > 0xffffu) {
            throw ResourceError("monomial exponent overflow");
        }
        m[i] = static_cast<std::uint16_t>(s);
    }
    return m;
}

} // namespace

std::vector<std::string> unify_vars(const std::vector<std::string>& a,
                                    const std::vector<std::string>& b) {
    std::vector<std::string> out = a;
    for (const auto& v : b) {
        if (std::find(out.begin(), out.end(), v) == out.end()) {
            out.push_back(v);
        }
    }
    if (out.size() > kMaxVars) {
        throw ResourceError("too many variables (max " + std::to_string(kMaxVars) + ")");
    }
    return out;
}

ExactPoly::ExactPoly(std::vector<std::string> vars) : vars_(std::move(vars)) {
    if (vars_.size() > kMaxVars) {
        throw ResourceError("too many variables (max " + std::to_string(kMaxVars) + ")");
    }
}

ExactPoly ExactPoly::constant(std::vector<std::string> vars, const Rational& c) {
    ExactPoly p(std::move(vars));
    p.add_term(zero_monomial(), c);
    return p;
}

ExactPoly ExactPoly::variable(std::vector<std::string> vars, const std::string& name) {
    ExactPoly p(std::move(vars));
    Monomial m = zero_monomial();
    m[p.var_index(name)] = 1;
    p.add_term(m, Rational(1));
    return p;
}

bool ExactPoly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == zero_monomial());
}

Rational ExactPoly::constant_term() const {
    auto it = terms_.find(zero_monomial());
    return it == terms_.end() ? Rational(0) : it->second;
}

bool ExactPoly::has_var(const std::string& name) const {
    return std::find(vars_.begin(), vars_.end(), name) != vars_.end();
}

std::size_t ExactPoly::var_index(const std::string& name) const {
    auto it = std::find(vars_.begin(), vars_.end(), name);
    if (it == vars_.end()) {
        throw DomainError("unknown variable '" + name + "'");
    }
    return static_cast<std::size_t>(it - vars_.begin());
}

int ExactPoly::degree(const std::string& var) const {
    if (terms_.empty()) {
        return -1;
    }
    if (!has_var(var)) {
        return 0;
    }
    std::size_t i = var_index(var);
    int d = 0;
    for (const auto& [m, c] : terms_) {
        d = std::max(d, int(m[i]));
    }
    return d;
}

int ExactPoly::total_degree() const {
    if (terms_.empty()) {
        return -1;
    }
    int d = 0;
    for (const auto& [m, c] : terms_) {
        int s = 0;
        for (auto e : m) {
            s += e;
        }
        d = std::max(d, s);
    }
    return d;
}

int ExactPoly::total_degree_without(const std::string& var) const {
    if (terms_.empty()) {
        return -1;
    }
    std::size_t skip = has_var(var) ? var_index(var) : kMaxVars;
    int d = 0;
    for (const auto& [m, c] : terms_) {
        int s = 0;
        for (std::size_t i = 0; i < kMaxVars; ++i) {
            if (i != skip) {
                s += m[i];
            }
        }
        d = std::max(d, s);
    }
    return d;
}

std::vector<std::string> ExactPoly::used_vars() const {
    std::vector<std::string> out;
    for (const auto& v : vars_) {
        if (degree(v) > 0) {
            out.push_back(v);
        }
    }
    return out;
}

std::vector<ExactPoly> ExactPoly::coefficients_in(const std::string& var) const {
    int d = degree(var);
    if (d < 0) {
        return {};
    }
    std::vector<ExactPoly> out(std::size_t(d) + 1, ExactPoly(vars_));
    if (!has_var(var)) {
        out[0] = *this;
        return out;
    }
    std::size_t i = var_index(var);
    for (const auto& [m, c] : terms_) {
        Monomial r = m;
        r[i] = 0;
        out[m[i]].terms_.emplace(r, c);
    }
    return out;
}

ExactPoly ExactPoly::leading_coefficient(const std::string& var) const {
    auto cs = coefficients_in(var);
    return cs.empty() ? ExactPoly(vars_) : cs.back();
}

std::pair<Monomial, Rational> ExactPoly::leading_term() const {
    if (terms_.empty()) {
        throw DomainError("leading term of the zero polynomial");
    }
    const auto& [m, c] = *terms_.rbegin();
    return {m, c};
}

void ExactPoly::add_term(const Monomial& m, const Rational& c) {
    if (c == 0) {
        return;
    }
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) {
            terms_.erase(it);
        }
    }
}

ExactPoly ExactPoly::operator-() const {
    ExactPoly out = *this;
    for (auto& [m, c] : out.terms_) {
        c = -c;
    }
    return out;
}

ExactPoly& ExactPoly::operator+=(const ExactPoly& other) {
    if (vars_ != other.vars_) {
        auto u = unify_vars(vars_, other.vars_);
        *this = with_vars(u);
        ExactPoly o = other.with_vars(u);
        for (const auto& [m, c] : o.terms_) {
            add_term(m, c);
        }
        return *this;
    }
    for (const auto& [m, c] : other.terms_) {
        add_term(m, c);
    }
    return *this;
}

ExactPoly& ExactPoly::operator-=(const ExactPoly& other) {
    if (vars_ != other.vars_) {
        return *this += -other;
    }
    for (const auto& [m, c] : other.terms_) {
        add_term(m, -c);
    }
    return *this;
}

ExactPoly operator*(const ExactPoly& a, const ExactPoly& b) {
    if (a.vars_ != b.vars_) {
        auto u = unify_vars(a.vars_, b.vars_);
        return a.with_vars(u) * b.with_vars(u);
    }
    ExactPoly out(a.vars_);
    Rational prod;
    for (const auto& [ma, ca] : a.terms_) {
        for (const auto& [mb, cb] : b.terms_) {
            prod = ca * cb;
            out.add_term(add_monomials(ma, mb), prod);
        }
    }
    return out;
}

ExactPoly& ExactPoly::operator*=(const ExactPoly& other) {
    *this = *this * other;
    return *this;
}

ExactPoly& ExactPoly::operator*=(const Rational& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, coeff] : terms_) {
        coeff *= c;
    }
    return *this;
}

bool operator==(const ExactPoly& a, const ExactPoly& b) {
    if (a.vars_ == b.vars_) {
        return a.terms_ == b.terms_;
    }
    auto u = unify_vars(a.vars_, b.vars_);
    return a.with_vars(u).terms_ == b.with_vars(u).terms_;
}

ExactPoly ExactPoly::pow(unsigned exponent) const {
    ExactPoly result = constant(vars_, Rational(1));
    ExactPoly base = *this;
    while (exponent > 0) {
        if (exponent & 1u) {
            result *= base;
        }
        exponent >>= 1u;
        if (exponent > 0) {
            base = base * base;
        }
    }
    return result;
}

ExactPoly ExactPoly::derivative(const std::string& var) const {
    ExactPoly out(vars_);
    if (!has_var(var)) {
        return out;
    }
    std::size_t i = var_index(var);
    for (const auto& [m, c] : terms_) {
        if (m[i] == 0) {
            continue;
        }
        Monomial r = m;
        r[i] -= 1;
        out.add_term(r, c * Rational(m[i]));
    }
    return out;
}

ExactPoly ExactPoly::substitute(const std::string& var, const ExactPoly& value) const {
    if (!has_var(var)) {
        return *this;
    }
    auto u = unify_vars(vars_, value.vars_);
    ExactPoly self = with_vars(u);
    ExactPoly val = value.with_vars(u);
    // Horner in `var` over coefficient polynomials.
    auto cs = self.coefficients_in(var);
    ExactPoly acc(u);
    for (auto it = cs.rbegin(); it != cs.rend(); ++it) {
        acc = acc * val + *it;
    }
    return acc;
}

ExactPoly ExactPoly::substitute(const std::string& var, const Rational& value) const {
    if (!has_var(var)) {
        return *this;
    }
    std::size_t i = var_index(var);
    int d = degree(var);
    std::vector<Rational> powers(std::size_t(std::max(d, 0)) + 1);
    powers[0] = 1;
    for (std::size_t k = 1; k < powers.size(); ++k) {
        powers[k] = powers[k - 1] * value;
    }
    ExactPoly out(vars_);
    for (const auto& [m, c] : terms_) {
        Monomial r = m;
        r[i] = 0;
        out.add_term(r, c * powers[m[i]]);
    }
    return out;
}

ExactPoly ExactPoly::shifted(const std::map<std::string, Rational>& shift) const {
    ExactPoly out = *this;
    for (const auto& [name, s] : shift) {
        if (!out.has_var(name) || s == 0) {
            continue;
        }
        ExactPoly v = variable(out.vars_, name) + constant(out.vars_, s);
        out = out.substitute(name, v);
    }
    return out;
}

ExactPoly ExactPoly::with_vars(const std::vector<std::string>& vars) const {
    if (vars == vars_) {
        return *this;
    }
    std::vector<std::size_t> target(vars_.size());
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        auto it = std::find(vars.begin(), vars.end(), vars_[i]);
        if (it == vars.end()) {
            if (degree(vars_[i]) > 0) {
                throw DomainError("cannot drop variable '" + vars_[i] + "' still in use");
            }
            target[i] = kMaxVars; // unused, exponent always zero
        } else {
            target[i] = static_cast<std::size_t>(it - vars.begin());
        }
    }
    ExactPoly out(vars);
    for (const auto& [m, c] : terms_) {
        Monomial r = zero_monomial();
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            if (target[i] < kMaxVars) {
                r[target[i]] = m[i];
            }
        }
        out.terms_.emplace(r, c);
    }
    return out;
}

ExactPoly ExactPoly::compacted() const { return with_vars(used_vars()); }

Complex ExactPoly::eval(const std::map<std::string, Complex>& at) const {
    std::vector<Complex> values(vars_.size());
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        auto it = at.find(vars_[i]);
        if (it == at.end()) {
            if (degree(vars_[i]) > 0) {
                throw DomainError("missing value for variable '" + vars_[i] + "'");
            }
            continue;
        }
        values[i] = it->second;
    }
    return eval(values);
}

namespace {

template <typename T>
std::vector<std::vector<T>> power_tables(const ExactPoly& p, const std::vector<T>& values) {
    std::vector<std::vector<T>> pw(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        int d = std::max(p.degree(p.vars()[i]), 0);
        pw[i].resize(std::size_t(d) + 1);
        pw[i][0] = T(1);
        for (int k = 1; k <= d; ++k) {
            pw[i][std::size_t(k)] = pw[i][std::size_t(k) - 1] * values[i];
        }
    }
    return pw;
}

} // namespace

Complex ExactPoly::eval(const std::vector<Complex>& values) const {
    if (values.size() != vars_.size()) {
        throw DomainError("evaluation point has wrong dimension");
    }
    auto pw = power_tables(*this, values);
    Complex sum = 0.0;
    for (const auto& [m, c] : terms_) {
        Complex t = c.get_d();
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            t *= pw[i][m[i]];
        }
        sum += t;
    }
    return sum;
}

double ExactPoly::eval_abs_scale(const std::vector<Complex>& values) const {
    std::vector<double> mags(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        mags[i] = std::abs(values[i]);
    }
    auto pw = power_tables(*this, mags);
    double sum = 0.0;
    for (const auto& [m, c] : terms_) {
        double t = std::abs(c.get_d());
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            t *= pw[i][m[i]];
        }
        sum += t;
    }
    return sum;
}

Rational ExactPoly::eval_exact(const std::map<std::string, Rational>& at) const {
    std::vector<Rational> values(vars_.size());
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        auto it = at.find(vars_[i]);
        if (it == at.end()) {
            if (degree(vars_[i]) > 0) {
                throw DomainError("missing value for variable '" + vars_[i] + "'");
            }
            continue;
        }
        values[i] = it->second;
    }
    auto pw = power_tables(*this, values);
    Rational sum = 0;
    for (const auto& [m, c] : terms_) {
        Rational t = c;
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            if (m[i] > 0) {
                t *= pw[i][m[i]];
            }
        }
        sum += t;
    }
    return sum;
}

Rational ExactPoly::content() const {
    if (terms_.empty()) {
        return 0;
    }
    BigInt num_gcd = 0;
    BigInt den_lcm = 1;
    for (const auto& [m, c] : terms_) {
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num_mpz_t());
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den_mpz_t());
    }
    Rational out(num_gcd, den_lcm);
    out.canonicalize();
    if (leading_term().second < 0) {
        out = -out;
    }
    return out;
}

ExactPoly ExactPoly::primitive_integer() const {
    if (terms_.empty()) {
        return *this;
    }
    Rational c = content();
    ExactPoly out = *this;
    out *= Rational(1) / c;
    return out;
}

std::string ExactPoly::to_string() const {
    if (terms_.empty()) {
        return "0";
    }
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [m, c] = *it;
        bool is_const = (m == zero_monomial());
        Rational mag = abs(c);
        if (first) {
            if (c < 0) {
                os << "-";
            }
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        first = false;
        bool wrote = false;
        if (mag != 1 || is_const) {
            os << mag.get_str();
            wrote = true;
        }
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            if (m[i] == 0) {
                continue;
            }
            if (wrote) {
                os << "*";
            }
            os << vars_[i];
            if (m[i] > 1) {
                os << "^" << m[i];
            }
            wrote = true;
        }
    }
    return os.str();
}

std::optional<Rational> proportionality_scalar(const ExactPoly& p, const ExactPoly& q) {
    if (p.is_zero() || q.is_zero()) {
        return std::nullopt;
    }
    auto u = unify_vars(p.vars(), q.vars());
    ExactPoly a = p.with_vars(u);
    ExactPoly b = q.with_vars(u);
    if (a.size() != b.size()) {
        return std::nullopt;
    }
    Rational s = b.leading_term().second / a.leading_term().second;
    if ((a * s) != b) {
        return std::nullopt;
    }
    return s;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
  public:
    Parser(const std::string& text, std::vector<std::string> vars)
        : text_(text), vars_(std::move(vars)) {}

    ExactPoly run() {
        ExactPoly p = expr();
        skip_ws();
        if (pos_ != text_.size()) {
            fail("unexpected character");
        }
        return p;
    }

  private:
    [[noreturn]] void fail(const std::string& what) const {
        throw DomainError("polynomial parse error at position " + std::to_string(pos_) +
                          ": " + what + " in '" + text_ + "'");
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool accept(char ch) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == ch) {
            ++pos_;
            return true;
        }
        return false;
    }

    ExactPoly expr() {
        ExactPoly acc(vars_);
        bool negate = accept('-');
        if (!negate) {
            accept('+');
        }
        ExactPoly t = term();
        acc = negate ? -t : t;
        while (true) {
            if (accept('+')) {
                acc += term();
            } else if (accept('-')) {
                acc -= term();
            } else {
                break;
            }
        }
        return acc;
    }

    ExactPoly term() {
        ExactPoly acc = factor();
        while (accept('*')) {
            acc = acc * factor();
        }
        return acc;
    }

    ExactPoly factor() {
        ExactPoly base = primary();
        if (accept('^')) {
            skip_ws();
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
            }
            if (start == pos_) {
                fail("expected exponent");
            }
            base = base.pow(static_cast<unsigned>(std::stoul(text_.substr(start, pos_ - start))));
        }
        return base;
    }

    ExactPoly primary() {
        skip_ws();
        if (pos_ >= text_.size()) {
            fail("unexpected end");
        }
        char ch = text_[pos_];
        if (ch == '(') {
            ++pos_;
            ExactPoly inner = expr();
            if (!accept(')')) {
                fail("expected ')'");
            }
            return inner;
        }
        if (ch == '-') {
            ++pos_;
            return -factor();
        }
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
            }
            std::string num = text_.substr(start, pos_ - start);
            if (pos_ < text_.size() && text_[pos_] == '/') {
                std::size_t save = pos_;
                ++pos_;
                std::size_t dstart = pos_;
                while (pos_ < text_.size() &&
                       std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                    ++pos_;
                }
                if (dstart == pos_) {
                    pos_ = save;
                } else {
                    num += "/" + text_.substr(dstart, pos_ - dstart);
                }
            }
            return ExactPoly::constant(vars_, parse_rational(num));
        }
        if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                ++pos_;
            }
            std::string name = text_.substr(start, pos_ - start);
            if (std::find(vars_.begin(), vars_.end(), name) == vars_.end()) {
                fail("unknown variable '" + name + "'");
            }
            return ExactPoly::variable(vars_, name);
        }
        fail(std::string("unexpected '") + ch + "'");
    }

    const std::string& text_;
    std::vector<std::string> vars_;
    std::size_t pos_ = 0;
};

} // namespace

ExactPoly ExactPoly::parse(const std::string& text, std::vector<std::string> vars) {
    return Parser(text, std::move(vars)).run();
}

// ---------------------------------------------------------------------------
// JSON

nlohmann::json to_json(const ExactPoly& p) {
    nlohmann::json terms = nlohmann::json::array();
    for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
        const auto& [m, c] = *it;
        nlohmann::json exps = nlohmann::json::array();
        for (std::size_t i = 0; i < p.vars().size(); ++i) {
            exps.push_back(m[i]);
        }
        terms.push_back({{"exp", exps},
                         {"num", c.get_num().get_str()},
                         {"den", c.get_den().get_str()}});
    }
    return {{"vars", p.vars()}, {"terms", terms}};
}

ExactPoly poly_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("vars") || !j.contains("terms")) {
        throw DomainError("polynomial JSON needs 'vars' and 'terms'");
    }
    auto vars = j.at("vars").get<std::vector<std::string>>();
    ExactPoly p(vars);
    for (const auto& t : j.at("terms")) {
        auto exps = t.at("exp").get<std::vector<unsigned>>();
        if (exps.size() != vars.size()) {
            throw DomainError("exponent vector length does not match vars");
        }
        Monomial m{};
        m.fill(0);
        for (std::size_t i = 0; i < exps.size(); ++i) {
            if (exps[i] > 0xffffu) {
                throw DomainError("exponent too large");
            }
            m[i] = static_cast<std::uint16_t>(exps[i]);
        }
        BigInt num;
        BigInt den;
        if (num.set_str(t.at("num").get<std::string>(), 10) != 0 ||
            den.set_str(t.at("den").get<std::string>(), 10) != 0 || den <= 0) {
            throw DomainError("bad coefficient in polynomial JSON");
        }
        Rational c(num, den);
        c.canonicalize();
        p.add_term(m, c);
    }
    return p;
}

} // namespace pararc::polyalg
