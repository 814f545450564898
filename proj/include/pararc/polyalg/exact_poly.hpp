#pragma once

#include "pararc/polyalg/rational.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pararc::polyalg {

inline constexpr std::size_t kMaxVars = 6;

// Exponent multi-index. Only the first vars().size() slots are meaningful;
// the rest stay zero so that comparison and hashing are well defined.
using Monomial = std::array<std::uint16_t, kMaxVars>;

// Multivariate polynomial with exact rational coefficients over an ordered
// list of named variables. Terms are kept in a lexicographically ordered map
// (first variable most significant); zero coefficients are never stored.
//
// Binary operations between polynomials over different variable lists first
// unify the lists (left operand's order, then the right operand's extras).
class ExactPoly {
  public:
    using TermMap = std::map<Monomial, Rational>;

    ExactPoly() = default;
    explicit ExactPoly(std::vector<std::string> vars);

    static ExactPoly constant(std::vector<std::string> vars, const Rational& c);
    static ExactPoly variable(std::vector<std::string> vars, const std::string& name);
    // Parses expressions such as "256*a^3 + 288*a*b - 27" or "(z^2+a)^2+b".
    static ExactPoly parse(const std::string& text, std::vector<std::string> vars);

    const std::vector<std::string>& vars() const { return vars_; }
    const TermMap& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    Rational constant_term() const;

    bool has_var(const std::string& name) const;
    std::size_t var_index(const std::string& name) const;

    // -1 for the zero polynomial.
    int degree(const std::string& var) const;
    int total_degree() const;
    // Total degree with one variable excluded (parameter degree).
    int total_degree_without(const std::string& var) const;
    bool depends_on(const std::string& var) const { return degree(var) > 0; }
    std::vector<std::string> used_vars() const;

    // Coefficient polynomials c_i with p = sum_i c_i var^i. The returned
    // polynomials keep the full variable list.
    std::vector<ExactPoly> coefficients_in(const std::string& var) const;
    ExactPoly leading_coefficient(const std::string& var) const;
    // Leading term under the lexicographic order (first variable highest).
    std::pair<Monomial, Rational> leading_term() const;

    void add_term(const Monomial& m, const Rational& c);

    ExactPoly operator-() const;
    ExactPoly& operator+=(const ExactPoly& other);
    ExactPoly& operator-=(const ExactPoly& other);
    ExactPoly& operator*=(const ExactPoly& other);
    ExactPoly& operator*=(const Rational& c);

    friend ExactPoly operator+(ExactPoly a, const ExactPoly& b) { return a += b; }
    friend ExactPoly operator-(ExactPoly a, const ExactPoly& b) { return a -= b; }
    friend ExactPoly operator*(const ExactPoly& a, const ExactPoly& b);
    friend ExactPoly operator*(ExactPoly a, const Rational& c) { return a *= c; }
    friend ExactPoly operator*(const Rational& c, ExactPoly a) { return a *= c; }
    friend bool operator==(const ExactPoly& a, const ExactPoly& b);
    friend bool operator!=(const ExactPoly& a, const ExactPoly& b) { return !(a == b); }

    ExactPoly pow(unsigned exponent) const;
    ExactPoly derivative(const std::string& var) const;

    // Replace `var` by a polynomial (over any variable list) or a rational.
    ExactPoly substitute(const std::string& var, const ExactPoly& value) const;
    ExactPoly substitute(const std::string& var, const Rational& value) const;
    // Translate the origin: p(x + shift) for the named variables.
    ExactPoly shifted(const std::map<std::string, Rational>& shift) const;

    // Same polynomial over a different (super-)list of variables.
    ExactPoly with_vars(const std::vector<std::string>& vars) const;
    // Drop variables that do not occur.
    ExactPoly compacted() const;

    Complex eval(const std::map<std::string, Complex>& at) const;
    Rational eval_exact(const std::map<std::string, Rational>& at) const;
    // Positional evaluation: values[i] is assigned to vars()[i].
    Complex eval(const std::vector<Complex>& values) const;
    // sum |c| * |x^e|, the natural scale for relative residuals.
    double eval_abs_scale(const std::vector<Complex>& values) const;

    // Multiply by a rational so that coefficients are coprime integers and
    // the leading term is positive.
    ExactPoly primitive_integer() const;
    Rational content() const;

    std::string to_string() const;

  private:
    std::vector<std::string> vars_;
    TermMap terms_;
};

std::vector<std::string> unify_vars(const std::vector<std::string>& a,
                                    const std::vector<std::string>& b);

// If q == s * p for a nonzero rational s, returns s.
std::optional<Rational> proportionality_scalar(const ExactPoly& p, const ExactPoly& q);

// {"vars": [...], "terms": [{"exp": [...], "num": "...", "den": "..."}]}
nlohmann::json to_json(const ExactPoly& p);
ExactPoly poly_from_json(const nlohmann::json& j);

} // namespace pararc::polyalg
