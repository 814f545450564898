#pragma once

// Numeric helpers shared by the singularity code: compiled polynomial
// evaluation and Taylor expansion at a complex point.

#include "pararc/polyalg/exact_poly.hpp"

#include <map>
#include <utility>
#include <vector>

namespace pararc::percurve::detail {

using polyalg::ExactPoly;
using polyalg::Monomial;

// Double-precision copy of an ExactPoly for repeated evaluation.
class CompiledPoly {
  public:
    CompiledPoly() = default;
    explicit CompiledPoly(const ExactPoly& p);

    Complex eval(const std::vector<Complex>& x) const;
    // sum |c| |x^e|
    double scale(const std::vector<Complex>& x) const;
    std::size_t nvars() const { return nvars_; }

  private:
    std::size_t nvars_ = 0;
    int max_exp_ = 0;
    std::vector<std::pair<Monomial, double>> terms_;
};

// h and its first and second partial derivatives, compiled.
struct CompiledJet {
    CompiledPoly h;
    std::vector<CompiledPoly> grad;
    std::vector<std::vector<CompiledPoly>> hess;

    explicit CompiledJet(const ExactPoly& poly);
};

// Coefficient of x^e in h(point + x) together with the sum of absolute
// contributions, which measures how much cancellation produced it.
struct TaylorTerm {
    Complex value{0.0, 0.0};
    double scale = 0.0;
};
std::map<Monomial, TaylorTerm> taylor_at(const ExactPoly& h, const std::vector<Complex>& point);

int monomial_degree(const Monomial& m, std::size_t nvars);

} // namespace pararc::percurve::detail
