#include "pararc/errors.hpp"
#include "pararc/hausdorff/hausdorff.hpp"
#include "detail.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace pararc::hausdorff {

namespace detail {

Complex ipow(Complex z, int d) {
    Complex r = z;
    for (int i = 1; i < d; ++i) {
        r *= z;
    }
    return r;
}

Complex root_branch(Complex w, int d, int k) {
    const double r = std::pow(std::abs(w), 1.0 / double(d));
    const double a = (std::arg(w) + 2.0 * std::numbers::pi * double(k)) / double(d);
    return std::polar(r, a);
}

} // namespace detail

PolyMap PolyMap::unicritical(int d, Complex c) {
    if (d < 2) {
        throw DomainError("degree must be at least 2");
    }
    PolyMap m;
    m.d_ = d;
    m.stages_ = {c};
    m.c_ = c;
    return m;
}

PolyMap PolyMap::multicorn(int d, Complex c) {
    PolyMap m = unicritical(d, c);
    m.stages_ = {std::conj(c), c};
    m.steps_per_pass_ = 2;
    m.antiholomorphic_ = true;
    return m;
}

PolyMap PolyMap::composition(int d, std::vector<Complex> stages) {
    if (d < 2) {
        throw DomainError("degree must be at least 2");
    }
    if (stages.empty()) {
        throw DomainError("composition needs at least one stage");
    }
    PolyMap m;
    m.d_ = d;
    m.stages_ = std::move(stages);
    return m;
}

long PolyMap::pass_degree() const {
    long r = 1;
    for (std::size_t i = 0; i < stages_.size(); ++i) {
        r *= d_;
    }
    return r;
}

long PolyMap::step_degree() const {
    long r = 1;
    for (std::size_t i = 0; i < stages_.size() / std::size_t(steps_per_pass_); ++i) {
        r *= d_;
    }
    return r;
}

Complex PolyMap::pass(Complex z) const {
    for (Complex s : stages_) {
        z = detail::ipow(z, d_) + s;
    }
    return z;
}

Complex PolyMap::step(Complex z) const {
    if (antiholomorphic_) {
        return detail::ipow(std::conj(z), d_) + *c_;
    }
    return pass(z);
}

Complex PolyMap::inverse_pass(Complex y, const int* digits) const {
    for (std::size_t i = stages_.size(); i-- > 0;) {
        y = detail::root_branch(y - stages_[i], d_, digits[i]);
    }
    return y;
}

std::string PolyMap::describe() const {
    std::ostringstream os;
    os.precision(17);
    if (antiholomorphic_) {
        os << "multicorn d=" << d_ << " c=" << c_->real() << (c_->imag() < 0 ? "" : "+")
           << c_->imag() << "i";
    } else if (c_) {
        os << "unicritical d=" << d_ << " c=" << c_->real() << (c_->imag() < 0 ? "" : "+")
           << c_->imag() << "i";
    } else {
        os << "composition d=" << d_ << " stages=" << stages_.size();
    }
    return os.str();
}

} // namespace pararc::hausdorff
