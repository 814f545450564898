#pragma once

#include "pararc/polyalg/exact_poly.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pararc::percurve {

using polyalg::ExactPoly;

enum class FamilyKind { Biquadratic, Cubic, Quartic, NestedCubic };

// A polynomial family in the dynamical variable z with named parameters.
struct FamilySpec {
    FamilyKind kind = FamilyKind::Biquadratic;
    int d = 2;
    ExactPoly map;
    std::vector<std::string> params;

    // (z^d + a)^d + b
    static FamilySpec biquadratic(int d);
    // z^3 - 3az + b
    static FamilySpec cubic();
    // z^4 + az^2 + bz + c
    static FamilySpec quartic();
    // (z^3 + a)^3 + b
    static FamilySpec nested_cubic();
    // Accepts "biquadratic", "cubic", "quartic", "nested-cubic".
    static FamilySpec from_name(const std::string& name, int d = 2);

    std::string name() const;
    // Stable identifier used for reference file names, e.g. "biquadratic2".
    std::string tag() const;
};

// Multiplier of the periodic cycle: an exact rational or a free symbol.
struct Multiplier {
    std::optional<Rational> value;
    std::string symbol = "r";

    static Multiplier exact(const Rational& r) { return {r, "r"}; }
    static Multiplier symbolic(const std::string& name = "r") { return {std::nullopt, name}; }
    // Parses "1", "1/2", "-1" or a bare identifier.
    static Multiplier parse(const std::string& text);

    bool is_symbolic() const { return !value.has_value(); }
    bool is_one() const { return value && *value == 1; }
    std::string to_string() const;
};

} // namespace pararc::percurve
