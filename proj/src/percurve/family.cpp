#include "pararc/percurve/family.hpp"

#include "pararc/errors.hpp"

#include <cctype>

namespace pararc::percurve {

FamilySpec FamilySpec::biquadratic(int d) {
    if (d < 2) {
        throw DomainError("biquadratic family needs d >= 2");
    }
    const std::string ds = std::to_string(d);
    FamilySpec f;
    f.kind = FamilyKind::Biquadratic;
    f.d = d;
    f.params = {"a", "b"};
    f.map = ExactPoly::parse("(z^" + ds + " + a)^" + ds + " + b", {"z", "a", "b"});
    return f;
}

FamilySpec FamilySpec::cubic() {
    FamilySpec f;
    f.kind = FamilyKind::Cubic;
    f.d = 3;
    f.params = {"a", "b"};
    f.map = ExactPoly::parse("z^3 - 3*a*z + b", {"z", "a", "b"});
    return f;
}

FamilySpec FamilySpec::quartic() {
    FamilySpec f;
    f.kind = FamilyKind::Quartic;
    f.d = 4;
    f.params = {"a", "b", "c"};
    f.map = ExactPoly::parse("z^4 + a*z^2 + b*z + c", {"z", "a", "b", "c"});
    return f;
}

FamilySpec FamilySpec::nested_cubic() {
    FamilySpec f = biquadratic(3);
    f.kind = FamilyKind::NestedCubic;
    return f;
}

FamilySpec FamilySpec::from_name(const std::string& name, int d) {
    if (name == "biquadratic") {
        return biquadratic(d);
    }
    if (name == "cubic") {
        return cubic();
    }
    if (name == "quartic") {
        return quartic();
    }
    if (name == "nested-cubic") {
        return nested_cubic();
    }
    throw DomainError("unknown family '" + name + "'");
}

std::string FamilySpec::name() const {
    switch (kind) {
    case FamilyKind::Biquadratic:
        return "biquadratic";
    case FamilyKind::Cubic:
        return "cubic";
    case FamilyKind::Quartic:
        return "quartic";
    case FamilyKind::NestedCubic:
        return "nested-cubic";
    }
    return "unknown";
}

std::string FamilySpec::tag() const {
    return kind == FamilyKind::Biquadratic ? name() + std::to_string(d) : name();
}

Multiplier Multiplier::parse(const std::string& text) {
    if (!text.empty() && (std::isalpha(static_cast<unsigned char>(text[0])) || text[0] == '_')) {
        return symbolic(text);
    }
    return exact(parse_rational(text));
}

std::string Multiplier::to_string() const {
    return value ? pararc::to_string(*value) : symbol;
}

} // namespace pararc::percurve
