#pragma once

#include <string>

#include "fcalc/errors.hpp"

namespace fcalc {

// Ground ring of a computation: the integers, the rationals, or a prime field.
// All matrix data is stored integrally; the ring controls how homology,
// rank and quotients are interpreted.
struct RingSpec {
    enum class Kind { Z, Q, Fp };
    Kind kind = Kind::Z;
    long p = 0;  // modulus when kind == Fp

    static RingSpec Z() { return {Kind::Z, 0}; }
    static RingSpec Q() { return {Kind::Q, 0}; }
    static RingSpec Fp(long p);

    bool is_field() const { return kind != Kind::Z; }
    bool operator==(const RingSpec& o) const { return kind == o.kind && p == o.p; }
    bool operator!=(const RingSpec& o) const { return !(*this == o); }

    std::string name() const;
    static RingSpec parse(const std::string& s);
};

inline RingSpec RingSpec::Fp(long p) {
    if (p < 2) throw ValidationError("Fp modulus must be >= 2, got " + std::to_string(p));
    for (long d = 2; d * d <= p; ++d)
        if (p % d == 0) throw ValidationError("Fp modulus must be prime, got " + std::to_string(p));
    return {Kind::Fp, p};
}

inline std::string RingSpec::name() const {
    switch (kind) {
        case Kind::Z: return "Z";
        case Kind::Q: return "Q";
        default: return "Fp:" + std::to_string(p);
    }
}

inline RingSpec RingSpec::parse(const std::string& s) {
    if (s == "Z") return Z();
    if (s == "Q") return Q();
    if (s.rfind("Fp:", 0) == 0) {
        try {
            return Fp(std::stol(s.substr(3)));
        } catch (const std::invalid_argument&) {
        } catch (const std::out_of_range&) {
        }
    }
    throw ValidationError("unknown ring '" + s + "' (expected Z, Q or Fp:<p>)");
}

}  // namespace fcalc
