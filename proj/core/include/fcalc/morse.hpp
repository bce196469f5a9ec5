#pragma once

#include <memory>

#include "fcalc/chain.hpp"

namespace fcalc {

// Unit-pivot (algebraic discrete Morse) reduction.  Repeatedly cancels a pair
// of generators a, b with d(a)_b = +-1; each cancellation is an elementary
// strong deformation retract, so the reduced complex is chain homotopy
// equivalent to the input over any ground ring and has identical homology,
// torsion included.  The elimination log supports transporting vectors and
// chain maps between the original and reduced bases.
class MorseReduction {
  public:
    const ChainComplex& reduced() const { return reduced_; }

    // p: original -> reduced (composite projection of the retracts).
    std::vector<Int> push(int degree, const std::vector<Int>& v) const;
    // i: reduced -> original (composite inclusion); p after i is the identity.
    std::vector<Int> lift(int degree, const std::vector<Int>& v) const;

    // p_dst after f after i_src, a chain map between the reduced complexes
    // inducing the same map on homology as f.
    static ChainMap transport(const MorseReduction& src_red, const MorseReduction& dst_red,
                              const ChainMap& f);

    struct Impl;
    std::shared_ptr<const Impl> impl_;
    ChainComplex reduced_;
};

MorseReduction morse_reduce(const ChainComplex& c);

}  // namespace fcalc
