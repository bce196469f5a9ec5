#pragma once

#include "fcalc/rep.hpp"
#include "fcalc/simplicial.hpp"

namespace fcalc {

// Hard cap on the symmetric-group size accepted by the constructions below;
// past this the complexes outgrow any reasonable budget.
inline constexpr int kAtlasCap = 7;

// Reduced homology of the nerve of the poset of proper nontrivial partitions
// of {1..n}, with the relabelling action of Σ_n.  The classes live in degree
// n-3 with rank (n-1)!; for n = 2 the nerve is empty and the single class
// sits in degree -1.
Representation partition_complex(int n, const RingSpec& ring = RingSpec::Z(),
                                 const Options& opt = {});

// Lie(n): the multilinear component of the free Lie algebra on n letters.
// Basis: left-normed brackets [x_{p(1)}, [..., [x_{p(n-1)}, x_n]...]] over
// permutations p of the first n-1 letters; the Σ_n-action is computed by
// expanding in the tensor algebra and solving back, exactly.
GModule lie_module(int n, const RingSpec& ring = RingSpec::Z());

// character(partition_complex(n)) tensored with sign against
// character(lie_module(n)), as graded characters.
bool compare_partition_lie(int n, const Options& opt = {});

struct ConfigSpace {
    Representation rep;  // reduced homology with the coordinate action
    ChainComplex cells;  // the underlying relative cell complex
};

// Compactified configuration space of n labelled points in K: the n-fold
// product collapsed along the fat diagonal, and along every simplex with a
// basepoint coordinate when `based`.  Homology carries the Σ_n coordinate
// permutation action.
ConfigSpace config_compactified(const SimplicialSet& k, int n, bool based,
                                const RingSpec& ring = RingSpec::Z(),
                                const Options& opt = {});

// A representation concentrated in one degree together with its regradings.
struct RegradedRep {
    Representation rep;
    int degree = 0;       // degree carrying the classes
    int dual_degree = 0;  // the dual regrading
};

// The partition complex regraded by a double suspension to degree n-1, the
// derivative-of-the-identity convention; dual regrading 1-n.
RegradedRep identity_derivative(int n, const RingSpec& ring = RingSpec::Z(),
                                const Options& opt = {});

// Chain model of the one-point compactification of the reduced regular
// representation of C_n: the suspended boundary of the (n-1)-simplex with
// C_n permuting vertices, induced up to Σ_n.  Rank (n-1)! in degree n-1.
RegradedRep a_theory_coefficient(int n, const RingSpec& ring = RingSpec::Z(),
                                 const Options& opt = {});

}  // namespace fcalc
