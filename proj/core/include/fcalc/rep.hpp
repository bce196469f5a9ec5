#pragma once

#include <map>
#include <string>
#include <vector>

#include "fcalc/chain.hpp"
#include "fcalc/errors.hpp"
#include "fcalc/perm.hpp"

namespace fcalc {

// Class-function values of a graded group object, one column per conjugacy
// class.  For Σ_n the classes are keyed by partitions of n in the canonical
// partition order; for C_n by the exponent of the distinguished generator.
struct Character {
    int n = 1;
    RingSpec ring = RingSpec::Z();
    std::vector<std::string> class_names;
    std::map<int, std::vector<Int>> by_degree;  // degree -> value per class
    std::vector<Int> euler;                     // alternating degree sum

    bool operator==(const Character& o) const = default;
};

// Σ_n acting degreewise on a chain complex through the generators t = (1 2)
// and c = (1 2 ... n), as a left action: action(s o p) = action(s)·action(p).
// Components absent from the maps act as the identity.
struct Representation {
    int n = 1;
    ChainComplex space{RingSpec::Z()};
    std::map<int, SparseMat> act_t, act_c;

    SparseMat action_t(int k) const;
    SparseMat action_c(int k) const;
    SparseMat action(int k, const Perm& p) const;
    // Expands the whole group per degree and checks that every relation holds
    // exactly; with a differential present, both generators must be chain maps.
    void validate() const;
};

// A group module concentrated in a single degree: Σ_n or C_n acting on a
// free module by matrices over the module's ring.
struct GModule {
    enum class Group { Symmetric, Cyclic };
    Group group = Group::Symmetric;
    int n = 1;
    RingSpec ring = RingSpec::Z();
    long rank = 0;
    SparseMat gen_t, gen_c;  // Cyclic ignores gen_t

    static GModule trivial(Group g, int n, RingSpec ring, long rank = 1);

    SparseMat action(const Perm& p) const;  // Symmetric only
    SparseMat action_power(long k) const;   // Cyclic only: the generator^k
    void validate() const;
};

Character character(const Representation& r);
Character character(const GModule& m);

// Induction along the transitive cyclic subgroup C_n <= Σ_n generated by the
// full cycle.  Cosets are enumerated by their lexicographically least
// one-line representative; the output sits in the single given degree.
Representation induce(const GModule& m, int degree = 0);

// Tensor with the sign character: generator actions scale by the sign of the
// generator as an element of Σ_n.
Representation sign_twist(const Representation& r);
GModule sign_twist(const GModule& m);

struct GroupHomologyResult {
    HomologyTable table;  // degrees 0..certified_through only
    int certified_through = 0;
};

// H_*(G; M) from the bar resolution built one step past degree_cap, so every
// reported degree is fully certified.
GroupHomologyResult group_homology(const GModule& m, int degree_cap, const Options& opt = {});

// Rank of the invariant submodule over the rationals (kernel of all
// generator actions minus identity).
long invariants_rank(const Representation& r, int degree);
long invariants_rank(const GModule& m);

}  // namespace fcalc
