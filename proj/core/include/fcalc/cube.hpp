#pragma once

#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "fcalc/chain.hpp"
#include "fcalc/errors.hpp"

namespace fcalc {

// Cube of complexes indexed by subsets of {1..n}, encoded as bitmasks with bit
// s-1 for direction s.  Edge maps are stored for the elementary inclusions
// T -> T u {s}; composites are canonical because every square face is required
// to commute exactly.
class CubeDiagram {
  public:
    CubeDiagram() = default;
    CubeDiagram(int dimension, RingSpec ring);

    int dimension() const { return n_; }
    RingSpec ring() const { return ring_; }
    unsigned vertex_count() const { return 1u << n_; }

    const ChainComplex& vertex(unsigned mask) const;
    std::shared_ptr<const ChainComplex> vertex_ptr(unsigned mask) const;
    void set_vertex(unsigned mask, ChainComplex c);

    // elementary edge mask -> mask | (1 << (s-1)); directions s are 1-based
    const ChainMap& edge(unsigned mask, int s) const;
    void set_edge(unsigned mask, int s, ChainMap f);
    // composite along the canonical path adding missing directions in
    // ascending order (all paths agree once validate() passes)
    ChainMap edge_path(unsigned from, unsigned to) const;

    long total_rank() const;
    void validate() const;

  private:
    int n_ = 0;
    RingSpec ring_ = RingSpec::Z();
    std::vector<std::shared_ptr<const ChainComplex>> verts_;
    std::map<std::pair<unsigned, int>, ChainMap> edges_;
};

// Layout bookkeeping for the totalization of a cube: for each total degree,
// the vertex blocks in assembly order (bitmask descending).
struct TotalLayout {
    struct Block {
        unsigned mask = 0;
        long offset = 0;
        long rank = 0;
        int internal = 0;
    };
    std::map<int, std::vector<Block>> at;
    // offset and rank of the block of `mask` in total degree k (rank 0 if absent)
    std::pair<long, long> find(int degree, unsigned mask) const;
};

struct TotalComplex {
    ChainComplex complex;
    TotalLayout layout;
};

// Total fiber: vertex T sits in total degree (internal - |T|); the X(emptyset)
// block is in degree 0 shift.  For a 1-cube this is fiber(f) on the nose, and
// in general it equals the iterated fiber over the directions.
TotalComplex total_fiber(const CubeDiagram& cube, const Options& opt = {});

// Total cofiber: vertex T sits in total degree (internal + n - |T|); for a
// 1-cube this is cone(f) on the nose.
TotalComplex total_cofiber(const CubeDiagram& cube, const Options& opt = {});

bool is_cartesian(const CubeDiagram& cube, const Options& opt = {});
// every 2-dimensional face has acyclic total fiber; vacuously true below
// dimension 2
bool is_strongly_cocartesian(const CubeDiagram& cube, const Options& opt = {});

// Cube over subsets of {1..n} whose vertex at T is the direct sum of the
// inputs X_s for s not in T, with the canonical projections as edges.
CubeDiagram sum_cube(const std::vector<ChainComplex>& inputs);

// Cube over subsets of {1..n+1} modelling the fiberwise joins X * U: the
// vertex at U is the homotopy pushout of (X <- X (x) Z^U -> Z^U) with a
// basepoint bookkeeping generator folded in and collapsed, so the vertex at
// the empty set is X itself and the vertex at U has the homology of
// X (x) (reduced U suspended).  Basis order per degree: the X block, then the
// degree-0 generators u (ascending), then pairs x (x) u (x major, u minor),
// then the degree-1 pairs omega (x) u.
CubeDiagram join_cube(const ChainComplex& x, int n, const Options& opt = {});
// inclusion of X as the vertex-at-emptyset block into the vertex at `mask`
ChainMap join_inclusion(const CubeDiagram& jc, unsigned mask);

// Finite poset with a complex at every element and a map for every strict
// relation; composites must agree exactly.
class PosetDiagram {
  public:
    PosetDiagram() = default;
    PosetDiagram(long size, RingSpec ring);

    long size() const { return static_cast<long>(values_.size()); }
    RingSpec ring() const { return ring_; }
    void set_less(long a, long b);  // declare a < b; call transitive_close() after
    void transitive_close();
    bool less(long a, long b) const;

    const ChainComplex& value(long a) const;
    std::shared_ptr<const ChainComplex> value_ptr(long a) const;
    void set_value(long a, ChainComplex c);
    const ChainMap& edge(long a, long b) const;
    void set_edge(long a, long b, ChainMap f);

    void validate() const;

  private:
    RingSpec ring_ = RingSpec::Z();
    std::vector<std::shared_ptr<const ChainComplex>> values_;
    std::vector<std::vector<char>> less_;
    std::map<std::pair<long, long>, ChainMap> edges_;
};

// Homotopy limit of a poset diagram as the totalized cosimplicial replacement:
// one block per strictly ascending chain, carrying the value at the chain's
// top element, placed in total degree (internal - length); the coface dropping
// the top element applies the edge map, all others are identities, with
// alternating signs.
struct HolimLayout {
    struct Block {
        long chain = 0;
        long offset = 0;
        long rank = 0;
        int internal = 0;
    };
    std::map<int, std::vector<Block>> at;
    std::pair<long, long> find(int degree, long chain) const;
};

struct HolimResult {
    ChainComplex complex;
    // chains listed by (length, lexicographic) order; entries are poset elements
    std::vector<std::vector<long>> chains;
    HolimLayout layout;
};

HolimResult poset_holim(const PosetDiagram& poset, const Options& opt = {});

// holim over the nonempty subsets of the cube's direction set
HolimResult punctured_holim(const CubeDiagram& cube, const Options& opt = {});

// map induced on holims of the same poset shape by vertexwise maps (one per
// poset element, from a's value to b's value)
ChainMap holim_map(const HolimResult& a, const HolimResult& b, const std::vector<ChainMap>& vertexwise);

// restriction map from the holim of a poset to the holim of the sub-poset
// embedded by elem_map (small element -> big element); values must agree
ChainMap holim_restriction(const HolimResult& big, const HolimResult& small,
                           const std::vector<long>& elem_map);

}  // namespace fcalc
