#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fcalc/chain.hpp"

namespace fcalc {

// A possibly degenerate simplex, written as a monotone vertex surjection onto
// a nondegenerate base: surj has one entry per vertex, is nondecreasing with
// steps of at most one, starts at 0 and ends at the base dimension.  The
// identity surjection marks a nondegenerate face.
struct DegenerateFace {
    std::vector<int> surj;
    long base = 0;

    int base_dim() const { return surj.back(); }
    bool nondegenerate() const { return base_dim() + 1 == static_cast<int>(surj.size()); }
    bool operator==(const DegenerateFace& o) const = default;
    auto operator<=>(const DegenerateFace& o) const = default;
};

// A finite simplicial set presented by its nondegenerate simplices.  Faces of
// nondegenerate simplices may be degenerate; the bookkeeping keeps every face
// in the normal form s_{j_1}...s_{j_r} y with y nondegenerate.
class SimplicialSet {
  public:
    std::vector<long> counts;  // counts[d] = nondegenerate d-simplices
    // faces[d][id][i] = the i-th face of simplex id in dimension d (d >= 1)
    std::vector<std::vector<std::vector<DegenerateFace>>> faces;
    std::optional<long> basepoint;  // a vertex index
    // optional simplicial automorphisms: name -> image permutation of the
    // nondegenerate simplices, one vector per dimension
    std::map<std::string, std::vector<std::vector<long>>> actions;

    int dim() const { return static_cast<int>(counts.size()) - 1; }
    long count(int d) const {
        return d >= 0 && d < static_cast<int>(counts.size()) ? counts[d] : 0;
    }
    const DegenerateFace& face(int d, long id, int i) const;

    // the i-th face of a possibly degenerate simplex, renormalized
    DegenerateFace face_of(const DegenerateFace& f, int i) const;

    // Shape checks, normal-form checks on every stored face, the simplicial
    // identities d_i d_j = d_{j-1} d_i (i < j) on nondegenerate simplices, and
    // action bookkeeping.  Throws ValidationError naming the first failure.
    void validate() const;

    // Normalized chains: one generator per nondegenerate simplex, degenerate
    // faces dropped.  With `augmented` an extra generator in degree -1
    // receives every vertex, so the homology is reduced (and the empty set
    // contributes a single class in degree -1).
    ChainComplex chains(const RingSpec& ring, bool augmented = false) const;

    static SimplicialSet point();
    static SimplicialSet circle();
    static SimplicialSet interval();
    static SimplicialSet boundary_simplex(int k);
    // "point", "circle", "interval", or "boundary-simplex:k"
    static SimplicialSet named(const std::string& name);
};

}  // namespace fcalc
