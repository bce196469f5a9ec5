#pragma once

#include <map>
#include <memory>
#include <optional>
#include <random>

#include "fcalc/errors.hpp"
#include "fcalc/intmat.hpp"
#include "fcalc/ring.hpp"

namespace fcalc {

// Bounded chain complex of finitely generated free modules.  Degrees may be
// negative (a complex supported in negative degrees plays the role of a
// spectrum below dimension zero).  Only nonzero ranks and differentials are
// stored; d_k maps degree k to degree k-1.
class ChainComplex {
  public:
    ChainComplex() = default;
    explicit ChainComplex(RingSpec ring) : ring_(ring) {}

    const RingSpec& ring() const { return ring_; }
    long rank(int k) const {
        auto it = rank_.find(k);
        return it == rank_.end() ? 0 : it->second;
    }
    void set_rank(int k, long r);
    const std::map<int, long>& ranks() const { return rank_; }
    long total_rank() const;
    bool empty() const { return rank_.empty(); }
    int min_degree() const { return rank_.empty() ? 0 : rank_.begin()->first; }
    int max_degree() const { return rank_.empty() ? 0 : rank_.rbegin()->first; }

    SparseMat diff(int k) const;
    void set_diff(int k, SparseMat d);
    const std::map<int, SparseMat>& diffs() const { return diff_; }

    // Shape checks plus exact d. d = 0; throws ValidationError naming the
    // first failing degree.
    void validate() const;

    bool operator==(const ChainComplex& o) const {
        return ring_ == o.ring_ && rank_ == o.rank_ && diff_ == o.diff_;
    }

  private:
    RingSpec ring_;
    std::map<int, long> rank_;
    std::map<int, SparseMat> diff_;
};

// Degree-zero chain map.  Components absent from comp are zero.
struct ChainMap {
    std::shared_ptr<const ChainComplex> src, dst;
    std::map<int, SparseMat> comp;

    ChainMap() = default;
    ChainMap(std::shared_ptr<const ChainComplex> s, std::shared_ptr<const ChainComplex> d)
        : src(std::move(s)), dst(std::move(d)) {}

    SparseMat component(int k) const;
    void set_component(int k, SparseMat m);
    void validate() const;  // shapes and exact commutation with differentials

    ChainMap compose(const ChainMap& inner) const;  // *this after inner
    ChainMap operator+(const ChainMap& o) const;
    ChainMap operator-(const ChainMap& o) const;

    static ChainMap identity(std::shared_ptr<const ChainComplex> c);
    static ChainMap zero(std::shared_ptr<const ChainComplex> s,
                         std::shared_ptr<const ChainComplex> d);
};

inline std::shared_ptr<const ChainComplex> share(ChainComplex c) {
    return std::make_shared<const ChainComplex>(std::move(c));
}

// --- constructions ---------------------------------------------------------

ChainComplex zero_complex(RingSpec ring);
ChainComplex sphere(RingSpec ring, int degree);  // rank 1 in one degree

// Degreewise block sum, first summand's generators first.
ChainComplex direct_sum(const ChainComplex& a, const ChainComplex& b);
ChainMap inclusion_first(const ChainComplex& a, const ChainComplex& b);
ChainMap inclusion_second(const ChainComplex& a, const ChainComplex& b);
ChainMap projection_first(const ChainComplex& a, const ChainComplex& b);
ChainMap projection_second(const ChainComplex& a, const ChainComplex& b);

// Tensor product with the Koszul convention
//   d(x (x) y) = dx (x) y + (-1)^{|x|} x (x) dy.
// Basis at degree n: blocks over pairs (p, q = n-p) with p ascending; inside
// a block the index is a * rank_B(q) + b.
ChainComplex tensor(const ChainComplex& a, const ChainComplex& b);
// f (x) g for degree-zero chain maps (no Koszul signs arise).
ChainMap tensor_map(const ChainMap& f, const ChainMap& g);
// The symmetry iso A (x) B -> B (x) A,  x (x) y -> (-1)^{|x||y|} y (x) x.
ChainMap tensor_swap(const ChainComplex& a, const ChainComplex& b);

// shift(C, j)_k = C_{k-j}, differential multiplied by (-1)^j.
ChainComplex shift(const ChainComplex& c, int j);
ChainMap shift_map(const ChainMap& f, int j);

// cone(f)_k = dst_k + src_{k-1}, d(b, a) = (d b + f a, -d a).
ChainComplex cone(const ChainMap& f);
// fiber(f) = shift(cone(f), -1); comes with a natural projection to src.
ChainComplex fiber(const ChainMap& f);
ChainMap fiber_to_source(const ChainMap& f);

// --- homology --------------------------------------------------------------

struct HomologyEntry {
    long rank = 0;
    std::vector<Int> torsion;  // divisor chain, each > 1 (Z only)
    bool trivial() const { return rank == 0 && torsion.empty(); }
    bool operator==(const HomologyEntry& o) const = default;
};

struct HomologyTable {
    RingSpec ring;
    std::map<int, HomologyEntry> entries;  // only nontrivial degrees

    bool is_trivial() const { return entries.empty(); }
    HomologyEntry at(int k) const {
        auto it = entries.find(k);
        return it == entries.end() ? HomologyEntry{} : it->second;
    }
    long rank_at(int k) const { return at(k).rank; }
    bool equal_in_range(const HomologyTable& o, int lo, int hi) const;
    HomologyTable restricted(int lo, int hi) const;
    bool operator==(const HomologyTable& o) const {
        return ring == o.ring && entries == o.entries;
    }
};

// Exact homology: over Z ranks and the torsion divisor chain via Smith normal
// form, over Q/Fp dimensions via ranks in the field.  Large complexes are
// first compressed by the unit-pivot reduction in morse.hpp, which preserves
// integral homology on the nose.
HomologyTable homology(const ChainComplex& c);

bool is_acyclic(const ChainComplex& c);
bool is_quasi_iso(const ChainMap& f);

// Largest m with H_i(cone f) = 0 for all i <= m; infinite for a
// quasi-isomorphism.
struct Connectivity {
    bool infinite = false;
    long value = 0;
    bool operator==(const Connectivity& o) const = default;
};
Connectivity connectivity(const ChainMap& f);

// Seeded random complex with known homology: a sum of spheres and small
// torsion disks conjugated by random unimodular changes of basis.
ChainComplex random_complex(RingSpec ring, std::mt19937_64& rng, int lo_degree, int hi_degree,
                            long max_rank_per_degree);

}  // namespace fcalc
