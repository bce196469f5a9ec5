#pragma once

#include <memory>

#include "fcalc/chain.hpp"

namespace fcalc {

// Homology with representative cycles and class coordinates, the data needed
// to push chain-level group actions down to homology.  Over Z and Q the free
// part is exposed (torsion ranks still appear in table()); over a prime field
// the full vector-space structure is used.
class HomologyClasses {
  public:
    explicit HomologyClasses(const ChainComplex& c);

    const ChainComplex& complex() const;
    const HomologyTable& table() const { return table_; }
    // number of basis classes exposed at degree k (free rank, or Fp dimension)
    long basis_rank(int k) const;
    // representative cycle of class j at degree k, in the original complex
    std::vector<Int> representative(int k, long j) const;
    // coordinates of a cycle (original complex) in the class basis at degree
    // k; torsion components are dropped over Z
    std::vector<Int> coordinates(int k, const std::vector<Int>& cycle) const;

    // matrix of the map induced on degree-k homology classes
    static SparseMat induced(const HomologyClasses& src, const HomologyClasses& dst,
                             const ChainMap& f, int k);

    struct Impl;

  private:
    std::shared_ptr<const Impl> impl_;
    HomologyTable table_;
};

}  // namespace fcalc
