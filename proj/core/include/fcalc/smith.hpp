#pragma once

#include <optional>

#include "fcalc/intmat.hpp"

namespace fcalc {

// Smith normal form  D = U * A * V  with U, V unimodular (det = +-1, tracked
// together with their inverses).  diag holds the nonzero diagonal entries
// d_1 | d_2 | ... | d_r, all positive.
struct SmithResult {
    long rows = 0, cols = 0, rank = 0;
    std::vector<Int> diag;
    DenseMat U, Uinv, V, Vinv;  // empty when computed without transforms
    int det_sign_U = 1, det_sign_V = 1;
};

SmithResult smith_normal_form(const SparseMat& a, bool with_transforms = true);

// Rank over the rational numbers (= free rank over Z).
long rank_over_Q(const SparseMat& a);

// Rank of a mod p, p prime.
long rank_mod_p(const SparseMat& a, long p);

// Exact integer solve A x = b using a precomputed SNF with transforms.
// Returns nullopt when no integral solution exists.
std::optional<std::vector<Int>> solve_integer(const SmithResult& s, const std::vector<Int>& b);

// Integral basis of ker(A) (columns of V past the rank), saturated in Z^n.
std::vector<std::vector<Int>> kernel_basis(const SmithResult& s);

}  // namespace fcalc
