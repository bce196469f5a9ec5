#pragma once

#include <string>
#include <vector>

namespace fcalc {

// Permutation of {0..n-1} in one-line notation: i goes to p[i].
using Perm = std::vector<int>;

bool is_permutation(const Perm& p);
Perm perm_identity(int n);
// (sigma o pi)[i] = sigma[pi[i]]; matches tensor_permutation's left action.
Perm perm_compose(const Perm& sigma, const Perm& pi);
Perm perm_inverse(const Perm& p);
int perm_sign(const Perm& p);
// All n! permutations in lexicographic one-line order.
std::vector<Perm> all_perms(int n);

// Cycle type as a partition of n, parts descending.
std::vector<int> cycle_type(const Perm& p);
// All partitions of n, parts descending within a partition, partitions in
// ascending lexicographic order: (1,1,1) < (2,1) < (3).
std::vector<std::vector<int>> partitions(int n);
// Canonical class representative: consecutive cycles left to right, longest
// first, each cycling its block upward ((3,1): 0->1->2->0, 3 fixed).
Perm canonical_of_cycle_type(const std::vector<int>& partition);
// "2+1" style key, parts descending.
std::string partition_key(const std::vector<int>& partition);

// Generators of the symmetric group used throughout: the transposition (1 2)
// and the full cycle (1 2 ... n).
Perm transposition_gen(int n);
Perm full_cycle_gen(int n);

}  // namespace fcalc
