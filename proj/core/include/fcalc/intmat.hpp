#pragma once

#include <gmpxx.h>

#include <map>
#include <utility>
#include <vector>

namespace fcalc {

// Exact arbitrary-precision integer.  All matrix data in the library is
// integral; rational and mod-p semantics are applied at interpretation time.
using Int = mpz_class;

using DenseMat = std::vector<std::vector<Int>>;

// Sparse integer matrix, column major.  Each column keeps its entries sorted
// by row index with no explicit zeros, so iteration order (and therefore
// every serialization) is deterministic.
class SparseMat {
  public:
    using Column = std::vector<std::pair<long, Int>>;

    SparseMat() = default;
    SparseMat(long rows, long cols) : rows_(rows), cols_(cols), col_(cols) {}

    static SparseMat identity(long n);
    static SparseMat from_dense(const DenseMat& d);

    long rows() const { return rows_; }
    long cols() const { return cols_; }
    long nnz() const;
    bool is_zero() const;

    const Column& col(long j) const { return col_[j]; }
    Int at(long r, long c) const;

    // Adds v to entry (r, c), dropping it if the sum is zero.
    void add(long r, long c, const Int& v);
    void set(long r, long c, const Int& v);

    SparseMat operator*(const SparseMat& o) const;
    SparseMat operator+(const SparseMat& o) const;
    SparseMat operator-(const SparseMat& o) const;
    SparseMat negated() const;
    SparseMat scaled(const Int& s) const;
    SparseMat transpose() const;
    bool operator==(const SparseMat& o) const;

    // Block diagonal [this 0; 0 o].
    SparseMat direct_sum(const SparseMat& o) const;
    // Plain Kronecker product with row-major index pairing
    // ((i,k) -> i*o.rows()+k), no signs.
    SparseMat kronecker(const SparseMat& o) const;

    std::vector<Int> apply(const std::vector<Int>& v) const;
    DenseMat to_dense() const;

    // Entries as (row, col, value) triplets in column-major lexicographic
    // order; the canonical exchange ordering is row-major, see
    // entries_row_major.
    std::vector<std::tuple<long, long, Int>> entries_row_major() const;

  private:
    long rows_ = 0, cols_ = 0;
    std::vector<Column> col_;
};

// Dense helpers used by the Smith normal form machinery.
DenseMat dense_identity(long n);
DenseMat dense_mul(const DenseMat& a, const DenseMat& b);
bool dense_equal(const DenseMat& a, const DenseMat& b);
Int dense_det(DenseMat a);  // exact, fraction-free; for test-sized matrices

}  // namespace fcalc
