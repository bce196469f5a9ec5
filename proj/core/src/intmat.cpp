#include "fcalc/intmat.hpp"

#include <algorithm>
#include <tuple>

#include "fcalc/errors.hpp"

namespace fcalc {

SparseMat SparseMat::identity(long n) {
    SparseMat m(n, n);
    for (long i = 0; i < n; ++i) m.col_[i].emplace_back(i, 1);
    return m;
}

SparseMat SparseMat::from_dense(const DenseMat& d) {
    long r = (long)d.size();
    long c = r ? (long)d[0].size() : 0;
    SparseMat m(r, c);
    for (long i = 0; i < r; ++i)
        for (long j = 0; j < c; ++j)
            if (d[i][j] != 0) m.col_[j].emplace_back(i, d[i][j]);
    return m;
}

long SparseMat::nnz() const {
    long n = 0;
    for (const auto& c : col_) n += (long)c.size();
    return n;
}

bool SparseMat::is_zero() const { return nnz() == 0; }

Int SparseMat::at(long r, long c) const {
    const Column& col = col_[c];
    auto it = std::lower_bound(col.begin(), col.end(), r,
                               [](const auto& e, long row) { return e.first < row; });
    if (it != col.end() && it->first == r) return it->second;
    return 0;
}

void SparseMat::add(long r, long c, const Int& v) {
    if (v == 0) return;
    Column& col = col_[c];
    auto it = std::lower_bound(col.begin(), col.end(), r,
                               [](const auto& e, long row) { return e.first < row; });
    if (it != col.end() && it->first == r) {
        it->second += v;
        if (it->second == 0) col.erase(it);
    } else {
        col.insert(it, {r, v});
    }
}

void SparseMat::set(long r, long c, const Int& v) {
    Column& col = col_[c];
    auto it = std::lower_bound(col.begin(), col.end(), r,
                               [](const auto& e, long row) { return e.first < row; });
    if (it != col.end() && it->first == r) {
        if (v == 0)
            col.erase(it);
        else
            it->second = v;
    } else if (v != 0) {
        col.insert(it, {r, v});
    }
}

SparseMat SparseMat::operator*(const SparseMat& o) const {
    if (cols_ != o.rows_) throw ValidationError("matrix product shape mismatch");
    SparseMat out(rows_, o.cols_);
    for (long j = 0; j < o.cols_; ++j) {
        std::map<long, Int> acc;
        for (const auto& [k, bv] : o.col_[j])
            for (const auto& [i, av] : col_[k]) acc[i] += av * bv;
        Column& c = out.col_[j];
        for (auto& [i, v] : acc)
            if (v != 0) c.emplace_back(i, v);
    }
    return out;
}

SparseMat SparseMat::operator+(const SparseMat& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw ValidationError("matrix sum shape mismatch");
    SparseMat out(rows_, cols_);
    for (long j = 0; j < cols_; ++j) {
        const Column &a = col_[j], &b = o.col_[j];
        Column& c = out.col_[j];
        size_t ia = 0, ib = 0;
        while (ia < a.size() || ib < b.size()) {
            if (ib == b.size() || (ia < a.size() && a[ia].first < b[ib].first)) {
                c.push_back(a[ia++]);
            } else if (ia == a.size() || b[ib].first < a[ia].first) {
                c.push_back(b[ib++]);
            } else {
                Int v = a[ia].second + b[ib].second;
                if (v != 0) c.emplace_back(a[ia].first, v);
                ++ia, ++ib;
            }
        }
    }
    return out;
}

SparseMat SparseMat::operator-(const SparseMat& o) const { return *this + o.negated(); }

SparseMat SparseMat::negated() const {
    SparseMat out = *this;
    for (auto& c : out.col_)
        for (auto& e : c) e.second = -e.second;
    return out;
}

SparseMat SparseMat::scaled(const Int& s) const {
    if (s == 0) return SparseMat(rows_, cols_);
    SparseMat out = *this;
    for (auto& c : out.col_)
        for (auto& e : c) e.second *= s;
    return out;
}

SparseMat SparseMat::transpose() const {
    SparseMat out(cols_, rows_);
    for (long j = 0; j < cols_; ++j)
        for (const auto& [i, v] : col_[j]) out.col_[i].emplace_back(j, v);
    return out;
}

bool SparseMat::operator==(const SparseMat& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && col_ == o.col_;
}

SparseMat SparseMat::direct_sum(const SparseMat& o) const {
    SparseMat out(rows_ + o.rows_, cols_ + o.cols_);
    for (long j = 0; j < cols_; ++j) out.col_[j] = col_[j];
    for (long j = 0; j < o.cols_; ++j) {
        Column& c = out.col_[cols_ + j];
        c.reserve(o.col_[j].size());
        for (const auto& [i, v] : o.col_[j]) c.emplace_back(rows_ + i, v);
    }
    return out;
}

SparseMat SparseMat::kronecker(const SparseMat& o) const {
    SparseMat out(rows_ * o.rows_, cols_ * o.cols_);
    for (long j = 0; j < cols_; ++j)
        for (long l = 0; l < o.cols_; ++l) {
            Column& c = out.col_[j * o.cols_ + l];
            for (const auto& [i, av] : col_[j])
                for (const auto& [k, bv] : o.col_[l]) c.emplace_back(i * o.rows_ + k, av * bv);
            std::sort(c.begin(), c.end(),
                      [](const auto& x, const auto& y) { return x.first < y.first; });
        }
    return out;
}

std::vector<Int> SparseMat::apply(const std::vector<Int>& v) const {
    if ((long)v.size() != cols_) throw ValidationError("matrix apply shape mismatch");
    std::vector<Int> out(rows_, Int(0));
    for (long j = 0; j < cols_; ++j) {
        if (v[j] == 0) continue;
        for (const auto& [i, a] : col_[j]) out[i] += a * v[j];
    }
    return out;
}

DenseMat SparseMat::to_dense() const {
    DenseMat d(rows_, std::vector<Int>(cols_, Int(0)));
    for (long j = 0; j < cols_; ++j)
        for (const auto& [i, v] : col_[j]) d[i][j] = v;
    return d;
}

std::vector<std::tuple<long, long, Int>> SparseMat::entries_row_major() const {
    std::vector<std::tuple<long, long, Int>> out;
    out.reserve(nnz());
    for (long j = 0; j < cols_; ++j)
        for (const auto& [i, v] : col_[j]) out.emplace_back(i, j, v);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) < std::get<0>(b);
        return std::get<1>(a) < std::get<1>(b);
    });
    return out;
}

DenseMat dense_identity(long n) {
    DenseMat d(n, std::vector<Int>(n, Int(0)));
    for (long i = 0; i < n; ++i) d[i][i] = 1;
    return d;
}

DenseMat dense_mul(const DenseMat& a, const DenseMat& b) {
    long m = (long)a.size();
    long k = m ? (long)a[0].size() : 0;
    long n = k && b.size() ? (long)b[0].size() : 0;
    if ((long)b.size() != k) throw ValidationError("dense product shape mismatch");
    DenseMat c(m, std::vector<Int>(n, Int(0)));
    for (long i = 0; i < m; ++i)
        for (long l = 0; l < k; ++l) {
            if (a[i][l] == 0) continue;
            for (long j = 0; j < n; ++j)
                if (b[l][j] != 0) c[i][j] += a[i][l] * b[l][j];
        }
    return c;
}

bool dense_equal(const DenseMat& a, const DenseMat& b) { return a == b; }

// Bareiss fraction-free determinant.
Int dense_det(DenseMat a) {
    long n = (long)a.size();
    if (n == 0) return 1;
    Int sign = 1, prev = 1;
    for (long k = 0; k < n - 1; ++k) {
        if (a[k][k] == 0) {
            long piv = -1;
            for (long i = k + 1; i < n; ++i)
                if (a[i][k] != 0) {
                    piv = i;
                    break;
                }
            if (piv < 0) return 0;
            std::swap(a[k], a[piv]);
            sign = -sign;
        }
        for (long i = k + 1; i < n; ++i)
            for (long j = k + 1; j < n; ++j) {
                a[i][j] = a[k][k] * a[i][j] - a[i][k] * a[k][j];
                a[i][j] /= prev;  // exact by Bareiss
            }
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

}  // namespace fcalc
