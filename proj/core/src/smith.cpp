#include "fcalc/smith.hpp"

#include <algorithm>
#include <cstdlib>

#include "fcalc/errors.hpp"

namespace fcalc {

namespace {

// Elimination state: W is reduced in place while the unimodular row/column
// operations are mirrored into U/Uinv and V/Vinv.
struct Elim {
    DenseMat W, U, Uinv, V, Vinv;
    int sU = 1, sV = 1;
    bool track;
    long m, n;

    Elim(const SparseMat& a, bool with_transforms) : track(with_transforms) {
        m = a.rows();
        n = a.cols();
        W = a.to_dense();
        if (track) {
            U = dense_identity(m);
            Uinv = dense_identity(m);
            V = dense_identity(n);
            Vinv = dense_identity(n);
        }
    }

    void row_swap(long i, long j) {
        if (i == j) return;
        std::swap(W[i], W[j]);
        sU = -sU;
        if (!track) return;
        std::swap(U[i], U[j]);
        for (long r = 0; r < m; ++r) std::swap(Uinv[r][i], Uinv[r][j]);
    }
    void col_swap(long i, long j) {
        if (i == j) return;
        for (long r = 0; r < m; ++r) std::swap(W[r][i], W[r][j]);
        sV = -sV;
        if (!track) return;
        for (long r = 0; r < n; ++r) std::swap(V[r][i], V[r][j]);
        std::swap(Vinv[i], Vinv[j]);
    }
    // row_i += q * row_j
    void row_axpy(long i, long j, const Int& q) {
        if (q == 0) return;
        for (long c = 0; c < n; ++c)
            if (W[j][c] != 0) W[i][c] += q * W[j][c];
        if (!track) return;
        for (long c = 0; c < m; ++c)
            if (U[j][c] != 0) U[i][c] += q * U[j][c];
        for (long r = 0; r < m; ++r)
            if (Uinv[r][i] != 0) Uinv[r][j] -= q * Uinv[r][i];
    }
    // col_i += q * col_j
    void col_axpy(long i, long j, const Int& q) {
        if (q == 0) return;
        for (long r = 0; r < m; ++r)
            if (W[r][j] != 0) W[r][i] += q * W[r][j];
        if (!track) return;
        for (long r = 0; r < n; ++r)
            if (V[r][j] != 0) V[r][i] += q * V[r][j];
        for (long c = 0; c < n; ++c)
            if (Vinv[i][c] != 0) Vinv[j][c] -= q * Vinv[i][c];
    }
    void row_negate(long i) {
        for (long c = 0; c < n; ++c) W[i][c] = -W[i][c];
        sU = -sU;
        if (!track) return;
        for (long c = 0; c < m; ++c) U[i][c] = -U[i][c];
        for (long r = 0; r < m; ++r) Uinv[r][i] = -Uinv[r][i];
    }
};

// Euclid-style clearing of column t below the pivot and row t right of the
// pivot, keeping the pivot the gcd of everything it absorbs.
void clear_cross(Elim& e, long t) {
    for (;;) {
        bool dirty = false;
        for (long i = t + 1; i < e.m; ++i) {
            if (e.W[i][t] == 0) continue;
            Int q = e.W[i][t] / e.W[t][t];
            e.row_axpy(i, t, -q);
            if (e.W[i][t] != 0) {  // remainder became the smaller pivot
                e.row_swap(t, i);
                dirty = true;
            }
        }
        for (long j = t + 1; j < e.n; ++j) {
            if (e.W[t][j] == 0) continue;
            Int q = e.W[t][j] / e.W[t][t];
            e.col_axpy(j, t, -q);
            if (e.W[t][j] != 0) {
                e.col_swap(t, j);
                dirty = true;
            }
        }
        if (!dirty) break;
    }
}

}  // namespace

SmithResult smith_normal_form(const SparseMat& a, bool with_transforms) {
    Elim e(a, with_transforms);
    long t = 0;
    long lim = std::min(e.m, e.n);
    while (t < lim) {
        // smallest |entry| pivot in the remaining block keeps growth down
        long pi = -1, pj = -1;
        for (long i = t; i < e.m; ++i)
            for (long j = t; j < e.n; ++j)
                if (e.W[i][j] != 0 &&
                    (pi < 0 || mpz_cmpabs(e.W[i][j].get_mpz_t(), e.W[pi][pj].get_mpz_t()) < 0)) {
                    pi = i;
                    pj = j;
                }
        if (pi < 0) break;
        e.row_swap(t, pi);
        e.col_swap(t, pj);
        clear_cross(e, t);
        if (e.W[t][t] < 0) e.row_negate(t);
        ++t;
    }
    long rank = t;
    // enforce d_1 | d_2 | ... | d_r
    for (bool again = true; again;) {
        again = false;
        for (long i = 0; i + 1 < rank; ++i) {
            if (e.W[i + 1][i + 1] % e.W[i][i] == 0) continue;
            // fold d_{i+1} into position (i+1, i), then re-reduce the pair
            e.col_axpy(i, i + 1, 1);
            clear_cross(e, i);
            if (e.W[i][i] < 0) e.row_negate(i);
            if (e.W[i + 1][i + 1] < 0) e.row_negate(i + 1);
            again = true;
        }
    }

    SmithResult r;
    r.rows = e.m;
    r.cols = e.n;
    r.rank = rank;
    r.diag.reserve(rank);
    for (long i = 0; i < rank; ++i) r.diag.push_back(e.W[i][i]);
    r.det_sign_U = e.sU;
    r.det_sign_V = e.sV;
    if (with_transforms) {
        r.U = std::move(e.U);
        r.Uinv = std::move(e.Uinv);
        r.V = std::move(e.V);
        r.Vinv = std::move(e.Vinv);
    }
    return r;
}

long rank_over_Q(const SparseMat& a) { return smith_normal_form(a, false).rank; }

long rank_mod_p(const SparseMat& a, long p) {
    long m = a.rows(), n = a.cols();
    std::vector<std::vector<long>> w(m, std::vector<long>(n, 0));
    for (long j = 0; j < n; ++j)
        for (const auto& [i, v] : a.col(j)) {
            Int r = v % p;
            long x = r.get_si();
            if (x < 0) x += p;
            w[i][j] = x;
        }
    auto inv_mod = [p](long x) {
        long g0 = p, g1 = x, u0 = 0, u1 = 1;
        while (g1) {
            long q = g0 / g1;
            g0 -= q * g1;
            std::swap(g0, g1);
            u0 -= q * u1;
            std::swap(u0, u1);
        }
        return ((u0 % p) + p) % p;
    };
    long rank = 0;
    for (long j = 0; j < n && rank < m; ++j) {
        long piv = -1;
        for (long i = rank; i < m; ++i)
            if (w[i][j]) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        std::swap(w[rank], w[piv]);
        long inv = inv_mod(w[rank][j]);
        for (long c = j; c < n; ++c) w[rank][c] = (long)((__int128)w[rank][c] * inv % p);
        for (long i = 0; i < m; ++i) {
            if (i == rank || !w[i][j]) continue;
            long f = w[i][j];
            for (long c = j; c < n; ++c) {
                w[i][c] = (long)(((__int128)w[i][c] - (__int128)f * w[rank][c]) % p);
                if (w[i][c] < 0) w[i][c] += p;
            }
        }
        ++rank;
    }
    return rank;
}

std::optional<std::vector<Int>> solve_integer(const SmithResult& s, const std::vector<Int>& b) {
    if ((long)b.size() != s.rows) throw ValidationError("solve shape mismatch");
    if (s.U.empty()) throw ValidationError("solve requires SNF with transforms");
    std::vector<Int> ub(s.rows, Int(0));
    for (long i = 0; i < s.rows; ++i)
        for (long j = 0; j < s.rows; ++j)
            if (s.U[i][j] != 0 && b[j] != 0) ub[i] += s.U[i][j] * b[j];
    std::vector<Int> y(s.cols, Int(0));
    for (long i = 0; i < s.rows; ++i) {
        if (i < s.rank) {
            if (ub[i] % s.diag[i] != 0) return std::nullopt;
            y[i] = ub[i] / s.diag[i];
        } else if (ub[i] != 0) {
            return std::nullopt;
        }
    }
    std::vector<Int> x(s.cols, Int(0));
    for (long i = 0; i < s.cols; ++i)
        for (long j = 0; j < s.cols; ++j)
            if (s.V[i][j] != 0 && y[j] != 0) x[i] += s.V[i][j] * y[j];
    return x;
}

std::vector<std::vector<Int>> kernel_basis(const SmithResult& s) {
    if (s.V.empty()) throw ValidationError("kernel basis requires SNF with transforms");
    std::vector<std::vector<Int>> out;
    for (long j = s.rank; j < s.cols; ++j) {
        std::vector<Int> v(s.cols);
        for (long i = 0; i < s.cols; ++i) v[i] = s.V[i][j];
        out.push_back(std::move(v));
    }
    return out;
}

}  // namespace fcalc
