#include "fcalc/basis.hpp"

#include <utility>

#include "fcalc/errors.hpp"
#include "fcalc/morse.hpp"
#include "fcalc/smith.hpp"

namespace fcalc {

namespace {

Int mod_p(const Int& a, long p) {
    Int r = a % p;
    if (r < 0) r += p;
    return r;
}

Int inv_mod_p(const Int& a, long p) {
    // extended Euclid on (a mod p, p)
    long x = mpz_class(mod_p(a, p)).get_si();
    long t = 0, newt = 1, r = p, newr = x;
    while (newr != 0) {
        long q = r / newr;
        long tmp = t - q * newt;
        t = newt;
        newt = tmp;
        tmp = r - q * newr;
        r = newr;
        newr = tmp;
    }
    if (r != 1) throw ValidationError("element not invertible mod p");
    if (t < 0) t += p;
    return Int(t);
}

struct Factorization {
    long rank = 0;
    DenseMat V, Vinv;    // cols x cols
    DenseMat U, Uinv;    // rows x rows
};

// Gauss-Jordan over F_p with full row/column transforms: U * A * V = [[I_r,0],[0,0]].
Factorization fp_factor(const DenseMat& a0, long rows, long cols, long p) {
    Factorization f;
    DenseMat w(rows, std::vector<Int>(cols, 0));
    for (long i = 0; i < rows; ++i)
        for (long j = 0; j < cols; ++j) w[i][j] = mod_p(a0[i][j], p);
    f.U = dense_identity(rows);
    f.Uinv = dense_identity(rows);
    f.V = dense_identity(cols);
    f.Vinv = dense_identity(cols);

    auto swap_rows = [&](long i, long j) {
        if (i == j) return;
        std::swap(w[i], w[j]);
        std::swap(f.U[i], f.U[j]);
        for (long r = 0; r < rows; ++r) std::swap(f.Uinv[r][i], f.Uinv[r][j]);
    };
    auto swap_cols = [&](long i, long j) {
        if (i == j) return;
        for (long r = 0; r < rows; ++r) std::swap(w[r][i], w[r][j]);
        for (long r = 0; r < cols; ++r) std::swap(f.V[r][i], f.V[r][j]);
        std::swap(f.Vinv[i], f.Vinv[j]);
    };
    // row_i += t*row_j on w and U; col_j -= t*col_i on Uinv
    auto add_row = [&](long i, long j, const Int& t) {
        for (long c = 0; c < cols; ++c) w[i][c] = mod_p(w[i][c] + t * w[j][c], p);
        for (long c = 0; c < rows; ++c) f.U[i][c] = mod_p(f.U[i][c] + t * f.U[j][c], p);
        for (long r = 0; r < rows; ++r) f.Uinv[r][j] = mod_p(f.Uinv[r][j] - t * f.Uinv[r][i], p);
    };
    // col_i += t*col_j on w and V; row_j -= t*row_i on Vinv
    auto add_col = [&](long i, long j, const Int& t) {
        for (long r = 0; r < rows; ++r) w[r][i] = mod_p(w[r][i] + t * w[r][j], p);
        for (long r = 0; r < cols; ++r) f.V[r][i] = mod_p(f.V[r][i] + t * f.V[r][j], p);
        for (long c = 0; c < cols; ++c) f.Vinv[j][c] = mod_p(f.Vinv[j][c] - t * f.Vinv[i][c], p);
    };
    auto scale_row = [&](long i, const Int& s) {
        Int sinv = inv_mod_p(s, p);
        for (long c = 0; c < cols; ++c) w[i][c] = mod_p(w[i][c] * s, p);
        for (long c = 0; c < rows; ++c) f.U[i][c] = mod_p(f.U[i][c] * s, p);
        for (long r = 0; r < rows; ++r) f.Uinv[r][i] = mod_p(f.Uinv[r][i] * sinv, p);
    };

    long r = 0;
    while (true) {
        long pi = -1, pj = -1;
        for (long i = r; i < rows && pi < 0; ++i)
            for (long j = r; j < cols; ++j)
                if (w[i][j] != 0) {
                    pi = i;
                    pj = j;
                    break;
                }
        if (pi < 0) break;
        swap_rows(r, pi);
        swap_cols(r, pj);
        scale_row(r, inv_mod_p(w[r][r], p));
        for (long i = 0; i < rows; ++i)
            if (i != r && w[i][r] != 0) add_row(i, r, p - w[i][r]);
        for (long j = 0; j < cols; ++j)
            if (j != r && w[r][j] != 0) add_col(j, r, p - w[r][j]);
        ++r;
    }
    f.rank = r;
    return f;
}

Factorization z_factor(const SparseMat& a) {
    SmithResult s = smith_normal_form(a, true);
    Factorization f;
    f.rank = s.rank;
    f.U = s.U;
    f.Uinv = s.Uinv;
    f.V = s.V;
    f.Vinv = s.Vinv;
    return f;
}

std::vector<Int> dense_apply(const DenseMat& a, const std::vector<Int>& v) {
    std::vector<Int> out(a.size(), 0);
    for (size_t i = 0; i < a.size(); ++i) {
        for (size_t j = 0; j < v.size(); ++j)
            if (v[j] != 0) out[i] += a[i][j] * v[j];
    }
    return out;
}

struct DegreeData {
    long n = 0;       // reduced rank at this degree
    long rank1 = 0;   // rank of d_k
    long m = 0;       // kernel rank
    long classes = 0;
    DenseMat V1, Vinv1;   // n x n, from factoring d_k
    DenseMat U2, U2inv;   // m x m, from factoring the image in kernel coordinates
    std::vector<long> free_rows;
};

}  // namespace

struct HomologyClasses::Impl {
    ChainComplex original;
    MorseReduction red;
    std::map<int, DegreeData> deg;
    long field_p = 0;  // 0 for Z and Q
};

HomologyClasses::HomologyClasses(const ChainComplex& c) {
    auto impl = std::make_shared<Impl>();
    impl->original = c;
    impl->red = morse_reduce(c);
    if (c.ring().kind == RingSpec::Kind::Fp) impl->field_p = c.ring().p;
    const ChainComplex& r = impl->red.reduced();
    table_ = homology(c);
    for (auto& [k, nk] : r.ranks()) {
        if (nk == 0) continue;
        DegreeData d;
        d.n = nk;
        SparseMat dk = r.diff(k);
        SparseMat dk1 = r.diff(k + 1);
        Factorization f1 = impl->field_p ? fp_factor(dk.to_dense(), dk.rows(), dk.cols(), impl->field_p)
                                         : z_factor(dk);
        d.rank1 = f1.rank;
        d.m = d.n - d.rank1;
        d.V1 = std::move(f1.V);
        d.Vinv1 = std::move(f1.Vinv);
        // image of d_{k+1} expressed in kernel coordinates: rows >= rank1 of Vinv1 * d_{k+1}
        DenseMat full = dense_mul(d.Vinv1, dk1.to_dense());
        for (long i = 0; i < d.rank1; ++i)
            for (long j = 0; j < dk1.cols(); ++j) {
                Int e = impl->field_p ? mod_p(full[i][j], impl->field_p) : full[i][j];
                if (e != 0) throw ValidationError("image not contained in kernel in class extraction");
            }
        DenseMat bp(d.m, std::vector<Int>(dk1.cols(), 0));
        for (long i = 0; i < d.m; ++i) bp[i] = full[d.rank1 + i];
        Factorization f2;
        if (impl->field_p) {
            f2 = fp_factor(bp, d.m, dk1.cols(), impl->field_p);
        } else {
            SparseMat bps(d.m, dk1.cols());
            for (long j = 0; j < dk1.cols(); ++j)
                for (long i = 0; i < d.m; ++i)
                    if (bp[i][j] != 0) bps.add(i, j, bp[i][j]);
            f2 = z_factor(bps);
        }
        d.U2 = std::move(f2.U);
        d.U2inv = std::move(f2.Uinv);
        // rows below the rank index the free classes; earlier rows are dead or
        // torsion (torsion still shows up in table(), it just has no basis row)
        for (long i = f2.rank; i < d.m; ++i) d.free_rows.push_back(i);
        d.classes = static_cast<long>(d.free_rows.size());
        long expect = table_.rank_at(k);
        if (d.classes != expect)
            throw ValidationError("homology class extraction disagrees with homology ranks");
        impl->deg.emplace(k, std::move(d));
    }
    impl_ = std::move(impl);
}

const ChainComplex& HomologyClasses::complex() const { return impl_->original; }

long HomologyClasses::basis_rank(int k) const {
    auto it = impl_->deg.find(k);
    return it == impl_->deg.end() ? 0 : it->second.classes;
}

std::vector<Int> HomologyClasses::representative(int k, long j) const {
    const DegreeData& d = impl_->deg.at(k);
    std::vector<Int> y(d.m, 0);
    long row = d.free_rows.at(j);
    for (long i = 0; i < d.m; ++i) y[i] = d.U2inv[i][row];
    std::vector<Int> padded(d.n, 0);
    for (long i = 0; i < d.m; ++i) padded[d.rank1 + i] = y[i];
    std::vector<Int> vred = dense_apply(d.V1, padded);
    if (impl_->field_p)
        for (auto& x : vred) x = mod_p(x, impl_->field_p);
    return impl_->red.lift(k, vred);
}

std::vector<Int> HomologyClasses::coordinates(int k, const std::vector<Int>& cycle) const {
    auto it = impl_->deg.find(k);
    // degrees absent from the reduced complex carry no classes; any cycle there
    // (necessarily a boundary) has empty coordinates
    if (it == impl_->deg.end()) return {};
    const DegreeData& d = it->second;
    std::vector<Int> vred = impl_->red.push(k, cycle);
    std::vector<Int> y = dense_apply(d.Vinv1, vred);
    for (long i = 0; i < d.rank1; ++i) {
        Int e = impl_->field_p ? mod_p(y[i], impl_->field_p) : y[i];
        if (e != 0) throw ValidationError("chain is not a cycle in class coordinate extraction");
    }
    std::vector<Int> ker(d.m, 0);
    for (long i = 0; i < d.m; ++i) ker[i] = y[d.rank1 + i];
    std::vector<Int> z = dense_apply(d.U2, ker);
    std::vector<Int> out;
    out.reserve(d.free_rows.size());
    for (long row : d.free_rows) {
        Int e = impl_->field_p ? mod_p(z[row], impl_->field_p) : z[row];
        out.push_back(e);
    }
    return out;
}

SparseMat HomologyClasses::induced(const HomologyClasses& src, const HomologyClasses& dst,
                                   const ChainMap& f, int k) {
    long nc = src.basis_rank(k);
    long nr = dst.basis_rank(k);
    SparseMat out(nr, nc);
    for (long j = 0; j < nc; ++j) {
        std::vector<Int> rep = src.representative(k, j);
        std::vector<Int> w = f.component(k).apply(rep);
        std::vector<Int> coords = dst.coordinates(k, w);
        for (long i = 0; i < nr; ++i)
            if (coords[i] != 0) out.add(i, j, coords[i]);
    }
    return out;
}

}  // namespace fcalc
