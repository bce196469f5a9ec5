#include "fcalc/chain.hpp"

#include <algorithm>

#include "fcalc/morse.hpp"
#include "fcalc/smith.hpp"

namespace fcalc {

void ChainComplex::set_rank(int k, long r) {
    if (r < 0) throw ValidationError("negative rank at degree " + std::to_string(k));
    if (r == 0)
        rank_.erase(k);
    else
        rank_[k] = r;
}

long ChainComplex::total_rank() const {
    long t = 0;
    for (const auto& [k, r] : rank_) t += r;
    return t;
}

SparseMat ChainComplex::diff(int k) const {
    auto it = diff_.find(k);
    if (it != diff_.end()) return it->second;
    return SparseMat(rank(k - 1), rank(k));
}

void ChainComplex::set_diff(int k, SparseMat d) {
    if (d.rows() != rank(k - 1) || d.cols() != rank(k))
        throw ValidationError("differential shape mismatch at degree " + std::to_string(k));
    if (d.is_zero())
        diff_.erase(k);
    else
        diff_[k] = std::move(d);
}

void ChainComplex::validate() const {
    for (const auto& [k, d] : diff_) {
        if (d.rows() != rank(k - 1) || d.cols() != rank(k))
            throw ValidationError("differential shape mismatch at degree " + std::to_string(k));
    }
    for (const auto& [k, d] : diff_) {
        auto above = diff_.find(k + 1);
        if (above == diff_.end()) continue;
        if (!(d * above->second).is_zero())
            throw ValidationError("d^2 != 0 from degree " + std::to_string(k + 1));
    }
}

SparseMat ChainMap::component(int k) const {
    auto it = comp.find(k);
    if (it != comp.end()) return it->second;
    return SparseMat(dst->rank(k), src->rank(k));
}

void ChainMap::set_component(int k, SparseMat m) {
    if (m.rows() != dst->rank(k) || m.cols() != src->rank(k))
        throw ValidationError("chain map component shape mismatch at degree " + std::to_string(k));
    if (m.is_zero())
        comp.erase(k);
    else
        comp[k] = std::move(m);
}

void ChainMap::validate() const {
    if (src->ring() != dst->ring()) throw ValidationError("chain map ring mismatch");
    for (const auto& [k, m] : comp)
        if (m.rows() != dst->rank(k) || m.cols() != src->rank(k))
            throw ValidationError("chain map component shape mismatch at degree " +
                                  std::to_string(k));
    for (const auto& [k, r] : src->ranks()) {
        (void)r;
        // dst_d . f_k == f_{k-1} . src_d
        SparseMat lhs = dst->diff(k) * component(k);
        SparseMat rhs = component(k - 1) * src->diff(k);
        if (!(lhs == rhs))
            throw ValidationError("chain map does not commute with d at degree " +
                                  std::to_string(k));
    }
}

ChainMap ChainMap::compose(const ChainMap& inner) const {
    ChainMap out(inner.src, dst);
    for (const auto& [k, r] : inner.src->ranks()) {
        (void)r;
        SparseMat m = component(k) * inner.component(k);
        if (!m.is_zero()) out.comp[k] = std::move(m);
    }
    return out;
}

ChainMap ChainMap::operator+(const ChainMap& o) const {
    ChainMap out(src, dst);
    for (const auto& [k, r] : src->ranks()) {
        (void)r;
        SparseMat m = component(k) + o.component(k);
        if (!m.is_zero()) out.comp[k] = std::move(m);
    }
    return out;
}

ChainMap ChainMap::operator-(const ChainMap& o) const {
    ChainMap out(src, dst);
    for (const auto& [k, r] : src->ranks()) {
        (void)r;
        SparseMat m = component(k) - o.component(k);
        if (!m.is_zero()) out.comp[k] = std::move(m);
    }
    return out;
}

ChainMap ChainMap::identity(std::shared_ptr<const ChainComplex> c) {
    ChainMap out(c, c);
    for (const auto& [k, r] : c->ranks()) out.comp[k] = SparseMat::identity(r);
    return out;
}

ChainMap ChainMap::zero(std::shared_ptr<const ChainComplex> s,
                        std::shared_ptr<const ChainComplex> d) {
    return ChainMap(std::move(s), std::move(d));
}

// --- constructions ---------------------------------------------------------

ChainComplex zero_complex(RingSpec ring) { return ChainComplex(ring); }

ChainComplex sphere(RingSpec ring, int degree) {
    ChainComplex c(ring);
    c.set_rank(degree, 1);
    return c;
}

ChainComplex direct_sum(const ChainComplex& a, const ChainComplex& b) {
    if (a.ring() != b.ring()) throw ValidationError("direct sum ring mismatch");
    ChainComplex c(a.ring());
    std::map<int, long> ranks;
    for (const auto& [k, r] : a.ranks()) ranks[k] += r;
    for (const auto& [k, r] : b.ranks()) ranks[k] += r;
    for (const auto& [k, r] : ranks) c.set_rank(k, r);
    for (const auto& [k, r] : ranks) {
        (void)r;
        if (c.rank(k - 1) == 0) continue;
        SparseMat d(c.rank(k - 1), c.rank(k));
        SparseMat da = a.diff(k), db = b.diff(k);
        for (long j = 0; j < da.cols(); ++j)
            for (const auto& [i, v] : da.col(j)) d.set(i, j, v);
        for (long j = 0; j < db.cols(); ++j)
            for (const auto& [i, v] : db.col(j)) d.set(a.rank(k - 1) + i, a.rank(k) + j, v);
        c.set_diff(k, std::move(d));
    }
    return c;
}

namespace {
ChainMap block_map(const ChainComplex& a, const ChainComplex& b, bool incl, bool first) {
    ChainComplex sum = direct_sum(a, b);
    const ChainComplex& part = first ? a : b;
    auto ps = share(part);
    auto ss = share(sum);
    ChainMap out = incl ? ChainMap(ps, ss) : ChainMap(ss, ps);
    for (const auto& [k, r] : part.ranks()) {
        long off = first ? 0 : a.rank(k);
        SparseMat m = incl ? SparseMat(sum.rank(k), r) : SparseMat(r, sum.rank(k));
        for (long i = 0; i < r; ++i)
            incl ? m.set(off + i, i, 1) : m.set(i, off + i, 1);
        out.comp[k] = std::move(m);
    }
    return out;
}
}  // namespace

ChainMap inclusion_first(const ChainComplex& a, const ChainComplex& b) {
    return block_map(a, b, true, true);
}
ChainMap inclusion_second(const ChainComplex& a, const ChainComplex& b) {
    return block_map(a, b, true, false);
}
ChainMap projection_first(const ChainComplex& a, const ChainComplex& b) {
    return block_map(a, b, false, true);
}
ChainMap projection_second(const ChainComplex& a, const ChainComplex& b) {
    return block_map(a, b, false, false);
}

namespace {
// Degree layout of a binary tensor product: for each total degree the list of
// (p, q, offset) blocks with p ascending.
struct TensorLayout {
    std::map<int, std::vector<std::tuple<int, int, long>>> blocks;
    std::map<int, long> rank;
};

TensorLayout tensor_layout(const ChainComplex& a, const ChainComplex& b) {
    TensorLayout l;
    for (const auto& [p, ra] : a.ranks())
        for (const auto& [q, rb] : b.ranks()) {
            int n = p + q;
            auto& off = l.rank[n];
            l.blocks[n].emplace_back(p, q, off);
            off += ra * rb;
        }
    return l;
}
}  // namespace

ChainComplex tensor(const ChainComplex& a, const ChainComplex& b) {
    if (a.ring() != b.ring()) throw ValidationError("tensor ring mismatch");
    TensorLayout l = tensor_layout(a, b);
    ChainComplex c(a.ring());
    for (const auto& [n, r] : l.rank) c.set_rank(n, r);
    for (const auto& [n, blocks] : l.blocks) {
        if (c.rank(n - 1) == 0) continue;
        SparseMat d(c.rank(n - 1), c.rank(n));
        auto target = l.blocks.find(n - 1);
        if (target == l.blocks.end()) continue;
        auto offset_of = [&](int p, int q) -> long {
            for (const auto& [tp, tq, off] : target->second)
                if (tp == p && tq == q) return off;
            return -1;
        };
        for (const auto& [p, q, off] : blocks) {
            long rb = b.rank(q);
            SparseMat da = a.diff(p), db = b.diff(q);
            long off_a = offset_of(p - 1, q);  // dx (x) y
            if (off_a >= 0)
                for (long j = 0; j < da.cols(); ++j)
                    for (const auto& [i, v] : da.col(j))
                        for (long y = 0; y < rb; ++y)
                            d.add(off_a + i * rb + y, off + j * rb + y, v);
            long off_b = offset_of(p, q - 1);  // (-1)^p x (x) dy
            if (off_b >= 0) {
                Int sign = (p % 2 == 0) ? 1 : -1;
                long rb1 = b.rank(q - 1);
                for (long x = 0; x < a.rank(p); ++x)
                    for (long j = 0; j < db.cols(); ++j)
                        for (const auto& [i, v] : db.col(j))
                            d.add(off_b + x * rb1 + i, off + x * rb + j, sign * v);
            }
        }
        c.set_diff(n, std::move(d));
    }
    return c;
}

ChainMap tensor_map(const ChainMap& f, const ChainMap& g) {
    ChainComplex src = tensor(*f.src, *g.src);
    ChainComplex dst = tensor(*f.dst, *g.dst);
    TensorLayout ls = tensor_layout(*f.src, *g.src);
    TensorLayout ld = tensor_layout(*f.dst, *g.dst);
    ChainMap out(share(std::move(src)), share(std::move(dst)));
    for (const auto& [n, blocks] : ls.blocks) {
        if (out.dst->rank(n) == 0 || out.src->rank(n) == 0) continue;
        SparseMat m(out.dst->rank(n), out.src->rank(n));
        auto dblocks = ld.blocks.find(n);
        if (dblocks == ld.blocks.end()) continue;
        auto offset_of = [&](int p, int q) -> long {
            for (const auto& [tp, tq, off] : dblocks->second)
                if (tp == p && tq == q) return off;
            return -1;
        };
        for (const auto& [p, q, off] : blocks) {
            long doff = offset_of(p, q);
            if (doff < 0) continue;
            SparseMat fp = f.component(p), gq = g.component(q);
            long rgd = g.dst->rank(q);
            for (long j = 0; j < fp.cols(); ++j)
                for (const auto& [i, fv] : fp.col(j))
                    for (long y = 0; y < gq.cols(); ++y)
                        for (const auto& [x, gv] : gq.col(y))
                            m.add(doff + i * rgd + x, off + j * g.src->rank(q) + y, fv * gv);
        }
        if (!m.is_zero()) out.comp[n] = std::move(m);
    }
    return out;
}

ChainMap tensor_swap(const ChainComplex& a, const ChainComplex& b) {
    TensorLayout lab = tensor_layout(a, b);
    TensorLayout lba = tensor_layout(b, a);
    ChainMap out(share(tensor(a, b)), share(tensor(b, a)));
    for (const auto& [n, blocks] : lab.blocks) {
        SparseMat m(out.dst->rank(n), out.src->rank(n));
        auto dblocks = lba.blocks.find(n);
        auto offset_of = [&](int q, int p) -> long {
            for (const auto& [tq, tp, off] : dblocks->second)
                if (tq == q && tp == p) return off;
            return -1;
        };
        for (const auto& [p, q, off] : blocks) {
            long doff = offset_of(q, p);
            Int sign = (p % 2 != 0 && q % 2 != 0) ? -1 : 1;
            long ra = a.rank(p), rb = b.rank(q);
            for (long x = 0; x < ra; ++x)
                for (long y = 0; y < rb; ++y) m.set(doff + y * ra + x, off + x * rb + y, sign);
        }
        if (!m.is_zero()) out.comp[n] = std::move(m);
    }
    return out;
}

ChainComplex shift(const ChainComplex& c, int j) {
    ChainComplex out(c.ring());
    for (const auto& [k, r] : c.ranks()) out.set_rank(k + j, r);
    Int sign = (j % 2 == 0) ? 1 : -1;
    for (const auto& [k, d] : c.diffs()) out.set_diff(k + j, d.scaled(sign));
    return out;
}

ChainMap shift_map(const ChainMap& f, int j) {
    ChainMap out(share(shift(*f.src, j)), share(shift(*f.dst, j)));
    for (const auto& [k, m] : f.comp) out.comp[k + j] = m;
    return out;
}

ChainComplex cone(const ChainMap& f) {
    f.validate();
    const ChainComplex& a = *f.src;
    const ChainComplex& b = *f.dst;
    ChainComplex c(a.ring());
    std::map<int, long> ranks;
    for (const auto& [k, r] : b.ranks()) ranks[k] += r;
    for (const auto& [k, r] : a.ranks()) ranks[k + 1] += r;
    for (const auto& [k, r] : ranks) c.set_rank(k, r);
    for (const auto& [k, r] : ranks) {
        (void)r;
        if (c.rank(k - 1) == 0) continue;
        SparseMat d(c.rank(k - 1), c.rank(k));
        SparseMat db = b.diff(k);
        for (long j = 0; j < db.cols(); ++j)
            for (const auto& [i, v] : db.col(j)) d.set(i, j, v);
        SparseMat fk = f.component(k - 1);
        for (long j = 0; j < fk.cols(); ++j)
            for (const auto& [i, v] : fk.col(j)) d.set(i, b.rank(k) + j, v);
        SparseMat da = a.diff(k - 1);
        for (long j = 0; j < da.cols(); ++j)
            for (const auto& [i, v] : da.col(j)) d.set(b.rank(k - 1) + i, b.rank(k) + j, -v);
        c.set_diff(k, std::move(d));
    }
    return c;
}

ChainComplex fiber(const ChainMap& f) { return shift(cone(f), -1); }

ChainMap fiber_to_source(const ChainMap& f) {
    ChainMap out(share(fiber(f)), f.src);
    for (const auto& [k, r] : f.src->ranks()) {
        SparseMat m(r, out.src->rank(k));
        long off = f.dst->rank(k + 1);
        for (long i = 0; i < r; ++i) m.set(i, off + i, 1);
        out.comp[k] = std::move(m);
    }
    return out;
}

// --- homology --------------------------------------------------------------

bool HomologyTable::equal_in_range(const HomologyTable& o, int lo, int hi) const {
    for (int k = lo; k <= hi; ++k)
        if (!(at(k) == o.at(k))) return false;
    return true;
}

HomologyTable HomologyTable::restricted(int lo, int hi) const {
    HomologyTable t;
    t.ring = ring;
    for (const auto& [k, e] : entries)
        if (k >= lo && k <= hi) t.entries[k] = e;
    return t;
}

namespace {
// rows >= r of (Vinv * m), the coordinates of m's columns in the kernel basis
SparseMat kernel_coords(const SmithResult& s, const SparseMat& m, int degree) {
    long n = s.cols;
    SparseMat out(n - s.rank, m.cols());
    for (long j = 0; j < m.cols(); ++j) {
        std::map<long, Int> acc;
        for (const auto& [k, v] : m.col(j))
            for (long i = 0; i < n; ++i)
                if (s.Vinv[i][k] != 0) acc[i] += s.Vinv[i][k] * v;
        for (const auto& [i, v] : acc) {
            if (v == 0) continue;
            if (i < s.rank)
                throw ValidationError("image not contained in kernel at degree " +
                                      std::to_string(degree) + " (d^2 != 0)");
            out.set(i - s.rank, j, v);
        }
    }
    return out;
}
}  // namespace

HomologyTable homology(const ChainComplex& c) {
    MorseReduction red = morse_reduce(c);
    const ChainComplex& r = red.reduced();
    HomologyTable table;
    table.ring = c.ring();

    for (const auto& [k, nk] : r.ranks()) {
        SparseMat dk = r.diff(k);
        SparseMat dk1 = r.diff(k + 1);
        HomologyEntry e;
        switch (c.ring().kind) {
            case RingSpec::Kind::Q:
                e.rank = nk - rank_over_Q(dk) - rank_over_Q(dk1);
                break;
            case RingSpec::Kind::Fp:
                e.rank = nk - rank_mod_p(dk, c.ring().p) - rank_mod_p(dk1, c.ring().p);
                break;
            case RingSpec::Kind::Z: {
                SmithResult s = smith_normal_form(dk, true);
                SparseMat b = kernel_coords(s, dk1, k);
                SmithResult sb = smith_normal_form(b, false);
                e.rank = (nk - s.rank) - sb.rank;
                for (const auto& d : sb.diag)
                    if (d > 1) e.torsion.push_back(d);
                break;
            }
        }
        if (!e.trivial()) table.entries[k] = std::move(e);
    }
    return table;
}

bool is_acyclic(const ChainComplex& c) { return homology(c).is_trivial(); }

bool is_quasi_iso(const ChainMap& f) { return is_acyclic(cone(f)); }

Connectivity connectivity(const ChainMap& f) {
    HomologyTable h = homology(cone(f));
    if (h.is_trivial()) return {true, 0};
    return {false, h.entries.begin()->first - 1};
}

// --- random complexes ------------------------------------------------------

ChainComplex random_complex(RingSpec ring, std::mt19937_64& rng, int lo_degree, int hi_degree,
                            long max_rank_per_degree) {
    ChainComplex c(ring);
    std::uniform_int_distribution<int> pick(0, 3);
    std::uniform_int_distribution<int> tor(2, 4);
    for (int k = lo_degree; k <= hi_degree; ++k) {
        int spheres = pick(rng) % 2;
        for (int i = 0; i < spheres; ++i) c = direct_sum(c, sphere(ring, k));
        if (k > lo_degree && pick(rng) == 0) {
            // disk: rank 1 in degrees k, k-1 with d = m (torsion Z/m over Z)
            ChainComplex disk(ring);
            disk.set_rank(k, 1);
            disk.set_rank(k - 1, 1);
            SparseMat d(1, 1);
            d.set(0, 0, Int(tor(rng)));
            disk.set_diff(k, std::move(d));
            c = direct_sum(c, disk);
        }
        if (c.rank(k) > max_rank_per_degree) break;
    }
    if (c.empty()) c = sphere(ring, lo_degree);

    // unimodular change of basis: new basis e_i += lambda e_j in one degree
    std::uniform_int_distribution<int> lam(-2, 2);
    for (int step = 0; step < 12; ++step) {
        std::vector<int> degs;
        for (const auto& [k, r] : c.ranks())
            if (r >= 2) degs.push_back(k);
        if (degs.empty()) break;
        int k = degs[rng() % degs.size()];
        long r = c.rank(k);
        long i = (long)(rng() % r), j = (long)(rng() % r);
        if (i == j) continue;
        Int l = lam(rng);
        if (l == 0) continue;
        // d_k: col_i += l * col_j ; d_{k+1}: row_j -= l * row_i
        SparseMat dk = c.diff(k);
        auto cj = dk.col(j);
        for (const auto& [row, v] : cj) dk.add(row, i, l * v);
        c.set_diff(k, std::move(dk));
        SparseMat dk1 = c.diff(k + 1);
        SparseMat dk1t = dk1.transpose();
        for (const auto& [colidx, v] : dk1t.col(i)) dk1.add(j, colidx, -l * v);
        c.set_diff(k + 1, std::move(dk1));
    }
    return c;
}

}  // namespace fcalc
