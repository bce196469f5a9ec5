#include "fcalc/calculus.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fcalc/basis.hpp"
#include "fcalc/smith.hpp"

namespace fcalc {

namespace {

constexpr long kSat = 1l << 60;
constexpr long kPosetCap = 5000;

long sat_add(long a, long b) { return (a > kSat - b) ? kSat : a + b; }
long sat_mul(long a, long b) {
    if (a == 0 || b == 0) return 0;
    if (a > kSat / b) return kSat;
    return a * b;
}

// Window of `window` consecutive degrees centered (floor convention) on the
// support of a homology table; [-w/2, -w/2 + w - 1] when the table is empty.
std::pair<int, int> frozen_window(const HomologyTable& t, int window) {
    if (window < 1) window = 1;
    int center = 0;
    if (!t.entries.empty()) {
        int sum = t.entries.begin()->first + t.entries.rbegin()->first;
        center = sum >= 0 ? sum / 2 : -((-sum + 1) / 2);
    }
    int lo = center - window / 2;
    return {lo, lo + window - 1};
}

HomologyTable reindexed(const HomologyTable& t, int shift) {
    HomologyTable out;
    out.ring = t.ring;
    for (const auto& [k, e] : t.entries) out.entries[k + shift] = e;
    return out;
}

long mat_rank(const SparseMat& m, const RingSpec& ring) {
    if (m.rows() == 0 || m.cols() == 0) return 0;
    if (ring.kind == RingSpec::Kind::Fp) return rank_mod_p(m, ring.p);
    return rank_over_Q(m);
}

ChainMap rewire(ChainMap m, std::shared_ptr<const ChainComplex> s,
                std::shared_ptr<const ChainComplex> d) {
    ChainMap out(std::move(s), std::move(d));
    out.comp = std::move(m.comp);
    return out;
}

// --- input-slot permutations on the sum cube ---------------------------------

unsigned mask_image(unsigned t, const Perm& pi) {
    unsigned out = 0;
    for (int s = 1; s <= static_cast<int>(pi.size()); ++s)
        if (t & (1u << (s - 1))) out |= 1u << pi[s - 1];
    return out;
}

// Sign of sorting (pi(t_1), ..., pi(t_m)) where t_1 < ... < t_m are the
// directions in t: the suspension coordinates of the total fiber block get
// reordered by exactly this permutation.
int block_sign(unsigned t, const Perm& pi) {
    std::vector<int> img;
    for (int s = 1; s <= static_cast<int>(pi.size()); ++s)
        if (t & (1u << (s - 1))) img.push_back(pi[s - 1]);
    int inv = 0;
    for (size_t i = 0; i < img.size(); ++i)
        for (size_t j = i + 1; j < img.size(); ++j)
            if (img[i] > img[j]) ++inv;
    return inv % 2 == 0 ? 1 : -1;
}

// X(T) -> X(pi T): the direct-sum shuffle sending the summand for slot s to
// the summand for slot pi(s).  Plain block moves, no signs.
ChainMap summand_shuffle(const CubeDiagram& sc, unsigned t, unsigned ti, const Perm& pi,
                         const ChainComplex& x) {
    int n = static_cast<int>(pi.size());
    std::vector<int> src_list, dst_list;
    for (int s = 1; s <= n; ++s)
        if (!(t & (1u << (s - 1)))) src_list.push_back(s);
    for (int s = 1; s <= n; ++s)
        if (!(ti & (1u << (s - 1)))) dst_list.push_back(s);
    std::map<int, long> dstpos;
    for (size_t i = 0; i < dst_list.size(); ++i) dstpos[dst_list[i]] = static_cast<long>(i);
    ChainMap m(sc.vertex_ptr(t), sc.vertex_ptr(ti));
    for (const auto& [k, r] : x.ranks()) {
        SparseMat mk(r * static_cast<long>(dst_list.size()), r * static_cast<long>(src_list.size()));
        for (size_t a = 0; a < src_list.size(); ++a) {
            long b = dstpos.at(pi[src_list[a] - 1] + 1);
            for (long i = 0; i < r; ++i) mk.add(b * r + i, static_cast<long>(a) * r + i, 1);
        }
        m.set_component(k, mk);
    }
    return m;
}

// --- the flattened tower poset ------------------------------------------------

// Elements of (nonempty subsets of {1..n+1})^i, encoded with the mask of the
// j-th slot as digit j (least significant first) in base 2^{n+1}-1.
struct FlatShape {
    int n = 0, iter = 0;
    long base = 0, count = 0;
};

FlatShape flat_shape(int n, int iter) {
    FlatShape s;
    s.n = n;
    s.iter = iter;
    s.base = (1l << (n + 1)) - 1;
    s.count = 1;
    for (int j = 0; j < iter; ++j) s.count = sat_mul(s.count, s.base);
    return s;
}

std::vector<unsigned> flat_masks(const FlatShape& s, long e) {
    std::vector<unsigned> m(s.iter);
    for (int j = 0; j < s.iter; ++j) {
        m[j] = static_cast<unsigned>(e % s.base) + 1;
        e /= s.base;
    }
    return m;
}

bool flat_leq(const FlatShape& s, long a, long b) {
    for (int j = 0; j < s.iter; ++j) {
        unsigned ma = static_cast<unsigned>(a % s.base) + 1;
        unsigned mb = static_cast<unsigned>(b % s.base) + 1;
        if ((ma & mb) != ma) return false;
        a /= s.base;
        b /= s.base;
    }
    return true;
}

// Reduced homology of the discrete set U, shifted into degree 1: rank |U|-1,
// basis u - max(U) for u in U \ max(U), ascending.
ChainComplex stilde(RingSpec ring, unsigned mask) {
    ChainComplex c(ring);
    int sz = std::popcount(mask);
    if (sz > 1) c.set_rank(1, sz - 1);
    return c;
}

ChainMap stilde_inclusion(RingSpec ring, unsigned u, unsigned v) {
    if ((u & v) != u) throw ValidationError("stilde_inclusion: subsets do not nest");
    auto s = share(stilde(ring, u));
    auto d = share(stilde(ring, v));
    ChainMap f(s, d);
    std::vector<int> ue, ve;
    for (int e = 0; e < 32; ++e) {
        if (u & (1u << e)) ue.push_back(e);
        if (v & (1u << e)) ve.push_back(e);
    }
    if (ue.size() <= 1) return f;
    int umax = ue.back(), vmax = ve.back();
    std::map<int, long> vrow;
    long r = 0;
    for (int e : ve)
        if (e != vmax) vrow[e] = r++;
    SparseMat m(static_cast<long>(ve.size()) - 1, static_cast<long>(ue.size()) - 1);
    long c = 0;
    for (int e : ue) {
        if (e == umax) continue;
        m.add(vrow.at(e), c, 1);
        if (umax != vmax) m.add(vrow.at(umax), c, -1);
        ++c;
    }
    f.set_component(1, m);
    return f;
}

// The number of generators poset_holim would assemble for this stage: one
// copy of F(Y_v) per ascending chain ending at v.  Saturating arithmetic;
// F is evaluated once per multiset of subset sizes.
long flat_blockgens(const FlatShape& s, const Functor& f, const ChainComplex& x) {
    std::vector<long> chains(static_cast<size_t>(s.count));
    std::map<std::vector<int>, long> rank_memo;
    long total = 0;
    for (long v = 0; v < s.count; ++v) {
        long ch = 1;
        for (long u = 0; u < v; ++u)
            if (flat_leq(s, u, v)) ch = sat_add(ch, chains[static_cast<size_t>(u)]);
        chains[static_cast<size_t>(v)] = ch;
        std::vector<int> sizes;
        for (unsigned m : flat_masks(s, v)) sizes.push_back(std::popcount(m));
        std::sort(sizes.begin(), sizes.end());
        auto it = rank_memo.find(sizes);
        long r;
        if (it != rank_memo.end()) {
            r = it->second;
        } else {
            ChainComplex y = x;
            for (int sz : sizes) y = tensor(y, stilde(x.ring(), (1u << sz) - 1));
            r = f.at(y).total_rank();
            rank_memo[sizes] = r;
        }
        total = sat_add(total, sat_mul(ch, r));
    }
    return total;
}

// First iteration from which the windowed entry at degree k already equals
// its final value and stays there.
int stable_from(const TowerReport& tr, int k) {
    int s = tr.iterations_used;
    for (int i = tr.iterations_used; i >= 1; --i) {
        if (tr.tables[static_cast<size_t>(i)].at(k) == tr.final_table.at(k))
            s = i;
        else
            break;
    }
    return s;
}

bool window_has_torsion(const HomologyTable& t, int lo, int hi) {
    for (const auto& [k, e] : t.entries)
        if (k >= lo && k <= hi && !e.torsion.empty()) return true;
    return false;
}

}  // namespace

// --- cross effects -----------------------------------------------------------

CrossEffect cross_effect(const Functor& f, int n, const std::vector<ChainComplex>& inputs,
                         const Options& opt) {
    if (n < 1) throw ValidationError("cross_effect: n must be >= 1");
    if (static_cast<int>(inputs.size()) != n)
        throw ValidationError("cross_effect: expected " + std::to_string(n) + " inputs, got " +
                              std::to_string(inputs.size()));
    CrossEffect ce;
    ce.n = n;
    ce.inputs = inputs;
    ce.cube = apply_to_cube(f, sum_cube(inputs));
    ce.total = total_fiber(ce.cube, opt);
    return ce;
}

ChainMap cross_effect_action(const Functor& f, const CrossEffect& ce, const Perm& pi,
                             const Options& opt) {
    (void)opt;
    int n = ce.n;
    if (static_cast<int>(pi.size()) != n || !is_permutation(pi))
        throw ValidationError("cross_effect_action: pi must be a permutation of the input slots");
    for (int i = 1; i < n; ++i)
        if (!(ce.inputs[static_cast<size_t>(i)] == ce.inputs[0]))
            throw ValidationError("cross_effect_action: all inputs must coincide");
    CubeDiagram sc = sum_cube(ce.inputs);
    unsigned vc = 1u << n;
    std::vector<ChainMap> fs(vc);
    for (unsigned t = 0; t < vc; ++t)
        fs[t] = f.map(summand_shuffle(sc, t, mask_image(t, pi), pi, ce.inputs[0]));
    auto cptr = share(ce.total.complex);
    ChainMap a(cptr, cptr);
    for (const auto& [k, blocks] : ce.total.layout.at) {
        long rk = ce.total.complex.rank(k);
        if (rk == 0) continue;
        SparseMat mk(rk, rk);
        for (const TotalLayout::Block& blk : blocks) {
            unsigned ti = mask_image(blk.mask, pi);
            auto [toff, trank] = ce.total.layout.find(k, ti);
            if (trank == 0) continue;
            int sgn = block_sign(blk.mask, pi);
            SparseMat comp = fs[blk.mask].component(blk.internal);
            for (long j = 0; j < comp.cols(); ++j)
                for (const auto& [r, v] : comp.col(j))
                    mk.add(toff + r, blk.offset + j, sgn < 0 ? Int(-v) : v);
        }
        if (!mk.is_zero()) a.set_component(k, std::move(mk));
    }
    return a;
}

// --- multilinearization ------------------------------------------------------

MultilinearizeResult multilinearize(const Functor& f, int n,
                                    const std::vector<ChainComplex>& inputs, const Options& opt,
                                    const std::vector<bool>& suspend) {
    if (n < 1) throw ValidationError("multilinearize: n must be >= 1");
    if (static_cast<int>(inputs.size()) != n)
        throw ValidationError("multilinearize: expected " + std::to_string(n) + " inputs");
    std::vector<bool> sus = suspend.empty() ? std::vector<bool>(static_cast<size_t>(n), true)
                                            : suspend;
    if (static_cast<int>(sus.size()) != n)
        throw ValidationError("multilinearize: suspension flags must match the arity");
    int m = static_cast<int>(std::count(sus.begin(), sus.end(), true));
    if (m == 0) throw ValidationError("multilinearize: at least one slot must be suspended");

    MultilinearizeResult res;
    CrossEffect prev_stage;
    HomologyTable prev_table;
    bool have_prev = false;
    for (int level = 0; level <= opt.cap; ++level) {
        std::vector<ChainComplex> xs;
        xs.reserve(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i)
            xs.push_back(sus[static_cast<size_t>(i)] ? shift(inputs[static_cast<size_t>(i)], level)
                                                     : inputs[static_cast<size_t>(i)]);
        CrossEffect ce = cross_effect(f, n, xs, opt);
        HomologyTable shifted = reindexed(homology(ce.total.complex), -m * level);
        if (level == 0) {
            auto [lo, hi] = frozen_window(shifted, opt.window);
            res.window_lo = lo;
            res.window_hi = hi;
        }
        HomologyTable win = shifted.restricted(res.window_lo, res.window_hi);
        res.tables.push_back(win);
        if (have_prev && win == prev_table) {
            res.stabilized = true;
            res.level = level - 1;
            res.shift = -m * (level - 1);
            res.stage = std::move(prev_stage);
            res.complex = shift(res.stage.total.complex, res.shift);
            res.note = "windowed homology agreed at suspension levels " +
                       std::to_string(level - 1) + " and " + std::to_string(level);
            return res;
        }
        prev_stage = std::move(ce);
        prev_table = std::move(win);
        have_prev = true;
    }
    res.stabilized = false;
    res.level = opt.cap;
    res.shift = -m * opt.cap;
    res.stage = std::move(prev_stage);
    res.complex = shift(res.stage.total.complex, res.shift);
    res.note = "no two consecutive suspension levels agreed within the cap";
    return res;
}

// --- Taylor tower ------------------------------------------------------------

TaylorT taylor_T(const Functor& f, int n, const ChainComplex& x, const Options& opt) {
    if (n < 0) throw ValidationError("taylor_T: n must be >= 0");
    CubeDiagram jc = join_cube(x, n, opt);
    CubeDiagram fc = apply_to_cube(f, jc);
    TaylorT out{punctured_holim(fc, opt), ChainMap()};
    long m = (1l << (n + 1)) - 1;
    std::vector<ChainMap> incl;
    incl.reserve(static_cast<size_t>(m));
    for (long a = 0; a < m; ++a)
        incl.push_back(f.map(join_inclusion(jc, static_cast<unsigned>(a + 1))));
    ChainMap t(fc.vertex_ptr(0), share(out.holim.complex));
    const ChainComplex& src = fc.vertex(0);
    for (const auto& [k, blocks] : out.holim.layout.at) {
        if (out.holim.complex.rank(k) == 0 || src.rank(k) == 0) continue;
        SparseMat mk(out.holim.complex.rank(k), src.rank(k));
        for (const HolimLayout::Block& blk : blocks) {
            if (out.holim.chains[static_cast<size_t>(blk.chain)].size() != 1) continue;
            long a = out.holim.chains[static_cast<size_t>(blk.chain)][0];
            SparseMat comp = incl[static_cast<size_t>(a)].component(blk.internal);
            for (long j = 0; j < comp.cols(); ++j)
                for (const auto& [r, v] : comp.col(j)) mk.add(blk.offset + r, j, v);
        }
        if (!mk.is_zero()) t.set_component(k, std::move(mk));
    }
    out.t = std::move(t);
    return out;
}

TowerStage taylor_stage(const Functor& f, int n, int iteration, const ChainComplex& x,
                        const Options& opt) {
    if (n < 0) throw ValidationError("taylor_stage: n must be >= 0");
    if (iteration < 1) throw ValidationError("taylor_stage: iteration must be >= 1");
    FlatShape s = flat_shape(n, iteration);
    if (s.count > kPosetCap)
        throw BudgetError("taylor_stage: stage poset for n=" + std::to_string(n) + ", i=" +
                          std::to_string(iteration) + " has " + std::to_string(s.count) +
                          " elements (cap " + std::to_string(kPosetCap) + ")");
    check_budget(flat_blockgens(s, f, x), opt.budget, "taylor_stage");
    RingSpec ring = x.ring();
    PosetDiagram pd(s.count, ring);
    std::vector<std::vector<unsigned>> masks(static_cast<size_t>(s.count));
    for (long v = 0; v < s.count; ++v) {
        masks[static_cast<size_t>(v)] = flat_masks(s, v);
        ChainComplex y = x;
        for (unsigned msk : masks[static_cast<size_t>(v)]) y = tensor(y, stilde(ring, msk));
        pd.set_value(v, f.at(y));
    }
    auto xp = share(x);
    for (long a = 0; a < s.count; ++a)
        for (long b = 0; b < s.count; ++b) {
            if (a == b || !flat_leq(s, a, b)) continue;
            pd.set_less(a, b);
            ChainMap acc = ChainMap::identity(xp);
            for (int j = 0; j < s.iter; ++j)
                acc = tensor_map(acc, stilde_inclusion(ring, masks[static_cast<size_t>(a)][static_cast<size_t>(j)],
                                                       masks[static_cast<size_t>(b)][static_cast<size_t>(j)]));
            pd.set_edge(a, b, rewire(f.map(acc), pd.value_ptr(a), pd.value_ptr(b)));
        }
    TowerStage st;
    st.n = n;
    st.iteration = iteration;
    st.holim = poset_holim(pd, opt);
    return st;
}

ChainMap taylor_stage_map(const Functor& f, const TowerStage& src, const TowerStage& dst,
                          const ChainMap& g, const Options& opt) {
    (void)opt;
    if (src.n != dst.n || src.iteration != dst.iteration)
        throw ValidationError("taylor_stage_map: the stages have different shapes");
    if (!g.src || !g.dst) throw ValidationError("taylor_stage_map: unset map endpoints");
    FlatShape s = flat_shape(src.n, src.iteration);
    RingSpec ring = g.src->ring();
    std::vector<ChainMap> vw;
    vw.reserve(static_cast<size_t>(s.count));
    for (long v = 0; v < s.count; ++v) {
        ChainMap acc = g;
        for (unsigned msk : flat_masks(s, v))
            acc = tensor_map(acc, ChainMap::identity(share(stilde(ring, msk))));
        vw.push_back(f.map(acc));
    }
    return holim_map(src.holim, dst.holim, vw);
}

ChainMap tower_restriction(const TowerStage& upper, const TowerStage& lower) {
    if (upper.iteration != lower.iteration)
        throw ValidationError("tower_restriction: the stages have different iterations");
    if (upper.n != lower.n + 1)
        throw ValidationError("tower_restriction: expected stages for n and n-1");
    FlatShape su = flat_shape(upper.n, upper.iteration);
    FlatShape sl = flat_shape(lower.n, lower.iteration);
    std::vector<long> emap(static_cast<size_t>(sl.count));
    for (long e = 0; e < sl.count; ++e) {
        auto masks = flat_masks(sl, e);
        long big = 0;
        for (int j = sl.iter - 1; j >= 0; --j)
            big = big * su.base + (static_cast<long>(masks[static_cast<size_t>(j)]) - 1);
        emap[static_cast<size_t>(e)] = big;
    }
    return holim_restriction(upper.holim, lower.holim, emap);
}

TowerReport taylor_P(const Functor& f, int n, const ChainComplex& x, int i_max,
                     const Options& opt) {
    if (n < 0) throw ValidationError("taylor_P: n must be >= 0");
    if (i_max < 1) throw ValidationError("taylor_P: i_max must be >= 1");
    TowerReport rep;
    rep.n = n;
    HomologyTable h0 = homology(f.at(x));
    auto [lo, hi] = frozen_window(h0, opt.window);
    rep.window_lo = lo;
    rep.window_hi = hi;
    rep.tables.push_back(h0.restricted(lo, hi));
    rep.final_table = rep.tables.back();
    for (int i = 1; i <= i_max; ++i) {
        TowerStage st;
        try {
            st = taylor_stage(f, n, i, x, opt);
        } catch (const BudgetError& e) {
            rep.verdict = TowerVerdict::BudgetExhausted;
            rep.note = e.what();
            rep.final_table = rep.tables.back();
            return rep;
        }
        HomologyTable t = homology(st.holim.complex).restricted(lo, hi);
        rep.tables.push_back(t);
        rep.iterations_used = i;
        if (i >= 2 && t == rep.tables[static_cast<size_t>(i - 1)]) {
            rep.verdict = TowerVerdict::Stabilized;
            rep.certified_iteration = i - 1;
            rep.final_table = t;
            rep.stabilized_to_zero = t.is_trivial();
            rep.note = "windowed homology tables agree at iterations " + std::to_string(i - 1) +
                       " and " + std::to_string(i);
            return rep;
        }
        rep.final_table = t;
    }
    rep.verdict = TowerVerdict::CapExhausted;
    rep.note = "no two consecutive stage tables agreed within the iteration cap";
    return rep;
}

// --- layers ------------------------------------------------------------------

Layer layer_D(const Functor& f, int n, const ChainComplex& x, int i_max, const Options& opt) {
    if (n < 1) throw ValidationError("layer_D: n must be >= 1");
    Layer L;
    L.n = n;
    L.upper = taylor_P(f, n, x, i_max, opt);
    L.lower = taylor_P(f, n - 1, x, i_max, opt);
    RingSpec ring = x.ring();
    L.window_lo = L.upper.window_lo;
    int thi = L.upper.window_hi;
    L.window_hi = thi - 1;
    std::ostringstream note;

    bool towers_ok = L.upper.verdict == TowerVerdict::Stabilized &&
                     L.lower.verdict == TowerVerdict::Stabilized;
    if (!towers_ok) note << "a tower did not stabilize, so no layer table is certified; ";
    if (window_has_torsion(L.upper.final_table, L.window_lo, thi) ||
        window_has_torsion(L.lower.final_table, L.window_lo, thi))
        note << "tower tables carry torsion, the layer table reports free ranks only; ";

    // Degrees where the homology of the restriction map can be nonzero.
    std::set<int> need;
    if (towers_ok)
        for (int k = L.window_lo; k <= thi; ++k)
            if (L.upper.final_table.rank_at(k) > 0 && L.lower.final_table.rank_at(k) > 0)
                need.insert(k);
    std::map<int, long> rk;
    bool rcert = towers_ok;
    if (!need.empty()) {
        int jq = 1;
        for (int k : need)
            jq = std::max({jq, stable_from(L.upper, k), stable_from(L.lower, k)});
        try {
            TowerStage u1 = taylor_stage(f, n, jq, x, opt);
            TowerStage u2 = taylor_stage(f, n, jq + 1, x, opt);
            TowerStage l1 = taylor_stage(f, n - 1, jq, x, opt);
            TowerStage l2 = taylor_stage(f, n - 1, jq + 1, x, opt);
            ChainMap q1 = tower_restriction(u1, l1);
            ChainMap q2 = tower_restriction(u2, l2);
            HomologyClasses hu1(u1.holim.complex), hl1(l1.holim.complex);
            HomologyClasses hu2(u2.holim.complex), hl2(l2.holim.complex);
            for (int k : need) {
                long r1 = mat_rank(HomologyClasses::induced(hu1, hl1, q1, k), ring);
                long r2 = mat_rank(HomologyClasses::induced(hu2, hl2, q2, k), ring);
                if (r1 == r2) {
                    rk[k] = r1;
                } else {
                    rcert = false;
                    note << "restriction rank at degree " << k << " differs between iterations "
                         << jq << " and " << jq + 1 << "; ";
                }
            }
            L.complex = fiber(q2);
            L.iteration = jq + 1;
        } catch (const BudgetError& e) {
            rcert = false;
            note << e.what() << "; ";
        }
    } else {
        int start = i_max;
        if (towers_ok)
            start = std::min(i_max, std::max(L.upper.certified_iteration,
                                             L.lower.certified_iteration) + 1);
        for (int j = start; j >= 1; --j) {
            try {
                TowerStage uj = taylor_stage(f, n, j, x, opt);
                TowerStage lj = taylor_stage(f, n - 1, j, x, opt);
                L.complex = fiber(tower_restriction(uj, lj));
                L.iteration = j;
                break;
            } catch (const BudgetError&) {
                continue;
            }
        }
        if (L.iteration < 0) note << "no stage fit the budget for a witness fiber; ";
    }

    bool consistent = true;
    HomologyTable lt;
    lt.ring = ring;
    if (towers_ok && rcert) {
        for (int k = L.window_lo; k <= L.window_hi; ++k) {
            long up_k = L.upper.final_table.rank_at(k);
            long low_k1 = L.lower.final_table.rank_at(k + 1);
            long rkk = rk.count(k) ? rk[k] : 0;
            long rk1 = rk.count(k + 1) ? rk[k + 1] : 0;
            long v = (up_k - rkk) + (low_k1 - rk1);
            if (v < 0) {
                consistent = false;
                note << "negative rank at degree " << k << " in the fiber-sequence arithmetic; ";
                v = 0;
            }
            if (v > 0) lt.entries[k].rank = v;
        }
    }
    L.table = lt;
    L.certified = towers_ok && rcert && consistent;
    L.note = note.str();
    return L;
}

std::string LayerFunctor::name() const {
    return "layer(" + f_.name() + ", n=" + std::to_string(n_) + ", i=" + std::to_string(iter_) +
           ")";
}

ChainComplex LayerFunctor::at(const ChainComplex& x) const {
    TowerStage up = taylor_stage(f_, n_, iter_, x, opt_);
    TowerStage low = taylor_stage(f_, n_ - 1, iter_, x, opt_);
    return fiber(tower_restriction(up, low));
}

ChainMap LayerFunctor::map(const ChainMap& g) const {
    if (!g.src || !g.dst) throw ValidationError("LayerFunctor: unset map endpoints");
    TowerStage ups = taylor_stage(f_, n_, iter_, *g.src, opt_);
    TowerStage upd = taylor_stage(f_, n_, iter_, *g.dst, opt_);
    TowerStage lows = taylor_stage(f_, n_ - 1, iter_, *g.src, opt_);
    TowerStage lowd = taylor_stage(f_, n_ - 1, iter_, *g.dst, opt_);
    ChainMap qs = tower_restriction(ups, lows);
    ChainMap qd = tower_restriction(upd, lowd);
    ChainMap u = taylor_stage_map(f_, ups, upd, g, opt_);
    ChainMap v = taylor_stage_map(f_, lows, lowd, g, opt_);
    return fiber_map(qs, qd, u, v);
}

// --- derivatives -------------------------------------------------------------

LayerCoefficient layer_coefficient(const Functor& f, int n, RingSpec ring, const Options& opt) {
    if (n < 1) throw ValidationError("layer_coefficient: n must be >= 1");
    std::vector<ChainComplex> inputs(static_cast<size_t>(n), sphere(ring, 0));
    MultilinearizeResult ml = multilinearize(f, n, inputs, opt);
    LayerCoefficient lc;
    lc.stabilized = ml.stabilized;
    lc.level = ml.level;
    lc.window_lo = ml.window_lo;
    lc.window_hi = ml.window_hi;
    lc.homology = ml.tables.at(static_cast<size_t>(ml.level));

    Representation rep;
    rep.n = n;
    rep.space = ChainComplex(ring);
    HomologyClasses hc(ml.stage.total.complex);
    int stage_shift = n * ml.level;  // reported degree d lives at stage degree d + shift
    for (int d = lc.window_lo; d <= lc.window_hi; ++d) {
        long r = hc.basis_rank(d + stage_shift);
        if (r > 0) rep.space.set_rank(d, r);
    }
    if (n >= 2 && !rep.space.empty()) {
        const Perm tg = transposition_gen(n);
        const Perm cg = full_cycle_gen(n);
        for (int which = 0; which < 2; ++which) {
            const Perm& g = which == 0 ? tg : cg;
            ChainMap a = cross_effect_action(f, ml.stage, g, opt);
            bool flip = perm_sign(g) < 0 && ml.level % 2 == 1;
            for (const auto& [d, r] : rep.space.ranks()) {
                (void)r;
                SparseMat m = HomologyClasses::induced(hc, hc, a, d + stage_shift);
                if (flip) m = m.negated();
                (which == 0 ? rep.act_t : rep.act_c)[d] = std::move(m);
            }
        }
    }
    lc.rep = std::move(rep);
    return lc;
}

// --- classification checks ---------------------------------------------------

namespace {

// C (x) X^{(x)n} with the diagonal action: the coefficient action tensored
// with the graded slot permutation.
ChainMap diag_action(const Representation& c_rep, const ChainComplex& x, int n, const Perm& g) {
    auto cs = share(c_rep.space);
    ChainMap cm(cs, cs);
    for (const auto& [k, r] : c_rep.space.ranks()) {
        (void)r;
        cm.set_component(k, c_rep.action(k, g));
    }
    return tensor_map(cm, tensor_permutation(x, n, g));
}

}  // namespace

DeltaResult delta_n(const Representation& c_rep, int n, const ChainComplex& x, int degree_cap,
                    const Options& opt) {
    if (n < 1) throw ValidationError("delta_n: n must be >= 1");
    if (c_rep.n != n)
        throw ValidationError("delta_n: the coefficient representation is for the wrong group");
    RingSpec ring = x.ring();
    if (c_rep.space.ring() != ring)
        throw ValidationError("delta_n: coefficient and input rings differ");
    ChainComplex m = tensor(c_rep.space, tensor_power_complex(x, n));
    if (n == 1 || m.empty()) return {m, m.max_degree(), true};

    if (ring.kind == RingSpec::Kind::Q) {
        // Strict coinvariants, exact over the rationals: quotient each degree
        // by the column span of [A_t - I | A_c - I] (generator relations
        // suffice), with the quotient basis read off the Smith transform.
        ChainMap at = diag_action(c_rep, x, n, transposition_gen(n));
        ChainMap ac = diag_action(c_rep, x, n, full_cycle_gen(n));
        std::map<int, SmithResult> snf;
        std::map<int, long> qrank;
        for (const auto& [k, r] : m.ranks()) {
            SparseMat rel(r, 2 * r);
            SparseMat mt = at.component(k), mc = ac.component(k);
            for (long j = 0; j < r; ++j) {
                for (const auto& [rr, v] : mt.col(j)) rel.add(rr, j, v);
                rel.add(j, j, -1);
                for (const auto& [rr, v] : mc.col(j)) rel.add(rr, r + j, v);
                rel.add(j, r + j, -1);
            }
            snf[k] = smith_normal_form(rel, true);
            qrank[k] = r - snf[k].rank;
        }
        ChainComplex qc(ring);
        for (const auto& [k, qr] : qrank)
            if (qr > 0) qc.set_rank(k, qr);
        for (const auto& [k, qr] : qrank) {
            if (qr == 0) continue;
            auto below = qrank.find(k - 1);
            if (below == qrank.end() || below->second == 0) continue;
            long r = m.rank(k), rb = m.rank(k - 1);
            long cut = snf[k].rank, cutb = snf[k - 1].rank;
            DenseMat lift(static_cast<size_t>(r), std::vector<Int>(static_cast<size_t>(qr)));
            for (long i = 0; i < r; ++i)
                for (long j = 0; j < qr; ++j)
                    lift[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                        snf[k].Uinv[static_cast<size_t>(i)][static_cast<size_t>(cut + j)];
            DenseMat p = dense_mul(dense_mul(snf[k - 1].U, m.diff(k).to_dense()), lift);
            SparseMat d(below->second, qr);
            for (long i = 0; i < below->second; ++i)
                for (long j = 0; j < qr; ++j)
                    d.add(i, j, p[static_cast<size_t>(cutb + i)][static_cast<size_t>(j)]);
            if (!d.is_zero()) qc.set_diff(k, std::move(d));
            (void)rb;
        }
        qc.validate();
        return {qc, qc.empty() ? degree_cap : qc.max_degree(), true};
    }

    // Bar construction for the homotopy orbits, truncated one step past the
    // certified range: blocks G^{(x)p} (x) M_q for all p + q <= degree_cap + 1.
    int bot = m.min_degree(), top = m.max_degree();
    if (degree_cap < bot)
        throw ValidationError("delta_n: degree_cap lies below the module, nothing is certified");
    const std::vector<Perm> perms = all_perms(n);
    const long K = static_cast<long>(perms.size());
    std::map<Perm, long> pidx;
    for (long i = 0; i < K; ++i) pidx[perms[static_cast<size_t>(i)]] = i;
    std::vector<std::vector<long>> mul(static_cast<size_t>(K), std::vector<long>(static_cast<size_t>(K)));
    for (long i = 0; i < K; ++i)
        for (long j = 0; j < K; ++j)
            mul[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                pidx.at(perm_compose(perms[static_cast<size_t>(i)], perms[static_cast<size_t>(j)]));
    std::vector<ChainMap> acts;
    acts.reserve(static_cast<size_t>(K));
    for (long i = 0; i < K; ++i) acts.push_back(diag_action(c_rep, x, n, perms[static_cast<size_t>(i)]));

    int dmax = degree_cap + 1;
    struct BarBlock {
        int p = 0, q = 0;
        long offset = 0, tuples = 0, mrank = 0;
    };
    std::map<int, std::vector<BarBlock>> layout;
    long total = 0;
    for (int d = bot; d <= dmax; ++d) {
        long off = 0;
        for (int p = std::max(0, d - top); p <= d - bot; ++p) {
            int q = d - p;
            long mr = m.rank(q);
            if (mr == 0) continue;
            long tuples = 1;
            for (int j = 0; j < p; ++j) tuples = sat_mul(tuples, K);
            BarBlock b{p, q, off, tuples, mr};
            long sz = sat_mul(tuples, mr);
            off = sat_add(off, sz);
            total = sat_add(total, sz);
            layout[d].push_back(b);
        }
    }
    check_budget(total, opt.budget, "delta_n bar complex");

    ChainComplex bar(ring);
    for (const auto& [d, blocks] : layout) {
        long r = 0;
        for (const BarBlock& b : blocks) r += b.tuples * b.mrank;
        if (r > 0) bar.set_rank(d, r);
    }
    auto block_of = [&](int d, int p) -> const BarBlock* {
        auto it = layout.find(d);
        if (it == layout.end()) return nullptr;
        for (const BarBlock& b : it->second)
            if (b.p == p) return &b;
        return nullptr;
    };
    for (const auto& [d, blocks] : layout) {
        if (bar.rank(d - 1) == 0 || bar.rank(d) == 0) continue;
        SparseMat dd(bar.rank(d - 1), bar.rank(d));
        for (const BarBlock& b : blocks) {
            std::vector<long> digits(static_cast<size_t>(b.p));
            for (long t = 0; t < b.tuples; ++t) {
                long tt = t;
                for (int j = b.p - 1; j >= 0; --j) {
                    digits[static_cast<size_t>(j)] = tt % K;
                    tt /= K;
                }
                long colbase = b.offset + t * b.mrank;
                if (b.p > 0) {
                    const BarBlock* tb = block_of(d - 1, b.p - 1);
                    if (tb) {
                        // face 0 drops the first letter through the augmentation
                        long t0 = t % (b.tuples / K);
                        for (long j = 0; j < b.mrank; ++j)
                            dd.add(tb->offset + t0 * tb->mrank + j, colbase + j, 1);
                        // middle faces multiply consecutive letters
                        for (int i = 1; i <= b.p - 1; ++i) {
                            long ti = 0;
                            for (int j = 0; j < b.p; ++j) {
                                if (j == i - 1) continue;
                                long dig = digits[static_cast<size_t>(j)];
                                if (j == i)
                                    dig = mul[static_cast<size_t>(digits[static_cast<size_t>(i - 1)])]
                                             [static_cast<size_t>(digits[static_cast<size_t>(i)])];
                                ti = ti * K + dig;
                            }
                            long sgn = i % 2 == 0 ? 1 : -1;
                            for (long j = 0; j < b.mrank; ++j)
                                dd.add(tb->offset + ti * tb->mrank + j, colbase + j, sgn);
                        }
                        // the last face acts on the module
                        long tp = t / K;
                        long sgn = b.p % 2 == 0 ? 1 : -1;
                        SparseMat am = acts[static_cast<size_t>(digits[static_cast<size_t>(b.p - 1)])]
                                           .component(b.q);
                        for (long j = 0; j < b.mrank; ++j)
                            for (const auto& [rr, v] : am.col(j))
                                dd.add(tb->offset + tp * tb->mrank + rr, colbase + j,
                                       sgn < 0 ? Int(-v) : v);
                    }
                }
                if (b.q > bot) {
                    const BarBlock* tb = block_of(d - 1, b.p);
                    if (tb) {
                        long sgn = b.p % 2 == 0 ? 1 : -1;
                        SparseMat dm = m.diff(b.q);
                        for (long j = 0; j < b.mrank; ++j)
                            for (const auto& [rr, v] : dm.col(j))
                                dd.add(tb->offset + t * tb->mrank + rr, colbase + j,
                                       sgn < 0 ? Int(-v) : v);
                    }
                }
            }
        }
        if (!dd.is_zero()) bar.set_diff(d, std::move(dd));
    }
    return {bar, degree_cap, false};
}

bool roundtrip_check(const Representation& l_coeff, int n,
                     const std::vector<ChainComplex>& inputs, const Options& opt) {
    if (n < 1) throw ValidationError("roundtrip_check: n must be >= 1");
    if (static_cast<int>(inputs.size()) != n)
        throw ValidationError("roundtrip_check: expected " + std::to_string(n) + " inputs");
    if (l_coeff.space.ring().kind != RingSpec::Kind::Q)
        throw ValidationError("roundtrip_check: rational coefficients required");
    for (const ChainComplex& x : inputs)
        if (x.ring() != l_coeff.space.ring())
            throw ValidationError("roundtrip_check: inputs must live over the rationals");
    ExprFunctor g(FunctorExpr::coef_smash(l_coeff.space, n), opt);
    CrossEffect ce = cross_effect(g, n, inputs, opt);
    HomologyTable lhs = homology(ce.total.complex);
    std::map<int, long> rhs;
    for (const Perm& pi : all_perms(n)) {
        ChainComplex acc = l_coeff.space;
        for (int i = 0; i < n; ++i) acc = tensor(acc, inputs[static_cast<size_t>(pi[static_cast<size_t>(i)])]);
        for (const auto& [k, e] : homology(acc).entries)
            if (e.rank > 0) rhs[k] += e.rank;
    }
    for (const auto& [k, e] : lhs.entries) {
        auto it = rhs.find(k);
        if (e.rank != (it == rhs.end() ? 0 : it->second)) return false;
    }
    for (const auto& [k, r] : rhs)
        if (r != lhs.rank_at(k)) return false;
    return true;
}

ComposeCheckReport derivative_compose_check(const Functor& f, int p, int q, RingSpec ring,
                                            const Options& opt) {
    if (p < 1 || q < 1) throw ValidationError("derivative_compose_check: p and q must be >= 1");
    LayerCoefficient direct = layer_coefficient(f, p + q, ring, opt);
    ComposeCheckReport rep;
    rep.direct = direct.homology;

    std::vector<bool> sus(static_cast<size_t>(p + q), false);
    for (int i = p; i < p + q; ++i) sus[static_cast<size_t>(i)] = true;
    HomologyTable prev;
    bool have_prev = false, nested_ok = false, inner_ok = true;
    int lo = 0, hi = 0;
    for (int level = 0; level <= opt.cap; ++level) {
        std::vector<ChainComplex> xs;
        for (int i = 0; i < p; ++i) xs.push_back(sphere(ring, level));
        for (int i = 0; i < q; ++i) xs.push_back(sphere(ring, 0));
        MultilinearizeResult inner = multilinearize(f, p + q, xs, opt, sus);
        if (!inner.stabilized) inner_ok = false;
        HomologyTable t = reindexed(homology(inner.complex), -p * level);
        if (level == 0) {
            auto [l, h] = frozen_window(t, opt.window);
            lo = l;
            hi = h;
        }
        HomologyTable win = t.restricted(lo, hi);
        if (have_prev && win == prev) {
            rep.nested = win;
            nested_ok = true;
            break;
        }
        prev = std::move(win);
        have_prev = true;
    }
    if (!nested_ok) rep.nested = prev;
    rep.window_lo = std::max(lo, direct.window_lo);
    rep.window_hi = std::min(hi, direct.window_hi);
    rep.agree = nested_ok && inner_ok && direct.stabilized &&
                rep.direct.restricted(rep.window_lo, rep.window_hi) ==
                    rep.nested.restricted(rep.window_lo, rep.window_hi);
    return rep;
}

// --- natural maps and agreement ----------------------------------------------

ChainMap NatMap::at(const ChainComplex& x) const {
    switch (kind) {
        case Kind::Identity: {
            auto c = share(evaluate(src, x, opt));
            return ChainMap::identity(c);
        }
        case Kind::Zero:
            return ChainMap::zero(share(evaluate(src, x, opt)), share(evaluate(dst, x, opt)));
        case Kind::TruncInclusion: {
            if (src.op() != FunctorOp::TruncTensorAlg || dst.op() != FunctorOp::TruncTensorAlg)
                throw ValidationError(
                    "NatMap: TruncInclusion endpoints must be truncated tensor algebras");
            if (src.param() > dst.param())
                throw ValidationError(
                    "NatMap: TruncInclusion needs the source truncation to be shorter");
            auto s = share(evaluate(src, x, opt));
            auto d = share(evaluate(dst, x, opt));
            ChainMap f(s, d);
            for (const auto& [k, r] : s->ranks()) {
                SparseMat mk(d->rank(k), r);
                for (long j = 0; j < r; ++j) mk.add(j, j, 1);
                f.set_component(k, mk);
            }
            return f;
        }
    }
    throw ValidationError("NatMap: unknown kind");
}

std::string FiberFunctor::name() const {
    return "fiber(" + eta_.src.describe() + " -> " + eta_.dst.describe() + ")";
}

ChainMap FiberFunctor::map(const ChainMap& g) const {
    if (!g.src || !g.dst) throw ValidationError("FiberFunctor: unset map endpoints");
    ChainMap a = eta_.at(*g.src);
    ChainMap b = eta_.at(*g.dst);
    ChainMap u = evaluate_map(eta_.src, g, eta_.opt);
    ChainMap v = evaluate_map(eta_.dst, g, eta_.opt);
    return fiber_map(a, b, u, v);
}

ChainMap fiber_map(const ChainMap& a, const ChainMap& b, const ChainMap& u, const ChainMap& v) {
    if (!a.src || !a.dst || !b.src || !b.dst || !u.src || !u.dst || !v.src || !v.dst)
        throw ValidationError("fiber_map: unset chain map endpoints");
    if (!(*u.src == *a.src) || !(*u.dst == *b.src) || !(*v.src == *a.dst) || !(*v.dst == *b.dst))
        throw ValidationError("fiber_map: the square's corners do not line up");
    for (const auto& [k, r] : a.src->ranks()) {
        (void)r;
        if (!(v.component(k) * a.component(k) == b.component(k) * u.component(k)))
            throw ValidationError("fiber_map: the square does not commute strictly at degree " +
                                  std::to_string(k));
    }
    ChainComplex fa = fiber(a), fb = fiber(b);
    auto fap = share(fa), fbp = share(fb);
    ChainMap out(fap, fbp);
    for (const auto& [k, r] : fap->ranks()) {
        (void)r;
        long da = a.dst->rank(k + 1), sa = a.src->rank(k);
        long db = b.dst->rank(k + 1), sb = b.src->rank(k);
        SparseMat mk(db + sb, da + sa);
        SparseMat vk = v.component(k + 1);
        for (long j = 0; j < vk.cols(); ++j)
            for (const auto& [rr, val] : vk.col(j)) mk.add(rr, j, val);
        SparseMat uk = u.component(k);
        for (long j = 0; j < uk.cols(); ++j)
            for (const auto& [rr, val] : uk.col(j)) mk.add(db + rr, da + j, val);
        if (!mk.is_zero()) out.set_component(k, std::move(mk));
    }
    return out;
}

AgreementReport agreement_order(const NatMap& u, int n, const std::vector<int>& k_set,
                                RingSpec ring, const Options& opt) {
    (void)opt;
    if (n < 0) throw ValidationError("agreement_order: n must be >= 0");
    if (k_set.empty()) throw ValidationError("agreement_order: need at least one sample degree");
    AgreementReport rep;
    rep.n = n;
    std::set<int> ks(k_set.begin(), k_set.end());
    for (int k : ks) rep.table[k] = connectivity(u.at(sphere(ring, k)));
    bool any_finite = false;
    long c = 0;
    for (const auto& [k, conn] : rep.table) {
        if (conn.infinite) continue;
        long ck = static_cast<long>(n + 1) * k - conn.value;
        if (!any_finite || ck > c) c = ck;
        any_finite = true;
    }
    rep.all_infinite = !any_finite;
    rep.fitted_c = any_finite ? c : 0;
    const Connectivity* prev = nullptr;
    int prevk = 0;
    for (const auto& [k, conn] : rep.table) {
        if (prev) {
            bool drop = prev->infinite && !conn.infinite;
            bool slow = !prev->infinite && !conn.infinite &&
                        conn.value - prev->value < static_cast<long>(n + 1) * (k - prevk);
            if (drop || slow) rep.slope_ok = false;
        }
        prev = &rep.table.at(k);
        prevk = k;
    }
    if (rep.all_infinite)
        rep.note = "every sampled map is a quasi-isomorphism";
    else
        rep.note = "fitted bound: connectivity >= " + std::to_string(n + 1) + "k - " +
                   std::to_string(rep.fitted_c) + " over the sampled degrees";
    return rep;
}

}  // namespace fcalc
