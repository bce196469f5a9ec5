#include "fcalc/atlas.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <vector>

#include "fcalc/basis.hpp"
#include "fcalc/errors.hpp"
#include "fcalc/smith.hpp"

namespace fcalc {

namespace {

long factorial(int n) {
    long r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

void check_atlas_n(const char* what, int n, int lo) {
    if (n < lo)
        throw ValidationError(std::string(what) + ": n must be at least " + std::to_string(lo));
    if (n > kAtlasCap)
        throw BudgetError(std::string(what) + ": n = " + std::to_string(n) +
                          " exceeds the atlas cap " + std::to_string(kAtlasCap));
}

// --- partitions of {0..n-1} as restricted growth strings --------------------

std::vector<std::vector<int>> set_partitions(int n) {
    std::vector<std::vector<int>> out;
    std::vector<int> a(static_cast<size_t>(n), 0);
    auto rec = [&](auto&& self, int i, int mx) -> void {
        if (i == n) {
            out.push_back(a);
            return;
        }
        for (int b = 0; b <= mx + 1; ++b) {
            a[static_cast<size_t>(i)] = b;
            self(self, i + 1, std::max(mx, b));
        }
    };
    if (n > 0)
        rec(rec, 1, 0);
    return out;
}

int block_count(const std::vector<int>& p) {
    return p.empty() ? 0 : *std::max_element(p.begin(), p.end()) + 1;
}

// p refines q: every block of p sits inside one block of q
bool refines(const std::vector<int>& p, const std::vector<int>& q) {
    std::vector<int> to(p.size(), -1);
    for (size_t i = 0; i < p.size(); ++i) {
        int bp = p[i];
        if (to[static_cast<size_t>(bp)] == -1)
            to[static_cast<size_t>(bp)] = q[i];
        else if (to[static_cast<size_t>(bp)] != q[i])
            return false;
    }
    return true;
}

// the partition whose blocks are the g-images of the blocks of p, canonical
std::vector<int> relabel_partition(const std::vector<int>& p, const Perm& g) {
    const size_t n = p.size();
    Perm gi = perm_inverse(g);
    std::vector<int> out(n), assigned(n, -1);
    int next = 0;
    for (size_t i = 0; i < n; ++i) {
        int b = p[static_cast<size_t>(gi[i])];
        if (assigned[static_cast<size_t>(b)] == -1) assigned[static_cast<size_t>(b)] = next++;
        out[i] = assigned[static_cast<size_t>(b)];
    }
    return out;
}

// The nerve of the proper nontrivial partition poset: augmented chains plus
// the bookkeeping needed to transport the relabelling action.
struct NerveData {
    std::vector<std::vector<int>> elems;
    std::map<std::vector<int>, long> elem_index;
    std::vector<std::vector<std::vector<long>>> gens;          // gens[d]: chains of d+1 elements
    std::vector<std::map<std::vector<long>, long>> gen_index;  // per dimension
    ChainComplex complex;
};

NerveData partition_nerve(int n, const RingSpec& ring, const Options& opt) {
    NerveData nv;
    for (auto& p : set_partitions(n)) {
        int b = block_count(p);
        if (b <= 1 || b >= n) continue;
        nv.elem_index[p] = static_cast<long>(nv.elems.size());
        nv.elems.push_back(p);
    }
    const long ne = static_cast<long>(nv.elems.size());
    std::vector<std::vector<long>> above(static_cast<size_t>(ne));
    for (long a = 0; a < ne; ++a)
        for (long b = 0; b < ne; ++b)
            if (a != b && refines(nv.elems[static_cast<size_t>(a)], nv.elems[static_cast<size_t>(b)]))
                above[static_cast<size_t>(a)].push_back(b);

    long total = 1;  // the empty simplex
    std::vector<std::vector<long>> level;
    for (long e = 0; e < ne; ++e) level.push_back({e});
    while (!level.empty()) {
        total += static_cast<long>(level.size());
        check_budget(total, opt.budget, "partition_complex");
        nv.gens.push_back(level);
        std::vector<std::vector<long>> next;
        for (const auto& ch : level)
            for (long b : above[static_cast<size_t>(ch.back())]) {
                std::vector<long> ext = ch;
                ext.push_back(b);
                next.push_back(std::move(ext));
            }
        level = std::move(next);
    }

    nv.gen_index.resize(nv.gens.size());
    ChainComplex c(ring);
    c.set_rank(-1, 1);
    for (size_t d = 0; d < nv.gens.size(); ++d) {
        auto& lv = nv.gens[d];
        std::sort(lv.begin(), lv.end());
        for (long i = 0; i < static_cast<long>(lv.size()); ++i)
            nv.gen_index[d][lv[static_cast<size_t>(i)]] = i;
        if (!lv.empty()) c.set_rank(static_cast<int>(d), static_cast<long>(lv.size()));
    }
    if (!nv.gens.empty() && !nv.gens[0].empty()) {
        SparseMat eps(1, static_cast<long>(nv.gens[0].size()));
        for (long j = 0; j < eps.cols(); ++j) eps.set(0, j, Int(1));
        c.set_diff(0, std::move(eps));
    }
    for (size_t d = 1; d < nv.gens.size(); ++d) {
        SparseMat m(static_cast<long>(nv.gens[d - 1].size()), static_cast<long>(nv.gens[d].size()));
        for (long j = 0; j < static_cast<long>(nv.gens[d].size()); ++j) {
            const auto& ch = nv.gens[d][static_cast<size_t>(j)];
            for (size_t i = 0; i < ch.size(); ++i) {
                std::vector<long> face = ch;
                face.erase(face.begin() + static_cast<long>(i));
                m.add(nv.gen_index[d - 1].at(face), j, (i % 2 == 0) ? Int(1) : Int(-1));
            }
        }
        c.set_diff(static_cast<int>(d), std::move(m));
    }
    nv.complex = std::move(c);
    return nv;
}

// Homology of c as a Σ_n-representation, pushing the given chain-level
// generator actions down to classes.  Degrees of c missing from the maps act
// as the identity.
Representation homology_rep(int n, const ChainComplex& c, std::map<int, SparseMat> tmat,
                            std::map<int, SparseMat> cmat) {
    auto cs = share(c);
    HomologyClasses hc(c);
    Representation rep;
    rep.n = n;
    rep.space = ChainComplex(c.ring());
    for (const auto& [k, r] : c.ranks()) {
        (void)r;
        long br = hc.basis_rank(k);
        if (br > 0) rep.space.set_rank(k, br);
    }
    if (n >= 2 && !rep.space.empty()) {
        ChainMap ft(cs, cs), fc(cs, cs);
        for (const auto& [k, r] : c.ranks()) {
            auto it = tmat.find(k);
            ft.set_component(k, it == tmat.end() ? SparseMat::identity(r) : std::move(it->second));
            auto ic = cmat.find(k);
            fc.set_component(k, ic == cmat.end() ? SparseMat::identity(r) : std::move(ic->second));
        }
        for (const auto& [k, r] : rep.space.ranks()) {
            (void)r;
            rep.act_t[k] = HomologyClasses::induced(hc, hc, ft, k);
            rep.act_c[k] = HomologyClasses::induced(hc, hc, fc, k);
        }
    }
    return rep;
}

}  // namespace

Representation partition_complex(int n, const RingSpec& ring, const Options& opt) {
    check_atlas_n("partition_complex", n, 2);
    NerveData nv = partition_nerve(n, ring, opt);
    std::map<int, SparseMat> tmat, cmat;
    const Perm gens[2] = {transposition_gen(n), full_cycle_gen(n)};
    for (int which = 0; which < 2; ++which) {
        const Perm& g = gens[which];
        std::vector<long> moved(nv.elems.size());
        for (size_t e = 0; e < nv.elems.size(); ++e)
            moved[e] = nv.elem_index.at(relabel_partition(nv.elems[e], g));
        for (size_t d = 0; d < nv.gens.size(); ++d) {
            const auto& lv = nv.gens[d];
            if (lv.empty()) continue;
            SparseMat m(static_cast<long>(lv.size()), static_cast<long>(lv.size()));
            for (long j = 0; j < static_cast<long>(lv.size()); ++j) {
                std::vector<long> img;
                for (long e : lv[static_cast<size_t>(j)]) img.push_back(moved[static_cast<size_t>(e)]);
                m.set(nv.gen_index[d].at(img), j, Int(1));
            }
            (which == 0 ? tmat : cmat)[static_cast<int>(d)] = std::move(m);
        }
    }
    return homology_rep(n, nv.complex, std::move(tmat), std::move(cmat));
}

// --- Lie(n) ------------------------------------------------------------------

namespace {

// expansion of the left-normed bracket on the given letters in the tensor
// algebra: word -> coefficient
std::map<std::vector<int>, Int> expand_bracket(const std::vector<int>& letters) {
    std::map<std::vector<int>, Int> cur;
    cur[{letters.back()}] = 1;
    for (int j = static_cast<int>(letters.size()) - 2; j >= 0; --j) {
        std::map<std::vector<int>, Int> next;
        for (const auto& [w, coef] : cur) {
            std::vector<int> left{letters[static_cast<size_t>(j)]};
            left.insert(left.end(), w.begin(), w.end());
            std::vector<int> right = w;
            right.push_back(letters[static_cast<size_t>(j)]);
            next[left] += coef;
            next[right] -= coef;
        }
        for (auto it = next.begin(); it != next.end();)
            it = it->second == 0 ? next.erase(it) : std::next(it);
        cur = std::move(next);
    }
    return cur;
}

}  // namespace

GModule lie_module(int n, const RingSpec& ring) {
    check_atlas_n("lie_module", n, 1);
    if (n == 1) return GModule::trivial(GModule::Group::Symmetric, 1, ring, 1);

    const std::vector<Perm> words = all_perms(n);
    std::map<Perm, long> word_index;
    for (long i = 0; i < static_cast<long>(words.size()); ++i) word_index[words[static_cast<size_t>(i)]] = i;

    const std::vector<Perm> basis = all_perms(n - 1);
    const long rank = static_cast<long>(basis.size());
    SparseMat embed(static_cast<long>(words.size()), rank);
    std::vector<std::map<std::vector<int>, Int>> expansions;
    for (long b = 0; b < rank; ++b) {
        std::vector<int> letters(basis[static_cast<size_t>(b)].begin(), basis[static_cast<size_t>(b)].end());
        letters.push_back(n - 1);
        expansions.push_back(expand_bracket(letters));
        for (const auto& [w, coef] : expansions.back()) embed.set(word_index.at(w), b, coef);
    }
    SmithResult sm = smith_normal_form(embed, true);

    GModule m;
    m.group = GModule::Group::Symmetric;
    m.n = n;
    m.ring = ring;
    m.rank = rank;
    const Perm gens[2] = {transposition_gen(n), full_cycle_gen(n)};
    for (int which = 0; which < 2; ++which) {
        const Perm& g = gens[which];
        SparseMat a(rank, rank);
        for (long b = 0; b < rank; ++b) {
            std::vector<Int> rhs(words.size(), Int(0));
            for (const auto& [w, coef] : expansions[static_cast<size_t>(b)]) {
                std::vector<int> img(w.size());
                for (size_t i = 0; i < w.size(); ++i) img[i] = g[static_cast<size_t>(w[i])];
                rhs[static_cast<size_t>(word_index.at(img))] = coef;
            }
            auto sol = solve_integer(sm, rhs);
            if (!sol)
                throw ValidationError("lie_module: the bracket embedding failed to solve back");
            for (long i = 0; i < rank; ++i)
                if ((*sol)[static_cast<size_t>(i)] != 0) a.set(i, b, (*sol)[static_cast<size_t>(i)]);
        }
        (which == 0 ? m.gen_t : m.gen_c) = std::move(a);
    }
    return m;
}

bool compare_partition_lie(int n, const Options& opt) {
    check_atlas_n("compare_partition_lie", n, 2);
    Character a = character(sign_twist(partition_complex(n, RingSpec::Z(), opt)));
    Character b = character(lie_module(n, RingSpec::Z()));
    if (a.class_names != b.class_names) return false;
    std::vector<Int> row;
    bool found = false;
    for (const auto& [d, vals] : a.by_degree) {
        (void)d;
        if (std::all_of(vals.begin(), vals.end(), [](const Int& v) { return v == 0; })) continue;
        if (found) return false;  // not concentrated in one degree
        row = vals;
        found = true;
    }
    if (!found) row.assign(a.class_names.size(), Int(0));
    return row == b.by_degree.at(0);
}

// --- compactified configuration spaces ---------------------------------------

namespace {

// A coordinate of a product simplex in dimension q: the degeneracy s_A x of a
// nondegenerate p-simplex x, with A the set of flat steps (|A| = q - p).
struct Coord {
    int p = 0;
    long x = 0;
    unsigned long mask = 0;
    auto operator<=>(const Coord&) const = default;
};

std::vector<int> vertex_map(int q, const Coord& c) {
    std::vector<int> f(static_cast<size_t>(q) + 1);
    f[0] = 0;
    for (int j = 0; j < q; ++j)
        f[static_cast<size_t>(j) + 1] =
            f[static_cast<size_t>(j)] + ((c.mask >> j) & 1ul ? 0 : 1);
    return f;
}

unsigned long mask_of(const std::vector<int>& f) {
    unsigned long m = 0;
    for (size_t j = 0; j + 1 < f.size(); ++j)
        if (f[j + 1] == f[j]) m |= 1ul << j;
    return m;
}

// the i-th face of a coordinate in dimension q, renormalized
Coord coord_face(const SimplicialSet& k, int q, const Coord& c, int i) {
    std::vector<int> f = vertex_map(q, c);
    const int v = f[static_cast<size_t>(i)];
    f.erase(f.begin() + i);
    bool covered = false;
    for (int x : f)
        if (x == v) {
            covered = true;
            break;
        }
    if (covered) return {c.p, c.x, mask_of(f)};
    const DegenerateFace& bf = k.face(c.p, c.x, v);
    for (int& w : f) w = bf.surj[static_cast<size_t>(w - (w > v ? 1 : 0))];
    return {bf.base_dim(), bf.base, mask_of(f)};
}

struct Tuple {
    std::vector<Coord> coords;

    std::vector<long> key() const {
        std::vector<long> k;
        for (const Coord& c : coords) {
            k.push_back(c.p);
            k.push_back(c.x);
            k.push_back(static_cast<long>(c.mask));
        }
        return k;
    }
    bool degenerate() const {
        unsigned long m = ~0ul;
        for (const Coord& c : coords) m &= c.mask;
        return m != 0;
    }
};

bool in_collapse(const Tuple& t, bool based, std::optional<long> basepoint) {
    for (size_t a = 0; a < t.coords.size(); ++a)
        for (size_t b = a + 1; b < t.coords.size(); ++b)
            if (t.coords[a] == t.coords[b]) return true;
    if (based)
        for (const Coord& c : t.coords)
            if (c.p == 0 && c.x == *basepoint) return true;
    return false;
}

}  // namespace

ConfigSpace config_compactified(const SimplicialSet& k, int n, bool based, const RingSpec& ring,
                                const Options& opt) {
    if (n < 1) throw ValidationError("config_compactified: n must be >= 1");
    k.validate();
    if (based && !k.basepoint)
        throw ValidationError("config_compactified: based collapse needs a basepoint");

    const int qmax = n * std::max(k.dim(), 0);
    if (qmax > 60) throw BudgetError("config_compactified: the product dimension overflows");

    // coordinates per dimension
    std::vector<std::vector<Coord>> coords(static_cast<size_t>(qmax) + 1);
    long cost = 0;
    for (int q = 0; q <= qmax; ++q) {
        if (q >= 1) check_budget(1l << q, opt.budget, "config_compactified");
        for (unsigned long m = 0; m < (1ul << q); ++m) {
            int p = q - std::popcount(m);
            if (p > k.dim()) continue;
            for (long x = 0; x < k.count(p); ++x) coords[static_cast<size_t>(q)].push_back({p, x, m});
        }
        // the enumeration below walks the full n-fold product of this list
        long c = 1;
        for (int i = 0; i < n; ++i) {
            c *= static_cast<long>(coords[static_cast<size_t>(q)].size());
            if (c > opt.budget) break;
        }
        cost += c;
        check_budget(cost, opt.budget, "config_compactified");
    }

    std::vector<std::vector<Tuple>> gens(static_cast<size_t>(qmax) + 1);
    std::vector<std::map<std::vector<long>, long>> index(static_cast<size_t>(qmax) + 1);
    for (int q = 0; q <= qmax; ++q) {
        const auto& cs = coords[static_cast<size_t>(q)];
        if (cs.empty()) continue;
        std::vector<size_t> odo(static_cast<size_t>(n), 0);
        while (true) {
            Tuple t;
            for (size_t i = 0; i < odo.size(); ++i) t.coords.push_back(cs[odo[i]]);
            if (!t.degenerate() && !in_collapse(t, based, k.basepoint)) {
                index[static_cast<size_t>(q)][t.key()] = static_cast<long>(gens[static_cast<size_t>(q)].size());
                gens[static_cast<size_t>(q)].push_back(std::move(t));
            }
            size_t i = 0;
            while (i < odo.size() && ++odo[i] == cs.size()) odo[i++] = 0;
            if (i == odo.size()) break;
        }
    }

    ChainComplex cells(ring);
    for (int q = 0; q <= qmax; ++q)
        if (!gens[static_cast<size_t>(q)].empty())
            cells.set_rank(q, static_cast<long>(gens[static_cast<size_t>(q)].size()));
    for (int q = 1; q <= qmax; ++q) {
        const auto& lv = gens[static_cast<size_t>(q)];
        if (lv.empty()) continue;
        SparseMat m(static_cast<long>(gens[static_cast<size_t>(q) - 1].size()),
                    static_cast<long>(lv.size()));
        for (long j = 0; j < static_cast<long>(lv.size()); ++j)
            for (int i = 0; i <= q; ++i) {
                Tuple face;
                for (const Coord& c : lv[static_cast<size_t>(j)].coords)
                    face.coords.push_back(coord_face(k, q, c, i));
                if (face.degenerate() || in_collapse(face, based, k.basepoint)) continue;
                m.add(index[static_cast<size_t>(q) - 1].at(face.key()), j,
                      (i % 2 == 0) ? Int(1) : Int(-1));
            }
        cells.set_diff(q, std::move(m));
    }
    cells.validate();

    std::map<int, SparseMat> tmat, cmat;
    if (n >= 2) {
        const Perm pg[2] = {transposition_gen(n), full_cycle_gen(n)};
        for (int which = 0; which < 2; ++which) {
            const Perm& g = pg[which];
            for (int q = 0; q <= qmax; ++q) {
                const auto& lv = gens[static_cast<size_t>(q)];
                if (lv.empty()) continue;
                SparseMat m(static_cast<long>(lv.size()), static_cast<long>(lv.size()));
                for (long j = 0; j < static_cast<long>(lv.size()); ++j) {
                    Tuple img;
                    img.coords.resize(lv[static_cast<size_t>(j)].coords.size());
                    for (size_t i = 0; i < img.coords.size(); ++i)
                        img.coords[static_cast<size_t>(g[i])] = lv[static_cast<size_t>(j)].coords[i];
                    m.set(index[static_cast<size_t>(q)].at(img.key()), j, Int(1));
                }
                (which == 0 ? tmat : cmat)[q] = std::move(m);
            }
        }
    }

    ConfigSpace out;
    out.rep = homology_rep(n, cells, std::move(tmat), std::move(cmat));
    out.cells = std::move(cells);
    return out;
}

// --- regraded models ----------------------------------------------------------

RegradedRep identity_derivative(int n, const RingSpec& ring, const Options& opt) {
    check_atlas_n("identity_derivative", n, 2);
    Representation pr = partition_complex(n, ring, opt);
    Representation out;
    out.n = n;
    out.space = shift(pr.space, 2);
    for (const auto& [k, m] : pr.act_t) out.act_t[k + 2] = m;
    for (const auto& [k, m] : pr.act_c) out.act_c[k + 2] = m;
    return {std::move(out), n - 1, 1 - n};
}

RegradedRep a_theory_coefficient(int n, const RingSpec& ring, const Options& opt) {
    (void)opt;
    check_atlas_n("a_theory_coefficient", n, 1);
    SimplicialSet bd = SimplicialSet::boundary_simplex(n - 1);
    ChainComplex c = bd.chains(RingSpec::Z(), true);

    // the cyclic rotation acts on vertex subsets with the orientation sign of
    // the induced reordering
    const Perm cyc = full_cycle_gen(n);
    std::map<int, SparseMat> cmat;
    for (int d = 0; d <= bd.dim(); ++d) {
        if (bd.count(d) == 0) continue;
        std::vector<std::vector<int>> subsets;
        std::vector<int> cur;
        auto rec = [&](auto&& self, int next) -> void {
            if (static_cast<int>(cur.size()) == d + 1) {
                subsets.push_back(cur);
                return;
            }
            for (int v = next; v < n; ++v) {
                cur.push_back(v);
                self(self, v + 1);
                cur.pop_back();
            }
        };
        rec(rec, 0);
        std::map<std::vector<int>, long> idx;
        for (long i = 0; i < static_cast<long>(subsets.size()); ++i) idx[subsets[static_cast<size_t>(i)]] = i;
        SparseMat m(static_cast<long>(subsets.size()), static_cast<long>(subsets.size()));
        for (long j = 0; j < static_cast<long>(subsets.size()); ++j) {
            std::vector<int> img;
            for (int v : subsets[static_cast<size_t>(j)]) img.push_back(cyc[static_cast<size_t>(v)]);
            int inv = 0;
            for (size_t a = 0; a < img.size(); ++a)
                for (size_t b = a + 1; b < img.size(); ++b)
                    if (img[a] > img[b]) ++inv;
            std::sort(img.begin(), img.end());
            m.set(idx.at(img), j, (inv % 2 == 0) ? Int(1) : Int(-1));
        }
        cmat[d] = std::move(m);
    }

    auto cs = share(c);
    ChainMap f(cs, cs);
    for (const auto& [k, r] : c.ranks()) {
        auto it = cmat.find(k);
        f.set_component(k, it == cmat.end() ? SparseMat::identity(r) : std::move(it->second));
    }
    HomologyClasses hc(c);
    if (hc.basis_rank(n - 2) != 1)
        throw ValidationError("a_theory_coefficient: the boundary sphere has the wrong homology");
    Int eps = HomologyClasses::induced(hc, hc, f, n - 2).at(0, 0);

    GModule m;
    m.group = GModule::Group::Cyclic;
    m.n = n;
    m.ring = ring;
    m.rank = 1;
    m.gen_t = SparseMat::identity(1);
    m.gen_c = SparseMat(1, 1);
    m.gen_c.set(0, 0, eps);
    return {induce(m, n - 1), n - 1, 1 - n};
}

}  // namespace fcalc
