#include "fcalc/cube.hpp"

#include <algorithm>
#include <bit>
#include <string>

namespace fcalc {

namespace {

unsigned bit_of(int s) { return 1u << (s - 1); }

int popcount(unsigned m) { return std::popcount(m); }

std::string mask_name(unsigned mask) {
    std::string out = "{";
    bool first = true;
    for (int s = 1; mask >> (s - 1); ++s)
        if (mask & bit_of(s)) {
            if (!first) out += ",";
            out += std::to_string(s);
            first = false;
        }
    return out + "}";
}

}  // namespace

CubeDiagram::CubeDiagram(int dimension, RingSpec ring) : n_(dimension), ring_(ring) {
    if (dimension < 0 || dimension > 24) throw ValidationError("cube dimension out of range");
    verts_.resize(1u << n_);
}

const ChainComplex& CubeDiagram::vertex(unsigned mask) const {
    auto p = vertex_ptr(mask);
    return *p;
}

std::shared_ptr<const ChainComplex> CubeDiagram::vertex_ptr(unsigned mask) const {
    if (mask >= verts_.size()) throw ValidationError("cube vertex index out of range");
    if (!verts_[mask]) throw ValidationError("cube vertex " + mask_name(mask) + " is unset");
    return verts_[mask];
}

void CubeDiagram::set_vertex(unsigned mask, ChainComplex c) {
    if (mask >= verts_.size()) throw ValidationError("cube vertex index out of range");
    if (c.ring() != ring_) throw ValidationError("cube vertex ring mismatch at " + mask_name(mask));
    verts_[mask] = share(std::move(c));
}

const ChainMap& CubeDiagram::edge(unsigned mask, int s) const {
    auto it = edges_.find({mask, s});
    if (it == edges_.end())
        throw ValidationError("cube edge " + mask_name(mask) + " direction " + std::to_string(s) +
                              " is unset");
    return it->second;
}

void CubeDiagram::set_edge(unsigned mask, int s, ChainMap f) {
    if (s < 1 || s > n_ || (mask & bit_of(s)) || mask >= verts_.size())
        throw ValidationError("cube edge index out of range");
    edges_[{mask, s}] = std::move(f);
}

ChainMap CubeDiagram::edge_path(unsigned from, unsigned to) const {
    if ((from & to) != from) throw ValidationError("cube edge_path needs nested subsets");
    if (from == to) return ChainMap::identity(vertex_ptr(from));
    ChainMap acc;
    bool first = true;
    unsigned cur = from;
    for (int s = 1; s <= n_; ++s)
        if ((to & bit_of(s)) && !(cur & bit_of(s))) {
            const ChainMap& e = edge(cur, s);
            acc = first ? e : e.compose(acc);
            first = false;
            cur |= bit_of(s);
        }
    return acc;
}

long CubeDiagram::total_rank() const {
    long total = 0;
    for (auto& v : verts_)
        if (v) total += v->total_rank();
    return total;
}

void CubeDiagram::validate() const {
    for (unsigned mask = 0; mask < vertex_count(); ++mask) {
        vertex(mask).validate();
        if (vertex(mask).ring() != ring_)
            throw ValidationError("cube vertex ring mismatch at " + mask_name(mask));
    }
    for (unsigned mask = 0; mask < vertex_count(); ++mask)
        for (int s = 1; s <= n_; ++s) {
            if (mask & bit_of(s)) continue;
            const ChainMap& e = edge(mask, s);
            if (*e.src != vertex(mask) || *e.dst != vertex(mask | bit_of(s)))
                throw ValidationError("cube edge endpoints disagree with vertices at " +
                                      mask_name(mask) + " direction " + std::to_string(s));
            e.validate();
        }
    for (unsigned mask = 0; mask < vertex_count(); ++mask)
        for (int s = 1; s <= n_; ++s) {
            if (mask & bit_of(s)) continue;
            for (int t = s + 1; t <= n_; ++t) {
                if (mask & bit_of(t)) continue;
                ChainMap a = edge(mask | bit_of(s), t).compose(edge(mask, s));
                ChainMap b = edge(mask | bit_of(t), s).compose(edge(mask, t));
                for (auto& [k, m] : a.comp)
                    if (!(m == b.component(k)))
                        throw ValidationError("cube face at " + mask_name(mask) + " directions " +
                                              std::to_string(s) + "," + std::to_string(t) +
                                              " does not commute");
                for (auto& [k, m] : b.comp)
                    if (!(m == a.component(k)))
                        throw ValidationError("cube face at " + mask_name(mask) + " directions " +
                                              std::to_string(s) + "," + std::to_string(t) +
                                              " does not commute");
            }
        }
}

std::pair<long, long> TotalLayout::find(int degree, unsigned mask) const {
    auto it = at.find(degree);
    if (it == at.end()) return {0, 0};
    for (const Block& b : it->second)
        if (b.mask == mask) return {b.offset, b.rank};
    return {0, 0};
}

std::pair<long, long> HolimLayout::find(int degree, long chain) const {
    auto it = at.find(degree);
    if (it == at.end()) return {0, 0};
    for (const Block& b : it->second)
        if (b.chain == chain) return {b.offset, b.rank};
    return {0, 0};
}

namespace {

// shared assembly for total fiber / cofiber; `cofiber` picks the placement,
// the internal sign and the edge sign
TotalComplex totalize(const CubeDiagram& cube, bool cofiber, const Options& opt) {
    int n = cube.dimension();
    unsigned full = (1u << n) - 1;
    TotalComplex out;
    out.complex = ChainComplex(cube.ring());

    std::map<int, long> offsets;
    long total = 0;
    for (unsigned down = 0; down <= full; ++down) {
        unsigned mask = full - down;  // bitmask descending
        const ChainComplex& v = cube.vertex(mask);
        int place = cofiber ? (n - popcount(mask)) : -popcount(mask);
        for (auto& [i, r] : v.ranks()) {
            int k = i + place;
            TotalLayout::Block b;
            b.mask = mask;
            b.rank = r;
            b.internal = i;
            b.offset = offsets[k];
            offsets[k] += r;
            out.layout.at[k].push_back(b);
            total += r;
        }
    }
    check_budget(total, opt.budget, cofiber ? "total_cofiber" : "total_fiber");
    for (auto& [k, off] : offsets) out.complex.set_rank(k, off);

    for (auto& [k, blocks] : out.layout.at) {
        if (out.complex.rank(k - 1) == 0) continue;
        SparseMat d(out.complex.rank(k - 1), out.complex.rank(k));
        for (const TotalLayout::Block& b : blocks) {
            const ChainComplex& v = cube.vertex(b.mask);
            int sz = popcount(b.mask);
            long isign = ((cofiber ? n - sz : sz) % 2 == 0) ? 1 : -1;
            SparseMat dv = v.diff(b.internal);
            auto [toff, trank] = out.layout.find(k - 1, b.mask);
            if (trank > 0 && !dv.is_zero())
                for (long j = 0; j < dv.cols(); ++j)
                    for (auto& [r, val] : dv.col(j)) d.add(toff + r, b.offset + j, isign * val);
            for (int s = 1; s <= n; ++s) {
                if (b.mask & bit_of(s)) continue;
                unsigned tmask = b.mask | bit_of(s);
                auto [toff2, trank2] = out.layout.find(k - 1, tmask);
                if (trank2 == 0) continue;
                long esign;
                if (cofiber) {
                    unsigned comp = full & ~b.mask & ~bit_of(s);
                    esign = (popcount(comp >> s) % 2 == 0) ? 1 : -1;
                } else {
                    esign = (popcount(b.mask >> s) % 2 == 0) ? -1 : 1;
                }
                SparseMat e = cube.edge(b.mask, s).component(b.internal);
                for (long j = 0; j < e.cols(); ++j)
                    for (auto& [r, val] : e.col(j)) d.add(toff2 + r, b.offset + j, esign * val);
            }
        }
        if (!d.is_zero()) out.complex.set_diff(k, std::move(d));
    }
    return out;
}

}  // namespace

TotalComplex total_fiber(const CubeDiagram& cube, const Options& opt) {
    return totalize(cube, false, opt);
}

TotalComplex total_cofiber(const CubeDiagram& cube, const Options& opt) {
    return totalize(cube, true, opt);
}

bool is_cartesian(const CubeDiagram& cube, const Options& opt) {
    return is_acyclic(total_fiber(cube, opt).complex);
}

bool is_strongly_cocartesian(const CubeDiagram& cube, const Options& opt) {
    int n = cube.dimension();
    if (n <= 1) return true;
    for (unsigned mask = 0; mask < cube.vertex_count(); ++mask)
        for (int s = 1; s <= n; ++s) {
            if (mask & bit_of(s)) continue;
            for (int t = s + 1; t <= n; ++t) {
                if (mask & bit_of(t)) continue;
                CubeDiagram face(2, cube.ring());
                face.set_vertex(0u, cube.vertex(mask));
                face.set_vertex(1u, cube.vertex(mask | bit_of(s)));
                face.set_vertex(2u, cube.vertex(mask | bit_of(t)));
                face.set_vertex(3u, cube.vertex(mask | bit_of(s) | bit_of(t)));
                auto relabel = [&](unsigned fm) {
                    unsigned big = mask;
                    if (fm & 1u) big |= bit_of(s);
                    if (fm & 2u) big |= bit_of(t);
                    return big;
                };
                for (unsigned fm : {0u, 2u}) {
                    ChainMap e(face.vertex_ptr(fm), face.vertex_ptr(fm | 1u));
                    e.comp = cube.edge(relabel(fm), s).comp;
                    face.set_edge(fm, 1, std::move(e));
                }
                for (unsigned fm : {0u, 1u}) {
                    ChainMap e(face.vertex_ptr(fm), face.vertex_ptr(fm | 2u));
                    e.comp = cube.edge(relabel(fm), t).comp;
                    face.set_edge(fm, 2, std::move(e));
                }
                if (!is_cartesian(face, opt)) return false;
            }
        }
    return true;
}

CubeDiagram sum_cube(const std::vector<ChainComplex>& inputs) {
    if (inputs.empty()) throw ValidationError("sum_cube needs at least one input");
    int n = static_cast<int>(inputs.size());
    RingSpec ring = inputs[0].ring();
    for (const ChainComplex& x : inputs)
        if (x.ring() != ring) throw ValidationError("sum_cube inputs must share a ring");
    CubeDiagram cube(n, ring);

    // vertex at T: direct sum of inputs X_s for s not in T, s ascending
    auto build = [&](unsigned mask) {
        ChainComplex acc = zero_complex(ring);
        for (int s = 1; s <= n; ++s)
            if (!(mask & bit_of(s))) acc = direct_sum(acc, inputs[s - 1]);
        return acc;
    };
    for (unsigned mask = 0; mask < cube.vertex_count(); ++mask) cube.set_vertex(mask, build(mask));

    // block offset of summand s at degree k in the vertex of `mask`
    auto offset_of = [&](unsigned mask, int s, int k) {
        long off = 0;
        for (int r = 1; r < s; ++r)
            if (!(mask & bit_of(r))) off += inputs[r - 1].rank(k);
        return off;
    };
    for (unsigned mask = 0; mask < cube.vertex_count(); ++mask)
        for (int t = 1; t <= n; ++t) {
            if (mask & bit_of(t)) continue;
            unsigned tmask = mask | bit_of(t);
            ChainMap e(cube.vertex_ptr(mask), cube.vertex_ptr(tmask));
            const ChainComplex& src = cube.vertex(mask);
            const ChainComplex& dst = cube.vertex(tmask);
            for (auto& [k, r] : src.ranks()) {
                if (dst.rank(k) == 0) continue;
                SparseMat m(dst.rank(k), r);
                for (int s = 1; s <= n; ++s) {
                    if ((mask & bit_of(s)) || s == t) continue;
                    long so = offset_of(mask, s, k);
                    long to = offset_of(tmask, s, k);
                    for (long j = 0; j < inputs[s - 1].rank(k); ++j) m.add(to + j, so + j, 1);
                }
                if (!m.is_zero()) e.set_component(k, std::move(m));
            }
            cube.set_edge(mask, t, std::move(e));
        }
    return cube;
}

namespace {

std::vector<int> mask_elements(unsigned mask) {
    std::vector<int> out;
    for (int s = 1; mask >> (s - 1); ++s)
        if (mask & bit_of(s)) out.push_back(s);
    return out;
}

}  // namespace

CubeDiagram join_cube(const ChainComplex& x, int n, const Options& opt) {
    if (n < 0) throw ValidationError("join_cube needs n >= 0");
    int dim = n + 1;
    CubeDiagram cube(dim, x.ring());
    long xr = x.total_rank();
    check_budget((xr + 2) * (static_cast<long>(dim) + 1) << dim, opt.budget, "join_cube");

    // vertex at U: generators are the X block, the degree-0 points u in U,
    // the pairs x (x) u one degree up, and the degree-1 pairs omega (x) u
    auto build = [&](unsigned mask) {
        ChainComplex c(x.ring());
        long uu = popcount(mask);
        for (auto& [k, r] : x.ranks()) {
            c.set_rank(k, c.rank(k) + r);
            if (uu > 0) c.set_rank(k + 1, c.rank(k + 1) + r * uu);
        }
        if (uu > 0) {
            c.set_rank(0, c.rank(0) + uu);
            c.set_rank(1, c.rank(1) + uu);
        }
        // offsets at degree k: [X_k][u (k=0)][x(x)u for x in X_{k-1}][omega(x)u (k=1)]
        auto off_u = [&](int k) { return x.rank(k); };
        auto off_pair = [&](int k) { return x.rank(k) + (k == 0 ? uu : 0); };
        auto off_omega = [&](int k) { return x.rank(k) + (k == 0 ? uu : 0) + x.rank(k - 1) * uu; };
        for (auto& [k, r] : c.ranks()) {
            if (c.rank(k - 1) == 0) continue;
            SparseMat d(c.rank(k - 1), c.rank(k));
            SparseMat dx = x.diff(k);
            for (long j = 0; j < dx.cols(); ++j)
                for (auto& [row, v] : dx.col(j)) d.add(row, j, v);
            if (uu > 0) {
                // d(x (x) u) = x - (dx) (x) u
                SparseMat dx1 = x.diff(k - 1);
                for (long xj = 0; xj < x.rank(k - 1); ++xj)
                    for (long ui = 0; ui < uu; ++ui) {
                        long col = off_pair(k) + xj * uu + ui;
                        d.add(xj, col, 1);
                        for (auto& [row, v] : dx1.col(xj))
                            d.add(off_pair(k - 1) + row * uu + ui, col, -v);
                    }
                if (k == 1)
                    for (long ui = 0; ui < uu; ++ui) d.add(off_u(0) + ui, off_omega(1) + ui, -1);
            }
            if (!d.is_zero()) c.set_diff(k, std::move(d));
        }
        return c;
    };
    for (unsigned mask = 0; mask < cube.vertex_count(); ++mask) cube.set_vertex(mask, build(mask));

    for (unsigned mask = 0; mask < cube.vertex_count(); ++mask) {
        std::vector<int> u_small = mask_elements(mask);
        long uu = static_cast<long>(u_small.size());
        for (int t = 1; t <= dim; ++t) {
            if (mask & bit_of(t)) continue;
            unsigned tmask = mask | bit_of(t);
            std::vector<int> u_big = mask_elements(tmask);
            long vv = static_cast<long>(u_big.size());
            auto u_pos = [&](int s) {
                return static_cast<long>(std::lower_bound(u_big.begin(), u_big.end(), s) - u_big.begin());
            };
            ChainMap e(cube.vertex_ptr(mask), cube.vertex_ptr(tmask));
            const ChainComplex& src = cube.vertex(mask);
            const ChainComplex& dst = cube.vertex(tmask);
            for (auto& [k, r] : src.ranks()) {
                SparseMat m(dst.rank(k), r);
                for (long j = 0; j < x.rank(k); ++j) m.add(j, j, 1);
                if (uu > 0) {
                    long s_off_u = x.rank(k), d_off_u = x.rank(k);
                    long s_off_p = x.rank(k) + (k == 0 ? uu : 0), d_off_p = x.rank(k) + (k == 0 ? vv : 0);
                    long s_off_o = s_off_p + x.rank(k - 1) * uu, d_off_o = d_off_p + x.rank(k - 1) * vv;
                    if (k == 0)
                        for (long ui = 0; ui < uu; ++ui) m.add(d_off_u + u_pos(u_small[ui]), s_off_u + ui, 1);
                    for (long xj = 0; xj < x.rank(k - 1); ++xj)
                        for (long ui = 0; ui < uu; ++ui)
                            m.add(d_off_p + xj * vv + u_pos(u_small[ui]), s_off_p + xj * uu + ui, 1);
                    if (k == 1)
                        for (long ui = 0; ui < uu; ++ui) m.add(d_off_o + u_pos(u_small[ui]), s_off_o + ui, 1);
                }
                if (!m.is_zero()) e.set_component(k, std::move(m));
            }
            cube.set_edge(mask, t, std::move(e));
        }
    }
    return cube;
}

ChainMap join_inclusion(const CubeDiagram& jc, unsigned mask) {
    auto x = jc.vertex_ptr(0);
    ChainMap e(x, jc.vertex_ptr(mask));
    for (auto& [k, r] : x->ranks()) {
        SparseMat m(jc.vertex(mask).rank(k), r);
        for (long j = 0; j < r; ++j) m.add(j, j, 1);
        e.set_component(k, std::move(m));
    }
    return e;
}

PosetDiagram::PosetDiagram(long size, RingSpec ring) : ring_(ring) {
    values_.resize(size);
    less_.assign(size, std::vector<char>(size, 0));
}

void PosetDiagram::set_less(long a, long b) {
    if (a == b) throw ValidationError("poset relation must be strict");
    less_.at(a).at(b) = 1;
}

void PosetDiagram::transitive_close() {
    long m = size();
    for (long k = 0; k < m; ++k)
        for (long a = 0; a < m; ++a)
            if (less_[a][k])
                for (long b = 0; b < m; ++b)
                    if (less_[k][b]) less_[a][b] = 1;
    for (long a = 0; a < m; ++a)
        if (less_[a][a]) throw ValidationError("poset order contains a cycle");
}

bool PosetDiagram::less(long a, long b) const { return less_.at(a).at(b) != 0; }

const ChainComplex& PosetDiagram::value(long a) const { return *value_ptr(a); }

std::shared_ptr<const ChainComplex> PosetDiagram::value_ptr(long a) const {
    auto& p = values_.at(a);
    if (!p) throw ValidationError("poset value " + std::to_string(a) + " is unset");
    return p;
}

void PosetDiagram::set_value(long a, ChainComplex c) {
    if (c.ring() != ring_) throw ValidationError("poset value ring mismatch");
    values_.at(a) = share(std::move(c));
}

const ChainMap& PosetDiagram::edge(long a, long b) const {
    auto it = edges_.find({a, b});
    if (it == edges_.end())
        throw ValidationError("poset edge " + std::to_string(a) + " -> " + std::to_string(b) +
                              " is unset");
    return it->second;
}

void PosetDiagram::set_edge(long a, long b, ChainMap f) {
    if (!less(a, b)) throw ValidationError("poset edge without relation");
    edges_[{a, b}] = std::move(f);
}

void PosetDiagram::validate() const {
    long m = size();
    for (long a = 0; a < m; ++a) value(a).validate();
    for (long a = 0; a < m; ++a)
        for (long b = 0; b < m; ++b) {
            if (!less(a, b)) continue;
            if (less(b, a)) throw ValidationError("poset order contains a cycle");
            const ChainMap& e = edge(a, b);
            if (*e.src != value(a) || *e.dst != value(b))
                throw ValidationError("poset edge endpoints disagree with values");
            e.validate();
        }
    for (long a = 0; a < m; ++a)
        for (long b = 0; b < m; ++b) {
            if (!less(a, b)) continue;
            for (long c = 0; c < m; ++c) {
                if (!less(b, c)) continue;
                ChainMap direct = edge(a, c);
                ChainMap via = edge(b, c).compose(edge(a, b));
                for (auto& [k, mm] : direct.comp)
                    if (!(mm == via.component(k)))
                        throw ValidationError("poset composite maps disagree");
                for (auto& [k, mm] : via.comp)
                    if (!(mm == direct.component(k)))
                        throw ValidationError("poset composite maps disagree");
            }
        }
}

HolimResult poset_holim(const PosetDiagram& poset, const Options& opt) {
    long m = poset.size();
    HolimResult out;
    out.complex = ChainComplex(poset.ring());

    // chains by length, lexicographically within a length
    std::vector<std::vector<long>> prev;
    for (long a = 0; a < m; ++a) prev.push_back({a});
    while (!prev.empty()) {
        std::vector<std::vector<long>> next;
        for (auto& c : prev) {
            out.chains.push_back(c);
            for (long b = 0; b < m; ++b)
                if (poset.less(c.back(), b)) {
                    auto ext = c;
                    ext.push_back(b);
                    next.push_back(std::move(ext));
                }
        }
        prev = std::move(next);
    }
    std::map<std::vector<long>, long> chain_id;
    for (long i = 0; i < static_cast<long>(out.chains.size()); ++i) chain_id[out.chains[i]] = i;

    long total = 0;
    for (auto& c : out.chains) total += poset.value(c.back()).total_rank();
    check_budget(total, opt.budget, "poset_holim");

    std::map<int, long> offsets;
    for (long ci = 0; ci < static_cast<long>(out.chains.size()); ++ci) {
        const auto& c = out.chains[ci];
        int len = static_cast<int>(c.size()) - 1;
        const ChainComplex& v = poset.value(c.back());
        for (auto& [i, r] : v.ranks()) {
            int k = i - len;
            HolimLayout::Block b;
            b.chain = ci;
            b.rank = r;
            b.internal = i;
            b.offset = offsets[k];
            offsets[k] += r;
            out.layout.at[k].push_back(b);
        }
    }
    for (auto& [k, off] : offsets) out.complex.set_rank(k, off);

    for (auto& [k, blocks] : out.layout.at) {
        if (out.complex.rank(k - 1) == 0) continue;
        SparseMat d(out.complex.rank(k - 1), out.complex.rank(k));
        for (const HolimLayout::Block& b : blocks) {
            const auto& c = out.chains[b.chain];
            int len = static_cast<int>(c.size()) - 1;
            const ChainComplex& v = poset.value(c.back());
            // internal differential with sign (-1)^len
            auto [toff, trank] = out.layout.find(k - 1, b.chain);
            if (trank > 0) {
                long isign = (len % 2 == 0) ? 1 : -1;
                SparseMat dv = v.diff(b.internal);
                for (long j = 0; j < dv.cols(); ++j)
                    for (auto& [r, val] : dv.col(j)) d.add(toff + r, b.offset + j, isign * val);
            }
            // cofaces: insert an element into the chain
            for (long e = 0; e < m; ++e) {
                for (int pos = 0; pos <= len + 1; ++pos) {
                    bool ok = (pos == 0 || poset.less(c[pos - 1], e)) &&
                              (pos == len + 1 || poset.less(e, c[pos]));
                    if (!ok) continue;
                    auto ext = c;
                    ext.insert(ext.begin() + pos, e);
                    long ti = chain_id.at(ext);
                    auto [toff2, trank2] = out.layout.find(k - 1, ti);
                    if (trank2 == 0) continue;
                    long sign = (pos % 2 == 0) ? 1 : -1;
                    if (pos == len + 1) {
                        SparseMat em = poset.edge(c.back(), e).component(b.internal);
                        for (long j = 0; j < em.cols(); ++j)
                            for (auto& [r, val] : em.col(j)) d.add(toff2 + r, b.offset + j, sign * val);
                    } else {
                        for (long j = 0; j < b.rank; ++j) d.add(toff2 + j, b.offset + j, sign);
                    }
                }
            }
        }
        if (!d.is_zero()) out.complex.set_diff(k, std::move(d));
    }
    return out;
}

HolimResult punctured_holim(const CubeDiagram& cube, const Options& opt) {
    cube.validate();
    int n = cube.dimension();
    long m = (1 << n) - 1;
    PosetDiagram poset(m, cube.ring());
    for (long a = 0; a < m; ++a) poset.set_value(a, cube.vertex(static_cast<unsigned>(a + 1)));
    for (long a = 0; a < m; ++a)
        for (long b = 0; b < m; ++b) {
            unsigned ua = static_cast<unsigned>(a + 1), ub = static_cast<unsigned>(b + 1);
            if (ua != ub && (ua & ub) == ua) poset.set_less(a, b);
        }
    poset.transitive_close();
    for (long a = 0; a < m; ++a)
        for (long b = 0; b < m; ++b)
            if (poset.less(a, b)) {
                ChainMap e = cube.edge_path(static_cast<unsigned>(a + 1), static_cast<unsigned>(b + 1));
                ChainMap fixed(poset.value_ptr(a), poset.value_ptr(b));
                fixed.comp = e.comp;
                poset.set_edge(a, b, std::move(fixed));
            }
    return poset_holim(poset, opt);
}

ChainMap holim_map(const HolimResult& a, const HolimResult& b, const std::vector<ChainMap>& vertexwise) {
    if (a.chains != b.chains) throw ValidationError("holim_map needs identical chain sets");
    ChainMap f(share(a.complex), share(b.complex));
    for (auto& [k, blocks] : a.layout.at) {
        if (b.complex.rank(k) == 0 || a.complex.rank(k) == 0) continue;
        SparseMat mk(b.complex.rank(k), a.complex.rank(k));
        for (const HolimLayout::Block& blk : blocks) {
            long top = a.chains[blk.chain].back();
            SparseMat comp = vertexwise.at(top).component(blk.internal);
            auto [toff, trank] = b.layout.find(k, blk.chain);
            if (trank == 0) continue;
            for (long j = 0; j < comp.cols() && j < blk.rank; ++j)
                for (auto& [r, val] : comp.col(j)) mk.add(toff + r, blk.offset + j, val);
        }
        if (!mk.is_zero()) f.set_component(k, std::move(mk));
    }
    return f;
}

ChainMap holim_restriction(const HolimResult& big, const HolimResult& small,
                           const std::vector<long>& elem_map) {
    std::map<std::vector<long>, long> big_id;
    for (long i = 0; i < static_cast<long>(big.chains.size()); ++i) big_id[big.chains[i]] = i;
    std::vector<long> chain_to_big(small.chains.size());
    for (long i = 0; i < static_cast<long>(small.chains.size()); ++i) {
        std::vector<long> mapped;
        for (long e : small.chains[i]) mapped.push_back(elem_map.at(e));
        auto it = big_id.find(mapped);
        if (it == big_id.end()) throw ValidationError("holim_restriction misses a chain");
        chain_to_big[i] = it->second;
    }
    ChainMap f(share(big.complex), share(small.complex));
    for (auto& [k, blocks] : small.layout.at) {
        if (big.complex.rank(k) == 0 || small.complex.rank(k) == 0) continue;
        SparseMat mk(small.complex.rank(k), big.complex.rank(k));
        for (const HolimLayout::Block& blk : blocks) {
            auto [boff, brank] = big.layout.find(k, chain_to_big[blk.chain]);
            if (brank != blk.rank) throw ValidationError("holim_restriction block rank mismatch");
            for (long j = 0; j < blk.rank; ++j) mk.add(blk.offset + j, boff + j, 1);
        }
        if (!mk.is_zero()) f.set_component(k, std::move(mk));
    }
    return f;
}

}  // namespace fcalc
