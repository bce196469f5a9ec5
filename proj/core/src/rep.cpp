#include "fcalc/rep.hpp"

#include <algorithm>
#include <deque>

#include "fcalc/smith.hpp"

namespace fcalc {

namespace {

SparseMat identity_of(long r) { return SparseMat::identity(r); }

// Word in the generators (0 = t, 1 = c) multiplying left to right onto the
// identity; perm_of(word) = g_{w_k} o ... o g_{w_1}.
std::vector<int> generator_word(int n, const Perm& target) {
    if (!is_permutation(target) || (int)target.size() != n)
        throw ValidationError("action of a non-permutation requested");
    Perm t = transposition_gen(n), c = full_cycle_gen(n);
    std::map<Perm, std::vector<int>> words;
    std::deque<Perm> queue;
    words[perm_identity(n)] = {};
    queue.push_back(perm_identity(n));
    while (!queue.empty()) {
        Perm cur = queue.front();
        queue.pop_front();
        if (cur == target) return words[cur];
        int gi = 0;
        for (const Perm& g : {t, c}) {
            Perm next = perm_compose(g, cur);
            if (!words.count(next)) {
                auto w = words[cur];
                w.push_back(gi);
                words[next] = std::move(w);
                queue.push_back(next);
            }
            ++gi;
        }
    }
    throw ValidationError("generators failed to reach the permutation");
}

}  // namespace

SparseMat Representation::action_t(int k) const {
    auto it = act_t.find(k);
    return it == act_t.end() ? identity_of(space.rank(k)) : it->second;
}

SparseMat Representation::action_c(int k) const {
    auto it = act_c.find(k);
    return it == act_c.end() ? identity_of(space.rank(k)) : it->second;
}

SparseMat Representation::action(int k, const Perm& p) const {
    SparseMat out = identity_of(space.rank(k));
    SparseMat gens[2] = {action_t(k), action_c(k)};
    for (int g : generator_word(n, p)) out = gens[g] * out;
    return out;
}

void Representation::validate() const {
    space.validate();
    if (n < 1) throw ValidationError("group order parameter must be positive");
    for (const auto& [k, r] : space.ranks()) {
        SparseMat gens[2] = {action_t(k), action_c(k)};
        for (const auto& g : gens)
            if (g.rows() != r || g.cols() != r)
                throw ValidationError("action matrix shape mismatch at degree " +
                                      std::to_string(k));
        // Expand the group; meeting an element twice must give equal matrices.
        Perm tp = transposition_gen(n), cp = full_cycle_gen(n);
        std::map<Perm, SparseMat> reached;
        std::deque<Perm> queue;
        reached.emplace(perm_identity(n), identity_of(r));
        queue.push_back(perm_identity(n));
        while (!queue.empty()) {
            Perm cur = queue.front();
            queue.pop_front();
            SparseMat mcur = reached.at(cur);
            int gi = 0;
            for (const Perm& g : {tp, cp}) {
                Perm next = perm_compose(g, cur);
                SparseMat mnext = gens[gi] * mcur;
                auto it = reached.find(next);
                if (it == reached.end()) {
                    reached.emplace(next, std::move(mnext));
                    queue.push_back(next);
                } else if (!(it->second == mnext)) {
                    throw ValidationError("group relations fail at degree " + std::to_string(k));
                }
                ++gi;
            }
        }
    }
    // With a differential present the generators must be chain maps.
    auto sp = share(space);
    for (const auto* acts : {&act_t, &act_c}) {
        ChainMap f(sp, sp);
        for (const auto& [k, r] : space.ranks()) {
            (void)r;
            SparseMat a = (acts == &act_t) ? action_t(k) : action_c(k);
            f.set_component(k, std::move(a));
        }
        f.validate();
    }
}

GModule GModule::trivial(Group g, int n, RingSpec ring, long rank) {
    GModule m;
    m.group = g;
    m.n = n;
    m.ring = ring;
    m.rank = rank;
    m.gen_t = SparseMat::identity(rank);
    m.gen_c = SparseMat::identity(rank);
    return m;
}

SparseMat GModule::action(const Perm& p) const {
    if (group != Group::Symmetric)
        throw ValidationError("permutation action requested from a cyclic module");
    SparseMat out = identity_of(rank);
    SparseMat gens[2] = {gen_t, gen_c};
    for (int g : generator_word(n, p)) out = gens[g] * out;
    return out;
}

SparseMat GModule::action_power(long k) const {
    if (group != Group::Cyclic)
        throw ValidationError("cyclic power action requested from a symmetric module");
    long e = ((k % n) + n) % n;
    SparseMat out = identity_of(rank);
    for (long i = 0; i < e; ++i) out = gen_c * out;
    return out;
}

void GModule::validate() const {
    if (n < 1) throw ValidationError("group order parameter must be positive");
    if (rank < 0) throw ValidationError("negative module rank");
    if (group == Group::Cyclic) {
        if (gen_c.rows() != rank || gen_c.cols() != rank)
            throw ValidationError("generator matrix shape mismatch");
        SparseMat p = identity_of(rank);
        for (int i = 0; i < n; ++i) p = gen_c * p;
        if (!(p == identity_of(rank))) throw ValidationError("cyclic generator order violated");
        return;
    }
    Representation r;
    r.n = n;
    ChainComplex sp(ring);
    sp.set_rank(0, rank);
    r.space = std::move(sp);
    if (rank > 0) {
        r.act_t[0] = gen_t;
        r.act_c[0] = gen_c;
    }
    r.validate();
}

namespace {

Int trace_of(const SparseMat& m) {
    Int tr = 0;
    for (long j = 0; j < m.cols(); ++j) tr += m.at(j, j);
    return tr;
}

Int normalize_trace(Int tr, const RingSpec& ring) {
    if (ring.kind == RingSpec::Kind::Fp) {
        Int p = ring.p;
        Int r = tr % p;
        if (r < 0) r += p;
        return r;
    }
    return tr;
}

}  // namespace

Character character(const Representation& r) {
    Character ch;
    ch.n = r.n;
    ch.ring = r.space.ring();
    auto parts = partitions(r.n);
    for (const auto& part : parts) ch.class_names.push_back(partition_key(part));
    ch.euler.assign(parts.size(), 0);
    for (const auto& [k, rank] : r.space.ranks()) {
        (void)rank;
        std::vector<Int> row;
        for (size_t ci = 0; ci < parts.size(); ++ci) {
            Int tr = normalize_trace(trace_of(r.action(k, canonical_of_cycle_type(parts[ci]))),
                                     ch.ring);
            row.push_back(tr);
            Int signed_tr = (k % 2 == 0) ? tr : -tr;
            ch.euler[ci] = normalize_trace(ch.euler[ci] + signed_tr, ch.ring);
        }
        ch.by_degree[k] = std::move(row);
    }
    return ch;
}

Character character(const GModule& m) {
    Character ch;
    ch.n = m.n;
    ch.ring = m.ring;
    std::vector<Int> row;
    if (m.group == GModule::Group::Symmetric) {
        for (const auto& part : partitions(m.n)) {
            ch.class_names.push_back(partition_key(part));
            row.push_back(normalize_trace(trace_of(m.action(canonical_of_cycle_type(part))),
                                          m.ring));
        }
    } else {
        for (int k = 0; k < m.n; ++k) {
            ch.class_names.push_back(std::to_string(k));
            row.push_back(normalize_trace(trace_of(m.action_power(k)), m.ring));
        }
    }
    ch.euler = row;
    ch.by_degree[0] = std::move(row);
    return ch;
}

Representation induce(const GModule& m, int degree) {
    if (m.group != GModule::Group::Cyclic)
        throw ValidationError("induction is implemented from the cyclic subgroup only");
    m.validate();
    const int n = m.n;
    // The subgroup elements as permutations: powers of the full cycle.
    std::vector<Perm> subgroup;
    {
        Perm c = full_cycle_gen(n), cur = perm_identity(n);
        for (int i = 0; i < n; ++i) {
            subgroup.push_back(cur);
            cur = perm_compose(c, cur);
        }
    }
    auto power_of = [&](const Perm& h) -> long {
        for (size_t i = 0; i < subgroup.size(); ++i)
            if (subgroup[i] == h) return (long)i;
        throw ValidationError("element is not in the cyclic subgroup");
    };
    // Left cosets keyed by their lexicographically least representative.
    std::map<Perm, std::vector<Perm>> cosets;
    for (const Perm& g : all_perms(n)) {
        Perm least = g;
        for (const Perm& h : subgroup) least = std::min(least, perm_compose(g, h));
        cosets[least].push_back(g);
    }
    std::vector<Perm> transversal;
    for (const auto& [rep, members] : cosets) {
        (void)members;
        transversal.push_back(rep);
    }
    std::map<Perm, long> coset_index;
    for (long i = 0; i < (long)transversal.size(); ++i) {
        for (const Perm& h : subgroup) coset_index[perm_compose(transversal[i], h)] = i;
    }

    const long r = m.rank;
    const long total = (long)transversal.size() * r;
    Representation out;
    out.n = n;
    ChainComplex sp(m.ring);
    sp.set_rank(degree, total);
    out.space = std::move(sp);

    auto build = [&](const Perm& sigma) {
        SparseMat a(total, total);
        for (long i = 0; i < (long)transversal.size(); ++i) {
            Perm moved = perm_compose(sigma, transversal[i]);
            long j = coset_index.at(moved);
            Perm h = perm_compose(perm_inverse(transversal[j]), moved);
            SparseMat hm = m.action_power(power_of(h));
            for (long col = 0; col < r; ++col)
                for (const auto& [row, v] : hm.col(col)) a.set(j * r + row, i * r + col, v);
        }
        return a;
    };
    if (total > 0) {
        out.act_t[degree] = build(transposition_gen(n));
        out.act_c[degree] = build(full_cycle_gen(n));
    }
    return out;
}

Representation sign_twist(const Representation& r) {
    if (r.n < 2) return r;  // Σ_1: the sign character is trivial
    Representation out = r;
    int csign = perm_sign(full_cycle_gen(r.n));
    for (auto& [k, m] : out.act_t) m = m.negated();
    if (csign < 0)
        for (auto& [k, m] : out.act_c) m = m.negated();
    // Degrees acting as the identity must also flip.
    for (const auto& [k, rank] : out.space.ranks()) {
        if (!out.act_t.count(k)) out.act_t[k] = identity_of(rank).negated();
        if (csign < 0 && !out.act_c.count(k)) out.act_c[k] = identity_of(rank).negated();
    }
    return out;
}

GModule sign_twist(const GModule& m) {
    if (m.n < 2) return m;
    GModule out = m;
    if (m.group == GModule::Group::Symmetric) {
        out.gen_t = out.gen_t.negated();
        if (perm_sign(full_cycle_gen(m.n)) < 0) out.gen_c = out.gen_c.negated();
    } else {
        if (perm_sign(full_cycle_gen(m.n)) < 0) out.gen_c = out.gen_c.negated();
    }
    return out;
}

GroupHomologyResult group_homology(const GModule& m, int degree_cap, const Options& opt) {
    m.validate();
    if (degree_cap < 0) throw ValidationError("degree cap must be nonnegative");
    // Materialize the group: element list, multiplication table, action.
    std::vector<SparseMat> action;
    std::vector<std::vector<long>> mult;
    long order = 0;
    if (m.group == GModule::Group::Symmetric) {
        auto elems = all_perms(m.n);
        order = (long)elems.size();
        std::map<Perm, long> index;
        for (long i = 0; i < order; ++i) index[elems[i]] = i;
        mult.assign(order, std::vector<long>(order));
        for (long i = 0; i < order; ++i)
            for (long j = 0; j < order; ++j)
                mult[i][j] = index.at(perm_compose(elems[i], elems[j]));
        for (long i = 0; i < order; ++i) action.push_back(m.action(elems[i]));
    } else {
        order = m.n;
        mult.assign(order, std::vector<long>(order));
        for (long i = 0; i < order; ++i)
            for (long j = 0; j < order; ++j) mult[i][j] = (i + j) % order;
        for (long i = 0; i < order; ++i) action.push_back(m.action_power(i));
    }

    const long r = m.rank;
    const int top = degree_cap + 1;
    ChainComplex bar(m.ring);
    long size = r;
    for (int k = 0; k <= top; ++k) {
        check_budget(size, opt.budget, "group_homology bar resolution");
        bar.set_rank(k, size);
        if (k < top) size *= order;
    }
    // index of [g_1|...|g_k] (x) m_a: Horner in the g's, module index last
    auto tuple_index = [&](const std::vector<long>& gs, long a) {
        long idx = 0;
        for (long g : gs) idx = idx * order + g;
        return idx * r + a;
    };
    for (int k = 1; k <= top; ++k) {
        SparseMat d(bar.rank(k - 1), bar.rank(k));
        std::vector<long> tuple(k, 0);
        while (true) {
            for (long a = 0; a < r; ++a) {
                long col = tuple_index(tuple, a);
                // drop the first entry
                {
                    std::vector<long> t2(tuple.begin() + 1, tuple.end());
                    d.add(tuple_index(t2, a), col, 1);
                }
                // merge neighbours
                for (int i = 1; i <= k - 1; ++i) {
                    std::vector<long> t2;
                    t2.reserve(k - 1);
                    for (int q = 0; q < i - 1; ++q) t2.push_back(tuple[q]);
                    t2.push_back(mult[tuple[i - 1]][tuple[i]]);
                    for (int q = i + 1; q < k; ++q) t2.push_back(tuple[q]);
                    d.add(tuple_index(t2, a), col, (i % 2) ? -1 : 1);
                }
                // act with the last entry on the module
                {
                    std::vector<long> t2(tuple.begin(), tuple.end() - 1);
                    const SparseMat& ga = action[tuple[k - 1]];
                    int sgn = (k % 2) ? -1 : 1;
                    for (const auto& [row, v] : ga.col(a))
                        d.add(tuple_index(t2, row), col, sgn * v);
                }
            }
            int pos = k - 1;
            while (pos >= 0 && tuple[pos] == order - 1) tuple[pos--] = 0;
            if (pos < 0) break;
            ++tuple[pos];
        }
        if (!d.is_zero()) bar.set_diff(k, std::move(d));
    }
    bar.validate();
    HomologyTable full = homology(bar);
    GroupHomologyResult out;
    out.certified_through = degree_cap;
    out.table = full.restricted(0, degree_cap);
    return out;
}

long invariants_rank(const Representation& r, int degree) {
    long rank = r.space.rank(degree);
    if (rank == 0) return 0;
    SparseMat t = r.action_t(degree), c = r.action_c(degree);
    SparseMat stacked(2 * rank, rank);
    for (long j = 0; j < rank; ++j) {
        for (const auto& [i, v] : t.col(j)) stacked.add(i, j, v);
        stacked.add(j, j, -1);
        for (const auto& [i, v] : c.col(j)) stacked.add(rank + i, j, v);
        stacked.add(rank + j, j, -1);
    }
    return rank - rank_over_Q(stacked);
}

long invariants_rank(const GModule& m) {
    if (m.rank == 0) return 0;
    if (m.group == GModule::Group::Symmetric) {
        Representation r;
        r.n = m.n;
        ChainComplex sp(m.ring);
        sp.set_rank(0, m.rank);
        r.space = std::move(sp);
        r.act_t[0] = m.gen_t;
        r.act_c[0] = m.gen_c;
        return invariants_rank(r, 0);
    }
    SparseMat a = m.gen_c;
    for (long j = 0; j < m.rank; ++j) a.add(j, j, -1);
    return m.rank - rank_over_Q(a);
}

}  // namespace fcalc
