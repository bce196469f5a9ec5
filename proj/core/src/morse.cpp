#include "fcalc/morse.hpp"

#include <deque>
#include <map>

namespace fcalc {

namespace {

struct Gen {
    int degree;
    long index;  // index within its degree in the original complex
};

}  // namespace

struct MorseReduction::Impl {
    // Original generator table; global ids are dense, degree blocks ascending.
    std::vector<Gen> gens;
    std::map<int, long> offset;  // degree -> first global id

    struct Step {
        long a, b;  // cancelled pair, deg(a) = deg(b) + 1
        Int u;      // d(a)_b = +-1
        std::vector<std::pair<long, Int>> col_a;  // d(a) at elimination time, b excluded
        std::vector<std::pair<long, Int>> row_b;  // {g : d(g)_b}, a excluded
    };
    std::vector<Step> steps;

    // surviving generators, original order
    std::map<int, std::vector<long>> survivors;
    std::map<long, long> reduced_index;  // global id -> index in its degree

    long gid(int degree, long index) const {
        auto it = offset.find(degree);
        return it->second + index;
    }
};

MorseReduction morse_reduce(const ChainComplex& c) {
    auto impl = std::make_shared<MorseReduction::Impl>();
    long total = 0;
    for (const auto& [k, r] : c.ranks()) {
        impl->offset[k] = total;
        for (long i = 0; i < r; ++i) impl->gens.push_back({k, i});
        total += r;
    }

    // down[g] = differential column of g; up[h] = set of g with h in down[g]
    std::vector<std::map<long, Int>> down(total);
    std::vector<std::map<long, char>> up(total);
    std::vector<char> alive(total, 1);

    for (const auto& [k, d] : c.diffs()) {
        if (c.rank(k) == 0 || c.rank(k - 1) == 0) continue;
        long src_off = impl->offset.at(k), dst_off = impl->offset.at(k - 1);
        for (long j = 0; j < d.cols(); ++j)
            for (const auto& [i, v] : d.col(j)) {
                down[src_off + j][dst_off + i] = v;
                up[dst_off + i][src_off + j] = 1;
            }
    }

    auto is_unit = [](const Int& v) { return v == 1 || v == -1; };

    std::deque<std::pair<long, long>> queue;  // (a, b) candidates
    for (long a = 0; a < total; ++a)
        for (const auto& [b, v] : down[a])
            if (is_unit(v)) queue.emplace_back(a, b);

    while (!queue.empty()) {
        auto [a, b] = queue.front();
        queue.pop_front();
        if (!alive[a] || !alive[b]) continue;
        auto it = down[a].find(b);
        if (it == down[a].end() || !is_unit(it->second)) continue;

        Int u = it->second;
        MorseReduction::Impl::Step step;
        step.a = a;
        step.b = b;
        step.u = u;
        for (const auto& [y, v] : down[a])
            if (y != b) step.col_a.emplace_back(y, v);
        for (const auto& [g, one] : up[b]) {
            (void)one;
            if (g != a) step.row_b.emplace_back(g, down[g].at(b));
        }

        // column ops: d(g) -= d(g)_b * u^{-1} * d(a) for all other g hitting b
        for (const auto& [g, coeff] : step.row_b) {
            Int factor = coeff * u;  // u^{-1} = u for units
            for (const auto& [y, v] : down[a]) {
                if (y == b) continue;
                Int& entry = down[g][y];
                entry -= factor * v;
                if (entry == 0) {
                    down[g].erase(y);
                    up[y].erase(g);
                } else {
                    up[y][g] = 1;
                    if (is_unit(entry)) queue.emplace_back(g, y);
                }
            }
            down[g].erase(b);
        }
        // detach a and b entirely
        for (const auto& [y, v] : down[a]) up[y].erase(a);
        down[a].clear();
        for (const auto& [g, one] : up[a]) {
            (void)one;
            down[g].erase(a);
        }
        up[a].clear();
        up[b].clear();
        for (const auto& [y, v] : down[b]) up[y].erase(b);
        down[b].clear();
        alive[a] = alive[b] = 0;
        impl->steps.push_back(std::move(step));
    }

    for (long g = 0; g < total; ++g)
        if (alive[g]) {
            auto& vec = impl->survivors[impl->gens[g].degree];
            impl->reduced_index[g] = (long)vec.size();
            vec.push_back(g);
        }

    ChainComplex red(c.ring());
    for (const auto& [k, v] : impl->survivors) red.set_rank(k, (long)v.size());
    for (const auto& [k, v] : impl->survivors) {
        auto below = impl->survivors.find(k - 1);
        if (below == impl->survivors.end()) continue;
        SparseMat d((long)below->second.size(), (long)v.size());
        for (long j = 0; j < (long)v.size(); ++j)
            for (const auto& [y, val] : down[v[j]]) d.set(impl->reduced_index.at(y), j, val);
        if (!d.is_zero()) red.set_diff(k, std::move(d));
    }

    MorseReduction out;
    out.impl_ = impl;
    out.reduced_ = std::move(red);
    return out;
}

std::vector<Int> MorseReduction::push(int degree, const std::vector<Int>& v) const {
    const Impl& im = *impl_;
    std::map<long, Int> w;
    auto off = im.offset.find(degree);
    for (long i = 0; i < (long)v.size(); ++i)
        if (v[i] != 0) w[off->second + i] = v[i];
    for (const auto& st : im.steps) {
        // p(a) = 0; p(b) = -u^{-1}(d(a) - u b); identity elsewhere
        auto ita = w.find(st.a);
        if (ita != w.end()) w.erase(ita);
        auto itb = w.find(st.b);
        if (itb != w.end()) {
            Int coeff = itb->second * st.u;  // v_b * u^{-1}
            w.erase(itb);
            for (const auto& [y, val] : st.col_a) {
                Int& e = w[y];
                e -= coeff * val;
                if (e == 0) w.erase(y);
            }
        }
    }
    auto surv = im.survivors.find(degree);
    long n = surv == im.survivors.end() ? 0 : (long)surv->second.size();
    std::vector<Int> out(n, Int(0));
    for (const auto& [g, val] : w) out[im.reduced_index.at(g)] = val;
    return out;
}

std::vector<Int> MorseReduction::lift(int degree, const std::vector<Int>& v) const {
    const Impl& im = *impl_;
    std::map<long, Int> w;
    auto surv = im.survivors.find(degree);
    if (surv != im.survivors.end())
        for (long i = 0; i < (long)v.size(); ++i)
            if (v[i] != 0) w[surv->second[i]] = v[i];
    // i(x) = x - u^{-1} d(x)_b a, replayed in reverse elimination order
    for (auto it = im.steps.rbegin(); it != im.steps.rend(); ++it) {
        Int acc = 0;
        for (const auto& [g, coeff] : it->row_b) {
            auto f = w.find(g);
            if (f != w.end()) acc += f->second * coeff;
        }
        if (acc != 0) {
            Int val = -acc * it->u;  // -u^{-1} * acc
            if (val != 0) w[it->a] = val;
        }
    }
    long n = 0;
    auto off = im.offset.find(degree);
    if (off != im.offset.end()) {
        long base = off->second;
        auto next = std::next(off);
        long end = next == im.offset.end() ? (long)im.gens.size() : next->second;
        n = end - base;
        std::vector<Int> out(n, Int(0));
        for (const auto& [g, val] : w) out[g - base] = val;
        return out;
    }
    return {};
}

ChainMap MorseReduction::transport(const MorseReduction& src_red, const MorseReduction& dst_red,
                                   const ChainMap& f) {
    auto rs = share(src_red.reduced());
    auto rd = share(dst_red.reduced());
    ChainMap out(rs, rd);
    for (const auto& [k, r] : rs->ranks()) {
        long rows = rd->rank(k);
        if (rows == 0) continue;
        SparseMat m(rows, r);
        SparseMat fk = f.component(k);
        for (long j = 0; j < r; ++j) {
            std::vector<Int> e(r, Int(0));
            e[j] = 1;
            std::vector<Int> big = src_red.lift(k, e);
            std::vector<Int> img = fk.apply(big);
            std::vector<Int> small = dst_red.push(k, img);
            for (long i = 0; i < rows; ++i)
                if (small[i] != 0) m.set(i, j, small[i]);
        }
        if (!m.is_zero()) out.set_component(k, std::move(m));
    }
    return out;
}

}  // namespace fcalc
