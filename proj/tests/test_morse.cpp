#include <random>

#include "doctest.h"
#include "fcalc/chain.hpp"
#include "fcalc/morse.hpp"
#include "fcalc/smith.hpp"

using namespace fcalc;

namespace {

std::vector<Int> random_vector(std::mt19937_64& rng, long n) {
    std::vector<Int> v(n, Int(0));
    for (long i = 0; i < n; ++i) v[i] = (long)(rng() % 7) - 3;
    return v;
}

}  // namespace

TEST_CASE("reduction leaves no unit pivots and preserves betti numbers") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 15; ++trial) {
        ChainComplex c = random_complex(RingSpec::Z(), rng, -1, 3, 8);
        MorseReduction red = morse_reduce(c);
        const ChainComplex& r = red.reduced();
        r.validate();
        for (const auto& [k, d] : r.diffs())
            for (long j = 0; j < d.cols(); ++j)
                for (const auto& [i, v] : d.col(j)) {
                    (void)i;
                    CHECK(v != 1);
                    CHECK(v != -1);
                }
        // betti numbers over Q computed directly on both complexes
        for (const auto& [k, nk] : c.ranks()) {
            long orig = nk - rank_over_Q(c.diff(k)) - rank_over_Q(c.diff(k + 1));
            long small = r.rank(k) - rank_over_Q(r.diff(k)) - rank_over_Q(r.diff(k + 1));
            CHECK(orig == small);
        }
    }
}

TEST_CASE("section and retraction satisfy the deformation retract identities") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 12; ++trial) {
        ChainComplex c = random_complex(RingSpec::Z(), rng, 0, 3, 8);
        MorseReduction red = morse_reduce(c);
        const ChainComplex& r = red.reduced();

        for (const auto& [k, nr] : r.ranks()) {
            // p . i = id on the reduced complex
            for (long j = 0; j < nr; ++j) {
                std::vector<Int> e(nr, Int(0));
                e[j] = 1;
                auto back = red.push(k, red.lift(k, e));
                CHECK(back == e);
            }
            // d . i = i . d  (the section is a chain map)
            std::vector<Int> v = random_vector(rng, nr);
            auto lifted = red.lift(k, v);
            auto d_lift = c.diff(k).apply(lifted);
            auto lift_d = red.lift(k - 1, r.diff(k).apply(v));
            CHECK(d_lift == lift_d);
        }
        // p . d = d . p on random original chains
        for (const auto& [k, nk] : c.ranks()) {
            std::vector<Int> v = random_vector(rng, nk);
            auto p_d = red.push(k - 1, c.diff(k).apply(v));
            auto d_p = r.diff(k).apply(red.push(k, v));
            CHECK(p_d == d_p);
        }
    }
}

TEST_CASE("transport of the identity is the identity") {
    std::mt19937_64 rng(13);
    ChainComplex c = random_complex(RingSpec::Z(), rng, 0, 3, 8);
    MorseReduction red = morse_reduce(c);
    ChainMap id = ChainMap::identity(share(c));
    ChainMap t = MorseReduction::transport(red, red, id);
    t.validate();
    for (const auto& [k, r] : red.reduced().ranks())
        CHECK(t.component(k) == SparseMat::identity(r));
}

TEST_CASE("transport carries chain maps to chain maps") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 8; ++trial) {
        ChainComplex a = random_complex(RingSpec::Z(), rng, 0, 3, 6);
        // f: a -> a shifted sum, use multiplication by n on the identity
        auto sa = share(a);
        ChainMap f(sa, sa);
        for (const auto& [k, r] : a.ranks()) {
            SparseMat m = SparseMat::identity(r).scaled(2);
            f.set_component(k, m);
        }
        f.validate();
        MorseReduction red = morse_reduce(a);
        ChainMap t = MorseReduction::transport(red, red, f);
        t.validate();
        for (const auto& [k, r] : red.reduced().ranks())
            CHECK(t.component(k) == SparseMat::identity(r).scaled(2));
    }
}

TEST_CASE("reduction of an acyclic complex is empty") {
    ChainComplex disk(RingSpec::Z());
    disk.set_rank(4, 1);
    disk.set_rank(5, 1);
    SparseMat d(1, 1);
    d.set(0, 0, -1);
    disk.set_diff(5, std::move(d));
    MorseReduction red = morse_reduce(disk);
    CHECK(red.reduced().empty());
}
