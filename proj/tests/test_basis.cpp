#include <doctest.h>

#include <random>

#include "fcalc/basis.hpp"
#include "fcalc/chain.hpp"

using namespace fcalc;

namespace {

ChainComplex two_spheres(RingSpec ring, int degree) {
    ChainComplex c(ring);
    c.set_rank(degree, 2);
    return c;
}

}  // namespace

TEST_CASE("class coordinates invert representatives") {
    std::mt19937_64 rng(21);
    for (RingSpec ring : {RingSpec::Z(), RingSpec::Q(), RingSpec::Fp(3)}) {
        for (int trial = 0; trial < 8; ++trial) {
            ChainComplex c = random_complex(ring, rng, -1, 3, 3);
            HomologyClasses hc(c);
            for (auto& [k, e] : hc.table().entries) {
                long n = hc.basis_rank(k);
                for (long j = 0; j < n; ++j) {
                    std::vector<Int> rep = hc.representative(k, j);
                    std::vector<Int> coords = hc.coordinates(k, rep);
                    REQUIRE(static_cast<long>(coords.size()) == n);
                    for (long i = 0; i < n; ++i) CHECK(coords[i] == (i == j ? 1 : 0));
                }
            }
        }
    }
}

TEST_CASE("induced maps on homology classes") {
    // swap on two zero-spheres
    auto c = share(two_spheres(RingSpec::Z(), 0));
    ChainMap sw(c, c);
    SparseMat m(2, 2);
    m.add(0, 1, 1);
    m.add(1, 0, 1);
    sw.set_component(0, m);
    sw.validate();
    HomologyClasses hc(*c);
    SparseMat ind = HomologyClasses::induced(hc, hc, sw, 0);
    CHECK(ind.rows() == 2);
    CHECK(ind.at(0, 1) == 1);
    CHECK(ind.at(1, 0) == 1);
    CHECK(ind.at(0, 0) == 0);

    // multiplication by 2 on a 2-sphere
    auto s2 = share(sphere(RingSpec::Z(), 2));
    ChainMap dbl(s2, s2);
    SparseMat d2(1, 1);
    d2.add(0, 0, 2);
    dbl.set_component(2, d2);
    HomologyClasses h2(*s2);
    CHECK(HomologyClasses::induced(h2, h2, dbl, 2).at(0, 0) == 2);
}

TEST_CASE("mod p classes see torsion that vanishes rationally") {
    // Moore complex M(Z/2, 1)
    ChainComplex mz(RingSpec::Fp(2));
    mz.set_rank(1, 1);
    mz.set_rank(2, 1);
    SparseMat d(1, 1);
    d.add(0, 0, 2);
    mz.set_diff(2, d);
    HomologyClasses hp(mz);
    CHECK(hp.basis_rank(1) == 1);
    CHECK(hp.basis_rank(2) == 1);
    std::vector<Int> rep = hp.representative(1, 0);
    auto coords = hp.coordinates(1, rep);
    CHECK(coords == std::vector<Int>{1});

    ChainComplex mq = mz;
    ChainComplex mqq(RingSpec::Q());
    mqq.set_rank(1, 1);
    mqq.set_rank(2, 1);
    mqq.set_diff(2, d);
    HomologyClasses hq(mqq);
    CHECK(hq.basis_rank(1) == 0);
    CHECK(hq.basis_rank(2) == 0);

    ChainComplex mzz(RingSpec::Z());
    mzz.set_rank(1, 1);
    mzz.set_rank(2, 1);
    mzz.set_diff(2, d);
    HomologyClasses hz(mzz);
    CHECK(hz.basis_rank(1) == 0);  // pure torsion has no free classes
    CHECK(hz.table().at(1).torsion == std::vector<Int>{2});
}

TEST_CASE("coordinates of boundaries vanish") {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 6; ++trial) {
        ChainComplex c = random_complex(RingSpec::Z(), rng, 0, 3, 3);
        HomologyClasses hc(c);
        for (auto& [k, dk] : c.diffs()) {
            if (c.rank(k) == 0 || c.rank(k - 1) == 0) continue;
            std::vector<Int> v(c.rank(k), 0);
            for (long j = 0; j < c.rank(k); ++j) v[j] = (j * 7 + 3) % 5 - 2;
            std::vector<Int> b = dk.apply(v);
            std::vector<Int> coords = hc.coordinates(k - 1, b);
            for (const Int& x : coords) CHECK(x == 0);
        }
    }
}
