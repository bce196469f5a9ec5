#include "fcalc/atlas.hpp"

#include <doctest.h>

#include "fcalc/smith.hpp"

using namespace fcalc;

namespace {

HomologyTable tab(const RingSpec& ring, const std::map<int, long>& ranks) {
    HomologyTable t;
    t.ring = ring;
    for (auto& [d, r] : ranks) t.entries[d] = HomologyEntry{r, {}};
    return t;
}

std::map<int, long> space_ranks(const Representation& r) {
    std::map<int, long> out;
    for (auto& [k, rk] : r.space.ranks()) out[k] = rk;
    return out;
}

// the pinched sphere: one vertex, one 2-simplex, every face degenerate
SimplicialSet pinched_sphere() {
    SimplicialSet s;
    s.counts = {1, 0, 1};
    DegenerateFace f{{0, 0}, 0};
    s.faces = {{}, {}, {{f, f, f}}};
    s.basepoint = 0;
    return s;
}

}  // namespace

TEST_CASE("the built in simplicial sets validate and have the right homology") {
    const RingSpec z = RingSpec::Z();
    for (const char* name : {"point", "circle", "interval", "boundary-simplex:3"}) {
        SimplicialSet s = SimplicialSet::named(name);
        s.validate();
    }
    CHECK(homology(SimplicialSet::circle().chains(z)) == tab(z, {{0, 1}, {1, 1}}));
    CHECK(homology(SimplicialSet::interval().chains(z)) == tab(z, {{0, 1}}));
    CHECK(homology(SimplicialSet::point().chains(z, true)) == tab(z, {}));
    CHECK(homology(SimplicialSet::boundary_simplex(3).chains(z, true)) == tab(z, {{2, 1}}));
    // the boundary of a point is empty, and its reduced homology keeps the
    // class of the empty simplex
    CHECK(homology(SimplicialSet::boundary_simplex(0).chains(z, true)) == tab(z, {{-1, 1}}));
}

TEST_CASE("degenerate faces renormalize through the simplicial identities") {
    const RingSpec z = RingSpec::Z();
    SimplicialSet s = pinched_sphere();
    s.validate();
    CHECK(homology(s.chains(z)) == tab(z, {{0, 1}, {2, 1}}));

    DegenerateFace top{{0, 1, 2}, 0};
    DegenerateFace got = s.face_of(top, 0);
    CHECK(got.surj == std::vector<int>{0, 0});
    CHECK_FALSE(got.nondegenerate());
    // a face of the degenerate edge falls back to the vertex
    CHECK(s.face_of(got, 1) == DegenerateFace{{0}, 0});

    SimplicialSet bad;
    bad.counts = {2, 1, 1};
    bad.faces = {{},
                 {{{{0}, 1}, {{0}, 0}}},
                 {{{{0, 1}, 0}, {{0, 0}, 0}, {{0, 1}, 0}}}};
    CHECK_THROWS_AS(bad.validate(), ValidationError);

    SimplicialSet act = SimplicialSet::circle();
    act.actions["rot"] = {{0}, {0}};
    act.validate();
    act.actions["rot"] = {{0}, {1}};
    CHECK_THROWS_AS(act.validate(), ValidationError);
}

TEST_CASE("named simplicial sets parse") {
    CHECK(SimplicialSet::named("boundary-simplex:2").counts == std::vector<long>{3, 3});
    CHECK(SimplicialSet::named("circle").counts == std::vector<long>{1, 1});
    CHECK_THROWS_AS(SimplicialSet::named("torus"), ValidationError);
    CHECK_THROWS_AS(SimplicialSet::named("boundary-simplex:x"), ValidationError);
}

TEST_CASE("the partition complex is one free orbit in one degree") {
    CHECK(space_ranks(partition_complex(2)) == std::map<int, long>{{-1, 1}});
    CHECK(space_ranks(partition_complex(3)) == std::map<int, long>{{0, 2}});
    CHECK(space_ranks(partition_complex(4)) == std::map<int, long>{{1, 6}});
    CHECK(space_ranks(partition_complex(5)) == std::map<int, long>{{2, 24}});
    partition_complex(3).validate();
    partition_complex(4).validate();
    // freeness: the class counts agree over the rationals and over small
    // prime fields
    for (int n : {4, 5}) {
        auto over_z = space_ranks(partition_complex(n));
        CHECK(space_ranks(partition_complex(n, RingSpec::Q())) == over_z);
        CHECK(space_ranks(partition_complex(n, RingSpec::Fp(2))) == over_z);
        CHECK(space_ranks(partition_complex(n, RingSpec::Fp(3))) == over_z);
    }
}

TEST_CASE("lie modules have factorial rank and exact relations") {
    const long expected[] = {1, 1, 2, 6, 24};
    for (int n = 1; n <= 5; ++n) CHECK(lie_module(n).rank == expected[n - 1]);
    for (int n = 2; n <= 4; ++n) lie_module(n).validate();

    GModule lie3 = lie_module(3);
    SparseMat swap(2, 2);
    swap.set(0, 1, 1);
    swap.set(1, 0, 1);
    // the transposition exchanges the two left-normed brackets, so the
    // restriction to it is the regular representation of the two-element group
    CHECK(lie3.gen_t == swap);
    CHECK(character(lie3).by_degree.at(0) == std::vector<Int>{2, 0, -1});
    CHECK(character(lie_module(2)).by_degree.at(0) == std::vector<Int>{1, -1});
}

TEST_CASE("lie three has no integral coinvariants") {
    GModule lie3 = lie_module(3);
    SparseMat rel(2, 4);
    for (int j = 0; j < 2; ++j) {
        for (const auto& [i, v] : lie3.gen_t.col(j)) rel.add(i, j, v);
        rel.add(j, j, -1);
        for (const auto& [i, v] : lie3.gen_c.col(j)) rel.add(i, 2 + j, v);
        rel.add(j, 2 + j, -1);
    }
    SmithResult s = smith_normal_form(rel, false);
    REQUIRE(s.rank == 2);
    CHECK(s.diag == std::vector<Int>{1, 1});
}

TEST_CASE("the partition character twists to the lie character") {
    for (int n = 2; n <= 5; ++n) CHECK(compare_partition_lie(n));
}

TEST_CASE("configuration spaces of the circle match the hand count") {
    SimplicialSet s1 = SimplicialSet::circle();
    const RingSpec z = RingSpec::Z();

    ConfigSpace b2 = config_compactified(s1, 2, true);
    CHECK(space_ranks(b2.rep) == std::map<int, long>{{2, 2}});
    // the two shuffle cells form one free orbit
    CHECK(character(b2.rep).by_degree.at(2) == std::vector<Int>{2, 0});
    b2.rep.validate();

    ConfigSpace u2 = config_compactified(s1, 2, false);
    CHECK(space_ranks(u2.rep) == std::map<int, long>{{1, 1}, {2, 1}});
    u2.rep.validate();

    ConfigSpace b3 = config_compactified(s1, 3, true);
    CHECK(space_ranks(b3.rep) == std::map<int, long>{{3, 6}});
    CHECK(character(b3.rep).by_degree.at(3) == std::vector<Int>{6, 0, 0});
    b3.rep.validate();

    // one point needs no collapse: reduced homology based, full homology not
    CHECK(space_ranks(config_compactified(s1, 1, true).rep) == std::map<int, long>{{1, 1}});
    CHECK(space_ranks(config_compactified(s1, 1, false).rep) ==
          std::map<int, long>{{0, 1}, {1, 1}});
    CHECK(homology(config_compactified(SimplicialSet::boundary_simplex(2), 1, false).cells) ==
          tab(z, {{0, 1}, {1, 1}}));
}

TEST_CASE("the euler count of surviving cells matches the character") {
    SimplicialSet s1 = SimplicialSet::circle();
    for (int n = 1; n <= 3; ++n)
        for (bool based : {false, true}) {
            ConfigSpace c = config_compactified(s1, n, based);
            Int cells = 0;
            for (auto& [d, r] : c.cells.ranks()) cells += (d % 2 == 0 ? r : -r);
            Character ch = character(c.rep);
            REQUIRE(!ch.euler.empty());
            CHECK(ch.euler[0] == cells);
        }
}

TEST_CASE("a theory coefficients are induced sign lines") {
    RegradedRep a2 = a_theory_coefficient(2);
    CHECK(space_ranks(a2.rep) == std::map<int, long>{{1, 1}});
    CHECK(character(a2.rep).by_degree.at(1) == std::vector<Int>{1, -1});
    CHECK(a2.degree == 1);
    CHECK(a2.dual_degree == -1);

    CHECK(space_ranks(a_theory_coefficient(3).rep) == std::map<int, long>{{2, 2}});
    RegradedRep a4 = a_theory_coefficient(4);
    CHECK(space_ranks(a4.rep) == std::map<int, long>{{3, 6}});
    CHECK(a4.degree == 3);
    CHECK(a4.dual_degree == -3);
    a4.rep.validate();
    CHECK(space_ranks(a_theory_coefficient(1).rep) == std::map<int, long>{{0, 1}});
}

TEST_CASE("compactified circle configurations factor through the coefficients") {
    SimplicialSet s1 = SimplicialSet::circle();
    ChainComplex circ = s1.chains(RingSpec::Z());
    for (int n : {2, 3}) {
        ConfigSpace cu = config_compactified(s1, n, false);
        RegradedRep at = a_theory_coefficient(n);
        CHECK(homology(cu.cells) == homology(tensor(circ, at.rep.space)));
        Character cc = character(cu.rep), ca = character(at.rep);
        CHECK(cc.by_degree.at(n - 1) == ca.by_degree.at(n - 1));
        CHECK(cc.by_degree.at(n) == ca.by_degree.at(n - 1));
    }
}

TEST_CASE("identity derivatives regrade the partition classes") {
    RegradedRep d2 = identity_derivative(2);
    CHECK(space_ranks(d2.rep) == std::map<int, long>{{1, 1}});
    CHECK(character(d2.rep).by_degree.at(1) == std::vector<Int>{1, 1});
    CHECK(d2.degree == 1);
    CHECK(d2.dual_degree == -1);

    RegradedRep d3 = identity_derivative(3);
    CHECK(space_ranks(d3.rep) == std::map<int, long>{{2, 2}});
    CHECK(character(d3.rep).by_degree.at(2) ==
          character(partition_complex(3)).by_degree.at(0));
    d3.rep.validate();

    CHECK(space_ranks(identity_derivative(4).rep) == std::map<int, long>{{3, 6}});
}

TEST_CASE("atlas caps and validation errors") {
    CHECK_THROWS_AS(partition_complex(1), ValidationError);
    CHECK_THROWS_AS(partition_complex(8), BudgetError);
    CHECK_THROWS_AS(lie_module(0), ValidationError);
    CHECK_THROWS_AS(lie_module(8), BudgetError);
    CHECK_THROWS_AS(config_compactified(SimplicialSet::circle(), 0, false), ValidationError);

    SimplicialSet nobase = SimplicialSet::circle();
    nobase.basepoint.reset();
    CHECK_THROWS_AS(config_compactified(nobase, 2, true), ValidationError);

    Options tight;
    tight.budget = 3;
    CHECK_THROWS_AS(config_compactified(SimplicialSet::circle(), 2, false, RingSpec::Z(), tight),
                    BudgetError);
    Options small;
    small.budget = 10;
    CHECK_THROWS_AS(partition_complex(4, RingSpec::Z(), small), BudgetError);
}
