#include <doctest.h>

#include <bit>
#include <map>
#include <random>
#include <set>

#include "fcalc/calculus.hpp"
#include "fcalc/chain.hpp"
#include "fcalc/functor.hpp"
#include "fcalc/perm.hpp"
#include "fcalc/rep.hpp"

using namespace fcalc;

namespace {

HomologyTable tab(RingSpec ring, std::map<int, long> ranks) {
    HomologyTable t;
    t.ring = ring;
    for (auto& [k, r] : ranks)
        if (r > 0) t.entries[k].rank = r;
    return t;
}

Int trace_of(const SparseMat& m) {
    Int t = 0;
    for (long j = 0; j < m.cols(); ++j)
        for (auto& [r, v] : m.col(j))
            if (r == j) t += v;
    return t;
}

// rank 1 in degrees d and d-1 with the identity differential
ChainComplex disk(RingSpec ring, int d) {
    ChainComplex c(ring);
    c.set_rank(d, 1);
    c.set_rank(d - 1, 1);
    SparseMat m(1, 1);
    m.add(0, 0, 1);
    c.set_diff(d, std::move(m));
    return c;
}

Representation trivial_rep(RingSpec ring, int n) {
    Representation r;
    r.n = n;
    r.space = sphere(ring, 0);
    return r;
}

bool maps_equal(const ChainMap& a, const ChainMap& b) {
    std::set<int> keys;
    for (auto& [k, m] : a.comp) keys.insert(k);
    for (auto& [k, m] : b.comp) keys.insert(k);
    for (int k : keys)
        if (!(a.component(k) == b.component(k))) return false;
    return true;
}

}  // namespace

// --- cross effects -----------------------------------------------------------

TEST_CASE("first cross effects reduce the functor against the zero object") {
    ExprFunctor id(FunctorExpr::identity());
    ChainComplex x = direct_sum(sphere(RingSpec::Z(), 1), sphere(RingSpec::Z(), 3));
    CrossEffect ce = cross_effect(id, 1, {x});
    CHECK(homology(ce.total.complex) == homology(x));

    ExprFunctor c(FunctorExpr::constant(sphere(RingSpec::Z(), 2)));
    CrossEffect cc = cross_effect(c, 1, {x});
    CHECK(is_acyclic(cc.total.complex));
}

TEST_CASE("cross effects of the tensor square have the mixed-term ranks") {
    ExprFunctor sq(FunctorExpr::tensor_power(2));
    ChainComplex s0 = sphere(RingSpec::Z(), 0), s1 = sphere(RingSpec::Z(), 1);

    CrossEffect c2 = cross_effect(sq, 2, {s0, s0});
    CHECK(homology(c2.total.complex) == tab(RingSpec::Z(), {{0, 2}}));

    CrossEffect c2s = cross_effect(sq, 2, {s1, s1});
    CHECK(homology(c2s.total.complex) == tab(RingSpec::Z(), {{2, 2}}));

    CrossEffect c3 = cross_effect(sq, 3, {s0, s0, s0});
    CHECK(is_acyclic(c3.total.complex));

    CHECK_THROWS_AS(cross_effect(sq, 2, {s0}), ValidationError);
    CHECK_THROWS_AS(cross_effect(sq, 0, {}), ValidationError);
}

TEST_CASE("cross effects only see the homotopy type of the inputs") {
    ExprFunctor sq(FunctorExpr::tensor_power(2));
    ChainComplex s0 = sphere(RingSpec::Z(), 0);
    ChainComplex fat = direct_sum(direct_sum(s0, disk(RingSpec::Z(), 2)), disk(RingSpec::Z(), 1));
    CrossEffect lean = cross_effect(sq, 2, {s0, s0});
    CrossEffect bloated = cross_effect(sq, 2, {fat, fat});
    CHECK(homology(lean.total.complex) == homology(bloated.total.complex));
}

TEST_CASE("slot permutations act on the cross effect as a left group action") {
    ExprFunctor cube(FunctorExpr::tensor_power(3));
    ChainComplex s1 = sphere(RingSpec::Z(), 1);
    CrossEffect ce = cross_effect(cube, 3, {s1, s1, s1});

    Perm pi{1, 2, 0}, sigma{1, 0, 2};
    ChainMap api = cross_effect_action(cube, ce, pi);
    ChainMap asigma = cross_effect_action(cube, ce, sigma);
    api.validate();
    asigma.validate();
    ChainMap composite = cross_effect_action(cube, ce, perm_compose(sigma, pi));
    CHECK(maps_equal(composite, asigma.compose(api)));

    ChainMap aid = cross_effect_action(cube, ce, Perm{0, 1, 2});
    CHECK(maps_equal(aid, ChainMap::identity(share(ce.total.complex))));

    ExprFunctor sq(FunctorExpr::tensor_power(2));
    CrossEffect ce2 = cross_effect(sq, 2, {s1, s1});
    ChainMap swap = cross_effect_action(sq, ce2, Perm{1, 0});
    swap.validate();
    CHECK(maps_equal(swap.compose(swap), ChainMap::identity(share(ce2.total.complex))));

    CHECK_THROWS_AS(cross_effect_action(sq, ce2, Perm{0, 0}), ValidationError);
}

// --- multilinearization ------------------------------------------------------

TEST_CASE("the bilinear cross effect stabilizes at the first suspension") {
    ExprFunctor sq(FunctorExpr::tensor_power(2));
    ChainComplex s0 = sphere(RingSpec::Z(), 0);
    MultilinearizeResult ml = multilinearize(sq, 2, {s0, s0});
    CHECK(ml.stabilized);
    CHECK(ml.level == 0);
    CHECK(ml.shift == 0);
    CHECK(ml.window_lo == -3);
    CHECK(ml.window_hi == 2);
    CHECK(ml.tables.at(0) == tab(RingSpec::Z(), {{0, 2}}));
    CHECK(homology(ml.complex) == tab(RingSpec::Z(), {{0, 2}}));
}

TEST_CASE("overweight cross effects escape the window under suspension") {
    ExprFunctor cube(FunctorExpr::tensor_power(3));
    ChainComplex s0 = sphere(RingSpec::Z(), 0);
    MultilinearizeResult ml = multilinearize(cube, 2, {s0, s0});
    CHECK(ml.stabilized);
    CHECK(ml.level == 3);
    REQUIRE(ml.tables.size() == 5);
    CHECK(ml.tables[0] == tab(RingSpec::Z(), {{0, 6}}));
    CHECK(ml.tables[1] == tab(RingSpec::Z(), {{1, 6}}));
    CHECK(ml.tables[2] == tab(RingSpec::Z(), {{2, 6}}));
    CHECK(ml.tables[3].is_trivial());
    CHECK(ml.tables[4].is_trivial());
}

TEST_CASE("multilinearizing the truncated algebra keeps only the bilinear part") {
    ExprFunctor tta(FunctorExpr::trunc_tensor_alg(3));
    ChainComplex s0 = sphere(RingSpec::Z(), 0);
    MultilinearizeResult ml = multilinearize(tta, 2, {s0, s0});
    CHECK(ml.stabilized);
    CHECK(ml.level == 3);
    CHECK(ml.tables[0] == tab(RingSpec::Z(), {{0, 8}}));
    CHECK(ml.tables[1] == tab(RingSpec::Z(), {{0, 2}, {1, 6}}));
    CHECK(ml.tables[2] == tab(RingSpec::Z(), {{0, 2}, {2, 6}}));
    CHECK(ml.tables[3] == tab(RingSpec::Z(), {{0, 2}}));
    CHECK(ml.tables[4] == tab(RingSpec::Z(), {{0, 2}}));
}

TEST_CASE("suspension flags and caps are honored") {
    ExprFunctor sq(FunctorExpr::tensor_power(2));
    ChainComplex s0 = sphere(RingSpec::Z(), 0);

    MultilinearizeResult part = multilinearize(sq, 2, {s0, s0}, {}, {true, false});
    CHECK(part.stabilized);
    CHECK(part.level == 0);
    CHECK(part.tables.at(0) == tab(RingSpec::Z(), {{0, 2}}));

    Options tight;
    tight.cap = 0;
    MultilinearizeResult stuck = multilinearize(sq, 2, {s0, s0}, tight);
    CHECK_FALSE(stuck.stabilized);
    CHECK(stuck.level == 0);

    CHECK_THROWS_AS(multilinearize(sq, 2, {s0, s0}, {}, {false, false}), ValidationError);
    CHECK_THROWS_AS(multilinearize(sq, 2, {s0, s0}, {}, {true}), ValidationError);
    CHECK_THROWS_AS(multilinearize(sq, 2, {s0}), ValidationError);
}

// --- one-shot polynomial approximation ----------------------------------------

TEST_CASE("the linear approximation of the tensor square suspends the input") {
    ExprFunctor sq(FunctorExpr::tensor_power(2));
    TaylorT t1 = taylor_T(sq, 1, sphere(RingSpec::Z(), 1));
    t1.t.validate();
    CHECK(homology(t1.holim.complex) == tab(RingSpec::Z(), {{3, 1}}));

    TaylorT t0 = taylor_T(sq, 1, sphere(RingSpec::Z(), 0));
    CHECK(homology(t0.holim.complex) == tab(RingSpec::Z(), {{1, 1}}));
}

TEST_CASE("the comparison map is a quasi-isomorphism once the functor is polynomial") {
    FunctorExpr poly = FunctorExpr::sum({FunctorExpr::constant(sphere(RingSpec::Z(), 2)),
                                         FunctorExpr::coef_smash(sphere(RingSpec::Z(), 0), 1),
                                         FunctorExpr::coef_smash(sphere(RingSpec::Z(), 1), 2)});
    ExprFunctor f(poly);
    std::mt19937_64 rng(11);
    ChainComplex r = random_complex(RingSpec::Z(), rng, 0, 2, 3);
    for (const ChainComplex& x :
         {sphere(RingSpec::Z(), 0), sphere(RingSpec::Z(), 1), r}) {
        TaylorT t2 = taylor_T(f, 2, x);
        t2.t.validate();
        CHECK(is_quasi_iso(t2.t));
    }

    ExprFunctor c(FunctorExpr::constant(sphere(RingSpec::Z(), 2)));
    TaylorT tc = taylor_T(c, 1, sphere(RingSpec::Z(), 0));
    CHECK(is_quasi_iso(tc.t));

    ExprFunctor id(FunctorExpr::identity());
    TaylorT ti = taylor_T(id, 1, sphere(RingSpec::Z(), 1));
    CHECK(is_quasi_iso(ti.t));
}

// --- flattened tower stages ----------------------------------------------------

TEST_CASE("flat stages match the one-shot model at the first iteration") {
    ExprFunctor sq(FunctorExpr::tensor_power(2));
    ChainComplex s1 = sphere(RingSpec::Z(), 1);
    TowerStage st1 = taylor_stage(sq, 1, 1, s1);
    CHECK(homology(st1.holim.complex) == homology(taylor_T(sq, 1, s1).holim.complex));

    TowerStage st2 = taylor_stage(sq, 1, 2, s1);
    CHECK(homology(st2.holim.complex) == tab(RingSpec::Z(), {{4, 1}}));

    CHECK_THROWS_AS(taylor_stage(sq, 1, 0, s1), ValidationError);
}

TEST_CASE("stage maps preserve quasi-isomorphisms") {
    ExprFunctor sq(FunctorExpr::tensor_power(2));
    ChainComplex s1 = sphere(RingSpec::Z(), 1);
    ChainComplex fat = direct_sum(s1, disk(RingSpec::Z(), 3));
    ChainMap g = inclusion_first(s1, disk(RingSpec::Z(), 3));
    TowerStage src = taylor_stage(sq, 1, 2, s1);
    TowerStage dst = taylor_stage(sq, 1, 2, fat);
    ChainMap sm = taylor_stage_map(sq, src, dst, g);
    sm.validate();
    CHECK(is_quasi_iso(sm));
}

TEST_CASE("tower restrictions are chain maps between adjacent stages") {
    ExprFunctor sq(FunctorExpr::tensor_power(2));
    ChainComplex s1 = sphere(RingSpec::Z(), 1);
    TowerStage up = taylor_stage(sq, 2, 1, s1);
    TowerStage low = taylor_stage(sq, 1, 1, s1);
    ChainMap q = tower_restriction(up, low);
    q.validate();

    TowerStage low2 = taylor_stage(sq, 1, 2, s1);
    CHECK_THROWS_AS(tower_restriction(up, low2), ValidationError);
    CHECK_THROWS_AS(tower_restriction(low, up), ValidationError);
}

TEST_CASE("stage budgets and poset caps raise budget errors") {
    ExprFunctor sq(FunctorExpr::tensor_power(2));
    ChainComplex s1 = sphere(RingSpec::Z(), 1);
    CHECK_THROWS_AS(taylor_stage(sq, 2, 3, s1), BudgetError);
    CHECK_THROWS_AS(taylor_stage(sq, 4, 3, sphere(RingSpec::Z(), 0)), BudgetError);
}

// --- towers --------------------------------------------------------------------

TEST_CASE("the linear tower of the tensor square pushes the circle out of the window") {
    ExprFunctor sq(FunctorExpr::tensor_power(2));
    TowerReport rep = taylor_P(sq, 1, sphere(RingSpec::Z(), 1), 4);
    CHECK(rep.verdict == TowerVerdict::Stabilized);
    CHECK(rep.stabilized_to_zero);
    CHECK(rep.certified_iteration == 3);
    CHECK(rep.iterations_used == 4);
    CHECK(rep.window_lo == -1);
    CHECK(rep.window_hi == 4);
    REQUIRE(rep.tables.size() == 5);
    CHECK(rep.tables[0] == tab(RingSpec::Z(), {{2, 1}}));
    CHECK(rep.tables[1] == tab(RingSpec::Z(), {{3, 1}}));
    CHECK(rep.tables[2] == tab(RingSpec::Z(), {{4, 1}}));
    CHECK(rep.tables[3].is_trivial());
    CHECK(rep.tables[4].is_trivial());
    CHECK(rep.final_table.is_trivial());
}

TEST_CASE("the quadratic tower is already stable for the tensor square") {
    ExprFunctor sq(FunctorExpr::tensor_power(2));
    TowerReport rep = taylor_P(sq, 2, sphere(RingSpec::Z(), 1), 2);
    CHECK(rep.verdict == TowerVerdict::Stabilized);
    CHECK_FALSE(rep.stabilized_to_zero);
    CHECK(rep.certified_iteration == 1);
    CHECK(rep.iterations_used == 2);
    CHECK(rep.final_table == tab(RingSpec::Z(), {{2, 1}}));
}

TEST_CASE("towers of constant functors stabilize to the constant") {
    ExprFunctor c(FunctorExpr::constant(sphere(RingSpec::Z(), 2)));
    TowerReport rep = taylor_P(c, 1, sphere(RingSpec::Z(), 0), 2);
    CHECK(rep.verdict == TowerVerdict::Stabilized);
    CHECK(rep.certified_iteration == 1);
    CHECK(rep.final_table == tab(RingSpec::Z(), {{2, 1}}));
}

TEST_CASE("tower reports survive budget exhaustion with partial tables") {
    ExprFunctor sq(FunctorExpr::tensor_power(2));
    Options opt;
    opt.budget = 2;
    TowerReport rep = taylor_P(sq, 1, sphere(RingSpec::Z(), 1), 4, opt);
    CHECK(rep.verdict == TowerVerdict::BudgetExhausted);
    CHECK(rep.iterations_used == 0);
    REQUIRE(rep.tables.size() == 1);
    CHECK(rep.tables[0] == tab(RingSpec::Z(), {{2, 1}}));
    CHECK_FALSE(rep.note.empty());

    Options mid;
    mid.budget = 10;
    TowerReport part = taylor_P(sq, 1, sphere(RingSpec::Z(), 1), 4, mid);
    CHECK(part.verdict == TowerVerdict::BudgetExhausted);
    CHECK(part.iterations_used == 1);
    REQUIRE(part.tables.size() == 2);
    CHECK(part.tables[1] == tab(RingSpec::Z(), {{3, 1}}));
}

// --- layers --------------------------------------------------------------------

TEST_CASE("the linear layer of a mixed functor is its linear part") {
    FunctorExpr mixed =
        FunctorExpr::sum({FunctorExpr::identity(), FunctorExpr::tensor_power(2)});
    ExprFunctor f(mixed);
    Layer lay = layer_D(f, 1, sphere(RingSpec::Z(), 0), 4);
    CHECK(lay.certified);
    CHECK(lay.table == tab(RingSpec::Z(), {{0, 1}}));
    CHECK(lay.upper.certified_iteration == 3);
    CHECK(lay.lower.stabilized_to_zero);
    CHECK(lay.window_lo == -3);
    CHECK(lay.window_hi == 1);
    CHECK(lay.iteration >= 1);
}

TEST_CASE("the quadratic layer of the tensor square is a single orbit line") {
    ExprFunctor sq(FunctorExpr::tensor_power(2));
    Layer lay = layer_D(sq, 2, sphere(RingSpec::Z(), 0), 4);
    CHECK(lay.certified);
    CHECK(lay.table == tab(RingSpec::Z(), {{0, 1}}));
    CHECK(lay.upper.certified_iteration == 1);
    CHECK(lay.lower.certified_iteration == 3);
    CHECK(lay.lower.stabilized_to_zero);
    CHECK(lay.iteration == 2);
}

TEST_CASE("linear functors have no quadratic layer") {
    ExprFunctor lin(FunctorExpr::coef_smash(sphere(RingSpec::Z(), 0), 1));
    Layer lay = layer_D(lin, 2, sphere(RingSpec::Z(), 0), 2);
    CHECK(lay.certified);
    CHECK(lay.table.is_trivial());
    CHECK(lay.iteration == 2);
}

TEST_CASE("the quadratic layer of a mixed functor discards the linear part") {
    FunctorExpr mixed =
        FunctorExpr::sum({FunctorExpr::identity(), FunctorExpr::tensor_power(2)});
    ExprFunctor f(mixed);
    Layer lay = layer_D(f, 2, sphere(RingSpec::Z(), 0), 4);
    CHECK(lay.certified);
    CHECK(lay.table == tab(RingSpec::Z(), {{0, 1}}));

    CHECK_THROWS_AS(layer_D(f, 0, sphere(RingSpec::Z(), 0), 2), ValidationError);
}

TEST_CASE("the layer functor carries the certified and the transient classes") {
    ExprFunctor sq(FunctorExpr::tensor_power(2));
    LayerFunctor lf(sq, 2, 2);
    ChainComplex d2 = lf.at(sphere(RingSpec::Z(), 0));
    CHECK(homology(d2) == tab(RingSpec::Z(), {{0, 1}, {1, 1}}));

    ChainMap idm = lf.map(ChainMap::identity(share(sphere(RingSpec::Z(), 0))));
    CHECK(maps_equal(idm, ChainMap::identity(share(d2))));

    ChainComplex s0 = sphere(RingSpec::Z(), 0);
    ChainMap g = inclusion_first(s0, disk(RingSpec::Z(), 1));
    ChainMap lg = lf.map(g);
    lg.validate();
    CHECK(is_quasi_iso(lg));
}

TEST_CASE("multilinearizing the quadratic layer leaves nothing in the window") {
    ExprFunctor sq(FunctorExpr::tensor_power(2));
    LayerFunctor lf(sq, 2, 2);
    MultilinearizeResult ml = multilinearize(lf, 1, {sphere(RingSpec::Z(), 0)});
    CHECK(ml.stabilized);
    CHECK(ml.level == 3);
    CHECK(ml.tables[0] == tab(RingSpec::Z(), {{0, 1}, {1, 1}}));
    CHECK(ml.tables[1] == tab(RingSpec::Z(), {{1, 1}, {2, 1}}));
    CHECK(ml.tables[2] == tab(RingSpec::Z(), {{2, 1}}));
    CHECK(ml.tables[3].is_trivial());
}

// --- nested against flattened stages -------------------------------------------

namespace {

// the induced map on a single join vertex, blockwise over the documented
// basis order: the X block, the points u, the pairs x (x) u, then omega (x) u
ChainMap join_vertex_map(const CubeDiagram& jsrc, const CubeDiagram& jdst, const ChainMap& g,
                         unsigned mask) {
    const ChainComplex& s = jsrc.vertex(mask);
    const ChainComplex& d = jdst.vertex(mask);
    const ChainComplex& x = *g.src;
    const ChainComplex& y = *g.dst;
    long uu = std::popcount(mask);
    ChainMap out(jsrc.vertex_ptr(mask), jdst.vertex_ptr(mask));
    for (auto& [k, r] : s.ranks()) {
        SparseMat m(d.rank(k), r);
        SparseMat gk = g.component(k);
        for (long j = 0; j < x.rank(k); ++j)
            for (auto& [rr, v] : gk.col(j)) m.add(rr, j, v);
        if (uu > 0) {
            if (k == 0)
                for (long ui = 0; ui < uu; ++ui) m.add(y.rank(0) + ui, x.rank(0) + ui, 1);
            long s_p = x.rank(k) + (k == 0 ? uu : 0), d_p = y.rank(k) + (k == 0 ? uu : 0);
            SparseMat gk1 = g.component(k - 1);
            for (long xj = 0; xj < x.rank(k - 1); ++xj)
                for (auto& [yi, v] : gk1.col(xj))
                    for (long ui = 0; ui < uu; ++ui) m.add(d_p + yi * uu + ui, s_p + xj * uu + ui, v);
            if (k == 1) {
                long s_o = s_p + x.rank(0) * uu, d_o = d_p + y.rank(0) * uu;
                for (long ui = 0; ui < uu; ++ui) m.add(d_o + ui, s_o + ui, 1);
            }
        }
        if (!m.is_zero()) out.set_component(k, std::move(m));
    }
    return out;
}

// one-shot linear approximation as a strict functor, for nesting
class OneShotLinear : public Functor {
  public:
    OneShotLinear(const Functor& f, Options opt) : f_(f), opt_(opt) {}
    std::string name() const override { return "T1(" + f_.name() + ")"; }
    ChainComplex at(const ChainComplex& x) const override {
        return taylor_T(f_, 1, x, opt_).holim.complex;
    }
    ChainMap map(const ChainMap& g) const override {
        CubeDiagram js = join_cube(*g.src, 1, opt_), jd = join_cube(*g.dst, 1, opt_);
        std::vector<ChainMap> vw;
        for (unsigned a = 1; a <= 3; ++a) vw.push_back(f_.map(join_vertex_map(js, jd, g, a)));
        TaylorT ts = taylor_T(f_, 1, *g.src, opt_), td = taylor_T(f_, 1, *g.dst, opt_);
        return holim_map(ts.holim, td.holim, vw);
    }

  private:
    const Functor& f_;
    Options opt_;
};

}  // namespace

TEST_CASE("nesting the one-shot approximation matches the flattened second stage") {
    ExprFunctor sq(FunctorExpr::tensor_power(2));
    ChainComplex s1 = sphere(RingSpec::Z(), 1);
    OneShotLinear nested(sq, Options{});
    TaylorT outer = taylor_T(nested, 1, s1);
    outer.t.validate();
    HomologyTable flat = homology(taylor_stage(sq, 1, 2, s1).holim.complex);
    CHECK(homology(outer.holim.complex) == flat);
    CHECK(flat == tab(RingSpec::Z(), {{4, 1}}));
}

// --- derivatives ----------------------------------------------------------------

TEST_CASE("the first derivative of the identity is one line") {
    ExprFunctor id(FunctorExpr::identity());
    LayerCoefficient lc = layer_coefficient(id, 1);
    CHECK(lc.stabilized);
    CHECK(lc.homology == tab(RingSpec::Z(), {{0, 1}}));
    CHECK(lc.rep.space.rank(0) == 1);
    lc.rep.validate();
}

TEST_CASE("the second derivative of the tensor square is the regular representation") {
    ExprFunctor sq(FunctorExpr::tensor_power(2));
    LayerCoefficient lc = layer_coefficient(sq, 2);
    CHECK(lc.stabilized);
    CHECK(lc.level == 0);
    CHECK(lc.homology == tab(RingSpec::Z(), {{0, 2}}));
    lc.rep.validate();
    CHECK(trace_of(lc.rep.action(0, Perm{0, 1})) == 2);
    CHECK(trace_of(lc.rep.action(0, Perm{1, 0})) == 0);
}

TEST_CASE("the third derivative of the tensor cube is regular of rank six") {
    ExprFunctor cube(FunctorExpr::tensor_power(3));
    LayerCoefficient lc = layer_coefficient(cube, 3, RingSpec::Q());
    CHECK(lc.stabilized);
    CHECK(lc.homology == tab(RingSpec::Q(), {{0, 6}}));
    lc.rep.validate();
    CHECK(trace_of(lc.rep.action(0, Perm{0, 1, 2})) == 6);
    CHECK(trace_of(lc.rep.action(0, Perm{1, 0, 2})) == 0);
    CHECK(trace_of(lc.rep.action(0, Perm{1, 2, 0})) == 0);
}

TEST_CASE("derivatives of constants vanish and truncations match their leading term") {
    ExprFunctor c(FunctorExpr::constant(sphere(RingSpec::Z(), 2)));
    LayerCoefficient none = layer_coefficient(c, 2);
    CHECK(none.stabilized);
    CHECK(none.homology.is_trivial());
    CHECK(none.rep.space.empty());

    ExprFunctor tta(FunctorExpr::trunc_tensor_alg(3));
    LayerCoefficient two = layer_coefficient(tta, 2);
    CHECK(two.stabilized);
    CHECK(two.level == 3);
    CHECK(two.homology == tab(RingSpec::Z(), {{0, 2}}));
    two.rep.validate();
    CHECK(trace_of(two.rep.action(0, Perm{1, 0})) == 0);
}

TEST_CASE("fibers of natural maps differentiate blockwise") {
    NatMap eta;
    eta.kind = NatMap::Kind::Zero;
    eta.src = FunctorExpr::coef_smash(sphere(RingSpec::Z(), 0), 1);
    eta.dst = FunctorExpr::coef_smash(sphere(RingSpec::Z(), 0), 2);
    FiberFunctor f(eta);
    LayerCoefficient lc = layer_coefficient(f, 2);
    CHECK(lc.stabilized);
    CHECK(lc.homology == tab(RingSpec::Z(), {{-1, 2}}));
    lc.rep.validate();
}

// --- classification -------------------------------------------------------------

TEST_CASE("rational diagonal coinvariants against hand computations") {
    RingSpec q = RingSpec::Q();

    DeltaResult at0 = delta_n(trivial_rep(q, 2), 2, sphere(q, 0), 4);
    CHECK(at0.exact);
    CHECK(homology(at0.complex) == tab(q, {{0, 1}}));

    DeltaResult at1 = delta_n(trivial_rep(q, 2), 2, sphere(q, 1), 4);
    CHECK(at1.exact);
    CHECK(is_acyclic(at1.complex));

    Representation sign;
    sign.n = 2;
    sign.space = sphere(q, 0);
    SparseMat neg(1, 1);
    neg.add(0, 0, -1);
    sign.act_t[0] = neg;
    sign.act_c[0] = neg;
    sign.validate();
    DeltaResult siped = delta_n(sign, 2, sphere(q, 0), 4);
    CHECK(is_acyclic(siped.complex));

    ChainComplex mix = direct_sum(sphere(q, 0), sphere(q, 1));
    DeltaResult both = delta_n(trivial_rep(q, 2), 2, mix, 4);
    CHECK(homology(both.complex) == tab(q, {{0, 1}, {1, 1}}));
}

TEST_CASE("bar orbits over a prime field see the full group cohomology line") {
    RingSpec f2 = RingSpec::Fp(2);
    DeltaResult res = delta_n(trivial_rep(f2, 2), 2, sphere(f2, 0), 4);
    CHECK_FALSE(res.exact);
    CHECK(res.certified_through == 4);
    res.complex.validate();
    HomologyTable h = homology(res.complex).restricted(0, 4);
    CHECK(h == tab(f2, {{0, 1}, {1, 1}, {2, 1}, {3, 1}, {4, 1}}));
}

TEST_CASE("integral bar orbits carry the expected torsion") {
    RingSpec z = RingSpec::Z();
    DeltaResult res = delta_n(trivial_rep(z, 2), 2, sphere(z, 0), 4);
    CHECK(res.certified_through == 4);
    HomologyTable h = homology(res.complex).restricted(0, 4);
    HomologyTable want;
    want.ring = z;
    want.entries[0].rank = 1;
    want.entries[1].torsion = {2};
    want.entries[3].torsion = {2};
    CHECK(h == want);
}

TEST_CASE("degenerate and invalid orbit requests") {
    RingSpec q = RingSpec::Q();
    Representation triv1 = trivial_rep(q, 1);
    DeltaResult lin = delta_n(triv1, 1, sphere(q, 1), 3);
    CHECK(lin.exact);
    CHECK(homology(lin.complex) == tab(q, {{1, 1}}));

    RingSpec f2 = RingSpec::Fp(2);
    CHECK_THROWS_AS(delta_n(trivial_rep(f2, 2), 2, sphere(f2, 0), -1), ValidationError);
    CHECK_THROWS_AS(delta_n(trivial_rep(q, 3), 2, sphere(q, 0), 2), ValidationError);
    CHECK_THROWS_AS(delta_n(trivial_rep(q, 2), 2, sphere(RingSpec::Z(), 0), 2), ValidationError);
}

TEST_CASE("the cross effect of a diagonal functor recovers its coefficients") {
    RingSpec q = RingSpec::Q();
    std::vector<ChainComplex> in{sphere(q, 0), sphere(q, 1)};
    CHECK(roundtrip_check(trivial_rep(q, 2), 2, in));
    CHECK(roundtrip_check(trivial_rep(q, 1), 1, {sphere(q, 1)}));

    Representation swap2;
    swap2.n = 2;
    swap2.space = direct_sum(sphere(q, 0), sphere(q, 0));
    SparseMat sw(2, 2);
    sw.add(0, 1, 1);
    sw.add(1, 0, 1);
    swap2.act_t[0] = sw;
    swap2.act_c[0] = sw;
    swap2.validate();
    CHECK(roundtrip_check(swap2, 2, in));

    Representation shifted;
    shifted.n = 2;
    shifted.space = direct_sum(sphere(q, 0), sphere(q, 1));
    CHECK(roundtrip_check(shifted, 2, in));

    CHECK_THROWS_AS(roundtrip_check(trivial_rep(RingSpec::Z(), 2), 2,
                                    {sphere(RingSpec::Z(), 0), sphere(RingSpec::Z(), 0)}),
                    ValidationError);
    CHECK_THROWS_AS(roundtrip_check(trivial_rep(q, 2), 2, {sphere(q, 0)}), ValidationError);
}

TEST_CASE("derivative bookkeeping agrees between direct and staged computation") {
    ExprFunctor cube(FunctorExpr::tensor_power(3));
    ComposeCheckReport r3 = derivative_compose_check(cube, 1, 2, RingSpec::Q());
    CHECK(r3.agree);
    CHECK(r3.direct.restricted(r3.window_lo, r3.window_hi) == tab(RingSpec::Q(), {{0, 6}}));

    ExprFunctor sq(FunctorExpr::tensor_power(2));
    ComposeCheckReport r2 = derivative_compose_check(sq, 1, 1);
    CHECK(r2.agree);
    CHECK(r2.direct.restricted(r2.window_lo, r2.window_hi) == tab(RingSpec::Z(), {{0, 2}}));

    ExprFunctor id(FunctorExpr::identity());
    ComposeCheckReport rid = derivative_compose_check(id, 1, 1);
    CHECK(rid.agree);
    CHECK(rid.direct.is_trivial());
    CHECK(rid.nested.is_trivial());

    CHECK_THROWS_AS(derivative_compose_check(sq, 0, 1), ValidationError);
}

// --- natural maps and agreement ---------------------------------------------------

TEST_CASE("truncation inclusions agree to the order of the missing term") {
    NatMap eta;
    eta.kind = NatMap::Kind::TruncInclusion;
    eta.src = FunctorExpr::trunc_tensor_alg(2);
    eta.dst = FunctorExpr::trunc_tensor_alg(3);
    eta.at(sphere(RingSpec::Z(), 1)).validate();

    AgreementReport rep = agreement_order(eta, 2, {1, 2, 3});
    CHECK_FALSE(rep.all_infinite);
    CHECK(rep.fitted_c == 1);
    CHECK(rep.slope_ok);
    REQUIRE(rep.table.size() == 3);
    for (int k : {1, 2, 3}) {
        CHECK_FALSE(rep.table.at(k).infinite);
        CHECK(rep.table.at(k).value == 3 * k - 1);
    }
}

TEST_CASE("identity maps agree to every order and zero maps to none") {
    NatMap idm;
    idm.kind = NatMap::Kind::Identity;
    idm.src = FunctorExpr::tensor_power(2);
    idm.dst = FunctorExpr::tensor_power(2);
    AgreementReport all = agreement_order(idm, 1, {1, 2});
    CHECK(all.all_infinite);
    CHECK(all.slope_ok);

    NatMap zm;
    zm.kind = NatMap::Kind::Zero;
    zm.src = FunctorExpr::constant(sphere(RingSpec::Z(), 0));
    zm.dst = FunctorExpr::constant(sphere(RingSpec::Z(), 0));
    AgreementReport none = agreement_order(zm, 1, {1, 2});
    CHECK_FALSE(none.all_infinite);
    CHECK_FALSE(none.slope_ok);

    CHECK_THROWS_AS(agreement_order(idm, 1, {}), ValidationError);
}

TEST_CASE("truncation inclusions validate their endpoints") {
    NatMap bad;
    bad.kind = NatMap::Kind::TruncInclusion;
    bad.src = FunctorExpr::trunc_tensor_alg(3);
    bad.dst = FunctorExpr::trunc_tensor_alg(2);
    CHECK_THROWS_AS(bad.at(sphere(RingSpec::Z(), 0)), ValidationError);

    NatMap worse;
    worse.kind = NatMap::Kind::TruncInclusion;
    worse.src = FunctorExpr::identity();
    worse.dst = FunctorExpr::trunc_tensor_alg(2);
    CHECK_THROWS_AS(worse.at(sphere(RingSpec::Z(), 0)), ValidationError);
}

TEST_CASE("fiber functors and fiber maps respect the strict square") {
    NatMap eta;
    eta.kind = NatMap::Kind::TruncInclusion;
    eta.src = FunctorExpr::trunc_tensor_alg(2);
    eta.dst = FunctorExpr::trunc_tensor_alg(3);
    FiberFunctor f(eta);
    CHECK(homology(f.at(sphere(RingSpec::Z(), 1))) == tab(RingSpec::Z(), {{2, 1}}));

    ChainComplex s1 = sphere(RingSpec::Z(), 1);
    ChainMap g = inclusion_first(s1, disk(RingSpec::Z(), 2));
    ChainMap fg = f.map(g);
    fg.validate();
    CHECK(is_quasi_iso(fg));

    // a square that fails to commute strictly is rejected
    auto s0 = share(sphere(RingSpec::Z(), 0));
    ChainMap a = ChainMap::identity(s0), b = ChainMap::identity(s0);
    ChainMap u = ChainMap::identity(s0);
    ChainMap v(s0, s0);
    SparseMat m(1, 1);
    m.add(0, 0, -1);
    v.set_component(0, std::move(m));
    CHECK_THROWS_AS(fiber_map(a, b, u, v), ValidationError);
}

// --- suspension identity -----------------------------------------------------------

TEST_CASE("towers of the suspended argument match the suspension-composed functor") {
    for (FunctorExpr expr : {FunctorExpr::tensor_power(2),
                             FunctorExpr::sum({FunctorExpr::identity(),
                                               FunctorExpr::tensor_power(2)}),
                             FunctorExpr::coef_smash(sphere(RingSpec::Z(), 1), 2)}) {
        ExprFunctor plain(expr);
        ExprFunctor precomposed(FunctorExpr::compose(expr, FunctorExpr::shift(1)));
        TowerReport a = taylor_P(plain, 1, sphere(RingSpec::Z(), 1), 3);
        TowerReport b = taylor_P(precomposed, 1, sphere(RingSpec::Z(), 0), 3);
        CHECK(a.verdict == b.verdict);
        CHECK(a.window_lo == b.window_lo);
        CHECK(a.window_hi == b.window_hi);
        REQUIRE(a.tables.size() == b.tables.size());
        for (size_t i = 0; i < a.tables.size(); ++i) CHECK(a.tables[i] == b.tables[i]);
    }
}
