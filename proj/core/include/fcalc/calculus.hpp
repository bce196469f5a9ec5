#pragma once

#include <string>
#include <vector>

#include "fcalc/chain.hpp"
#include "fcalc/cube.hpp"
#include "fcalc/errors.hpp"
#include "fcalc/functor.hpp"
#include "fcalc/perm.hpp"
#include "fcalc/rep.hpp"

namespace fcalc {

// --- cross effects -----------------------------------------------------------

// cr_n F (X_1, ..., X_n): the total fiber of F applied to the sum cube on the
// inputs.  The cube and the vertex layout are kept so that the symmetric-group
// action can be assembled on the same complex afterwards.
struct CrossEffect {
    int n = 1;
    TotalComplex total;
    CubeDiagram cube;
    std::vector<ChainComplex> inputs;
};
CrossEffect cross_effect(const Functor& f, int n, const std::vector<ChainComplex>& inputs,
                         const Options& opt = {});

// The automorphism of the cross-effect complex induced by permuting the input
// slots (pi is 0-based one-line notation; all inputs must coincide).  Vertex
// blocks move along pi with the sign of the induced sorting permutation, and
// the vertex maps are F of the summand shuffles.  Left action:
// action(sigma o pi) = action(sigma) . action(pi).
ChainMap cross_effect_action(const Functor& f, const CrossEffect& ce, const Perm& pi,
                             const Options& opt = {});

// --- multilinearization ------------------------------------------------------

// Stabilization of the n-th cross effect under simultaneous suspension of the
// chosen input slots: stage k evaluates cr_n F at the suspended inputs and
// desuspends by the total number of suspensions applied.  The window is frozen
// from the homology of stage 0; the result is the first stage of the first
// consecutive pair whose windowed homologies agree.
struct MultilinearizeResult {
    ChainComplex complex;  // certified stage, desuspended
    CrossEffect stage;     // the same stage before desuspension (for actions)
    int level = 0;         // suspension count of the certified stage
    int shift = 0;         // desuspension applied to `complex`
    bool stabilized = false;
    int window_lo = 0, window_hi = 0;
    std::vector<HomologyTable> tables;  // windowed homology per level, desuspended
    std::string note;
};
MultilinearizeResult multilinearize(const Functor& f, int n,
                                    const std::vector<ChainComplex>& inputs,
                                    const Options& opt = {},
                                    const std::vector<bool>& suspend = {});

// --- Taylor tower ------------------------------------------------------------

// One application of T_n in the fiberwise-join model: the punctured homotopy
// limit of F over the join cube, together with the strict comparison map
// t : F(X) -> T_n F(X) assembled from the join inclusions.
struct TaylorT {
    HolimResult holim;
    ChainMap t;
};
TaylorT taylor_T(const Functor& f, int n, const ChainComplex& x, const Options& opt = {});

// Flattened tower stage T_n^i F(X): the homotopy limit over i-tuples of
// nonempty subsets U of {1..n+1} of F(X (x) S~U_1 (x) ... (x) S~U_i), where
// S~U is the complex of rank |U|-1 in degree 1 carrying the reduced homology
// of the discrete join coordinate.  Iterating the join this way keeps every
// vertex small; the price is that the stages carry no strict comparison maps,
// so tower verdicts are read off windowed homology tables.
struct TowerStage {
    int n = 0, iteration = 0;
    HolimResult holim;
};
TowerStage taylor_stage(const Functor& f, int n, int iteration, const ChainComplex& x,
                        const Options& opt = {});

// The map between matching stages induced by g : X -> X' (vertexwise
// F(g (x) identities)).
ChainMap taylor_stage_map(const Functor& f, const TowerStage& src, const TowerStage& dst,
                          const ChainMap& g, const Options& opt = {});

// The restriction map q_{n,i} : T_n^i F(X) -> T_{n-1}^i F(X) along the
// inclusion of the i-fold product of subsets of {1..n} into subsets of
// {1..n+1}.  Both stages must be built from the same functor and input.
ChainMap tower_restriction(const TowerStage& upper, const TowerStage& lower);

enum class TowerVerdict { Stabilized, CapExhausted, BudgetExhausted };

struct TowerReport {
    int n = 0;
    TowerVerdict verdict = TowerVerdict::CapExhausted;
    bool stabilized_to_zero = false;
    int iterations_used = 0;       // highest stage evaluated
    int certified_iteration = -1;  // first i >= 1 with table(i) == table(i+1)
    int window_lo = 0, window_hi = 0;
    std::vector<HomologyTable> tables;  // index = iteration; entry 0 is F(X)
    HomologyTable final_table;
    std::string note;
};

// Runs the tower stages until two consecutive windowed homology tables agree
// (the window is frozen from the homology of F(X)), the iteration cap i_max
// is exhausted, or the stage budget runs out.  A tower whose homology keeps
// escaping the window stabilizes to the empty table and is reported as
// stabilized to zero.
TowerReport taylor_P(const Functor& f, int n, const ChainComplex& x, int i_max,
                     const Options& opt = {});

// --- layers ------------------------------------------------------------------

// D_n F(X): the fiber of q_{n,i} between stabilized towers.  The certified
// table is assembled degreewise from the long exact sequence of the fiber
// sequence against the *stabilized* tower tables: transient classes that a
// finite stage still carries (they move up by one degree per iteration and
// never stabilize) are thereby excluded.  The chain-level fiber at the
// comparison iteration is returned as a witness; its raw homology may differ
// from the certified table exactly in those transient degrees.
struct Layer {
    int n = 0;
    ChainComplex complex;    // fiber of q_{n,i} at the comparison iteration
    HomologyTable table;     // certified layer homology over the window
    TowerReport upper, lower;
    int iteration = -1;      // iteration of the returned fiber
    bool certified = false;
    int window_lo = 0, window_hi = 0;
    std::string note;
};
Layer layer_D(const Functor& f, int n, const ChainComplex& x, int i_max,
              const Options& opt = {});

// The layer as a strict functor at a fixed iteration: X -> fiber(q_{n,i}(X)).
// Useful for feeding layers back into cross effects; note that a fixed finite
// iteration retains the transient classes described at layer_D.
class LayerFunctor : public Functor {
  public:
    LayerFunctor(const Functor& f, int n, int iteration, Options opt = {})
        : f_(f), n_(n), iter_(iteration), opt_(opt) {}
    std::string name() const override;
    ChainComplex at(const ChainComplex& x) const override;
    ChainMap map(const ChainMap& g) const override;

  private:
    const Functor& f_;
    int n_, iter_;
    Options opt_;
};

// --- derivatives -------------------------------------------------------------

// The n-th derivative of F: the stabilized homology of cr_n F at n copies of
// S^0, with the input-permutation action pushed to homology classes.  The
// suspension stage acts on homology through the chain-level action twisted by
// sign(pi)^level (permuting the suspension coordinates of the slots).
struct LayerCoefficient {
    Representation rep;
    HomologyTable homology;  // windowed homology of the certified stage
    bool stabilized = false;
    int level = 0;
    int window_lo = 0, window_hi = 0;
};
LayerCoefficient layer_coefficient(const Functor& f, int n, RingSpec ring = RingSpec::Z(),
                                   const Options& opt = {});

// --- classification checks ---------------------------------------------------

// Homotopy orbits of C (x) X^{(x)n} under the diagonal symmetric-group action
// (permutation of the tensor slots twisted through the coefficient action).
// Over the rationals the strict coinvariants are exact in every degree; over
// Z or a prime field a bar construction truncated above total degree
// degree_cap + 1 certifies degrees <= degree_cap.
struct DeltaResult {
    ChainComplex complex;
    int certified_through = 0;
    bool exact = false;  // rationals only
};
DeltaResult delta_n(const Representation& c_rep, int n, const ChainComplex& x, int degree_cap,
                    const Options& opt = {});

// Round trip of the classification: the n-th cross effect of the diagonal
// functor X -> C (x) X^{(x)n} recovers one copy of C (x) X_{pi(1)} (x) ... per
// permutation.  Compares homology over the rationals; returns the verdict.
bool roundtrip_check(const Representation& l_coeff, int n,
                     const std::vector<ChainComplex>& inputs, const Options& opt = {});

// Chain rule bookkeeping: the (p+q)-th derivative computed directly against
// the same computation run as a q-fold multilinearization in the last slots
// followed by a p-fold stabilization in the first slots.
struct ComposeCheckReport {
    HomologyTable direct, nested;
    bool agree = false;
    int window_lo = 0, window_hi = 0;
};
ComposeCheckReport derivative_compose_check(const Functor& f, int p, int q,
                                            RingSpec ring = RingSpec::Z(),
                                            const Options& opt = {});

// --- natural maps and agreement ----------------------------------------------

// The natural transformations the DSL can name: identities, zero maps, and
// the inclusion of a truncated tensor algebra into a longer one.
struct NatMap {
    enum class Kind { Identity, Zero, TruncInclusion };
    Kind kind = Kind::Identity;
    FunctorExpr src = FunctorExpr::identity();
    FunctorExpr dst = FunctorExpr::identity();
    Options opt;

    ChainMap at(const ChainComplex& x) const;
};

// The fiber of a natural map as a strict functor.
class FiberFunctor : public Functor {
  public:
    explicit FiberFunctor(NatMap eta) : eta_(std::move(eta)) {}
    std::string name() const override;
    ChainComplex at(const ChainComplex& x) const override { return fiber(eta_.at(x)); }
    ChainMap map(const ChainMap& g) const override;

  private:
    NatMap eta_;
};

// The map fiber(a) -> fiber(b) induced by a strictly commuting square
// v . a = b . u with u : src(a) -> src(b) and v : dst(a) -> dst(b).
ChainMap fiber_map(const ChainMap& a, const ChainMap& b, const ChainMap& u, const ChainMap& v);

// Agreement order of a natural map: the connectivity of u at S^k for each
// sampled k, the least constant c with conn >= (n+1)k - c over the finite
// samples, and whether consecutive samples grow at slope n+1.
struct AgreementReport {
    int n = 0;
    std::map<int, Connectivity> table;
    long fitted_c = 0;
    bool slope_ok = true;
    bool all_infinite = false;
    std::string note;
};
AgreementReport agreement_order(const NatMap& u, int n, const std::vector<int>& k_set,
                                RingSpec ring = RingSpec::Z(), const Options& opt = {});

}  // namespace fcalc
