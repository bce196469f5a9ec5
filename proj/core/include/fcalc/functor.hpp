#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fcalc/chain.hpp"
#include "fcalc/cube.hpp"
#include "fcalc/errors.hpp"

namespace fcalc {

// A strict functor on chain complexes over a fixed ring.  Implementations
// must satisfy map(identity) = identity and map(g after f) = map(g) after
// map(f) exactly, not merely up to homotopy: the cube constructions feed
// strictly commuting diagrams through these and validate commutativity.
class Functor {
public:
    virtual ~Functor() = default;
    virtual std::string name() const = 0;
    virtual ChainComplex at(const ChainComplex& x) const = 0;
    virtual ChainMap map(const ChainMap& f) const = 0;
};

// F applied vertexwise and edgewise; strictness keeps the squares commuting.
CubeDiagram apply_to_cube(const Functor& f, const CubeDiagram& cube);

enum class FunctorOp {
    Const,          // X -> C
    Id,             // X -> X
    TensorPower,    // X -> X^{(x)n},  n >= 1
    CoefSmash,      // X -> C (x) X^{(x)n},  n >= 1
    SymPower,       // X -> Sym^n X  (rationals only)
    ExtPower,       // X -> Ext^n X  (rationals only)
    Sum,            // X -> F_1(X) (+) ... (+) F_k(X)
    Shift,          // X -> X[j]
    Compose,        // X -> F(G(X))
    TruncTensorAlg, // X -> X (+) X^{(x)2} (+) ... (+) X^{(x)m}
};

// Expression tree over the constructors above.  Immutable; cheap to copy.
class FunctorExpr {
public:
    static FunctorExpr constant(ChainComplex value);
    static FunctorExpr identity();
    static FunctorExpr tensor_power(int n);
    static FunctorExpr coef_smash(ChainComplex coef, int n);
    static FunctorExpr sym_power(int n);
    static FunctorExpr ext_power(int n);
    static FunctorExpr sum(std::vector<FunctorExpr> terms);
    static FunctorExpr shift(int j);
    static FunctorExpr compose(FunctorExpr outer, FunctorExpr inner);
    static FunctorExpr trunc_tensor_alg(int m);

    FunctorOp op() const;
    int param() const;  // n (powers), j (shift), m (truncated algebra)
    const ChainComplex& coefficient() const;        // Const, CoefSmash
    const std::vector<FunctorExpr>& children() const;  // Sum; Compose = {outer, inner}

    // True when F(0) = 0 holds structurally (every constructor except Const,
    // and sums/compositions built only from reduced parts).
    bool reduced() const;
    // An upper bound for the polynomial degree: cross-effects above it vanish.
    // Const -> 0, Id/Shift -> 1, powers -> n, Sum -> max, Compose -> product.
    int degree_bound() const;

    std::string describe() const;

private:
    struct Node;
    static FunctorExpr make(FunctorOp op, int param, std::optional<ChainComplex> coef,
                            std::vector<FunctorExpr> children);
    std::shared_ptr<const Node> node_;
    explicit FunctorExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
};

ChainComplex evaluate(const FunctorExpr& f, const ChainComplex& x, const Options& opt = {});
ChainMap evaluate_map(const FunctorExpr& f, const ChainMap& m, const Options& opt = {});
CubeDiagram evaluate_cube(const FunctorExpr& f, const CubeDiagram& cube, const Options& opt = {});

// FunctorExpr seen through the Functor interface.
class ExprFunctor : public Functor {
public:
    explicit ExprFunctor(FunctorExpr expr, Options opt = {})
        : expr_(std::move(expr)), opt_(opt) {}
    std::string name() const override { return expr_.describe(); }
    ChainComplex at(const ChainComplex& x) const override { return evaluate(expr_, x, opt_); }
    ChainMap map(const ChainMap& f) const override { return evaluate_map(expr_, f, opt_); }
    const FunctorExpr& expr() const { return expr_; }

private:
    FunctorExpr expr_;
    Options opt_;
};

// Left-associated iterated tensor power and its functorial map.
ChainComplex tensor_power_complex(const ChainComplex& x, int n);
ChainMap tensor_power_map(const ChainMap& f, int n);

// Basis bookkeeping for (x^{(x)n})_k: entry i lists the per-slot degrees and
// per-slot basis indices of the i-th basis vector, in the complex's order.
struct TensorBasisEntry {
    std::vector<int> degrees;
    std::vector<long> indices;
};
std::vector<TensorBasisEntry> tensor_basis(const ChainComplex& x, int n, int total_degree);

// The chain automorphism of x^{(x)n} sending the factor in slot i to slot
// pi[i] (0-based one-line notation), with the usual graded signs.  Satisfies
// tensor_permutation(sigma) after tensor_permutation(pi) =
// tensor_permutation(sigma o pi) where (sigma o pi)[i] = sigma[pi[i]].
ChainMap tensor_permutation(const ChainComplex& x, int n, const std::vector<int>& pi);

}  // namespace fcalc
