#include "fcalc/functor.hpp"

#include <algorithm>
#include <optional>

#include "fcalc/smith.hpp"

namespace fcalc {

struct FunctorExpr::Node {
    FunctorOp op;
    int param = 0;
    std::optional<ChainComplex> coef;
    std::vector<FunctorExpr> children;
};

FunctorExpr FunctorExpr::make(FunctorOp op, int param, std::optional<ChainComplex> coef,
                              std::vector<FunctorExpr> children) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->param = param;
    n->coef = std::move(coef);
    n->children = std::move(children);
    return FunctorExpr(std::move(n));
}

FunctorExpr FunctorExpr::constant(ChainComplex value) {
    value.validate();
    return make(FunctorOp::Const, 0, std::move(value), {});
}

FunctorExpr FunctorExpr::identity() { return make(FunctorOp::Id, 0, std::nullopt, {}); }

FunctorExpr FunctorExpr::tensor_power(int n) {
    if (n < 1) throw ValidationError("tensor_power needs n >= 1, got " + std::to_string(n));
    return make(FunctorOp::TensorPower, n, std::nullopt, {});
}

FunctorExpr FunctorExpr::coef_smash(ChainComplex coef, int n) {
    if (n < 1) throw ValidationError("coef_smash needs n >= 1, got " + std::to_string(n));
    coef.validate();
    return make(FunctorOp::CoefSmash, n, std::move(coef), {});
}

FunctorExpr FunctorExpr::sym_power(int n) {
    if (n < 1) throw ValidationError("sym_power needs n >= 1, got " + std::to_string(n));
    return make(FunctorOp::SymPower, n, std::nullopt, {});
}

FunctorExpr FunctorExpr::ext_power(int n) {
    if (n < 1) throw ValidationError("ext_power needs n >= 1, got " + std::to_string(n));
    return make(FunctorOp::ExtPower, n, std::nullopt, {});
}

FunctorExpr FunctorExpr::sum(std::vector<FunctorExpr> terms) {
    return make(FunctorOp::Sum, 0, std::nullopt, std::move(terms));
}

FunctorExpr FunctorExpr::shift(int j) { return make(FunctorOp::Shift, j, std::nullopt, {}); }

FunctorExpr FunctorExpr::compose(FunctorExpr outer, FunctorExpr inner) {
    std::vector<FunctorExpr> ch;
    ch.push_back(std::move(outer));
    ch.push_back(std::move(inner));
    return make(FunctorOp::Compose, 0, std::nullopt, std::move(ch));
}

FunctorExpr FunctorExpr::trunc_tensor_alg(int m) {
    if (m < 1) throw ValidationError("trunc_tensor_alg needs m >= 1, got " + std::to_string(m));
    return make(FunctorOp::TruncTensorAlg, m, std::nullopt, {});
}

FunctorOp FunctorExpr::op() const { return node_->op; }
int FunctorExpr::param() const { return node_->param; }

const ChainComplex& FunctorExpr::coefficient() const {
    if (!node_->coef) throw ValidationError("functor node has no coefficient complex");
    return *node_->coef;
}

const std::vector<FunctorExpr>& FunctorExpr::children() const { return node_->children; }

bool FunctorExpr::reduced() const {
    switch (node_->op) {
        case FunctorOp::Const:
            return node_->coef->total_rank() == 0;
        case FunctorOp::Id:
        case FunctorOp::TensorPower:
        case FunctorOp::CoefSmash:
        case FunctorOp::SymPower:
        case FunctorOp::ExtPower:
        case FunctorOp::Shift:
        case FunctorOp::TruncTensorAlg:
            return true;
        case FunctorOp::Sum:
        case FunctorOp::Compose:
            return std::all_of(node_->children.begin(), node_->children.end(),
                               [](const FunctorExpr& c) { return c.reduced(); });
    }
    return false;
}

int FunctorExpr::degree_bound() const {
    switch (node_->op) {
        case FunctorOp::Const:
            return 0;
        case FunctorOp::Id:
        case FunctorOp::Shift:
            return 1;
        case FunctorOp::TensorPower:
        case FunctorOp::CoefSmash:
        case FunctorOp::SymPower:
        case FunctorOp::ExtPower:
        case FunctorOp::TruncTensorAlg:
            return node_->param;
        case FunctorOp::Sum: {
            int d = 0;
            for (const auto& c : node_->children) d = std::max(d, c.degree_bound());
            return d;
        }
        case FunctorOp::Compose:
            return node_->children[0].degree_bound() * node_->children[1].degree_bound();
    }
    return 0;
}

std::string FunctorExpr::describe() const {
    switch (node_->op) {
        case FunctorOp::Const:
            return "const";
        case FunctorOp::Id:
            return "id";
        case FunctorOp::TensorPower:
            return "tensor_power:" + std::to_string(node_->param);
        case FunctorOp::CoefSmash:
            return "coef_smash:" + std::to_string(node_->param);
        case FunctorOp::SymPower:
            return "sym_power:" + std::to_string(node_->param);
        case FunctorOp::ExtPower:
            return "ext_power:" + std::to_string(node_->param);
        case FunctorOp::Sum: {
            std::string s = "sum(";
            for (size_t i = 0; i < node_->children.size(); ++i) {
                if (i) s += ",";
                s += node_->children[i].describe();
            }
            return s + ")";
        }
        case FunctorOp::Shift:
            return "shift:" + std::to_string(node_->param);
        case FunctorOp::Compose:
            return "compose(" + node_->children[0].describe() + "," +
                   node_->children[1].describe() + ")";
        case FunctorOp::TruncTensorAlg:
            return "trunc_tensor_alg:" + std::to_string(node_->param);
    }
    return "?";
}

// --- iterated tensor powers -------------------------------------------------

ChainComplex tensor_power_complex(const ChainComplex& x, int n) {
    if (n < 1) throw ValidationError("tensor power needs n >= 1");
    ChainComplex t = x;
    for (int i = 2; i <= n; ++i) t = tensor(t, x);
    return t;
}

ChainMap tensor_power_map(const ChainMap& f, int n) {
    if (n < 1) throw ValidationError("tensor power needs n >= 1");
    ChainMap g = f;
    for (int i = 2; i <= n; ++i) g = tensor_map(g, f);
    return g;
}

namespace {

// Basis tuples of x^{(x)m} for every total degree, in the exact order the
// iterated (left associated) tensor lays them out: ascending left-factor
// degree blocks, left index major.
std::map<int, std::vector<TensorBasisEntry>> full_tensor_basis(const ChainComplex& x, int n) {
    std::map<int, std::vector<TensorBasisEntry>> cur;
    for (const auto& [k, r] : x.ranks())
        for (long a = 0; a < r; ++a) cur[k].push_back({{k}, {a}});
    for (int m = 2; m <= n; ++m) {
        std::map<int, std::vector<TensorBasisEntry>> next;
        for (const auto& [p, vec] : cur) {
            for (const auto& [q, rq] : x.ranks()) {
                auto& slot = next[p + q];
                for (const auto& e : vec) {
                    for (long b = 0; b < rq; ++b) {
                        TensorBasisEntry t = e;
                        t.degrees.push_back(q);
                        t.indices.push_back(b);
                        slot.push_back(std::move(t));
                    }
                }
            }
        }
        cur = std::move(next);
    }
    return cur;
}

int koszul_sign(const std::vector<int>& pi, const std::vector<int>& degrees) {
    int sign = 1;
    const size_t n = pi.size();
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            if (pi[i] > pi[j] && (degrees[i] % 2) && (degrees[j] % 2)) sign = -sign;
    return sign;
}

}  // namespace

std::vector<TensorBasisEntry> tensor_basis(const ChainComplex& x, int n, int total_degree) {
    auto all = full_tensor_basis(x, n);
    auto it = all.find(total_degree);
    if (it == all.end()) return {};
    return it->second;
}

ChainMap tensor_permutation(const ChainComplex& x, int n, const std::vector<int>& pi) {
    if ((int)pi.size() != n) throw ValidationError("permutation length disagrees with tensor arity");
    {
        std::vector<bool> seen(n, false);
        for (int v : pi) {
            if (v < 0 || v >= n || seen[v]) throw ValidationError("not a permutation");
            seen[v] = true;
        }
    }
    auto t = share(tensor_power_complex(x, n));
    auto all = full_tensor_basis(x, n);
    ChainMap out(t, t);
    for (const auto& [k, entries] : all) {
        // Position lookup for the target tuples.
        std::map<std::pair<std::vector<int>, std::vector<long>>, long> pos;
        for (long i = 0; i < (long)entries.size(); ++i)
            pos[{entries[i].degrees, entries[i].indices}] = i;
        SparseMat m(entries.size(), entries.size());
        for (long s = 0; s < (long)entries.size(); ++s) {
            const auto& e = entries[s];
            std::vector<int> td(n);
            std::vector<long> ti(n);
            for (int i = 0; i < n; ++i) {
                td[pi[i]] = e.degrees[i];
                ti[pi[i]] = e.indices[i];
            }
            long tpos = pos.at({td, ti});
            m.set(tpos, s, koszul_sign(pi, e.degrees));
        }
        if (!m.is_zero()) out.set_component(k, std::move(m));
    }
    return out;
}

// --- symmetric / exterior powers over the rationals --------------------------

namespace {

// Saturated integral basis of the rational image of the (anti)symmetrizer
// on x^{(x)n}, per degree, together with the coordinate transform.
struct ImageBasis {
    ChainComplex power;           // the ambient tensor power
    std::map<int, long> rank;     // image rank per degree
    std::map<int, SparseMat> basis;  // ambient_rank x image_rank
    std::map<int, DenseMat> u;       // SNF row transform; coords = (U w)[0..rank)
};

std::vector<std::vector<int>> all_permutations(int n) {
    std::vector<int> p(n);
    for (int i = 0; i < n; ++i) p[i] = i;
    std::vector<std::vector<int>> out;
    do {
        out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

int permutation_sign(const std::vector<int>& p) {
    int s = 1;
    for (size_t i = 0; i < p.size(); ++i)
        for (size_t j = i + 1; j < p.size(); ++j)
            if (p[i] > p[j]) s = -s;
    return s;
}

ImageBasis symmetrizer_image(const ChainComplex& x, int n, bool sign_twist) {
    ImageBasis ib{tensor_power_complex(x, n), {}, {}, {}};
    ChainMap sym;
    bool first = true;
    for (const auto& p : all_permutations(n)) {
        ChainMap a = tensor_permutation(x, n, p);
        if (sign_twist && permutation_sign(p) < 0) {
            for (auto& [k, m] : a.comp) m = m.negated();
        }
        sym = first ? a : sym + a;
        first = false;
    }
    for (const auto& [k, r] : ib.power.ranks()) {
        SparseMat e = sym.component(k);
        SmithResult s = smith_normal_form(e, true);
        ib.rank[k] = s.rank;
        SparseMat b(r, s.rank);
        for (long j = 0; j < s.rank; ++j)
            for (long i = 0; i < r; ++i)
                if (s.Uinv[i][j] != 0) b.set(i, j, s.Uinv[i][j]);
        ib.basis[k] = std::move(b);
        ib.u[k] = std::move(s.U);
    }
    return ib;
}

// Coordinates of an ambient vector in the saturated image basis; the vector
// must lie in the rational span.
std::vector<Int> image_coords(const ImageBasis& ib, int k, const std::vector<Int>& w,
                              const char* what) {
    auto itr = ib.rank.find(k);
    long r = itr == ib.rank.end() ? 0 : itr->second;
    if (r == 0) {
        for (const auto& v : w)
            if (v != 0) throw ValidationError(std::string(what) + ": vector escapes the image");
        return {};
    }
    const DenseMat& u = ib.u.at(k);
    std::vector<Int> y(u.size(), 0);
    for (size_t i = 0; i < u.size(); ++i) {
        Int acc = 0;
        for (size_t j = 0; j < w.size(); ++j)
            if (w[j] != 0) acc += u[i][j] * w[j];
        y[i] = acc;
    }
    for (size_t i = r; i < y.size(); ++i)
        if (y[i] != 0) throw ValidationError(std::string(what) + ": vector escapes the image");
    y.resize(r);
    return y;
}

std::vector<Int> sparse_column(const SparseMat& m, long j) {
    std::vector<Int> v(m.rows(), 0);
    for (const auto& [i, val] : m.col(j)) v[i] = val;
    return v;
}

ChainComplex image_complex(const ImageBasis& ib) {
    ChainComplex out(ib.power.ring());
    for (const auto& [k, r] : ib.rank)
        if (r > 0) out.set_rank(k, r);
    for (const auto& [k, r] : ib.rank) {
        if (r == 0) continue;
        auto below = ib.rank.find(k - 1);
        long rb = below == ib.rank.end() ? 0 : below->second;
        if (rb == 0) continue;
        SparseMat dk = ib.power.diff(k);
        SparseMat d(rb, r);
        for (long j = 0; j < r; ++j) {
            std::vector<Int> w = dk.apply(sparse_column(ib.basis.at(k), j));
            std::vector<Int> y = image_coords(ib, k - 1, w, "power differential");
            for (long i = 0; i < rb; ++i)
                if (y[i] != 0) d.set(i, j, y[i]);
        }
        if (!d.is_zero()) out.set_diff(k, std::move(d));
    }
    out.validate();
    return out;
}

ChainMap image_map(const ImageBasis& src, const ImageBasis& dst, const ChainMap& power_map) {
    ChainMap out(share(image_complex(src)), share(image_complex(dst)));
    for (const auto& [k, r] : src.rank) {
        if (r == 0) continue;
        auto itd = dst.rank.find(k);
        long rd = itd == dst.rank.end() ? 0 : itd->second;
        if (rd == 0) continue;
        SparseMat fk = power_map.component(k);
        SparseMat m(rd, r);
        for (long j = 0; j < r; ++j) {
            std::vector<Int> w = fk.apply(sparse_column(src.basis.at(k), j));
            std::vector<Int> y = image_coords(dst, k, w, "power map");
            for (long i = 0; i < rd; ++i)
                if (y[i] != 0) m.set(i, j, y[i]);
        }
        if (!m.is_zero()) out.set_component(k, std::move(m));
    }
    return out;
}

void require_rationals(const RingSpec& ring, const char* what) {
    if (ring != RingSpec::Q())
        throw ValidationError(std::string(what) +
                              " is only a homotopy functor over the rationals; ring is " +
                              ring.name());
}

}  // namespace

// --- evaluation ---------------------------------------------------------------

ChainComplex evaluate(const FunctorExpr& f, const ChainComplex& x, const Options& opt) {
    switch (f.op()) {
        case FunctorOp::Const: {
            if (f.coefficient().ring() != x.ring())
                throw ValidationError("constant functor ring disagrees with the argument");
            return f.coefficient();
        }
        case FunctorOp::Id:
            return x;
        case FunctorOp::TensorPower: {
            ChainComplex t = x;
            for (int i = 2; i <= f.param(); ++i) {
                t = tensor(t, x);
                check_budget(t.total_rank(), opt.budget, "tensor_power");
            }
            return t;
        }
        case FunctorOp::CoefSmash: {
            if (f.coefficient().ring() != x.ring())
                throw ValidationError("coefficient ring disagrees with the argument");
            ChainComplex t = evaluate(FunctorExpr::tensor_power(f.param()), x, opt);
            t = tensor(f.coefficient(), t);
            check_budget(t.total_rank(), opt.budget, "coef_smash");
            return t;
        }
        case FunctorOp::SymPower: {
            require_rationals(x.ring(), "sym_power");
            return image_complex(symmetrizer_image(x, f.param(), false));
        }
        case FunctorOp::ExtPower: {
            require_rationals(x.ring(), "ext_power");
            return image_complex(symmetrizer_image(x, f.param(), true));
        }
        case FunctorOp::Sum: {
            ChainComplex acc = zero_complex(x.ring());
            for (const auto& c : f.children()) {
                acc = direct_sum(acc, evaluate(c, x, opt));
                check_budget(acc.total_rank(), opt.budget, "sum");
            }
            return acc;
        }
        case FunctorOp::Shift:
            return shift(x, f.param());
        case FunctorOp::Compose:
            return evaluate(f.children()[0], evaluate(f.children()[1], x, opt), opt);
        case FunctorOp::TruncTensorAlg: {
            ChainComplex acc = zero_complex(x.ring());
            ChainComplex power = x;
            for (int k = 1; k <= f.param(); ++k) {
                if (k > 1) power = tensor(power, x);
                acc = direct_sum(acc, power);
                check_budget(acc.total_rank(), opt.budget, "trunc_tensor_alg");
            }
            return acc;
        }
    }
    throw ValidationError("unknown functor node");
}

ChainMap evaluate_map(const FunctorExpr& f, const ChainMap& m, const Options& opt) {
    switch (f.op()) {
        case FunctorOp::Const: {
            if (f.coefficient().ring() != m.src->ring())
                throw ValidationError("constant functor ring disagrees with the argument");
            return ChainMap::identity(share(f.coefficient()));
        }
        case FunctorOp::Id:
            return m;
        case FunctorOp::TensorPower:
            return tensor_power_map(m, f.param());
        case FunctorOp::CoefSmash: {
            if (f.coefficient().ring() != m.src->ring())
                throw ValidationError("coefficient ring disagrees with the argument");
            return tensor_map(ChainMap::identity(share(f.coefficient())),
                              tensor_power_map(m, f.param()));
        }
        case FunctorOp::SymPower: {
            require_rationals(m.src->ring(), "sym_power");
            return image_map(symmetrizer_image(*m.src, f.param(), false),
                             symmetrizer_image(*m.dst, f.param(), false),
                             tensor_power_map(m, f.param()));
        }
        case FunctorOp::ExtPower: {
            require_rationals(m.src->ring(), "ext_power");
            return image_map(symmetrizer_image(*m.src, f.param(), true),
                             symmetrizer_image(*m.dst, f.param(), true),
                             tensor_power_map(m, f.param()));
        }
        case FunctorOp::Sum: {
            ChainComplex src = zero_complex(m.src->ring());
            ChainComplex dst = src;
            std::vector<ChainMap> parts;
            for (const auto& c : f.children()) {
                parts.push_back(evaluate_map(c, m, opt));
                src = direct_sum(src, *parts.back().src);
                dst = direct_sum(dst, *parts.back().dst);
                check_budget(src.total_rank() + dst.total_rank(), opt.budget, "sum");
            }
            ChainMap out(share(std::move(src)), share(std::move(dst)));
            for (const auto& [k, r] : out.src->ranks()) {
                (void)r;
                SparseMat blk(0, 0);
                for (const auto& p : parts) blk = blk.direct_sum(p.component(k));
                if (!blk.is_zero()) out.set_component(k, std::move(blk));
            }
            return out;
        }
        case FunctorOp::Shift:
            return shift_map(m, f.param());
        case FunctorOp::Compose:
            return evaluate_map(f.children()[0], evaluate_map(f.children()[1], m, opt), opt);
        case FunctorOp::TruncTensorAlg: {
            std::vector<FunctorExpr> terms;
            for (int k = 1; k <= f.param(); ++k) terms.push_back(FunctorExpr::tensor_power(k));
            return evaluate_map(FunctorExpr::sum(std::move(terms)), m, opt);
        }
    }
    throw ValidationError("unknown functor node");
}

CubeDiagram apply_to_cube(const Functor& f, const CubeDiagram& cube) {
    CubeDiagram out(cube.dimension(), cube.ring());
    for (unsigned mask = 0; mask < cube.vertex_count(); ++mask)
        out.set_vertex(mask, f.at(cube.vertex(mask)));
    for (unsigned mask = 0; mask < cube.vertex_count(); ++mask)
        for (int s = 1; s <= cube.dimension(); ++s) {
            if (mask & (1u << (s - 1))) continue;
            ChainMap e = f.map(cube.edge(mask, s));
            unsigned to = mask | (1u << (s - 1));
            ChainMap wired(out.vertex_ptr(mask), out.vertex_ptr(to));
            wired.comp = e.comp;
            out.set_edge(mask, s, std::move(wired));
        }
    return out;
}

CubeDiagram evaluate_cube(const FunctorExpr& f, const CubeDiagram& cube, const Options& opt) {
    return apply_to_cube(ExprFunctor(f, opt), cube);
}

}  // namespace fcalc
