#include "fcalc/cli.hpp"

#include <optional>
#include <string>
#include <vector>

#include "fcalc/atlas.hpp"
#include "fcalc/calculus.hpp"
#include "fcalc/chain.hpp"
#include "fcalc/functor.hpp"
#include "fcalc/json_io.hpp"
#include "fcalc/rep.hpp"
#include "fcalc/simplicial.hpp"
#include "json_detail.hpp"

namespace fcalc {

namespace {

using detail::Json;

// --- request plumbing --------------------------------------------------------

std::optional<RingSpec> ring_of_doc(const Json& j) {
    if (!j.is_object()) return std::nullopt;
    if (j.contains("ring") && j.at("ring").is_string())
        return RingSpec::parse(j.at("ring").get<std::string>());
    if (j.contains("space")) return ring_of_doc(j.at("space"));
    return std::nullopt;
}

std::optional<RingSpec> peek_ring(const std::string& spec) {
    std::string s = detail::trimmed(spec);
    if (s.empty() || s == "zero" || detail::is_sphere_shorthand(s)) return std::nullopt;
    std::string text = s.front() == '{' ? s : detail::read_text_file(s);
    return ring_of_doc(detail::parse_document(text, "input"));
}

// Explicit --ring wins; otherwise the first JSON input names the ring, and
// requests built purely from shorthand run over Z.
RingSpec resolve_ring(const CommandRequest& req) {
    if (req.ring_set) return req.ring;
    for (const std::string& spec : req.inputs)
        if (auto r = peek_ring(spec)) return *r;
    for (const std::string* spec : {&req.coefficient, &req.module_spec, &req.rep_spec})
        if (!spec->empty())
            if (auto r = peek_ring(*spec)) return *r;
    return RingSpec::Z();
}

void require_positive_budgets(const CommandRequest& req) {
    if (req.opt.budget <= 0) throw ValidationError("--budget must be positive");
    if (req.opt.cap < 0) throw ValidationError("--cap must be nonnegative");
    if (req.opt.window <= 0) throw ValidationError("--window must be positive");
    if (req.opt.degree_cap < 0) throw ValidationError("--degree-cap must be nonnegative");
    if (req.imax < 1) throw ValidationError("--imax must be positive");
}

int need_n(const CommandRequest& req) {
    if (req.n < 1)
        throw ValidationError("'" + req.command + "' needs --n at least 1, got " +
                              std::to_string(req.n));
    return req.n;
}

FunctorExpr need_functor(const CommandRequest& req) {
    if (req.functor.empty())
        throw ValidationError("'" + req.command + "' needs --functor");
    return functor_from_string(req.functor);
}

std::vector<ChainComplex> resolve_inputs(const CommandRequest& req, const RingSpec& ring,
                                         int want) {
    if (req.inputs.empty())
        throw ValidationError("'" + req.command + "' needs " + std::to_string(want) +
                              " input complex(es) via --at");
    std::vector<ChainComplex> out;
    if (static_cast<int>(req.inputs.size()) == 1 && want > 1) {
        ChainComplex c = complex_from_string(req.inputs[0], ring);
        out.assign(want, c);
    } else if (static_cast<int>(req.inputs.size()) == want) {
        for (const std::string& spec : req.inputs)
            out.push_back(complex_from_string(spec, ring));
    } else {
        throw ValidationError("'" + req.command + "' expected " + std::to_string(want) +
                              " inputs, got " + std::to_string(req.inputs.size()));
    }
    return out;
}

ChainComplex one_input(const CommandRequest& req, const RingSpec& ring) {
    return resolve_inputs(req, ring, 1)[0];
}

Json doc_from_spec(const std::string& spec, const char* where) {
    std::string s = detail::trimmed(spec);
    if (s.empty()) throw ValidationError(std::string(where) + ": empty input");
    return detail::parse_document(s.front() == '{' ? s : detail::read_text_file(s), where);
}

Representation coefficient_rep(const CommandRequest& req, const RingSpec& ring) {
    if (req.coefficient.empty())
        throw ValidationError("'" + req.command + "' needs --coefficient");
    Representation r = detail::representation_of(doc_from_spec(req.coefficient, "coefficient"));
    if (r.space.ring() != ring)
        throw ValidationError("coefficient is over " + r.space.ring().name() +
                              " but the request ring is " + ring.name());
    return r;
}

// --- serialization helpers ---------------------------------------------------

Json window_certification(int lo, int hi) {
    return Json{{"kind", "certified-in-window"}, {"window", Json::array({lo, hi})}};
}

Json degree_certification(int through) {
    return Json{{"kind", "certified-below-degree"}, {"through", through}};
}

std::string verdict_name(const TowerReport& r) {
    switch (r.verdict) {
        case TowerVerdict::Stabilized:
            return r.stabilized_to_zero ? "stabilized-to-zero" : "stabilized";
        case TowerVerdict::CapExhausted:
            return "cap-exhausted";
        case TowerVerdict::BudgetExhausted:
            return "budget-exhausted";
    }
    return "unknown";
}

Json jtables(const std::vector<HomologyTable>& tables) {
    Json out = Json::array();
    for (const HomologyTable& t : tables) out.push_back(detail::jhomology(t));
    return out;
}

Json jtower(const TowerReport& r) {
    return Json{{"certification", window_certification(r.window_lo, r.window_hi)},
                {"certified_iteration", r.certified_iteration},
                {"final_table", detail::jhomology(r.final_table)},
                {"iterations_used", r.iterations_used},
                {"n", r.n},
                {"note", r.note},
                {"stabilized_to_zero", r.stabilized_to_zero},
                {"tables", jtables(r.tables)},
                {"verdict", verdict_name(r)}};
}

// convenience "degree"/"rank" fields when the homology is one free class row
void add_concentration(Json& out, const HomologyTable& t) {
    if (t.entries.size() != 1) return;
    const auto& [k, e] = *t.entries.begin();
    if (!e.torsion.empty()) return;
    out["degree"] = k;
    out["rank"] = e.rank;
}

// --- command handlers ----------------------------------------------------------

Json cmd_homology(const CommandRequest& req, const RingSpec& ring) {
    ChainComplex c = one_input(req, ring);
    Json out;
    out["certification"] = "exact";
    out["homology"] = detail::jhomology(homology(c));
    out["input"] = detail::trimmed(req.inputs[0]);
    out["total_rank"] = c.total_rank();
    return out;
}

Json cmd_crosseffect(const CommandRequest& req, const RingSpec& ring) {
    int n = need_n(req);
    FunctorExpr f = need_functor(req);
    ExprFunctor ef(f, req.opt);
    CrossEffect ce = cross_effect(ef, n, resolve_inputs(req, ring, n), req.opt);
    Json out;
    out["certification"] = "exact";
    out["functor"] = f.describe();
    out["homology"] = detail::jhomology(homology(ce.total.complex));
    out["n"] = n;
    out["total_rank"] = ce.total.complex.total_rank();
    return out;
}

Json cmd_multilinearize(const CommandRequest& req, const RingSpec& ring) {
    int n = need_n(req);
    FunctorExpr f = need_functor(req);
    ExprFunctor ef(f, req.opt);
    MultilinearizeResult res = multilinearize(ef, n, resolve_inputs(req, ring, n), req.opt);
    Json out;
    out["certification"] = window_certification(res.window_lo, res.window_hi);
    out["functor"] = f.describe();
    out["homology"] =
        detail::jhomology(homology(res.complex).restricted(res.window_lo, res.window_hi));
    out["level"] = res.level;
    out["n"] = n;
    out["note"] = res.note;
    out["shift"] = res.shift;
    out["stabilized"] = res.stabilized;
    out["tables"] = jtables(res.tables);
    return out;
}

Json cmd_tower(const CommandRequest& req, const RingSpec& ring, int& code) {
    int n = need_n(req);
    FunctorExpr f = need_functor(req);
    ExprFunctor ef(f, req.opt);
    TowerReport rep = taylor_P(ef, n, one_input(req, ring), req.imax, req.opt);
    if (rep.verdict == TowerVerdict::BudgetExhausted) code = 3;
    Json out = jtower(rep);
    out["functor"] = f.describe();
    out["input"] = detail::trimmed(req.inputs[0]);
    return out;
}

Json cmd_layer(const CommandRequest& req, const RingSpec& ring, int& code) {
    int n = need_n(req);
    FunctorExpr f = need_functor(req);
    ExprFunctor ef(f, req.opt);
    Layer lay = layer_D(ef, n, one_input(req, ring), req.imax, req.opt);
    if (lay.upper.verdict == TowerVerdict::BudgetExhausted ||
        lay.lower.verdict == TowerVerdict::BudgetExhausted)
        code = 3;
    Json out;
    out["certification"] = window_certification(lay.window_lo, lay.window_hi);
    out["certified"] = lay.certified;
    out["functor"] = f.describe();
    out["homology"] = detail::jhomology(lay.table);
    out["input"] = detail::trimmed(req.inputs[0]);
    out["iteration"] = lay.iteration;
    out["n"] = n;
    out["note"] = lay.note;
    out["tower_lower"] = jtower(lay.lower);
    out["tower_upper"] = jtower(lay.upper);
    return out;
}

Json cmd_coefficient(const CommandRequest& req, const RingSpec& ring) {
    int n = need_n(req);
    FunctorExpr f = need_functor(req);
    ExprFunctor ef(f, req.opt);
    LayerCoefficient lc = layer_coefficient(ef, n, ring, req.opt);
    Json out;
    out["certification"] = window_certification(lc.window_lo, lc.window_hi);
    out["character"] = detail::jcharacter(character(lc.rep));
    out["functor"] = f.describe();
    out["homology"] = detail::jhomology(lc.homology);
    out["level"] = lc.level;
    out["n"] = n;
    out["representation"] = detail::jrepresentation(lc.rep);
    out["stabilized"] = lc.stabilized;
    add_concentration(out, lc.homology);
    return out;
}

Json cmd_delta(const CommandRequest& req, const RingSpec& ring) {
    int n = need_n(req);
    Representation coef = coefficient_rep(req, ring);
    ChainComplex x = one_input(req, ring);
    DeltaResult res = delta_n(coef, n, x, req.opt.degree_cap, req.opt);
    Json out;
    out["certification"] =
        res.exact ? Json("exact") : degree_certification(res.certified_through);
    out["exact"] = res.exact;
    HomologyTable h = homology(res.complex);
    if (!res.exact) h = h.restricted(res.complex.min_degree(), res.certified_through);
    out["homology"] = detail::jhomology(h);
    out["input"] = detail::trimmed(req.inputs[0]);
    out["n"] = n;
    return out;
}

Json cmd_roundtrip(const CommandRequest& req, const RingSpec& ring) {
    int n = need_n(req);
    Representation coef = coefficient_rep(req, ring);
    bool ok = roundtrip_check(coef, n, resolve_inputs(req, ring, n), req.opt);
    Json out;
    out["certification"] = "exact";
    out["match"] = ok;
    out["n"] = n;
    return out;
}

Json cmd_partition(const CommandRequest& req, const RingSpec& ring) {
    int n = need_n(req);
    Representation rep = partition_complex(n, ring, req.opt);
    HomologyTable h = homology(rep.space);
    Json out;
    out["certification"] = "exact";
    out["character"] = detail::jcharacter(character(rep));
    out["homology"] = detail::jhomology(h);
    out["n"] = n;
    out["representation"] = detail::jrepresentation(rep);
    add_concentration(out, h);
    return out;
}

Json cmd_lie(const CommandRequest& req, const RingSpec& ring) {
    int n = need_n(req);
    GModule m = lie_module(n, ring);
    Json out;
    out["certification"] = "exact";
    out["character"] = detail::jcharacter(character(m));
    out["module"] = detail::jgmodule(m);
    out["n"] = n;
    out["rank"] = m.rank;
    return out;
}

Json cmd_compare_partition_lie(const CommandRequest& req) {
    int n = need_n(req);
    bool ok = compare_partition_lie(n, req.opt);
    Json out;
    out["certification"] = "exact";
    out["characters"] =
        Json{{"lie", detail::jcharacter(character(lie_module(n)))},
             {"partition", detail::jcharacter(character(partition_complex(n, RingSpec::Z(),
                                                                          req.opt)))}};
    out["match"] = ok;
    out["n"] = n;
    return out;
}

Json cmd_config(const CommandRequest& req, const RingSpec& ring) {
    int n = need_n(req);
    SimplicialSet space = simplicial_from_string(req.space);
    ConfigSpace cs = config_compactified(space, n, req.based, ring, req.opt);
    Json cells = Json::array();
    for (const auto& [k, r] : cs.cells.ranks())
        cells.push_back(Json{{"count", r}, {"degree", k}});
    Json out;
    out["based"] = req.based;
    out["cells"] = cells;
    out["certification"] = "exact";
    out["character"] = detail::jcharacter(character(cs.rep));
    out["homology"] = detail::jhomology(homology(cs.rep.space));
    out["n"] = n;
    out["representation"] = detail::jrepresentation(cs.rep);
    out["space"] = detail::trimmed(req.space);
    return out;
}

Json cmd_regraded(const CommandRequest& req, const RingSpec& ring, bool a_theory) {
    int n = need_n(req);
    RegradedRep rr = a_theory ? a_theory_coefficient(n, ring, req.opt)
                              : identity_derivative(n, ring, req.opt);
    HomologyTable h = homology(rr.rep.space);
    Json out;
    out["certification"] = "exact";
    out["character"] = detail::jcharacter(character(rr.rep));
    out["degree"] = rr.degree;
    out["dual_degree"] = rr.dual_degree;
    out["homology"] = detail::jhomology(h);
    out["n"] = n;
    out["representation"] = detail::jrepresentation(rr.rep);
    add_concentration(out, h);
    return out;
}

Json cmd_character(const CommandRequest& req) {
    if (req.rep_spec.empty() == req.module_spec.empty())
        throw ValidationError("'character' needs exactly one of --rep or --module");
    Json out;
    out["certification"] = "exact";
    if (!req.rep_spec.empty()) {
        Representation r = detail::representation_of(doc_from_spec(req.rep_spec, "rep"));
        out["character"] = detail::jcharacter(character(r));
        out["n"] = r.n;
    } else {
        GModule m = detail::gmodule_of(doc_from_spec(req.module_spec, "module"));
        out["character"] = detail::jcharacter(character(m));
        out["n"] = m.n;
    }
    return out;
}

Json cmd_group_homology(const CommandRequest& req, const RingSpec& ring) {
    GModule m;
    if (req.lie > 0) {
        m = lie_module(req.lie, ring);
    } else if (!req.module_spec.empty()) {
        m = detail::gmodule_of(doc_from_spec(req.module_spec, "module"));
        if (m.ring != ring && req.ring_set)
            throw ValidationError("module is over " + m.ring.name() +
                                  " but the request ring is " + ring.name());
    } else {
        throw ValidationError("'group-homology' needs --module or --lie");
    }
    GroupHomologyResult gh = group_homology(m, req.opt.degree_cap, req.opt);
    Json out;
    out["certification"] = degree_certification(gh.certified_through);
    out["group"] = m.group == GModule::Group::Symmetric ? "symmetric" : "cyclic";
    out["homology"] = detail::jhomology(gh.table);
    out["n"] = m.n;
    out["rank"] = m.rank;
    return out;
}

Json cmd_agreement(const CommandRequest& req, const RingSpec& ring) {
    int n = need_n(req);
    NatMap u;
    if (req.kind == "identity")
        u.kind = NatMap::Kind::Identity;
    else if (req.kind == "zero")
        u.kind = NatMap::Kind::Zero;
    else if (req.kind == "trunc-inclusion")
        u.kind = NatMap::Kind::TruncInclusion;
    else
        throw ValidationError("--kind must be identity, zero or trunc-inclusion");
    if (req.src.empty())
        throw ValidationError("'agreement' needs --src");
    u.src = functor_from_string(req.src);
    u.dst = req.dst.empty() ? u.src : functor_from_string(req.dst);
    u.opt = req.opt;
    std::vector<int> ks = req.ks.empty() ? std::vector<int>{1, 2, 3} : req.ks;
    AgreementReport rep = agreement_order(u, n, ks, ring, req.opt);
    Json samples = Json::array();
    for (const auto& [k, conn] : rep.table)
        samples.push_back(Json{{"connectivity", detail::jconnectivity(conn)}, {"k", k}});
    Json out;
    out["all_infinite"] = rep.all_infinite;
    out["certification"] = "exact";
    out["fitted_c"] = rep.fitted_c;
    out["kind"] = req.kind;
    out["n"] = n;
    out["note"] = rep.note;
    out["samples"] = samples;
    out["slope_ok"] = rep.slope_ok;
    return out;
}

std::string render(const std::string& format, const Json& doc) {
    if (format == "table") return detail::render_tables(doc);
    return doc.dump(2) + "\n";
}

}  // namespace

CommandResult run(const CommandRequest& req) {
    std::string format = req.format;
    try {
        if (format != "json" && format != "table")
            throw ValidationError("--format must be json or table");
        require_positive_budgets(req);
        RingSpec ring = resolve_ring(req);
        int code = 0;
        Json out;
        const std::string& c = req.command;
        if (c == "homology")
            out = cmd_homology(req, ring);
        else if (c == "crosseffect")
            out = cmd_crosseffect(req, ring);
        else if (c == "multilinearize")
            out = cmd_multilinearize(req, ring);
        else if (c == "tower")
            out = cmd_tower(req, ring, code);
        else if (c == "layer")
            out = cmd_layer(req, ring, code);
        else if (c == "coefficient")
            out = cmd_coefficient(req, ring);
        else if (c == "delta")
            out = cmd_delta(req, ring);
        else if (c == "roundtrip")
            out = cmd_roundtrip(req, ring);
        else if (c == "partition")
            out = cmd_partition(req, ring);
        else if (c == "lie")
            out = cmd_lie(req, ring);
        else if (c == "compare-partition-lie")
            out = cmd_compare_partition_lie(req);
        else if (c == "config")
            out = cmd_config(req, ring);
        else if (c == "identity-derivative")
            out = cmd_regraded(req, ring, false);
        else if (c == "atheory")
            out = cmd_regraded(req, ring, true);
        else if (c == "character")
            out = cmd_character(req);
        else if (c == "group-homology")
            out = cmd_group_homology(req, ring);
        else if (c == "agreement")
            out = cmd_agreement(req, ring);
        else
            throw ValidationError("unknown command '" + c + "'");
        out["command"] = c;
        out["ring"] = ring.name();
        return {code, render(format, out)};
    } catch (const ValidationError& e) {
        Json err{{"command", req.command}, {"error", "validation"}, {"message", e.what()}};
        return {2, render(format, err)};
    } catch (const BudgetError& e) {
        Json err{{"command", req.command}, {"error", "budget"}, {"message", e.what()}};
        return {3, render(format, err)};
    }
}

}  // namespace fcalc
