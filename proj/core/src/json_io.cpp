#include "fcalc/json_io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>

#include "json_detail.hpp"

namespace fcalc::detail {

namespace {

[[noreturn]] void bad(const char* where, const std::string& what) {
    throw ValidationError(std::string(where) + ": " + what);
}

const Json& field(const Json& j, const char* key, const char* where) {
    if (!j.is_object()) bad(where, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) bad(where, std::string("missing field '") + key + "'");
    return *it;
}

std::string string_of(const Json& j, const char* where) {
    if (!j.is_string()) bad(where, "expected a string");
    return j.get<std::string>();
}

bool parse_full_int(const std::string& s, long& out) {
    if (s.empty()) return false;
    try {
        size_t used = 0;
        out = std::stol(s, &used);
        return used == s.size();
    } catch (const std::exception&) {
        return false;
    }
}

}  // namespace

std::string trimmed(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

Json jint(const Int& v) {
    if (v.fits_slong_p()) return Json(static_cast<std::int64_t>(v.get_si()));
    return Json(v.get_str());
}

Int int_of(const Json& j, const char* where) {
    if (j.is_number_integer()) return Int(static_cast<long>(j.get<std::int64_t>()));
    if (j.is_number_unsigned()) return Int(static_cast<unsigned long>(j.get<std::uint64_t>()));
    if (j.is_string()) {
        try {
            return Int(j.get<std::string>(), 10);
        } catch (const std::exception&) {
            bad(where, "'" + j.get<std::string>() + "' is not a decimal integer");
        }
    }
    bad(where, "expected an integer (number or decimal string)");
}

long long_of(const Json& j, const char* where) {
    if (j.is_number_integer()) return static_cast<long>(j.get<std::int64_t>());
    if (j.is_number_unsigned()) {
        auto u = j.get<std::uint64_t>();
        if (u > static_cast<std::uint64_t>(std::numeric_limits<long>::max()))
            bad(where, "integer out of range");
        return static_cast<long>(u);
    }
    bad(where, "expected an integer");
}

int int32_of(const Json& j, const char* where) {
    long v = long_of(j, where);
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
        bad(where, "integer out of range");
    return static_cast<int>(v);
}

Json jentries(const SparseMat& m) {
    Json out = Json::array();
    for (const auto& [r, c, v] : m.entries_row_major()) out.push_back(Json::array({r, c, jint(v)}));
    return out;
}

Json jmat(const SparseMat& m) {
    return Json{{"cols", m.cols()}, {"entries", jentries(m)}, {"rows", m.rows()}};
}

SparseMat mat_of_entries(const Json& entries, long rows, long cols, const char* where) {
    if (!entries.is_array()) bad(where, "entries must be an array");
    SparseMat m(rows, cols);
    for (const Json& e : entries) {
        if (!e.is_array() || e.size() != 3) bad(where, "each entry must be [row, col, value]");
        long r = long_of(e[0], where), c = long_of(e[1], where);
        if (r < 0 || r >= rows || c < 0 || c >= cols)
            bad(where, "entry (" + std::to_string(r) + ", " + std::to_string(c) +
                           ") outside a " + std::to_string(rows) + " x " + std::to_string(cols) +
                           " matrix");
        m.add(r, c, int_of(e[2], where));
    }
    return m;
}

SparseMat mat_of(const Json& j, const char* where) {
    long rows = long_of(field(j, "rows", where), where);
    long cols = long_of(field(j, "cols", where), where);
    if (rows < 0 || cols < 0) bad(where, "negative matrix dimension");
    return mat_of_entries(field(j, "entries", where), rows, cols, where);
}

Json jcomplex(const ChainComplex& c) {
    Json degrees = Json::array();
    for (const auto& [k, r] : c.ranks()) degrees.push_back(Json{{"degree", k}, {"rank", r}});
    Json diffs = Json::array();
    for (const auto& [k, d] : c.diffs()) {
        if (d.is_zero()) continue;
        diffs.push_back(Json{{"degree", k}, {"entries", jentries(d)}});
    }
    return Json{{"degrees", degrees}, {"differentials", diffs}, {"ring", c.ring().name()}};
}

ChainComplex complex_of(const Json& j) {
    const char* where = "chain complex";
    ChainComplex c(RingSpec::parse(string_of(field(j, "ring", where), where)));
    const Json& degrees = field(j, "degrees", where);
    if (!degrees.is_array()) bad(where, "degrees must be an array");
    for (const Json& e : degrees) {
        int k = int32_of(field(e, "degree", where), where);
        c.set_rank(k, long_of(field(e, "rank", where), where));
    }
    if (j.contains("differentials")) {
        const Json& diffs = j.at("differentials");
        if (!diffs.is_array()) bad(where, "differentials must be an array");
        for (const Json& e : diffs) {
            int k = int32_of(field(e, "degree", where), where);
            c.set_diff(k, mat_of_entries(field(e, "entries", where), c.rank(k - 1), c.rank(k),
                                         "differential"));
        }
    }
    c.validate();
    return c;
}

Json jhomology(const HomologyTable& t) {
    Json entries = Json::array();
    for (const auto& [k, e] : t.entries) {
        Json torsion = Json::array();
        for (const Int& v : e.torsion) torsion.push_back(jint(v));
        entries.push_back(Json{{"degree", k}, {"rank", e.rank}, {"torsion", torsion}});
    }
    return Json{{"entries", entries}, {"ring", t.ring.name()}};
}

namespace {

Json jactions(const std::map<int, SparseMat>& acts) {
    Json out = Json::array();
    for (const auto& [k, m] : acts) out.push_back(Json{{"degree", k}, {"matrix", jmat(m)}});
    return out;
}

std::map<int, SparseMat> actions_of(const Json& j, const char* where) {
    if (!j.is_array()) bad(where, "expected an array of {degree, matrix} objects");
    std::map<int, SparseMat> out;
    for (const Json& e : j) {
        int k = int32_of(field(e, "degree", where), where);
        if (out.count(k)) bad(where, "duplicate degree " + std::to_string(k));
        out.emplace(k, mat_of(field(e, "matrix", where), where));
    }
    return out;
}

}  // namespace

Json jrepresentation(const Representation& r) {
    return Json{{"action_c", jactions(r.act_c)},
                {"action_t", jactions(r.act_t)},
                {"n", r.n},
                {"space", jcomplex(r.space)}};
}

Representation representation_of(const Json& j) {
    const char* where = "representation";
    Representation r;
    r.n = int32_of(field(j, "n", where), where);
    r.space = complex_of(field(j, "space", where));
    if (j.contains("action_t")) r.act_t = actions_of(j.at("action_t"), where);
    if (j.contains("action_c")) r.act_c = actions_of(j.at("action_c"), where);
    r.validate();
    return r;
}

Json jgmodule(const GModule& m) {
    return Json{{"gen_c", jmat(m.gen_c)},
                {"gen_t", jmat(m.gen_t)},
                {"group", m.group == GModule::Group::Symmetric ? "symmetric" : "cyclic"},
                {"n", m.n},
                {"rank", m.rank},
                {"ring", m.ring.name()}};
}

GModule gmodule_of(const Json& j) {
    const char* where = "group module";
    GModule m;
    std::string g = string_of(field(j, "group", where), where);
    if (g == "symmetric")
        m.group = GModule::Group::Symmetric;
    else if (g == "cyclic")
        m.group = GModule::Group::Cyclic;
    else
        bad(where, "group must be 'symmetric' or 'cyclic'");
    m.n = int32_of(field(j, "n", where), where);
    m.ring = RingSpec::parse(string_of(field(j, "ring", where), where));
    m.rank = long_of(field(j, "rank", where), where);
    if (j.contains("gen_t")) m.gen_t = mat_of(j.at("gen_t"), where);
    m.gen_c = mat_of(field(j, "gen_c", where), where);
    m.validate();
    return m;
}

Json jcharacter(const Character& ch) {
    Json classes = Json::array();
    for (const std::string& name : ch.class_names) classes.push_back(name);
    Json degrees = Json::array();
    for (const auto& [k, row] : ch.by_degree) {
        Json values;
        for (size_t i = 0; i < row.size(); ++i) values[ch.class_names[i]] = jint(row[i]);
        degrees.push_back(Json{{"degree", k}, {"values", values}});
    }
    Json euler;
    for (size_t i = 0; i < ch.euler.size(); ++i) euler[ch.class_names[i]] = jint(ch.euler[i]);
    return Json{{"classes", classes}, {"degrees", degrees},
                {"euler", euler},     {"n", ch.n},
                {"ring", ch.ring.name()}};
}

namespace {

std::string subset_key(unsigned mask) {
    std::string out = "{";
    bool first = true;
    for (int s = 1; mask >> (s - 1); ++s) {
        if (!(mask & (1u << (s - 1)))) continue;
        if (!first) out += ",";
        out += std::to_string(s);
        first = false;
    }
    return out + "}";
}

unsigned subset_of(const std::string& key, int n, const char* where) {
    if (key.size() < 2 || key.front() != '{' || key.back() != '}')
        bad(where, "subset key '" + key + "' must look like {1,3}");
    unsigned mask = 0;
    std::string body = key.substr(1, key.size() - 2);
    if (body.empty()) return 0;
    std::stringstream ss(body);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        long s = 0;
        if (!parse_full_int(tok, s) || s < 1 || s > n)
            bad(where, "subset key '" + key + "' has a direction outside 1.." +
                           std::to_string(n));
        if (mask & (1u << (s - 1))) bad(where, "subset key '" + key + "' repeats a direction");
        mask |= 1u << (s - 1);
    }
    return mask;
}

}  // namespace

Json jcube(const CubeDiagram& cube) {
    Json vertices, edges;
    for (unsigned mask = 0; mask < cube.vertex_count(); ++mask)
        vertices[subset_key(mask)] = jcomplex(cube.vertex(mask));
    for (unsigned mask = 0; mask < cube.vertex_count(); ++mask)
        for (int s = 1; s <= cube.dimension(); ++s) {
            if (mask & (1u << (s - 1))) continue;
            const ChainMap& f = cube.edge(mask, s);
            edges[subset_key(mask) + "->" + subset_key(mask | (1u << (s - 1)))] =
                jactions(f.comp);
        }
    Json out{{"dimension", cube.dimension()}, {"ring", cube.ring().name()},
             {"vertices", vertices}};
    if (cube.dimension() > 0) out["edges"] = edges;
    return out;
}

CubeDiagram cube_of(const Json& j) {
    const char* where = "cube";
    int n = int32_of(field(j, "dimension", where), where);
    if (n < 0 || n > 20) bad(where, "dimension out of range");
    CubeDiagram cube(n, RingSpec::parse(string_of(field(j, "ring", where), where)));
    const Json& vertices = field(j, "vertices", where);
    for (unsigned mask = 0; mask < cube.vertex_count(); ++mask) {
        std::string key = subset_key(mask);
        if (!vertices.contains(key)) bad(where, "missing vertex " + key);
        cube.set_vertex(mask, complex_of(vertices.at(key)));
    }
    if (n > 0) {
        const Json& edges = field(j, "edges", where);
        if (!edges.is_object()) bad(where, "edges must be an object");
        for (const auto& [key, comps] : edges.items()) {
            auto arrow = key.find("->");
            if (arrow == std::string::npos) bad(where, "edge key '" + key + "' needs '->'");
            unsigned from = subset_of(key.substr(0, arrow), n, where);
            unsigned to = subset_of(key.substr(arrow + 2), n, where);
            unsigned added = from ^ to;
            if ((from & to) != from || added == 0 || (added & (added - 1)) != 0)
                bad(where, "edge key '" + key + "' must add exactly one direction");
            int s = 1;
            while (!(added & (1u << (s - 1)))) ++s;
            ChainMap f(cube.vertex_ptr(from), cube.vertex_ptr(to));
            for (const auto& [k, m] : actions_of(comps, "cube edge")) f.set_component(k, m);
            cube.set_edge(from, s, std::move(f));
        }
    }
    cube.validate();
    return cube;
}

Json jsimplicial(const SimplicialSet& s) {
    Json dims = Json::array();
    for (int d = 0; d <= s.dim(); ++d) {
        Json entry{{"count", s.count(d)}, {"dimension", d}};
        if (d >= 1) {
            Json faces = Json::array();
            for (long id = 0; id < s.count(d); ++id) {
                Json per = Json::array();
                for (int i = 0; i <= d; ++i) {
                    const DegenerateFace& f = s.face(d, id, i);
                    per.push_back(Json{{"base", f.base}, {"surj", f.surj}});
                }
                faces.push_back(per);
            }
            entry["faces"] = faces;
        }
        dims.push_back(entry);
    }
    Json out{{"dimensions", dims}};
    if (s.basepoint) out["basepoint"] = *s.basepoint;
    if (!s.actions.empty()) {
        Json acts;
        for (const auto& [name, images] : s.actions) acts[name] = images;
        out["actions"] = acts;
    }
    return out;
}

SimplicialSet simplicial_of(const Json& j) {
    const char* where = "simplicial set";
    SimplicialSet s;
    const Json& dims = field(j, "dimensions", where);
    if (!dims.is_array() || dims.empty()) bad(where, "dimensions must be a nonempty array");
    s.counts.assign(dims.size(), 0);
    s.faces.assign(dims.size(), {});
    for (const Json& entry : dims) {
        int d = int32_of(field(entry, "dimension", where), where);
        if (d < 0 || d >= static_cast<int>(dims.size()))
            bad(where, "dimension entries must cover 0..dim once each");
        s.counts[d] = long_of(field(entry, "count", where), where);
        if (d == 0) continue;
        const Json& faces = field(entry, "faces", where);
        if (!faces.is_array() || static_cast<long>(faces.size()) != s.counts[d])
            bad(where, "faces must list every simplex of dimension " + std::to_string(d));
        for (const Json& per : faces) {
            if (!per.is_array() || static_cast<int>(per.size()) != d + 1)
                bad(where, "each simplex of dimension " + std::to_string(d) + " needs " +
                               std::to_string(d + 1) + " faces");
            std::vector<DegenerateFace> fs;
            for (const Json& fj : per) {
                DegenerateFace f;
                f.base = long_of(field(fj, "base", where), where);
                for (const Json& v : field(fj, "surj", where))
                    f.surj.push_back(int32_of(v, where));
                fs.push_back(std::move(f));
            }
            s.faces[d].push_back(std::move(fs));
        }
    }
    if (j.contains("basepoint")) s.basepoint = long_of(j.at("basepoint"), where);
    if (j.contains("actions")) {
        const Json& acts = j.at("actions");
        if (!acts.is_object()) bad(where, "actions must be an object");
        for (const auto& [name, images] : acts.items()) {
            std::vector<std::vector<long>> per_dim;
            for (const Json& row : images) {
                std::vector<long> img;
                for (const Json& v : row) img.push_back(long_of(v, where));
                per_dim.push_back(std::move(img));
            }
            s.actions[name] = std::move(per_dim);
        }
    }
    s.validate();
    return s;
}

Json jfunctor(const FunctorExpr& f) {
    switch (f.op()) {
        case FunctorOp::Const:
            return Json{{"op", "const"}, {"value", jcomplex(f.coefficient())}};
        case FunctorOp::Id:
            return Json{{"op", "id"}};
        case FunctorOp::TensorPower:
            return Json{{"n", f.param()}, {"op", "tensor_power"}};
        case FunctorOp::CoefSmash:
            return Json{{"coefficient", jcomplex(f.coefficient())},
                        {"n", f.param()},
                        {"op", "coef_smash"}};
        case FunctorOp::SymPower:
            return Json{{"n", f.param()}, {"op", "sym_power"}};
        case FunctorOp::ExtPower:
            return Json{{"n", f.param()}, {"op", "ext_power"}};
        case FunctorOp::Sum: {
            Json args = Json::array();
            for (const FunctorExpr& c : f.children()) args.push_back(jfunctor(c));
            return Json{{"args", args}, {"op", "sum"}};
        }
        case FunctorOp::Shift:
            return Json{{"j", f.param()}, {"op", "shift"}};
        case FunctorOp::Compose:
            return Json{{"args", Json::array({jfunctor(f.children()[0]),
                                              jfunctor(f.children()[1])})},
                        {"op", "compose"}};
        case FunctorOp::TruncTensorAlg:
            return Json{{"m", f.param()}, {"op", "trunc_tensor_alg"}};
    }
    throw ValidationError("functor: unknown constructor");
}

FunctorExpr functor_of(const Json& j) {
    const char* where = "functor";
    std::string op = string_of(field(j, "op", where), where);
    auto param = [&](const char* key) {
        if (j.contains(key)) return int32_of(j.at(key), where);
        if (j.contains("n")) return int32_of(j.at("n"), where);
        bad(where, "'" + op + "' needs field '" + key + "'");
    };
    if (op == "const") return FunctorExpr::constant(complex_of(field(j, "value", where)));
    if (op == "id" || op == "identity") return FunctorExpr::identity();
    if (op == "tensor_power") return FunctorExpr::tensor_power(param("n"));
    if (op == "coef_smash")
        return FunctorExpr::coef_smash(complex_of(field(j, "coefficient", where)), param("n"));
    if (op == "sym_power") return FunctorExpr::sym_power(param("n"));
    if (op == "ext_power") return FunctorExpr::ext_power(param("n"));
    if (op == "sum") {
        const Json& args = field(j, "args", where);
        if (!args.is_array()) bad(where, "sum args must be an array");
        std::vector<FunctorExpr> terms;
        for (const Json& a : args) terms.push_back(functor_of(a));
        return FunctorExpr::sum(std::move(terms));
    }
    if (op == "shift") return FunctorExpr::shift(param("j"));
    if (op == "compose") {
        const Json& args = field(j, "args", where);
        if (!args.is_array() || args.size() != 2)
            bad(where, "compose args must be [outer, inner]");
        return FunctorExpr::compose(functor_of(args[0]), functor_of(args[1]));
    }
    if (op == "trunc_tensor_alg") return FunctorExpr::trunc_tensor_alg(param("m"));
    bad(where, "unknown op '" + op + "'");
}

Json jconnectivity(const Connectivity& c) {
    return Json{{"infinite", c.infinite}, {"value", c.infinite ? 0 : c.value}};
}

Json parse_document(const std::string& text, const char* where) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        bad(where, std::string("invalid JSON (") + e.what() + ")");
    }
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot read input file '" + path + "'");
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

bool is_sphere_shorthand(const std::string& spec) {
    std::string s = trimmed(spec);
    long k = 0;
    return s.size() >= 2 && s[0] == 'S' && parse_full_int(s.substr(1), k);
}

ChainComplex complex_from_spec(const std::string& spec, const RingSpec& ring) {
    std::string s = trimmed(spec);
    if (s.empty()) throw ValidationError("empty chain complex input");
    if (s == "zero") return zero_complex(ring);
    if (is_sphere_shorthand(s)) {
        long k = 0;
        parse_full_int(s.substr(1), k);
        return sphere(ring, static_cast<int>(k));
    }
    Json j = s.front() == '{' ? parse_document(s, "chain complex")
                              : parse_document(read_text_file(s), "chain complex");
    ChainComplex c = complex_of(j);
    if (c.ring() != ring)
        throw ValidationError("input '" + s.substr(0, 40) + "' is over " + c.ring().name() +
                              " but the request ring is " + ring.name() +
                              " (pass --ring " + c.ring().name() + ")");
    return c;
}

SimplicialSet simplicial_from_spec(const std::string& spec) {
    std::string s = trimmed(spec);
    if (s.empty()) throw ValidationError("empty simplicial set input");
    if (s == "point" || s == "circle" || s == "interval" || s.rfind("boundary-simplex:", 0) == 0)
        return SimplicialSet::named(s);
    if (s.front() == '{') return simplicial_of(parse_document(s, "simplicial set"));
    return simplicial_of(parse_document(read_text_file(s), "simplicial set"));
}

FunctorExpr functor_from_spec(const std::string& spec) {
    std::string s = trimmed(spec);
    if (s.empty()) throw ValidationError("empty functor expression");
    if (s.front() == '{') return functor_of(parse_document(s, "functor"));
    if (s == "id" || s == "identity") return FunctorExpr::identity();
    auto colon = s.find(':');
    if (colon != std::string::npos) {
        std::string name = s.substr(0, colon);
        long v = 0;
        if (parse_full_int(s.substr(colon + 1), v)) {
            int k = static_cast<int>(v);
            if (name == "tensor_power") return FunctorExpr::tensor_power(k);
            if (name == "sym_power") return FunctorExpr::sym_power(k);
            if (name == "ext_power") return FunctorExpr::ext_power(k);
            if (name == "shift") return FunctorExpr::shift(k);
            if (name == "trunc_tensor_alg") return FunctorExpr::trunc_tensor_alg(k);
        }
    }
    std::ifstream probe(s);
    if (probe.good()) return functor_of(parse_document(read_text_file(s), "functor"));
    throw ValidationError(
        "unknown functor '" + s +
        "' (expected id, <name>:<int> with name in {tensor_power, sym_power, ext_power, "
        "shift, trunc_tensor_alg}, inline JSON, or a path to a JSON file)");
}

// --- aligned-text rendering --------------------------------------------------

namespace {

bool is_scalar(const Json& j) { return !j.is_object() && !j.is_array(); }

std::string scalar_text(const Json& j) {
    if (j.is_string()) return j.get<std::string>();
    return j.dump();
}

bool is_homology_doc(const Json& j) {
    return j.is_object() && j.size() == 2 && j.contains("ring") && j.contains("entries") &&
           j["entries"].is_array();
}

bool is_matrix_doc(const Json& j) {
    return j.is_object() && j.size() == 3 && j.contains("rows") && j.contains("cols") &&
           j.contains("entries");
}

bool inlinable_array(const Json& j) {
    if (!j.is_array()) return false;
    for (const Json& e : j)
        if (!is_scalar(e)) return false;
    return true;
}

bool inlinable_object(const Json& j) {
    if (!j.is_object() || j.empty()) return false;
    for (const auto& [k, v] : j.items())
        if (!is_scalar(v)) return false;
    return true;
}

std::string inline_text(const Json& j) {
    if (is_matrix_doc(j))
        return std::to_string(j["rows"].get<long>()) + " x " +
               std::to_string(j["cols"].get<long>()) + "  " + j["entries"].dump();
    if (j.is_array()) {
        std::string out = "[";
        for (size_t i = 0; i < j.size(); ++i) {
            if (i) out += ", ";
            out += scalar_text(j[i]);
        }
        return out + "]";
    }
    std::string out = "{";
    bool first = true;
    for (const auto& [k, v] : j.items()) {
        if (!first) out += ", ";
        out += k + ": " + scalar_text(v);
        first = false;
    }
    return out + "}";
}

std::string module_text(const std::string& ring, const Json& entry) {
    long rank = entry["rank"].get<long>();
    const Json& torsion = entry["torsion"];
    std::string base = ring == "Z" ? "Z" : ring == "Q" ? "Q" : "F" + ring.substr(3);
    std::vector<std::string> parts;
    if (rank == 1)
        parts.push_back(base);
    else if (rank > 1)
        parts.push_back(base + "^" + std::to_string(rank));
    for (const Json& t : torsion) parts.push_back("Z/" + scalar_text(t));
    if (parts.empty()) return "0";
    std::string out = parts[0];
    for (size_t i = 1; i < parts.size(); ++i) out += " + " + parts[i];
    return out;
}

void render(const Json& j, int indent, std::string& out);

void render_homology(const Json& j, int indent, std::string& out) {
    std::string pad(indent, ' ');
    const Json& entries = j["entries"];
    if (entries.empty()) {
        out += pad + "(trivial)\n";
        return;
    }
    for (const Json& e : entries)
        out += pad + "H_" + scalar_text(e["degree"]) + " = " +
               module_text(j["ring"].get<std::string>(), e) + "\n";
}

void render(const Json& j, int indent, std::string& out) {
    std::string pad(indent, ' ');
    if (is_homology_doc(j)) {
        render_homology(j, indent, out);
        return;
    }
    if (j.is_object()) {
        size_t width = 0;
        for (const auto& [k, v] : j.items())
            if (is_scalar(v) || is_matrix_doc(v) || inlinable_array(v) || inlinable_object(v))
                width = std::max(width, k.size());
        for (const auto& [k, v] : j.items()) {
            if (is_scalar(v)) {
                out += pad + k + std::string(width - k.size() + 2, ' ') + scalar_text(v) + "\n";
            } else if (is_matrix_doc(v) || inlinable_array(v) || inlinable_object(v)) {
                out += pad + k + std::string(width - k.size() + 2, ' ') + inline_text(v) + "\n";
            } else {
                out += pad + k + ":\n";
                render(v, indent + 2, out);
            }
        }
        return;
    }
    if (j.is_array()) {
        if (j.empty()) {
            out += pad + "(none)\n";
            return;
        }
        for (size_t i = 0; i < j.size(); ++i) {
            if (is_scalar(j[i])) {
                out += pad + "[" + std::to_string(i) + "]  " + scalar_text(j[i]) + "\n";
            } else {
                out += pad + "[" + std::to_string(i) + "]\n";
                render(j[i], indent + 2, out);
            }
        }
        return;
    }
    out += pad + scalar_text(j) + "\n";
}

}  // namespace

std::string render_tables(const Json& doc) {
    std::string out;
    render(doc, 0, out);
    return out;
}

}  // namespace fcalc::detail

namespace fcalc {

namespace {
std::string dump(const detail::Json& j, int indent) { return j.dump(indent); }
}  // namespace

std::string complex_to_json(const ChainComplex& c, int indent) {
    return dump(detail::jcomplex(c), indent);
}
ChainComplex complex_from_json(const std::string& text) {
    return detail::complex_of(detail::parse_document(text, "chain complex"));
}

std::string cube_to_json(const CubeDiagram& cube, int indent) {
    return dump(detail::jcube(cube), indent);
}
CubeDiagram cube_from_json(const std::string& text) {
    return detail::cube_of(detail::parse_document(text, "cube"));
}

std::string simplicial_to_json(const SimplicialSet& s, int indent) {
    return dump(detail::jsimplicial(s), indent);
}
SimplicialSet simplicial_from_json(const std::string& text) {
    return detail::simplicial_of(detail::parse_document(text, "simplicial set"));
}

std::string functor_to_json(const FunctorExpr& f, int indent) {
    return dump(detail::jfunctor(f), indent);
}
FunctorExpr functor_from_json(const std::string& text) {
    return detail::functor_of(detail::parse_document(text, "functor"));
}

std::string representation_to_json(const Representation& r, int indent) {
    return dump(detail::jrepresentation(r), indent);
}
Representation representation_from_json(const std::string& text) {
    return detail::representation_of(detail::parse_document(text, "representation"));
}

std::string gmodule_to_json(const GModule& m, int indent) {
    return dump(detail::jgmodule(m), indent);
}
GModule gmodule_from_json(const std::string& text) {
    return detail::gmodule_of(detail::parse_document(text, "group module"));
}

std::string homology_to_json(const HomologyTable& t, int indent) {
    return dump(detail::jhomology(t), indent);
}
std::string character_to_json(const Character& ch, int indent) {
    return dump(detail::jcharacter(ch), indent);
}

ChainComplex complex_from_string(const std::string& spec, const RingSpec& ring) {
    return detail::complex_from_spec(spec, ring);
}
FunctorExpr functor_from_string(const std::string& spec) {
    return detail::functor_from_spec(spec);
}
SimplicialSet simplicial_from_string(const std::string& spec) {
    return detail::simplicial_from_spec(spec);
}

std::string render_table(const std::string& json_text) {
    return detail::render_tables(detail::parse_document(json_text, "table rendering"));
}

}  // namespace fcalc
