#pragma once

#include <string>

#include "fcalc/atlas.hpp"
#include "fcalc/chain.hpp"
#include "fcalc/cube.hpp"
#include "fcalc/functor.hpp"
#include "fcalc/rep.hpp"
#include "fcalc/simplicial.hpp"

namespace fcalc {

// JSON wire format.  Parsing is strict about structure (wrong shapes, bad
// degrees, ring mismatches and failing d^2 checks all raise ValidationError)
// and serialization is canonical: the same value always produces the same
// bytes.  indent < 0 emits the compact single-line form.
//
// Chain complex:
//   {"ring": "Z" | "Q" | "Fp:<p>",
//    "degrees": [{"degree": k, "rank": r}, ...],                (ascending)
//    "differentials": [{"degree": k, "entries": [[row, col, value], ...]}]}
// Matrix entries are row-major triplets; integers that do not fit in 64 bits
// travel as decimal strings.

std::string complex_to_json(const ChainComplex& c, int indent = -1);
ChainComplex complex_from_json(const std::string& text);

// Cube: {"dimension": n, "ring": ..., "vertices": {"{}": complex, "{1}": ...},
//        "edges": {"{1}->{1,2}": [{"degree": k, "matrix": {...}}, ...]}}
std::string cube_to_json(const CubeDiagram& cube, int indent = -1);
CubeDiagram cube_from_json(const std::string& text);

// Simplicial set: {"dimensions": [{"dimension": d, "count": m,
//   "faces": [[{"surj": [...], "base": id}, ...] per simplex]}],
//   "basepoint": v?, "actions": {"name": [[...images per dimension...]]}?}
std::string simplicial_to_json(const SimplicialSet& s, int indent = -1);
SimplicialSet simplicial_from_json(const std::string& text);

// Functor expressions: nested tagged objects such as
//   {"op": "sum", "args": [{"op": "id"}, {"op": "tensor_power", "n": 2}]}
// with "value" (const), "coefficient" (coef_smash), "j" (shift), "m"
// (trunc_tensor_alg) carrying the remaining data.
std::string functor_to_json(const FunctorExpr& f, int indent = -1);
FunctorExpr functor_from_json(const std::string& text);

std::string representation_to_json(const Representation& r, int indent = -1);
Representation representation_from_json(const std::string& text);

std::string gmodule_to_json(const GModule& m, int indent = -1);
GModule gmodule_from_json(const std::string& text);

std::string homology_to_json(const HomologyTable& t, int indent = -1);
std::string character_to_json(const Character& ch, int indent = -1);

// Command-line input forms.
//   complexes:   "S<k>" (sphere in degree k), "zero", inline JSON, or a path
//   functors:    "id", "<name>:<int>" for the integer-parameter constructors,
//                inline JSON, or a path
//   simplicial:  "point", "circle", "interval", "boundary-simplex:<k>",
//                inline JSON, or a path
ChainComplex complex_from_string(const std::string& spec, const RingSpec& ring);
FunctorExpr functor_from_string(const std::string& spec);
SimplicialSet simplicial_from_string(const std::string& spec);

// Aligned-text rendering of a JSON document (the table output format; every
// table view is derived from the JSON form, never computed separately).
std::string render_table(const std::string& json_text);

}  // namespace fcalc
