#pragma once

// Internal bridge between the library types and nlohmann::json.  Kept out of
// the installed headers so the public surface stays vendor-free; cli.cpp and
// json_io.cpp share these helpers.
//
// Conventions making every document byte-deterministic:
//   * objects use nlohmann's default std::map storage, so keys serialize in
//     sorted order;
//   * degree-indexed data is emitted as arrays of {"degree": k, ...} objects
//     in ascending order (string keys would sort "10" before "2");
//   * matrix entries are [row, col, value] triplets in row-major order;
//   * integers are JSON numbers when they fit in 64 bits and decimal strings
//     otherwise.

#include <json.hpp>

#include <string>
#include <vector>

#include "fcalc/atlas.hpp"
#include "fcalc/calculus.hpp"
#include "fcalc/chain.hpp"
#include "fcalc/cube.hpp"
#include "fcalc/functor.hpp"
#include "fcalc/rep.hpp"
#include "fcalc/simplicial.hpp"

namespace fcalc::detail {

using Json = nlohmann::json;

Json jint(const Int& v);
Int int_of(const Json& j, const char* where);

long long_of(const Json& j, const char* where);
int int32_of(const Json& j, const char* where);

Json jentries(const SparseMat& m);
Json jmat(const SparseMat& m);
SparseMat mat_of(const Json& j, const char* where);
// entries with externally known shape (differentials inside a complex)
SparseMat mat_of_entries(const Json& entries, long rows, long cols, const char* where);

Json jcomplex(const ChainComplex& c);
ChainComplex complex_of(const Json& j);

Json jhomology(const HomologyTable& t);

Json jrepresentation(const Representation& r);
Representation representation_of(const Json& j);

Json jgmodule(const GModule& m);
GModule gmodule_of(const Json& j);

Json jcharacter(const Character& ch);

Json jcube(const CubeDiagram& cube);
CubeDiagram cube_of(const Json& j);

Json jsimplicial(const SimplicialSet& s);
SimplicialSet simplicial_of(const Json& j);

Json jfunctor(const FunctorExpr& f);
FunctorExpr functor_of(const Json& j);

Json jconnectivity(const Connectivity& c);

Json parse_document(const std::string& text, const char* where);
std::string read_text_file(const std::string& path);
std::string trimmed(const std::string& s);

// "S<k>" / "zero" / inline JSON / path to a JSON file
bool is_sphere_shorthand(const std::string& spec);
ChainComplex complex_from_spec(const std::string& spec, const RingSpec& ring);
// builtin name / inline JSON / path
SimplicialSet simplicial_from_spec(const std::string& spec);
// compact "tensor_power:2" / inline JSON / path
FunctorExpr functor_from_spec(const std::string& spec);

std::string render_tables(const Json& doc);

}  // namespace fcalc::detail
