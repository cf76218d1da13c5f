// io.hpp — JSON schemas (version "v1"): matrices as [re, im] entries, states, algebras, maps, chains, groups, results
#pragma once

#include "qms/bimodule.hpp"
#include "qms/ceform.hpp"
#include "qms/extension.hpp"
#include "qms/groupalg.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace qms::io {

using json = nlohmann::json;

inline constexpr const char* SCHEMA_VERSION = "v1";

// Malformed or missing input (the CLI maps this to exit code 2).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

json read_file(const std::string& path);
std::string read_text(const std::string& path);
// 64-bit FNV-1a, hex encoded.
std::string fnv1a_hex(const std::string& bytes);

json to_json(const Matrix& m);            // [[ [re,im], ... ], ...] row-major
Matrix matrix_from_json(const json& j);
json to_json(const Vector& v);            // [[re,im], ...]
Vector vector_from_json(const json& j);
json to_json(const RVector& v);
RVector rvector_from_json(const json& j);

// {"sigma": M}
json state_to_json(const StateData& s);
StateData state_from_json(const json& j);

// {"ambient_dim": n, "generators": [M...]} → algebra; blocks emitted as {"blocks": [{"dim","mult"}]}.
MatAlgebra algebra_from_json(const json& j);
json algebra_to_json(const MatAlgebra& a);  // ambient_dim, basis as generators, blocks

// {"dim": n, "mat": M} | {"kind": "kraus", "ops": [...]} | {"kind": "hamiltonian_jump", "h": M, "jumps": [...]}.
// A Kraus list denotes the generator ½{Φ(1),·} − Φ of Φ = Σ V*·V.
SuperOp superop_from_json(const json& j);
json superop_to_json(const SuperOp& s);

// {"m": [...], "Q": [[...]], "symmetric": bool (optional, default true)}
ChainSpec chain_from_json(const json& j);
json chain_to_json(const ChainSpec& c);

// {"cayley": [[...]], "ell": [...], "name": optional}
GroupSpec group_from_json(const json& j);
json group_to_json(const GroupSpec& g);

// Any generator file: a chain, a group, or a superoperator with optional
// "algebra" and "state" members.  `state` (if given) overrides the embedded one.
struct LoadedGenerator {
    QMSGenerator generator;
    std::string source_kind;             // "chain" | "group" | "superop"
    std::optional<ChainSpec> chain;
    std::optional<GroupSpec> group;
};
LoadedGenerator generator_from_json(const json& j, const std::optional<StateData>& state);

json alicki_to_json(const AlickiForm& f);
AlickiForm alicki_from_json(const json& j);

json xi_to_json(const XiVector& xi);
XiVector xi_from_json(const json& j);

json bimodule_to_json(const BimoduleRep& rep);
BimoduleRep bimodule_from_json(const json& j);

}  // namespace qms::io
