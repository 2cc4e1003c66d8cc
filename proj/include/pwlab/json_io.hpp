#pragma once

#include "pwlab/cw.hpp"
#include "pwlab/liestruct.hpp"
#include "pwlab/lorentz.hpp"
#include "pwlab/planewave.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace pwlab {

using Json = nlohmann::json;

// ---------------------------------------------------------------------------
// JSON forms of the library types.  Keys are fixed and all serialization is
// deterministic: objects dump with sorted keys and doubles use the shortest
// decimal that round-trips, so identical values produce identical bytes.
// ---------------------------------------------------------------------------

Json matrix_to_json(const Mat& m);
// Rectangular array of finite numbers; `name` labels error messages.
Mat matrix_from_json(const Json& j, const std::string& name);

Json vector_to_json(const Vec& v);
Vec vector_from_json(const Json& j, const std::string& name);

// {"kind": "a"|"b", "n": int, "F": [[..]], "B": [[..]]}
Json spec_to_json(const PlaneWaveSpec& spec);
PlaneWaveSpec spec_from_json(const Json& j);

// {"lambda": x, "omega": [[..]], "L": [[..]], optional "c0", "K", "T"}
Json derivation_to_json(const DerivationData& data);
DerivationData derivation_from_json(const Json& j);

// {"labels": [..], "nonzero": [[i,j,k,value],..], "jacobi_residual": r}
Json algebra_to_json(const LieAlgebraData& alg);

Json normalized_to_json(const NormalizedFrame& nf);
Json witness_to_json(const DecisionWitness& w);
Json canonical_to_json(const CanonicalForm& form);

// Sparse view of a rank-four curvature block: entries [l,k,i,j,value].
Json curvature_to_json(const Curvature4& r);

// Parse text (error position reported on failure) / read a file, with
// validation errors for unreadable paths or malformed JSON.
Json parse_json_text(const std::string& text, const std::string& where);
Json load_json_file(const std::string& path);
std::string read_file_bytes(const std::string& path);

PlaneWaveSpec load_spec(const std::string& path);
Mat load_matrix(const std::string& path);
DerivationData load_derivation(const std::string& path);

// 64-bit FNV-1a of a byte string, rendered as 16 hex digits.
std::string fnv1a_digest(const std::string& bytes);

// Canonical dump: 2-space indent, sorted keys, trailing newline.
std::string dump_deterministic(const Json& j);

} // namespace pwlab
