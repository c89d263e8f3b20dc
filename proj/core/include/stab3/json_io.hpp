#pragma once

// JSON (de)serialization for the public types, kept in one place so the file
// formats stay consistent across the command-line tools.

#include "stab3/groups.hpp"
#include "stab3/mirror.hpp"
#include "stab3/normal_form.hpp"
#include "stab3/trilinear.hpp"

#include "json.hpp"

namespace stab3 {

/// {"terms":[{"gens":["z1","z2","zbar3"],"re":0.5,"im":0.0}, ...]} with
/// generator names z1..z3, zbar1..zbar3; only nonzero terms are emitted, with
/// generators ascending in storage order.
nlohmann::json three_form_to_json(const ThreeForm& form);

/// Inverse of three_form_to_json; accepts generators in any order (the sign
/// convention of the wedge applies) and accumulates repeated terms.
/// Throws std::invalid_argument on unknown generator names or malformed terms.
ThreeForm three_form_from_json(const nlohmann::json& value);

/// [{"kind":"N","A":[["1/2","0","0"],...]},{"kind":"J"},...]; rational
/// parameters serialize as "p/q" strings, real ones as numbers.
nlohmann::json word_to_json(const GeneratorWord& word);

/// Inverse of word_to_json.  A parameter matrix must be all strings (rational)
/// or all numbers (real); anything else throws std::invalid_argument.
GeneratorWord word_from_json(const nlohmann::json& value);

/// {"sp":[[...]x6], "gl2":[[...]x2]} with plain numeric row arrays.
nlohmann::json group_element_to_json(const GroupElement& element);

/// {"gammas":[g1,g2,g3], "group":{...}, "residuals":{"gradient_norm":...,
///  "off_type_norm":..., "reconstruction_error":...}}.
nlohmann::json normal_form_result_to_json(const NormalFormResult& result);

/// {"ambient":"E3"|"E2", "coords":[{"re":"p/q","im":"p/q"}, ...]} with exact
/// rational strings, one entry per basis coordinate.
nlohmann::json lattice_vec_to_json(const LatticeVec& v);

/// Inverse of lattice_vec_to_json.  Throws std::invalid_argument on a
/// malformed object or a coordinate count not matching the ambient.
LatticeVec lattice_vec_from_json(const nlohmann::json& value);

/// {"rows":[{"charge":{...}, "form":{...}}, ...]} pairing each exact charge
/// vector with its primitive 3-form.
nlohmann::json mirror_table_to_json(const MirrorTable& table);

/// {"mukai_dual":[{"re":"p/q","im":"p/q"}, ...]}: the 14 exact values of the
/// charge functional against the basis sheaf classes.
nlohmann::json charge_functional_to_json(const LatticeVec& w);

} // namespace stab3
