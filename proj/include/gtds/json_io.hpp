#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gtds/analysis.hpp"
#include "gtds/cipher.hpp"
#include "gtds/field.hpp"
#include "gtds/polynomial.hpp"
#include "gtds/system.hpp"

namespace gtds::io {

using json = nlohmann::json;

/// Parses text, mapping syntax errors to ParseError.
json parse_text(std::string_view text);

/// {"p": 5, "m": 2, "modulus": [2, 0, 1]}; "m" defaults to 1. Without a
/// modulus the first irreducible monic polynomial in lexicographic order is
/// used. A bare integer is read as a prime field.
Field parse_field(const json& j);
json field_to_json(const Field& field);

/// Shorthand used by --field: "7", "5^2" or a JSON object.
Field parse_field_text(std::string_view text);

/// Nonnegative integers are encoded elements (< q); negative integers are
/// reduced into the prime subfield.
Element parse_element(const Field& field, const json& j);
Vec parse_vector(const Field& field, const json& j, std::optional<std::size_t> width = std::nullopt);
json vector_to_json(std::span<const Element> v);

/// {"uni": {"3": 2, "0": 1}} or a bare integer constant.
UniPoly parse_uni(const Field& field, const json& j);
/// {"multi": [{"exps": [...], "coeff": c}, ...]} with nvars exponents per term;
/// a "uni" polynomial is placed in variable `uni_var`; a bare integer is a
/// constant.
MultiPoly parse_multi(const Field& field, const json& j, std::size_t nvars, std::size_t uni_var);
json uni_to_json(const UniPoly& f);
json multi_to_json(const MultiPoly& f);

/// {"field", "n", "branches": [{"p", "g", "h"}, ...], "p_last"}. Branch
/// numbering in the file is x_1 first; a univariate g or h of branch i is read
/// as a polynomial in x_{i+1}. g defaults to 1, h to 0. `field` overrides the
/// spec's own field when the spec has none.
Gtds parse_gtds(const json& j, const std::optional<Field>& field = std::nullopt, bool validate = true);
json gtds_to_json(const Gtds& F, bool with_field = true);

AffineLayer parse_affine(const Field& field, const json& j, std::size_t n);
json affine_to_json(const AffineLayer& L);

/// {"type": "gtds", ...} or {"type": "affine", "A", "b"}.
Stage parse_stage(const Field& field, const json& j, std::size_t n);
json stage_to_json(const Stage& s);

/// {"field", "n", "rounds": [{"core": [stage...], "mix": {"A", "b"}}, ...]}.
Cipher parse_cipher(const json& j, const std::optional<Field>& field = std::nullopt);
json cipher_to_json(const Cipher& C);

/// {"K": [[k_0], [k_1], ...]}.
RoundKeys parse_keys(const Field& field, const json& j);
json keys_to_json(const RoundKeys& K);

/// {"masks": [[omega_0], ..., [omega_r]]}.
LinearTrail parse_trail(const Field& field, const json& j);

bool is_cipher_spec(const json& j);
bool is_gtds_spec(const json& j);

/// Builds a cipher for one design family from its parameter file. Every family
/// accepts "field", "rounds" (default 1) and, except Feistel, "mix" (default
/// identity).
Cipher instantiate(std::string_view family, const json& params, const std::optional<Field>& field = std::nullopt);

/// Families accepted by instantiate().
const std::vector<std::string>& families();

}  // namespace gtds::io
