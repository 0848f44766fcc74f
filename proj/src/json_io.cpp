#include "gtds/json_io.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "gtds/error.hpp"
#include "gtds/instantiations.hpp"

namespace gtds::io {

namespace {

[[noreturn]] void parse_fail(const std::string& msg) { fail(ErrorCode::ParseError, msg); }

const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) parse_fail(std::string("missing key \"") + key + "\"");
  return j.at(key);
}

std::uint64_t get_uint(const json& j, const char* what) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(j.get<std::int64_t>());
  parse_fail(std::string(what) + " must be a nonnegative integer");
}

std::uint64_t get_uint_or(const json& j, const char* key, std::uint64_t fallback) {
  return j.contains(key) ? get_uint(j.at(key), key) : fallback;
}

const json& require_array(const json& j, const char* what) {
  if (!j.is_array()) parse_fail(std::string(what) + " must be an array");
  return j;
}

Field first_irreducible(std::uint64_t p, unsigned m) {
  // Candidates c_0 + ... + c_{m-1} x^{m-1} + x^m enumerated by the base-p
  // number (c_{m-1} ... c_0); c_0 = 0 is always reducible.
  std::uint64_t count = 1;
  for (unsigned i = 0; i < m; ++i) {
    if (count > (std::uint64_t{1} << 40) / p) fail(ErrorCode::DomainTooLarge, "field too large");
    count *= p;
  }
  for (std::uint64_t code = 1; code < count; ++code) {
    if (code % p == 0) continue;
    std::vector<std::uint64_t> modulus(m + 1);
    std::uint64_t rest = code;
    for (unsigned i = 0; i < m; ++i) {
      modulus[i] = rest % p;
      rest /= p;
    }
    modulus[m] = 1;
    try {
      return Field::extension(p, modulus);
    } catch (const Error&) {
    }
  }
  fail(ErrorCode::InvalidArgument, "no irreducible modulus found");
}

std::size_t spec_width(const json& j) {
  const std::uint64_t n = get_uint(require(j, "n"), "n");
  if (n == 0) parse_fail("n must be positive");
  return static_cast<std::size_t>(n);
}

Field spec_field(const json& j, const std::optional<Field>& fallback) {
  if (j.is_object() && j.contains("field")) return parse_field(j.at("field"));
  if (fallback) return *fallback;
  parse_fail("missing key \"field\"");
}

std::size_t rounds_of(const json& params) {
  const std::uint64_t r = get_uint_or(params, "rounds", 1);
  if (r == 0) parse_fail("rounds must be positive");
  return static_cast<std::size_t>(r);
}

AffineLayer mix_of(const Field& field, const json& params, std::size_t n) {
  if (params.contains("mix")) return parse_affine(field, params.at("mix"), n);
  return AffineLayer::identity(field, n);
}

Cipher repeat_round(const Field& field, const Round& R, std::size_t rounds) {
  return Cipher(field, R.width(), std::vector<Round>(rounds, R));
}

std::vector<UniPoly> parse_uni_list(const Field& field, const json& j, const char* what) {
  std::vector<UniPoly> out;
  for (const auto& item : require_array(j, what)) out.push_back(parse_uni(field, item));
  return out;
}

}  // namespace

json parse_text(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    parse_fail(std::string("malformed JSON: ") + e.what());
  }
}

// ------------------------------------------------------------------ fields

Field parse_field(const json& j) {
  if (j.is_number()) return Field::prime(get_uint(j, "field"));
  if (!j.is_object()) parse_fail("field must be an object or an integer");
  const std::uint64_t p = get_uint(require(j, "p"), "p");
  const std::uint64_t m = get_uint_or(j, "m", 1);
  if (m == 0) parse_fail("m must be positive");
  if (!j.contains("modulus")) {
    if (m == 1) return Field::prime(p);
    if (!is_prime(p)) fail(ErrorCode::InvalidArgument, "characteristic must be prime");
    return first_irreducible(p, static_cast<unsigned>(m));
  }
  std::vector<std::uint64_t> modulus;
  for (const auto& c : require_array(j.at("modulus"), "modulus")) modulus.push_back(get_uint(c, "modulus coefficient"));
  if (modulus.size() != m + 1) parse_fail("modulus must have m + 1 coefficients");
  if (m == 1) return Field::prime(p);
  return Field::extension(p, modulus);
}

json field_to_json(const Field& field) {
  json j = {{"p", field.characteristic()}, {"m", field.degree()}};
  if (!field.is_prime_field()) j["modulus"] = field.modulus();
  return j;
}

Field parse_field_text(std::string_view text) {
  const auto caret = text.find('^');
  auto number = [](std::string_view s) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::optional<std::uint64_t>{};
    return std::optional<std::uint64_t>{v};
  };
  if (caret == std::string_view::npos) {
    if (auto p = number(text)) return Field::prime(*p);
    return parse_field(parse_text(text));
  }
  const auto p = number(text.substr(0, caret));
  const auto m = number(text.substr(caret + 1));
  if (!p || !m) parse_fail("field must look like \"p\" or \"p^m\"");
  return parse_field(json{{"p", *p}, {"m", *m}});
}

// ------------------------------------------------------- elements, vectors

Element parse_element(const Field& field, const json& j) {
  if (j.is_number_unsigned()) return field.element(j.get<std::uint64_t>());
  if (j.is_number_integer()) {
    const auto v = j.get<std::int64_t>();
    return v >= 0 ? field.element(static_cast<std::uint64_t>(v)) : field.from_int(v);
  }
  parse_fail("field element must be an integer");
}

Vec parse_vector(const Field& field, const json& j, std::optional<std::size_t> width) {
  Vec v;
  for (const auto& item : require_array(j, "vector")) v.push_back(parse_element(field, item));
  if (width && v.size() != *width) {
    fail(ErrorCode::ArityMismatch,
         "vector of length " + std::to_string(v.size()) + ", expected " + std::to_string(*width));
  }
  return v;
}

json vector_to_json(std::span<const Element> v) {
  json j = json::array();
  for (auto e : v) j.push_back(e.value);
  return j;
}

// -------------------------------------------------------------- polynomials

UniPoly parse_uni(const Field& field, const json& j) {
  if (j.is_number()) return UniPoly::constant(field, parse_element(field, j));
  if (!j.is_object() || !j.contains("uni")) parse_fail("univariate polynomial must be {\"uni\": {...}}");
  const json& terms = j.at("uni");
  if (!terms.is_object()) parse_fail("\"uni\" must map exponents to coefficients");
  UniPoly f(field);
  for (const auto& [key, coeff] : terms.items()) {
    std::uint64_t e = 0;
    const auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), e);
    if (ec != std::errc() || ptr != key.data() + key.size()) parse_fail("bad exponent \"" + key + "\"");
    f = f + UniPoly::monomial(field, e, parse_element(field, coeff));
  }
  return f;
}

MultiPoly parse_multi(const Field& field, const json& j, std::size_t nvars, std::size_t uni_var) {
  if (j.is_number()) return MultiPoly::constant(field, nvars, parse_element(field, j));
  if (j.is_object() && j.contains("uni")) {
    if (uni_var >= nvars) parse_fail("univariate polynomial has no variable to live in");
    return MultiPoly::from_uni(parse_uni(field, j), nvars, uni_var);
  }
  if (!j.is_object() || !j.contains("multi")) parse_fail("polynomial must be {\"uni\": ...} or {\"multi\": [...]}");
  MultiPoly f(field, nvars);
  for (const auto& term : require_array(j.at("multi"), "\"multi\"")) {
    MultiPoly::Exponents exps;
    for (const auto& e : require_array(require(term, "exps"), "exps")) exps.push_back(get_uint(e, "exponent"));
    if (exps.size() != nvars) {
      parse_fail("term has " + std::to_string(exps.size()) + " exponents, expected " + std::to_string(nvars));
    }
    f.add_term(exps, parse_element(field, require(term, "coeff")));
  }
  return f;
}

json uni_to_json(const UniPoly& f) {
  json terms = json::object();
  for (const auto& [e, c] : f.terms()) terms[std::to_string(e)] = c.value;
  return {{"uni", terms}};
}

json multi_to_json(const MultiPoly& f) {
  json terms = json::array();
  for (const auto& [exps, c] : f.terms()) terms.push_back({{"exps", exps}, {"coeff", c.value}});
  return {{"multi", terms}};
}

// --------------------------------------------------------------------- GTDS

Gtds parse_gtds(const json& j, const std::optional<Field>& fallback, bool validate) {
  const Field field = spec_field(j, fallback);
  const std::size_t n = spec_width(j);
  const json& list = require_array(require(j, "branches"), "branches");
  if (list.size() + 1 != n) {
    parse_fail("a GTDS of width " + std::to_string(n) + " needs " + std::to_string(n - 1) + " branches");
  }
  std::vector<Branch> branches;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const json& b = list[i];
    branches.push_back(Branch{
        parse_uni(field, require(b, "p")),
        b.contains("g") ? parse_multi(field, b.at("g"), n, i + 1) : MultiPoly::constant(field, n, field.one()),
        b.contains("h") ? parse_multi(field, b.at("h"), n, i + 1) : MultiPoly(field, n),
    });
  }
  UniPoly p_last = parse_uni(field, require(j, "p_last"));
  return validate ? Gtds::build(field, std::move(branches), std::move(p_last))
                  : Gtds::build_unchecked(field, std::move(branches), std::move(p_last));
}

json gtds_to_json(const Gtds& F, bool with_field) {
  json branches = json::array();
  for (const auto& b : F.branches()) {
    branches.push_back({{"p", uni_to_json(b.p)}, {"g", multi_to_json(b.g)}, {"h", multi_to_json(b.h)}});
  }
  json j = {{"n", F.width()}, {"branches", branches}, {"p_last", uni_to_json(F.p_last())}};
  if (with_field) j["field"] = field_to_json(F.field());
  return j;
}

// ------------------------------------------------------------------ ciphers

AffineLayer parse_affine(const Field& field, const json& j, std::size_t n) {
  Matrix A;
  for (const auto& row : require_array(require(j, "A"), "A")) A.push_back(parse_vector(field, row, n));
  if (A.size() != n) fail(ErrorCode::ArityMismatch, "matrix must be " + std::to_string(n) + " x " + std::to_string(n));
  Vec b = j.contains("b") ? parse_vector(field, j.at("b"), n) : Vec(n, field.zero());
  return AffineLayer(field, std::move(A), std::move(b));
}

json affine_to_json(const AffineLayer& L) {
  json A = json::array();
  for (const auto& row : L.matrix()) A.push_back(vector_to_json(row));
  return {{"A", A}, {"b", vector_to_json(L.offset())}};
}

Stage parse_stage(const Field& field, const json& j, std::size_t n) {
  const json& type = require(j, "type");
  if (type == "affine") return parse_affine(field, j, n);
  if (type == "gtds") {
    json spec = j;
    if (!spec.contains("n")) spec["n"] = n;
    Gtds F = parse_gtds(spec, field);
    if (F.width() != n) fail(ErrorCode::ArityMismatch, "stage width differs from the cipher width");
    if (!(F.field() == field)) fail(ErrorCode::MixedFields, "stage over a different field");
    return F;
  }
  parse_fail("stage type must be \"gtds\" or \"affine\"");
}

json stage_to_json(const Stage& s) {
  if (const auto* g = std::get_if<Gtds>(&s)) {
    json j = gtds_to_json(*g, false);
    j["type"] = "gtds";
    return j;
  }
  json j = affine_to_json(std::get<AffineLayer>(s));
  j["type"] = "affine";
  return j;
}

Cipher parse_cipher(const json& j, const std::optional<Field>& fallback) {
  const Field field = spec_field(j, fallback);
  const std::size_t n = spec_width(j);
  std::vector<Round> rounds;
  for (const auto& r : require_array(require(j, "rounds"), "rounds")) {
    std::vector<Stage> core;
    for (const auto& s : require_array(require(r, "core"), "core")) core.push_back(parse_stage(field, s, n));
    AffineLayer mix = r.contains("mix") ? parse_affine(field, r.at("mix"), n) : AffineLayer::identity(field, n);
    rounds.emplace_back(std::move(core), std::move(mix));
  }
  return Cipher(field, n, std::move(rounds));
}

json cipher_to_json(const Cipher& C) {
  json rounds = json::array();
  for (const auto& R : C.rounds()) {
    json core = json::array();
    for (const auto& s : R.core) core.push_back(stage_to_json(s));
    rounds.push_back({{"core", core}, {"mix", affine_to_json(R.mix)}});
  }
  return {{"field", field_to_json(C.field())}, {"n", C.width()}, {"rounds", rounds}};
}

RoundKeys parse_keys(const Field& field, const json& j) {
  RoundKeys K;
  for (const auto& col : require_array(require(j, "K"), "K")) K.columns.push_back(parse_vector(field, col));
  return K;
}

json keys_to_json(const RoundKeys& K) {
  json cols = json::array();
  for (const auto& c : K.columns) cols.push_back(vector_to_json(c));
  return {{"K", cols}};
}

LinearTrail parse_trail(const Field& field, const json& j) {
  LinearTrail t;
  for (const auto& m : require_array(require(j, "masks"), "masks")) t.masks.push_back(parse_vector(field, m));
  return t;
}

bool is_cipher_spec(const json& j) { return j.is_object() && j.contains("rounds") && j["rounds"].is_array(); }
bool is_gtds_spec(const json& j) { return j.is_object() && j.contains("branches"); }

// ------------------------------------------------------------ instantiation

const std::vector<std::string>& families() {
  static const std::vector<std::string> names{"feistel", "spn", "pspn", "laimassey",
                                              "glm",     "horst", "bricks", "arion"};
  return names;
}

Cipher instantiate(std::string_view family, const json& params, const std::optional<Field>& fallback) {
  if (!params.is_object()) parse_fail("parameters must be a JSON object");
  const Field field = spec_field(params, fallback);
  const std::size_t rounds = rounds_of(params);

  if (family == "feistel") {
    const std::size_t n = spec_width(params);
    return repeat_round(field, make_feistel_unbalanced(parse_uni(field, require(params, "f")), n), rounds);
  }
  if (family == "spn" || family == "pspn") {
    const std::size_t n = spec_width(params);
    const UniPoly S = parse_uni(field, require(params, "sbox"));
    const AffineLayer mix = mix_of(field, params, n);
    if (family == "spn") return repeat_round(field, make_spn(S, n, mix), rounds);
    std::set<std::size_t> active;
    for (const auto& a : require_array(require(params, "active"), "active")) {
      const std::uint64_t idx = get_uint(a, "active branch");
      if (idx == 0 || idx > n) fail(ErrorCode::ArityMismatch, "active branches are numbered 1..n");
      active.insert(static_cast<std::size_t>(idx - 1));
    }
    return repeat_round(field, make_partial_spn(S, n, active, mix), rounds);
  }
  if (family == "laimassey") {
    const UniPoly g = parse_uni(field, require(params, "g"));
    return repeat_round(field, Round(make_lai_massey_2(g), mix_of(field, params, 2)), rounds);
  }
  if (family == "glm") {
    const Vec weights = parse_vector(field, require(params, "weights"));
    const std::size_t n = weights.size();
    std::size_t m = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (weights[i].value != 0) m = i + 1;
    const std::size_t g_vars = 1 + n - std::min(m, n);
    LaiMasseyParams lm{field, weights, parse_uni_list(field, require(params, "p"), "p"),
                       parse_multi(field, require(params, "g"), g_vars, 0)};
    GeneralizedLaiMassey glm = make_generalized_lai_massey(std::move(lm));
    return repeat_round(field, Round(glm.pipeline, mix_of(field, params, n)), rounds);
  }
  if (family == "horst") {
    const json& gs = require_array(require(params, "g"), "g");
    const json& hs = require_array(require(params, "h"), "h");
    if (gs.size() != hs.size()) fail(ErrorCode::ArityMismatch, "need as many h_i as g_i");
    const std::size_t n = gs.size() + 1;
    std::vector<MultiPoly> g_list, h_list;
    for (std::size_t i = 0; i < gs.size(); ++i) {
      g_list.push_back(parse_multi(field, gs[i], n, i + 1));
      h_list.push_back(parse_multi(field, hs[i], n, i + 1));
    }
    Gtds F = make_horst(field, std::move(g_list), std::move(h_list));
    return repeat_round(field, Round({F}, mix_of(field, params, n)), rounds);
  }
  if (family == "bricks") {
    const Vec alphas = parse_vector(field, require(params, "alphas"), 2);
    const Vec betas = parse_vector(field, require(params, "betas"), 2);
    BricksMap B = make_bricks(field, get_uint(require(params, "d"), "d"), {alphas[0], alphas[1]},
                              {betas[0], betas[1]});
    return repeat_round(field, Round(B.pipeline, mix_of(field, params, 3)), rounds);
  }
  if (family == "arion") {
    const std::size_t n = spec_width(params);
    ArionParams ap{get_uint(require(params, "d1"), "d1"), get_uint(require(params, "d2"), "d2"),
                   get_uint(require(params, "e"), "e"), parse_uni_list(field, require(params, "g"), "g"),
                   parse_uni_list(field, require(params, "h"), "h")};
    Gtds F = make_arion_gtds(field, ap, n);
    return repeat_round(field, Round({F}, mix_of(field, params, n)), rounds);
  }
  fail(ErrorCode::InvalidArgument, "unknown family \"" + std::string(family) + "\"");
}

}  // namespace gtds::io
