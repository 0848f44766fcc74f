#include "gtds/gtds.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <optional>
#include <random>
#include <string>

#include "gtds/commands.hpp"
#include "gtds/error.hpp"
#include "gtds/json_io.hpp"

struct gtds_field {
  gtds::Field field;
};

struct gtds_system {
  gtds::Gtds F;
};

struct gtds_cipher {
  gtds::Cipher C;
};

struct gtds_keys {
  gtds::RoundKeys K;
};

struct gtds_report {
  std::string csv;
  std::string summary;
  std::uint64_t violations;
};

namespace {

thread_local std::string last_error;

template <class Body>
gtds_status guard(Body&& body) {
  try {
    body();
    last_error.clear();
    return GTDS_OK;
  } catch (const gtds::Error& e) {
    last_error = e.what();
    return static_cast<gtds_status>(e.code());
  } catch (const nlohmann::json::exception& e) {
    last_error = e.what();
    return GTDS_PARSE_ERROR;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return GTDS_INTERNAL_ERROR;
  } catch (const std::exception& e) {
    last_error = e.what();
    return GTDS_INTERNAL_ERROR;
  }
}

gtds_status null_arg(const char* what) {
  last_error = std::string(what) + " is NULL";
  return GTDS_NULL_ARGUMENT;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

gtds::Vec to_vec(const gtds::Field& field, const uint64_t* x, size_t n) {
  gtds::Vec v(n);
  for (size_t i = 0; i < n; ++i) v[i] = field.element(x[i]);
  return v;
}

void from_vec(const gtds::Vec& v, uint64_t* out) {
  for (size_t i = 0; i < v.size(); ++i) out[i] = v[i].value;
}

std::optional<gtds::Field> optional_field(const gtds_field* f) {
  return f ? std::optional<gtds::Field>(f->field) : std::nullopt;
}

gtds::commands::RunOptions run_options(const gtds_options* opts) {
  gtds::commands::RunOptions run;
  if (!opts) return run;
  if (opts->max_domain != 0) {
    if (opts->max_domain > gtds::kMaxDomain) gtds::fail(gtds::ErrorCode::InvalidArgument, "max_domain must be <= 2^20");
    run.max_domain = opts->max_domain;
  }
  if (opts->tolerance > 0) run.tolerance = opts->tolerance;
  run.seed = opts->seed;
  if (opts->samples != 0) run.samples = static_cast<std::size_t>(opts->samples);
  if (opts->field) run.field = gtds::io::parse_field_text(opts->field);
  return run;
}

gtds_report* make_report(gtds::commands::RunResult res) {
  return new gtds_report{std::move(res.csv), res.summary.dump(2), res.violations};
}

}  // namespace

extern "C" {

const char* gtds_last_error(void) { return last_error.c_str(); }

const char* gtds_status_name(gtds_status status) {
  switch (status) {
    case GTDS_OK:
      return "Ok";
    case GTDS_NULL_ARGUMENT:
      return "NullArgument";
    case GTDS_INTERNAL_ERROR:
      return "InternalError";
    default:
      if (status >= GTDS_INVALID_ARGUMENT && status <= GTDS_HYPOTHESIS_UNVERIFIED) {
        return gtds::error_code_name(static_cast<gtds::ErrorCode>(status));
      }
      return "Unknown";
  }
}

void gtds_string_free(char* s) { std::free(s); }

// ------------------------------------------------------------------ fields

gtds_status gtds_field_parse(const char* text, gtds_field** out) {
  if (!text) return null_arg("text");
  if (!out) return null_arg("out");
  return guard([&] { *out = new gtds_field{gtds::io::parse_field_text(text)}; });
}

void gtds_field_free(gtds_field* f) { delete f; }
uint64_t gtds_field_order(const gtds_field* f) { return f ? f->field.order() : 0; }
uint64_t gtds_field_characteristic(const gtds_field* f) { return f ? f->field.characteristic() : 0; }

gtds_status gtds_field_add(const gtds_field* f, uint64_t a, uint64_t b, uint64_t* out) {
  if (!f || !out) return null_arg("field or out");
  return guard([&] { *out = f->field.add(f->field.element(a), f->field.element(b)).value; });
}

gtds_status gtds_field_mul(const gtds_field* f, uint64_t a, uint64_t b, uint64_t* out) {
  if (!f || !out) return null_arg("field or out");
  return guard([&] { *out = f->field.mul(f->field.element(a), f->field.element(b)).value; });
}

gtds_status gtds_field_inv(const gtds_field* f, uint64_t a, uint64_t* out) {
  if (!f || !out) return null_arg("field or out");
  return guard([&] { *out = f->field.inv(f->field.element(a)).value; });
}

// -------------------------------------------------------------------- GTDS

gtds_status gtds_system_from_json(const char* spec, const gtds_field* field, gtds_system** out) {
  if (!spec) return null_arg("spec");
  if (!out) return null_arg("out");
  return guard([&] {
    *out = new gtds_system{gtds::io::parse_gtds(gtds::io::parse_text(spec), optional_field(field))};
  });
}

void gtds_system_free(gtds_system* s) { delete s; }
size_t gtds_system_width(const gtds_system* s) { return s ? s->F.width() : 0; }

gtds_status gtds_system_eval(const gtds_system* s, const uint64_t* x, size_t n, uint64_t* y) {
  if (!s || !x || !y) return null_arg("system, x or y");
  return guard([&] { from_vec(s->F.eval(to_vec(s->F.field(), x, n)), y); });
}

gtds_status gtds_system_invert(const gtds_system* s, const uint64_t* y, size_t n, int literal_power, uint64_t* x) {
  if (!s || !x || !y) return null_arg("system, x or y");
  const auto mode = literal_power ? gtds::InversionMode::LiteralPower : gtds::InversionMode::ExtendedGcd;
  return guard([&] { from_vec(s->F.invert(to_vec(s->F.field(), y, n), mode), x); });
}

// ----------------------------------------------------------------- ciphers

gtds_status gtds_cipher_from_json(const char* spec, const gtds_field* field, gtds_cipher** out) {
  if (!spec) return null_arg("spec");
  if (!out) return null_arg("out");
  return guard([&] {
    *out = new gtds_cipher{gtds::io::parse_cipher(gtds::io::parse_text(spec), optional_field(field))};
  });
}

void gtds_cipher_free(gtds_cipher* c) { delete c; }
size_t gtds_cipher_width(const gtds_cipher* c) { return c ? c->C.width() : 0; }
size_t gtds_cipher_rounds(const gtds_cipher* c) { return c ? c->C.rounds().size() : 0; }

gtds_status gtds_keys_from_json(const gtds_cipher* c, const char* keys, gtds_keys** out) {
  if (!c || !keys || !out) return null_arg("cipher, keys or out");
  return guard([&] { *out = new gtds_keys{gtds::io::parse_keys(c->C.field(), gtds::io::parse_text(keys))}; });
}

gtds_status gtds_keys_zero(const gtds_cipher* c, gtds_keys** out) {
  if (!c || !out) return null_arg("cipher or out");
  return guard([&] { *out = new gtds_keys{c->C.zero_keys()}; });
}

gtds_status gtds_keys_random(const gtds_cipher* c, uint64_t seed, gtds_keys** out) {
  if (!c || !out) return null_arg("cipher or out");
  return guard([&] {
    std::mt19937_64 rng(seed);
    *out = new gtds_keys{c->C.random_keys(rng)};
  });
}

void gtds_keys_free(gtds_keys* k) { delete k; }

gtds_status gtds_cipher_encrypt(const gtds_cipher* c, const gtds_keys* k, const uint64_t* x, size_t n, uint64_t* y) {
  if (!c || !k || !x || !y) return null_arg("cipher, keys, x or y");
  return guard([&] { from_vec(c->C.encrypt(k->K, to_vec(c->C.field(), x, n)), y); });
}

gtds_status gtds_cipher_decrypt(const gtds_cipher* c, const gtds_keys* k, const uint64_t* y, size_t n, uint64_t* x) {
  if (!c || !k || !x || !y) return null_arg("cipher, keys, x or y");
  return guard([&] { from_vec(c->C.decrypt(k->K, to_vec(c->C.field(), y, n)), x); });
}

// ------------------------------------------------------- spec operations

void gtds_options_init(gtds_options* opts) {
  if (!opts) return;
  opts->max_domain = gtds::kMaxFullSweep;
  opts->tolerance = gtds::kBoundSlack;
  opts->seed = 0;
  opts->samples = 10;
  opts->field = nullptr;
}

gtds_status gtds_validate(const char* spec, const gtds_options* opts, char** diagnostics) {
  if (!spec) return null_arg("spec");
  std::string message;
  const gtds_status st =
      guard([&] { message = gtds::commands::validate(gtds::io::parse_text(spec), run_options(opts)); });
  if (diagnostics) *diagnostics = dup_string(st == GTDS_OK ? message : last_error);
  return st;
}

gtds_status gtds_instantiate(const char* family, const char* params, const gtds_options* opts, char** cipher_json) {
  if (!family || !params || !cipher_json) return null_arg("family, params or cipher_json");
  return guard([&] {
    const auto run = run_options(opts);
    const gtds::Cipher C = gtds::io::instantiate(family, gtds::io::parse_text(params), run.field);
    *cipher_json = dup_string(gtds::io::cipher_to_json(C).dump(2));
  });
}

gtds_status gtds_analyze(const char* verb, const char* spec, const char* keys, const gtds_options* opts,
                         gtds_report** out) {
  if (!verb || !spec || !out) return null_arg("verb, spec or out");
  return guard([&] {
    namespace cmd = gtds::commands;
    const auto run = run_options(opts);
    const auto j = gtds::io::parse_text(spec);
    std::optional<nlohmann::json> k;
    if (keys) k = gtds::io::parse_text(keys);
    const nlohmann::json* kp = k ? &*k : nullptr;
    const std::string v = verb;
    if (v == "ddt") *out = make_report(cmd::ddt(j, kp, run));
    else if (v == "corr") *out = make_report(cmd::corr(j, kp, run));
    else if (v == "bounds") *out = make_report(cmd::bounds(j, run));
    else if (v == "weil") *out = make_report(cmd::weil(j, run));
    else if (v == "permcheck") *out = make_report(cmd::permcheck(j, kp, run));
    else gtds::fail(gtds::ErrorCode::InvalidArgument, "unknown analysis \"" + v + "\"");
  });
}

gtds_status gtds_trail_lp(const char* spec, const char* keys, const char* trail, const gtds_options* opts,
                          gtds_report** out) {
  if (!spec || !trail || !out) return null_arg("spec, trail or out");
  return guard([&] {
    const auto run = run_options(opts);
    std::optional<nlohmann::json> k;
    if (keys) k = gtds::io::parse_text(keys);
    *out = make_report(gtds::commands::trail_lp(gtds::io::parse_text(spec), k ? &*k : nullptr,
                                                gtds::io::parse_text(trail), run));
  });
}

void gtds_report_free(gtds_report* r) { delete r; }
const char* gtds_report_csv(const gtds_report* r) { return r ? r->csv.c_str() : ""; }
const char* gtds_report_summary(const gtds_report* r) { return r ? r->summary.c_str() : ""; }
uint64_t gtds_report_violations(const gtds_report* r) { return r ? r->violations : 0; }

}  // extern "C"
