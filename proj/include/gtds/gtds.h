#ifndef GTDS_GTDS_H
#define GTDS_GTDS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(GTDS_BUILDING_LIBRARY)
#define GTDS_API __declspec(dllexport)
#else
#define GTDS_API __declspec(dllimport)
#endif
#else
#define GTDS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. Values 1..19 mirror the library's error kinds. */
typedef enum gtds_status {
  GTDS_OK = 0,
  GTDS_INVALID_ARGUMENT = 1,
  GTDS_PARSE_ERROR = 2,
  GTDS_MIXED_FIELDS = 3,
  GTDS_DIVISION_BY_ZERO = 4,
  GTDS_ODD_PRIME_REQUIRED = 5,
  GTDS_ARITY_MISMATCH = 6,
  GTDS_NOT_A_PERMUTATION = 7,
  GTDS_DUPLICATE_ABSCISSA = 8,
  GTDS_DOMAIN_TOO_LARGE = 9,
  GTDS_GI_HAS_ZERO = 10,
  GTDS_VARIABLE_OUT_OF_SCOPE = 11,
  GTDS_SINGULAR_MATRIX = 12,
  GTDS_KEY_SHAPE_MISMATCH = 13,
  GTDS_WEIGHT_SUM_NONZERO = 14,
  GTDS_BAD_M = 15,
  GTDS_BAD_EXPONENT = 16,
  GTDS_DISCRIMINANT_RESIDUE = 17,
  GTDS_DEGREE_TOO_LOW = 18,
  GTDS_HYPOTHESIS_UNVERIFIED = 19,
  GTDS_NULL_ARGUMENT = 100,
  GTDS_INTERNAL_ERROR = 101
} gtds_status;

typedef struct gtds_field gtds_field;
typedef struct gtds_system gtds_system;
typedef struct gtds_cipher gtds_cipher;
typedef struct gtds_keys gtds_keys;
typedef struct gtds_report gtds_report;

/* Message of the last failed call on this thread ("" if none). */
GTDS_API const char* gtds_last_error(void);
GTDS_API const char* gtds_status_name(gtds_status status);
/* Frees strings returned through char** out-parameters. */
GTDS_API void gtds_string_free(char* s);

/* ---- fields. Elements are uint64 values in canonical encoding. */
/* JSON object, bare "p", or "p^m". */
GTDS_API gtds_status gtds_field_parse(const char* text, gtds_field** out);
GTDS_API void gtds_field_free(gtds_field* f);
GTDS_API uint64_t gtds_field_order(const gtds_field* f);
GTDS_API uint64_t gtds_field_characteristic(const gtds_field* f);
GTDS_API gtds_status gtds_field_add(const gtds_field* f, uint64_t a, uint64_t b, uint64_t* out);
GTDS_API gtds_status gtds_field_mul(const gtds_field* f, uint64_t a, uint64_t b, uint64_t* out);
GTDS_API gtds_status gtds_field_inv(const gtds_field* f, uint64_t a, uint64_t* out);

/* ---- GTDS. `field` may be NULL when the spec has its own "field". */
GTDS_API gtds_status gtds_system_from_json(const char* spec, const gtds_field* field, gtds_system** out);
GTDS_API void gtds_system_free(gtds_system* s);
GTDS_API size_t gtds_system_width(const gtds_system* s);
GTDS_API gtds_status gtds_system_eval(const gtds_system* s, const uint64_t* x, size_t n, uint64_t* y);
/* literal_power != 0 divides by g_i through g_i^(q-2). */
GTDS_API gtds_status gtds_system_invert(const gtds_system* s, const uint64_t* y, size_t n, int literal_power,
                                        uint64_t* x);

/* ---- ciphers and round keys. */
GTDS_API gtds_status gtds_cipher_from_json(const char* spec, const gtds_field* field, gtds_cipher** out);
GTDS_API void gtds_cipher_free(gtds_cipher* c);
GTDS_API size_t gtds_cipher_width(const gtds_cipher* c);
GTDS_API size_t gtds_cipher_rounds(const gtds_cipher* c);
/* JSON {"K": [[k_0], ..., [k_r]]}; shape is checked on use. */
GTDS_API gtds_status gtds_keys_from_json(const gtds_cipher* c, const char* keys, gtds_keys** out);
GTDS_API gtds_status gtds_keys_zero(const gtds_cipher* c, gtds_keys** out);
GTDS_API gtds_status gtds_keys_random(const gtds_cipher* c, uint64_t seed, gtds_keys** out);
GTDS_API void gtds_keys_free(gtds_keys* k);
GTDS_API gtds_status gtds_cipher_encrypt(const gtds_cipher* c, const gtds_keys* k, const uint64_t* x, size_t n,
                                         uint64_t* y);
GTDS_API gtds_status gtds_cipher_decrypt(const gtds_cipher* c, const gtds_keys* k, const uint64_t* y, size_t n,
                                         uint64_t* x);

/* ---- whole-spec operations on JSON text. */
typedef struct gtds_options {
  uint64_t max_domain; /* 0: default 2^10 */
  double tolerance;    /* <= 0: default 1e-6 */
  uint64_t seed;
  uint64_t samples;     /* 0: default 10 */
  const char* field;    /* NULL, or field text used when a spec has none */
} gtds_options;

GTDS_API void gtds_options_init(gtds_options* opts);

/* Validates a GTDS or cipher spec. *diagnostics gets a description or the
   error message; free it with gtds_string_free. */
GTDS_API gtds_status gtds_validate(const char* spec, const gtds_options* opts, char** diagnostics);

/* Cipher spec JSON for a family: feistel, spn, pspn, laimassey, glm, horst,
   bricks, arion. */
GTDS_API gtds_status gtds_instantiate(const char* family, const char* params, const gtds_options* opts,
                                      char** cipher_json);

/* verb: "ddt", "corr", "bounds", "weil", "permcheck". keys may be NULL. */
GTDS_API gtds_status gtds_analyze(const char* verb, const char* spec, const char* keys, const gtds_options* opts,
                                  gtds_report** out);
GTDS_API gtds_status gtds_trail_lp(const char* spec, const char* keys, const char* trail, const gtds_options* opts,
                                   gtds_report** out);
GTDS_API void gtds_report_free(gtds_report* r);
GTDS_API const char* gtds_report_csv(const gtds_report* r);
GTDS_API const char* gtds_report_summary(const gtds_report* r);
GTDS_API uint64_t gtds_report_violations(const gtds_report* r);

#ifdef __cplusplus
}
#endif

#endif
