#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "gtds/field.hpp"

namespace gtds {

/// Sparse univariate polynomial over F_q: exponent -> nonzero coefficient.
class UniPoly {
 public:
  using Terms = std::map<std::uint64_t, Element>;

  explicit UniPoly(Field field) : field_(std::move(field)) {}
  UniPoly(Field field, const Terms& terms);

  static UniPoly constant(const Field& field, Element c);
  static UniPoly monomial(const Field& field, std::uint64_t exponent, Element coeff);
  /// The polynomial x.
  static UniPoly identity(const Field& field) { return monomial(field, 1, field.one()); }

  const Field& field() const noexcept { return field_; }
  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  /// -1 for the zero polynomial.
  std::int64_t degree() const noexcept;
  Element coeff(std::uint64_t exponent) const;
  Element leading_coeff() const;

  Element operator()(Element x) const;

  UniPoly operator+(const UniPoly& rhs) const;
  UniPoly operator-(const UniPoly& rhs) const;
  UniPoly operator*(const UniPoly& rhs) const;
  UniPoly scaled(Element c) const;

  bool operator==(const UniPoly& rhs) const;

 private:
  void add_term(std::uint64_t exponent, Element c);

  Field field_;
  Terms terms_;
};

/// Sparse multivariate polynomial in `nvars` variables x_1..x_n (stored
/// zero-based): exponent vector -> nonzero coefficient.
class MultiPoly {
 public:
  using Exponents = std::vector<std::uint64_t>;
  using Terms = std::map<Exponents, Element>;

  MultiPoly(Field field, std::size_t nvars) : field_(std::move(field)), nvars_(nvars) {}

  static MultiPoly constant(const Field& field, std::size_t nvars, Element c);
  /// The variable with zero-based index `var`.
  static MultiPoly variable(const Field& field, std::size_t nvars, std::size_t var);
  /// Embeds a univariate polynomial as a polynomial in variable `var`.
  static MultiPoly from_uni(const UniPoly& f, std::size_t nvars, std::size_t var);

  const Field& field() const noexcept { return field_; }
  std::size_t nvars() const noexcept { return nvars_; }
  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_constant() const noexcept;
  std::int64_t total_degree() const noexcept;
  /// Zero-based indices of variables that occur with positive exponent.
  std::vector<std::size_t> used_variables() const;

  void add_term(const Exponents& exps, Element c);

  Element operator()(std::span<const Element> x) const;

  MultiPoly operator+(const MultiPoly& rhs) const;
  MultiPoly operator-(const MultiPoly& rhs) const;
  /// Product, reduced modulo (x_i^q - x_i).
  MultiPoly operator*(const MultiPoly& rhs) const;
  MultiPoly scaled(Element c) const;

  /// Reinterprets the variables: variable k of this polynomial becomes
  /// variable `mapping[k]` of a polynomial in `nvars` variables.
  MultiPoly remapped(std::size_t nvars, std::span<const std::size_t> mapping) const;

  /// If only one variable occurs, returns (index, univariate form).
  std::optional<std::pair<std::size_t, UniPoly>> as_univariate() const;

  bool operator==(const MultiPoly& rhs) const;

 private:
  Field field_;
  std::size_t nvars_;
  Terms terms_;
};

Element eval_uni(const UniPoly& f, Element x);
/// Throws ArityMismatch when x.size() != f.nvars().
Element eval_multi(const MultiPoly& f, std::span<const Element> x);

/// Canonical representative modulo x^q - x: exponent e > 0 becomes
/// ((e - 1) mod (q - 1)) + 1.
std::uint64_t reduce_exponent(std::uint64_t e, std::uint64_t q) noexcept;
UniPoly reduce_mod(const UniPoly& f);
MultiPoly reduce_mod(const MultiPoly& f);

/// g(s) with s multivariate, reduced modulo (x_i^q - x_i).
MultiPoly compose(const UniPoly& g, const MultiPoly& s);

bool is_permutation_polynomial(const UniPoly& f);

enum class PermCertKind { MonomialGcd, Affine, Exhaustive };

struct PermPolyCert {
  PermCertKind kind;
  UniPoly inverse;
  std::int64_t deg_f;
  std::int64_t deg_finv;
};

/// Builds the certificate (including the inverse) or throws NotAPermutation.
PermPolyCert certify_permutation(const UniPoly& f);
UniPoly invert_permutation_polynomial(const UniPoly& f);

/// Unique polynomial of degree < points.size() through all points.
UniPoly interpolate(const Field& field, std::span<const std::pair<Element, Element>> points);

enum class ZeroCheckMethod { Constant, QuadraticDiscriminant, Exhaustive };

struct ZeroCheck {
  bool zero_free;
  ZeroCheckMethod method;
  /// A zero of g, when one was found by scanning.
  std::optional<Vec> witness;
};

/// Decides whether g vanishes somewhere on F_q^nvars. Only the variables
/// occurring in g are scanned; throws DomainTooLarge above 2^20 points.
ZeroCheck has_no_zeros(const MultiPoly& g);

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) noexcept;
/// Inverse of d modulo n, if gcd(d, n) = 1.
std::optional<std::uint64_t> inverse_mod(std::uint64_t d, std::uint64_t n) noexcept;

}  // namespace gtds
