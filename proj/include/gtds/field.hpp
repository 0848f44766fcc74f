#pragma once

#include <complex>
#include <compare>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace gtds {

/// Field element in canonical integer encoding: for F_p the residue itself,
/// for F_{p^m} the base-p number whose digits are the polynomial-basis
/// coefficients (lowest degree first).
struct Element {
  std::uint64_t value = 0;

  friend constexpr auto operator<=>(Element, Element) = default;
};

using Vec = std::vector<Element>;

/// Finite field F_q, q = p^m. Immutable and cheap to copy (shared state).
class Field {
 public:
  /// Prime field F_p. Requires p prime and p < 2^31.
  static Field prime(std::uint64_t p);

  /// Extension F_{p^m} in polynomial basis. `modulus` is monic of degree m,
  /// coefficients low-to-high (m + 1 entries), and must be irreducible.
  static Field extension(std::uint64_t p, std::vector<std::uint64_t> modulus);

  std::uint64_t characteristic() const noexcept;
  unsigned degree() const noexcept;
  std::uint64_t order() const noexcept;
  bool is_prime_field() const noexcept { return degree() == 1; }
  /// Empty for prime fields.
  const std::vector<std::uint64_t>& modulus() const noexcept;
  std::string describe() const;

  bool operator==(const Field& other) const noexcept;

  Element zero() const noexcept { return Element{0}; }
  Element one() const noexcept { return Element{1}; }
  /// Image of an integer under Z -> F_p -> F_q.
  Element from_int(std::int64_t k) const noexcept;
  /// Checked conversion of an encoded value; throws InvalidArgument if >= q.
  Element element(std::uint64_t encoded) const;
  Element from_coeffs(std::span<const std::uint64_t> coeffs) const;
  std::vector<std::uint64_t> coeffs(Element a) const;
  bool contains(Element a) const noexcept { return a.value < order(); }

  Element add(Element a, Element b) const noexcept;
  Element sub(Element a, Element b) const noexcept;
  Element neg(Element a) const noexcept;
  Element mul(Element a, Element b) const noexcept;
  /// Throws DivisionByZero for a = 0.
  Element inv(Element a) const;
  Element div(Element a, Element b) const;
  /// Square-and-multiply; 0^0 = 1.
  Element pow(Element a, std::uint64_t e) const noexcept;

  /// Absolute trace Tr: F_q -> F_p, returned as its residue in [0, p).
  std::uint64_t trace(Element a) const noexcept;
  /// chi_1(a) = exp(2*pi*i*Tr(a)/p).
  std::complex<double> character(Element a) const noexcept;
  /// Euler criterion; 0 counts as a residue. Needs p odd and m = 1.
  bool is_quadratic_residue(Element a) const;

 private:
  struct Impl;
  explicit Field(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

bool is_prime(std::uint64_t n) noexcept;

/// Element bound to its field; arithmetic between different fields throws
/// MixedFields.
class FieldElement {
 public:
  FieldElement(Field field, Element value);
  FieldElement(Field field, std::uint64_t encoded)
      : FieldElement(field, field.element(encoded)) {}

  const Field& field() const noexcept { return field_; }
  Element value() const noexcept { return value_; }

  FieldElement operator+(const FieldElement& rhs) const;
  FieldElement operator-(const FieldElement& rhs) const;
  FieldElement operator*(const FieldElement& rhs) const;
  FieldElement operator/(const FieldElement& rhs) const;
  FieldElement operator-() const;
  FieldElement inv() const;
  FieldElement pow(std::uint64_t e) const;
  FieldElement trace() const;
  std::complex<double> character() const;
  bool is_quadratic_residue() const;

  bool operator==(const FieldElement& rhs) const;

 private:
  void check_same(const FieldElement& rhs) const;

  Field field_;
  Element value_;
};

}  // namespace gtds
