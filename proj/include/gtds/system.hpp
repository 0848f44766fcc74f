#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gtds/domain.hpp"
#include "gtds/field.hpp"
#include "gtds/polynomial.hpp"

namespace gtds {

/// Branch i < n of a GTDS: f_i = p_i(x_i) * g_i(x_{i+1..n}) + h_i(x_{i+1..n}).
/// g and h are polynomials in all n variables but may only use those after i.
struct Branch {
  UniPoly p;
  MultiPoly g;
  MultiPoly h;
};

enum class InversionMode {
  ExtendedGcd,
  /// Divides by g_i through the power g_i^(q-2), exactly as the closed-form
  /// inverse system is written.
  LiteralPower,
};

/// Generalized triangular dynamical system over F_q^n. Branch order matters;
/// index 0 is x_1.
class Gtds {
 public:
  /// Validates every side condition: p_i permutation polynomials, g_i without
  /// zeros on F_q^n, g_i and h_i triangular. Errors name the 1-based branch.
  static Gtds build(const Field& field, std::vector<Branch> branches, UniPoly p_last);

  /// Skips validation. Only for negative controls: invert() and the analysis
  /// bounds are meaningless on an unvalidated system.
  static Gtds build_unchecked(const Field& field, std::vector<Branch> branches, UniPoly p_last);

  static Gtds identity(const Field& field, std::size_t n);

  const Field& field() const noexcept { return field_; }
  std::size_t width() const noexcept { return branches_.size() + 1; }
  bool validated() const noexcept { return validated_; }
  const std::vector<Branch>& branches() const noexcept { return branches_; }
  const UniPoly& p_last() const noexcept { return p_last_; }

  /// Univariate permutation of branch i (0-based, i = width()-1 is p_n).
  const UniPoly& p(std::size_t i) const;
  const UniPoly& p_inverse(std::size_t i) const;
  /// Degree of p_i and of its inverse, both reduced modulo x^q - x.
  std::int64_t degree(std::size_t i) const;
  std::int64_t inverse_degree(std::size_t i) const;

  Vec eval(std::span<const Element> x) const;
  Vec invert(std::span<const Element> y, InversionMode mode = InversionMode::ExtendedGcd) const;

 private:
  Gtds(Field field, std::vector<Branch> branches, UniPoly p_last)
      : field_(std::move(field)), branches_(std::move(branches)), p_last_(std::move(p_last)) {}

  void check_arity(std::span<const Element> x) const;

  Field field_;
  std::vector<Branch> branches_;
  UniPoly p_last_;
  std::vector<UniPoly> inverses_;
  std::vector<std::int64_t> degrees_;
  std::vector<std::int64_t> inverse_degrees_;
  bool validated_ = false;
};

Vec gtds_eval(const Gtds& F, std::span<const Element> x);
Vec gtds_invert(const Gtds& F, std::span<const Element> y,
                InversionMode mode = InversionMode::ExtendedGcd);

/// Exhaustive bijection test; requires q^n <= 2^20.
bool is_orthogonal_exhaustive(const Gtds& F);

}  // namespace gtds
