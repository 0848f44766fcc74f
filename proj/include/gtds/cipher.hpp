#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <variant>
#include <vector>

#include "gtds/field.hpp"
#include "gtds/system.hpp"

namespace gtds {

/// Row-major square matrix over F_q.
using Matrix = std::vector<Vec>;

/// x -> A x + b with A invertible.
class AffineLayer {
 public:
  /// Throws SingularMatrix if A is not invertible, ArityMismatch on shape errors.
  AffineLayer(const Field& field, Matrix A, Vec b);

  static AffineLayer identity(const Field& field, std::size_t n);
  /// Coordinate permutation y_i = x_{source[i]}.
  static AffineLayer permutation(const Field& field, std::span<const std::size_t> source);

  const Field& field() const noexcept { return field_; }
  std::size_t width() const noexcept { return A_.size(); }
  const Matrix& matrix() const noexcept { return A_; }
  const Vec& offset() const noexcept { return b_; }

  Vec apply(std::span<const Element> x) const;
  Vec invert(std::span<const Element> y) const;
  /// A^T a.
  Vec transpose_apply(std::span<const Element> a) const;

 private:
  Field field_;
  Matrix A_;
  Matrix A_inv_;
  Vec b_;
};

/// Inverse of a square matrix by Gauss-Jordan elimination; nullopt if singular.
std::optional<Matrix> invert_matrix(const Field& field, const Matrix& A);

Vec affine_apply(const AffineLayer& L, std::span<const Element> x);
Vec affine_invert(const AffineLayer& L, std::span<const Element> y);
Vec key_add(const Field& field, std::span<const Element> x, std::span<const Element> k);

using Stage = std::variant<Gtds, AffineLayer>;

std::size_t stage_width(const Stage& stage);
Vec apply_stage(const Stage& stage, std::span<const Element> x);
Vec invert_stage(const Stage& stage, std::span<const Element> y);

/// Applies stages first to last.
Vec apply_pipeline(std::span<const Stage> stages, std::span<const Element> x);
Vec invert_pipeline(std::span<const Stage> stages, std::span<const Element> y);

/// R_k = K_k o L o F, where F is the (nonempty) core pipeline and L the mix.
struct Round {
  std::vector<Stage> core;
  AffineLayer mix;

  Round(std::vector<Stage> core_stages, AffineLayer mix_layer);

  const Field& field() const noexcept { return mix.field(); }
  std::size_t width() const noexcept { return mix.width(); }
};

Vec round_apply(const Round& R, std::span<const Element> k, std::span<const Element> x);
Vec round_invert(const Round& R, std::span<const Element> k, std::span<const Element> y);

/// Round-key matrix K in F_q^{n x (r+1)}, stored as its columns k_0..k_r.
struct RoundKeys {
  std::vector<Vec> columns;

  std::size_t rounds() const noexcept { return columns.empty() ? 0 : columns.size() - 1; }
};

/// C_r(x, K) = R^(r)_{k_r} o ... o R^(1)_{k_1} o K_{k_0}(x).
class Cipher {
 public:
  Cipher(const Field& field, std::size_t width, std::vector<Round> rounds);

  const Field& field() const noexcept { return field_; }
  std::size_t width() const noexcept { return width_; }
  const std::vector<Round>& rounds() const noexcept { return rounds_; }

  /// Throws KeyShapeMismatch unless K has r+1 columns of width n.
  void check_keys(const RoundKeys& K) const;
  Vec encrypt(const RoundKeys& K, std::span<const Element> x) const;
  Vec decrypt(const RoundKeys& K, std::span<const Element> y) const;

  RoundKeys zero_keys() const;
  RoundKeys random_keys(std::mt19937_64& rng) const;

 private:
  Field field_;
  std::size_t width_;
  std::vector<Round> rounds_;
};

Vec cipher_encrypt(const Cipher& C, const RoundKeys& K, std::span<const Element> x);
Vec cipher_decrypt(const Cipher& C, const RoundKeys& K, std::span<const Element> y);

struct KeyedOrthogonalityReport {
  std::size_t keys_tested = 0;
  /// Indices (in sampling order) of key matrices for which encryption was not
  /// a bijection.
  std::vector<std::size_t> failures;

  bool ok() const noexcept { return failures.empty(); }
};

/// Samples key matrices and checks that encryption under each is a
/// bijection of F_q^n. Requires q^n <= 2^16.
KeyedOrthogonalityReport keyed_orthogonality_check(const Cipher& C, std::size_t sample_keys,
                                                   std::uint64_t seed);

}  // namespace gtds
