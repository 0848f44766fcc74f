#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <set>
#include <span>
#include <vector>

#include "gtds/cipher.hpp"
#include "gtds/polynomial.hpp"
#include "gtds/system.hpp"

namespace gtds {

/// Expanding unbalanced Feistel: GTDS f_i = x_i + f(x_n), f_n = x_n, followed
/// by the branch rotation (x_1..x_n) -> (x_n, x_1..x_{n-1}) as mixing layer.
Round make_feistel_unbalanced(const UniPoly& f, std::size_t n);

/// S-box layer p_i = S on every branch, then `mix`.
Round make_spn(const UniPoly& S, std::size_t n, const AffineLayer& mix);

/// S-box on the 0-based branches in `active`, identity elsewhere.
Round make_partial_spn(const UniPoly& S, std::size_t n, const std::set<std::size_t>& active,
                       const AffineLayer& mix);

/// (x, y) -> (x + g(x - y), y + g(x - y)).
Vec lai_massey_2_direct(const UniPoly& g, std::span<const Element> xy);

/// Triangular decomposition F3 o F2 o F1 of the two-branch Lai-Massey with
/// F1 = (x - y, y), F2 = (x, y + g(x)), F3 = (x + y, y). F2 is triangular in
/// the opposite variable order, so it appears conjugated by the branch swap:
/// the returned pipeline is [F1, swap, F2', swap, F3].
std::vector<Stage> make_lai_massey_2(const UniPoly& g);

struct LaiMasseyParams {
  Field field;
  /// omega_1..omega_n with zero sum.
  Vec weights;
  /// Permutation polynomials p_1..p_n.
  std::vector<UniPoly> p;
  /// g(s, x_{m+1}, ..., x_n): nvars = 1 + n - m, variable 0 is the weighted
  /// sum slot.
  MultiPoly g;
};

class GeneralizedLaiMassey {
 public:
  explicit GeneralizedLaiMassey(LaiMasseyParams params);

  const LaiMasseyParams& params() const noexcept { return params_; }
  std::size_t width() const noexcept { return params_.weights.size(); }
  /// Largest 1-based index with omega_m != 0.
  std::size_t m() const noexcept { return m_; }

  /// f_i = p_i(x_i) + g(sum omega_j p_j(x_j), x_{m+1..n}) for i <= m,
  /// f_i = p_i(x_i) otherwise.
  Vec direct(std::span<const Element> x) const;

  /// Five stages F1..F5: GTDS, affine, GTDS, affine, GTDS.
  std::vector<Stage> pipeline;

 private:
  LaiMasseyParams params_;
  std::size_t m_ = 0;
};

GeneralizedLaiMassey make_generalized_lai_massey(LaiMasseyParams params);

/// Exhaustive comparison of `direct` against `stages`; counts mismatching
/// inputs. Requires q^n <= 2^16.
std::uint64_t count_pipeline_mismatches(const Field& field, std::size_t n,
                                        const std::function<Vec(std::span<const Element>)>& direct,
                                        std::span<const Stage> stages);

bool lai_massey_equivalence_check(const GeneralizedLaiMassey& glm);

/// f_i = x_i * g_i + h_i, f_n = x_n. g_i, h_i are in n variables.
Gtds make_horst(const Field& field, std::vector<MultiPoly> g_list, std::vector<MultiPoly> h_list);

/// Bricks on F_p^3:
/// (x1, x2, x3) -> (x1^d, x2 (x1^2 + a1 x1 + b1), x3 (x2^2 + a2 x2 + b2)).
/// Its multipliers depend on preceding branches, so the GTDS lives on the
/// reversed coordinates (x3, x2, x1).
struct BricksMap {
  Gtds core;
  std::vector<Stage> pipeline;

  Vec eval(std::span<const Element> x) const { return apply_pipeline(pipeline, x); }
  Vec invert(std::span<const Element> y) const { return invert_pipeline(pipeline, y); }
};

BricksMap make_bricks(const Field& field, std::uint64_t d, std::array<Element, 2> alphas,
                      std::array<Element, 2> betas);

struct ArionParams {
  std::uint64_t d1 = 0;
  std::uint64_t d2 = 0;
  std::uint64_t e = 0;
  /// g_1..g_{n-1} (roots forbidden) and h_1..h_{n-1}, univariate.
  std::vector<UniPoly> g_list;
  std::vector<UniPoly> h_list;
};

/// f_n = x_n^e, f_i = x_i^d1 g_i(s_i) + h_i(s_i) with the feed-forward
/// s_i = sum_{j > i} (x_j + f_j). The s_i are expanded symbolically so the
/// result is an ordinary GTDS.
Gtds make_arion_gtds(const Field& field, const ArionParams& params, std::size_t n);

/// Same map evaluated branch by branch from the bottom, without expansion.
Vec arion_direct(const Field& field, const ArionParams& params, std::span<const Element> x);

}  // namespace gtds
