#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "gtds/cipher.hpp"
#include "gtds/domain.hpp"
#include "gtds/field.hpp"
#include "gtds/polynomial.hpp"
#include "gtds/system.hpp"

namespace gtds {

/// Full sweeps build q^n x q^n tables; single-pair queries go up to 2^16.
inline constexpr std::uint64_t kMaxFullSweep = std::uint64_t{1} << 10;
inline constexpr std::uint64_t kMaxPairQuery = std::uint64_t{1} << 16;
inline constexpr double kZeroTolerance = 1e-9;
inline constexpr double kBoundSlack = 1e-6;

using VectorMap = std::function<Vec(std::span<const Element>)>;

/// A map F_q^n -> F_q^n materialized on every point of its domain.
class TabulatedMap {
 public:
  TabulatedMap(const Field& field, std::size_t n, const VectorMap& map,
               std::uint64_t limit = kMaxDomain);

  static TabulatedMap of(const Gtds& F, std::uint64_t limit = kMaxDomain);

  const Field& field() const noexcept { return field_; }
  const Domain& domain() const noexcept { return domain_; }
  std::size_t width() const noexcept { return domain_.width(); }
  std::uint64_t size() const noexcept { return domain_.size(); }

  /// Index of F(x) for x with index `x`.
  std::uint64_t image(std::uint64_t x) const noexcept { return image_[x]; }
  /// Coordinate `i` of F(x).
  Element image_coord(std::uint64_t x, std::size_t i) const noexcept {
    return coords_[x * width() + i];
  }

 private:
  Field field_;
  Domain domain_;
  std::vector<std::uint64_t> image_;
  Vec coords_;
};

// ------------------------------------------------------------ differential

struct DdtViolation {
  std::uint64_t dx;
  std::uint64_t dy;
  std::uint64_t count;
  /// Theorem bound, or the corollary count bound when `corollary` is set.
  double bound;
  bool corollary;
};

struct DdtReport {
  Domain domain;
  /// Row-major counts, rows indexed by the input difference.
  std::vector<std::uint32_t> table;
  /// max over dx != 0.
  std::uint64_t delta_uniformity = 0;
  /// Per-entry theorem bound; empty when the map is not a checked GTDS.
  std::vector<std::uint64_t> bound;
  /// Per-entry probability bound (d/q)^wt(dx); empty when the corollary's
  /// hypotheses do not hold.
  std::vector<double> probability_bound;
  std::vector<DdtViolation> violations;

  std::uint32_t at(std::uint64_t dx, std::uint64_t dy) const noexcept {
    return table[dx * domain.size() + dy];
  }
};

/// Exhaustive DDT. Throws DomainTooLarge when q^n > limit.
DdtReport ddt(const TabulatedMap& F, std::uint64_t limit = kMaxFullSweep);

struct UniDifferential {
  std::uint64_t delta;
  std::int64_t degree;
  /// When delta < q, whether delta < deg f (vacuously true otherwise).
  bool lemma_holds;
};

/// Exact differential uniformity of a univariate polynomial; q <= 2^12.
UniDifferential differential_uniformity_uni(const UniPoly& f);

enum class DifferenceCriterion { PrimeField, BinomialWitness, Inconclusive };

struct DifferenceCriterionResult {
  DifferenceCriterion kind;
  /// Witness k with gcd(p, C(d, k)) = 1, for BinomialWitness.
  std::optional<std::uint64_t> k;
};

/// Decides whether f(x + a) - f(x) is non-constant for every a != 0 without
/// tabulating. Throws DegreeTooLow for deg f <= 1 (after reduction).
DifferenceCriterionResult difference_nonconstant_criteria(const UniPoly& f);

/// C(n, k) mod p via Lucas' theorem.
std::uint64_t binomial_mod_prime(std::uint64_t n, std::uint64_t k, std::uint64_t p);

enum class HypothesisSource { Linear, PrimeField, BinomialWitness, Exhaustive };

/// Precomputed data for the GTDS differential bounds.
class DifferentialBound {
 public:
  /// Throws HypothesisUnverified(i) if some p_i has degree >= 2 and
  /// delta(p_i) < q cannot be established.
  explicit DifferentialBound(const Gtds& F);

  /// Product bound for dx != 0; dx = 0 yields the exact value (q^n or 0).
  std::uint64_t count_bound(std::span<const Element> dx, std::span<const Element> dy) const;

  bool corollary_applies() const noexcept { return corollary_degree_.has_value(); }
  /// d = max deg p_i when every 1 < deg p_i and delta(p_i) < q.
  std::optional<std::int64_t> corollary_degree() const noexcept { return corollary_degree_; }
  /// q^(n - wt) d^wt. Throws HypothesisUnverified when the corollary does not apply.
  double corollary_count_bound(std::span<const Element> dx) const;
  double corollary_probability_bound(std::span<const Element> dx) const;

  std::uint64_t last_branch_uniformity() const noexcept { return delta_last_; }
  HypothesisSource hypothesis_source(std::size_t i) const { return sources_.at(i); }

 private:
  std::uint64_t q_;
  std::size_t n_;
  std::vector<std::int64_t> degrees_;
  std::vector<HypothesisSource> sources_;
  std::uint64_t delta_last_;
  std::optional<std::int64_t> corollary_degree_;
};

std::uint64_t gtds_ddt_bound(const Gtds& F, std::span<const Element> dx, std::span<const Element> dy);

struct SimpleDdtBound {
  double count;
  double probability;
};

SimpleDdtBound gtds_ddt_bound_simple(const Gtds& F, std::span<const Element> dx);

std::size_t hamming_weight(std::span<const Element> v) noexcept;

/// Full DDT plus per-entry theorem and corollary bounds.
DdtReport check_ddt_against_bounds(const Gtds& F, std::uint64_t limit = kMaxFullSweep);

// ----------------------------------------------------------------- linear

/// chi_1 tabulated over F_q.
class CharacterTable {
 public:
  explicit CharacterTable(const Field& field);
  std::complex<double> operator()(Element a) const noexcept { return values_[a.value]; }

 private:
  std::vector<std::complex<double>> values_;
};

Element inner_product(const Field& field, std::span<const Element> a, std::span<const Element> b);

/// CORR_F(a, b) = q^-n sum_x chi_1(<a, F(x)> + <b, x>).
std::complex<double> correlation(const TabulatedMap& F, std::span<const Element> a,
                                 std::span<const Element> b);
/// Same, evaluating `map` on the fly; q^n <= 2^16.
std::complex<double> correlation(const Field& field, std::size_t n, const VectorMap& map,
                                 std::span<const Element> a, std::span<const Element> b);

struct CorrViolation {
  std::uint64_t a;
  std::uint64_t b;
  double lp;
  double bound;
};

struct CorrReport {
  Domain domain;
  /// Row-major, rows indexed by the output mask a, columns by the input mask b.
  std::vector<std::complex<double>> corr;
  std::vector<double> lp;
  /// Correlation bound per entry (its square bounds lp); empty unless checked.
  std::vector<double> bound;
  std::vector<CorrViolation> violations;

  std::complex<double> corr_at(std::uint64_t a, std::uint64_t b) const noexcept {
    return corr[a * domain.size() + b];
  }
  double lp_at(std::uint64_t a, std::uint64_t b) const noexcept { return lp[a * domain.size() + b]; }
  /// Largest LP over (a, b) != (0, 0).
  double max_lp() const noexcept;
  double lp_sum() const noexcept;
};

/// All (a, b) correlations. Throws DomainTooLarge when q^n > limit.
CorrReport correlation_table(const TabulatedMap& F, std::uint64_t limit = kMaxFullSweep);

struct WeilCheck {
  double lhs;
  double bound;
  bool ok;
};

/// |sum_x chi_1(a f(x) + b x)| against (min{deg f, deg f^-1} - 1) sqrt(q).
WeilCheck weil_sum_check(const UniPoly& f, Element a, Element b, double slack = kBoundSlack);

struct WeilRow {
  Element a;
  Element b;
  WeilCheck check;
};

/// weil_sum_check for every a, b != 0, sharing one certificate; q <= limit.
std::vector<WeilRow> weil_sweep(const UniPoly& f, std::uint64_t limit = kMaxFullSweep,
                                double slack = kBoundSlack);

/// Correlation bound from the GTDS case table; throws HypothesisUnverified(i)
/// when gcd(deg p_i, q) or gcd(deg p_i^-1, q) is not 1.
double gtds_correlation_bound(const Gtds& F, std::span<const Element> a, std::span<const Element> b);

/// Full (a, b) sweep; flags LP > bound^2 + slack and nonzero correlation
/// where the bound is 0.
CorrReport check_correlation_against_bounds(const Gtds& F, std::uint64_t limit = kMaxFullSweep,
                                            double slack = kBoundSlack);

/// Masks omega_0..omega_r; round i approximates input mask omega_{i-1} by
/// output mask omega_i.
struct LinearTrail {
  std::vector<Vec> masks;
};

/// prod_i LP_{R^(i)}(a = omega_i, b = omega_{i-1}), each round keyed with k_i.
double trail_lp(const Cipher& C, const RoundKeys& K, const LinearTrail& trail);

/// Output mask through the mixing layer: (A^T a, b).
std::pair<Vec, Vec> affine_mask_transport(const AffineLayer& L, std::span<const Element> a,
                                          std::span<const Element> b);

}  // namespace gtds
