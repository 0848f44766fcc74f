#include "gtds/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "gtds/error.hpp"

namespace gtds {

namespace {

constexpr std::uint64_t kMaxUnivariateDdt = std::uint64_t{1} << 12;

// Splits [0, count) into contiguous chunks, one per hardware thread. Each
// worker writes only the rows it owns.
template <class Body>
void parallel_rows(std::uint64_t count, Body&& body) {
  const std::uint64_t workers =
      std::clamp<std::uint64_t>(std::thread::hardware_concurrency(), 1, std::max<std::uint64_t>(count, 1));
  if (workers == 1) {
    body(0, count);
    return;
  }
  std::vector<std::thread> pool;
  const std::uint64_t chunk = (count + workers - 1) / workers;
  for (std::uint64_t begin = 0; begin < count; begin += chunk) {
    pool.emplace_back([&body, begin, end = std::min(count, begin + chunk)] { body(begin, end); });
  }
  for (auto& t : pool) t.join();
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return a * b;
}

bool is_zero_vector(std::span<const Element> v) {
  return std::all_of(v.begin(), v.end(), [](Element e) { return e.value == 0; });
}

void check_same_width(std::size_t n, std::span<const Element> v, const char* what) {
  if (v.size() != n) {
    std::ostringstream msg;
    msg << what << " has length " << v.size() << ", expected " << n;
    fail(ErrorCode::ArityMismatch, msg.str());
  }
}

std::string branch_tag(ErrorCode code, std::size_t i) {
  return std::string(error_code_name(code)) + "(" + std::to_string(i + 1) + ")";
}

}  // namespace

// ----------------------------------------------------------- TabulatedMap

TabulatedMap::TabulatedMap(const Field& field, std::size_t n, const VectorMap& map, std::uint64_t limit)
    : field_(field), domain_(field.order(), n, limit) {
  image_.resize(domain_.size());
  coords_.resize(domain_.size() * n);
  Vec x(n);
  for (std::uint64_t idx = 0; idx < domain_.size(); ++idx) {
    domain_.decode(idx, x);
    const Vec y = map(x);
    check_same_width(n, y, "map output");
    image_[idx] = domain_.encode(y);
    std::copy(y.begin(), y.end(), coords_.begin() + static_cast<std::ptrdiff_t>(idx * n));
  }
}

TabulatedMap TabulatedMap::of(const Gtds& F, std::uint64_t limit) {
  return TabulatedMap(F.field(), F.width(), [&F](std::span<const Element> x) { return F.eval(x); },
                      limit);
}

// ------------------------------------------------------------ differential

DdtReport ddt(const TabulatedMap& F, std::uint64_t limit) {
  const Field& field = F.field();
  const std::size_t n = F.width();
  const Domain domain(field.order(), n, limit);
  const std::uint64_t N = domain.size();

  DdtReport report{domain, std::vector<std::uint32_t>(N * N, 0), 0, {}, {}, {}};
  parallel_rows(N, [&](std::uint64_t begin, std::uint64_t end) {
    Vec dx(n), x(n), shifted(n), diff(n);
    for (std::uint64_t a = begin; a < end; ++a) {
      domain.decode(a, dx);
      std::uint32_t* row = report.table.data() + a * N;
      for (std::uint64_t xi = 0; xi < N; ++xi) {
        domain.decode(xi, x);
        for (std::size_t k = 0; k < n; ++k) shifted[k] = field.add(x[k], dx[k]);
        const std::uint64_t si = domain.encode(shifted);
        for (std::size_t k = 0; k < n; ++k) {
          diff[k] = field.sub(F.image_coord(si, k), F.image_coord(xi, k));
        }
        ++row[domain.encode(diff)];
      }
    }
  });
  for (std::uint64_t a = 1; a < N; ++a) {
    const auto* row = report.table.data() + a * N;
    report.delta_uniformity = std::max<std::uint64_t>(report.delta_uniformity, *std::max_element(row, row + N));
  }
  return report;
}

UniDifferential differential_uniformity_uni(const UniPoly& f) {
  const Field& field = f.field();
  const std::uint64_t q = field.order();
  if (q > kMaxUnivariateDdt) fail(ErrorCode::DomainTooLarge, "univariate DDT needs q <= 2^12");
  std::vector<Element> values(q);
  for (std::uint64_t x = 0; x < q; ++x) values[x] = f(Element{x});
  std::uint64_t delta = 0;
  std::vector<std::uint32_t> counts(q);
  for (std::uint64_t a = 1; a < q; ++a) {
    std::fill(counts.begin(), counts.end(), 0);
    for (std::uint64_t x = 0; x < q; ++x) {
      const Element shifted = field.add(Element{x}, Element{a});
      ++counts[field.sub(values[shifted.value], values[x]).value];
    }
    delta = std::max<std::uint64_t>(delta, *std::max_element(counts.begin(), counts.end()));
  }
  const std::int64_t degree = reduce_mod(f).degree();
  const bool lemma = delta >= q || static_cast<std::int64_t>(delta) < degree;
  return {delta, degree, lemma};
}

std::uint64_t binomial_mod_prime(std::uint64_t n, std::uint64_t k, std::uint64_t p) {
  if (k > n) return 0;
  std::uint64_t result = 1;
  while (n > 0 || k > 0) {
    const std::uint64_t ni = n % p, ki = k % p;
    if (ki > ni) return 0;
    // Small binomial C(ni, ki) mod p by the multiplicative formula.
    std::uint64_t num = 1, den = 1;
    for (std::uint64_t j = 0; j < ki; ++j) {
      num = num * ((ni - j) % p) % p;
      den = den * ((j + 1) % p) % p;
    }
    const auto den_inv = inverse_mod(den, p);
    result = result * (num * den_inv.value_or(0) % p) % p;
    n /= p;
    k /= p;
  }
  return result;
}

DifferenceCriterionResult difference_nonconstant_criteria(const UniPoly& f) {
  const UniPoly r = reduce_mod(f);
  const std::int64_t d = r.degree();
  if (d <= 1) fail(ErrorCode::DegreeTooLow, "criteria need deg f > 1");
  const Field& field = f.field();
  if (field.is_prime_field()) return {DifferenceCriterion::PrimeField, std::nullopt};

  const UniPoly tail = r - UniPoly::monomial(field, static_cast<std::uint64_t>(d), r.leading_coeff());
  const std::int64_t d_prime = std::max<std::int64_t>(tail.degree(), 1);
  const std::uint64_t p = field.characteristic();
  for (std::int64_t k = d - 1; k >= d_prime; --k) {
    if (binomial_mod_prime(static_cast<std::uint64_t>(d), static_cast<std::uint64_t>(k), p) != 0) {
      return {DifferenceCriterion::BinomialWitness, static_cast<std::uint64_t>(k)};
    }
  }
  return {DifferenceCriterion::Inconclusive, std::nullopt};
}

DifferentialBound::DifferentialBound(const Gtds& F)
    : q_(F.field().order()), n_(F.width()), delta_last_(F.field().order()) {
  if (!F.validated()) fail(ErrorCode::HypothesisUnverified, "bounds need a validated GTDS");
  bool all_nonlinear = true;
  std::int64_t max_degree = 0;
  for (std::size_t i = 0; i < n_; ++i) {
    const std::int64_t deg = F.degree(i);
    degrees_.push_back(deg);
    max_degree = std::max(max_degree, deg);
    if (deg == 1) {
      sources_.push_back(HypothesisSource::Linear);
      all_nonlinear = false;
      continue;
    }
    const auto crit = difference_nonconstant_criteria(F.p(i));
    if (crit.kind == DifferenceCriterion::PrimeField) {
      sources_.push_back(HypothesisSource::PrimeField);
      continue;
    }
    if (crit.kind == DifferenceCriterion::BinomialWitness) {
      sources_.push_back(HypothesisSource::BinomialWitness);
      continue;
    }
    if (q_ > kMaxUnivariateDdt) {
      fail(ErrorCode::HypothesisUnverified,
           branch_tag(ErrorCode::HypothesisUnverified, i) + ": criteria inconclusive and q too large");
    }
    if (differential_uniformity_uni(F.p(i)).delta >= q_) {
      fail(ErrorCode::HypothesisUnverified,
           branch_tag(ErrorCode::HypothesisUnverified, i) + ": delta(p_i) = q");
    }
    sources_.push_back(HypothesisSource::Exhaustive);
  }

  const std::int64_t last_degree = degrees_.back();
  if (last_degree > 1) {
    // Beyond the exhaustive range, delta(p_n) < q implies delta(p_n) < deg p_n.
    delta_last_ = q_ <= kMaxUnivariateDdt ? differential_uniformity_uni(F.p(n_ - 1)).delta
                                          : static_cast<std::uint64_t>(last_degree - 1);
  }
  if (all_nonlinear) corollary_degree_ = max_degree;
}

std::uint64_t DifferentialBound::count_bound(std::span<const Element> dx, std::span<const Element> dy) const {
  check_same_width(n_, dx, "input difference");
  check_same_width(n_, dy, "output difference");
  if (is_zero_vector(dx)) {
    if (!is_zero_vector(dy)) return 0;
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < n_; ++i) total = saturating_mul(total, q_);
    return total;
  }
  std::uint64_t bound;
  if (dx[n_ - 1].value != 0) {
    bound = delta_last_;
  } else {
    bound = dy[n_ - 1].value == 0 ? q_ : 0;
  }
  for (std::size_t i = 0; i + 1 < n_; ++i) {
    const bool factor_is_degree = dx[i].value != 0 && degrees_[i] > 1;
    bound = saturating_mul(bound, factor_is_degree ? static_cast<std::uint64_t>(degrees_[i]) : q_);
  }
  return bound;
}

double DifferentialBound::corollary_count_bound(std::span<const Element> dx) const {
  if (!corollary_degree_) {
    fail(ErrorCode::HypothesisUnverified, "corollary needs 1 < deg p_i for every branch");
  }
  check_same_width(n_, dx, "input difference");
  const auto wt = static_cast<double>(hamming_weight(dx));
  return std::pow(static_cast<double>(q_), static_cast<double>(n_) - wt) *
         std::pow(static_cast<double>(*corollary_degree_), wt);
}

double DifferentialBound::corollary_probability_bound(std::span<const Element> dx) const {
  if (!corollary_degree_) {
    fail(ErrorCode::HypothesisUnverified, "corollary needs 1 < deg p_i for every branch");
  }
  check_same_width(n_, dx, "input difference");
  return std::pow(static_cast<double>(*corollary_degree_) / static_cast<double>(q_),
                  static_cast<double>(hamming_weight(dx)));
}

std::uint64_t gtds_ddt_bound(const Gtds& F, std::span<const Element> dx, std::span<const Element> dy) {
  return DifferentialBound(F).count_bound(dx, dy);
}

SimpleDdtBound gtds_ddt_bound_simple(const Gtds& F, std::span<const Element> dx) {
  const DifferentialBound bound(F);
  return {bound.corollary_count_bound(dx), bound.corollary_probability_bound(dx)};
}

std::size_t hamming_weight(std::span<const Element> v) noexcept {
  return static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [](Element e) { return e.value != 0; }));
}

DdtReport check_ddt_against_bounds(const Gtds& F, std::uint64_t limit) {
  const DifferentialBound model(F);
  DdtReport report = ddt(TabulatedMap::of(F, limit), limit);
  const Domain& domain = report.domain;
  const std::uint64_t N = domain.size();
  const double total = static_cast<double>(N);
  report.bound.resize(N * N);
  if (model.corollary_applies()) report.probability_bound.resize(N * N);

  Vec dx(F.width()), dy(F.width());
  for (std::uint64_t a = 0; a < N; ++a) {
    domain.decode(a, dx);
    const bool nonzero = a != 0;
    const double prob = nonzero && model.corollary_applies() ? model.corollary_probability_bound(dx) : 1.0;
    const double cor_count = nonzero && model.corollary_applies() ? model.corollary_count_bound(dx) : total;
    for (std::uint64_t b = 0; b < N; ++b) {
      domain.decode(b, dy);
      const std::uint64_t idx = a * N + b;
      const std::uint64_t count = report.table[idx];
      const std::uint64_t bound = model.count_bound(dx, dy);
      report.bound[idx] = bound;
      if (count > bound) report.violations.push_back({a, b, count, static_cast<double>(bound), false});
      if (!model.corollary_applies()) continue;
      report.probability_bound[idx] = prob;
      // Counts are exact integers; the slack only absorbs rounding in pow().
      if (static_cast<double>(count) > cor_count * (1 + 1e-12) ||
          static_cast<double>(count) / total > prob * (1 + 1e-12)) {
        report.violations.push_back({a, b, count, cor_count, true});
      }
    }
  }
  return report;
}

// ----------------------------------------------------------------- linear

CharacterTable::CharacterTable(const Field& field) {
  if (field.order() > kMaxDomain) fail(ErrorCode::DomainTooLarge, "character table needs q <= 2^20");
  values_.resize(field.order());
  for (std::uint64_t a = 0; a < field.order(); ++a) values_[a] = field.character(Element{a});
}

Element inner_product(const Field& field, std::span<const Element> a, std::span<const Element> b) {
  check_same_width(a.size(), b, "mask");
  Element acc = field.zero();
  for (std::size_t i = 0; i < a.size(); ++i) acc = field.add(acc, field.mul(a[i], b[i]));
  return acc;
}

std::complex<double> correlation(const TabulatedMap& F, std::span<const Element> a, std::span<const Element> b) {
  const std::size_t n = F.width();
  check_same_width(n, a, "output mask");
  check_same_width(n, b, "input mask");
  if (F.size() > kMaxPairQuery) fail(ErrorCode::DomainTooLarge, "correlation needs q^n <= 2^16");
  const Field& field = F.field();
  const CharacterTable chi(field);
  std::complex<double> sum = 0;
  Vec x(n), y(n);
  for (std::uint64_t xi = 0; xi < F.size(); ++xi) {
    F.domain().decode(xi, x);
    for (std::size_t k = 0; k < n; ++k) y[k] = F.image_coord(xi, k);
    sum += chi(field.add(inner_product(field, a, y), inner_product(field, b, x)));
  }
  return sum / static_cast<double>(F.size());
}

std::complex<double> correlation(const Field& field, std::size_t n, const VectorMap& map,
                                 std::span<const Element> a, std::span<const Element> b) {
  check_same_width(n, a, "output mask");
  check_same_width(n, b, "input mask");
  const Domain domain(field.order(), n, kMaxPairQuery);
  const CharacterTable chi(field);
  std::complex<double> sum = 0;
  Vec x(n);
  for (std::uint64_t xi = 0; xi < domain.size(); ++xi) {
    domain.decode(xi, x);
    const Vec y = map(x);
    sum += chi(field.add(inner_product(field, a, y), inner_product(field, b, x)));
  }
  return sum / static_cast<double>(domain.size());
}

double CorrReport::max_lp() const noexcept {
  double best = 0;
  for (std::size_t i = 1; i < lp.size(); ++i) best = std::max(best, lp[i]);
  return best;
}

double CorrReport::lp_sum() const noexcept {
  double sum = 0;
  for (double v : lp) sum += v;
  return sum;
}

CorrReport correlation_table(const TabulatedMap& F, std::uint64_t limit) {
  const Field& field = F.field();
  const std::size_t n = F.width();
  const Domain domain(field.order(), n, limit);
  const std::uint64_t N = domain.size();
  const CharacterTable chi(field);

  // chi(<a, F(x)> + <b, x>) = chi(<a, F(x)>) * chi(<b, x>).
  std::vector<std::complex<double>> out_char(N * N), in_char(N * N);
  parallel_rows(N, [&](std::uint64_t begin, std::uint64_t end) {
    Vec mask(n), x(n), y(n);
    for (std::uint64_t m = begin; m < end; ++m) {
      domain.decode(m, mask);
      for (std::uint64_t xi = 0; xi < N; ++xi) {
        domain.decode(xi, x);
        for (std::size_t k = 0; k < n; ++k) y[k] = F.image_coord(xi, k);
        out_char[m * N + xi] = chi(inner_product(field, mask, y));
        in_char[m * N + xi] = chi(inner_product(field, mask, x));
      }
    }
  });

  CorrReport report{domain, std::vector<std::complex<double>>(N * N), std::vector<double>(N * N), {}, {}};
  const double scale = 1.0 / static_cast<double>(N);
  parallel_rows(N, [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t a = begin; a < end; ++a) {
      const auto* u = out_char.data() + a * N;
      for (std::uint64_t b = 0; b < N; ++b) {
        const auto* v = in_char.data() + b * N;
        std::complex<double> sum = 0;
        for (std::uint64_t xi = 0; xi < N; ++xi) sum += u[xi] * v[xi];
        sum *= scale;
        report.corr[a * N + b] = sum;
        report.lp[a * N + b] = std::norm(sum);
      }
    }
  });
  return report;
}

namespace {

// Certificate plus the (min{deg f, deg f^-1} - 1) sqrt(q) bound, or
// HypothesisUnverified when the Weil hypotheses fail.
double weil_bound(const UniPoly& f) {
  const Field& field = f.field();
  PermPolyCert cert = [&] {
    try {
      return certify_permutation(f);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotAPermutation) throw;
      fail(ErrorCode::HypothesisUnverified, std::string("f must be a permutation: ") + e.what());
    }
  }();
  const auto p = static_cast<std::int64_t>(field.characteristic());
  if (cert.deg_f < 2) fail(ErrorCode::HypothesisUnverified, "f must have degree > 1");
  if (cert.deg_f % p == 0 || cert.deg_finv % p == 0) {
    fail(ErrorCode::HypothesisUnverified, "gcd(deg f, q) and gcd(deg f^-1, q) must be 1");
  }
  return static_cast<double>(std::min(cert.deg_f, cert.deg_finv) - 1) *
         std::sqrt(static_cast<double>(field.order()));
}

double weil_lhs(const Field& field, const CharacterTable& chi, const Vec& values, Element a, Element b) {
  std::complex<double> sum = 0;
  for (std::uint64_t x = 0; x < field.order(); ++x) {
    sum += chi(field.add(field.mul(a, values[x]), field.mul(b, Element{x})));
  }
  return std::abs(sum);
}

Vec tabulate(const UniPoly& f) {
  Vec values(f.field().order());
  for (std::uint64_t x = 0; x < values.size(); ++x) values[x] = f(Element{x});
  return values;
}

}  // namespace

WeilCheck weil_sum_check(const UniPoly& f, Element a, Element b, double slack) {
  const Field& field = f.field();
  if (a.value == 0 || b.value == 0) fail(ErrorCode::InvalidArgument, "Weil check needs a, b != 0");
  if (!field.contains(a) || !field.contains(b)) fail(ErrorCode::InvalidArgument, "a, b must be field elements");
  if (field.order() > kMaxDomain) fail(ErrorCode::DomainTooLarge, "character sum needs q <= 2^20");
  const double bound = weil_bound(f);
  const double lhs = weil_lhs(field, CharacterTable(field), tabulate(f), a, b);
  return {lhs, bound, lhs <= bound + slack};
}

std::vector<WeilRow> weil_sweep(const UniPoly& f, std::uint64_t limit, double slack) {
  const Field& field = f.field();
  const std::uint64_t q = field.order();
  if (q > limit) fail(ErrorCode::DomainTooLarge, "Weil sweep over q = " + std::to_string(q) + " exceeds the limit");
  const double bound = weil_bound(f);
  const CharacterTable chi(field);
  const Vec values = tabulate(f);
  std::vector<WeilRow> rows((q - 1) * (q - 1));
  parallel_rows(q - 1, [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t a = begin + 1; a <= end; ++a) {
      for (std::uint64_t b = 1; b < q; ++b) {
        const double lhs = weil_lhs(field, chi, values, Element{a}, Element{b});
        rows[(a - 1) * (q - 1) + (b - 1)] = {Element{a}, Element{b}, {lhs, bound, lhs <= bound + slack}};
      }
    }
  });
  return rows;
}

namespace {

void check_correlation_hypotheses(const Gtds& F) {
  if (!F.validated()) fail(ErrorCode::HypothesisUnverified, "bounds need a validated GTDS");
  const auto p = static_cast<std::int64_t>(F.field().characteristic());
  for (std::size_t i = 0; i < F.width(); ++i) {
    if (F.degree(i) % p == 0 || F.inverse_degree(i) % p == 0) {
      fail(ErrorCode::HypothesisUnverified,
           branch_tag(ErrorCode::HypothesisUnverified, i) + ": degree of p_i or p_i^-1 divisible by p");
    }
  }
}

double correlation_case_bound(const Gtds& F, std::span<const Element> a, std::span<const Element> b) {
  const bool a_zero = is_zero_vector(a), b_zero = is_zero_vector(b);
  if (a_zero && b_zero) return 1.0;
  if (a_zero || b_zero) return 0.0;
  std::size_t j = 0;
  while (a[j].value == 0) ++j;
  if (b[j].value == 0) return 0.0;
  const std::int64_t deg = F.degree(j);
  if (deg == 1) return 1.0;
  const std::int64_t m = std::min(deg, F.inverse_degree(j));
  return static_cast<double>(m - 1) / std::sqrt(static_cast<double>(F.field().order()));
}

}  // namespace

double gtds_correlation_bound(const Gtds& F, std::span<const Element> a, std::span<const Element> b) {
  check_same_width(F.width(), a, "output mask");
  check_same_width(F.width(), b, "input mask");
  check_correlation_hypotheses(F);
  return correlation_case_bound(F, a, b);
}

CorrReport check_correlation_against_bounds(const Gtds& F, std::uint64_t limit, double slack) {
  check_correlation_hypotheses(F);
  CorrReport report = correlation_table(TabulatedMap::of(F, limit), limit);
  const Domain& domain = report.domain;
  const std::uint64_t N = domain.size();
  report.bound.resize(N * N);
  Vec a(F.width()), b(F.width());
  for (std::uint64_t ai = 0; ai < N; ++ai) {
    domain.decode(ai, a);
    for (std::uint64_t bi = 0; bi < N; ++bi) {
      domain.decode(bi, b);
      const std::uint64_t idx = ai * N + bi;
      const double bound = correlation_case_bound(F, a, b);
      report.bound[idx] = bound;
      const double lp = report.lp[idx];
      const bool over = lp > bound * bound + slack;
      const bool nonzero_where_zero = bound == 0.0 && std::abs(report.corr[idx]) > kZeroTolerance;
      if (over || nonzero_where_zero) report.violations.push_back({ai, bi, lp, bound});
    }
  }
  return report;
}

double trail_lp(const Cipher& C, const RoundKeys& K, const LinearTrail& trail) {
  C.check_keys(K);
  const std::size_t r = C.rounds().size();
  if (trail.masks.size() != r + 1) {
    std::ostringstream msg;
    msg << "trail for " << r << " rounds needs " << r + 1 << " masks, got " << trail.masks.size();
    fail(ErrorCode::ArityMismatch, msg.str());
  }
  for (const auto& mask : trail.masks) check_same_width(C.width(), mask, "trail mask");
  double lp = 1.0;
  for (std::size_t i = 1; i <= r; ++i) {
    const Round& R = C.rounds()[i - 1];
    const Vec& k = K.columns[i];
    const auto corr = correlation(
        C.field(), C.width(), [&](std::span<const Element> x) { return round_apply(R, k, x); },
        trail.masks[i], trail.masks[i - 1]);
    lp *= std::norm(corr);
  }
  return lp;
}

std::pair<Vec, Vec> affine_mask_transport(const AffineLayer& L, std::span<const Element> a,
                                          std::span<const Element> b) {
  check_same_width(L.width(), b, "input mask");
  return {L.transpose_apply(a), Vec(b.begin(), b.end())};
}

}  // namespace gtds
