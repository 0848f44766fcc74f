#include "gtds/polynomial.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "gtds/error.hpp"

namespace gtds {

namespace {

constexpr std::uint64_t kMaxScanPoints = std::uint64_t{1} << 20;
constexpr std::uint64_t kMaxBijectionScan = std::uint64_t{1} << 26;
constexpr std::uint64_t kMaxInterpolationField = std::uint64_t{1} << 12;

void require_same_field(const Field& a, const Field& b) {
  if (!(a == b)) {
    fail(ErrorCode::MixedFields, "polynomials over " + a.describe() + " and " + b.describe());
  }
}

// Univariate polynomial of the shape c*x^d + b with d >= 1 (b possibly 0).
struct MonomialShape {
  std::uint64_t d;
  Element c;
  Element b;
};

std::optional<MonomialShape> monomial_shape(const UniPoly& f) {
  const auto& t = f.terms();
  if (t.empty() || t.size() > 2) return std::nullopt;
  const auto top = *t.rbegin();
  if (top.first == 0) return std::nullopt;
  if (t.size() == 2 && t.begin()->first != 0) return std::nullopt;
  return MonomialShape{top.first, top.second, f.coeff(0)};
}

bool exhaustive_bijection(const UniPoly& f) {
  const std::uint64_t q = f.field().order();
  if (q > kMaxBijectionScan) {
    fail(ErrorCode::DomainTooLarge, "exhaustive permutation test over " + f.field().describe());
  }
  std::vector<bool> seen(q, false);
  for (std::uint64_t x = 0; x < q; ++x) {
    const auto y = f(Element{x}).value;
    if (seen[y]) return false;
    seen[y] = true;
  }
  return true;
}

UniPoly inverse_by_interpolation(const UniPoly& f) {
  const Field& field = f.field();
  const std::uint64_t q = field.order();
  if (q > kMaxInterpolationField) {
    fail(ErrorCode::DomainTooLarge,
         "inverse by interpolation needs q <= 2^12, got " + field.describe());
  }
  std::vector<std::pair<Element, Element>> points;
  points.reserve(q);
  for (std::uint64_t x = 0; x < q; ++x) points.emplace_back(f(Element{x}), Element{x});
  return interpolate(field, points);
}

}  // namespace

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) noexcept {
  while (b != 0) {
    const auto t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::optional<std::uint64_t> inverse_mod(std::uint64_t d, std::uint64_t n) noexcept {
  if (n == 1) return 0;
  __int128 t = 0, new_t = 1;
  __int128 r = n, new_r = d % n;
  while (new_r != 0) {
    const __int128 quot = r / new_r;
    t -= quot * new_t;
    std::swap(t, new_t);
    r -= quot * new_r;
    std::swap(r, new_r);
  }
  if (r != 1) return std::nullopt;
  if (t < 0) t += n;
  return static_cast<std::uint64_t>(t);
}

// ---------------------------------------------------------------- UniPoly

UniPoly::UniPoly(Field field, const Terms& terms) : field_(std::move(field)) {
  for (const auto& [e, c] : terms) add_term(e, c);
}

UniPoly UniPoly::constant(const Field& field, Element c) { return monomial(field, 0, c); }

UniPoly UniPoly::monomial(const Field& field, std::uint64_t exponent, Element coeff) {
  UniPoly f(field);
  f.add_term(exponent, coeff);
  return f;
}

void UniPoly::add_term(std::uint64_t exponent, Element c) {
  if (!field_.contains(c)) fail(ErrorCode::InvalidArgument, "coefficient outside the field");
  auto it = terms_.find(exponent);
  if (it == terms_.end()) {
    if (c.value != 0) terms_.emplace(exponent, c);
    return;
  }
  it->second = field_.add(it->second, c);
  if (it->second.value == 0) terms_.erase(it);
}

std::int64_t UniPoly::degree() const noexcept {
  return terms_.empty() ? -1 : static_cast<std::int64_t>(terms_.rbegin()->first);
}

Element UniPoly::coeff(std::uint64_t exponent) const {
  auto it = terms_.find(exponent);
  return it == terms_.end() ? field_.zero() : it->second;
}

Element UniPoly::leading_coeff() const {
  return terms_.empty() ? field_.zero() : terms_.rbegin()->second;
}

Element UniPoly::operator()(Element x) const {
  // Horner over the gaps between consecutive exponents.
  if (terms_.empty()) return field_.zero();
  Element acc = field_.zero();
  std::uint64_t prev = terms_.rbegin()->first;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    acc = field_.add(field_.mul(acc, field_.pow(x, prev - it->first)), it->second);
    prev = it->first;
  }
  return field_.mul(acc, field_.pow(x, prev));
}

UniPoly UniPoly::operator+(const UniPoly& rhs) const {
  require_same_field(field_, rhs.field_);
  UniPoly out = *this;
  for (const auto& [e, c] : rhs.terms_) out.add_term(e, c);
  return out;
}

UniPoly UniPoly::operator-(const UniPoly& rhs) const { return *this + rhs.scaled(field_.neg(field_.one())); }

UniPoly UniPoly::operator*(const UniPoly& rhs) const {
  require_same_field(field_, rhs.field_);
  UniPoly out(field_);
  for (const auto& [e1, c1] : terms_)
    for (const auto& [e2, c2] : rhs.terms_) out.add_term(e1 + e2, field_.mul(c1, c2));
  return out;
}

UniPoly UniPoly::scaled(Element c) const {
  UniPoly out(field_);
  for (const auto& [e, v] : terms_) out.add_term(e, field_.mul(v, c));
  return out;
}

bool UniPoly::operator==(const UniPoly& rhs) const {
  return field_ == rhs.field_ && terms_ == rhs.terms_;
}

// -------------------------------------------------------------- MultiPoly

MultiPoly MultiPoly::constant(const Field& field, std::size_t nvars, Element c) {
  MultiPoly f(field, nvars);
  f.add_term(Exponents(nvars, 0), c);
  return f;
}

MultiPoly MultiPoly::variable(const Field& field, std::size_t nvars, std::size_t var) {
  if (var >= nvars) fail(ErrorCode::ArityMismatch, "variable index out of range");
  MultiPoly f(field, nvars);
  Exponents exps(nvars, 0);
  exps[var] = 1;
  f.add_term(exps, field.one());
  return f;
}

MultiPoly MultiPoly::from_uni(const UniPoly& g, std::size_t nvars, std::size_t var) {
  if (var >= nvars) fail(ErrorCode::ArityMismatch, "variable index out of range");
  MultiPoly f(g.field(), nvars);
  for (const auto& [e, c] : g.terms()) {
    Exponents exps(nvars, 0);
    exps[var] = e;
    f.add_term(exps, c);
  }
  return f;
}

void MultiPoly::add_term(const Exponents& exps, Element c) {
  if (exps.size() != nvars_) {
    std::ostringstream msg;
    msg << "exponent vector of length " << exps.size() << " for " << nvars_ << " variables";
    fail(ErrorCode::ArityMismatch, msg.str());
  }
  if (!field_.contains(c)) fail(ErrorCode::InvalidArgument, "coefficient outside the field");
  auto it = terms_.find(exps);
  if (it == terms_.end()) {
    if (c.value != 0) terms_.emplace(exps, c);
    return;
  }
  it->second = field_.add(it->second, c);
  if (it->second.value == 0) terms_.erase(it);
}

bool MultiPoly::is_constant() const noexcept {
  return terms_.empty() || (terms_.size() == 1 &&
                            std::all_of(terms_.begin()->first.begin(), terms_.begin()->first.end(),
                                        [](std::uint64_t e) { return e == 0; }));
}

std::int64_t MultiPoly::total_degree() const noexcept {
  std::int64_t deg = -1;
  for (const auto& [exps, c] : terms_) {
    std::uint64_t sum = 0;
    for (auto e : exps) sum += e;
    deg = std::max(deg, static_cast<std::int64_t>(sum));
  }
  return deg;
}

std::vector<std::size_t> MultiPoly::used_variables() const {
  std::vector<bool> used(nvars_, false);
  for (const auto& [exps, c] : terms_)
    for (std::size_t k = 0; k < nvars_; ++k)
      if (exps[k] != 0) used[k] = true;
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < nvars_; ++k)
    if (used[k]) out.push_back(k);
  return out;
}

Element MultiPoly::operator()(std::span<const Element> x) const {
  if (x.size() != nvars_) {
    std::ostringstream msg;
    msg << "polynomial in " << nvars_ << " variables evaluated at " << x.size() << " values";
    fail(ErrorCode::ArityMismatch, msg.str());
  }
  Element acc = field_.zero();
  for (const auto& [exps, c] : terms_) {
    Element term = c;
    for (std::size_t k = 0; k < nvars_; ++k) {
      if (exps[k] != 0) term = field_.mul(term, field_.pow(x[k], exps[k]));
    }
    acc = field_.add(acc, term);
  }
  return acc;
}

MultiPoly MultiPoly::operator+(const MultiPoly& rhs) const {
  require_same_field(field_, rhs.field_);
  if (nvars_ != rhs.nvars_) fail(ErrorCode::ArityMismatch, "adding polynomials of different arity");
  MultiPoly out = *this;
  for (const auto& [e, c] : rhs.terms_) out.add_term(e, c);
  return out;
}

MultiPoly MultiPoly::operator-(const MultiPoly& rhs) const {
  return *this + rhs.scaled(field_.neg(field_.one()));
}

MultiPoly MultiPoly::operator*(const MultiPoly& rhs) const {
  require_same_field(field_, rhs.field_);
  if (nvars_ != rhs.nvars_) fail(ErrorCode::ArityMismatch, "multiplying polynomials of different arity");
  const std::uint64_t q = field_.order();
  MultiPoly out(field_, nvars_);
  Exponents exps(nvars_);
  for (const auto& [e1, c1] : terms_) {
    for (const auto& [e2, c2] : rhs.terms_) {
      for (std::size_t k = 0; k < nvars_; ++k) exps[k] = reduce_exponent(e1[k] + e2[k], q);
      out.add_term(exps, field_.mul(c1, c2));
    }
  }
  return out;
}

MultiPoly MultiPoly::scaled(Element c) const {
  MultiPoly out(field_, nvars_);
  for (const auto& [e, v] : terms_) out.add_term(e, field_.mul(v, c));
  return out;
}

MultiPoly MultiPoly::remapped(std::size_t nvars, std::span<const std::size_t> mapping) const {
  if (mapping.size() != nvars_) fail(ErrorCode::ArityMismatch, "variable mapping has wrong length");
  MultiPoly out(field_, nvars);
  for (const auto& [exps, c] : terms_) {
    Exponents target(nvars, 0);
    for (std::size_t k = 0; k < nvars_; ++k) {
      if (exps[k] == 0) continue;
      if (mapping[k] >= nvars) fail(ErrorCode::ArityMismatch, "variable mapped out of range");
      target[mapping[k]] += exps[k];
    }
    out.add_term(target, c);
  }
  return out;
}

std::optional<std::pair<std::size_t, UniPoly>> MultiPoly::as_univariate() const {
  const auto used = used_variables();
  if (used.size() > 1) return std::nullopt;
  const std::size_t var = used.empty() ? 0 : used.front();
  UniPoly g(field_);
  for (const auto& [exps, c] : terms_) {
    g = g + UniPoly::monomial(field_, nvars_ == 0 ? 0 : exps[var], c);
  }
  return std::make_pair(var, g);
}

bool MultiPoly::operator==(const MultiPoly& rhs) const {
  return field_ == rhs.field_ && nvars_ == rhs.nvars_ && terms_ == rhs.terms_;
}

// ------------------------------------------------------------- operations

Element eval_uni(const UniPoly& f, Element x) { return f(x); }

Element eval_multi(const MultiPoly& f, std::span<const Element> x) { return f(x); }

std::uint64_t reduce_exponent(std::uint64_t e, std::uint64_t q) noexcept {
  if (e == 0) return 0;
  return (e - 1) % (q - 1) + 1;
}

UniPoly reduce_mod(const UniPoly& f) {
  const std::uint64_t q = f.field().order();
  UniPoly out(f.field());
  for (const auto& [e, c] : f.terms()) out = out + UniPoly::monomial(f.field(), reduce_exponent(e, q), c);
  return out;
}

MultiPoly reduce_mod(const MultiPoly& f) {
  const std::uint64_t q = f.field().order();
  MultiPoly out(f.field(), f.nvars());
  for (const auto& [exps, c] : f.terms()) {
    MultiPoly::Exponents r(exps.size());
    std::transform(exps.begin(), exps.end(), r.begin(),
                   [q](std::uint64_t e) { return reduce_exponent(e, q); });
    out.add_term(r, c);
  }
  return out;
}

MultiPoly compose(const UniPoly& g, const MultiPoly& s) {
  require_same_field(g.field(), s.field());
  const Field& field = s.field();
  MultiPoly out(field, s.nvars());
  for (const auto& [e, c] : g.terms()) {
    MultiPoly power = MultiPoly::constant(field, s.nvars(), field.one());
    MultiPoly base = s;
    for (std::uint64_t k = e; k > 0; k >>= 1) {
      if (k & 1) power = power * base;
      if (k > 1) base = base * base;
    }
    out = out + power.scaled(c);
  }
  return out;
}

bool is_permutation_polynomial(const UniPoly& f) {
  const UniPoly r = reduce_mod(f);
  if (r.degree() <= 0) return false;
  if (auto shape = monomial_shape(r)) {
    return gcd_u64(shape->d, f.field().order() - 1) == 1;
  }
  return exhaustive_bijection(r);
}

PermPolyCert certify_permutation(const UniPoly& f) {
  const Field& field = f.field();
  const UniPoly r = reduce_mod(f);
  if (r.degree() <= 0) fail(ErrorCode::NotAPermutation, "constant polynomial is not a permutation");

  if (r.degree() == 1) {
    const Element a_inv = field.inv(r.coeff(1));
    UniPoly inverse = UniPoly::monomial(field, 1, a_inv) +
                      UniPoly::constant(field, field.neg(field.mul(a_inv, r.coeff(0))));
    return {PermCertKind::Affine, inverse, 1, 1};
  }

  if (auto shape = monomial_shape(r)) {
    const std::uint64_t q = field.order();
    const auto e = inverse_mod(shape->d, q - 1);
    if (!e) {
      std::ostringstream msg;
      msg << "gcd(" << shape->d << ", " << q - 1 << ") != 1";
      fail(ErrorCode::NotAPermutation, msg.str());
    }
    UniPoly inverse = shape->b.value == 0
                          ? UniPoly::monomial(field, *e, field.pow(field.inv(shape->c), *e))
                          : inverse_by_interpolation(r);
    return {PermCertKind::MonomialGcd, inverse, r.degree(), inverse.degree()};
  }

  if (!exhaustive_bijection(r)) fail(ErrorCode::NotAPermutation, "polynomial is not a bijection");
  UniPoly inverse = inverse_by_interpolation(r);
  return {PermCertKind::Exhaustive, inverse, r.degree(), inverse.degree()};
}

UniPoly invert_permutation_polynomial(const UniPoly& f) { return certify_permutation(f).inverse; }

UniPoly interpolate(const Field& field, std::span<const std::pair<Element, Element>> points) {
  const std::size_t n = points.size();
  if (n == 0) return UniPoly(field);
  std::set<std::uint64_t> seen;
  for (const auto& [x, y] : points) {
    if (!field.contains(x) || !field.contains(y)) {
      fail(ErrorCode::InvalidArgument, "interpolation point outside the field");
    }
    if (!seen.insert(x.value).second) {
      fail(ErrorCode::DuplicateAbscissa, "abscissa " + std::to_string(x.value) + " repeated");
    }
  }

  // master(x) = prod (x - x_i), dense, low-to-high.
  std::vector<Element> master{field.one()};
  for (const auto& [xi, yi] : points) {
    std::vector<Element> next(master.size() + 1, field.zero());
    for (std::size_t k = 0; k < master.size(); ++k) {
      next[k + 1] = field.add(next[k + 1], master[k]);
      next[k] = field.sub(next[k], field.mul(master[k], xi));
    }
    master = std::move(next);
  }

  std::vector<Element> result(n, field.zero());
  std::vector<Element> quotient(n);
  for (const auto& [xi, yi] : points) {
    // master / (x - xi) by synthetic division.
    Element carry = field.zero();
    for (std::size_t k = n; k-- > 0;) {
      carry = field.add(master[k + 1], field.mul(carry, xi));
      quotient[k] = carry;
    }
    Element denom = field.zero();
    for (std::size_t k = n; k-- > 0;) denom = field.add(field.mul(denom, xi), quotient[k]);
    const Element scale = field.div(yi, denom);
    if (scale.value == 0) continue;
    for (std::size_t k = 0; k < n; ++k) result[k] = field.add(result[k], field.mul(scale, quotient[k]));
  }

  UniPoly out(field);
  for (std::size_t k = 0; k < n; ++k) {
    if (result[k].value != 0) out = out + UniPoly::monomial(field, k, result[k]);
  }
  return out;
}

ZeroCheck has_no_zeros(const MultiPoly& g) {
  const Field& field = g.field();
  const auto used = g.used_variables();
  if (used.empty()) {
    if (g.is_zero()) return {false, ZeroCheckMethod::Constant, Vec(g.nvars(), field.zero())};
    return {true, ZeroCheckMethod::Constant, std::nullopt};
  }

  if (used.size() == 1 && field.is_prime_field() && field.characteristic() != 2) {
    const auto uni = reduce_mod(g.as_univariate()->second);
    if (uni.degree() == 2) {
      const Element a = uni.coeff(2), b = uni.coeff(1), c = uni.coeff(0);
      const Element disc = field.sub(field.mul(b, b), field.mul(field.from_int(4), field.mul(a, c)));
      return {!field.is_quadratic_residue(disc), ZeroCheckMethod::QuadraticDiscriminant, std::nullopt};
    }
  }

  const std::uint64_t q = field.order();
  std::uint64_t points = 1;
  for (std::size_t k = 0; k < used.size(); ++k) {
    if (points > kMaxScanPoints / q) {
      fail(ErrorCode::DomainTooLarge, "zero scan over more than 2^20 points");
    }
    points *= q;
  }
  Vec x(g.nvars(), field.zero());
  for (std::uint64_t idx = 0; idx < points; ++idx) {
    std::uint64_t rest = idx;
    for (auto var : used) {
      x[var] = Element{rest % q};
      rest /= q;
    }
    if (g(x).value == 0) return {false, ZeroCheckMethod::Exhaustive, x};
  }
  return {true, ZeroCheckMethod::Exhaustive, std::nullopt};
}

}  // namespace gtds
