#include "gtds/field.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "gtds/error.hpp"

namespace gtds {

namespace {

constexpr std::uint64_t kMaxCharacteristic = std::uint64_t{1} << 31;
constexpr std::uint64_t kMaxOrder = std::uint64_t{1} << 62;
// Upper bound on the number of trial divisors tried when certifying a modulus.
constexpr std::uint64_t kMaxIrreducibilityWork = std::uint64_t{1} << 20;

using Digits = std::vector<std::uint64_t>;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return a * b % p;
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  a %= p;
  while (e > 0) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

std::uint64_t invmod(std::uint64_t a, std::uint64_t p) {
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = static_cast<std::int64_t>(p), new_r = static_cast<std::int64_t>(a);
  while (new_r != 0) {
    const std::int64_t quot = r / new_r;
    t -= quot * new_t;
    std::swap(t, new_t);
    r -= quot * new_r;
    std::swap(r, new_r);
  }
  if (t < 0) t += static_cast<std::int64_t>(p);
  return static_cast<std::uint64_t>(t);
}

// Remainder of `a` modulo a monic `b` over F_p, both low-to-high.
Digits poly_rem(Digits a, const Digits& b, std::uint64_t p) {
  const std::size_t db = b.size() - 1;
  while (a.size() > db) {
    const std::uint64_t lead = a.back();
    const std::size_t shift = a.size() - 1 - db;
    if (lead != 0) {
      for (std::size_t k = 0; k <= db; ++k) {
        a[shift + k] = (a[shift + k] + p - mulmod(lead, b[k], p)) % p;
      }
    }
    a.pop_back();
  }
  return a;
}

bool is_zero_poly(const Digits& a) {
  for (auto c : a)
    if (c != 0) return false;
  return true;
}

bool is_irreducible(const Digits& modulus, std::uint64_t p) {
  const std::size_t m = modulus.size() - 1;
  std::uint64_t work = 0;
  for (std::size_t k = 1; k <= m / 2; ++k) {
    const std::uint64_t count = static_cast<std::uint64_t>(std::pow(double(p), double(k)));
    work += count;
    if (work > kMaxIrreducibilityWork) {
      fail(ErrorCode::InvalidArgument,
           "modulus too large to certify irreducibility by trial division");
    }
    Digits divisor(k + 1, 0);
    divisor[k] = 1;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      std::uint64_t rest = idx;
      for (std::size_t j = 0; j < k; ++j) {
        divisor[j] = rest % p;
        rest /= p;
      }
      if (is_zero_poly(poly_rem(modulus, divisor, p))) return false;
    }
  }
  return true;
}

}  // namespace

bool is_prime(std::uint64_t n) noexcept {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

struct Field::Impl {
  std::uint64_t p = 0;
  unsigned m = 1;
  std::uint64_t q = 0;
  Digits modulus;

  Digits decode(Element a) const {
    Digits d(m);
    std::uint64_t v = a.value;
    for (unsigned i = 0; i < m; ++i) {
      d[i] = v % p;
      v /= p;
    }
    return d;
  }

  Element encode(const Digits& d) const {
    std::uint64_t v = 0;
    for (unsigned i = m; i-- > 0;) v = v * p + (i < d.size() ? d[i] : 0);
    return Element{v};
  }
};

Field Field::prime(std::uint64_t p) {
  if (p >= kMaxCharacteristic || !is_prime(p)) {
    std::ostringstream msg;
    msg << "characteristic " << p << " is not a prime below 2^31";
    fail(ErrorCode::InvalidArgument, msg.str());
  }
  auto impl = std::make_shared<Impl>();
  impl->p = p;
  impl->m = 1;
  impl->q = p;
  return Field(std::move(impl));
}

Field Field::extension(std::uint64_t p, std::vector<std::uint64_t> modulus) {
  if (modulus.size() <= 2) {
    if (modulus.empty()) return prime(p);
    if (modulus.size() == 2 && modulus[1] == 1) return prime(p);
    fail(ErrorCode::InvalidArgument, "extension modulus must be monic of degree >= 1");
  }
  Field base = prime(p);
  for (auto c : modulus) {
    if (c >= p) fail(ErrorCode::InvalidArgument, "modulus coefficient out of range");
  }
  if (modulus.back() != 1) fail(ErrorCode::InvalidArgument, "modulus must be monic");
  const unsigned m = static_cast<unsigned>(modulus.size() - 1);
  std::uint64_t q = 1;
  for (unsigned i = 0; i < m; ++i) {
    if (q > kMaxOrder / p) fail(ErrorCode::InvalidArgument, "field order exceeds 2^62");
    q *= p;
  }
  if (!is_irreducible(modulus, p)) {
    fail(ErrorCode::InvalidArgument, "modulus is reducible over F_" + std::to_string(p));
  }
  auto impl = std::make_shared<Impl>();
  impl->p = base.characteristic();
  impl->m = m;
  impl->q = q;
  impl->modulus = std::move(modulus);
  return Field(std::move(impl));
}

std::uint64_t Field::characteristic() const noexcept { return impl_->p; }
unsigned Field::degree() const noexcept { return impl_->m; }
std::uint64_t Field::order() const noexcept { return impl_->q; }
const std::vector<std::uint64_t>& Field::modulus() const noexcept { return impl_->modulus; }

std::string Field::describe() const {
  std::ostringstream os;
  os << "F_" << impl_->p;
  if (impl_->m > 1) os << "^" << impl_->m;
  return os.str();
}

bool Field::operator==(const Field& other) const noexcept {
  if (impl_ == other.impl_) return true;
  return impl_->p == other.impl_->p && impl_->m == other.impl_->m &&
         impl_->modulus == other.impl_->modulus;
}

Element Field::from_int(std::int64_t k) const noexcept {
  const auto p = static_cast<std::int64_t>(impl_->p);
  std::int64_t r = k % p;
  if (r < 0) r += p;
  return Element{static_cast<std::uint64_t>(r)};
}

Element Field::element(std::uint64_t encoded) const {
  if (encoded >= impl_->q) {
    std::ostringstream msg;
    msg << "value " << encoded << " is not an element of " << describe();
    fail(ErrorCode::InvalidArgument, msg.str());
  }
  return Element{encoded};
}

Element Field::from_coeffs(std::span<const std::uint64_t> coeffs) const {
  if (coeffs.size() > impl_->m) fail(ErrorCode::InvalidArgument, "too many coefficients");
  Digits d(coeffs.begin(), coeffs.end());
  for (auto& c : d) {
    if (c >= impl_->p) fail(ErrorCode::InvalidArgument, "coefficient out of range");
  }
  return impl_->encode(d);
}

std::vector<std::uint64_t> Field::coeffs(Element a) const { return impl_->decode(a); }

Element Field::add(Element a, Element b) const noexcept {
  const auto p = impl_->p;
  if (impl_->m == 1) {
    const std::uint64_t s = a.value + b.value;
    return Element{s >= p ? s - p : s};
  }
  std::uint64_t out = 0, scale = 1;
  std::uint64_t x = a.value, y = b.value;
  for (unsigned i = 0; i < impl_->m; ++i) {
    std::uint64_t s = x % p + y % p;
    if (s >= p) s -= p;
    out += s * scale;
    scale *= p;
    x /= p;
    y /= p;
  }
  return Element{out};
}

Element Field::neg(Element a) const noexcept {
  const auto p = impl_->p;
  if (impl_->m == 1) return Element{a.value == 0 ? 0 : p - a.value};
  std::uint64_t out = 0, scale = 1, x = a.value;
  for (unsigned i = 0; i < impl_->m; ++i) {
    const std::uint64_t c = x % p;
    out += (c == 0 ? 0 : p - c) * scale;
    scale *= p;
    x /= p;
  }
  return Element{out};
}

Element Field::sub(Element a, Element b) const noexcept { return add(a, neg(b)); }

Element Field::mul(Element a, Element b) const noexcept {
  const auto p = impl_->p;
  if (impl_->m == 1) return Element{mulmod(a.value, b.value, p)};
  const Digits x = impl_->decode(a);
  const Digits y = impl_->decode(b);
  Digits prod(2 * impl_->m - 1, 0);
  for (unsigned i = 0; i < impl_->m; ++i) {
    if (x[i] == 0) continue;
    for (unsigned j = 0; j < impl_->m; ++j) {
      prod[i + j] = (prod[i + j] + mulmod(x[i], y[j], p)) % p;
    }
  }
  return impl_->encode(poly_rem(std::move(prod), impl_->modulus, impl_->p));
}

Element Field::inv(Element a) const {
  if (a.value == 0) fail(ErrorCode::DivisionByZero, "inverse of zero");
  if (impl_->m == 1) return Element{invmod(a.value, impl_->p)};
  return pow(a, impl_->q - 2);
}

Element Field::div(Element a, Element b) const { return mul(a, inv(b)); }

Element Field::pow(Element a, std::uint64_t e) const noexcept {
  Element r = one();
  while (e > 0) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

std::uint64_t Field::trace(Element a) const noexcept {
  if (impl_->m == 1) return a.value;
  Element sum = zero();
  Element frob = a;
  for (unsigned i = 0; i < impl_->m; ++i) {
    sum = add(sum, frob);
    frob = pow(frob, impl_->p);
  }
  // Lands in the prime subfield, i.e. only the constant coefficient survives.
  return sum.value;
}

std::complex<double> Field::character(Element a) const noexcept {
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(trace(a)) /
                       static_cast<double>(impl_->p);
  return {std::cos(angle), std::sin(angle)};
}

bool Field::is_quadratic_residue(Element a) const {
  if (impl_->p == 2 || impl_->m != 1) {
    fail(ErrorCode::OddPrimeRequired, "quadratic residue test needs an odd prime field");
  }
  if (a.value == 0) return true;
  return powmod(a.value, (impl_->p - 1) / 2, impl_->p) == 1;
}

FieldElement::FieldElement(Field field, Element value)
    : field_(std::move(field)), value_(value) {
  if (!field_.contains(value_)) {
    fail(ErrorCode::InvalidArgument, "value is not an element of " + field_.describe());
  }
}

void FieldElement::check_same(const FieldElement& rhs) const {
  if (!(field_ == rhs.field_)) {
    fail(ErrorCode::MixedFields,
         "operands live in " + field_.describe() + " and " + rhs.field_.describe());
  }
}

FieldElement FieldElement::operator+(const FieldElement& rhs) const {
  check_same(rhs);
  return {field_, field_.add(value_, rhs.value_)};
}

FieldElement FieldElement::operator-(const FieldElement& rhs) const {
  check_same(rhs);
  return {field_, field_.sub(value_, rhs.value_)};
}

FieldElement FieldElement::operator*(const FieldElement& rhs) const {
  check_same(rhs);
  return {field_, field_.mul(value_, rhs.value_)};
}

FieldElement FieldElement::operator/(const FieldElement& rhs) const {
  check_same(rhs);
  return {field_, field_.div(value_, rhs.value_)};
}

FieldElement FieldElement::operator-() const { return {field_, field_.neg(value_)}; }
FieldElement FieldElement::inv() const { return {field_, field_.inv(value_)}; }
FieldElement FieldElement::pow(std::uint64_t e) const { return {field_, field_.pow(value_, e)}; }
FieldElement FieldElement::trace() const { return {field_, Element{field_.trace(value_)}}; }
std::complex<double> FieldElement::character() const { return field_.character(value_); }
bool FieldElement::is_quadratic_residue() const { return field_.is_quadratic_residue(value_); }

bool FieldElement::operator==(const FieldElement& rhs) const {
  return field_ == rhs.field_ && value_ == rhs.value_;
}

}  // namespace gtds
