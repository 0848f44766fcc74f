#include "gtds/cipher.hpp"

#include <sstream>

#include "gtds/domain.hpp"
#include "gtds/error.hpp"

namespace gtds {

namespace {

constexpr std::uint64_t kMaxKeyedSweep = std::uint64_t{1} << 16;

void check_width(std::size_t expected, std::size_t got, const char* what) {
  if (expected != got) {
    std::ostringstream msg;
    msg << what << " of width " << expected << " applied to a vector of length " << got;
    fail(ErrorCode::ArityMismatch, msg.str());
  }
}

const Field& stage_field(const Stage& stage) {
  return std::visit([](const auto& s) -> const Field& { return s.field(); }, stage);
}

}  // namespace

std::optional<Matrix> invert_matrix(const Field& field, const Matrix& A) {
  const std::size_t n = A.size();
  Matrix work = A;
  Matrix inv(n, Vec(n, field.zero()));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = field.one();

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && work[pivot][col].value == 0) ++pivot;
    if (pivot == n) return std::nullopt;
    std::swap(work[pivot], work[col]);
    std::swap(inv[pivot], inv[col]);
    const Element scale = field.inv(work[col][col]);
    for (std::size_t k = 0; k < n; ++k) {
      work[col][k] = field.mul(work[col][k], scale);
      inv[col][k] = field.mul(inv[col][k], scale);
    }
    for (std::size_t row = 0; row < n; ++row) {
      if (row == col || work[row][col].value == 0) continue;
      const Element factor = work[row][col];
      for (std::size_t k = 0; k < n; ++k) {
        work[row][k] = field.sub(work[row][k], field.mul(factor, work[col][k]));
        inv[row][k] = field.sub(inv[row][k], field.mul(factor, inv[col][k]));
      }
    }
  }
  return inv;
}

// ------------------------------------------------------------ AffineLayer

AffineLayer::AffineLayer(const Field& field, Matrix A, Vec b)
    : field_(field), A_(std::move(A)), b_(std::move(b)) {
  const std::size_t n = A_.size();
  if (n == 0) fail(ErrorCode::ArityMismatch, "affine layer needs a nonempty matrix");
  for (const auto& row : A_) {
    check_width(n, row.size(), "matrix row");
    for (auto v : row)
      if (!field_.contains(v)) fail(ErrorCode::InvalidArgument, "matrix entry outside the field");
  }
  check_width(n, b_.size(), "offset vector");
  for (auto v : b_)
    if (!field_.contains(v)) fail(ErrorCode::InvalidArgument, "offset entry outside the field");
  auto inv = invert_matrix(field_, A_);
  if (!inv) fail(ErrorCode::SingularMatrix, "mixing matrix is singular");
  A_inv_ = std::move(*inv);
}

AffineLayer AffineLayer::identity(const Field& field, std::size_t n) {
  Matrix A(n, Vec(n, field.zero()));
  for (std::size_t i = 0; i < n; ++i) A[i][i] = field.one();
  return AffineLayer(field, std::move(A), Vec(n, field.zero()));
}

AffineLayer AffineLayer::permutation(const Field& field, std::span<const std::size_t> source) {
  const std::size_t n = source.size();
  Matrix A(n, Vec(n, field.zero()));
  for (std::size_t i = 0; i < n; ++i) {
    if (source[i] >= n) fail(ErrorCode::ArityMismatch, "permutation index out of range");
    A[i][source[i]] = field.one();
  }
  return AffineLayer(field, std::move(A), Vec(n, field.zero()));
}

Vec AffineLayer::apply(std::span<const Element> x) const {
  check_width(width(), x.size(), "affine layer");
  Vec y = b_;
  for (std::size_t i = 0; i < y.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) y[i] = field_.add(y[i], field_.mul(A_[i][j], x[j]));
  return y;
}

Vec AffineLayer::invert(std::span<const Element> y) const {
  check_width(width(), y.size(), "affine layer");
  const std::size_t n = width();
  Vec shifted(n);
  for (std::size_t i = 0; i < n; ++i) shifted[i] = field_.sub(y[i], b_[i]);
  Vec x(n, field_.zero());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) x[i] = field_.add(x[i], field_.mul(A_inv_[i][j], shifted[j]));
  return x;
}

Vec AffineLayer::transpose_apply(std::span<const Element> a) const {
  check_width(width(), a.size(), "affine layer");
  const std::size_t n = width();
  Vec out(n, field_.zero());
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) out[j] = field_.add(out[j], field_.mul(A_[i][j], a[i]));
  return out;
}

Vec affine_apply(const AffineLayer& L, std::span<const Element> x) { return L.apply(x); }
Vec affine_invert(const AffineLayer& L, std::span<const Element> y) { return L.invert(y); }

Vec key_add(const Field& field, std::span<const Element> x, std::span<const Element> k) {
  check_width(x.size(), k.size(), "key addition");
  Vec y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = field.add(x[i], k[i]);
  return y;
}

// ----------------------------------------------------------------- stages

std::size_t stage_width(const Stage& stage) {
  return std::visit([](const auto& s) { return s.width(); }, stage);
}

Vec apply_stage(const Stage& stage, std::span<const Element> x) {
  if (const auto* g = std::get_if<Gtds>(&stage)) return g->eval(x);
  return std::get<AffineLayer>(stage).apply(x);
}

Vec invert_stage(const Stage& stage, std::span<const Element> y) {
  if (const auto* g = std::get_if<Gtds>(&stage)) return g->invert(y);
  return std::get<AffineLayer>(stage).invert(y);
}

Vec apply_pipeline(std::span<const Stage> stages, std::span<const Element> x) {
  Vec v(x.begin(), x.end());
  for (const auto& s : stages) v = apply_stage(s, v);
  return v;
}

Vec invert_pipeline(std::span<const Stage> stages, std::span<const Element> y) {
  Vec v(y.begin(), y.end());
  for (auto it = stages.rbegin(); it != stages.rend(); ++it) v = invert_stage(*it, v);
  return v;
}

// ----------------------------------------------------------------- rounds

Round::Round(std::vector<Stage> core_stages, AffineLayer mix_layer)
    : core(std::move(core_stages)), mix(std::move(mix_layer)) {
  if (core.empty()) fail(ErrorCode::InvalidArgument, "round pipeline must have at least one stage");
  for (const auto& s : core) {
    check_width(mix.width(), stage_width(s), "round stage");
    if (!(stage_field(s) == mix.field())) fail(ErrorCode::MixedFields, "round stages over different fields");
    if (const auto* g = std::get_if<Gtds>(&s); g && !g->validated()) {
      fail(ErrorCode::InvalidArgument, "round stages must be validated GTDS");
    }
  }
}

Vec round_apply(const Round& R, std::span<const Element> k, std::span<const Element> x) {
  return key_add(R.field(), R.mix.apply(apply_pipeline(R.core, x)), k);
}

Vec round_invert(const Round& R, std::span<const Element> k, std::span<const Element> y) {
  check_width(y.size(), k.size(), "key addition");
  Vec unkeyed(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) unkeyed[i] = R.field().sub(y[i], k[i]);
  return invert_pipeline(R.core, R.mix.invert(unkeyed));
}

// ----------------------------------------------------------------- cipher

Cipher::Cipher(const Field& field, std::size_t width, std::vector<Round> rounds)
    : field_(field), width_(width), rounds_(std::move(rounds)) {
  if (width_ == 0) fail(ErrorCode::InvalidArgument, "cipher width must be positive");
  for (const auto& R : rounds_) {
    check_width(width_, R.width(), "round");
    if (!(R.field() == field_)) fail(ErrorCode::MixedFields, "round over a different field");
  }
}

void Cipher::check_keys(const RoundKeys& K) const {
  if (K.columns.size() != rounds_.size() + 1) {
    std::ostringstream msg;
    msg << "expected " << rounds_.size() + 1 << " round keys, got " << K.columns.size();
    fail(ErrorCode::KeyShapeMismatch, msg.str());
  }
  for (std::size_t i = 0; i < K.columns.size(); ++i) {
    if (K.columns[i].size() != width_) {
      std::ostringstream msg;
      msg << "round key " << i << " has width " << K.columns[i].size() << ", expected " << width_;
      fail(ErrorCode::KeyShapeMismatch, msg.str());
    }
    for (auto v : K.columns[i])
      if (!field_.contains(v)) fail(ErrorCode::InvalidArgument, "key entry outside the field");
  }
}

Vec Cipher::encrypt(const RoundKeys& K, std::span<const Element> x) const {
  check_keys(K);
  check_width(width_, x.size(), "cipher");
  Vec v = key_add(field_, x, K.columns[0]);
  for (std::size_t i = 0; i < rounds_.size(); ++i) v = round_apply(rounds_[i], K.columns[i + 1], v);
  return v;
}

Vec Cipher::decrypt(const RoundKeys& K, std::span<const Element> y) const {
  check_keys(K);
  check_width(width_, y.size(), "cipher");
  Vec v(y.begin(), y.end());
  for (std::size_t i = rounds_.size(); i-- > 0;) v = round_invert(rounds_[i], K.columns[i + 1], v);
  for (std::size_t j = 0; j < width_; ++j) v[j] = field_.sub(v[j], K.columns[0][j]);
  return v;
}

RoundKeys Cipher::zero_keys() const {
  return RoundKeys{std::vector<Vec>(rounds_.size() + 1, Vec(width_, field_.zero()))};
}

RoundKeys Cipher::random_keys(std::mt19937_64& rng) const {
  std::uniform_int_distribution<std::uint64_t> dist(0, field_.order() - 1);
  RoundKeys K = zero_keys();
  for (auto& col : K.columns)
    for (auto& v : col) v = Element{dist(rng)};
  return K;
}

Vec cipher_encrypt(const Cipher& C, const RoundKeys& K, std::span<const Element> x) {
  return C.encrypt(K, x);
}

Vec cipher_decrypt(const Cipher& C, const RoundKeys& K, std::span<const Element> y) {
  return C.decrypt(K, y);
}

KeyedOrthogonalityReport keyed_orthogonality_check(const Cipher& C, std::size_t sample_keys,
                                                   std::uint64_t seed) {
  const Domain domain(C.field().order(), C.width(), kMaxKeyedSweep);
  std::mt19937_64 rng(seed);
  KeyedOrthogonalityReport report;
  for (std::size_t s = 0; s < sample_keys; ++s) {
    const RoundKeys K = C.random_keys(rng);
    const bool bijective =
        is_bijection(domain, [&](std::span<const Element> x) { return C.encrypt(K, x); });
    ++report.keys_tested;
    if (!bijective) report.failures.push_back(s);
  }
  return report;
}

}  // namespace gtds
