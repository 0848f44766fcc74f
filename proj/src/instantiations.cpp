#include "gtds/instantiations.hpp"

#include <numeric>
#include <sstream>

#include "gtds/domain.hpp"
#include "gtds/error.hpp"

namespace gtds {

namespace {

constexpr std::uint64_t kMaxEquivalenceSweep = std::uint64_t{1} << 16;

Branch identity_branch(const Field& field, std::size_t n) {
  return {UniPoly::identity(field), MultiPoly::constant(field, n, field.one()), MultiPoly(field, n)};
}

// Branch-wise univariate layer: p_i on branches where `apply[i]` holds.
Gtds univariate_layer(const Field& field, std::span<const UniPoly> p, const std::vector<bool>& apply) {
  const std::size_t n = p.size();
  std::vector<Branch> branches;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    Branch b = identity_branch(field, n);
    if (apply[i]) b.p = p[i];
    branches.push_back(std::move(b));
  }
  return Gtds::build(field, std::move(branches), apply[n - 1] ? p[n - 1] : UniPoly::identity(field));
}

void require_width(std::size_t n) {
  if (n == 0) fail(ErrorCode::InvalidArgument, "width must be positive");
}

}  // namespace

Round make_feistel_unbalanced(const UniPoly& f, std::size_t n) {
  if (n < 2) fail(ErrorCode::InvalidArgument, "unbalanced Feistel needs n > 1");
  const Field& field = f.field();
  std::vector<Branch> branches;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    branches.push_back({UniPoly::identity(field), MultiPoly::constant(field, n, field.one()),
                        MultiPoly::from_uni(f, n, n - 1)});
  }
  Gtds core = Gtds::build(field, std::move(branches), UniPoly::identity(field));
  std::vector<std::size_t> rotation(n);
  rotation[0] = n - 1;
  for (std::size_t i = 1; i < n; ++i) rotation[i] = i - 1;
  return Round({std::move(core)}, AffineLayer::permutation(field, rotation));
}

Round make_spn(const UniPoly& S, std::size_t n, const AffineLayer& mix) {
  std::set<std::size_t> all;
  for (std::size_t i = 0; i < n; ++i) all.insert(i);
  return make_partial_spn(S, n, all, mix);
}

Round make_partial_spn(const UniPoly& S, std::size_t n, const std::set<std::size_t>& active,
                       const AffineLayer& mix) {
  require_width(n);
  if (!is_permutation_polynomial(S)) fail(ErrorCode::NotAPermutation, "S-box is not a permutation polynomial");
  std::vector<bool> apply(n, false);
  for (auto i : active) {
    if (i >= n) fail(ErrorCode::ArityMismatch, "active branch index out of range");
    apply[i] = true;
  }
  const std::vector<UniPoly> p(n, S);
  return Round({univariate_layer(S.field(), p, apply)}, mix);
}

Vec lai_massey_2_direct(const UniPoly& g, std::span<const Element> xy) {
  if (xy.size() != 2) fail(ErrorCode::ArityMismatch, "two-branch Lai-Massey takes 2 elements");
  const Field& field = g.field();
  const Element t = g(field.sub(xy[0], xy[1]));
  return {field.add(xy[0], t), field.add(xy[1], t)};
}

std::vector<Stage> make_lai_massey_2(const UniPoly& g) {
  const Field& field = g.field();
  const Element minus_one = field.neg(field.one());
  const auto one = MultiPoly::constant(field, 2, field.one());
  const auto x2 = MultiPoly::variable(field, 2, 1);

  Gtds f1 = Gtds::build(field, {{UniPoly::identity(field), one, x2.scaled(minus_one)}},
                        UniPoly::identity(field));
  // F2 after swapping the branches: (a, b) -> (a + g(b), b).
  Gtds f2 = Gtds::build(field, {{UniPoly::identity(field), one, MultiPoly::from_uni(g, 2, 1)}},
                        UniPoly::identity(field));
  Gtds f3 = Gtds::build(field, {{UniPoly::identity(field), one, x2}}, UniPoly::identity(field));

  const std::array<std::size_t, 2> swap{1, 0};
  const auto swap_layer = AffineLayer::permutation(field, swap);
  return {std::move(f1), swap_layer, std::move(f2), swap_layer, std::move(f3)};
}

GeneralizedLaiMassey::GeneralizedLaiMassey(LaiMasseyParams params) : params_(std::move(params)) {
  const Field& field = params_.field;
  const std::size_t n = params_.weights.size();
  if (n < 2) fail(ErrorCode::BadM, "generalized Lai-Massey needs n >= 2");
  if (params_.p.size() != n) fail(ErrorCode::ArityMismatch, "need one permutation polynomial per branch");

  Element sum = field.zero();
  for (std::size_t i = 0; i < n; ++i) {
    if (!field.contains(params_.weights[i])) fail(ErrorCode::InvalidArgument, "weight outside the field");
    sum = field.add(sum, params_.weights[i]);
    if (params_.weights[i].value != 0) m_ = i + 1;
  }
  if (sum.value != 0) fail(ErrorCode::WeightSumNonzero, "weights must sum to zero");
  if (m_ < 2) fail(ErrorCode::BadM, "need at least two nonzero weights");
  for (std::size_t i = 0; i < n; ++i) {
    if (!is_permutation_polynomial(params_.p[i])) {
      fail(ErrorCode::NotAPermutation, "NotAPermutation(" + std::to_string(i + 1) + ")");
    }
  }
  if (params_.g.nvars() != 1 + n - m_) {
    std::ostringstream msg;
    msg << "g must have " << 1 + n - m_ << " variables (sum slot plus x_" << m_ + 1 << "..x_" << n << ")";
    fail(ErrorCode::ArityMismatch, msg.str());
  }

  const std::size_t m = m_;  // 1-based; branch m is index m - 1
  const auto& w = params_.weights;

  std::vector<bool> first(n, false), rest(n, false);
  for (std::size_t i = 0; i < n; ++i) (i < m ? first : rest)[i] = true;
  pipeline.emplace_back(univariate_layer(field, params_.p, first));

  // F2: scale by the weights and collect the weighted sum in branch m.
  Matrix A2(n, Vec(n, field.zero()));
  for (std::size_t i = 0; i < n; ++i) {
    if (i + 1 < m) {
      A2[i][i] = w[i].value != 0 ? w[i] : field.one();
    } else if (i + 1 == m) {
      for (std::size_t j = 0; j < m; ++j) A2[i][j] = w[j];
    } else {
      A2[i][i] = field.one();
    }
  }
  pipeline.emplace_back(AffineLayer(field, std::move(A2), Vec(n, field.zero())));

  // F3: add (omega_i *) g(x_m, x_{m+1..n}) to the first m - 1 branches.
  std::vector<std::size_t> slots(1 + n - m);
  std::iota(slots.begin(), slots.end(), m - 1);
  const MultiPoly g_full = params_.g.remapped(n, slots);
  std::vector<Branch> branches;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    Branch b = identity_branch(field, n);
    if (i + 1 < m) b.h = w[i].value != 0 ? g_full.scaled(w[i]) : g_full;
    branches.push_back(std::move(b));
  }
  pipeline.emplace_back(Gtds::build(field, std::move(branches), UniPoly::identity(field)));

  // F4: undo the weights and recover branch m.
  Matrix A4(n, Vec(n, field.zero()));
  const Element wm_inv = field.inv(w[m - 1]);
  for (std::size_t i = 0; i < n; ++i) {
    if (i + 1 < m) {
      A4[i][i] = w[i].value != 0 ? field.inv(w[i]) : field.one();
    } else if (i + 1 == m) {
      A4[i][i] = wm_inv;
      for (std::size_t j = 0; j + 1 < m; ++j) {
        if (w[j].value != 0) A4[i][j] = field.neg(wm_inv);
      }
    } else {
      A4[i][i] = field.one();
    }
  }
  pipeline.emplace_back(AffineLayer(field, std::move(A4), Vec(n, field.zero())));

  pipeline.emplace_back(univariate_layer(field, params_.p, rest));
}

Vec GeneralizedLaiMassey::direct(std::span<const Element> x) const {
  const std::size_t n = width();
  if (x.size() != n) fail(ErrorCode::ArityMismatch, "generalized Lai-Massey input has wrong width");
  const Field& field = params_.field;
  Vec y(n);
  Element s = field.zero();
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = params_.p[i](x[i]);
    if (i < m_) s = field.add(s, field.mul(params_.weights[i], y[i]));
  }
  Vec args(1 + n - m_);
  args[0] = s;
  for (std::size_t k = m_; k < n; ++k) args[1 + k - m_] = x[k];
  const Element t = params_.g(args);
  for (std::size_t i = 0; i < m_; ++i) y[i] = field.add(y[i], t);
  return y;
}

GeneralizedLaiMassey make_generalized_lai_massey(LaiMasseyParams params) {
  return GeneralizedLaiMassey(std::move(params));
}

std::uint64_t count_pipeline_mismatches(const Field& field, std::size_t n,
                                        const std::function<Vec(std::span<const Element>)>& direct,
                                        std::span<const Stage> stages) {
  const Domain domain(field.order(), n, kMaxEquivalenceSweep);
  std::uint64_t mismatches = 0;
  Vec x(n);
  for (std::uint64_t idx = 0; idx < domain.size(); ++idx) {
    domain.decode(idx, x);
    if (direct(x) != apply_pipeline(stages, x)) ++mismatches;
  }
  return mismatches;
}

bool lai_massey_equivalence_check(const GeneralizedLaiMassey& glm) {
  return count_pipeline_mismatches(
             glm.params().field, glm.width(),
             [&glm](std::span<const Element> x) { return glm.direct(x); }, glm.pipeline) == 0;
}

Gtds make_horst(const Field& field, std::vector<MultiPoly> g_list, std::vector<MultiPoly> h_list) {
  if (g_list.size() != h_list.size()) fail(ErrorCode::ArityMismatch, "need as many h_i as g_i");
  std::vector<Branch> branches;
  for (std::size_t i = 0; i < g_list.size(); ++i) {
    branches.push_back({UniPoly::identity(field), std::move(g_list[i]), std::move(h_list[i])});
  }
  return Gtds::build(field, std::move(branches), UniPoly::identity(field));
}

BricksMap make_bricks(const Field& field, std::uint64_t d, std::array<Element, 2> alphas,
                      std::array<Element, 2> betas) {
  if (!field.is_prime_field() || field.characteristic() == 2) {
    fail(ErrorCode::OddPrimeRequired, "Bricks is defined over odd prime fields");
  }
  const std::uint64_t p = field.characteristic();
  if (d == 0 || gcd_u64(d, p - 1) != 1) {
    fail(ErrorCode::BadExponent, "gcd(d, p - 1) must be 1");
  }
  for (std::size_t i = 0; i < 2; ++i) {
    const Element disc = field.sub(field.mul(alphas[i], alphas[i]), field.mul(field.from_int(4), betas[i]));
    if (field.is_quadratic_residue(disc)) {
      fail(ErrorCode::DiscriminantResidue,
           "alpha_" + std::to_string(i + 1) + "^2 - 4 beta_" + std::to_string(i + 1) +
               " is a quadratic residue");
    }
  }
  auto quadratic = [&](std::size_t var, Element a, Element b) {
    MultiPoly q(field, 3);
    MultiPoly::Exponents e(3, 0);
    e[var] = 2;
    q.add_term(e, field.one());
    e[var] = 1;
    q.add_term(e, a);
    q.add_term({0, 0, 0}, b);
    return q;
  };
  // Reversed coordinates y = (x3, x2, x1).
  std::vector<Branch> branches;
  branches.push_back({UniPoly::identity(field), quadratic(1, alphas[1], betas[1]), MultiPoly(field, 3)});
  branches.push_back({UniPoly::identity(field), quadratic(2, alphas[0], betas[0]), MultiPoly(field, 3)});
  Gtds core = Gtds::build(field, std::move(branches), UniPoly::monomial(field, d, field.one()));

  const std::array<std::size_t, 3> reverse{2, 1, 0};
  const auto flip = AffineLayer::permutation(field, reverse);
  BricksMap out{core, {}};
  out.pipeline = {flip, std::move(core), flip};
  return out;
}

namespace {

void check_arion(const Field& field, const ArionParams& params, std::size_t n) {
  if (!field.is_prime_field()) fail(ErrorCode::InvalidArgument, "Arion is defined over prime fields");
  if (n < 2 || params.g_list.size() + 1 != n || params.h_list.size() + 1 != n) {
    fail(ErrorCode::ArityMismatch, "Arion of width n needs n - 1 polynomials g_i and h_i");
  }
  const std::uint64_t p = field.characteristic();
  if (params.d1 < 2 || gcd_u64(params.d1, p - 1) != 1) {
    fail(ErrorCode::BadExponent, "gcd(d1, p - 1) must be 1 with d1 > 1");
  }
  if (params.e < 2 || params.d2 == 0 ||
      static_cast<unsigned __int128>(params.e) * params.d2 % (p - 1) != 1 % (p - 1)) {
    fail(ErrorCode::BadExponent, "e * d2 must be 1 modulo p - 1 with e > 1");
  }
  for (std::size_t i = 0; i < params.g_list.size(); ++i) {
    if (!has_no_zeros(MultiPoly::from_uni(params.g_list[i], 1, 0)).zero_free) {
      fail(ErrorCode::GiHasZero, "GiHasZero(" + std::to_string(i + 1) + ")");
    }
  }
}

}  // namespace

Gtds make_arion_gtds(const Field& field, const ArionParams& params, std::size_t n) {
  check_arion(field, params, n);
  const UniPoly last = UniPoly::monomial(field, params.e, field.one());
  // sigma accumulates sum_{j > i} (x_j + f_j) as a polynomial in all n variables.
  MultiPoly sigma = MultiPoly::variable(field, n, n - 1) + MultiPoly::from_uni(reduce_mod(last), n, n - 1);
  std::vector<Branch> branches(n - 1, identity_branch(field, n));
  const UniPoly p = UniPoly::monomial(field, params.d1, field.one());
  for (std::size_t i = n - 1; i-- > 0;) {
    MultiPoly g = compose(params.g_list[i], sigma);
    MultiPoly h = compose(params.h_list[i], sigma);
    const MultiPoly f = reduce_mod(MultiPoly::from_uni(p, n, i)) * g + h;
    sigma = sigma + MultiPoly::variable(field, n, i) + f;
    branches[i] = {p, std::move(g), std::move(h)};
  }
  return Gtds::build(field, std::move(branches), last);
}

Vec arion_direct(const Field& field, const ArionParams& params, std::span<const Element> x) {
  const std::size_t n = x.size();
  check_arion(field, params, n);
  Vec y(n);
  y[n - 1] = field.pow(x[n - 1], params.e);
  Element sigma = field.add(x[n - 1], y[n - 1]);
  for (std::size_t i = n - 1; i-- > 0;) {
    y[i] = field.add(field.mul(field.pow(x[i], params.d1), params.g_list[i](sigma)),
                     params.h_list[i](sigma));
    sigma = field.add(sigma, field.add(x[i], y[i]));
  }
  return y;
}

}  // namespace gtds
