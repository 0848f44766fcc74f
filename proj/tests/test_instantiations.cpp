#include <doctest.h>

#include <array>

#include "gtds/instantiations.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace gtds;
using testutil::code_of;
using testutil::E;
using testutil::mono;
using testutil::uni;
using testutil::V;

namespace {

Vec round_once(const Round& R, const Vec& x) { return round_apply(R, Vec(x.size(), R.field().zero()), x); }

bool bijective(const Field& F, std::size_t n, auto map) {
  return oracle::is_bijection(F.order(), n, oracle::wrap(map));
}

}  // namespace

TEST_CASE("unbalanced Feistel") {
  const Field F5 = Field::prime(5);
  const Round R = make_feistel_unbalanced(mono(F5, 2), 3);
  CHECK(round_once(R, V({1, 2, 3})) == V({3, 0, 1}));

  const Round rot = make_feistel_unbalanced(UniPoly(F5), 3);
  CHECK(round_once(rot, V({1, 2, 3})) == V({3, 1, 2}));

  // n = 2: (x1, x2) -> (x2, x1 + f(x2))
  const UniPoly f = uni(F5, {{3, 2}, {0, 1}});
  const Round two = make_feistel_unbalanced(f, 2);
  for (const auto& p : oracle::all_points(5, 2)) {
    const Vec x = oracle::to_vec(p);
    CHECK(round_once(two, x) == Vec{x[1], F5.add(x[0], f(x[1]))});
  }
  CHECK(code_of([&] { make_feistel_unbalanced(f, 1); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("SPN") {
  const Field F5 = Field::prime(5);
  const AffineLayer mix(F5, {V({1, 1}), V({0, 1})}, V({0, 0}));
  const Round R = make_spn(mono(F5, 3), 2, mix);
  CHECK(round_once(R, V({2, 3})) == V({0, 2}));

  // S = x gives the mixing layer itself
  const Round lin = make_spn(UniPoly::identity(F5), 2, mix);
  for (const auto& p : oracle::all_points(5, 2)) {
    const Vec x = oracle::to_vec(p);
    CHECK(round_once(lin, x) == mix.apply(x));
  }

  const Field F7 = Field::prime(7);
  const Round R7 = make_spn(mono(F7, 5), 2, AffineLayer(F7, {V({2, 1}), V({1, 1})}, V({3, 0})));
  CHECK(bijective(F7, 2, [&](const Vec& x) { return round_once(R7, x); }));
  CHECK(code_of([&] { make_spn(mono(F7, 3), 2, AffineLayer::identity(F7, 2)); }) == ErrorCode::NotAPermutation);
}

TEST_CASE("partial SPN") {
  const Field F11 = Field::prime(11);
  const AffineLayer I = AffineLayer::identity(F11, 3);
  const UniPoly S = mono(F11, 3);
  const Round all = make_partial_spn(S, 3, {0, 1, 2}, I);
  const Round spn = make_spn(S, 3, I);
  const Round none = make_partial_spn(S, 3, {}, I);
  const Round first = make_partial_spn(S, 3, {0}, I);
  for (const auto& p : oracle::all_points(11, 3)) {
    const Vec x = oracle::to_vec(p);
    REQUIRE(round_once(all, x) == round_once(spn, x));
    REQUIRE(round_once(none, x) == x);
    REQUIRE(round_once(first, x) == Vec{S(x[0]), x[1], x[2]});
  }
  CHECK(code_of([&] { make_partial_spn(S, 3, {3}, I); }) == ErrorCode::ArityMismatch);
}

TEST_CASE("two-branch Lai-Massey") {
  const Field F5 = Field::prime(5);
  const auto sq = mono(F5, 2);
  CHECK(lai_massey_2_direct(sq, V({3, 1})) == V({2, 0}));
  CHECK(apply_pipeline(make_lai_massey_2(sq), V({3, 1})) == V({2, 0}));

  const auto zero_stages = make_lai_massey_2(UniPoly(F5));
  for (const auto& p : oracle::all_points(5, 2)) {
    const Vec x = oracle::to_vec(p);
    CHECK(apply_pipeline(zero_stages, x) == x);
  }

  const Field F7 = Field::prime(7);
  const UniPoly g = uni(F7, {{3, 1}, {2, 4}, {0, 2}});
  const auto stages = make_lai_massey_2(g);
  CHECK(stages.size() == 5);
  CHECK(count_pipeline_mismatches(
            F7, 2, [&](std::span<const Element> x) { return lai_massey_2_direct(g, x); }, stages) == 0);
}

TEST_CASE("generalized Lai-Massey") {
  const Field F5 = Field::prime(5);
  const std::vector<UniPoly> p{mono(F5, 3), uni(F5, {{1, 2}, {0, 1}}), mono(F5, 3), uni(F5, {{3, 1}, {0, 4}})};
  // m = 3, so g takes the sum slot and x_4.
  MultiPoly g(F5, 2);
  g.add_term({2, 0}, E(1));
  g.add_term({1, 1}, E(3));
  g.add_term({0, 2}, E(2));
  const GeneralizedLaiMassey glm({F5, V({1, 1, 3, 0}), p, g});
  CHECK(glm.m() == 3);
  CHECK(glm.pipeline.size() == 5);
  CHECK(lai_massey_equivalence_check(glm));
  CHECK(bijective(F5, 4, [&](const Vec& x) { return glm.direct(x); }));

  // g = 0 is componentwise p_i
  const GeneralizedLaiMassey plain({F5, V({1, 1, 3, 0}), p, MultiPoly(F5, 2)});
  for (const auto& pt : oracle::all_points(5, 4)) {
    const Vec x = oracle::to_vec(pt);
    CHECK(plain.direct(x) == Vec{p[0](x[0]), p[1](x[1]), p[2](x[2]), p[3](x[3])});
  }

  // n = 2, omega = (1, -1), p_i = x is the classical scheme
  const Field F7 = Field::prime(7);
  const UniPoly h = uni(F7, {{2, 3}, {1, 1}});
  const GeneralizedLaiMassey classic(
      {F7, V({1, 6}), {UniPoly::identity(F7), UniPoly::identity(F7)}, MultiPoly::from_uni(h, 1, 0)});
  for (const auto& pt : oracle::all_points(7, 2)) {
    const Vec x = oracle::to_vec(pt);
    CHECK(classic.direct(x) == lai_massey_2_direct(h, x));
  }
  CHECK(lai_massey_equivalence_check(classic));

  CHECK(code_of([&] { GeneralizedLaiMassey({F5, V({1, 1, 1, 0}), p, g}); }) == ErrorCode::WeightSumNonzero);
  CHECK(code_of([&] { GeneralizedLaiMassey({F5, V({0, 0, 0, 0}), p, g}); }) == ErrorCode::BadM);
  CHECK(code_of([&] { GeneralizedLaiMassey({F5, V({1, 1, 3, 0}), p, MultiPoly(F5, 3)}); }) ==
        ErrorCode::ArityMismatch);
}

TEST_CASE("a corrupted Lai-Massey stage is detected") {
  const Field F5 = Field::prime(5);
  const std::vector<UniPoly> p(4, mono(F5, 3));
  MultiPoly g(F5, 2);
  g.add_term({2, 0}, E(1));
  g.add_term({0, 1}, E(1));
  GeneralizedLaiMassey glm({F5, V({1, 1, 3, 0}), p, g});
  // Replace F2 with a different invertible matrix.
  Matrix A(4, Vec(4, F5.zero()));
  for (std::size_t i = 0; i < 4; ++i) A[i][i] = F5.one();
  A[2][0] = E(2);
  glm.pipeline[1] = AffineLayer(F5, A, Vec(4, F5.zero()));
  CHECK_FALSE(lai_massey_equivalence_check(glm));
}

TEST_CASE("Horst") {
  const Field F5 = Field::prime(5);
  MultiPoly g = testutil::in_var(uni(F5, {{2, 1}, {0, 3}}), 2, 1);
  MultiPoly h = testutil::in_var(mono(F5, 3), 2, 1);
  const Gtds H = make_horst(F5, {g}, {h});
  CHECK(is_orthogonal_exhaustive(H));
  for (const auto& pt : oracle::all_points(5, 2)) {
    const Vec x = oracle::to_vec(pt);
    CHECK(H.eval(x) == Vec{F5.add(F5.mul(x[0], g(x)), h(x)), x[1]});
  }

  const Gtds id = make_horst(F5, {MultiPoly::constant(F5, 3, F5.one()), MultiPoly::constant(F5, 3, F5.one())},
                             {MultiPoly(F5, 3), MultiPoly(F5, 3)});
  for (const auto& pt : oracle::all_points(5, 3)) CHECK(id.eval(oracle::to_vec(pt)) == oracle::to_vec(pt));

  // g = 1: unbalanced Feistel-type f_i = x_i + h_i
  const Gtds feistel = make_horst(F5, {MultiPoly::constant(F5, 2, F5.one())}, {h});
  for (const auto& pt : oracle::all_points(5, 2)) {
    const Vec x = oracle::to_vec(pt);
    CHECK(feistel.eval(x) == Vec{F5.add(x[0], h(x)), x[1]});
  }
  CHECK(code_of([&] { make_horst(F5, {MultiPoly::variable(F5, 2, 1)}, {h}); }) == ErrorCode::GiHasZero);
}

TEST_CASE("Bricks") {
  const Field F7 = Field::prime(7);
  const BricksMap B = make_bricks(F7, 5, {E(0), E(1)}, {E(1), E(3)});
  // x1^5, x2 (x1^2 + 1), x3 (x2^2 + x2 + 3)
  for (const auto& pt : oracle::all_points(7, 3)) {
    const Vec x = oracle::to_vec(pt);
    const Vec y = B.eval(x);
    REQUIRE(y[0] == F7.pow(x[0], 5));
    REQUIRE(y[1] == F7.mul(x[1], F7.add(F7.mul(x[0], x[0]), E(1))));
    REQUIRE(y[2] == F7.mul(x[2], F7.add(F7.add(F7.mul(x[1], x[1]), x[1]), E(3))));
    REQUIRE(B.invert(y) == x);
  }
  CHECK(bijective(F7, 3, [&](const Vec& x) { return B.eval(x); }));

  CHECK(code_of([&] { make_bricks(F7, 3, {E(0), E(0)}, {E(1), E(1)}); }) == ErrorCode::BadExponent);
  // alpha^2 - 4 beta = 0 - 4 * 6 = 4, a square
  CHECK(code_of([&] { make_bricks(F7, 5, {E(0), E(0)}, {E(6), E(1)}); }) == ErrorCode::DiscriminantResidue);
  CHECK(code_of([&] { make_bricks(Field::extension(2, {1, 1, 1}), 5, {E(0), E(0)}, {E(1), E(1)}); }) ==
        ErrorCode::OddPrimeRequired);
}

TEST_CASE("Arion-style system") {
  const Field F11 = Field::prime(11);
  // d1 = 3, d2 = 7, e = 3 (3 * 7 = 21 = 1 mod 10); x^2 + 1 has no roots mod 11
  const UniPoly g = uni(F11, {{2, 1}, {1, 0}, {0, 1}});
  const UniPoly g2 = uni(F11, {{2, 1}, {1, 3}, {0, 5}});  // disc 9 - 20 = -11 = 0: has a root
  const UniPoly g3 = uni(F11, {{2, 1}, {1, 1}, {0, 3}});  // disc 1 - 12 = -11 = 0 again
  const UniPoly g4 = uni(F11, {{2, 2}, {1, 1}, {0, 4}});  // disc 1 - 32 = -31 = 2, non-residue
  const UniPoly h = uni(F11, {{2, 1}, {1, 5}});
  for (std::size_t n : {2u, 3u}) {
    ArionParams params{3, 7, 3, std::vector<UniPoly>(n - 1, g), std::vector<UniPoly>(n - 1, h)};
    if (n == 3) params.g_list[1] = g4;
    const Gtds A = make_arion_gtds(F11, params, n);
    for (const auto& pt : oracle::all_points(11, n)) {
      const Vec x = oracle::to_vec(pt);
      REQUIRE(A.eval(x) == arion_direct(F11, params, x));
    }
    CHECK(bijective(F11, n, [&](const Vec& x) { return A.eval(x); }));
  }
  CHECK(code_of([&] { make_arion_gtds(F11, {3, 7, 3, {g2}, {h}}, 2); }) == ErrorCode::GiHasZero);
  CHECK(code_of([&] { make_arion_gtds(F11, {3, 7, 3, {g3}, {h}}, 2); }) == ErrorCode::GiHasZero);
  CHECK(code_of([&] { make_arion_gtds(F11, {5, 7, 3, {g}, {h}}, 2); }) == ErrorCode::BadExponent);
  CHECK(code_of([&] { make_arion_gtds(F11, {3, 7, 7, {g}, {h}}, 2); }) == ErrorCode::BadExponent);
}

TEST_CASE("Arion exponent menu satisfies the congruences at a large prime") {
  // p = 2^64 - 59 is too large for a field here; check the exponent algebra only.
  // d2 must be coprime to p - 1 for e to exist.
  const std::uint64_t p = 18446744073709551557ull;
  for (std::uint64_t d2 : {121u, 123u, 125u, 129u, 161u, 257u}) {
    const auto e = inverse_mod(d2, p - 1);
    if (!e) continue;
    CHECK(static_cast<unsigned __int128>(*e) * d2 % (p - 1) == 1);
  }
}

TEST_CASE("Lai-Massey invariants") {
  const Field F7 = Field::prime(7);
  const UniPoly g = uni(F7, {{3, 1}, {2, 4}, {0, 2}});
  for (const auto& pt : oracle::all_points(7, 2)) {
    const Vec x = oracle::to_vec(pt);
    const Vec y = lai_massey_2_direct(g, x);
    REQUIRE(F7.sub(y[0], y[1]) == F7.sub(x[0], x[1]));
  }

  const Field F5 = Field::prime(5);
  const Vec w = V({1, 1, 3, 0});
  const std::vector<UniPoly> p{mono(F5, 3), uni(F5, {{1, 2}, {0, 1}}), mono(F5, 3), uni(F5, {{3, 1}, {0, 4}})};
  MultiPoly h(F5, 2);
  h.add_term({2, 1}, E(2));
  h.add_term({0, 0}, E(1));
  const GeneralizedLaiMassey glm({F5, w, p, h});
  for (const auto& pt : oracle::all_points(5, 4)) {
    const Vec x = oracle::to_vec(pt);
    const Vec y = glm.direct(x);
    Element lhs = F5.zero(), rhs = F5.zero();
    for (std::size_t i = 0; i < 3; ++i) {
      lhs = F5.add(lhs, F5.mul(w[i], y[i]));
      rhs = F5.add(rhs, F5.mul(w[i], p[i](x[i])));
    }
    REQUIRE(lhs == rhs);
  }
}

TEST_CASE("Bricks multipliers never vanish") {
  const Field F7 = Field::prime(7);
  const std::array<Element, 2> alphas{E(0), E(1)}, betas{E(1), E(3)};
  for (std::uint64_t x = 0; x < 7; ++x)
    for (std::size_t i = 0; i < 2; ++i) {
      const Element v = F7.add(F7.add(F7.mul(E(x), E(x)), F7.mul(alphas[i], E(x))), betas[i]);
      CHECK(v != F7.zero());
    }
  CHECK_NOTHROW(make_bricks(F7, 5, alphas, betas));
}
