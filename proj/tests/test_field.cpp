#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gtds/error.hpp"
#include "gtds/field.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using gtds::Element;
using gtds::ErrorCode;
using gtds::Field;
using gtds::FieldElement;

using testutil::code_of;
using testutil::E;

TEST_CASE("prime field arithmetic") {
  const Field F5 = Field::prime(5);
  CHECK(F5.add(E(3), E(4)) == E(2));
  CHECK(F5.mul(E(2), E(4)) == E(3));
  CHECK(F5.sub(E(1), E(3)) == E(3));
  CHECK(F5.neg(E(0)) == E(0));
  CHECK(F5.inv(E(1)) == E(1));
  CHECK(code_of([&] { F5.inv(E(0)); }) == ErrorCode::DivisionByZero);
  CHECK(F5.pow(E(2), 3) == F5.inv(E(2)));
  CHECK(F5.pow(E(2), 3) == E(3));

  const Field F7 = Field::prime(7);
  CHECK(F7.inv(E(3)) == E(5));
  CHECK(F7.pow(E(3), 5) == E(5));
  for (std::uint64_t a = 0; a < 7; ++a) CHECK(F7.pow(E(a), 0) == E(1));
  CHECK(F7.from_int(-1) == E(6));
}

TEST_CASE("prime field rejects composite or oversized characteristic") {
  CHECK(code_of([] { Field::prime(6); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { Field::prime(1); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { Field::prime(5).element(5); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("F_8 with x^3 + x + 1") {
  const Field F8 = Field::extension(2, {1, 1, 0, 1});
  CHECK(F8.order() == 8);
  // x = 0b010, x^2 = 0b100, x + 1 = 0b011
  CHECK(F8.mul(E(2), E(4)) == E(3));
  CHECK(F8.coeffs(E(3)) == std::vector<std::uint64_t>{1, 1, 0});
}

TEST_CASE("extension arithmetic matches the schoolbook oracle") {
  const std::vector<Field> fields{Field::extension(2, {1, 1, 0, 1}), Field::extension(5, {2, 0, 1}),
                                  Field::extension(7, {1, 0, 1}), Field::extension(3, {1, 2, 0, 1}),
                                  Field::extension(2, {1, 1, 1})};
  for (const Field& F : fields) {
    const auto K = oracle::naive_of(F);
    CAPTURE(F.describe());
    for (std::uint64_t a = 0; a < F.order(); ++a) {
      for (std::uint64_t b = 0; b < F.order(); ++b) {
        REQUIRE(F.mul(E(a), E(b)).value == K.mul(a, b));
        REQUIRE(F.add(E(a), E(b)).value == K.add(a, b));
        REQUIRE(F.sub(E(a), E(b)).value == K.sub(a, b));
      }
      if (a != 0) REQUIRE(F.inv(E(a)).value == K.inv(a));
      REQUIRE(F.trace(E(a)) == K.trace(a));
      REQUIRE(F.pow(E(a), 5).value == K.pow(a, 5));
    }
  }
}

TEST_CASE("reducible modulus is rejected") {
  // x^2 + 1 = (x + 2)(x + 3) over F_5
  CHECK(code_of([] { Field::extension(5, {1, 0, 1}); }) == ErrorCode::InvalidArgument);
  // x^2 + 2 is irreducible over F_5
  CHECK_NOTHROW(Field::extension(5, {2, 0, 1}));
}

TEST_CASE("trace") {
  CHECK(Field::prime(7).trace(E(4)) == 4);
  const Field F4 = Field::extension(2, {1, 1, 1});
  CHECK(F4.trace(E(2)) == 1);  // x + x^2 = 1
  CHECK(F4.trace(E(0)) == 0);
  // additivity and balance: each value of F_p is hit q/p times
  const Field F25 = Field::extension(5, {2, 0, 1});
  std::vector<int> hits(5, 0);
  for (std::uint64_t a = 0; a < 25; ++a) {
    ++hits[F25.trace(E(a))];
    for (std::uint64_t b = 0; b < 25; ++b)
      CHECK(F25.trace(F25.add(E(a), E(b))) == (F25.trace(E(a)) + F25.trace(E(b))) % 5);
  }
  for (int h : hits) CHECK(h == 5);
}

TEST_CASE("additive character") {
  const Field F5 = Field::prime(5);
  CHECK(std::abs(F5.character(E(0)) - std::complex<double>(1, 0)) < 1e-12);
  CHECK(std::abs(F5.character(E(1)) - std::polar(1.0, 2 * std::numbers::pi / 5)) < 1e-12);
  for (const Field& F : {Field::prime(7), Field::extension(2, {1, 1, 0, 1}), Field::extension(5, {2, 0, 1})}) {
    std::complex<double> sum = 0;
    for (std::uint64_t a = 0; a < F.order(); ++a) sum += F.character(E(a));
    CHECK(std::abs(sum) < 1e-9);
  }
}

TEST_CASE("quadratic residues") {
  const Field F5 = Field::prime(5), F7 = Field::prime(7);
  CHECK(F5.is_quadratic_residue(E(4)));
  CHECK_FALSE(F5.is_quadratic_residue(E(3)));
  CHECK(F7.is_quadratic_residue(E(2)));
  for (std::uint64_t a = 0; a < 7; ++a) {
    bool square = false;
    for (std::uint64_t b = 0; b < 7; ++b) square = square || (b * b) % 7 == a;
    CHECK(F7.is_quadratic_residue(E(a)) == square);
  }
  CHECK(code_of([] { Field::prime(2).is_quadratic_residue(E(1)); }) == ErrorCode::OddPrimeRequired);
}

TEST_CASE("FieldElement refuses to mix fields") {
  const FieldElement a(Field::prime(5), 3), b(Field::prime(7), 3);
  CHECK(code_of([&] { (void)(a + b); }) == ErrorCode::MixedFields);
  const FieldElement c(Field::prime(5), 4);
  CHECK((a + c).value() == E(2));
  CHECK((a * c).value() == E(2));
  CHECK((a / c).value() == E(2));  // 3 * 4^-1 = 3 * 4 = 12 = 2
  CHECK((-a).value() == E(2));
  CHECK(a.inv().value() == E(2));
  CHECK(a.pow(4).value() == E(1));
}
