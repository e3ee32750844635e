#include "doctest.h"

#include "normdyn/configuration.hpp"
#include "normdyn/errors.hpp"

using namespace normdyn;

TEST_CASE("bitstrings read vertex 0 leftmost with 1 meaning A") {
  const Configuration x = Configuration::from_bitstring("0110");
  CHECK(x.size() == 4);
  CHECK(x.at(0) == Strategy::B);
  CHECK(x.at(1) == Strategy::A);
  CHECK(x.at(2) == Strategy::A);
  CHECK(x.at(3) == Strategy::B);
  CHECK(x.count_a() == 2);
  CHECK(x.to_bitstring() == "0110");
}

TEST_CASE("packed index puts vertex 0 in the least significant bit") {
  CHECK(Configuration::from_bitstring("10").to_index() == 1);
  CHECK(Configuration::from_bitstring("01").to_index() == 2);
  CHECK(Configuration::from_index(5, 4).to_bitstring() == "1010");
  CHECK(Configuration::from_index(0, 3).to_bitstring() == "000");
}

TEST_CASE("index round-trips exhaustively on four vertices") {
  for (std::uint64_t idx = 0; idx < 16; ++idx) {
    const Configuration x = Configuration::from_index(idx, 4);
    CHECK(x.to_index() == idx);
    CHECK(Configuration::from_bitstring(x.to_bitstring()).to_index() == idx);
  }
}

TEST_CASE("uniform constructors fill every vertex") {
  const Configuration a = Configuration::all_a(5);
  const Configuration b = Configuration::all_b(5);
  CHECK(a.count_a() == 5);
  CHECK(b.count_a() == 0);
  CHECK(a.to_index() == 31);
  CHECK(b.to_index() == 0);
  CHECK_FALSE(a == b);
}

TEST_CASE("set mutates a single vertex") {
  Configuration x = Configuration::all_b(3);
  x.set(1, Strategy::A);
  CHECK(x.to_bitstring() == "010");
  CHECK(x.count_a() == 1);
  x.set(1, Strategy::B);
  CHECK(x == Configuration::all_b(3));
}

TEST_CASE("malformed bitstrings and oversized packings are rejected") {
  CHECK_THROWS_AS(Configuration::from_bitstring("01x"), ValidationError);
  CHECK_THROWS_AS(Configuration::from_bitstring(""), ValidationError);
  CHECK_THROWS_AS(Configuration::all_b(70).to_index(), ValidationError);
}
