#include <doctest.h>

#include <random>

#include "relic/mem.hpp"

using namespace relic;

TEST_SUITE_BEGIN("mem");

TEST_CASE("update reads back and leaves the rest alone") {
  MemState s0;
  MemState s1 = set_mem(s0, 3, 2);
  CHECK(s1.read(3) == BigNat(2));
  CHECK(s1.read(5) == s0.read(5));
  CHECK(s0.read(3) == BigNat(0)); // value semantics: s0 untouched
  MemState s2 = set_mem(set_mem(s0, 3, 1), 3, 2);
  CHECK(s2.read(3) == BigNat(2)); // last write wins
}

TEST_CASE("update laws on random states") {
  std::mt19937_64 rng(7);
  for (int iter = 0; iter < 500; ++iter) {
    MemState sigma;
    for (int k = 0; k < 5; ++k) sigma.set(BigNat(rng() % 8), BigNat(rng() % 10));
    uint64_t i = rng() % 8, j = rng() % 8, n = rng() % 10;
    MemState upd = set_mem(sigma, i, n);
    CHECK(upd.read(i) == BigNat(n));
    if (j != i) CHECK(upd.read(j) == sigma.read(j));
  }
}

TEST_CASE("equality is extensional") {
  MemState a, b;
  a.set(BigNat(1), BigNat(5));
  a.set(BigNat(2), BigNat(0)); // explicit zero is the default
  b.set(BigNat(1), BigNat(5));
  CHECK(a == b);
  b.set(BigNat(9), BigNat(1));
  CHECK(a != b);
  b.set(BigNat(9), BigNat(0));
  CHECK(a == b);
}

TEST_CASE("addr_of realizes the name bijection") {
  CHECK(addr_of("x4") == 4);
  CHECK(addr_of("x0") == 0);
  CHECK(addr_of("x123") == 123);
  CHECK_THROWS_AS(addr_of("y1"), ParseError);
  CHECK_THROWS_AS(addr_of("x"), ParseError);
  CHECK_THROWS_AS(addr_of("x1a"), ParseError);
  // print then parse is the identity
  for (uint64_t i : {0ull, 1ull, 42ull, 999ull}) CHECK(addr_of(Loc{i}.name()) == i);
}

TEST_SUITE_END();
