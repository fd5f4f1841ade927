#include <doctest.h>

#include "helpers.hpp"

using namespace relic;
using namespace relic::testing;

TEST_SUITE_BEGIN("interp");

TEST_CASE("expression evaluation") {
  MemState s;
  // 2 - 5 is bounded at 0
  CHECK(eval_aexp(*Aexp::bin(AOp::Monus, n(2), n(5)), s) == BigNat(0));
  CHECK(eval_bexp(*Bexp::cmp_exp(CmpOp::Eq, Aexp::bin(AOp::Monus, n(2), n(5)), n(0)), s));
  // dereference: x1=5, x5=7 -> *x1 = 7
  s.set(BigNat(1), BigNat(5));
  s.set(BigNat(5), BigNat(7));
  CHECK(eval_aexp(*Aexp::deref(Loc{1}), s) == BigNat(7));
  // address-of
  CHECK(eval_aexp(*Aexp::addr_of(Loc{4}), s) == BigNat(4));
  // comparisons and logic
  MemState t;
  t.set(BigNat(1), BigNat(1));
  t.set(BigNat(2), BigNat(3));
  CHECK(eval_bexp(*Bexp::cmp_exp(CmpOp::Lt, x(1), x(2)), t));
  CHECK(!eval_bexp(*Bexp::negate(Bexp::bool_const(true)), t));
}

TEST_CASE("skip and assert leave the state unchanged") {
  ProcEnv psi;
  MemState s;
  s.set(BigNat(2), BigNat(9));
  Outcome r1 = exec(*Com::assert_cmd(Assertion::bool_const(false)), s, psi, 10);
  REQUIRE(r1.is_final());
  CHECK(r1.state == s);
  Outcome r2 = exec(*Com::skip(), s, psi, 10);
  REQUIRE(r2.is_final());
  CHECK(r2.state == s);
}

TEST_CASE("indirect assignment writes through the pointer") {
  ProcEnv psi;
  MemState s;
  s.set(BigNat(1), BigNat(3));
  Outcome r = exec(*Com::indirect_assign(Loc{1}, n(7)), s, psi, 10);
  REQUIRE(r.is_final());
  CHECK(r.state.read(3) == BigNat(7));
  CHECK(r.state.read(1) == BigNat(3));
}

namespace {

ProcEnv sum_env() {
  return testing::load_corpus("sum.rl").proc_env();
}

uint64_t run_sum(ProcEnv& psi, uint64_t x1, uint64_t x2, uint64_t x3,
                 uint64_t fuel = 100) {
  MemState s;
  s.set(BigNat(1), BigNat(x1));
  s.set(BigNat(2), BigNat(x2));
  s.set(BigNat(3), BigNat(x3));
  Outcome r = exec(*Com::call("sum"), s, psi, fuel);
  REQUIRE(r.is_final());
  CHECK(r.state.read(2) == BigNat(x2));
  return r.state.read(3).to_u64();
}

} // namespace

TEST_CASE("the recursive sum accumulates the expected range") {
  ProcEnv psi = sum_env();
  MemState s;
  s.set(BigNat(1), BigNat(1));
  s.set(BigNat(2), BigNat(3));
  Outcome r = exec(*Com::call("sum"), s, psi, 100);
  REQUIRE(r.is_final());
  CHECK(r.state.read(1) == BigNat(3));
  CHECK(r.state.read(2) == BigNat(3));
  CHECK(r.state.read(3) == BigNat(3)); // 0 + 1 + 2

  // closed form over a small grid: x3' = x3 + sum k for k in [x1, x2)
  for (uint64_t x1 = 0; x1 <= 6; ++x1)
    for (uint64_t x2 = 0; x2 <= 6; ++x2)
      for (uint64_t x3 = 0; x3 <= 2; ++x3) {
        uint64_t expect = x3;
        for (uint64_t k = x1; k < x2; ++k) expect += k;
        CHECK(run_sum(psi, x1, x2, x3) == expect);
      }
}

TEST_CASE("fuel runs out on divergence and is monotone") {
  ProcEnv psi;
  psi.define("loop", Com::call("loop"));
  MemState s;
  CHECK(!exec(*Com::call("loop"), s, psi, 1000).is_final());

  ProcEnv sum = sum_env();
  MemState init;
  init.set(BigNat(2), BigNat(5));
  // 5 recursive calls + base call need 6 units
  CHECK(!exec(*Com::call("sum"), init, sum, 5).is_final());
  Outcome at6 = exec(*Com::call("sum"), init, sum, 6);
  REQUIRE(at6.is_final());
  for (uint64_t extra : {7ull, 20ull, 1000ull}) {
    Outcome more = exec(*Com::call("sum"), init, sum, extra);
    REQUIRE(more.is_final());
    CHECK(more.state == at6.state);
  }
}

TEST_CASE("unbound procedure is an environment error") {
  ProcEnv psi;
  MemState s;
  CHECK_THROWS_AS(exec(*Com::call("nope"), s, psi, 5), EnvError);
}

namespace {

// strip every annotation: assert bodies and loop invariants become true
ComPtr erase_annotations(const ComPtr& c) {
  switch (c->kind) {
    case Com::Kind::Assert: return Com::assert_cmd(Assertion::bool_const(true));
    case Com::Kind::Seq:
      return Com::seq(erase_annotations(c->c0), erase_annotations(c->c1));
    case Com::Kind::If:
      return Com::if_cmd(c->cond, erase_annotations(c->c0),
                         erase_annotations(c->c1));
    case Com::Kind::While:
      return Com::while_cmd(c->cond, Assertion::bool_const(true),
                            erase_annotations(c->c0));
    default: return c;
  }
}

MemState random_state(Gen& gen) {
  MemState s;
  for (int k = 0; k < 4; ++k)
    s.set(BigNat(gen.pick(5)), BigNat(gen.pick(4)));
  return s;
}

} // namespace

TEST_CASE("determinism, fuel monotonicity and annotation erasure") {
  Gen gen(99);
  ProcEnv psi;
  psi.define("q", Com::assign(Loc{1}, Aexp::bin(AOp::Add, x(1), n(1))));
  for (int iter = 0; iter < 300; ++iter) {
    ComPtr c = gen.com(3, {"q"});
    MemState s = random_state(gen);
    uint64_t fuel = 8 + gen.pick(32);
    Outcome a = exec(*c, s, psi, fuel);
    Outcome b = exec(*c, s, psi, fuel);
    // determinism
    CHECK(a.is_final() == b.is_final());
    if (a.is_final()) CHECK(a.state == b.state);
    // fuel monotonicity
    if (a.is_final()) {
      Outcome more = exec(*c, s, psi, fuel + 17);
      REQUIRE(more.is_final());
      CHECK(more.state == a.state);
    }
    // annotations never change the outcome
    Outcome erased = exec(*erase_annotations(c), s, psi, fuel);
    CHECK(erased.is_final() == a.is_final());
    if (a.is_final()) CHECK(erased.state == a.state);
  }
}

TEST_SUITE_END();
