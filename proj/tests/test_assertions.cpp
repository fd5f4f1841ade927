#include <doctest.h>

#include "helpers.hpp"
#include "relic/solver_core.hpp"

using namespace relic;
using namespace relic::testing;

TEST_SUITE_BEGIN("assertions");

TEST_CASE("evaluation over tagged states") {
  MemState s1, s2;
  s1.set(BigNat(3), BigNat(5));
  s2.set(BigNat(3), BigNat(5));
  // x3<1> == x3<2>
  AssertionPtr a = aeq(ltag(1, 3), ltag(2, 3));
  CHECK(eval_assertion(*a, {{StateRef::tag(1), &s1}, {StateRef::tag(2), &s2}}));
  s2.set(BigNat(3), BigNat(6));
  CHECK(!eval_assertion(*a, {{StateRef::tag(1), &s1}, {StateRef::tag(2), &s2}}));
}

TEST_CASE("old versus current state") {
  MemState before, after;
  before.set(BigNat(1), BigNat(4));
  after.set(BigNat(1), BigNat(5));
  // x1 == old(x1) + 1
  AssertionPtr inc = aeq(lcur(1), ladd(lold(1), lc(1)));
  CHECK(eval_assertion(*inc, {{StateRef::cur(), &after}, {StateRef::old(), &before}}));
  // antecedent false makes the implication true
  MemState o;
  o.set(BigNat(1), BigNat(2));
  o.set(BigNat(2), BigNat(5));
  o.set(BigNat(3), BigNat(9));
  AssertionPtr imp = Assertion::implies(acmp(CmpOp::Ge, lold(1), lold(2)),
                                        aeq(lold(3), lcur(3)));
  MemState anything;
  CHECK(eval_assertion(*imp, {{StateRef::old(), &o}, {StateRef::cur(), &anything}}));
}

TEST_CASE("unbound state refs are arity errors") {
  MemState s;
  AssertionPtr a = aeq(lcur(1), lc(0));
  CHECK_THROWS_AS(eval_assertion(*a, {{StateRef::old(), &s}}), ArityError);
}

TEST_CASE("arity checking by usage site") {
  CHECK_NOTHROW(check_unary_pre(*aeq(lcur(1), lc(0))));
  CHECK_THROWS_AS(check_unary_pre(*aeq(lold(1), lc(0))), ArityError);
  CHECK_NOTHROW(check_unary_post(*aeq(lold(1), lcur(1))));
  CHECK_THROWS_AS(check_unary_post(*aeq(ltag(1, 1), lc(0))), ArityError);
  // relational: tags bounded by the run count, pre must not use old tags
  CHECK_NOTHROW(check_rel_pre(*aeq(ltag(2, 1), ltag(1, 1)), 2));
  CHECK_THROWS_AS(check_rel_pre(*aeq(ltag(3, 1), lc(0)), 2), ArityError);
  CHECK_THROWS_AS(check_rel_pre(*aeq(loldtag(1, 1), lc(0)), 2), ArityError);
  CHECK_NOTHROW(check_rel_post(*aeq(loldtag(2, 3), ltag(2, 3)), 2));
  CHECK_THROWS_AS(check_rel_post(*aeq(lcur(1), lc(0)), 2), ArityError);
}

TEST_CASE("closedness of logical variables") {
  AssertionPtr open = aeq(LTerm::logical_var("v"), lc(1));
  CHECK_THROWS_AS(check_closed(*open), ArityError);
  AssertionPtr closed = Assertion::exists("v", lc(4), open);
  CHECK_NOTHROW(check_closed(*closed));
}

TEST_CASE("bounded quantifiers evaluate exhaustively") {
  MemState s;
  s.set(BigNat(1), BigNat(3));
  // forall v < 3. v < x1
  AssertionPtr fa = Assertion::forall(
      "v", lc(3), acmp(CmpOp::Lt, LTerm::logical_var("v"), lcur(1)));
  CHECK(eval_assertion(*fa, {{StateRef::cur(), &s}}));
  // exists v < 3. v == 5 is false
  AssertionPtr ex =
      Assertion::exists("v", lc(3), aeq(LTerm::logical_var("v"), lc(5)));
  CHECK(!eval_assertion(*ex, {{StateRef::cur(), &s}}));
  // empty range
  AssertionPtr empty = Assertion::forall("v", lc(0), Assertion::bool_const(false));
  CHECK(eval_assertion(*empty, {{StateRef::cur(), &s}}));
}

TEST_CASE("unbounded quantifiers are rejected by concrete evaluation") {
  MemState s;
  AssertionPtr ub =
      Assertion::forall("v", nullptr, aeq(LTerm::logical_var("v"), lc(0)));
  CHECK_THROWS_AS(eval_assertion(*ub, {{StateRef::cur(), &s}}), OracleUnsupported);
}

TEST_CASE("monus semantics in terms") {
  MemState s;
  s.set(BigNat(1), BigNat(2));
  s.set(BigNat(2), BigNat(5));
  // x1 - x2 == 0 under truncated subtraction
  AssertionPtr a =
      aeq(LTerm::arith(ArithOp::Monus, lcur(1), lcur(2)), lc(0));
  CHECK(eval_assertion(*a, {{StateRef::cur(), &s}}));
}

TEST_CASE("translate mirrors structure") {
  StateTermPtr s1 = StateTerm::mk_var(SymState{"a"});
  StateTermPtr s2 = StateTerm::mk_var(SymState{"b"});
  FormulaPtr f = translate(*aeq(ltag(1, 3), ltag(2, 3)),
                           {{StateRef::tag(1), s1}, {StateRef::tag(2), s2}});
  CHECK(f->kind == Formula::Kind::Cmp);
  CHECK(f->t0->kind == Term::Kind::Select);
  CHECK(f->t0->state->var.name == "a");
  CHECK(formula_str(*f) == "a[3] == b[3]");
  CHECK(formula_str(*translate(*atrue(), {})) == "true");
  CHECK_THROWS_AS(translate(*aeq(lcur(1), lc(0)), {}), ArityError);
}

TEST_CASE("dereference sugar reads through the state") {
  // *x1 with x1=5, x5=7
  MemState s;
  s.set(BigNat(1), BigNat(5));
  s.set(BigNat(5), BigNat(7));
  LTermPtr deref = LTerm::read(StateRef::cur(), lcur(1));
  CHECK(eval_lterm(*deref, {{StateRef::cur(), &s}}, {}) == BigNat(7));
}

namespace {

void collect_addresses(const LTermPtr& t,
                       std::map<StateRef, std::set<uint64_t>>& out) {
  switch (t->kind) {
    case LTerm::Kind::Read:
      out[t->state].insert(t->arg0->value.to_u64());
      return;
    case LTerm::Kind::Arith:
      collect_addresses(t->arg0, out);
      collect_addresses(t->arg1, out);
      return;
    default: return;
  }
}

void collect_addresses(const AssertionPtr& a,
                       std::map<StateRef, std::set<uint64_t>>& out) {
  switch (a->kind) {
    case Assertion::Kind::Compare:
      collect_addresses(a->lhs, out);
      collect_addresses(a->rhs, out);
      return;
    case Assertion::Kind::Not: collect_addresses(a->a, out); return;
    case Assertion::Kind::And:
    case Assertion::Kind::Or:
    case Assertion::Kind::Implies:
      collect_addresses(a->a, out);
      collect_addresses(a->b, out);
      return;
    default: return;
  }
}

} // namespace

// Concrete evaluation and solver-side validity agree: pinning every read
// the assertion mentions to its concrete value makes exactly one of the
// translated formula and its negation valid.
TEST_CASE("evaluation adequacy against the solver") {
  Gen gen(0xADE0);
  std::vector<StateRef> refs = {StateRef::tag(1), StateRef::tag(2)};
  for (int iter = 0; iter < 60; ++iter) {
    AssertionPtr a = gen.assertion(2, refs);
    MemState s1, s2;
    for (int k = 0; k < 4; ++k) {
      s1.set(BigNat(gen.pick(5)), BigNat(gen.pick(4)));
      s2.set(BigNat(gen.pick(5)), BigNat(gen.pick(4)));
    }
    bool truth = eval_assertion(
        *a, {{StateRef::tag(1), &s1}, {StateRef::tag(2), &s2}});

    StateTermPtr v1 = StateTerm::mk_var(SymState{"m1"});
    StateTermPtr v2 = StateTerm::mk_var(SymState{"m2"});
    FormulaPtr translated =
        translate(*a, {{StateRef::tag(1), v1}, {StateRef::tag(2), v2}});
    std::map<StateRef, std::set<uint64_t>> addrs;
    collect_addresses(a, addrs);
    std::vector<FormulaPtr> hyps;
    auto pin = [&](const StateRef& r, const StateTermPtr& v, const MemState& m) {
      for (uint64_t addr : addrs[r])
        hyps.push_back(Formula::compare(
            CmpOp::Eq, Term::select(v, Term::constant(BigNat(addr))),
            Term::constant(m.read(addr))));
    };
    pin(StateRef::tag(1), v1, s1);
    pin(StateRef::tag(2), v2, s2);

    SolverVerdict pos = builtin_solve(Goal{"adequacy+", hyps, translated});
    SolverVerdict neg =
        builtin_solve(Goal{"adequacy-", hyps, Formula::negate(translated)});
    CAPTURE(assertion_str(*a));
    CHECK(pos.is_valid() == truth);
    CHECK(neg.is_valid() == !truth);
  }
}

TEST_SUITE_END();
