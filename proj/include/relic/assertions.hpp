// Concrete first-order assertion language.
//
// Replaces the shallow lambda predicates of the underlying theory: terms
// read memory states through a StateRef (current / old / run-tagged), and
// formulas are quantified FO arithmetic over naturals. Evaluation against
// concrete states backs the oracle; translation to logical formulas lives
// in formula.hpp.

#ifndef RELIC_ASSERTIONS_HPP
#define RELIC_ASSERTIONS_HPP

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "relic/mem.hpp"

namespace relic {

// Which state a read refers to. Tag/OldTag carry a 1-based run index.
struct StateRef {
  enum class Kind { Cur, Old, Tag, OldTag };
  Kind kind = Kind::Cur;
  unsigned run = 0;

  static StateRef cur() { return {Kind::Cur, 0}; }
  static StateRef old() { return {Kind::Old, 0}; }
  static StateRef tag(unsigned k) { return {Kind::Tag, k}; }
  static StateRef old_tag(unsigned k) { return {Kind::OldTag, k}; }

  friend auto operator<=>(const StateRef&, const StateRef&) = default;
  std::string str() const;
};

struct ArityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when the oracle meets a construct it cannot evaluate exhaustively
// (an unbounded quantifier).
struct OracleUnsupported : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LTerm;
using LTermPtr = std::shared_ptr<const LTerm>;

enum class ArithOp { Add, Mul, Monus };

struct LTerm {
  enum class Kind { Const, Read, Arith, Var };
  Kind kind;
  BigNat value;       // Const
  StateRef state;     // Read
  LTermPtr arg0, arg1; // Read address / Arith operands
  ArithOp op = ArithOp::Add;
  std::string var;    // Var

  static LTermPtr constant(BigNat n);
  static LTermPtr read(StateRef s, LTermPtr addr);
  static LTermPtr arith(ArithOp op, LTermPtr a, LTermPtr b);
  static LTermPtr logical_var(std::string name);
};

bool lterm_equal(const LTerm& a, const LTerm& b);

enum class CmpOp { Eq, Ne, Le, Lt, Ge, Gt };

std::string cmp_op_str(CmpOp op);

struct Assertion;
using AssertionPtr = std::shared_ptr<const Assertion>;

struct Assertion {
  enum class Kind { BoolConst, Compare, Not, And, Or, Implies, Forall, Exists };
  Kind kind;
  bool bval = true;            // BoolConst
  CmpOp cmp = CmpOp::Eq;       // Compare
  LTermPtr lhs, rhs;           // Compare
  AssertionPtr a, b;           // connectives
  std::string var;             // quantifiers
  LTermPtr bound;              // quantifier bound (null = unbounded)

  static AssertionPtr bool_const(bool v);
  static AssertionPtr compare(CmpOp op, LTermPtr l, LTermPtr r);
  static AssertionPtr negate(AssertionPtr x);
  static AssertionPtr conj(AssertionPtr x, AssertionPtr y);
  static AssertionPtr disj(AssertionPtr x, AssertionPtr y);
  static AssertionPtr implies(AssertionPtr x, AssertionPtr y);
  static AssertionPtr forall(std::string v, LTermPtr bound, AssertionPtr body);
  static AssertionPtr exists(std::string v, LTermPtr bound, AssertionPtr body);
};

bool assertion_equal(const Assertion& a, const Assertion& b);

// The set of StateRefs an assertion mentions (including quantifier bounds).
std::set<StateRef> arity_of(const Assertion& a);

// Usage-site arity checks; throw ArityError with a description on failure.
void check_unary_pre(const Assertion& a);              // only Cur
void check_unary_post(const Assertion& a);             // Cur and Old
void check_rel_pre(const Assertion& a, unsigned runs); // Tag(k), k <= runs
void check_rel_post(const Assertion& a, unsigned runs); // Tag/OldTag, k <= runs
// Also rejects free logical variables.
void check_closed(const Assertion& a);

using StateBinding = std::map<StateRef, const MemState*>;

BigNat eval_lterm(const LTerm& t, const StateBinding& binding,
                  const std::map<std::string, BigNat>& env);

// Truth value under the natural-number interpretation. Quantifiers must be
// bounded; binding must cover every StateRef mentioned.
bool eval_assertion(const Assertion& a, const StateBinding& binding);

std::string lterm_str(const LTerm& t);
std::string assertion_str(const Assertion& a);

} // namespace relic

#endif
