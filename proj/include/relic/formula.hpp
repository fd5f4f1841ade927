// Logical IR produced by the VC generators.
//
// Formulas speak about symbolic memory states: store-chains over state
// variables, integer terms built from reads, the uninterpreted call-tracking
// atoms, and quantification over states (from sequencing and the relational
// contract hypotheses) and over integer logical variables.

#ifndef RELIC_FORMULA_HPP
#define RELIC_FORMULA_HPP

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "relic/assertions.hpp"
#include "relic/ast.hpp"

namespace relic {

struct SymState {
  std::string name;
  friend auto operator<=>(const SymState&, const SymState&) = default;
};

struct Term;
struct StateTerm;
struct Formula;
using TermPtr = std::shared_ptr<const Term>;
using StateTermPtr = std::shared_ptr<const StateTerm>;
using FormulaPtr = std::shared_ptr<const Formula>;

struct StateTerm {
  enum class Kind { Var, Store };
  Kind kind;
  SymState var;        // Var
  StateTermPtr base;   // Store
  TermPtr addr, value; // Store

  static StateTermPtr mk_var(SymState s);
  static StateTermPtr store(StateTermPtr base, TermPtr addr, TermPtr value);
};

struct Term {
  enum class Kind { Const, Select, Arith, Var };
  Kind kind;
  BigNat value;       // Const
  StateTermPtr state; // Select
  TermPtr addr;       // Select
  ArithOp op = ArithOp::Add;
  TermPtr a, b;       // Arith
  std::string var;    // Var

  static TermPtr constant(BigNat n);
  static TermPtr select(StateTermPtr s, TermPtr addr);
  static TermPtr arith(ArithOp op, TermPtr x, TermPtr y);
  static TermPtr variable(std::string name);
};

struct Formula {
  enum class Kind {
    Bool, Cmp, StateEq, CallAtom, Not, And, Or, Implies,
    ForallState, ForallInt, ExistsInt
  };
  Kind kind;
  bool bval = true;                 // Bool
  CmpOp cmp = CmpOp::Eq;            // Cmp
  TermPtr t0, t1;                   // Cmp
  StateTermPtr s0, s1;              // StateEq / CallAtom args
  std::string name;                 // CallAtom proc / quantified int var
  FormulaPtr f0, f1;                // connectives / quantifier body (f0)
  std::vector<SymState> states;     // ForallState block
  std::vector<FormulaPtr> patterns; // ForallState instantiation patterns
  TermPtr bound;                    // ForallInt/ExistsInt (null = unbounded)

  static FormulaPtr boolean(bool v);
  static FormulaPtr compare(CmpOp op, TermPtr a, TermPtr b);
  static FormulaPtr state_eq(StateTermPtr a, StateTermPtr b);
  static FormulaPtr call_atom(std::string proc, StateTermPtr pre, StateTermPtr post);
  static FormulaPtr negate(FormulaPtr f);
  static FormulaPtr conj(FormulaPtr a, FormulaPtr b);
  static FormulaPtr disj(FormulaPtr a, FormulaPtr b);
  static FormulaPtr implies(FormulaPtr a, FormulaPtr b);
  static FormulaPtr forall_states(std::vector<SymState> ss, FormulaPtr body,
                                  std::vector<FormulaPtr> patterns = {});
  static FormulaPtr forall_int(std::string var, TermPtr bound, FormulaPtr body);
  static FormulaPtr exists_int(std::string var, TermPtr bound, FormulaPtr body);
};

// Structural (not alpha) equality.
bool term_equal(const Term& a, const Term& b);
bool state_term_equal(const StateTerm& a, const StateTerm& b);
bool formula_equal(const Formula& a, const Formula& b);

// Total node count over formulas, terms and state terms.
size_t node_count(const Formula& f);

// Renames all state and integer symbols to a canonical first-occurrence
// numbering; two formulas are alpha-equivalent iff their normal forms are
// structurally equal.
FormulaPtr alpha_normalize(const FormulaPtr& f);
bool alpha_equivalent(const FormulaPtr& a, const FormulaPtr& b);

std::string term_str(const Term& t);
std::string state_term_str(const StateTerm& s);
std::string formula_str(const Formula& f);

// A proof obligation: hypotheses entail the conclusion.
struct Goal {
  std::string label;
  std::vector<FormulaPtr> hypotheses;
  FormulaPtr conclusion;
};

// Fresh-symbol supply for one VC generation session. Issued names are
// tracked so a fresh symbol never collides, even with states constructed
// outside the context and reserved explicitly.
class VcContext {
public:
  SymState fresh_state(const std::string& prefix);
  std::string fresh_int(const std::string& prefix);
  void reserve(const std::string& name) { issued_.insert(name); }

private:
  std::map<std::string, uint64_t> counters_;
  std::set<std::string> issued_;
};

// Translation of assertions into formulas over symbolic states.
using SymBinding = std::map<StateRef, StateTermPtr>;
FormulaPtr translate(const Assertion& a, const SymBinding& binding);
TermPtr translate_lterm(const LTerm& t, const SymBinding& binding);

// Program expressions over a symbolic state.
TermPtr aexp_term(const Aexp& a, const StateTermPtr& s);
FormulaPtr bexp_formula(const Bexp& b, const StateTermPtr& s);

} // namespace relic

#endif
