// Built-in goal decision procedure.
//
// A goal H1 .. Hk |- C is checked by refuting H1 & .. & Hk & !C. The
// preparation pass skolemizes satisfiability-side existential state and
// integer quantifiers (the positive-polarity quantifiers of the goal),
// keeps the pattern-guarded relational contract hypotheses for exhaustive
// instantiation against the ground call atoms, and expands small bounded
// integer quantifiers. The ground core reduces extensional array equality
// over the full index-term set (with a fresh witness per equality atom),
// Ackermannizes reads, and decides the result by DPLL over the
// propositional abstraction with an exact rational simplex plus integer
// branch-and-bound behind it. Every reduction is an over-approximation of
// satisfiability, so Valid verdicts are sound; Invalid is only reported
// after a concrete replay of the counter-model against the original
// formulas, and anything else degrades to Unknown.

#ifndef RELIC_SOLVER_CORE_HPP
#define RELIC_SOLVER_CORE_HPP

#include "relic/formula.hpp"

namespace relic {

struct ModelSample {
  std::string state;
  BigInt addr;
  BigInt value;
};

struct SolverVerdict {
  enum class Kind { Valid, Invalid, Unknown };
  Kind kind = Kind::Unknown;
  std::vector<ModelSample> samples; // Invalid: state reads mentioned in the goal
  std::string reason;               // Unknown: why

  static SolverVerdict valid() { return {Kind::Valid, {}, {}}; }
  static SolverVerdict invalid(std::vector<ModelSample> m) {
    return {Kind::Invalid, std::move(m), {}};
  }
  static SolverVerdict unknown(std::string why) {
    return {Kind::Unknown, {}, std::move(why)};
  }
  bool is_valid() const { return kind == Kind::Valid; }
};

// A universally state-quantified hypothesis kept for instantiation; the
// patterns are call atoms whose arguments are the bound variables.
struct QuantifiedHyp {
  std::vector<SymState> vars;
  std::vector<FormulaPtr> patterns;
  FormulaPtr body;
};

struct PreparedGoal {
  std::string label;
  // Quantifier-free formulas whose joint satisfiability is a counterexample.
  std::vector<FormulaPtr> asserted;
  std::vector<QuantifiedHyp> quantified;
  std::vector<std::string> state_consts;
  std::vector<std::string> int_consts;
  std::vector<std::string> call_preds;
  // Some hypothesis content could not be encoded (unbounded or oversized
  // quantifier): models are untrusted, only Valid may be claimed.
  bool dropped_hypotheses = false;
};

PreparedGoal prepare_goal(const Goal& g);

// Ground instances of the quantified hypotheses against the call atoms
// occurring in pg.asserted (exhaustive pattern matching).
std::vector<FormulaPtr> instantiate_hyps(PreparedGoal& pg);

SolverVerdict builtin_solve(const Goal& g);

// Concrete evaluation of a quantifier-free formula: states by name,
// integer variables by value. Used by the replay step and by tests.
struct ConcreteEnv {
  std::map<std::string, MemState> states;
  std::map<std::string, BigInt> ints;
  // truth of call atoms keyed by (proc, materialized pre/post states)
  std::map<std::string, bool> calls;
};
bool eval_formula_concrete(const Formula& f, const ConcreteEnv& env);
MemState materialize_state(const StateTerm& s, const ConcreteEnv& env);

// Replays Invalid samples against a goal with no quantified hypotheses:
// true iff the samples genuinely falsify the goal.
bool verify_countermodel(const Goal& g, const std::vector<ModelSample>& samples);

} // namespace relic

#endif
