// SMT-LIB 2 lowering and external solver orchestration.
//
// Memory states lower to (Array Int Int) constants with a non-negativity
// axiom each, bounded subtraction to a guarded term, and the call-tracking
// atoms to uninterpreted binary predicates. Validity is checked by
// asserting the hypotheses plus the negated conclusion. By default the
// positive-polarity state quantifiers are skolemized to fresh constants;
// the relational contract hypotheses stay quantified with instantiation
// patterns on their call atoms.

#ifndef RELIC_SMT_HPP
#define RELIC_SMT_HPP

#include "relic/solver_core.hpp"

namespace relic {

struct LoweredScript {
  std::string goal_label;
  std::string logic;
  std::string text; // full SMT-LIB 2 script, deterministic for a given goal
  // (state, constant address) pairs worth sampling from a model
  std::vector<std::pair<std::string, BigInt>> sample_points;
};

struct LowerOptions {
  bool skolemize = true;
  bool get_model = true;
};

LoweredScript lower(const Goal& g, const LowerOptions& opts = {});

// Distinct infrastructure failures; anything else is a verdict.
struct SolverError : std::runtime_error {
  enum class Kind { NotFound, Protocol, NonzeroExit };
  Kind error_kind;
  SolverError(Kind k, const std::string& msg)
      : std::runtime_error(msg), error_kind(k) {}
};

struct SolverConfig {
  std::string command;     // external solver command; empty selects builtin
  double timeout_s = 10.0; // per goal
  std::string dump_dir;    // when set, scripts are written here for audit
};

// Runs an external solver process on the script (written to a temp file,
// also piped on stdin). unsat -> Valid, sat -> Invalid with model samples,
// timeout/unknown -> Unknown. Throws SolverError on infrastructure
// failures.
SolverVerdict check(const LoweredScript& script, const SolverConfig& config);

// Dispatch: builtin decision procedure or external process.
SolverVerdict solve_goal(const Goal& g, const SolverConfig& config);

} // namespace relic

#endif
