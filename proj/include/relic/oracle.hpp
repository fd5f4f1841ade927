// Bounded-exhaustive semantic checker.
//
// Enumerates every initial state over a bounded window of addresses and
// values (addresses outside the window stay 0), runs the commands under
// the big-step interpreter, and checks the pre/post pair directly. This is
// the ground truth the VC pipeline is differentially tested against.
// States that run out of fuel are excluded from both verdict directions.

#ifndef RELIC_ORACLE_HPP
#define RELIC_ORACLE_HPP

#include "relic/interp.hpp"
#include "relic/parser.hpp"

namespace relic {

struct Bounds {
  uint64_t max_addr = 4; // locations x0 .. x_{max_addr-1} are enumerated
  uint64_t max_val = 3;  // values 0 .. max_val
  uint64_t fuel = 64;

  // (max_val+1)^(max_addr*runs), or nullopt on overflow
  std::optional<uint64_t> enumeration_size(unsigned runs) const;
};

struct OracleVerdict {
  enum class Kind { Holds, Counterexample, Inconclusive };
  Kind kind = Kind::Holds;
  // Counterexample: initial and final state per run
  std::vector<MemState> initial;
  std::vector<MemState> final_states;
  uint64_t fuel_exhausted = 0; // states skipped for running out of fuel
  bool holds() const { return kind == Kind::Holds; }
};

OracleVerdict check_hoare(const AssertionPtr& pre, const Com& c,
                          const AssertionPtr& post, const ProcEnv& psi,
                          const Bounds& bounds);

OracleVerdict check_rel(const AssertionPtr& pre, const std::vector<ComPtr>& cs,
                        const AssertionPtr& post, const ProcEnv& psi,
                        const Bounds& bounds);

} // namespace relic

#endif
