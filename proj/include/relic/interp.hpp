// Executable big-step semantics.
//
// Fuel makes the (undecidable) big-step relation executable: it is spent
// on procedure calls and loop unfoldings only, so straight-line code is
// free and the approximation is monotone in the budget.

#ifndef RELIC_INTERP_HPP
#define RELIC_INTERP_HPP

#include <cstdint>

#include "relic/ast.hpp"

namespace relic {

struct Outcome {
  enum class Kind { Final, OutOfFuel };
  Kind kind = Kind::OutOfFuel;
  MemState state; // meaningful only for Final

  static Outcome final(MemState s) { return {Kind::Final, std::move(s)}; }
  static Outcome out_of_fuel() { return {Kind::OutOfFuel, MemState{}}; }
  bool is_final() const { return kind == Kind::Final; }
};

BigNat eval_aexp(const Aexp& a, const MemState& sigma);
bool eval_bexp(const Bexp& b, const MemState& sigma);

Outcome exec(const Com& c, const MemState& sigma, const ProcEnv& psi,
             uint64_t fuel);

} // namespace relic

#endif
