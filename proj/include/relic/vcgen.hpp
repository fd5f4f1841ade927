// Optimized verification condition generation.
//
// tc builds the main condition in continuation-passing style and applies
// its continuation exactly once per call, which keeps the emitted formula
// linear in the program size. ta collects the auxiliary obligations
// (assertions, loop invariants, callee preconditions); tf turns procedure
// contracts into goals. A reconstructed naive generator (continuation
// duplication at conditionals, inlined sequencing) is kept alongside for
// size-comparison and implication tests only.

#ifndef RELIC_VCGEN_HPP
#define RELIC_VCGEN_HPP

#include "relic/formula.hpp"

namespace relic {

// Contract view the generators work with: pre is a formula of the incoming
// state, post of the (initial, final) pair. Lets the relational pipeline
// substitute call-tracking contracts without touching the generators.
struct SymContract {
  std::function<FormulaPtr(const StateTermPtr&)> pre;
  std::function<FormulaPtr(const StateTermPtr&, const StateTermPtr&)> post;
};

class SymContractEnv {
public:
  SymContractEnv();
  static SymContractEnv from_contracts(const ContractEnv& env);

  void define(const std::string& name, SymContract c);
  void set_fallback(std::function<SymContract(const std::string&)> fb);
  SymContract lookup(const std::string& name) const; // total

private:
  std::map<std::string, SymContract> table_;
  std::function<SymContract(const std::string&)> fallback_;
};

using Cont = std::function<FormulaPtr(FormulaPtr)>;

FormulaPtr tc(const Com& c, const StateTermPtr& s, const StateTermPtr& s_post,
              const SymContractEnv& phi, VcContext& ctx, const Cont& f);

FormulaPtr ta(const Com& c, const StateTermPtr& s, const SymContractEnv& phi,
              VcContext& ctx);

std::vector<Goal> tf(const ContractEnv& phi, const ProcEnv& psi, VcContext& ctx);

// Top-level goal assembly: tf goals plus the two main hypotheses.
// All goals valid implies the Hoare triple {P} c {Q} holds.
std::vector<Goal> hoare_goals(const AssertionPtr& pre, const Com& c,
                              const AssertionPtr& post, const ContractEnv& phi,
                              const ProcEnv& psi, VcContext& ctx);

// Reconstructed naive generator (reference for size/implication tests).
using NaiveCont = std::function<FormulaPtr(const StateTermPtr&)>;

FormulaPtr tc_naive(const Com& c, const StateTermPtr& s,
                    const SymContractEnv& phi, VcContext& ctx,
                    const NaiveCont& post);

FormulaPtr ta_naive(const Com& c, const StateTermPtr& s,
                    const SymContractEnv& phi, VcContext& ctx);

std::vector<Goal> tf_naive(const ContractEnv& phi, const ProcEnv& psi,
                           VcContext& ctx);

std::vector<Goal> hoare_goals_naive(const AssertionPtr& pre, const Com& c,
                                    const AssertionPtr& post,
                                    const ContractEnv& phi, const ProcEnv& psi,
                                    VcContext& ctx);

} // namespace relic

#endif
