// Relational verification condition generation.
//
// Relational contracts attach a pre/post pair to a sequence of procedure
// names. tr composes tc over command sequences, tar conjoins the auxiliary
// conditions, and the call-tracking atoms (proccall/procpred) guard when a
// relational contract hypothesis (tpr) may fire. phicall lifts the
// singleton contracts into the contract view used while generating, so
// every call leaves a matching atom in the formula.

#ifndef RELIC_RELVCGEN_HPP
#define RELIC_RELVCGEN_HPP

#include "relic/vcgen.hpp"

namespace relic {

struct RelContract {
  AssertionPtr pre;  // arity: Tag(k), 1 <= k <= n
  AssertionPtr post; // arity: Tag(k)/OldTag(k), 1 <= k <= n
};

class RelContractEnv {
public:
  // Throws ArityError if the assertions do not fit the sequence length,
  // EnvError on a duplicate sequence.
  void define(std::vector<std::string> names, RelContract c);
  bool contains(const std::vector<std::string>& names) const;
  const std::map<std::vector<std::string>, RelContract>& all() const {
    return entries_;
  }

private:
  std::map<std::vector<std::string>, RelContract> entries_;
};

struct RelGoalSpec {
  std::string label;
  std::vector<ComPtr> commands;
  AssertionPtr pre;
  AssertionPtr post;
};

FormulaPtr tr(const std::vector<ComPtr>& cs, const std::vector<StateTermPtr>& ss,
              const std::vector<StateTermPtr>& ss_post, const SymContractEnv& phi,
              VcContext& ctx, const Cont& f);

FormulaPtr tar(const std::vector<ComPtr>& cs, const std::vector<StateTermPtr>& ss,
               const SymContractEnv& phi, VcContext& ctx);

FormulaPtr proccall(const std::string& proc, const StateTermPtr& s,
                    const StateTermPtr& s_post);

FormulaPtr procpred(const std::vector<std::string>& procs,
                    const std::vector<StateTermPtr>& ss,
                    const std::vector<StateTermPtr>& ss_post);

// One universally quantified hypothesis per declared sequence, guarded by
// the matching call atoms (also emitted as instantiation patterns).
FormulaPtr tpr(const RelContractEnv& rel, VcContext& ctx);

// Contract view where every procedure's postcondition carries its call
// atom; singleton relational contracts supply the pre/post.
SymContractEnv phicall(const RelContractEnv& rel);

std::vector<Goal> tfr(const RelContractEnv& rel, const ProcEnv& psi,
                      VcContext& ctx, const std::string& label_prefix = "");

// Top-level assembly: tfr goals plus the hyp2/hyp3 goals for the
// property. All goals valid implies the relational triple holds.
std::vector<Goal> rel_goals(const RelGoalSpec& spec, const RelContractEnv& rel,
                            const ProcEnv& psi, VcContext& ctx);

} // namespace relic

#endif
