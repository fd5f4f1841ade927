#include "relic/relvcgen.hpp"

#include <algorithm>

namespace relic {

namespace {

std::string seq_label(const std::vector<std::string>& names) {
  std::string out;
  for (size_t i = 0; i < names.size(); ++i) out += (i ? "_" : "") + names[i];
  return out;
}

SymBinding pre_binding(const std::vector<StateTermPtr>& ss) {
  SymBinding b;
  for (size_t k = 0; k < ss.size(); ++k)
    b[StateRef::tag(static_cast<unsigned>(k + 1))] = ss[k];
  return b;
}

SymBinding post_binding(const std::vector<StateTermPtr>& ss,
                        const std::vector<StateTermPtr>& ss_post) {
  SymBinding b;
  for (size_t k = 0; k < ss.size(); ++k) {
    b[StateRef::old_tag(static_cast<unsigned>(k + 1))] = ss[k];
    b[StateRef::tag(static_cast<unsigned>(k + 1))] = ss_post[k];
  }
  return b;
}

} // namespace

void RelContractEnv::define(std::vector<std::string> names, RelContract c) {
  if (names.empty()) throw EnvError("relational contract over empty sequence");
  unsigned n = static_cast<unsigned>(names.size());
  check_rel_pre(*c.pre, n);
  check_rel_post(*c.post, n);
  if (entries_.count(names))
    throw EnvError("duplicate relational contract for sequence [" +
                   seq_label(names) + "]");
  entries_.emplace(std::move(names), std::move(c));
}

bool RelContractEnv::contains(const std::vector<std::string>& names) const {
  return entries_.count(names) > 0;
}

FormulaPtr tr(const std::vector<ComPtr>& cs, const std::vector<StateTermPtr>& ss,
              const std::vector<StateTermPtr>& ss_post, const SymContractEnv& phi,
              VcContext& ctx, const Cont& f) {
  if (cs.size() != ss.size() || cs.size() != ss_post.size())
    throw EnvError("tr: command/state sequence length mismatch");
  if (cs.empty()) return f(Formula::boolean(true));
  size_t n = cs.size();
  std::vector<ComPtr> prefix(cs.begin(), cs.end() - 1);
  std::vector<StateTermPtr> ss_prefix(ss.begin(), ss.end() - 1);
  std::vector<StateTermPtr> ssp_prefix(ss_post.begin(), ss_post.end() - 1);
  return tc(*cs[n - 1], ss[n - 1], ss_post[n - 1], phi, ctx,
            [&](FormulaPtr p_n) {
              return tr(prefix, ss_prefix, ssp_prefix, phi, ctx,
                        [&](FormulaPtr p_rest) {
                          return f(Formula::conj(std::move(p_n),
                                                 std::move(p_rest)));
                        });
            });
}

FormulaPtr tar(const std::vector<ComPtr>& cs, const std::vector<StateTermPtr>& ss,
               const SymContractEnv& phi, VcContext& ctx) {
  if (cs.size() != ss.size())
    throw EnvError("tar: command/state sequence length mismatch");
  if (cs.empty()) return Formula::boolean(true);
  FormulaPtr acc = ta(*cs[0], ss[0], phi, ctx);
  for (size_t i = 1; i < cs.size(); ++i)
    acc = Formula::conj(std::move(acc), ta(*cs[i], ss[i], phi, ctx));
  return acc;
}

FormulaPtr proccall(const std::string& proc, const StateTermPtr& s,
                    const StateTermPtr& s_post) {
  return Formula::call_atom(proc, s, s_post);
}

FormulaPtr procpred(const std::vector<std::string>& procs,
                    const std::vector<StateTermPtr>& ss,
                    const std::vector<StateTermPtr>& ss_post) {
  if (procs.size() != ss.size() || procs.size() != ss_post.size())
    throw EnvError("procpred: sequence length mismatch");
  if (procs.empty()) return Formula::boolean(true);
  FormulaPtr acc = proccall(procs[0], ss[0], ss_post[0]);
  for (size_t i = 1; i < procs.size(); ++i)
    acc = Formula::conj(std::move(acc), proccall(procs[i], ss[i], ss_post[i]));
  return acc;
}

FormulaPtr tpr(const RelContractEnv& rel, VcContext& ctx) {
  FormulaPtr acc = nullptr;
  // Dom(rel) is finite: one hypothesis per declared sequence, quantifying
  // only over the 2n states.
  for (const auto& [names, contract] : rel.all()) {
    size_t n = names.size();
    std::vector<SymState> vars;
    std::vector<StateTermPtr> qs, qps;
    for (size_t k = 0; k < n; ++k) {
      SymState q = ctx.fresh_state("q" + std::to_string(k + 1));
      SymState qp = ctx.fresh_state("q" + std::to_string(k + 1) + "p");
      vars.push_back(q);
      vars.push_back(qp);
      qs.push_back(StateTerm::mk_var(q));
      qps.push_back(StateTerm::mk_var(qp));
    }
    std::vector<FormulaPtr> patterns;
    for (size_t k = 0; k < n; ++k)
      patterns.push_back(proccall(names[k], qs[k], qps[k]));
    FormulaPtr body = Formula::implies(
        procpred(names, qs, qps),
        Formula::implies(translate(*contract.pre, pre_binding(qs)),
                         translate(*contract.post, post_binding(qs, qps))));
    FormulaPtr hyp = Formula::forall_states(std::move(vars), std::move(body),
                                            std::move(patterns));
    acc = acc ? Formula::conj(std::move(acc), std::move(hyp)) : hyp;
  }
  return acc ? acc : Formula::boolean(true);
}

SymContractEnv phicall(const RelContractEnv& rel) {
  SymContractEnv out;
  // Every name gets its call atom conjoined to the (possibly trivial) post.
  out.set_fallback([](const std::string& name) {
    return SymContract{
        [](const StateTermPtr&) { return Formula::boolean(true); },
        [name](const StateTermPtr& old_s, const StateTermPtr& cur_s) {
          return Formula::conj(Formula::boolean(true),
                               Formula::call_atom(name, old_s, cur_s));
        }};
  });
  for (const auto& [names, contract] : rel.all()) {
    if (names.size() != 1) continue;
    const std::string name = names[0];
    AssertionPtr pre = contract.pre, post = contract.post;
    out.define(name,
               SymContract{
                   [pre](const StateTermPtr& s) {
                     return translate(*pre, {{StateRef::tag(1), s}});
                   },
                   [post, name](const StateTermPtr& old_s, const StateTermPtr& cur_s) {
                     return Formula::conj(
                         translate(*post, {{StateRef::old_tag(1), old_s},
                                           {StateRef::tag(1), cur_s}}),
                         Formula::call_atom(name, old_s, cur_s));
                   }});
  }
  return out;
}

std::vector<Goal> tfr(const RelContractEnv& rel, const ProcEnv& psi,
                      VcContext& ctx, const std::string& label_prefix) {
  std::vector<Goal> goals;
  SymContractEnv phi = phicall(rel);
  for (const auto& [names, contract] : rel.all()) {
    size_t n = names.size();
    std::vector<ComPtr> bodies;
    for (const auto& name : names) bodies.push_back(psi.body(name));
    std::vector<StateTermPtr> ss, ssp;
    for (size_t k = 0; k < n; ++k) {
      ss.push_back(StateTerm::mk_var(ctx.fresh_state("s" + std::to_string(k + 1))));
      ssp.push_back(
          StateTerm::mk_var(ctx.fresh_state("s" + std::to_string(k + 1) + "p")));
    }
    FormulaPtr rel_pre = translate(*contract.pre, pre_binding(ss));
    FormulaPtr rel_post = translate(*contract.post, post_binding(ss, ssp));
    FormulaPtr tpr_hyp = tpr(rel, ctx);
    std::string base = label_prefix + "tfr." + seq_label(names);
    goals.push_back(
        Goal{base + ".aux", {rel_pre, tpr_hyp}, tar(bodies, ss, phi, ctx)});
    goals.push_back(Goal{base + ".main",
                         {rel_pre, tpr_hyp},
                         tr(bodies, ss, ssp, phi, ctx, [&](FormulaPtr p) {
                           return Formula::implies(std::move(p), rel_post);
                         })});
  }
  return goals;
}

std::vector<Goal> rel_goals(const RelGoalSpec& spec, const RelContractEnv& rel,
                            const ProcEnv& psi, VcContext& ctx) {
  unsigned n = static_cast<unsigned>(spec.commands.size());
  if (n == 0) throw EnvError("relational property with no commands");
  check_rel_pre(*spec.pre, n);
  check_rel_post(*spec.post, n);

  std::vector<Goal> goals = tfr(rel, psi, ctx, spec.label + ".");
  SymContractEnv phi = phicall(rel);
  std::vector<StateTermPtr> ss, ssp;
  for (unsigned k = 0; k < n; ++k) {
    ss.push_back(StateTerm::mk_var(ctx.fresh_state("s" + std::to_string(k + 1))));
    ssp.push_back(
        StateTerm::mk_var(ctx.fresh_state("s" + std::to_string(k + 1) + "p")));
  }
  FormulaPtr rel_pre = translate(*spec.pre, pre_binding(ss));
  FormulaPtr rel_post = translate(*spec.post, post_binding(ss, ssp));
  FormulaPtr tpr_hyp = tpr(rel, ctx);
  goals.push_back(Goal{spec.label + ".hyp2",
                       {rel_pre, tpr_hyp},
                       tar(spec.commands, ss, phi, ctx)});
  goals.push_back(Goal{spec.label + ".hyp3",
                       {rel_pre, tpr_hyp},
                       tr(spec.commands, ss, ssp, phi, ctx, [&](FormulaPtr p) {
                         return Formula::implies(std::move(p), rel_post);
                       })});
  return goals;
}

} // namespace relic
