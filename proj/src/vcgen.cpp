#include "relic/vcgen.hpp"

namespace relic {

namespace {

// Interior states take their prefix from the incoming state's stem so that
// counterexamples read naturally (s1, s1_1, s1_2, ...).
std::string stem_of(const StateTermPtr& s) {
  if (s->kind != StateTerm::Kind::Var) return "s";
  const std::string& n = s->var.name;
  size_t us = n.find('_');
  return us == std::string::npos ? n : n.substr(0, us);
}

void reserve_state(VcContext& ctx, const StateTermPtr& s) {
  if (s->kind == StateTerm::Kind::Var) ctx.reserve(s->var.name);
}

FormulaPtr f_true() { return Formula::boolean(true); }

} // namespace

SymContractEnv::SymContractEnv() {
  fallback_ = [](const std::string&) {
    return SymContract{
        [](const StateTermPtr&) { return Formula::boolean(true); },
        [](const StateTermPtr&, const StateTermPtr&) {
          return Formula::boolean(true);
        }};
  };
}

void SymContractEnv::define(const std::string& name, SymContract c) {
  table_[name] = std::move(c);
}

void SymContractEnv::set_fallback(
    std::function<SymContract(const std::string&)> fb) {
  fallback_ = std::move(fb);
}

SymContract SymContractEnv::lookup(const std::string& name) const {
  auto it = table_.find(name);
  if (it != table_.end()) return it->second;
  return fallback_(name);
}

SymContractEnv SymContractEnv::from_contracts(const ContractEnv& env) {
  SymContractEnv out;
  for (const auto& [name, contract] : env.all()) {
    AssertionPtr pre = contract.pre, post = contract.post;
    out.define(name,
               SymContract{
                   [pre](const StateTermPtr& s) {
                     return translate(*pre, {{StateRef::cur(), s}});
                   },
                   [post](const StateTermPtr& old_s, const StateTermPtr& cur_s) {
                     return translate(*post, {{StateRef::old(), old_s},
                                              {StateRef::cur(), cur_s}});
                   }});
  }
  return out;
}

FormulaPtr tc(const Com& c, const StateTermPtr& s, const StateTermPtr& s_post,
              const SymContractEnv& phi, VcContext& ctx, const Cont& f) {
  reserve_state(ctx, s);
  reserve_state(ctx, s_post);
  switch (c.kind) {
    case Com::Kind::Skip:
      return f(Formula::state_eq(s, s_post));
    case Com::Kind::Assign:
      return f(Formula::state_eq(
          s_post, StateTerm::store(s, Term::constant(BigNat(c.loc.index)),
                                   aexp_term(*c.aexp, s))));
    case Com::Kind::IndirectAssign:
      return f(Formula::state_eq(
          s_post,
          StateTerm::store(s, Term::select(s, Term::constant(BigNat(c.loc.index))),
                           aexp_term(*c.aexp, s))));
    case Com::Kind::Assert:
      return f(Formula::conj(translate(*c.assertion, {{StateRef::cur(), s}}),
                             Formula::state_eq(s, s_post)));
    case Com::Kind::Seq: {
      SymState mid = ctx.fresh_state(stem_of(s));
      StateTermPtr s_mid = StateTerm::mk_var(mid);
      FormulaPtr body = tc(*c.c0, s, s_mid, phi, ctx, [&](FormulaPtr p1) {
        return tc(*c.c1, s_mid, s_post, phi, ctx, [&](FormulaPtr p2) {
          return f(Formula::conj(std::move(p1), std::move(p2)));
        });
      });
      return Formula::forall_states({mid}, std::move(body));
    }
    case Com::Kind::If: {
      FormulaPtr guard = bexp_formula(*c.cond, s);
      return tc(*c.c0, s, s_post, phi, ctx, [&](FormulaPtr p1) {
        return tc(*c.c1, s, s_post, phi, ctx, [&](FormulaPtr p2) {
          return f(Formula::conj(
              Formula::implies(guard, std::move(p1)),
              Formula::implies(Formula::negate(guard), std::move(p2))));
        });
      });
    }
    case Com::Kind::Call: {
      SymContract yc = phi.lookup(c.callee);
      return f(Formula::conj(yc.pre(s), yc.post(s, s_post)));
    }
    case Com::Kind::While: {
      SymBinding at_pre{{StateRef::cur(), s}};
      SymBinding at_post{{StateRef::cur(), s_post}};
      return f(Formula::conj(
          Formula::conj(translate(*c.assertion, at_pre),
                        translate(*c.assertion, at_post)),
          Formula::negate(bexp_formula(*c.cond, s_post))));
    }
  }
  throw std::logic_error("tc: bad kind");
}

FormulaPtr ta(const Com& c, const StateTermPtr& s, const SymContractEnv& phi,
              VcContext& ctx) {
  reserve_state(ctx, s);
  switch (c.kind) {
    case Com::Kind::Skip:
    case Com::Kind::Assign:
    case Com::Kind::IndirectAssign:
      return f_true();
    case Com::Kind::Assert:
      return translate(*c.assertion, {{StateRef::cur(), s}});
    case Com::Kind::Seq: {
      SymState mid = ctx.fresh_state(stem_of(s));
      StateTermPtr s_mid = StateTerm::mk_var(mid);
      FormulaPtr chained = tc(*c.c0, s, s_mid, phi, ctx, [&](FormulaPtr p) {
        return Formula::implies(std::move(p), ta(*c.c1, s_mid, phi, ctx));
      });
      return Formula::conj(ta(*c.c0, s, phi, ctx),
                           Formula::forall_states({mid}, std::move(chained)));
    }
    case Com::Kind::If: {
      FormulaPtr guard = bexp_formula(*c.cond, s);
      return Formula::conj(
          Formula::implies(guard, ta(*c.c0, s, phi, ctx)),
          Formula::implies(Formula::negate(guard), ta(*c.c1, s, phi, ctx)));
    }
    case Com::Kind::Call:
      return phi.lookup(c.callee).pre(s);
    case Com::Kind::While: {
      AssertionPtr inv = c.assertion;
      auto inv_at = [&](const StateTermPtr& st) {
        return translate(*inv, {{StateRef::cur(), st}});
      };
      SymState iter = ctx.fresh_state(stem_of(s));
      StateTermPtr s_iter = StateTerm::mk_var(iter);
      FormulaPtr preserved_body = ta(*c.c0, s_iter, phi, ctx);
      FormulaPtr aux_inside = Formula::forall_states(
          {iter},
          Formula::implies(inv_at(s_iter),
                           Formula::implies(bexp_formula(*c.cond, s_iter),
                                            std::move(preserved_body))));
      SymState it2 = ctx.fresh_state(stem_of(s));
      SymState it3 = ctx.fresh_state(stem_of(s));
      StateTermPtr s_it2 = StateTerm::mk_var(it2);
      StateTermPtr s_it3 = StateTerm::mk_var(it3);
      FormulaPtr preserves = tc(*c.c0, s_it2, s_it3, phi, ctx, [&](FormulaPtr p) {
        return Formula::implies(std::move(p), inv_at(s_it3));
      });
      FormulaPtr inv_preserved = Formula::forall_states(
          {it2, it3}, Formula::implies(inv_at(s_it2), std::move(preserves)));
      return Formula::conj(Formula::conj(inv_at(s), std::move(aux_inside)),
                           std::move(inv_preserved));
    }
  }
  throw std::logic_error("ta: bad kind");
}

std::vector<Goal> tf(const ContractEnv& phi, const ProcEnv& psi, VcContext& ctx) {
  SymContractEnv sym = SymContractEnv::from_contracts(phi);
  std::vector<Goal> goals;
  for (const auto& [name, body] : psi.all()) {
    Contract contract = phi.lookup(name);
    StateTermPtr s = StateTerm::mk_var(ctx.fresh_state("s"));
    StateTermPtr sp = StateTerm::mk_var(ctx.fresh_state("sp"));
    FormulaPtr pre_f = translate(*contract.pre, {{StateRef::cur(), s}});
    goals.push_back(Goal{"tf." + name + ".aux", {pre_f}, ta(*body, s, sym, ctx)});
    FormulaPtr post_f = translate(
        *contract.post, {{StateRef::old(), s}, {StateRef::cur(), sp}});
    goals.push_back(Goal{
        "tf." + name + ".main",
        {pre_f},
        tc(*body, s, sp, sym, ctx, [&](FormulaPtr p) {
          return Formula::implies(std::move(p), post_f);
        })});
  }
  return goals;
}

std::vector<Goal> hoare_goals(const AssertionPtr& pre, const Com& c,
                              const AssertionPtr& post, const ContractEnv& phi,
                              const ProcEnv& psi, VcContext& ctx) {
  check_unary_pre(*pre);
  check_unary_post(*post);
  std::vector<Goal> goals = tf(phi, psi, ctx);
  SymContractEnv sym = SymContractEnv::from_contracts(phi);
  StateTermPtr s = StateTerm::mk_var(ctx.fresh_state("s"));
  StateTermPtr sp = StateTerm::mk_var(ctx.fresh_state("sp"));
  FormulaPtr pre_f = translate(*pre, {{StateRef::cur(), s}});
  goals.push_back(Goal{"main.aux", {pre_f}, ta(c, s, sym, ctx)});
  FormulaPtr post_f =
      translate(*post, {{StateRef::old(), s}, {StateRef::cur(), sp}});
  goals.push_back(Goal{"main.vc",
                       {pre_f},
                       tc(c, s, sp, sym, ctx, [&](FormulaPtr p) {
                         return Formula::implies(std::move(p), post_f);
                       })});
  return goals;
}

// ------------------------------------------------------------- naive VCGen

FormulaPtr tc_naive(const Com& c, const StateTermPtr& s,
                    const SymContractEnv& phi, VcContext& ctx,
                    const NaiveCont& post) {
  switch (c.kind) {
    case Com::Kind::Skip:
      return post(s);
    case Com::Kind::Assign:
      return post(StateTerm::store(s, Term::constant(BigNat(c.loc.index)),
                                   aexp_term(*c.aexp, s)));
    case Com::Kind::IndirectAssign:
      return post(StateTerm::store(
          s, Term::select(s, Term::constant(BigNat(c.loc.index))),
          aexp_term(*c.aexp, s)));
    case Com::Kind::Assert:
      return Formula::implies(translate(*c.assertion, {{StateRef::cur(), s}}),
                              post(s));
    case Com::Kind::Seq:
      return tc_naive(*c.c0, s, phi, ctx, [&](const StateTermPtr& mid) {
        return tc_naive(*c.c1, mid, phi, ctx, post);
      });
    case Com::Kind::If: {
      FormulaPtr guard = bexp_formula(*c.cond, s);
      // The continuation is expanded once per branch: formula size doubles
      // at every conditional.
      return Formula::conj(
          Formula::implies(guard, tc_naive(*c.c0, s, phi, ctx, post)),
          Formula::implies(Formula::negate(guard),
                           tc_naive(*c.c1, s, phi, ctx, post)));
    }
    case Com::Kind::Call: {
      SymContract yc = phi.lookup(c.callee);
      SymState out = ctx.fresh_state("n");
      StateTermPtr s_out = StateTerm::mk_var(out);
      return Formula::forall_states(
          {out}, Formula::implies(Formula::conj(yc.pre(s), yc.post(s, s_out)),
                                  post(s_out)));
    }
    case Com::Kind::While: {
      auto inv_at = [&](const StateTermPtr& st) {
        return translate(*c.assertion, {{StateRef::cur(), st}});
      };
      SymState out = ctx.fresh_state("n");
      StateTermPtr s_out = StateTerm::mk_var(out);
      FormulaPtr hyp = Formula::conj(
          Formula::conj(inv_at(s), inv_at(s_out)),
          Formula::negate(bexp_formula(*c.cond, s_out)));
      return Formula::forall_states(
          {out}, Formula::implies(std::move(hyp), post(s_out)));
    }
  }
  throw std::logic_error("tc_naive: bad kind");
}

FormulaPtr ta_naive(const Com& c, const StateTermPtr& s,
                    const SymContractEnv& phi, VcContext& ctx) {
  switch (c.kind) {
    case Com::Kind::Skip:
    case Com::Kind::Assign:
    case Com::Kind::IndirectAssign:
      return f_true();
    case Com::Kind::Assert:
      return translate(*c.assertion, {{StateRef::cur(), s}});
    case Com::Kind::Seq:
      return Formula::conj(
          ta_naive(*c.c0, s, phi, ctx),
          tc_naive(*c.c0, s, phi, ctx, [&](const StateTermPtr& mid) {
            return ta_naive(*c.c1, mid, phi, ctx);
          }));
    case Com::Kind::If: {
      FormulaPtr guard = bexp_formula(*c.cond, s);
      return Formula::conj(
          Formula::implies(guard, ta_naive(*c.c0, s, phi, ctx)),
          Formula::implies(Formula::negate(guard),
                           ta_naive(*c.c1, s, phi, ctx)));
    }
    case Com::Kind::Call:
      return phi.lookup(c.callee).pre(s);
    case Com::Kind::While: {
      auto inv_at = [&](const StateTermPtr& st) {
        return translate(*c.assertion, {{StateRef::cur(), st}});
      };
      SymState iter = ctx.fresh_state("n");
      StateTermPtr s_iter = StateTerm::mk_var(iter);
      FormulaPtr aux_inside = Formula::forall_states(
          {iter},
          Formula::implies(inv_at(s_iter),
                           Formula::implies(bexp_formula(*c.cond, s_iter),
                                            ta_naive(*c.c0, s_iter, phi, ctx))));
      SymState it2 = ctx.fresh_state("n");
      StateTermPtr s_it2 = StateTerm::mk_var(it2);
      FormulaPtr preserves = Formula::forall_states(
          {it2},
          Formula::implies(
              Formula::conj(inv_at(s_it2), bexp_formula(*c.cond, s_it2)),
              tc_naive(*c.c0, s_it2, phi, ctx,
                       [&](const StateTermPtr& st) { return inv_at(st); })));
      return Formula::conj(Formula::conj(inv_at(s), std::move(aux_inside)),
                           std::move(preserves));
    }
  }
  throw std::logic_error("ta_naive: bad kind");
}

std::vector<Goal> tf_naive(const ContractEnv& phi, const ProcEnv& psi,
                           VcContext& ctx) {
  SymContractEnv sym = SymContractEnv::from_contracts(phi);
  std::vector<Goal> goals;
  for (const auto& [name, body] : psi.all()) {
    Contract contract = phi.lookup(name);
    StateTermPtr s = StateTerm::mk_var(ctx.fresh_state("s"));
    FormulaPtr pre_f = translate(*contract.pre, {{StateRef::cur(), s}});
    goals.push_back(
        Goal{"tfn." + name + ".aux", {pre_f}, ta_naive(*body, s, sym, ctx)});
    AssertionPtr post = contract.post;
    goals.push_back(Goal{
        "tfn." + name + ".main",
        {pre_f},
        tc_naive(*body, s, sym, ctx, [&](const StateTermPtr& sp) {
          return translate(*post, {{StateRef::old(), s}, {StateRef::cur(), sp}});
        })});
  }
  return goals;
}

std::vector<Goal> hoare_goals_naive(const AssertionPtr& pre, const Com& c,
                                    const AssertionPtr& post,
                                    const ContractEnv& phi, const ProcEnv& psi,
                                    VcContext& ctx) {
  check_unary_pre(*pre);
  check_unary_post(*post);
  std::vector<Goal> goals = tf_naive(phi, psi, ctx);
  SymContractEnv sym = SymContractEnv::from_contracts(phi);
  StateTermPtr s = StateTerm::mk_var(ctx.fresh_state("s"));
  FormulaPtr pre_f = translate(*pre, {{StateRef::cur(), s}});
  goals.push_back(Goal{"main.aux", {pre_f}, ta_naive(c, s, sym, ctx)});
  goals.push_back(Goal{
      "main.vc",
      {pre_f},
      tc_naive(c, s, sym, ctx, [&](const StateTermPtr& sp) {
        return translate(*post, {{StateRef::old(), s}, {StateRef::cur(), sp}});
      })});
  return goals;
}

} // namespace relic
