#include "relic/solver_core.hpp"

#include <algorithm>
#include <cassert>
#include <set>

#include "relic/simplex.hpp"

namespace relic {

// ----------------------------------------------------------- substitution

namespace {

using StateSub = std::map<std::string, StateTermPtr>;
using IntSub = std::map<std::string, TermPtr>;

TermPtr sub_term(const TermPtr& t, const StateSub& sm, const IntSub& im);

StateTermPtr sub_state(const StateTermPtr& s, const StateSub& sm,
                       const IntSub& im) {
  if (s->kind == StateTerm::Kind::Var) {
    auto it = sm.find(s->var.name);
    return it != sm.end() ? it->second : s;
  }
  return StateTerm::store(sub_state(s->base, sm, im), sub_term(s->addr, sm, im),
                          sub_term(s->value, sm, im));
}

TermPtr sub_term(const TermPtr& t, const StateSub& sm, const IntSub& im) {
  switch (t->kind) {
    case Term::Kind::Const: return t;
    case Term::Kind::Var: {
      auto it = im.find(t->var);
      return it != im.end() ? it->second : t;
    }
    case Term::Kind::Select:
      return Term::select(sub_state(t->state, sm, im), sub_term(t->addr, sm, im));
    case Term::Kind::Arith:
      return Term::arith(t->op, sub_term(t->a, sm, im), sub_term(t->b, sm, im));
  }
  return t;
}

FormulaPtr sub_formula(const FormulaPtr& f, const StateSub& sm, const IntSub& im) {
  switch (f->kind) {
    case Formula::Kind::Bool: return f;
    case Formula::Kind::Cmp:
      return Formula::compare(f->cmp, sub_term(f->t0, sm, im),
                              sub_term(f->t1, sm, im));
    case Formula::Kind::StateEq:
      return Formula::state_eq(sub_state(f->s0, sm, im), sub_state(f->s1, sm, im));
    case Formula::Kind::CallAtom:
      return Formula::call_atom(f->name, sub_state(f->s0, sm, im),
                                sub_state(f->s1, sm, im));
    case Formula::Kind::Not: return Formula::negate(sub_formula(f->f0, sm, im));
    case Formula::Kind::And:
      return Formula::conj(sub_formula(f->f0, sm, im), sub_formula(f->f1, sm, im));
    case Formula::Kind::Or:
      return Formula::disj(sub_formula(f->f0, sm, im), sub_formula(f->f1, sm, im));
    case Formula::Kind::Implies:
      return Formula::implies(sub_formula(f->f0, sm, im),
                              sub_formula(f->f1, sm, im));
    case Formula::Kind::ForallState: {
      StateSub sm2 = sm;
      for (const auto& v : f->states) sm2.erase(v.name);
      std::vector<FormulaPtr> pats;
      for (const auto& p : f->patterns) pats.push_back(sub_formula(p, sm2, im));
      return Formula::forall_states(f->states, sub_formula(f->f0, sm2, im),
                                    std::move(pats));
    }
    case Formula::Kind::ForallInt:
    case Formula::Kind::ExistsInt: {
      IntSub im2 = im;
      im2.erase(f->name);
      TermPtr bound = f->bound ? sub_term(f->bound, sm, im) : nullptr;
      FormulaPtr body = sub_formula(f->f0, sm, im2);
      return f->kind == Formula::Kind::ForallInt
                 ? Formula::forall_int(f->name, bound, body)
                 : Formula::exists_int(f->name, bound, body);
    }
  }
  return f;
}

// ------------------------------------------------------------ preparation

constexpr uint64_t kMaxBoundedExpansion = 64;

struct PrepCtx {
  PreparedGoal out;
  uint64_t skolem_states = 0;
  uint64_t skolem_ints = 0;
  std::string suffix; // distinguishes skolems of instantiated hypotheses

  std::string fresh_state(const std::string& base) {
    return base + "!" + suffix + std::to_string(skolem_states++);
  }
  std::string fresh_int(const std::string& base) {
    return base + "!" + suffix + std::to_string(skolem_ints++);
  }
};

// Returns a quantifier-free formula encoding (pos ? f : !f); any content
// that cannot be encoded is replaced by True (a satisfiability
// over-approximation) and flagged.
FormulaPtr xform(const FormulaPtr& f, bool pos, PrepCtx& ctx, StateSub sm,
                 IntSub im) {
  switch (f->kind) {
    case Formula::Kind::Bool:
      return Formula::boolean(pos == f->bval);
    case Formula::Kind::Cmp:
    case Formula::Kind::StateEq:
    case Formula::Kind::CallAtom: {
      FormulaPtr atom = sub_formula(f, sm, im);
      return pos ? atom : Formula::negate(atom);
    }
    case Formula::Kind::Not:
      return xform(f->f0, !pos, ctx, sm, im);
    case Formula::Kind::And:
      return pos ? Formula::conj(xform(f->f0, true, ctx, sm, im),
                                 xform(f->f1, true, ctx, sm, im))
                 : Formula::disj(xform(f->f0, false, ctx, sm, im),
                                 xform(f->f1, false, ctx, sm, im));
    case Formula::Kind::Or:
      return pos ? Formula::disj(xform(f->f0, true, ctx, sm, im),
                                 xform(f->f1, true, ctx, sm, im))
                 : Formula::conj(xform(f->f0, false, ctx, sm, im),
                                 xform(f->f1, false, ctx, sm, im));
    case Formula::Kind::Implies:
      return pos ? Formula::disj(xform(f->f0, false, ctx, sm, im),
                                 xform(f->f1, true, ctx, sm, im))
                 : Formula::conj(xform(f->f0, true, ctx, sm, im),
                                 xform(f->f1, false, ctx, sm, im));
    case Formula::Kind::ForallState: {
      if (!pos) {
        // exists after negation: skolemize each bound state
        StateSub sm2 = sm;
        for (const auto& v : f->states) {
          std::string c = ctx.fresh_state(v.name);
          ctx.out.state_consts.push_back(c);
          sm2[v.name] = StateTerm::mk_var(SymState{c});
        }
        return xform(f->f0, false, ctx, sm2, im);
      }
      // kept hypothesis: patterns must cover every bound variable with
      // plain call atoms
      std::set<std::string> covered;
      bool ok = !f->patterns.empty();
      for (const auto& p : f->patterns) {
        if (p->kind != Formula::Kind::CallAtom ||
            p->s0->kind != StateTerm::Kind::Var ||
            p->s1->kind != StateTerm::Kind::Var) {
          ok = false;
          break;
        }
        covered.insert(p->s0->var.name);
        covered.insert(p->s1->var.name);
      }
      if (ok)
        for (const auto& v : f->states)
          if (!covered.count(v.name)) ok = false;
      if (!ok) {
        ctx.out.dropped_hypotheses = true;
        return Formula::boolean(true);
      }
      StateSub sm2 = sm;
      for (const auto& v : f->states) sm2.erase(v.name);
      QuantifiedHyp hyp;
      hyp.vars = f->states;
      for (const auto& p : f->patterns)
        hyp.patterns.push_back(sub_formula(p, sm2, im));
      hyp.body = sub_formula(f->f0, sm2, im);
      ctx.out.quantified.push_back(std::move(hyp));
      return Formula::boolean(true);
    }
    case Formula::Kind::ForallInt:
    case Formula::Kind::ExistsInt: {
      bool is_forall = f->kind == Formula::Kind::ForallInt;
      TermPtr bound = f->bound ? sub_term(f->bound, sm, im) : nullptr;
      // (forall, pos) and (exists, !pos) expand; the mirrored cases
      // skolemize.
      bool expand = (is_forall == pos);
      if (expand) {
        if (!bound || bound->kind != Term::Kind::Const ||
            !bound->value.fits_u64() ||
            bound->value.to_u64() > kMaxBoundedExpansion) {
          ctx.out.dropped_hypotheses = true;
          return Formula::boolean(true);
        }
        uint64_t n = bound->value.to_u64();
        FormulaPtr acc = Formula::boolean(true);
        for (uint64_t k = 0; k < n; ++k) {
          IntSub im2 = im;
          im2[f->name] = Term::constant(BigNat(k));
          FormulaPtr part = xform(f->f0, pos, ctx, sm, im2);
          acc = k == 0 ? part : Formula::conj(std::move(acc), std::move(part));
        }
        return acc;
      }
      // skolemize
      std::string c = ctx.fresh_int(f->name);
      ctx.out.int_consts.push_back(c);
      IntSub im2 = im;
      im2[f->name] = Term::variable(c);
      FormulaPtr body = xform(f->f0, pos, ctx, sm, im2);
      if (bound) {
        FormulaPtr in_range =
            Formula::compare(CmpOp::Lt, Term::variable(c), bound);
        body = Formula::conj(std::move(in_range), std::move(body));
      }
      return body;
    }
  }
  return f;
}

void collect_symbols(const TermPtr& t, PreparedGoal& pg, std::set<std::string>& st,
                     std::set<std::string>& iv, std::set<std::string>& pr);

void collect_symbols_state(const StateTermPtr& s, PreparedGoal& pg,
                           std::set<std::string>& st, std::set<std::string>& iv,
                           std::set<std::string>& pr) {
  if (s->kind == StateTerm::Kind::Var) {
    st.insert(s->var.name);
    return;
  }
  collect_symbols_state(s->base, pg, st, iv, pr);
  collect_symbols(s->addr, pg, st, iv, pr);
  collect_symbols(s->value, pg, st, iv, pr);
}

void collect_symbols(const TermPtr& t, PreparedGoal& pg, std::set<std::string>& st,
                     std::set<std::string>& iv, std::set<std::string>& pr) {
  switch (t->kind) {
    case Term::Kind::Const: return;
    case Term::Kind::Var: iv.insert(t->var); return;
    case Term::Kind::Select:
      collect_symbols_state(t->state, pg, st, iv, pr);
      collect_symbols(t->addr, pg, st, iv, pr);
      return;
    case Term::Kind::Arith:
      collect_symbols(t->a, pg, st, iv, pr);
      collect_symbols(t->b, pg, st, iv, pr);
      return;
  }
}

void collect_symbols_formula(const FormulaPtr& f, PreparedGoal& pg,
                             std::set<std::string>& st, std::set<std::string>& iv,
                             std::set<std::string>& pr,
                             std::set<std::string> bound_states = {}) {
  switch (f->kind) {
    case Formula::Kind::Bool: return;
    case Formula::Kind::Cmp:
      collect_symbols(f->t0, pg, st, iv, pr);
      collect_symbols(f->t1, pg, st, iv, pr);
      return;
    case Formula::Kind::StateEq:
      collect_symbols_state(f->s0, pg, st, iv, pr);
      collect_symbols_state(f->s1, pg, st, iv, pr);
      return;
    case Formula::Kind::CallAtom:
      pr.insert(f->name);
      collect_symbols_state(f->s0, pg, st, iv, pr);
      collect_symbols_state(f->s1, pg, st, iv, pr);
      return;
    case Formula::Kind::Not:
      collect_symbols_formula(f->f0, pg, st, iv, pr, bound_states);
      return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
      collect_symbols_formula(f->f0, pg, st, iv, pr, bound_states);
      collect_symbols_formula(f->f1, pg, st, iv, pr, bound_states);
      return;
    case Formula::Kind::ForallState:
    case Formula::Kind::ForallInt:
    case Formula::Kind::ExistsInt:
      collect_symbols_formula(f->f0, pg, st, iv, pr, bound_states);
      return;
  }
}

} // namespace

PreparedGoal prepare_goal(const Goal& g) {
  PrepCtx ctx;
  ctx.out.label = g.label;
  for (const auto& h : g.hypotheses)
    ctx.out.asserted.push_back(xform(h, true, ctx, {}, {}));
  ctx.out.asserted.push_back(xform(g.conclusion, false, ctx, {}, {}));

  // Collect free symbols (goal states that were never bound, predicate
  // names) so declarations are complete and deterministic.
  std::set<std::string> st(ctx.out.state_consts.begin(),
                           ctx.out.state_consts.end());
  std::set<std::string> iv(ctx.out.int_consts.begin(), ctx.out.int_consts.end());
  std::set<std::string> pr;
  for (const auto& a : ctx.out.asserted)
    collect_symbols_formula(a, ctx.out, st, iv, pr);
  for (const auto& q : ctx.out.quantified) {
    std::set<std::string> qst, qiv;
    collect_symbols_formula(q.body, ctx.out, qst, qiv, pr);
    for (const auto& v : q.vars) qst.erase(v.name);
    st.insert(qst.begin(), qst.end());
    iv.insert(qiv.begin(), qiv.end());
  }
  ctx.out.state_consts.assign(st.begin(), st.end());
  ctx.out.int_consts.assign(iv.begin(), iv.end());
  ctx.out.call_preds.assign(pr.begin(), pr.end());
  return ctx.out;
}

std::vector<FormulaPtr> instantiate_hyps(PreparedGoal& pg) {
  // ground call atoms present in the asserted set
  struct GroundAtom {
    std::string name;
    StateTermPtr s0, s1;
  };
  std::vector<GroundAtom> atoms;
  std::set<std::string> seen;
  std::function<void(const FormulaPtr&)> scan = [&](const FormulaPtr& f) {
    switch (f->kind) {
      case Formula::Kind::CallAtom: {
        std::string key = f->name + "|" + state_term_str(*f->s0) + "|" +
                          state_term_str(*f->s1);
        if (seen.insert(key).second) atoms.push_back({f->name, f->s0, f->s1});
        return;
      }
      case Formula::Kind::Not: scan(f->f0); return;
      case Formula::Kind::And:
      case Formula::Kind::Or:
      case Formula::Kind::Implies:
        scan(f->f0);
        scan(f->f1);
        return;
      default: return;
    }
  };
  for (const auto& a : pg.asserted) scan(a);

  std::vector<FormulaPtr> instances;
  std::set<std::string> inst_seen;
  constexpr size_t kMaxInstances = 4096;
  for (const auto& hyp : pg.quantified) {
    // candidate ground atoms per pattern position
    std::vector<std::vector<size_t>> cands(hyp.patterns.size());
    for (size_t p = 0; p < hyp.patterns.size(); ++p)
      for (size_t a = 0; a < atoms.size(); ++a)
        if (atoms[a].name == hyp.patterns[p]->name) cands[p].push_back(a);
    size_t combos = 1;
    bool any = true;
    for (const auto& c : cands) {
      combos *= c.size();
      if (c.empty()) any = false;
      if (combos > kMaxInstances) break;
    }
    if (!any) continue;
    if (combos > kMaxInstances) {
      pg.dropped_hypotheses = true;
      continue;
    }
    std::vector<size_t> idx(hyp.patterns.size(), 0);
    for (;;) {
      StateSub sm;
      for (size_t p = 0; p < hyp.patterns.size(); ++p) {
        const auto& pat = hyp.patterns[p];
        const auto& ga = atoms[cands[p][idx[p]]];
        sm[pat->s0->var.name] = ga.s0;
        sm[pat->s1->var.name] = ga.s1;
      }
      FormulaPtr inst = sub_formula(hyp.body, sm, {});
      std::string key = formula_str(*inst);
      if (inst_seen.insert(key).second) instances.push_back(inst);
      // next combination
      size_t p = 0;
      for (; p < idx.size(); ++p) {
        if (++idx[p] < cands[p].size()) break;
        idx[p] = 0;
      }
      if (p == idx.size()) break;
      if (idx.empty()) break;
    }
    if (hyp.patterns.empty()) pg.dropped_hypotheses = true;
  }
  return instances;
}

// ------------------------------------------------------ concrete evaluator

namespace {

BigNat eval_term_concrete(const Term& t, const ConcreteEnv& env);

BigNat read_state_concrete(const StateTerm& s, const TermPtr& addr_t,
                           const ConcreteEnv& env) {
  BigNat addr = eval_term_concrete(*addr_t, env);
  const StateTerm* cur = &s;
  for (;;) {
    if (cur->kind == StateTerm::Kind::Var) {
      auto it = env.states.find(cur->var.name);
      if (it == env.states.end()) return BigNat(0);
      return it->second.read(addr);
    }
    BigNat waddr = eval_term_concrete(*cur->addr, env);
    if (waddr == addr) return eval_term_concrete(*cur->value, env);
    cur = cur->base.get();
  }
}

BigNat eval_term_concrete(const Term& t, const ConcreteEnv& env) {
  switch (t.kind) {
    case Term::Kind::Const: return t.value;
    case Term::Kind::Var: {
      auto it = env.ints.find(t.var);
      if (it == env.ints.end()) return BigNat(0);
      return it->second.magnitude();
    }
    case Term::Kind::Select: {
      // inline read to avoid materializing the chain
      return read_state_concrete(*t.state, t.addr, env);
    }
    case Term::Kind::Arith: {
      BigNat a = eval_term_concrete(*t.a, env);
      BigNat b = eval_term_concrete(*t.b, env);
      switch (t.op) {
        case ArithOp::Add: return a + b;
        case ArithOp::Mul: return a * b;
        case ArithOp::Monus: return a.monus(b);
      }
    }
  }
  throw std::logic_error("eval_term_concrete: bad kind");
}

std::string state_key(const MemState& m) {
  return m.str();
}

} // namespace

MemState materialize_state(const StateTerm& s, const ConcreteEnv& env) {
  if (s.kind == StateTerm::Kind::Var) {
    auto it = env.states.find(s.var.name);
    return it == env.states.end() ? MemState{} : it->second;
  }
  MemState base = materialize_state(*s.base, env);
  base.set(eval_term_concrete(*s.addr, env), eval_term_concrete(*s.value, env));
  return base;
}

bool eval_formula_concrete(const Formula& f, const ConcreteEnv& env) {
  switch (f.kind) {
    case Formula::Kind::Bool: return f.bval;
    case Formula::Kind::Cmp: {
      BigNat a = eval_term_concrete(*f.t0, env);
      BigNat b = eval_term_concrete(*f.t1, env);
      switch (f.cmp) {
        case CmpOp::Eq: return a == b;
        case CmpOp::Ne: return a != b;
        case CmpOp::Le: return a <= b;
        case CmpOp::Lt: return a < b;
        case CmpOp::Ge: return a >= b;
        case CmpOp::Gt: return a > b;
      }
      return false;
    }
    case Formula::Kind::StateEq:
      return materialize_state(*f.s0, env) == materialize_state(*f.s1, env);
    case Formula::Kind::CallAtom: {
      std::string key = f.name + "|" + state_key(materialize_state(*f.s0, env)) +
                        "|" + state_key(materialize_state(*f.s1, env));
      auto it = env.calls.find(key);
      if (it == env.calls.end())
        throw std::logic_error("call atom truth not in model: " + key);
      return it->second;
    }
    case Formula::Kind::Not: return !eval_formula_concrete(*f.f0, env);
    case Formula::Kind::And:
      return eval_formula_concrete(*f.f0, env) && eval_formula_concrete(*f.f1, env);
    case Formula::Kind::Or:
      return eval_formula_concrete(*f.f0, env) || eval_formula_concrete(*f.f1, env);
    case Formula::Kind::Implies:
      return !eval_formula_concrete(*f.f0, env) ||
             eval_formula_concrete(*f.f1, env);
    default:
      throw std::logic_error("eval_formula_concrete: quantifier in ground formula");
  }
}

// ------------------------------------------------------------ ground core

namespace {

// Linear integer form over solver variables.
struct LinI {
  std::map<int, BigInt> coef;
  BigInt cst;

  void add(const LinI& o, const BigInt& scale) {
    for (const auto& [v, c] : o.coef) {
      BigInt& slot = coef[v];
      slot = slot + c * scale;
      if (slot.is_zero()) coef.erase(v);
    }
    cst = cst + o.cst * scale;
  }
  bool is_const() const { return coef.empty(); }
  std::string key() const {
    std::string s = cst.str();
    for (const auto& [v, c] : coef) s += "|" + std::to_string(v) + ":" + c.str();
    return s;
  }
};

struct GroundCore {
  // ---- solver variables
  int nvars = 0;
  std::vector<std::string> var_names; // debug / named lookup
  std::map<std::string, int> named;
  int new_var(const std::string& name) {
    var_names.push_back(name);
    return nvars++;
  }

  // ---- array terms
  struct Arr {
    bool base;
    std::string name; // base only
    int chain_base = -1;
    LinI idx;   // store address
    LinI val;   // store value
    StateTermPtr src; // original term (for replay of call args)
  };
  std::vector<Arr> arrs;
  std::map<std::string, int> base_ids;
  std::map<std::string, int> store_ids;

  // ---- atoms: lin <= 0 or lin = 0
  struct Atom {
    bool is_eq;
    LinI lin;
    int sat_var;
  };
  std::vector<Atom> atoms;
  std::map<std::string, int> atom_ids;

  // ---- SAT layer
  int sat_vars = 0;
  std::vector<std::vector<int>> clauses;
  int true_var = 0;
  int new_sat_var() { return ++sat_vars; }

  // call atoms
  struct CallA {
    std::string proc;
    StateTermPtr s0, s1;
    int arr0, arr1;
    int sat_var;
  };
  std::vector<CallA> calls;
  std::map<std::string, int> call_ids;

  // reads of base arrays
  struct Read {
    int arr;
    LinI idx;
    int var;
  };
  std::vector<Read> reads;
  std::map<std::string, int> read_ids; // (arr, idx key) -> read index

  // ite flattening memo: (cond lit, then key, else key) -> var
  std::map<std::string, int> ite_ids;

  // array equality atoms (propositional, defined by clauses)
  struct AEq {
    int arr0, arr1;
    int sat_var;
    int witness_var; // index variable
  };
  std::vector<AEq> aeqs;
  std::map<std::string, int> aeq_ids;

  // all index terms (for the pointwise reduction)
  std::vector<LinI> index_terms;
  std::set<std::string> index_keys;

  bool overflow = false; // structure grew beyond limits

  void note_index(const LinI& l) {
    if (index_keys.insert(l.key()).second) index_terms.push_back(l);
  }

  // ---------- literals: DIMACS-ish ints over sat vars
  static constexpr int kTrueLit = INT32_MAX;
  static constexpr int kFalseLit = INT32_MIN;

  int atom_lit(bool is_eq, LinI lin) {
    if (lin.is_const()) {
      bool truth = is_eq ? lin.cst.is_zero() : lin.cst <= BigInt(0);
      return truth ? kTrueLit : kFalseLit;
    }
    // canonical sign for equalities
    if (is_eq && lin.coef.begin()->second.negative()) {
      LinI neg;
      neg.cst = -lin.cst;
      for (const auto& [v, c] : lin.coef) neg.coef[v] = -c;
      lin = std::move(neg);
    }
    std::string key = (is_eq ? "=" : "<") + lin.key();
    auto it = atom_ids.find(key);
    if (it != atom_ids.end()) return atoms[it->second].sat_var;
    Atom a{is_eq, std::move(lin), new_sat_var()};
    atom_ids[key] = static_cast<int>(atoms.size());
    atoms.push_back(std::move(a));
    return atoms.back().sat_var;
  }

  void add_clause(std::vector<int> lits) {
    // sentinels are normalized by neg(), so only the two constants appear
    std::vector<int> out;
    for (int l : lits) {
      if (l == kTrueLit) return; // satisfied
      if (l == kFalseLit) continue;
      out.push_back(l);
    }
    clauses.push_back(std::move(out));
  }

  static int neg(int lit) {
    if (lit == kTrueLit) return kFalseLit;
    if (lit == kFalseLit) return kTrueLit;
    return -lit;
  }

  // ---------- term conversion
  LinI mk_ite(int cond_lit, const LinI& then_l, const LinI& else_l) {
    if (cond_lit == kTrueLit) return then_l;
    if (cond_lit == kFalseLit) return else_l;
    if (then_l.key() == else_l.key()) return then_l;
    std::string key =
        std::to_string(cond_lit) + "?" + then_l.key() + ":" + else_l.key();
    auto it = ite_ids.find(key);
    LinI out;
    if (it != ite_ids.end()) {
      out.coef[it->second] = BigInt(1);
      return out;
    }
    int v = new_var("ite" + std::to_string(ite_ids.size()));
    ite_ids[key] = v;
    LinI vl;
    vl.coef[v] = BigInt(1);
    // cond -> v = then ; !cond -> v = else
    LinI d1 = vl;
    d1.add(then_l, BigInt(-1));
    LinI d2 = vl;
    d2.add(else_l, BigInt(-1));
    add_clause({neg(cond_lit), atom_lit(true, std::move(d1))});
    add_clause({cond_lit, atom_lit(true, std::move(d2))});
    out.coef[v] = BigInt(1);
    return out;
  }

  LinI mk_read(int arr, const LinI& idx) {
    const Arr& a = arrs[arr];
    if (a.base) {
      std::string key = std::to_string(arr) + "@" + idx.key();
      auto it = read_ids.find(key);
      LinI out;
      if (it != read_ids.end()) {
        out.coef[reads[it->second].var] = BigInt(1);
        return out;
      }
      int v = new_var(a.name + "[" + idx.key() + "]");
      read_ids[key] = static_cast<int>(reads.size());
      reads.push_back(Read{arr, idx, v});
      out.coef[v] = BigInt(1);
      return out;
    }
    // select over store
    LinI diff = a.idx;
    diff.add(idx, BigInt(-1));
    int cond = atom_lit(true, std::move(diff));
    return mk_ite(cond, a.val, mk_read(a.chain_base, idx));
  }

  int mk_product_var(const LinI& a, const LinI& b) {
    std::string k1 = a.key(), k2 = b.key();
    if (k2 < k1) std::swap(k1, k2);
    std::string key = k1 + "*" + k2;
    auto it = ite_ids.find("prod:" + key);
    if (it != ite_ids.end()) return it->second;
    int v = new_var("prod" + std::to_string(nvars));
    ite_ids["prod:" + key] = v;
    return v;
  }
};

} // namespace

// ----------------------------------------------------------- theory check

namespace {

struct TheoryLit {
  bool is_eq;   // equality atom
  bool truth;   // literal polarity
  LinI lin;     // atom form (lin <= 0 / lin = 0)
  int sat_lit;  // for blocking clauses
};

struct TheoryOutcome {
  enum class Kind { Infeasible, Model, Limit } kind;
  std::vector<int> core;          // sat literals
  std::map<int, BigInt> model;    // var -> value
};

LinForm to_linform(const LinI& l) {
  std::map<int, BigRat> m;
  for (const auto& [v, c] : l.coef) m[v] = BigRat(c);
  return lin_normalize(std::move(m));
}

struct TheorySolver {
  const std::vector<TheoryLit>& lits;
  int nvars;
  int budget = 3000;
  bool limit_hit = false;

  explicit TheorySolver(const std::vector<TheoryLit>& l, int nv)
      : lits(l), nvars(nv) {}

  // reasons: >= 0 index into lits; < 0 internal branching bound
  TheoryOutcome run() {
    Simplex sx(nvars);
    std::vector<size_t> nes;
    for (size_t i = 0; i < lits.size(); ++i) {
      const TheoryLit& tl = lits[i];
      int reason = static_cast<int>(i);
      LinForm lf = to_linform(tl.lin);
      BigRat c(tl.lin.cst);
      bool ok = true;
      if (tl.is_eq) {
        if (tl.truth) {
          ok = sx.assert_upper(lf, -c, reason) && sx.assert_lower(lf, -c, reason);
        } else {
          nes.push_back(i);
        }
      } else {
        if (tl.truth)
          ok = sx.assert_upper(lf, -c, reason);
        else
          ok = sx.assert_lower(lf, BigRat(1) - c, reason);
      }
      if (!ok) return infeasible(sx.conflict());
    }
    // nonnegativity of every variable
    for (int v = 0; v < nvars; ++v) {
      LinForm lf{{v, BigRat(1)}};
      if (!sx.assert_lower(lf, BigRat(0), -1000000))
        return infeasible(sx.conflict());
    }
    return solve_rec(sx, nes);
  }

  TheoryOutcome infeasible(const std::vector<int>& reasons) {
    TheoryOutcome out;
    out.kind = TheoryOutcome::Kind::Infeasible;
    for (int r : reasons)
      if (r >= 0) out.core.push_back(lits[static_cast<size_t>(r)].sat_lit);
    std::sort(out.core.begin(), out.core.end());
    out.core.erase(std::unique(out.core.begin(), out.core.end()), out.core.end());
    return out;
  }

  TheoryOutcome solve_rec(Simplex& sx, const std::vector<size_t>& nes) {
    if (--budget < 0) {
      limit_hit = true;
      TheoryOutcome out;
      out.kind = TheoryOutcome::Kind::Limit;
      return out;
    }
    if (!sx.check()) return infeasible(sx.conflict());

    // a disequality violated by the current point?
    for (size_t ne : nes) {
      const TheoryLit& tl = lits[ne];
      BigRat v(tl.lin.cst);
      for (const auto& [var, c] : tl.lin.coef) v = v + BigRat(c) * sx.value(var);
      if (!v.is_zero()) continue;
      LinForm lf = to_linform(tl.lin);
      BigRat cst(tl.lin.cst);
      Simplex left = sx;
      TheoryOutcome r1 =
          left.assert_upper(lf, -cst - BigRat(1), static_cast<int>(ne))
              ? solve_rec(left, nes)
              : infeasible(left.conflict());
      if (r1.kind != TheoryOutcome::Kind::Infeasible) return r1;
      Simplex right = sx;
      TheoryOutcome r2 =
          right.assert_lower(lf, -cst + BigRat(1), static_cast<int>(ne))
              ? solve_rec(right, nes)
              : infeasible(right.conflict());
      if (r2.kind != TheoryOutcome::Kind::Infeasible) return r2;
      TheoryOutcome out;
      out.kind = TheoryOutcome::Kind::Infeasible;
      out.core = r1.core;
      out.core.insert(out.core.end(), r2.core.begin(), r2.core.end());
      out.core.push_back(lits[ne].sat_lit);
      std::sort(out.core.begin(), out.core.end());
      out.core.erase(std::unique(out.core.begin(), out.core.end()),
                     out.core.end());
      return out;
    }

    // branch-and-bound toward an integer point
    for (int v = 0; v < sx.problem_vars(); ++v) {
      BigRat b = sx.value(v);
      if (b.is_integer()) continue;
      LinForm lf{{v, BigRat(1)}};
      Simplex down = sx;
      TheoryOutcome r1 = down.assert_upper(lf, BigRat(b.floor()), -2000000)
                             ? solve_rec(down, nes)
                             : infeasible(down.conflict());
      if (r1.kind != TheoryOutcome::Kind::Infeasible) return r1;
      Simplex up = sx;
      TheoryOutcome r2 = up.assert_lower(lf, BigRat(b.ceil()), -2000000)
                             ? solve_rec(up, nes)
                             : infeasible(up.conflict());
      if (r2.kind != TheoryOutcome::Kind::Infeasible) return r2;
      TheoryOutcome out;
      out.kind = TheoryOutcome::Kind::Infeasible;
      out.core = r1.core;
      out.core.insert(out.core.end(), r2.core.begin(), r2.core.end());
      std::sort(out.core.begin(), out.core.end());
      out.core.erase(std::unique(out.core.begin(), out.core.end()),
                     out.core.end());
      return out;
    }

    TheoryOutcome out;
    out.kind = TheoryOutcome::Kind::Model;
    for (int v = 0; v < sx.problem_vars(); ++v)
      out.model[v] = sx.value(v).num();
    return out;
  }
};

// ------------------------------------------------------------- SAT solver

struct SatSolver {
  int nvars = 0;
  std::vector<std::vector<int>> clauses;
  std::vector<int8_t> assign; // 1-indexed: 0 unknown, 1 true, -1 false
  std::vector<char> phase;    // preferred first value
  long long conflicts = 0;
  static constexpr long long kMaxConflicts = 2000000;

  bool value(int lit) const {
    int v = assign[static_cast<size_t>(std::abs(lit))];
    return lit > 0 ? v == 1 : v == -1;
  }
  bool falsified(int lit) const {
    int v = assign[static_cast<size_t>(std::abs(lit))];
    return lit > 0 ? v == -1 : v == 1;
  }

  // returns false on conflict
  bool propagate(std::vector<int>& trail) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& cl : clauses) {
        int unassigned = 0;
        int last = 0;
        bool sat = false;
        for (int lit : cl) {
          if (value(lit)) {
            sat = true;
            break;
          }
          if (!falsified(lit)) {
            ++unassigned;
            last = lit;
            if (unassigned > 1) break;
          }
        }
        if (sat || unassigned > 1) continue;
        if (unassigned == 0) return false;
        assign[static_cast<size_t>(std::abs(last))] = last > 0 ? 1 : -1;
        trail.push_back(last);
        changed = true;
      }
    }
    return true;
  }

  bool solve_rec() {
    std::vector<int> trail;
    if (!propagate(trail)) {
      undo(trail);
      ++conflicts;
      return false;
    }
    int var = 0;
    for (int v = 1; v <= nvars; ++v)
      if (assign[static_cast<size_t>(v)] == 0) {
        var = v;
        break;
      }
    if (var == 0) return true;
    if (conflicts > kMaxConflicts) {
      undo(trail);
      return false;
    }
    for (int attempt = 0; attempt < 2; ++attempt) {
      bool first = phase[static_cast<size_t>(var)] != 0;
      bool val = attempt == 0 ? first : !first;
      assign[static_cast<size_t>(var)] = val ? 1 : -1;
      if (solve_rec()) return true;
      assign[static_cast<size_t>(var)] = 0;
    }
    undo(trail);
    return false;
  }

  void undo(std::vector<int>& trail) {
    for (int lit : trail) assign[static_cast<size_t>(std::abs(lit))] = 0;
    trail.clear();
  }

  bool solve() {
    assign.assign(static_cast<size_t>(nvars) + 1, 0);
    return solve_rec();
  }
};

// --------------------------------------------------- formula -> SAT layer

struct Encoder {
  GroundCore& gc;

  explicit Encoder(GroundCore& g) : gc(g) {}

  int convert_array(const StateTermPtr& s) {
    if (s->kind == StateTerm::Kind::Var) {
      auto it = gc.base_ids.find(s->var.name);
      if (it != gc.base_ids.end()) return it->second;
      GroundCore::Arr a;
      a.base = true;
      a.name = s->var.name;
      a.src = s;
      int id = static_cast<int>(gc.arrs.size());
      gc.arrs.push_back(std::move(a));
      gc.base_ids[s->var.name] = id;
      return id;
    }
    int base = convert_array(s->base);
    LinI idx = convert_term(s->addr);
    LinI val = convert_term(s->value);
    gc.note_index(idx);
    std::string key = std::to_string(base) + "[" + idx.key() + ":=" + val.key() + "]";
    auto it = gc.store_ids.find(key);
    if (it != gc.store_ids.end()) return it->second;
    GroundCore::Arr a;
    a.base = false;
    a.chain_base = base;
    a.idx = std::move(idx);
    a.val = std::move(val);
    a.src = s;
    int id = static_cast<int>(gc.arrs.size());
    gc.arrs.push_back(std::move(a));
    gc.store_ids[key] = id;
    return id;
  }

  LinI convert_term(const TermPtr& t) {
    switch (t->kind) {
      case Term::Kind::Const: {
        LinI l;
        l.cst = BigInt::from_nat(t->value);
        return l;
      }
      case Term::Kind::Var: {
        auto it = gc.named.find(t->var);
        int v;
        if (it != gc.named.end()) {
          v = it->second;
        } else {
          v = gc.new_var(t->var);
          gc.named[t->var] = v;
        }
        LinI l;
        l.coef[v] = BigInt(1);
        return l;
      }
      case Term::Kind::Select: {
        int arr = convert_array(t->state);
        LinI idx = convert_term(t->addr);
        gc.note_index(idx);
        return gc.mk_read(arr, idx);
      }
      case Term::Kind::Arith: {
        LinI a = convert_term(t->a);
        LinI b = convert_term(t->b);
        switch (t->op) {
          case ArithOp::Add: {
            a.add(b, BigInt(1));
            return a;
          }
          case ArithOp::Mul: {
            if (a.is_const()) {
              LinI out = b;
              BigInt s = a.cst;
              LinI scaled;
              scaled.cst = out.cst * s;
              for (const auto& [v, c] : out.coef) {
                if (!(c * s).is_zero()) scaled.coef[v] = c * s;
              }
              return scaled;
            }
            if (b.is_const()) {
              LinI scaled;
              scaled.cst = a.cst * b.cst;
              for (const auto& [v, c] : a.coef) {
                if (!(c * b.cst).is_zero()) scaled.coef[v] = c * b.cst;
              }
              return scaled;
            }
            // nonlinear: opaque product variable (exact in the replay)
            int v = gc.mk_product_var(a, b);
            LinI out;
            out.coef[v] = BigInt(1);
            return out;
          }
          case ArithOp::Monus: {
            // ite(a >= b, a - b, 0)
            LinI diff = b;
            diff.add(a, BigInt(-1)); // b - a <= 0  <=>  a >= b
            int cond = gc.atom_lit(false, diff);
            LinI sub = a;
            sub.add(b, BigInt(-1));
            LinI zero;
            return gc.mk_ite(cond, sub, zero);
          }
        }
        break;
      }
    }
    throw std::logic_error("convert_term: bad kind");
  }

  int convert_cmp(CmpOp op, const TermPtr& t0, const TermPtr& t1) {
    LinI a = convert_term(t0);
    LinI b = convert_term(t1);
    auto le = [&](const LinI& x, const LinI& y, BigInt shift) {
      LinI d = x;
      d.add(y, BigInt(-1));
      d.cst = d.cst + shift;
      return gc.atom_lit(false, std::move(d));
    };
    switch (op) {
      case CmpOp::Le: return le(a, b, BigInt(0));
      case CmpOp::Lt: return le(a, b, BigInt(1));
      case CmpOp::Ge: return le(b, a, BigInt(0));
      case CmpOp::Gt: return le(b, a, BigInt(1));
      case CmpOp::Eq: {
        LinI d = a;
        d.add(b, BigInt(-1));
        return gc.atom_lit(true, std::move(d));
      }
      case CmpOp::Ne: {
        LinI d = a;
        d.add(b, BigInt(-1));
        return GroundCore::neg(gc.atom_lit(true, std::move(d)));
      }
    }
    throw std::logic_error("convert_cmp: bad op");
  }

  int convert_call(const FormulaPtr& f) {
    int a0 = convert_array(f->s0);
    int a1 = convert_array(f->s1);
    std::string key =
        f->name + "|" + std::to_string(a0) + "|" + std::to_string(a1);
    auto it = gc.call_ids.find(key);
    if (it != gc.call_ids.end()) return gc.calls[it->second].sat_var;
    GroundCore::CallA c{f->name, f->s0, f->s1, a0, a1, gc.new_sat_var()};
    gc.call_ids[key] = static_cast<int>(gc.calls.size());
    gc.calls.push_back(std::move(c));
    return gc.calls.back().sat_var;
  }

  int convert_aeq(const FormulaPtr& f) {
    int a0 = convert_array(f->s0);
    int a1 = convert_array(f->s1);
    if (a0 == a1) return GroundCore::kTrueLit;
    if (a1 < a0) std::swap(a0, a1);
    std::string key = std::to_string(a0) + "=" + std::to_string(a1);
    auto it = gc.aeq_ids.find(key);
    if (it != gc.aeq_ids.end()) return gc.aeqs[it->second].sat_var;
    GroundCore::AEq e{a0, a1, gc.new_sat_var(),
                      gc.new_var("w" + std::to_string(gc.aeqs.size()))};
    gc.aeq_ids[key] = static_cast<int>(gc.aeqs.size());
    gc.aeqs.push_back(e);
    return e.sat_var;
  }

  // Tseitin; returns a literal equivalent to f.
  int encode(const FormulaPtr& f) {
    switch (f->kind) {
      case Formula::Kind::Bool:
        return f->bval ? GroundCore::kTrueLit : GroundCore::kFalseLit;
      case Formula::Kind::Cmp: return convert_cmp(f->cmp, f->t0, f->t1);
      case Formula::Kind::StateEq: return convert_aeq(f);
      case Formula::Kind::CallAtom: return convert_call(f);
      case Formula::Kind::Not: return GroundCore::neg(encode(f->f0));
      case Formula::Kind::And: {
        int a = encode(f->f0);
        int b = encode(f->f1);
        if (a == GroundCore::kTrueLit) return b;
        if (b == GroundCore::kTrueLit) return a;
        if (a == GroundCore::kFalseLit || b == GroundCore::kFalseLit)
          return GroundCore::kFalseLit;
        int v = gc.new_sat_var();
        gc.add_clause({-v, a});
        gc.add_clause({-v, b});
        gc.add_clause({v, GroundCore::neg(a), GroundCore::neg(b)});
        return v;
      }
      case Formula::Kind::Or: {
        int a = encode(f->f0);
        int b = encode(f->f1);
        if (a == GroundCore::kFalseLit) return b;
        if (b == GroundCore::kFalseLit) return a;
        if (a == GroundCore::kTrueLit || b == GroundCore::kTrueLit)
          return GroundCore::kTrueLit;
        int v = gc.new_sat_var();
        gc.add_clause({-v, a, b});
        gc.add_clause({v, GroundCore::neg(a)});
        gc.add_clause({v, GroundCore::neg(b)});
        return v;
      }
      case Formula::Kind::Implies: {
        return encode(Formula::disj(Formula::negate(f->f0), f->f1));
      }
      default:
        throw std::logic_error("encode: quantifier survived preparation");
    }
  }
};

} // namespace

// -------------------------------------------------------------- top level

SolverVerdict builtin_solve(const Goal& g) {
  PreparedGoal pg = prepare_goal(g);
  std::vector<FormulaPtr> ground = pg.asserted;
  {
    std::vector<FormulaPtr> instances = instantiate_hyps(pg);
    // instances may contain bounded quantifiers from contract assertions
    size_t n = 0;
    for (const auto& inst : instances) {
      PrepCtx ctx;
      ctx.suffix = "i" + std::to_string(n++) + "_";
      ground.push_back(xform(inst, true, ctx, {}, {}));
      if (ctx.out.dropped_hypotheses || !ctx.out.quantified.empty())
        pg.dropped_hypotheses = true;
      for (const auto& s : ctx.out.state_consts) pg.state_consts.push_back(s);
      for (const auto& v : ctx.out.int_consts) pg.int_consts.push_back(v);
    }
  }
  bool tainted_models = pg.dropped_hypotheses || !pg.quantified.empty();

  GroundCore gc;
  Encoder enc(gc);
  std::vector<int> roots;
  try {
    for (const auto& f : ground) roots.push_back(enc.encode(f));
  } catch (const std::exception& e) {
    return SolverVerdict::unknown(std::string("encoding failed: ") + e.what());
  }
  for (int r : roots) {
    if (r == GroundCore::kFalseLit) return SolverVerdict::valid();
    gc.add_clause({r});
  }

  // array equality definitions over the full index-term set
  {
    std::vector<LinI> universe = gc.index_terms;
    for (const auto& e : gc.aeqs) {
      LinI w;
      w.coef[e.witness_var] = BigInt(1);
      universe.push_back(w);
      gc.note_index(w);
    }
    for (const auto& e : gc.aeqs) {
      for (const auto& idx : universe) {
        LinI r0 = gc.mk_read(e.arr0, idx);
        LinI r1 = gc.mk_read(e.arr1, idx);
        LinI d = r0;
        d.add(r1, BigInt(-1));
        int eq = gc.atom_lit(true, std::move(d));
        gc.add_clause({-e.sat_var, eq}); // eq-atom holds pointwise
      }
      LinI w;
      w.coef[e.witness_var] = BigInt(1);
      LinI r0 = gc.mk_read(e.arr0, w);
      LinI r1 = gc.mk_read(e.arr1, w);
      LinI d = r0;
      d.add(r1, BigInt(-1));
      int eqw = gc.atom_lit(true, std::move(d));
      gc.add_clause({e.sat_var, GroundCore::neg(eqw)}); // differ at witness
    }
  }

  // read congruence per base array (Ackermann)
  {
    std::map<int, std::vector<size_t>> by_base;
    for (size_t i = 0; i < gc.reads.size(); ++i)
      by_base[gc.reads[i].arr].push_back(i);
    for (const auto& [arr, ids] : by_base) {
      (void)arr;
      for (size_t i = 0; i < ids.size(); ++i) {
        for (size_t j = i + 1; j < ids.size(); ++j) {
          const auto& ri = gc.reads[ids[i]];
          const auto& rj = gc.reads[ids[j]];
          if (ri.idx.is_const() && rj.idx.is_const() && !(ri.idx.cst == rj.idx.cst))
            continue; // distinct constants never alias
          LinI di = ri.idx;
          di.add(rj.idx, BigInt(-1));
          int idx_eq = gc.atom_lit(true, std::move(di));
          LinI dv;
          dv.coef[ri.var] = BigInt(1);
          LinI rv;
          rv.coef[rj.var] = BigInt(1);
          dv.add(rv, BigInt(-1));
          int val_eq = gc.atom_lit(true, std::move(dv));
          gc.add_clause({GroundCore::neg(idx_eq), val_eq});
        }
      }
    }
  }

  // ---- lazy DPLL(T) loop
  SatSolver sat;
  sat.nvars = gc.sat_vars;
  sat.clauses = gc.clauses;
  sat.phase.assign(static_cast<size_t>(gc.sat_vars) + 1, 0);
  for (const auto& c : gc.calls) sat.phase[static_cast<size_t>(c.sat_var)] = 1;

  bool cant_claim_valid = false;
  // Bounded patience with candidate models the concrete replay rejects
  // (nonlinear abstraction, congruence gaps): each one only proves the
  // abstraction too coarse, so give up quickly rather than enumerate
  // every don't-care variation of the same phenomenon.
  int abstraction_failures = 0;
  constexpr int kMaxAbstractionFailures = 12;
  for (int round = 0; round < 20000; ++round) {
    if (!sat.solve()) {
      if (cant_claim_valid)
        return SolverVerdict::unknown("search incomplete (theory limits)");
      if (sat.conflicts > SatSolver::kMaxConflicts)
        return SolverVerdict::unknown("propositional budget exceeded");
      return SolverVerdict::valid();
    }
    // Theory literals of a prime-implicant-style subset: one satisfying
    // literal per clause. Don't-care atoms (complete-assignment noise,
    // mostly spurious disequalities) stay out of the theory check; any
    // subset satisfying every clause supports the same model.
    std::vector<int8_t> picked(static_cast<size_t>(gc.sat_vars) + 1, 0);
    for (const auto& cl : sat.clauses) {
      bool covered = false;
      for (int lit : cl) {
        int v = std::abs(lit);
        if (picked[static_cast<size_t>(v)] != 0 && sat.value(lit)) {
          covered = true;
          break;
        }
      }
      if (covered) continue;
      for (int lit : cl) {
        if (sat.value(lit)) {
          picked[static_cast<size_t>(std::abs(lit))] = 1;
          break;
        }
      }
    }
    std::vector<TheoryLit> tlits;
    for (const auto& a : gc.atoms) {
      if (!picked[static_cast<size_t>(a.sat_var)]) continue;
      bool truth = sat.assign[static_cast<size_t>(a.sat_var)] == 1;
      tlits.push_back(TheoryLit{a.is_eq, truth, a.lin,
                                truth ? a.sat_var : -a.sat_var});
    }
    TheorySolver th(tlits, gc.nvars);
    TheoryOutcome out = th.run();
    if (out.kind == TheoryOutcome::Kind::Infeasible) {
      std::vector<int> blocking;
      for (int lit : out.core) blocking.push_back(-lit);
      if (blocking.empty()) return SolverVerdict::valid(); // empty core
      sat.clauses.push_back(std::move(blocking));
      continue;
    }
    // block this exact theory assignment and remember the incompleteness
    std::vector<int> full_block;
    for (const auto& tl : tlits) full_block.push_back(-tl.sat_lit);
    if (out.kind == TheoryOutcome::Kind::Limit) {
      cant_claim_valid = true;
      if (++abstraction_failures > kMaxAbstractionFailures)
        return SolverVerdict::unknown("theory budget exceeded");
      sat.clauses.push_back(std::move(full_block));
      continue;
    }

    // candidate model: build concrete environment and replay
    ConcreteEnv env;
    auto lin_value = [&](const LinI& l) {
      BigInt v = l.cst;
      for (const auto& [var, c] : l.coef) {
        auto it = out.model.find(var);
        if (it != out.model.end()) v = v + c * it->second;
      }
      return v;
    };
    bool coherent = true;
    for (const auto& [name, var] : gc.named) {
      auto it = out.model.find(var);
      env.ints[name] = it == out.model.end() ? BigInt(0) : it->second;
    }
    std::vector<ModelSample> samples;
    std::map<std::string, std::map<BigNat, BigNat>> raw;
    for (const auto& r : gc.reads) {
      BigInt addr = lin_value(r.idx);
      auto it = out.model.find(r.var);
      BigInt val = it == out.model.end() ? BigInt(0) : it->second;
      if (addr.negative() || val.negative()) {
        coherent = false;
        break;
      }
      const auto& arr = gc.arrs[static_cast<size_t>(r.arr)];
      auto [slot, inserted] =
          raw[arr.name].emplace(addr.magnitude(), val.magnitude());
      if (!inserted && slot->second != val.magnitude()) {
        coherent = false;
        break;
      }
      if (inserted) samples.push_back(ModelSample{arr.name, addr, val});
    }
    for (const auto& [name, entries] : raw) {
      MemState& m = env.states[name];
      for (const auto& [a, v] : entries) m.set(a, v);
    }
    if (coherent) {
      // call atom truths; reject interpretations violating congruence
      for (const auto& c : gc.calls) {
        bool truth = sat.assign[static_cast<size_t>(c.sat_var)] == 1;
        std::string key = c.proc + "|" +
                          materialize_state(*c.s0, env).str() + "|" +
                          materialize_state(*c.s1, env).str();
        auto it = env.calls.find(key);
        if (it != env.calls.end() && it->second != truth) {
          coherent = false;
          break;
        }
        env.calls[key] = truth;
      }
    }
    bool replay_ok = coherent;
    if (replay_ok) {
      try {
        for (const auto& f : ground)
          if (!eval_formula_concrete(*f, env)) {
            replay_ok = false;
            break;
          }
      } catch (const std::exception&) {
        replay_ok = false;
      }
    }
    if (replay_ok) {
      if (tainted_models)
        return SolverVerdict::unknown(
            "countermodel found only under finitely instantiated hypotheses");
      std::sort(samples.begin(), samples.end(),
                [](const ModelSample& a, const ModelSample& b) {
                  if (a.state != b.state) return a.state < b.state;
                  return a.addr < b.addr;
                });
      return SolverVerdict::invalid(std::move(samples));
    }
    cant_claim_valid = true;
    if (++abstraction_failures > kMaxAbstractionFailures)
      return SolverVerdict::unknown("countermodel replay kept failing");
    sat.clauses.push_back(std::move(full_block));
  }
  return SolverVerdict::unknown("round budget exceeded");
}

bool verify_countermodel(const Goal& g, const std::vector<ModelSample>& samples) {
  PreparedGoal pg = prepare_goal(g);
  if (!pg.quantified.empty() || pg.dropped_hypotheses) return false;
  ConcreteEnv env;
  for (const auto& s : samples) {
    if (s.addr.negative() || s.value.negative()) return false;
    env.states[s.state].set(s.addr.magnitude(), s.value.magnitude());
  }
  // call atoms: truth chosen to satisfy if possible is out of scope here;
  // quantifier-free replay only applies to goals without call atoms.
  try {
    for (const auto& f : pg.asserted)
      if (!eval_formula_concrete(*f, env)) return false;
  } catch (const std::exception&) {
    return false;
  }
  return true;
}

} // namespace relic
