#include "relic/formula.hpp"

namespace relic {

StateTermPtr StateTerm::mk_var(SymState s) {
  auto t = std::make_shared<StateTerm>();
  t->kind = Kind::Var;
  t->var = std::move(s);
  return t;
}

StateTermPtr StateTerm::store(StateTermPtr base, TermPtr addr, TermPtr value) {
  auto t = std::make_shared<StateTerm>();
  t->kind = Kind::Store;
  t->base = std::move(base);
  t->addr = std::move(addr);
  t->value = std::move(value);
  return t;
}

TermPtr Term::constant(BigNat n) {
  auto t = std::make_shared<Term>();
  t->kind = Kind::Const;
  t->value = std::move(n);
  return t;
}

TermPtr Term::select(StateTermPtr s, TermPtr addr) {
  auto t = std::make_shared<Term>();
  t->kind = Kind::Select;
  t->state = std::move(s);
  t->addr = std::move(addr);
  return t;
}

TermPtr Term::arith(ArithOp op, TermPtr x, TermPtr y) {
  auto t = std::make_shared<Term>();
  t->kind = Kind::Arith;
  t->op = op;
  t->a = std::move(x);
  t->b = std::move(y);
  return t;
}

TermPtr Term::variable(std::string name) {
  auto t = std::make_shared<Term>();
  t->kind = Kind::Var;
  t->var = std::move(name);
  return t;
}

FormulaPtr Formula::boolean(bool v) {
  auto f = std::make_shared<Formula>();
  f->kind = Kind::Bool;
  f->bval = v;
  return f;
}

FormulaPtr Formula::compare(CmpOp op, TermPtr a, TermPtr b) {
  auto f = std::make_shared<Formula>();
  f->kind = Kind::Cmp;
  f->cmp = op;
  f->t0 = std::move(a);
  f->t1 = std::move(b);
  return f;
}

FormulaPtr Formula::state_eq(StateTermPtr a, StateTermPtr b) {
  auto f = std::make_shared<Formula>();
  f->kind = Kind::StateEq;
  f->s0 = std::move(a);
  f->s1 = std::move(b);
  return f;
}

FormulaPtr Formula::call_atom(std::string proc, StateTermPtr pre, StateTermPtr post) {
  auto f = std::make_shared<Formula>();
  f->kind = Kind::CallAtom;
  f->name = std::move(proc);
  f->s0 = std::move(pre);
  f->s1 = std::move(post);
  return f;
}

FormulaPtr Formula::negate(FormulaPtr x) {
  auto f = std::make_shared<Formula>();
  f->kind = Kind::Not;
  f->f0 = std::move(x);
  return f;
}

static FormulaPtr fbin(Formula::Kind k, FormulaPtr a, FormulaPtr b) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  f->f0 = std::move(a);
  f->f1 = std::move(b);
  return f;
}

FormulaPtr Formula::conj(FormulaPtr a, FormulaPtr b) {
  return fbin(Kind::And, std::move(a), std::move(b));
}
FormulaPtr Formula::disj(FormulaPtr a, FormulaPtr b) {
  return fbin(Kind::Or, std::move(a), std::move(b));
}
FormulaPtr Formula::implies(FormulaPtr a, FormulaPtr b) {
  return fbin(Kind::Implies, std::move(a), std::move(b));
}

FormulaPtr Formula::forall_states(std::vector<SymState> ss, FormulaPtr body,
                                  std::vector<FormulaPtr> patterns) {
  auto f = std::make_shared<Formula>();
  f->kind = Kind::ForallState;
  f->states = std::move(ss);
  f->f0 = std::move(body);
  f->patterns = std::move(patterns);
  return f;
}

FormulaPtr Formula::forall_int(std::string var, TermPtr bound, FormulaPtr body) {
  auto f = std::make_shared<Formula>();
  f->kind = Kind::ForallInt;
  f->name = std::move(var);
  f->bound = std::move(bound);
  f->f0 = std::move(body);
  return f;
}

FormulaPtr Formula::exists_int(std::string var, TermPtr bound, FormulaPtr body) {
  auto f = std::make_shared<Formula>();
  f->kind = Kind::ExistsInt;
  f->name = std::move(var);
  f->bound = std::move(bound);
  f->f0 = std::move(body);
  return f;
}

bool state_term_equal(const StateTerm& a, const StateTerm& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == StateTerm::Kind::Var) return a.var == b.var;
  return state_term_equal(*a.base, *b.base) && term_equal(*a.addr, *b.addr) &&
         term_equal(*a.value, *b.value);
}

bool term_equal(const Term& a, const Term& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Term::Kind::Const: return a.value == b.value;
    case Term::Kind::Select:
      return state_term_equal(*a.state, *b.state) && term_equal(*a.addr, *b.addr);
    case Term::Kind::Arith:
      return a.op == b.op && term_equal(*a.a, *b.a) && term_equal(*a.b, *b.b);
    case Term::Kind::Var: return a.var == b.var;
  }
  return false;
}

bool formula_equal(const Formula& a, const Formula& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Formula::Kind::Bool: return a.bval == b.bval;
    case Formula::Kind::Cmp:
      return a.cmp == b.cmp && term_equal(*a.t0, *b.t0) && term_equal(*a.t1, *b.t1);
    case Formula::Kind::StateEq:
      return state_term_equal(*a.s0, *b.s0) && state_term_equal(*a.s1, *b.s1);
    case Formula::Kind::CallAtom:
      return a.name == b.name && state_term_equal(*a.s0, *b.s0) &&
             state_term_equal(*a.s1, *b.s1);
    case Formula::Kind::Not: return formula_equal(*a.f0, *b.f0);
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
      return formula_equal(*a.f0, *b.f0) && formula_equal(*a.f1, *b.f1);
    case Formula::Kind::ForallState:
      if (a.states != b.states || a.patterns.size() != b.patterns.size())
        return false;
      for (size_t i = 0; i < a.patterns.size(); ++i)
        if (!formula_equal(*a.patterns[i], *b.patterns[i])) return false;
      return formula_equal(*a.f0, *b.f0);
    case Formula::Kind::ForallInt:
    case Formula::Kind::ExistsInt:
      if (a.name != b.name) return false;
      if ((a.bound == nullptr) != (b.bound == nullptr)) return false;
      if (a.bound && !term_equal(*a.bound, *b.bound)) return false;
      return formula_equal(*a.f0, *b.f0);
  }
  return false;
}

namespace {

// Formulas are DAGs (naive VC generation shares store chains across
// branches); counts are tree-multiplicity but computed once per node.
struct NodeCounter {
  std::map<const void*, size_t> memo;

  size_t state_nodes(const StateTerm& s) {
    auto it = memo.find(&s);
    if (it != memo.end()) return it->second;
    size_t n = 1;
    if (s.kind == StateTerm::Kind::Store)
      n += state_nodes(*s.base) + term_nodes(*s.addr) + term_nodes(*s.value);
    memo[&s] = n;
    return n;
  }

  size_t term_nodes(const Term& t) {
    auto it = memo.find(&t);
    if (it != memo.end()) return it->second;
    size_t n = 1;
    switch (t.kind) {
      case Term::Kind::Const:
      case Term::Kind::Var: break;
      case Term::Kind::Select:
        n += state_nodes(*t.state) + term_nodes(*t.addr);
        break;
      case Term::Kind::Arith: n += term_nodes(*t.a) + term_nodes(*t.b); break;
    }
    memo[&t] = n;
    return n;
  }

  size_t formula_nodes(const Formula& f) {
    auto it = memo.find(&f);
    if (it != memo.end()) return it->second;
    size_t n = 1;
    switch (f.kind) {
      case Formula::Kind::Bool: break;
      case Formula::Kind::Cmp:
        n += term_nodes(*f.t0) + term_nodes(*f.t1);
        break;
      case Formula::Kind::StateEq:
      case Formula::Kind::CallAtom:
        n += state_nodes(*f.s0) + state_nodes(*f.s1);
        break;
      case Formula::Kind::Not: n += formula_nodes(*f.f0); break;
      case Formula::Kind::And:
      case Formula::Kind::Or:
      case Formula::Kind::Implies:
        n += formula_nodes(*f.f0) + formula_nodes(*f.f1);
        break;
      case Formula::Kind::ForallState:
        n += formula_nodes(*f.f0);
        for (const auto& p : f.patterns) n += formula_nodes(*p);
        break;
      case Formula::Kind::ForallInt:
      case Formula::Kind::ExistsInt:
        n += formula_nodes(*f.f0) + (f.bound ? term_nodes(*f.bound) : 0);
        break;
    }
    memo[&f] = n;
    return n;
  }
};

} // namespace

size_t node_count(const Formula& f) {
  NodeCounter counter;
  return counter.formula_nodes(f);
}

// ------------------------------------------------------ alpha normalization

namespace {

struct Renamer {
  std::map<std::string, std::string> states;
  std::map<std::string, std::string> ints;

  std::string state_name(const std::string& s) {
    auto it = states.find(s);
    if (it != states.end()) return it->second;
    std::string fresh = "S" + std::to_string(states.size());
    states.emplace(s, fresh);
    return fresh;
  }
  std::string int_name(const std::string& v) {
    auto it = ints.find(v);
    if (it != ints.end()) return it->second;
    std::string fresh = "v" + std::to_string(ints.size());
    ints.emplace(v, fresh);
    return fresh;
  }
};

TermPtr rn_term(const TermPtr& t, Renamer& r);

StateTermPtr rn_state(const StateTermPtr& s, Renamer& r) {
  if (s->kind == StateTerm::Kind::Var)
    return StateTerm::mk_var(SymState{r.state_name(s->var.name)});
  return StateTerm::store(rn_state(s->base, r), rn_term(s->addr, r),
                          rn_term(s->value, r));
}

TermPtr rn_term(const TermPtr& t, Renamer& r) {
  switch (t->kind) {
    case Term::Kind::Const: return t;
    case Term::Kind::Var: return Term::variable(r.int_name(t->var));
    case Term::Kind::Select:
      return Term::select(rn_state(t->state, r), rn_term(t->addr, r));
    case Term::Kind::Arith:
      return Term::arith(t->op, rn_term(t->a, r), rn_term(t->b, r));
  }
  return t;
}

FormulaPtr rn_formula(const FormulaPtr& f, Renamer& r) {
  switch (f->kind) {
    case Formula::Kind::Bool: return f;
    case Formula::Kind::Cmp:
      return Formula::compare(f->cmp, rn_term(f->t0, r), rn_term(f->t1, r));
    case Formula::Kind::StateEq:
      return Formula::state_eq(rn_state(f->s0, r), rn_state(f->s1, r));
    case Formula::Kind::CallAtom:
      return Formula::call_atom(f->name, rn_state(f->s0, r), rn_state(f->s1, r));
    case Formula::Kind::Not: return Formula::negate(rn_formula(f->f0, r));
    case Formula::Kind::And:
      return Formula::conj(rn_formula(f->f0, r), rn_formula(f->f1, r));
    case Formula::Kind::Or:
      return Formula::disj(rn_formula(f->f0, r), rn_formula(f->f1, r));
    case Formula::Kind::Implies:
      return Formula::implies(rn_formula(f->f0, r), rn_formula(f->f1, r));
    case Formula::Kind::ForallState: {
      std::vector<SymState> ss;
      for (const auto& s : f->states) ss.push_back(SymState{r.state_name(s.name)});
      std::vector<FormulaPtr> pats;
      for (const auto& p : f->patterns) pats.push_back(rn_formula(p, r));
      return Formula::forall_states(std::move(ss), rn_formula(f->f0, r),
                                    std::move(pats));
    }
    case Formula::Kind::ForallInt:
      return Formula::forall_int(r.int_name(f->name),
                                 f->bound ? rn_term(f->bound, r) : nullptr,
                                 rn_formula(f->f0, r));
    case Formula::Kind::ExistsInt:
      return Formula::exists_int(r.int_name(f->name),
                                 f->bound ? rn_term(f->bound, r) : nullptr,
                                 rn_formula(f->f0, r));
  }
  return f;
}

} // namespace

FormulaPtr alpha_normalize(const FormulaPtr& f) {
  Renamer r;
  return rn_formula(f, r);
}

bool alpha_equivalent(const FormulaPtr& a, const FormulaPtr& b) {
  return formula_equal(*alpha_normalize(a), *alpha_normalize(b));
}

// ------------------------------------------------------------ pretty print

std::string state_term_str(const StateTerm& s) {
  if (s.kind == StateTerm::Kind::Var) return s.var.name;
  return "set(" + state_term_str(*s.base) + ", " + term_str(*s.addr) + ", " +
         term_str(*s.value) + ")";
}

std::string term_str(const Term& t) {
  switch (t.kind) {
    case Term::Kind::Const: return t.value.str();
    case Term::Kind::Var: return t.var;
    case Term::Kind::Select:
      return state_term_str(*t.state) + "[" + term_str(*t.addr) + "]";
    case Term::Kind::Arith: {
      const char* op = t.op == ArithOp::Add ? " + "
                       : t.op == ArithOp::Mul ? " * " : " -. ";
      return "(" + term_str(*t.a) + op + term_str(*t.b) + ")";
    }
  }
  return "?";
}

std::string formula_str(const Formula& f) {
  switch (f.kind) {
    case Formula::Kind::Bool: return f.bval ? "true" : "false";
    case Formula::Kind::Cmp:
      return term_str(*f.t0) + " " + cmp_op_str(f.cmp) + " " + term_str(*f.t1);
    case Formula::Kind::StateEq:
      return state_term_str(*f.s0) + " = " + state_term_str(*f.s1);
    case Formula::Kind::CallAtom:
      return "call_" + f.name + "(" + state_term_str(*f.s0) + ", " +
             state_term_str(*f.s1) + ")";
    case Formula::Kind::Not: return "!(" + formula_str(*f.f0) + ")";
    case Formula::Kind::And:
      return "(" + formula_str(*f.f0) + " && " + formula_str(*f.f1) + ")";
    case Formula::Kind::Or:
      return "(" + formula_str(*f.f0) + " || " + formula_str(*f.f1) + ")";
    case Formula::Kind::Implies:
      return "(" + formula_str(*f.f0) + " ==> " + formula_str(*f.f1) + ")";
    case Formula::Kind::ForallState: {
      std::string head = "(forall";
      for (const auto& s : f.states) head += " " + s.name;
      head += ".";
      if (!f.patterns.empty()) {
        head += " {";
        for (size_t i = 0; i < f.patterns.size(); ++i)
          head += (i ? ", " : "") + formula_str(*f.patterns[i]);
        head += "}";
      }
      return head + " " + formula_str(*f.f0) + ")";
    }
    case Formula::Kind::ForallInt:
    case Formula::Kind::ExistsInt: {
      std::string head = f.kind == Formula::Kind::ForallInt ? "(forall " : "(exists ";
      head += f.name;
      if (f.bound) head += " < " + term_str(*f.bound);
      return head + ". " + formula_str(*f.f0) + ")";
    }
  }
  return "?";
}

SymState VcContext::fresh_state(const std::string& prefix) {
  uint64_t& n = counters_[prefix];
  for (;;) {
    std::string name = n == 0 ? prefix : prefix + "_" + std::to_string(n);
    ++n;
    if (issued_.insert(name).second) return SymState{std::move(name)};
  }
}

std::string VcContext::fresh_int(const std::string& prefix) {
  uint64_t& n = counters_["int:" + prefix];
  for (;;) {
    std::string name = n == 0 ? prefix : prefix + "_" + std::to_string(n);
    ++n;
    if (issued_.insert("int:" + name).second) return name;
  }
}

// ---------------------------------------------------------- translation

TermPtr translate_lterm(const LTerm& t, const SymBinding& binding) {
  switch (t.kind) {
    case LTerm::Kind::Const: return Term::constant(t.value);
    case LTerm::Kind::Var: return Term::variable(t.var);
    case LTerm::Kind::Read: {
      auto it = binding.find(t.state);
      if (it == binding.end())
        throw ArityError("no symbolic state bound for " + t.state.str());
      return Term::select(it->second, translate_lterm(*t.arg0, binding));
    }
    case LTerm::Kind::Arith:
      return Term::arith(t.op, translate_lterm(*t.arg0, binding),
                         translate_lterm(*t.arg1, binding));
  }
  throw std::logic_error("translate_lterm: bad kind");
}

FormulaPtr translate(const Assertion& a, const SymBinding& binding) {
  switch (a.kind) {
    case Assertion::Kind::BoolConst: return Formula::boolean(a.bval);
    case Assertion::Kind::Compare:
      return Formula::compare(a.cmp, translate_lterm(*a.lhs, binding),
                              translate_lterm(*a.rhs, binding));
    case Assertion::Kind::Not: return Formula::negate(translate(*a.a, binding));
    case Assertion::Kind::And:
      return Formula::conj(translate(*a.a, binding), translate(*a.b, binding));
    case Assertion::Kind::Or:
      return Formula::disj(translate(*a.a, binding), translate(*a.b, binding));
    case Assertion::Kind::Implies:
      return Formula::implies(translate(*a.a, binding), translate(*a.b, binding));
    case Assertion::Kind::Forall:
      return Formula::forall_int(a.var,
                                 a.bound ? translate_lterm(*a.bound, binding) : nullptr,
                                 translate(*a.a, binding));
    case Assertion::Kind::Exists:
      return Formula::exists_int(a.var,
                                 a.bound ? translate_lterm(*a.bound, binding) : nullptr,
                                 translate(*a.a, binding));
  }
  throw std::logic_error("translate: bad kind");
}

TermPtr aexp_term(const Aexp& a, const StateTermPtr& s) {
  switch (a.kind) {
    case Aexp::Kind::Nat: return Term::constant(a.value);
    case Aexp::Kind::Var: return Term::select(s, Term::constant(BigNat(a.loc.index)));
    case Aexp::Kind::Deref:
      return Term::select(s, Term::select(s, Term::constant(BigNat(a.loc.index))));
    case Aexp::Kind::AddrOf: return Term::constant(BigNat(a.loc.index));
    case Aexp::Kind::Bin:
      return Term::arith(a.op == AOp::Add ? ArithOp::Add
                         : a.op == AOp::Mul ? ArithOp::Mul : ArithOp::Monus,
                         aexp_term(*a.lhs, s), aexp_term(*a.rhs, s));
  }
  throw std::logic_error("aexp_term: bad kind");
}

FormulaPtr bexp_formula(const Bexp& b, const StateTermPtr& s) {
  switch (b.kind) {
    case Bexp::Kind::BoolConst: return Formula::boolean(b.bval);
    case Bexp::Kind::Cmp:
      return Formula::compare(b.cmp, aexp_term(*b.lhs, s), aexp_term(*b.rhs, s));
    case Bexp::Kind::Bin: {
      auto l = bexp_formula(*b.b0, s);
      auto r = bexp_formula(*b.b1, s);
      return b.lop == LOp::And ? Formula::conj(l, r) : Formula::disj(l, r);
    }
    case Bexp::Kind::Not: return Formula::negate(bexp_formula(*b.b0, s));
  }
  throw std::logic_error("bexp_formula: bad kind");
}

} // namespace relic
