#include "relic/assertions.hpp"

namespace relic {

std::string StateRef::str() const {
  switch (kind) {
    case Kind::Cur: return "cur";
    case Kind::Old: return "old";
    case Kind::Tag: return "run" + std::to_string(run);
    case Kind::OldTag: return "old(run" + std::to_string(run) + ")";
  }
  return "?";
}

LTermPtr LTerm::constant(BigNat n) {
  auto t = std::make_shared<LTerm>();
  t->kind = Kind::Const;
  t->value = std::move(n);
  return t;
}

LTermPtr LTerm::read(StateRef s, LTermPtr addr) {
  auto t = std::make_shared<LTerm>();
  t->kind = Kind::Read;
  t->state = s;
  t->arg0 = std::move(addr);
  return t;
}

LTermPtr LTerm::arith(ArithOp op, LTermPtr a, LTermPtr b) {
  auto t = std::make_shared<LTerm>();
  t->kind = Kind::Arith;
  t->op = op;
  t->arg0 = std::move(a);
  t->arg1 = std::move(b);
  return t;
}

LTermPtr LTerm::logical_var(std::string name) {
  auto t = std::make_shared<LTerm>();
  t->kind = Kind::Var;
  t->var = std::move(name);
  return t;
}

bool lterm_equal(const LTerm& a, const LTerm& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case LTerm::Kind::Const: return a.value == b.value;
    case LTerm::Kind::Read:
      return a.state == b.state && lterm_equal(*a.arg0, *b.arg0);
    case LTerm::Kind::Arith:
      return a.op == b.op && lterm_equal(*a.arg0, *b.arg0) &&
             lterm_equal(*a.arg1, *b.arg1);
    case LTerm::Kind::Var: return a.var == b.var;
  }
  return false;
}

std::string cmp_op_str(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "==";
    case CmpOp::Ne: return "!=";
    case CmpOp::Le: return "<=";
    case CmpOp::Lt: return "<";
    case CmpOp::Ge: return ">=";
    case CmpOp::Gt: return ">";
  }
  return "?";
}

AssertionPtr Assertion::bool_const(bool v) {
  auto a = std::make_shared<Assertion>();
  a->kind = Kind::BoolConst;
  a->bval = v;
  return a;
}

AssertionPtr Assertion::compare(CmpOp op, LTermPtr l, LTermPtr r) {
  auto a = std::make_shared<Assertion>();
  a->kind = Kind::Compare;
  a->cmp = op;
  a->lhs = std::move(l);
  a->rhs = std::move(r);
  return a;
}

AssertionPtr Assertion::negate(AssertionPtr x) {
  auto a = std::make_shared<Assertion>();
  a->kind = Kind::Not;
  a->a = std::move(x);
  return a;
}

static AssertionPtr binop(Assertion::Kind k, AssertionPtr x, AssertionPtr y) {
  auto a = std::make_shared<Assertion>();
  a->kind = k;
  a->a = std::move(x);
  a->b = std::move(y);
  return a;
}

AssertionPtr Assertion::conj(AssertionPtr x, AssertionPtr y) {
  return binop(Kind::And, std::move(x), std::move(y));
}
AssertionPtr Assertion::disj(AssertionPtr x, AssertionPtr y) {
  return binop(Kind::Or, std::move(x), std::move(y));
}
AssertionPtr Assertion::implies(AssertionPtr x, AssertionPtr y) {
  return binop(Kind::Implies, std::move(x), std::move(y));
}

AssertionPtr Assertion::forall(std::string v, LTermPtr bound, AssertionPtr body) {
  auto a = std::make_shared<Assertion>();
  a->kind = Kind::Forall;
  a->var = std::move(v);
  a->bound = std::move(bound);
  a->a = std::move(body);
  return a;
}

AssertionPtr Assertion::exists(std::string v, LTermPtr bound, AssertionPtr body) {
  auto a = std::make_shared<Assertion>();
  a->kind = Kind::Exists;
  a->var = std::move(v);
  a->bound = std::move(bound);
  a->a = std::move(body);
  return a;
}

bool assertion_equal(const Assertion& a, const Assertion& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Assertion::Kind::BoolConst: return a.bval == b.bval;
    case Assertion::Kind::Compare:
      return a.cmp == b.cmp && lterm_equal(*a.lhs, *b.lhs) &&
             lterm_equal(*a.rhs, *b.rhs);
    case Assertion::Kind::Not: return assertion_equal(*a.a, *b.a);
    case Assertion::Kind::And:
    case Assertion::Kind::Or:
    case Assertion::Kind::Implies:
      return assertion_equal(*a.a, *b.a) && assertion_equal(*a.b, *b.b);
    case Assertion::Kind::Forall:
    case Assertion::Kind::Exists:
      if (a.var != b.var) return false;
      if ((a.bound == nullptr) != (b.bound == nullptr)) return false;
      if (a.bound && !lterm_equal(*a.bound, *b.bound)) return false;
      return assertion_equal(*a.a, *b.a);
  }
  return false;
}

namespace {

void collect_refs(const LTerm& t, std::set<StateRef>& out) {
  switch (t.kind) {
    case LTerm::Kind::Const:
    case LTerm::Kind::Var: return;
    case LTerm::Kind::Read:
      out.insert(t.state);
      collect_refs(*t.arg0, out);
      return;
    case LTerm::Kind::Arith:
      collect_refs(*t.arg0, out);
      collect_refs(*t.arg1, out);
      return;
  }
}

void collect_refs(const Assertion& a, std::set<StateRef>& out) {
  switch (a.kind) {
    case Assertion::Kind::BoolConst: return;
    case Assertion::Kind::Compare:
      collect_refs(*a.lhs, out);
      collect_refs(*a.rhs, out);
      return;
    case Assertion::Kind::Not: collect_refs(*a.a, out); return;
    case Assertion::Kind::And:
    case Assertion::Kind::Or:
    case Assertion::Kind::Implies:
      collect_refs(*a.a, out);
      collect_refs(*a.b, out);
      return;
    case Assertion::Kind::Forall:
    case Assertion::Kind::Exists:
      if (a.bound) collect_refs(*a.bound, out);
      collect_refs(*a.a, out);
      return;
  }
}

void free_vars(const LTerm& t, std::set<std::string>& bound,
               std::set<std::string>& out) {
  switch (t.kind) {
    case LTerm::Kind::Const: return;
    case LTerm::Kind::Var:
      if (!bound.count(t.var)) out.insert(t.var);
      return;
    case LTerm::Kind::Read: free_vars(*t.arg0, bound, out); return;
    case LTerm::Kind::Arith:
      free_vars(*t.arg0, bound, out);
      free_vars(*t.arg1, bound, out);
      return;
  }
}

void free_vars(const Assertion& a, std::set<std::string>& bound,
               std::set<std::string>& out) {
  switch (a.kind) {
    case Assertion::Kind::BoolConst: return;
    case Assertion::Kind::Compare:
      free_vars(*a.lhs, bound, out);
      free_vars(*a.rhs, bound, out);
      return;
    case Assertion::Kind::Not: free_vars(*a.a, bound, out); return;
    case Assertion::Kind::And:
    case Assertion::Kind::Or:
    case Assertion::Kind::Implies:
      free_vars(*a.a, bound, out);
      free_vars(*a.b, bound, out);
      return;
    case Assertion::Kind::Forall:
    case Assertion::Kind::Exists: {
      if (a.bound) free_vars(*a.bound, bound, out);
      bool fresh = bound.insert(a.var).second;
      free_vars(*a.a, bound, out);
      if (fresh) bound.erase(a.var);
      return;
    }
  }
}

} // namespace

std::set<StateRef> arity_of(const Assertion& a) {
  std::set<StateRef> out;
  collect_refs(a, out);
  return out;
}

void check_closed(const Assertion& a) {
  std::set<std::string> bound, free;
  free_vars(a, bound, free);
  if (!free.empty())
    throw ArityError("free logical variable '" + *free.begin() + "' in assertion");
}

void check_unary_pre(const Assertion& a) {
  check_closed(a);
  for (const StateRef& r : arity_of(a))
    if (r.kind != StateRef::Kind::Cur)
      throw ArityError("precondition may only mention current-state reads, found " +
                       r.str());
}

void check_unary_post(const Assertion& a) {
  check_closed(a);
  for (const StateRef& r : arity_of(a))
    if (r.kind != StateRef::Kind::Cur && r.kind != StateRef::Kind::Old)
      throw ArityError("postcondition may only mention cur/old reads, found " +
                       r.str());
}

void check_rel_pre(const Assertion& a, unsigned runs) {
  check_closed(a);
  for (const StateRef& r : arity_of(a)) {
    if (r.kind != StateRef::Kind::Tag || r.run < 1 || r.run > runs)
      throw ArityError("relational precondition over " + std::to_string(runs) +
                       " runs may only mention x<k> with 1 <= k <= " +
                       std::to_string(runs) + ", found " + r.str());
  }
}

void check_rel_post(const Assertion& a, unsigned runs) {
  check_closed(a);
  for (const StateRef& r : arity_of(a)) {
    bool tagged = r.kind == StateRef::Kind::Tag || r.kind == StateRef::Kind::OldTag;
    if (!tagged || r.run < 1 || r.run > runs)
      throw ArityError("relational postcondition over " + std::to_string(runs) +
                       " runs may only mention tagged reads with 1 <= k <= " +
                       std::to_string(runs) + ", found " + r.str());
  }
}

BigNat eval_lterm(const LTerm& t, const StateBinding& binding,
                  const std::map<std::string, BigNat>& env) {
  switch (t.kind) {
    case LTerm::Kind::Const: return t.value;
    case LTerm::Kind::Var: {
      auto it = env.find(t.var);
      if (it == env.end())
        throw ArityError("unbound logical variable '" + t.var + "'");
      return it->second;
    }
    case LTerm::Kind::Read: {
      auto it = binding.find(t.state);
      if (it == binding.end())
        throw ArityError("no state bound for " + t.state.str());
      return it->second->read(eval_lterm(*t.arg0, binding, env));
    }
    case LTerm::Kind::Arith: {
      BigNat lhs = eval_lterm(*t.arg0, binding, env);
      BigNat rhs = eval_lterm(*t.arg1, binding, env);
      switch (t.op) {
        case ArithOp::Add: return lhs + rhs;
        case ArithOp::Mul: return lhs * rhs;
        case ArithOp::Monus: return lhs.monus(rhs);
      }
    }
  }
  throw std::logic_error("eval_lterm: bad kind");
}

namespace {

bool eval_cmp(CmpOp op, const BigNat& l, const BigNat& r) {
  switch (op) {
    case CmpOp::Eq: return l == r;
    case CmpOp::Ne: return l != r;
    case CmpOp::Le: return l <= r;
    case CmpOp::Lt: return l < r;
    case CmpOp::Ge: return l >= r;
    case CmpOp::Gt: return l > r;
  }
  return false;
}

bool eval_rec(const Assertion& a, const StateBinding& binding,
              std::map<std::string, BigNat>& env) {
  switch (a.kind) {
    case Assertion::Kind::BoolConst: return a.bval;
    case Assertion::Kind::Compare:
      return eval_cmp(a.cmp, eval_lterm(*a.lhs, binding, env),
                      eval_lterm(*a.rhs, binding, env));
    case Assertion::Kind::Not: return !eval_rec(*a.a, binding, env);
    case Assertion::Kind::And:
      return eval_rec(*a.a, binding, env) && eval_rec(*a.b, binding, env);
    case Assertion::Kind::Or:
      return eval_rec(*a.a, binding, env) || eval_rec(*a.b, binding, env);
    case Assertion::Kind::Implies:
      return !eval_rec(*a.a, binding, env) || eval_rec(*a.b, binding, env);
    case Assertion::Kind::Forall:
    case Assertion::Kind::Exists: {
      if (!a.bound)
        throw OracleUnsupported("unbounded quantifier over '" + a.var +
                                "' cannot be evaluated exhaustively");
      BigNat limit = eval_lterm(*a.bound, binding, env);
      bool is_forall = a.kind == Assertion::Kind::Forall;
      auto saved = env.find(a.var) != env.end()
                       ? std::optional<BigNat>(env[a.var])
                       : std::nullopt;
      bool result = is_forall;
      for (BigNat v(0); v < limit; v = v + BigNat(1)) {
        env[a.var] = v;
        bool sub = eval_rec(*a.a, binding, env);
        if (is_forall && !sub) { result = false; break; }
        if (!is_forall && sub) { result = true; break; }
      }
      if (saved)
        env[a.var] = *saved;
      else
        env.erase(a.var);
      return result;
    }
  }
  throw std::logic_error("eval_assertion: bad kind");
}

int prec_of(const Assertion& a) {
  switch (a.kind) {
    case Assertion::Kind::Implies: return 1;
    case Assertion::Kind::Or: return 2;
    case Assertion::Kind::And: return 3;
    default: return 4;
  }
}

} // namespace

bool eval_assertion(const Assertion& a, const StateBinding& binding) {
  std::map<std::string, BigNat> env;
  return eval_rec(a, binding, env);
}

std::string lterm_str(const LTerm& t) {
  switch (t.kind) {
    case LTerm::Kind::Const: return t.value.str();
    case LTerm::Kind::Var: return t.var;
    case LTerm::Kind::Read:
      return t.state.str() + "[" + lterm_str(*t.arg0) + "]";
    case LTerm::Kind::Arith: {
      const char* op = t.op == ArithOp::Add ? " + "
                       : t.op == ArithOp::Mul ? " * " : " - ";
      return "(" + lterm_str(*t.arg0) + op + lterm_str(*t.arg1) + ")";
    }
  }
  return "?";
}

std::string assertion_str(const Assertion& a) {
  auto wrap = [&](const Assertion& sub) {
    std::string s = assertion_str(sub);
    if (prec_of(sub) <= prec_of(a) && sub.kind != a.kind) return "(" + s + ")";
    if (prec_of(sub) < prec_of(a)) return "(" + s + ")";
    return s;
  };
  switch (a.kind) {
    case Assertion::Kind::BoolConst: return a.bval ? "true" : "false";
    case Assertion::Kind::Compare:
      return lterm_str(*a.lhs) + " " + cmp_op_str(a.cmp) + " " + lterm_str(*a.rhs);
    case Assertion::Kind::Not: return "!(" + assertion_str(*a.a) + ")";
    case Assertion::Kind::And: return wrap(*a.a) + " && " + wrap(*a.b);
    case Assertion::Kind::Or: return wrap(*a.a) + " || " + wrap(*a.b);
    case Assertion::Kind::Implies: return wrap(*a.a) + " ==> " + assertion_str(*a.b);
    case Assertion::Kind::Forall:
    case Assertion::Kind::Exists: {
      std::string head = a.kind == Assertion::Kind::Forall ? "forall " : "exists ";
      head += a.var;
      if (a.bound) head += " < " + lterm_str(*a.bound);
      return head + ". " + assertion_str(*a.a);
    }
  }
  return "?";
}

} // namespace relic
