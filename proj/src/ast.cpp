#include "relic/ast.hpp"

namespace relic {

AexpPtr Aexp::nat(BigNat n) {
  auto e = std::make_shared<Aexp>();
  e->kind = Kind::Nat;
  e->value = std::move(n);
  return e;
}

AexpPtr Aexp::var(Loc l) {
  auto e = std::make_shared<Aexp>();
  e->kind = Kind::Var;
  e->loc = l;
  return e;
}

AexpPtr Aexp::deref(Loc l) {
  auto e = std::make_shared<Aexp>();
  e->kind = Kind::Deref;
  e->loc = l;
  return e;
}

AexpPtr Aexp::addr_of(Loc l) {
  auto e = std::make_shared<Aexp>();
  e->kind = Kind::AddrOf;
  e->loc = l;
  return e;
}

AexpPtr Aexp::bin(AOp op, AexpPtr a, AexpPtr b) {
  auto e = std::make_shared<Aexp>();
  e->kind = Kind::Bin;
  e->op = op;
  e->lhs = std::move(a);
  e->rhs = std::move(b);
  return e;
}

BexpPtr Bexp::bool_const(bool v) {
  auto e = std::make_shared<Bexp>();
  e->kind = Kind::BoolConst;
  e->bval = v;
  return e;
}

BexpPtr Bexp::cmp_exp(CmpOp op, AexpPtr l, AexpPtr r) {
  auto e = std::make_shared<Bexp>();
  e->kind = Kind::Cmp;
  e->cmp = op;
  e->lhs = std::move(l);
  e->rhs = std::move(r);
  return e;
}

BexpPtr Bexp::bin(LOp op, BexpPtr a, BexpPtr b) {
  auto e = std::make_shared<Bexp>();
  e->kind = Kind::Bin;
  e->lop = op;
  e->b0 = std::move(a);
  e->b1 = std::move(b);
  return e;
}

BexpPtr Bexp::negate(BexpPtr a) {
  auto e = std::make_shared<Bexp>();
  e->kind = Kind::Not;
  e->b0 = std::move(a);
  return e;
}

ComPtr Com::skip() {
  auto c = std::make_shared<Com>();
  c->kind = Kind::Skip;
  return c;
}

ComPtr Com::assign(Loc l, AexpPtr a) {
  auto c = std::make_shared<Com>();
  c->kind = Kind::Assign;
  c->loc = l;
  c->aexp = std::move(a);
  return c;
}

ComPtr Com::indirect_assign(Loc l, AexpPtr a) {
  auto c = std::make_shared<Com>();
  c->kind = Kind::IndirectAssign;
  c->loc = l;
  c->aexp = std::move(a);
  return c;
}

ComPtr Com::seq(ComPtr a, ComPtr b) {
  auto c = std::make_shared<Com>();
  c->kind = Kind::Seq;
  c->c0 = std::move(a);
  c->c1 = std::move(b);
  return c;
}

ComPtr Com::assert_cmd(AssertionPtr a) {
  auto c = std::make_shared<Com>();
  c->kind = Kind::Assert;
  c->assertion = std::move(a);
  return c;
}

ComPtr Com::if_cmd(BexpPtr b, ComPtr then_c, ComPtr else_c) {
  auto c = std::make_shared<Com>();
  c->kind = Kind::If;
  c->cond = std::move(b);
  c->c0 = std::move(then_c);
  c->c1 = std::move(else_c);
  return c;
}

ComPtr Com::while_cmd(BexpPtr b, AssertionPtr invariant, ComPtr body) {
  auto c = std::make_shared<Com>();
  c->kind = Kind::While;
  c->cond = std::move(b);
  c->assertion = std::move(invariant);
  c->c0 = std::move(body);
  return c;
}

ComPtr Com::call(std::string name) {
  auto c = std::make_shared<Com>();
  c->kind = Kind::Call;
  c->callee = std::move(name);
  return c;
}

bool aexp_equal(const Aexp& a, const Aexp& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Aexp::Kind::Nat: return a.value == b.value;
    case Aexp::Kind::Var:
    case Aexp::Kind::Deref:
    case Aexp::Kind::AddrOf: return a.loc == b.loc;
    case Aexp::Kind::Bin:
      return a.op == b.op && aexp_equal(*a.lhs, *b.lhs) &&
             aexp_equal(*a.rhs, *b.rhs);
  }
  return false;
}

bool bexp_equal(const Bexp& a, const Bexp& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Bexp::Kind::BoolConst: return a.bval == b.bval;
    case Bexp::Kind::Cmp:
      return a.cmp == b.cmp && aexp_equal(*a.lhs, *b.lhs) &&
             aexp_equal(*a.rhs, *b.rhs);
    case Bexp::Kind::Bin:
      return a.lop == b.lop && bexp_equal(*a.b0, *b.b0) &&
             bexp_equal(*a.b1, *b.b1);
    case Bexp::Kind::Not: return bexp_equal(*a.b0, *b.b0);
  }
  return false;
}

bool com_equal(const Com& a, const Com& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Com::Kind::Skip: return true;
    case Com::Kind::Assign:
    case Com::Kind::IndirectAssign:
      return a.loc == b.loc && aexp_equal(*a.aexp, *b.aexp);
    case Com::Kind::Seq:
      return com_equal(*a.c0, *b.c0) && com_equal(*a.c1, *b.c1);
    case Com::Kind::Assert: return assertion_equal(*a.assertion, *b.assertion);
    case Com::Kind::If:
      return bexp_equal(*a.cond, *b.cond) && com_equal(*a.c0, *b.c0) &&
             com_equal(*a.c1, *b.c1);
    case Com::Kind::While:
      return bexp_equal(*a.cond, *b.cond) &&
             assertion_equal(*a.assertion, *b.assertion) &&
             com_equal(*a.c0, *b.c0);
    case Com::Kind::Call: return a.callee == b.callee;
  }
  return false;
}

namespace {

size_t aexp_size(const Aexp& a) {
  if (a.kind == Aexp::Kind::Bin)
    return 1 + aexp_size(*a.lhs) + aexp_size(*a.rhs);
  return 1;
}

size_t bexp_size(const Bexp& b) {
  switch (b.kind) {
    case Bexp::Kind::BoolConst: return 1;
    case Bexp::Kind::Cmp: return 1 + aexp_size(*b.lhs) + aexp_size(*b.rhs);
    case Bexp::Kind::Bin: return 1 + bexp_size(*b.b0) + bexp_size(*b.b1);
    case Bexp::Kind::Not: return 1 + bexp_size(*b.b0);
  }
  return 1;
}

} // namespace

size_t com_size(const Com& c) {
  switch (c.kind) {
    case Com::Kind::Skip:
    case Com::Kind::Call:
    case Com::Kind::Assert: return 1;
    case Com::Kind::Assign:
    case Com::Kind::IndirectAssign: return 1 + aexp_size(*c.aexp);
    case Com::Kind::Seq: return 1 + com_size(*c.c0) + com_size(*c.c1);
    case Com::Kind::If:
      return 1 + bexp_size(*c.cond) + com_size(*c.c0) + com_size(*c.c1);
    case Com::Kind::While: return 1 + bexp_size(*c.cond) + com_size(*c.c0);
  }
  return 1;
}

const ComPtr& ProcEnv::body(const std::string& name) const {
  auto it = bodies_.find(name);
  if (it == bodies_.end())
    throw EnvError("undefined procedure '" + name + "'");
  return it->second;
}

Contract ContractEnv::lookup(const std::string& name) const {
  auto it = contracts_.find(name);
  if (it != contracts_.end()) return it->second;
  return Contract{Assertion::bool_const(true), Assertion::bool_const(true)};
}

} // namespace relic
