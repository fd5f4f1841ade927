#include "relic/interp.hpp"

namespace relic {

BigNat eval_aexp(const Aexp& a, const MemState& sigma) {
  switch (a.kind) {
    case Aexp::Kind::Nat: return a.value;
    case Aexp::Kind::Var: return sigma.read(a.loc.index);
    case Aexp::Kind::Deref: return sigma.read(sigma.read(a.loc.index));
    case Aexp::Kind::AddrOf: return BigNat(a.loc.index);
    case Aexp::Kind::Bin: {
      BigNat l = eval_aexp(*a.lhs, sigma);
      BigNat r = eval_aexp(*a.rhs, sigma);
      switch (a.op) {
        case AOp::Add: return l + r;
        case AOp::Mul: return l * r;
        case AOp::Monus: return l.monus(r);
      }
    }
  }
  throw std::logic_error("eval_aexp: bad kind");
}

bool eval_bexp(const Bexp& b, const MemState& sigma) {
  switch (b.kind) {
    case Bexp::Kind::BoolConst: return b.bval;
    case Bexp::Kind::Cmp: {
      BigNat l = eval_aexp(*b.lhs, sigma);
      BigNat r = eval_aexp(*b.rhs, sigma);
      switch (b.cmp) {
        case CmpOp::Eq: return l == r;
        case CmpOp::Ne: return l != r;
        case CmpOp::Le: return l <= r;
        case CmpOp::Lt: return l < r;
        case CmpOp::Ge: return l >= r;
        case CmpOp::Gt: return l > r;
      }
      return false;
    }
    case Bexp::Kind::Bin:
      if (b.lop == LOp::And)
        return eval_bexp(*b.b0, sigma) && eval_bexp(*b.b1, sigma);
      return eval_bexp(*b.b0, sigma) || eval_bexp(*b.b1, sigma);
    case Bexp::Kind::Not: return !eval_bexp(*b.b0, sigma);
  }
  throw std::logic_error("eval_bexp: bad kind");
}

namespace {

// Returns false when the shared budget runs out; sigma is updated in place.
bool exec_rec(const Com& c, MemState& sigma, const ProcEnv& psi, uint64_t& fuel) {
  switch (c.kind) {
    case Com::Kind::Skip:
    case Com::Kind::Assert: // annotations are semantically inert
      return true;
    case Com::Kind::Assign: {
      BigNat v = eval_aexp(*c.aexp, sigma);
      sigma.set(BigNat(c.loc.index), v);
      return true;
    }
    case Com::Kind::IndirectAssign: {
      BigNat addr = sigma.read(c.loc.index);
      BigNat v = eval_aexp(*c.aexp, sigma);
      sigma.set(addr, v);
      return true;
    }
    case Com::Kind::Seq:
      return exec_rec(*c.c0, sigma, psi, fuel) &&
             exec_rec(*c.c1, sigma, psi, fuel);
    case Com::Kind::If:
      return eval_bexp(*c.cond, sigma) ? exec_rec(*c.c0, sigma, psi, fuel)
                                       : exec_rec(*c.c1, sigma, psi, fuel);
    case Com::Kind::While:
      while (eval_bexp(*c.cond, sigma)) {
        if (fuel == 0) return false;
        --fuel;
        if (!exec_rec(*c.c0, sigma, psi, fuel)) return false;
      }
      return true;
    case Com::Kind::Call: {
      if (fuel == 0) return false;
      --fuel;
      return exec_rec(*psi.body(c.callee), sigma, psi, fuel);
    }
  }
  throw std::logic_error("exec: bad kind");
}

} // namespace

Outcome exec(const Com& c, const MemState& sigma, const ProcEnv& psi,
             uint64_t fuel) {
  MemState cur = sigma;
  if (!exec_rec(c, cur, psi, fuel)) return Outcome::out_of_fuel();
  return Outcome::final(std::move(cur));
}

} // namespace relic
