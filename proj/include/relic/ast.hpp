// Abstract syntax of the annotated while-language with pointers.

#ifndef RELIC_AST_HPP
#define RELIC_AST_HPP

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "relic/assertions.hpp"
#include "relic/mem.hpp"

namespace relic {

struct Aexp;
using AexpPtr = std::shared_ptr<const Aexp>;

enum class AOp { Add, Mul, Monus };

struct Aexp {
  enum class Kind { Nat, Var, Deref, AddrOf, Bin };
  Kind kind;
  BigNat value; // Nat
  Loc loc;      // Var / Deref / AddrOf
  AOp op = AOp::Add;
  AexpPtr lhs, rhs;

  static AexpPtr nat(BigNat n);
  static AexpPtr var(Loc l);
  static AexpPtr deref(Loc l);
  static AexpPtr addr_of(Loc l);
  static AexpPtr bin(AOp op, AexpPtr a, AexpPtr b);
};

struct Bexp;
using BexpPtr = std::shared_ptr<const Bexp>;

enum class LOp { And, Or };

struct Bexp {
  enum class Kind { BoolConst, Cmp, Bin, Not };
  Kind kind;
  bool bval = true;
  CmpOp cmp = CmpOp::Eq;
  AexpPtr lhs, rhs; // Cmp
  LOp lop = LOp::And;
  BexpPtr b0, b1;   // Bin / Not (b0)

  static BexpPtr bool_const(bool v);
  static BexpPtr cmp_exp(CmpOp op, AexpPtr l, AexpPtr r);
  static BexpPtr bin(LOp op, BexpPtr a, BexpPtr b);
  static BexpPtr negate(BexpPtr a);
};

struct Com;
using ComPtr = std::shared_ptr<const Com>;

struct Com {
  enum class Kind { Skip, Assign, IndirectAssign, Seq, Assert, If, While, Call };
  Kind kind;
  Loc loc;                 // Assign / IndirectAssign target
  AexpPtr aexp;            // Assign / IndirectAssign rhs
  ComPtr c0, c1;           // Seq / If branches / While body (c0)
  AssertionPtr assertion;  // Assert body / While invariant
  BexpPtr cond;            // If / While
  std::string callee;      // Call

  static ComPtr skip();
  static ComPtr assign(Loc l, AexpPtr a);
  static ComPtr indirect_assign(Loc l, AexpPtr a);
  static ComPtr seq(ComPtr a, ComPtr b);
  static ComPtr assert_cmd(AssertionPtr a);
  static ComPtr if_cmd(BexpPtr b, ComPtr then_c, ComPtr else_c);
  static ComPtr while_cmd(BexpPtr b, AssertionPtr invariant, ComPtr body);
  static ComPtr call(std::string name);
};

bool aexp_equal(const Aexp& a, const Aexp& b);
bool bexp_equal(const Bexp& a, const Bexp& b);
bool com_equal(const Com& a, const Com& b);

// Command size in AST nodes (expressions included); the VC linearity
// measurements are stated against this.
size_t com_size(const Com& c);

struct EnvError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Procedure environment: name -> body. Lookup of an unbound name throws.
class ProcEnv {
public:
  void define(const std::string& name, ComPtr body) { bodies_[name] = std::move(body); }
  const ComPtr& body(const std::string& name) const;
  bool contains(const std::string& name) const { return bodies_.count(name) > 0; }
  const std::map<std::string, ComPtr>& all() const { return bodies_; }

private:
  std::map<std::string, ComPtr> bodies_;
};

struct Contract {
  AssertionPtr pre;  // arity: Cur only
  AssertionPtr post; // arity: Cur + Old
};

// Contract environment: total over procedure names, defaulting to (true, true).
class ContractEnv {
public:
  void define(const std::string& name, Contract c) { contracts_[name] = std::move(c); }
  Contract lookup(const std::string& name) const;
  bool declared(const std::string& name) const { return contracts_.count(name) > 0; }
  const std::map<std::string, Contract>& all() const { return contracts_; }

private:
  std::map<std::string, Contract> contracts_;
};

} // namespace relic

#endif
