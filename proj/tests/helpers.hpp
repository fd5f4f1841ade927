// Shared test utilities: terse AST builders, corpus loading, and the
// random generators used by the property and differential suites.

#ifndef RELIC_TESTS_HELPERS_HPP
#define RELIC_TESTS_HELPERS_HPP

#include <fstream>
#include <random>
#include <sstream>

#include "relic/driver.hpp"

namespace relic::testing {

inline std::string corpus_path(const std::string& name) {
  return std::string(RELIC_CORPUS_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f.good()) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline ProgramFile load_corpus(const std::string& name) {
  return parse(read_file(corpus_path(name)));
}

// ---- assertion shorthands

inline LTermPtr lc(uint64_t n) { return LTerm::constant(BigNat(n)); }
inline LTermPtr lvar(StateRef r, uint64_t addr) {
  return LTerm::read(r, lc(addr));
}
inline LTermPtr lcur(uint64_t addr) { return lvar(StateRef::cur(), addr); }
inline LTermPtr lold(uint64_t addr) { return lvar(StateRef::old(), addr); }
inline LTermPtr ltag(unsigned run, uint64_t addr) {
  return lvar(StateRef::tag(run), addr);
}
inline LTermPtr loldtag(unsigned run, uint64_t addr) {
  return lvar(StateRef::old_tag(run), addr);
}
inline LTermPtr ladd(LTermPtr a, LTermPtr b) {
  return LTerm::arith(ArithOp::Add, std::move(a), std::move(b));
}
inline AssertionPtr acmp(CmpOp op, LTermPtr a, LTermPtr b) {
  return Assertion::compare(op, std::move(a), std::move(b));
}
inline AssertionPtr aeq(LTermPtr a, LTermPtr b) {
  return acmp(CmpOp::Eq, std::move(a), std::move(b));
}
inline AssertionPtr atrue() { return Assertion::bool_const(true); }

// ---- command shorthands

inline AexpPtr n(uint64_t v) { return Aexp::nat(BigNat(v)); }
inline AexpPtr x(uint64_t i) { return Aexp::var(Loc{i}); }
inline ComPtr asn(uint64_t loc, AexpPtr e) { return Com::assign(Loc{loc}, std::move(e)); }
inline ComPtr seq(std::vector<ComPtr> cs) {
  ComPtr out = cs.back();
  for (size_t i = cs.size() - 1; i-- > 0;) out = Com::seq(cs[i], out);
  return out;
}

// ---- random generators (deterministic given the seed)

struct Gen {
  std::mt19937_64 rng;
  uint64_t max_loc = 4;   // locations x1..x4
  uint64_t max_const = 3; // literals 0..3

  explicit Gen(uint64_t seed) : rng(seed) {}

  uint64_t pick(uint64_t n) { return rng() % n; }
  uint64_t loc() { return 1 + pick(max_loc); }

  AexpPtr aexp(int depth) {
    switch (depth <= 0 ? pick(3) : pick(6)) {
      case 0: return Aexp::nat(BigNat(pick(max_const + 1)));
      case 1: return Aexp::var(Loc{loc()});
      case 2: return Aexp::addr_of(Loc{loc()});
      case 3: return Aexp::deref(Loc{loc()});
      default:
        return Aexp::bin(static_cast<AOp>(pick(3)), aexp(depth - 1),
                         aexp(depth - 1));
    }
  }

  BexpPtr bexp(int depth) {
    switch (depth <= 0 ? pick(2) : pick(5)) {
      case 0: return Bexp::bool_const(pick(2) == 0);
      case 1:
        return Bexp::cmp_exp(static_cast<CmpOp>(pick(6)), aexp(depth - 1),
                             aexp(depth - 1));
      case 2: return Bexp::negate(bexp(depth - 1));
      default:
        return Bexp::bin(pick(2) ? LOp::And : LOp::Or, bexp(depth - 1),
                         bexp(depth - 1));
    }
  }

  LTermPtr lterm(int depth, const std::vector<StateRef>& refs) {
    switch (depth <= 0 ? pick(2) : pick(4)) {
      case 0: return lc(pick(max_const + 1));
      case 1: return lvar(refs[pick(refs.size())], loc());
      default:
        return LTerm::arith(static_cast<ArithOp>(pick(3)),
                            lterm(depth - 1, refs), lterm(depth - 1, refs));
    }
  }

  AssertionPtr assertion(int depth, const std::vector<StateRef>& refs) {
    switch (depth <= 0 ? pick(2) : pick(6)) {
      case 0: return Assertion::bool_const(pick(2) == 0);
      case 1:
        return acmp(static_cast<CmpOp>(pick(6)), lterm(depth - 1, refs),
                    lterm(depth - 1, refs));
      case 2: return Assertion::negate(assertion(depth - 1, refs));
      case 3:
        return Assertion::conj(assertion(depth - 1, refs),
                               assertion(depth - 1, refs));
      case 4:
        return Assertion::disj(assertion(depth - 1, refs),
                               assertion(depth - 1, refs));
      default:
        return Assertion::implies(assertion(depth - 1, refs),
                                  assertion(depth - 1, refs));
    }
  }

  ComPtr com(int depth, const std::vector<std::string>& procs,
             bool with_annotations = true) {
    std::vector<StateRef> cur = {StateRef::cur()};
    switch (depth <= 0 ? pick(3) : pick(8)) {
      case 0: return Com::skip();
      case 1: return Com::assign(Loc{loc()}, aexp(depth - 1));
      case 2: return Com::indirect_assign(Loc{loc()}, aexp(depth - 1));
      case 3: return Com::seq(com(depth - 1, procs), com(depth - 1, procs));
      case 4:
        return Com::if_cmd(bexp(depth - 1), com(depth - 1, procs),
                           com(depth - 1, procs));
      case 5:
        if (!procs.empty()) return Com::call(procs[pick(procs.size())]);
        return Com::skip();
      case 6:
        if (with_annotations)
          return Com::assert_cmd(assertion(depth - 1, cur));
        return Com::skip();
      default:
        return Com::while_cmd(
            bexp(depth - 1),
            with_annotations ? assertion(depth - 1, cur) : atrue(),
            com(depth - 1, procs));
    }
  }
};

// Reassociate sequence spines to the parser's canonical right-nesting.
inline ComPtr normalize_seq(const ComPtr& c) {
  switch (c->kind) {
    case Com::Kind::Seq: {
      ComPtr a = normalize_seq(c->c0);
      ComPtr b = normalize_seq(c->c1);
      if (a->kind != Com::Kind::Seq) return Com::seq(a, b);
      // rotate: Seq(Seq(x, y), z) -> Seq(x, Seq(y, z))
      return normalize_seq(Com::seq(a->c0, Com::seq(a->c1, b)));
    }
    case Com::Kind::If:
      return Com::if_cmd(c->cond, normalize_seq(c->c0), normalize_seq(c->c1));
    case Com::Kind::While:
      return Com::while_cmd(c->cond, c->assertion, normalize_seq(c->c0));
    default: return c;
  }
}

inline std::string pp(const ProgramFile& p) { return pretty(p); }

} // namespace relic::testing

#endif
