// Parser and pretty-printer for annotated program files (.rl).
//
// A file holds procedure definitions with contracts, relational contract
// declarations, and named relational properties to check:
//
//   proc sum requires P ensures Q { ... }
//   relational [sum, sum] requires P ensures Q
//   property R1 { c1 } ~ { c2 } requires P ensures Q
//
// Assertions read locations as x3 (current state), old(x3) (initial
// state), x3<1> / old(x3<1>) (tagged run); *x1 is the dereference sugar.

#ifndef RELIC_PARSER_HPP
#define RELIC_PARSER_HPP

#include "relic/relvcgen.hpp"

namespace relic {

struct ProcDef {
  std::string name;
  AssertionPtr pre;  // defaults to true
  AssertionPtr post; // defaults to true
  ComPtr body;
  bool has_contract = false; // a requires or ensures was written
};

struct RelContractDef {
  std::vector<std::string> names;
  AssertionPtr pre;
  AssertionPtr post;
};

struct PropertyDef {
  std::string label;
  std::vector<ComPtr> commands;
  AssertionPtr pre;
  AssertionPtr post;
};

struct ProgramFile {
  std::vector<ProcDef> procs;
  std::vector<RelContractDef> rel_contracts;
  std::vector<PropertyDef> properties;

  ProcEnv proc_env() const;
  ContractEnv contract_env() const;
  RelContractEnv rel_env() const;
  const PropertyDef* find_property(const std::string& label) const;
};

// Parses and runs all load-time checks (name resolution, uniqueness,
// mandatory loop invariants, assertion arities). Throws ParseError or
// ArityError with position information.
ProgramFile parse(std::string_view text);

// Canonical formatting; parse(pretty(p)) reproduces p.
std::string pretty(const ProgramFile& p);

std::string pretty_com(const Com& c, int indent = 0);
std::string pretty_assertion(const Assertion& a);
std::string pretty_aexp(const Aexp& a);
std::string pretty_bexp(const Bexp& b);

} // namespace relic

#endif
