// Locations and memory states.
//
// A memory state is a total map from natural addresses to natural values,
// represented sparsely with default 0. Zero-valued entries are never
// stored, so map equality is extensional state equality.

#ifndef RELIC_MEM_HPP
#define RELIC_MEM_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

#include "relic/bignum.hpp"

namespace relic {

// Location x_i; the name <-> address correspondence is the suffix bijection.
struct Loc {
  uint64_t index = 0;

  std::string name() const { return "x" + std::to_string(index); }
  friend auto operator<=>(const Loc&, const Loc&) = default;
};

struct ParseError : std::runtime_error {
  int line = 0;
  int column = 0;
  ParseError(std::string msg, int l = 0, int c = 0)
      : std::runtime_error(std::move(msg)), line(l), column(c) {}
};

// addr_of("x4") = 4; anything not of the form x<digits> is rejected.
uint64_t addr_of(std::string_view token);

class MemState {
public:
  MemState() = default;

  const BigNat& read(const BigNat& addr) const;
  const BigNat& read(uint64_t addr) const { return read(BigNat(addr)); }

  // In-place update; set_mem below is the value-semantics form.
  void set(const BigNat& addr, const BigNat& value);

  const std::map<BigNat, BigNat>& bindings() const { return bindings_; }

  friend bool operator==(const MemState&, const MemState&) = default;

  std::string str() const;

private:
  std::map<BigNat, BigNat> bindings_; // invariant: no zero values stored
};

// Functional update sigma[i/n].
MemState set_mem(const MemState& sigma, const BigNat& addr, const BigNat& value);

inline MemState set_mem(const MemState& sigma, uint64_t addr, uint64_t value) {
  return set_mem(sigma, BigNat(addr), BigNat(value));
}

} // namespace relic

#endif
