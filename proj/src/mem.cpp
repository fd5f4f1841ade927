#include "relic/mem.hpp"

namespace relic {

uint64_t addr_of(std::string_view token) {
  if (token.size() < 2 || token[0] != 'x')
    throw ParseError("not a location token: '" + std::string(token) + "'");
  uint64_t addr = 0;
  for (size_t i = 1; i < token.size(); ++i) {
    char ch = token[i];
    if (ch < '0' || ch > '9')
      throw ParseError("not a location token: '" + std::string(token) + "'");
    if (addr > (UINT64_MAX - (ch - '0')) / 10)
      throw ParseError("location address out of range: '" + std::string(token) + "'");
    addr = addr * 10 + static_cast<uint64_t>(ch - '0');
  }
  return addr;
}

const BigNat& MemState::read(const BigNat& addr) const {
  static const BigNat zero;
  auto it = bindings_.find(addr);
  return it == bindings_.end() ? zero : it->second;
}

void MemState::set(const BigNat& addr, const BigNat& value) {
  if (value.is_zero())
    bindings_.erase(addr);
  else
    bindings_[addr] = value;
}

MemState set_mem(const MemState& sigma, const BigNat& addr, const BigNat& value) {
  MemState out = sigma;
  out.set(addr, value);
  return out;
}

std::string MemState::str() const {
  std::string out = "{";
  bool first = true;
  for (const auto& [addr, val] : bindings_) {
    if (!first) out += ", ";
    first = false;
    out += "x" + addr.str() + "=" + val.str();
  }
  return out + "}";
}

} // namespace relic
