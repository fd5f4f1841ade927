#include "relic/oracle.hpp"

namespace relic {

std::optional<uint64_t> Bounds::enumeration_size(unsigned runs) const {
  uint64_t size = 1;
  uint64_t per = max_val + 1;
  for (uint64_t i = 0; i < max_addr * runs; ++i) {
    if (size > UINT64_MAX / per) return std::nullopt;
    size *= per;
  }
  return size;
}

namespace {

// Decode index -> state over the bounded window; zero entries are dropped
// by MemState itself.
MemState state_from_index(uint64_t idx, const Bounds& b) {
  MemState m;
  for (uint64_t a = 0; a < b.max_addr; ++a) {
    m.set(BigNat(a), BigNat(idx % (b.max_val + 1)));
    idx /= (b.max_val + 1);
  }
  return m;
}

} // namespace

OracleVerdict check_hoare(const AssertionPtr& pre, const Com& c,
                          const AssertionPtr& post, const ProcEnv& psi,
                          const Bounds& bounds) {
  check_unary_pre(*pre);
  check_unary_post(*post);
  OracleVerdict out;
  uint64_t total = bounds.enumeration_size(1).value();
  for (uint64_t i = 0; i < total; ++i) {
    MemState sigma = state_from_index(i, bounds);
    if (!eval_assertion(*pre, {{StateRef::cur(), &sigma}})) continue;
    Outcome res = exec(c, sigma, psi, bounds.fuel);
    if (!res.is_final()) {
      ++out.fuel_exhausted;
      continue;
    }
    if (!eval_assertion(*post, {{StateRef::old(), &sigma},
                                {StateRef::cur(), &res.state}})) {
      out.kind = OracleVerdict::Kind::Counterexample;
      out.initial = {sigma};
      out.final_states = {res.state};
      return out;
    }
  }
  out.kind = out.fuel_exhausted ? OracleVerdict::Kind::Inconclusive
                                : OracleVerdict::Kind::Holds;
  return out;
}

OracleVerdict check_rel(const AssertionPtr& pre, const std::vector<ComPtr>& cs,
                        const AssertionPtr& post, const ProcEnv& psi,
                        const Bounds& bounds) {
  unsigned n = static_cast<unsigned>(cs.size());
  check_rel_pre(*pre, n);
  check_rel_post(*post, n);
  OracleVerdict out;
  uint64_t per_run = bounds.enumeration_size(1).value();
  uint64_t total = bounds.enumeration_size(n).value();
  std::vector<MemState> sigmas(n), finals(n);
  for (uint64_t i = 0; i < total; ++i) {
    uint64_t rem = i;
    StateBinding pre_binding;
    for (unsigned k = 0; k < n; ++k) {
      sigmas[k] = state_from_index(rem % per_run, bounds);
      rem /= per_run;
      pre_binding[StateRef::tag(k + 1)] = &sigmas[k];
    }
    if (!eval_assertion(*pre, pre_binding)) continue;
    bool exhausted = false;
    for (unsigned k = 0; k < n && !exhausted; ++k) {
      Outcome res = exec(*cs[k], sigmas[k], psi, bounds.fuel);
      if (!res.is_final())
        exhausted = true;
      else
        finals[k] = std::move(res.state);
    }
    if (exhausted) {
      ++out.fuel_exhausted;
      continue;
    }
    StateBinding post_binding;
    for (unsigned k = 0; k < n; ++k) {
      post_binding[StateRef::old_tag(k + 1)] = &sigmas[k];
      post_binding[StateRef::tag(k + 1)] = &finals[k];
    }
    if (!eval_assertion(*post, post_binding)) {
      out.kind = OracleVerdict::Kind::Counterexample;
      out.initial = sigmas;
      out.final_states = finals;
      return out;
    }
  }
  out.kind = out.fuel_exhausted ? OracleVerdict::Kind::Inconclusive
                                : OracleVerdict::Kind::Holds;
  return out;
}

} // namespace relic
