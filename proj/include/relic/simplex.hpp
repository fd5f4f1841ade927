// Exact rational simplex with bound tracking, for the built-in theory
// solver. Variables are unrestricted; constraints arrive as bounds on
// linear forms (slack variables are introduced per distinct form). On
// infeasibility a conflict core of constraint reasons is produced.

#ifndef RELIC_SIMPLEX_HPP
#define RELIC_SIMPLEX_HPP

#include <map>
#include <optional>
#include <vector>

#include "relic/bignum.hpp"

namespace relic {

// Sorted (var, coeff) pairs, no zero coefficients.
using LinForm = std::vector<std::pair<int, BigRat>>;

LinForm lin_normalize(std::map<int, BigRat> coeffs);

class Simplex {
public:
  explicit Simplex(int nvars);

  // lin <= k (upper) or lin >= k (lower); reason identifies the asserting
  // constraint for conflict cores. Returns false on immediate bound clash,
  // with the core available via conflict().
  bool assert_upper(const LinForm& lin, const BigRat& k, int reason);
  bool assert_lower(const LinForm& lin, const BigRat& k, int reason);

  bool check(); // false = infeasible, core in conflict()
  const std::vector<int>& conflict() const { return conflict_; }

  BigRat value(int var) const { return beta_[var]; }
  int var_count() const { return static_cast<int>(beta_.size()); }
  int problem_vars() const { return nvars_; }

private:
  struct BoundInfo {
    BigRat value;
    int reason;
  };

  int nvars_;
  // tableau rows: basic var -> linear form over nonbasic vars
  std::map<int, std::map<int, BigRat>> rows_;
  std::vector<std::optional<BoundInfo>> lower_, upper_;
  std::vector<BigRat> beta_;
  std::vector<bool> is_basic_;
  std::map<LinForm, int> slack_of_;
  std::vector<int> conflict_;

  int slack_for(const LinForm& lin);
  bool assert_bound(int var, const BigRat& k, int reason, bool is_upper);
  void update_nonbasic(int var, const BigRat& v);
  void pivot(int basic, int nonbasic);
  bool pivot_toward(int basic, bool need_increase);
};

} // namespace relic

#endif
