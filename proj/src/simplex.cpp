#include "relic/simplex.hpp"

#include <algorithm>
#include <cassert>

namespace relic {

LinForm lin_normalize(std::map<int, BigRat> coeffs) {
  LinForm out;
  for (auto& [v, c] : coeffs)
    if (!c.is_zero()) out.emplace_back(v, std::move(c));
  return out;
}

Simplex::Simplex(int nvars) : nvars_(nvars) {
  lower_.resize(nvars);
  upper_.resize(nvars);
  beta_.assign(nvars, BigRat(0));
  is_basic_.assign(nvars, false);
}

int Simplex::slack_for(const LinForm& lin) {
  if (lin.size() == 1 && lin[0].second == BigRat(1)) return lin[0].first;
  auto it = slack_of_.find(lin);
  if (it != slack_of_.end()) return it->second;
  int s = static_cast<int>(beta_.size());
  lower_.emplace_back();
  upper_.emplace_back();
  is_basic_.push_back(true);
  std::map<int, BigRat> row;
  BigRat v(0);
  for (const auto& [var, c] : lin) {
    if (is_basic_[var]) {
      // substitute the basic var's row
      for (const auto& [nb, cc] : rows_[var]) {
        BigRat& slot = row[nb];
        slot = slot + c * cc;
      }
    } else {
      BigRat& slot = row[var];
      slot = slot + c;
    }
    v = v + c * beta_[var];
  }
  for (auto it2 = row.begin(); it2 != row.end();) {
    if (it2->second.is_zero())
      it2 = row.erase(it2);
    else
      ++it2;
  }
  beta_.push_back(v);
  rows_[s] = std::move(row);
  slack_of_[lin] = s;
  return s;
}

void Simplex::update_nonbasic(int var, const BigRat& v) {
  BigRat delta = v - beta_[var];
  if (delta.is_zero()) return;
  beta_[var] = v;
  for (auto& [basic, row] : rows_) {
    auto it = row.find(var);
    if (it != row.end()) beta_[basic] = beta_[basic] + it->second * delta;
  }
}

bool Simplex::assert_bound(int var, const BigRat& k, int reason, bool is_upper) {
  auto& same = is_upper ? upper_[var] : lower_[var];
  auto& other = is_upper ? lower_[var] : upper_[var];
  if (same && (is_upper ? same->value <= k : same->value >= k)) return true;
  if (other && (is_upper ? k < other->value : k > other->value)) {
    conflict_ = {reason, other->reason};
    return false;
  }
  same = BoundInfo{k, reason};
  if (!is_basic_[var]) {
    if (is_upper ? beta_[var] > k : beta_[var] < k) update_nonbasic(var, k);
  }
  return true;
}

bool Simplex::assert_upper(const LinForm& lin, const BigRat& k, int reason) {
  if (lin.empty()) {
    if (BigRat(0) <= k) return true;
    conflict_ = {reason};
    return false;
  }
  return assert_bound(slack_for(lin), k, reason, true);
}

bool Simplex::assert_lower(const LinForm& lin, const BigRat& k, int reason) {
  if (lin.empty()) {
    if (BigRat(0) >= k) return true;
    conflict_ = {reason};
    return false;
  }
  return assert_bound(slack_for(lin), k, reason, false);
}

void Simplex::pivot(int basic, int nonbasic) {
  std::map<int, BigRat> row = std::move(rows_[basic]);
  rows_.erase(basic);
  BigRat a = row[nonbasic];
  assert(!a.is_zero());
  // basic = ... + a*nonbasic  =>  nonbasic = basic/a - (rest)/a
  std::map<int, BigRat> nrow;
  nrow[basic] = BigRat(1) / a;
  for (const auto& [v, c] : row) {
    if (v == nonbasic) continue;
    nrow[v] = -(c / a);
  }
  for (auto it = nrow.begin(); it != nrow.end();) {
    if (it->second.is_zero())
      it = nrow.erase(it);
    else
      ++it;
  }
  // substitute into all other rows
  for (auto& [b, r] : rows_) {
    auto it = r.find(nonbasic);
    if (it == r.end()) continue;
    BigRat c = it->second;
    r.erase(it);
    for (const auto& [v, cc] : nrow) {
      BigRat& slot = r[v];
      slot = slot + c * cc;
      if (slot.is_zero()) r.erase(v);
    }
  }
  rows_[nonbasic] = std::move(nrow);
  is_basic_[basic] = false;
  is_basic_[nonbasic] = true;
}

// Make beta(basic) reach its violated bound by moving a suitable nonbasic.
bool Simplex::pivot_toward(int basic, bool need_increase) {
  const auto& row = rows_[basic];
  int chosen = -1;
  for (const auto& [v, c] : row) {
    bool c_pos = c > BigRat(0);
    bool can_move;
    if (need_increase)
      can_move = c_pos ? (!upper_[v] || beta_[v] < upper_[v]->value)
                       : (!lower_[v] || beta_[v] > lower_[v]->value);
    else
      can_move = c_pos ? (!lower_[v] || beta_[v] > lower_[v]->value)
                       : (!upper_[v] || beta_[v] < upper_[v]->value);
    if (can_move && (chosen == -1 || v < chosen)) chosen = v;
  }
  if (chosen == -1) return false;
  pivot(basic, chosen);
  return true;
}

bool Simplex::check() {
  for (;;) {
    // Bland's rule: smallest violating basic variable.
    int viol = -1;
    bool need_inc = false;
    for (const auto& [b, row] : rows_) {
      (void)row;
      if (lower_[b] && beta_[b] < lower_[b]->value) {
        viol = b;
        need_inc = true;
        break;
      }
      if (upper_[b] && beta_[b] > upper_[b]->value) {
        viol = b;
        need_inc = false;
        break;
      }
    }
    if (viol == -1) return true;
    BigRat target = need_inc ? lower_[viol]->value : upper_[viol]->value;
    // Capture the row before pivoting for the conflict core.
    if (!pivot_toward(viol, need_inc)) {
      conflict_.clear();
      conflict_.push_back(need_inc ? lower_[viol]->reason : upper_[viol]->reason);
      for (const auto& [v, c] : rows_[viol]) {
        bool c_pos = c > BigRat(0);
        if (need_inc)
          conflict_.push_back(c_pos ? upper_[v]->reason : lower_[v]->reason);
        else
          conflict_.push_back(c_pos ? lower_[v]->reason : upper_[v]->reason);
      }
      std::sort(conflict_.begin(), conflict_.end());
      conflict_.erase(std::unique(conflict_.begin(), conflict_.end()),
                      conflict_.end());
      return false;
    }
    // viol is now nonbasic; set it to its bound.
    update_nonbasic(viol, target);
  }
}

} // namespace relic
