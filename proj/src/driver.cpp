#include "relic/driver.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace relic {

bool RunReport::all_valid() const {
  for (const auto& g : goals)
    if (!g.verdict.is_valid()) return false;
  return true;
}

bool RunReport::any_infra_error() const {
  for (const auto& g : goals)
    if (g.infra_error) return true;
  return false;
}

RunReport discharge(const std::vector<Goal>& goals, const DriverOptions& opts) {
  RunReport report;
  report.goals.resize(goals.size());
  unsigned jobs = opts.jobs ? opts.jobs : std::thread::hardware_concurrency();
  if (jobs == 0) jobs = 1;
  jobs = std::min<unsigned>(jobs, static_cast<unsigned>(goals.size()));
  if (jobs == 0) return report;

  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= goals.size()) return;
      GoalReport& slot = report.goals[i];
      slot.label = goals[i].label;
      auto t0 = std::chrono::steady_clock::now();
      try {
        slot.verdict = solve_goal(goals[i], opts.solver);
      } catch (const SolverError& e) {
        slot.infra_error = true;
        slot.infra_message = e.what();
        slot.verdict = SolverVerdict::unknown(e.what());
      }
      auto t1 = std::chrono::steady_clock::now();
      slot.time_ms =
          std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(
              t1 - t0)
              .count();
    }
  };
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::sort(report.goals.begin(), report.goals.end(),
            [](const GoalReport& a, const GoalReport& b) {
              return a.label < b.label;
            });
  return report;
}

namespace {

const char* status_name(const SolverVerdict& v) {
  switch (v.kind) {
    case SolverVerdict::Kind::Valid: return "valid";
    case SolverVerdict::Kind::Invalid: return "invalid";
    case SolverVerdict::Kind::Unknown: return "unknown";
  }
  return "?";
}

void print_report(const RunReport& report, const DriverOptions& opts,
                  std::ostream& out) {
  if (opts.format == DriverOptions::Format::Json) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& g : report.goals) {
      nlohmann::ordered_json item;
      item["goal"] = g.label;
      item["status"] = status_name(g.verdict);
      item["time_ms"] = g.time_ms;
      if (g.verdict.kind == SolverVerdict::Kind::Invalid) {
        nlohmann::ordered_json model = nlohmann::ordered_json::array();
        for (const auto& s : g.verdict.samples) {
          nlohmann::ordered_json entry;
          entry["state"] = s.state;
          entry["addr"] = s.addr.str();
          entry["value"] = s.value.str();
          model.push_back(entry);
        }
        item["model"] = model;
      }
      arr.push_back(item);
    }
    out << arr.dump(2) << "\n";
    return;
  }
  for (const auto& g : report.goals) {
    out << "goal " << g.label << ": " << status_name(g.verdict);
    if (g.verdict.kind == SolverVerdict::Kind::Unknown &&
        !g.verdict.reason.empty())
      out << " (" << g.verdict.reason << ")";
    out << "  [" << static_cast<long>(g.time_ms) << " ms]\n";
    if (g.verdict.kind == SolverVerdict::Kind::Invalid &&
        !g.verdict.samples.empty()) {
      out << "  model:";
      for (const auto& s : g.verdict.samples)
        out << " " << s.state << "[" << s.addr.str() << "]=" << s.value.str();
      out << "\n";
    }
  }
  size_t valid = 0;
  for (const auto& g : report.goals)
    if (g.verdict.is_valid()) ++valid;
  out << valid << "/" << report.goals.size() << " goals valid\n";
}

int exit_code_for(const RunReport& report) {
  if (report.any_infra_error()) return 3;
  return report.all_valid() ? 0 : 1;
}

ProgramFile load_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

} // namespace

std::vector<Goal> goals_for_check(const ProgramFile& file) {
  VcContext ctx;
  return tf(file.contract_env(), file.proc_env(), ctx);
}

std::vector<Goal> goals_for_rcheck(const ProgramFile& file,
                                   const std::optional<std::string>& label) {
  RelContractEnv rel = file.rel_env();
  ProcEnv psi = file.proc_env();
  std::vector<Goal> goals;
  if (label) {
    const PropertyDef* prop = file.find_property(*label);
    if (!prop) throw ParseError("unknown property '" + *label + "'");
    VcContext ctx;
    return rel_goals(RelGoalSpec{prop->label, prop->commands, prop->pre, prop->post},
                     rel, psi, ctx);
  }
  if (file.properties.empty()) {
    VcContext ctx;
    return tfr(rel, psi, ctx);
  }
  for (const auto& prop : file.properties) {
    VcContext ctx;
    std::vector<Goal> gs = rel_goals(
        RelGoalSpec{prop.label, prop.commands, prop.pre, prop.post}, rel, psi, ctx);
    goals.insert(goals.end(), gs.begin(), gs.end());
  }
  return goals;
}

int cmd_check(const std::string& path, const DriverOptions& opts,
              std::ostream& out) {
  ProgramFile file;
  try {
    file = load_file(path);
  } catch (const std::exception& e) {
    out << "error: " << e.what() << "\n";
    return 2;
  }
  RunReport report = discharge(goals_for_check(file), opts);
  print_report(report, opts, out);
  return exit_code_for(report);
}

int cmd_rcheck(const std::string& path, const std::optional<std::string>& label,
               const DriverOptions& opts, std::ostream& out) {
  std::vector<Goal> goals;
  try {
    ProgramFile file = load_file(path);
    goals = goals_for_rcheck(file, label);
  } catch (const std::exception& e) {
    out << "error: " << e.what() << "\n";
    return 2;
  }
  RunReport report = discharge(goals, opts);
  print_report(report, opts, out);
  return exit_code_for(report);
}

MemState parse_state_spec(const std::string& spec) {
  MemState m;
  size_t pos = 0;
  while (pos < spec.size()) {
    size_t comma = spec.find(',', pos);
    std::string item = spec.substr(pos, comma == std::string::npos ? std::string::npos
                                                                   : comma - pos);
    pos = comma == std::string::npos ? spec.size() : comma + 1;
    if (item.empty()) continue;
    size_t eq = item.find('=');
    if (eq == std::string::npos)
      throw ParseError("bad state binding '" + item + "' (want x<i>=<n>)");
    uint64_t addr = addr_of(item.substr(0, eq));
    auto val = BigNat::parse(item.substr(eq + 1));
    if (!val) throw ParseError("bad value in state binding '" + item + "'");
    m.set(BigNat(addr), *val);
  }
  return m;
}

int cmd_run(const std::string& path, const std::string& proc,
            const std::string& state_spec, uint64_t fuel, std::ostream& out) {
  try {
    ProgramFile file = load_file(path);
    ProcEnv psi = file.proc_env();
    if (!psi.contains(proc)) {
      out << "error: unknown procedure '" << proc << "'\n";
      return 2;
    }
    MemState init = parse_state_spec(state_spec);
    Outcome res = exec(*Com::call(proc), init, psi, fuel);
    if (!res.is_final()) {
      out << "out of fuel after " << fuel << " steps\n";
      return 1;
    }
    bool first = true;
    for (const auto& [addr, val] : res.state.bindings()) {
      out << (first ? "" : " ") << "x" << addr.str() << "=" << val.str();
      first = false;
    }
    if (first) out << "(all locations 0)";
    out << "\n";
    return 0;
  } catch (const std::exception& e) {
    out << "error: " << e.what() << "\n";
    return 2;
  }
}

int cmd_dump_vc(const std::string& path, const std::string& format,
                const std::optional<std::string>& label, std::ostream& out) {
  std::vector<Goal> goals;
  try {
    ProgramFile file = load_file(path);
    goals = goals_for_check(file);
    if (!file.properties.empty() || !file.rel_contracts.empty()) {
      std::vector<Goal> rel = goals_for_rcheck(file, label);
      goals.insert(goals.end(), rel.begin(), rel.end());
    }
  } catch (const std::exception& e) {
    out << "error: " << e.what() << "\n";
    return 2;
  }
  for (const auto& g : goals) {
    if (format == "smtlib") {
      // structure-preserving emission: formulas appear as generated
      LowerOptions opts;
      opts.skolemize = false;
      out << lower(g, opts).text << "\n";
    } else {
      out << "goal " << g.label << "\n";
      for (const auto& h : g.hypotheses)
        out << "  hyp:  " << formula_str(*h) << "\n";
      out << "  show: " << formula_str(*g.conclusion) << "\n\n";
    }
  }
  return 0;
}

int cmd_oracle(const std::string& path, const Bounds& bounds,
               const std::optional<std::string>& label, std::ostream& out) {
  ProgramFile file;
  try {
    file = load_file(path);
  } catch (const std::exception& e) {
    out << "error: " << e.what() << "\n";
    return 2;
  }
  constexpr uint64_t kMaxEnumeration = 1000000;
  bool all_hold = true;
  auto describe = [&](const std::string& what, const OracleVerdict& v) {
    switch (v.kind) {
      case OracleVerdict::Kind::Holds:
        out << what << ": holds\n";
        return;
      case OracleVerdict::Kind::Inconclusive:
        out << what << ": inconclusive (" << v.fuel_exhausted
            << " states ran out of fuel)\n";
        all_hold = false;
        return;
      case OracleVerdict::Kind::Counterexample: {
        out << what << ": counterexample\n";
        for (size_t k = 0; k < v.initial.size(); ++k)
          out << "  run " << (k + 1) << ": " << v.initial[k].str() << " -> "
              << v.final_states[k].str() << "\n";
        all_hold = false;
        return;
      }
    }
  };
  try {
    unsigned max_runs = 1;
    for (const auto& prop : file.properties)
      max_runs = std::max<unsigned>(max_runs,
                                    static_cast<unsigned>(prop.commands.size()));
    auto size = bounds.enumeration_size(max_runs);
    if (!size || *size > kMaxEnumeration) {
      out << "error: enumeration size exceeds " << kMaxEnumeration
          << " states; tighten --max-addr/--max-val\n";
      return 2;
    }
    ProcEnv psi = file.proc_env();
    if (!label) {
      for (const auto& p : file.procs) {
        if (!p.has_contract) continue;
        describe("contract " + p.name,
                 check_hoare(p.pre, *p.body, p.post, psi, bounds));
      }
    }
    bool found = !label.has_value();
    for (const auto& prop : file.properties) {
      if (label && prop.label != *label) continue;
      found = true;
      describe("property " + prop.label,
               check_rel(prop.pre, prop.commands, prop.post, psi, bounds));
    }
    if (!found) {
      out << "error: unknown property '" << *label << "'\n";
      return 2;
    }
  } catch (const std::exception& e) {
    out << "error: " << e.what() << "\n";
    return 2;
  }
  return all_hold ? 0 : 1;
}

} // namespace relic
