// Batch verification driver: load a program file, generate goals,
// discharge them in parallel, report. The CLI subcommands are thin
// wrappers so tests can drive the same paths in-process.

#ifndef RELIC_DRIVER_HPP
#define RELIC_DRIVER_HPP

#include <iosfwd>
#include <optional>

#include "relic/oracle.hpp"
#include "relic/smt.hpp"

namespace relic {

struct DriverOptions {
  SolverConfig solver;
  unsigned jobs = 0; // 0 = hardware concurrency
  enum class Format { Text, Json } format = Format::Text;
};

struct GoalReport {
  std::string label;
  SolverVerdict verdict;
  double time_ms = 0;
  bool infra_error = false;
  std::string infra_message;
};

struct RunReport {
  std::vector<GoalReport> goals; // sorted by label
  bool all_valid() const;
  bool any_infra_error() const;
};

// Discharges goals with a bounded worker pool; order-independent assembly.
RunReport discharge(const std::vector<Goal>& goals, const DriverOptions& opts);

// Exit codes: 0 all valid, 1 some goal not valid, 2 parse/usage error,
// 3 solver infrastructure error.
int cmd_check(const std::string& path, const DriverOptions& opts,
              std::ostream& out);
int cmd_rcheck(const std::string& path, const std::optional<std::string>& label,
               const DriverOptions& opts, std::ostream& out);
int cmd_run(const std::string& path, const std::string& proc,
            const std::string& state_spec, uint64_t fuel, std::ostream& out);
int cmd_dump_vc(const std::string& path, const std::string& format,
                const std::optional<std::string>& label, std::ostream& out);
int cmd_oracle(const std::string& path, const Bounds& bounds,
               const std::optional<std::string>& label, std::ostream& out);

// Goal generation used by the commands (exposed for tests).
std::vector<Goal> goals_for_check(const ProgramFile& file);
std::vector<Goal> goals_for_rcheck(const ProgramFile& file,
                                   const std::optional<std::string>& label);

// "x1=1,x2=3" -> state (unlisted locations 0)
MemState parse_state_spec(const std::string& spec);

} // namespace relic

#endif
