// relic: a modular deductive verifier for a small annotated language with
// procedures and pointers, with relational contract support.

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "relic/driver.hpp"

using namespace relic;

int main(int argc, char** argv) {
  CLI::App app{"relic - deductive verification of functional and relational "
               "properties"};
  app.require_subcommand(1);

  DriverOptions opts;
  std::string format = "text";
  auto add_solver_flags = [&](CLI::App* sub) {
    sub->add_option("--solver", opts.solver.command,
                    "solver command invoked as '<cmd> <script.smt2>' "
                    "(default: builtin decision procedure)");
    sub->add_option("--timeout", opts.solver.timeout_s,
                    "per-goal timeout in seconds (default 10)");
    sub->add_option("--jobs", opts.jobs,
                    "parallel goal discharge (default: hardware threads)");
    sub->add_option("--format", format, "report format: text|json")
        ->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--dump-dir", opts.solver.dump_dir,
                    "write each goal's SMT-LIB script into this directory");
  };

  std::string file;
  std::string property;
  std::string proc;
  std::string state_spec;
  std::string dump_format = "debug";
  uint64_t fuel = 1000000;
  Bounds bounds;

  CLI::App* check = app.add_subcommand(
      "check", "verify every procedure contract (tf goals)");
  check->add_option("file", file, "annotated program (.rl)")->required();
  add_solver_flags(check);

  CLI::App* rcheck = app.add_subcommand(
      "rcheck", "verify relational properties against the relational "
                "contract environment");
  rcheck->add_option("file", file, "annotated program (.rl)")->required();
  rcheck->add_option("--property", property, "check only this property label");
  add_solver_flags(rcheck);

  CLI::App* run = app.add_subcommand("run", "execute a procedure");
  run->add_option("file", file, "annotated program (.rl)")->required();
  run->add_option("--proc", proc, "procedure to call")->required();
  run->add_option("--state", state_spec, "initial bindings, e.g. x1=1,x2=3");
  run->add_option("--fuel", fuel, "call/loop budget (default 1000000)");

  CLI::App* dump = app.add_subcommand("dump-vc", "print generated goals");
  dump->add_option("file", file, "annotated program (.rl)")->required();
  dump->add_option("--format", dump_format, "smtlib|debug")
      ->check(CLI::IsMember({"smtlib", "debug"}));
  dump->add_option("--property", property, "restrict to this property");

  CLI::App* oracle = app.add_subcommand(
      "oracle", "bounded-exhaustive semantic check of contracts and "
                "properties");
  oracle->add_option("file", file, "annotated program (.rl)")->required();
  oracle->add_option("--max-addr", bounds.max_addr,
                     "enumerate locations x0..x<max-addr-1> (default 4)");
  oracle->add_option("--max-val", bounds.max_val,
                     "enumerate values 0..max-val (default 3)");
  oracle->add_option("--fuel", bounds.fuel, "execution budget (default 64)");
  oracle->add_option("--property", property, "check only this property");

  CLI11_PARSE(app, argc, argv);

  if (opts.solver.command.empty()) {
    if (const char* env = std::getenv("RELIC_SOLVER")) opts.solver.command = env;
  }
  opts.format = format == "json" ? DriverOptions::Format::Json
                                 : DriverOptions::Format::Text;
  std::optional<std::string> label;
  if (!property.empty()) label = property;

  if (check->parsed()) return cmd_check(file, opts, std::cout);
  if (rcheck->parsed()) return cmd_rcheck(file, label, opts, std::cout);
  if (run->parsed()) return cmd_run(file, proc, state_spec, fuel, std::cout);
  if (dump->parsed()) return cmd_dump_vc(file, dump_format, label, std::cout);
  if (oracle->parsed()) return cmd_oracle(file, bounds, label, std::cout);
  return 2;
}
