#include "relic/smt.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace relic {

// ------------------------------------------------------------ SMT-LIB text

namespace {

void smt_term(const TermPtr& t, std::string& out);

void smt_state(const StateTermPtr& s, std::string& out) {
  if (s->kind == StateTerm::Kind::Var) {
    out += s->var.name;
    return;
  }
  out += "(store ";
  smt_state(s->base, out);
  out += " ";
  smt_term(s->addr, out);
  out += " ";
  smt_term(s->value, out);
  out += ")";
}

void smt_term(const TermPtr& t, std::string& out) {
  switch (t->kind) {
    case Term::Kind::Const: out += t->value.str(); return;
    case Term::Kind::Var: out += t->var; return;
    case Term::Kind::Select:
      out += "(select ";
      smt_state(t->state, out);
      out += " ";
      smt_term(t->addr, out);
      out += ")";
      return;
    case Term::Kind::Arith: {
      if (t->op == ArithOp::Monus) {
        // bounded subtraction as a guarded term
        std::string a, b;
        smt_term(t->a, a);
        smt_term(t->b, b);
        out += "(ite (>= " + a + " " + b + ") (- " + a + " " + b + ") 0)";
        return;
      }
      out += t->op == ArithOp::Add ? "(+ " : "(* ";
      smt_term(t->a, out);
      out += " ";
      smt_term(t->b, out);
      out += ")";
      return;
    }
  }
}

std::string nonneg_axiom(const std::string& state) {
  return "(forall ((i Int)) (>= (select " + state + " i) 0))";
}

void smt_formula(const FormulaPtr& f, std::string& out) {
  switch (f->kind) {
    case Formula::Kind::Bool: out += f->bval ? "true" : "false"; return;
    case Formula::Kind::Cmp: {
      std::string a, b;
      smt_term(f->t0, a);
      smt_term(f->t1, b);
      switch (f->cmp) {
        case CmpOp::Eq: out += "(= " + a + " " + b + ")"; return;
        case CmpOp::Ne: out += "(not (= " + a + " " + b + "))"; return;
        case CmpOp::Le: out += "(<= " + a + " " + b + ")"; return;
        case CmpOp::Lt: out += "(< " + a + " " + b + ")"; return;
        case CmpOp::Ge: out += "(>= " + a + " " + b + ")"; return;
        case CmpOp::Gt: out += "(> " + a + " " + b + ")"; return;
      }
      return;
    }
    case Formula::Kind::StateEq: {
      out += "(= ";
      smt_state(f->s0, out);
      out += " ";
      smt_state(f->s1, out);
      out += ")";
      return;
    }
    case Formula::Kind::CallAtom: {
      out += "(call_" + f->name + " ";
      smt_state(f->s0, out);
      out += " ";
      smt_state(f->s1, out);
      out += ")";
      return;
    }
    case Formula::Kind::Not:
      out += "(not ";
      smt_formula(f->f0, out);
      out += ")";
      return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies: {
      out += f->kind == Formula::Kind::And  ? "(and "
             : f->kind == Formula::Kind::Or ? "(or "
                                            : "(=> ";
      smt_formula(f->f0, out);
      out += " ";
      smt_formula(f->f1, out);
      out += ")";
      return;
    }
    case Formula::Kind::ForallState: {
      out += "(forall (";
      for (size_t i = 0; i < f->states.size(); ++i) {
        out += (i ? " (" : "(") + f->states[i].name + " (Array Int Int))";
      }
      out += ") ";
      // quantified states also carry the naturals axiom
      std::string guard;
      for (const auto& s : f->states) {
        if (!guard.empty()) guard = "(and " + guard + " " + nonneg_axiom(s.name) + ")";
        else guard = nonneg_axiom(s.name);
      }
      std::string body = "(=> " + guard + " ";
      smt_formula(f->f0, body);
      body += ")";
      if (!f->patterns.empty()) {
        std::string pats;
        for (const auto& p : f->patterns) {
          pats += " ";
          smt_formula(p, pats);
        }
        out += "(! " + body + " :pattern (" + pats.substr(1) + "))";
      } else {
        out += body;
      }
      out += ")";
      return;
    }
    case Formula::Kind::ForallInt:
    case Formula::Kind::ExistsInt: {
      bool fa = f->kind == Formula::Kind::ForallInt;
      out += fa ? "(forall ((" : "(exists ((";
      out += f->name + " Int)) ";
      std::string range = "(>= " + f->name + " 0)";
      if (f->bound) {
        std::string b;
        smt_term(f->bound, b);
        range = "(and " + range + " (< " + f->name + " " + b + "))";
      }
      std::string body;
      smt_formula(f->f0, body);
      out += fa ? "(=> " + range + " " + body + ")"
                : "(and " + range + " " + body + ")";
      out += ")";
      return;
    }
  }
}

void collect_sample_points(const FormulaPtr& f,
                           std::vector<std::pair<std::string, BigInt>>& out) {
  std::function<void(const TermPtr&)> walk_term = [&](const TermPtr& t) {
    switch (t->kind) {
      case Term::Kind::Select:
        if (t->state->kind == StateTerm::Kind::Var &&
            t->addr->kind == Term::Kind::Const)
          out.emplace_back(t->state->var.name, BigInt::from_nat(t->addr->value));
        walk_term(t->addr);
        return;
      case Term::Kind::Arith:
        walk_term(t->a);
        walk_term(t->b);
        return;
      default: return;
    }
  };
  switch (f->kind) {
    case Formula::Kind::Cmp:
      walk_term(f->t0);
      walk_term(f->t1);
      return;
    case Formula::Kind::Not: collect_sample_points(f->f0, out); return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
      collect_sample_points(f->f0, out);
      collect_sample_points(f->f1, out);
      return;
    default: return;
  }
}

void collect_free(const FormulaPtr& f, std::set<std::string>& states,
                  std::set<std::string>& ints, std::set<std::string>& preds,
                  std::set<std::string> bound_s, std::set<std::string> bound_i) {
  std::function<void(const TermPtr&)> term;
  std::function<void(const StateTermPtr&)> state = [&](const StateTermPtr& s) {
    if (s->kind == StateTerm::Kind::Var) {
      if (!bound_s.count(s->var.name)) states.insert(s->var.name);
      return;
    }
    state(s->base);
    term(s->addr);
    term(s->value);
  };
  term = [&](const TermPtr& t) {
    switch (t->kind) {
      case Term::Kind::Var:
        if (!bound_i.count(t->var)) ints.insert(t->var);
        return;
      case Term::Kind::Select:
        state(t->state);
        term(t->addr);
        return;
      case Term::Kind::Arith:
        term(t->a);
        term(t->b);
        return;
      default: return;
    }
  };
  switch (f->kind) {
    case Formula::Kind::Bool: return;
    case Formula::Kind::Cmp:
      term(f->t0);
      term(f->t1);
      return;
    case Formula::Kind::StateEq:
      state(f->s0);
      state(f->s1);
      return;
    case Formula::Kind::CallAtom:
      preds.insert(f->name);
      state(f->s0);
      state(f->s1);
      return;
    case Formula::Kind::Not:
      collect_free(f->f0, states, ints, preds, bound_s, bound_i);
      return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
      collect_free(f->f0, states, ints, preds, bound_s, bound_i);
      collect_free(f->f1, states, ints, preds, bound_s, bound_i);
      return;
    case Formula::Kind::ForallState: {
      for (const auto& v : f->states) bound_s.insert(v.name);
      for (const auto& p : f->patterns)
        collect_free(p, states, ints, preds, bound_s, bound_i);
      collect_free(f->f0, states, ints, preds, bound_s, bound_i);
      return;
    }
    case Formula::Kind::ForallInt:
    case Formula::Kind::ExistsInt:
      if (f->bound) term(f->bound);
      bound_i.insert(f->name);
      collect_free(f->f0, states, ints, preds, bound_s, bound_i);
      return;
  }
}

} // namespace

LoweredScript lower(const Goal& g, const LowerOptions& opts) {
  LoweredScript script;
  script.goal_label = g.label;
  script.logic = "ALL";
  std::string& out = script.text;
  out += "; goal: " + g.label + "\n";
  out += "(set-logic ALL)\n";

  std::set<std::string> states, ints, preds;
  std::vector<std::string> asserts;
  if (opts.skolemize) {
    PreparedGoal pg = prepare_goal(g);
    states.insert(pg.state_consts.begin(), pg.state_consts.end());
    ints.insert(pg.int_consts.begin(), pg.int_consts.end());
    preds.insert(pg.call_preds.begin(), pg.call_preds.end());
    for (const auto& q : pg.quantified) {
      std::string s;
      smt_formula(Formula::forall_states(q.vars, q.body, q.patterns), s);
      asserts.push_back(std::move(s));
    }
    for (const auto& a : pg.asserted) {
      std::string s;
      smt_formula(a, s);
      asserts.push_back(std::move(s));
      collect_sample_points(a, script.sample_points);
    }
  } else {
    for (const auto& h : g.hypotheses)
      collect_free(h, states, ints, preds, {}, {});
    collect_free(g.conclusion, states, ints, preds, {}, {});
    for (const auto& h : g.hypotheses) {
      std::string s;
      smt_formula(h, s);
      asserts.push_back(std::move(s));
    }
    std::string c;
    smt_formula(g.conclusion, c);
    asserts.push_back("(not " + c + ")");
    collect_sample_points(g.conclusion, script.sample_points);
  }

  for (const auto& s : states)
    out += "(declare-fun " + s + " () (Array Int Int))\n";
  for (const auto& v : ints) out += "(declare-fun " + v + " () Int)\n";
  for (const auto& p : preds)
    out += "(declare-fun call_" + p +
           " ((Array Int Int) (Array Int Int)) Bool)\n";
  for (const auto& s : states) out += "(assert " + nonneg_axiom(s) + ")\n";
  for (const auto& v : ints) out += "(assert (>= " + v + " 0))\n";
  for (const auto& a : asserts) out += "(assert " + a + ")\n";
  out += "(check-sat)\n";
  if (opts.get_model) out += "(get-model)\n";

  std::sort(script.sample_points.begin(), script.sample_points.end());
  script.sample_points.erase(
      std::unique(script.sample_points.begin(), script.sample_points.end()),
      script.sample_points.end());
  return script;
}

// ------------------------------------------------------------ s-expressions

namespace {

struct Sexpr {
  bool is_atom = false;
  std::string atom;
  std::vector<Sexpr> items;
};

struct SexprParser {
  std::string_view s;
  size_t i = 0;

  void skip_ws() {
    while (i < s.size()) {
      if (std::isspace(static_cast<unsigned char>(s[i]))) {
        ++i;
      } else if (s[i] == ';') {
        while (i < s.size() && s[i] != '\n') ++i;
      } else {
        break;
      }
    }
  }
  bool done() {
    skip_ws();
    return i >= s.size();
  }
  Sexpr parse() {
    skip_ws();
    if (i >= s.size()) throw SolverError(SolverError::Kind::Protocol, "eof in sexpr");
    Sexpr e;
    if (s[i] == '(') {
      ++i;
      for (;;) {
        skip_ws();
        if (i >= s.size())
          throw SolverError(SolverError::Kind::Protocol, "unclosed sexpr");
        if (s[i] == ')') {
          ++i;
          return e;
        }
        e.items.push_back(parse());
      }
    }
    e.is_atom = true;
    size_t start = i;
    if (s[i] == '|') {
      ++i;
      while (i < s.size() && s[i] != '|') ++i;
      ++i;
    } else {
      while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i])) &&
             s[i] != '(' && s[i] != ')')
        ++i;
    }
    e.atom = std::string(s.substr(start, i - start));
    return e;
  }
};

const Sexpr* find_item(const Sexpr& e, size_t idx) {
  return idx < e.items.size() ? &e.items[idx] : nullptr;
}

struct ModelReader {
  std::map<std::string, const Sexpr*> defs;      // name -> body
  std::map<std::string, const Sexpr*> fun_defs;  // unary Int fun -> body
  std::map<std::string, std::string> fun_params; // its parameter name

  void index(const Sexpr& e) {
    if (!e.items.empty() && e.items[0].is_atom && e.items[0].atom == "define-fun") {
      index_one(e);
      return;
    }
    for (const auto& item : e.items)
      if (!item.is_atom) index(item);
  }

  void index_one(const Sexpr& item) {
    if (item.items.size() < 5) return;
    const std::string& name = item.items[1].atom;
    const Sexpr& params = item.items[2];
    const Sexpr& body = item.items.back();
    if (params.items.empty()) {
      defs[name] = &body;
    } else if (params.items.size() == 1 && params.items[0].items.size() == 2) {
      fun_defs[name] = &body;
      fun_params[name] = params.items[0].items[0].atom;
    }
  }

  static BigInt parse_int(const Sexpr& e) {
    if (e.is_atom) {
      auto n = BigNat::parse(e.atom);
      if (!n) throw SolverError(SolverError::Kind::Protocol,
                                "bad numeral in model: " + e.atom);
      return BigInt::from_nat(*n);
    }
    if (e.items.size() == 2 && e.items[0].is_atom && e.items[0].atom == "-")
      return -parse_int(e.items[1]);
    throw SolverError(SolverError::Kind::Protocol, "bad numeral in model");
  }

  BigInt eval_fun(const std::string& fun, const BigInt& arg) {
    auto it = fun_defs.find(fun);
    if (it == fun_defs.end())
      throw SolverError(SolverError::Kind::Protocol, "missing fun " + fun);
    return eval_int_body(*it->second, fun_params[fun], arg);
  }

  BigInt eval_int_body(const Sexpr& e, const std::string& param,
                       const BigInt& arg) {
    if (e.is_atom) {
      if (e.atom == param) return arg;
      return parse_int(e);
    }
    if (!e.items.empty() && e.items[0].is_atom && e.items[0].atom == "ite") {
      const Sexpr& cond = e.items[1];
      // (= param k) or (= k param)
      bool truth = false;
      if (cond.items.size() == 3 && cond.items[0].atom == "=") {
        const Sexpr& a = cond.items[1];
        const Sexpr& b = cond.items[2];
        BigInt k = a.is_atom && a.atom == param ? parse_int(b) : parse_int(a);
        truth = k == arg;
      }
      return eval_int_body(e.items[truth ? 2 : 3], param, arg);
    }
    return parse_int(e);
  }

  BigInt read_array(const Sexpr& body, const BigInt& addr) {
    if (body.is_atom) {
      auto it = defs.find(body.atom);
      if (it != defs.end()) return read_array(*it->second, addr);
      throw SolverError(SolverError::Kind::Protocol,
                        "opaque array value: " + body.atom);
    }
    const Sexpr* head = find_item(body, 0);
    if (!head)
      throw SolverError(SolverError::Kind::Protocol, "empty array value");
    if (head->is_atom && head->atom == "store" && body.items.size() == 4) {
      BigInt idx = parse_int(body.items[2]);
      if (idx == addr) return parse_int(body.items[3]);
      return read_array(body.items[1], addr);
    }
    // ((as const (Array Int Int)) v)
    if (!head->is_atom && head->items.size() >= 2 && head->items[0].is_atom &&
        head->items[0].atom == "as" && head->items[1].atom == "const" &&
        body.items.size() == 2)
      return parse_int(body.items[1]);
    // (_ as-array f)
    if (head->is_atom && head->atom == "_" && body.items.size() == 3 &&
        body.items[1].atom == "as-array")
      return eval_fun(body.items[2].atom, addr);
    // (lambda ((x Int)) body)
    if (head->is_atom && head->atom == "lambda" && body.items.size() == 3)
      return eval_int_body(body.items[2], body.items[1].items[0].items[0].atom,
                           addr);
    if (head->is_atom && head->atom == "ite" && body.items.size() == 4)
      throw SolverError(SolverError::Kind::Protocol, "array-level ite model");
    throw SolverError(SolverError::Kind::Protocol, "unrecognized array model");
  }
};

} // namespace

// --------------------------------------------------------------- processes

namespace {

struct ProcessResult {
  int exit_code = -1;
  bool timed_out = false;
  std::string out;
};

ProcessResult run_with_timeout(const std::string& shell_cmd,
                               const std::string& input, double timeout_s) {
  int in_pipe[2], out_pipe[2];
  if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0)
    throw SolverError(SolverError::Kind::Protocol, "pipe() failed");
  pid_t pid = fork();
  if (pid < 0) throw SolverError(SolverError::Kind::Protocol, "fork() failed");
  if (pid == 0) {
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    dup2(out_pipe[1], STDERR_FILENO);
    close(in_pipe[0]);
    close(in_pipe[1]);
    close(out_pipe[0]);
    close(out_pipe[1]);
    execl("/bin/sh", "sh", "-c", shell_cmd.c_str(), (char*)nullptr);
    _exit(127);
  }
  close(in_pipe[0]);
  close(out_pipe[1]);
  // the scripts are far below pipe capacity; a single write suffices
  size_t off = 0;
  while (off < input.size()) {
    ssize_t n = write(in_pipe[1], input.data() + off, input.size() - off);
    if (n <= 0) break;
    off += static_cast<size_t>(n);
  }
  close(in_pipe[1]);

  ProcessResult res;
  auto deadline = std::chrono::steady_clock::now() +
                  std::chrono::milliseconds(static_cast<long>(timeout_s * 1000));
  char buf[4096];
  for (;;) {
    auto now = std::chrono::steady_clock::now();
    long remain_ms = static_cast<long>(
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now)
            .count());
    if (remain_ms < 0) remain_ms = 0;
    struct pollfd pfd = {out_pipe[0], POLLIN, 0};
    int pr = poll(&pfd, 1, static_cast<int>(std::min<long>(remain_ms, 200)));
    if (pr > 0) {
      ssize_t n = read(out_pipe[0], buf, sizeof buf);
      if (n > 0) {
        res.out.append(buf, static_cast<size_t>(n));
        continue;
      }
      break; // eof
    }
    if (std::chrono::steady_clock::now() >= deadline) {
      res.timed_out = true;
      kill(pid, SIGKILL);
      break;
    }
    // poll timeout slice: check if child exited without closing (unlikely)
  }
  close(out_pipe[0]);
  int status = 0;
  waitpid(pid, &status, 0);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

std::string sanitize_label(const std::string& label) {
  std::string out;
  for (char c : label)
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-')
               ? c
               : '_';
  return out;
}

} // namespace

SolverVerdict check(const LoweredScript& script, const SolverConfig& config) {
  if (config.command.empty())
    throw SolverError(SolverError::Kind::NotFound, "no solver command configured");

  // script goes to a temp file (passed as the last argument) and to stdin
  std::string path = "/tmp/relic_" + sanitize_label(script.goal_label) + "_" +
                     std::to_string(getpid()) + ".smt2";
  {
    std::ofstream f(path);
    f << script.text;
  }
  std::string cmd = config.command + " " + path;
  ProcessResult res = run_with_timeout(cmd, script.text, config.timeout_s);
  unlink(path.c_str());

  if (res.timed_out) return SolverVerdict::unknown("timeout");

  // first result token
  std::istringstream lines(res.out);
  std::string line, result;
  std::string rest;
  bool in_rest = false;
  while (std::getline(lines, line)) {
    if (in_rest) {
      rest += line + "\n";
      continue;
    }
    std::string trimmed = line;
    trimmed.erase(0, trimmed.find_first_not_of(" \t\r"));
    if (trimmed == "sat" || trimmed == "unsat" || trimmed == "unknown") {
      result = trimmed;
      in_rest = true;
    }
  }
  if (result.empty()) {
    if (res.exit_code == 127)
      throw SolverError(SolverError::Kind::NotFound,
                        "solver not found: " + config.command);
    if (res.exit_code != 0)
      throw SolverError(SolverError::Kind::NonzeroExit,
                        "solver exited with code " +
                            std::to_string(res.exit_code));
    throw SolverError(SolverError::Kind::Protocol,
                      "no sat/unsat/unknown in solver output");
  }
  if (result == "unsat") return SolverVerdict::valid();
  if (result == "unknown") return SolverVerdict::unknown("solver returned unknown");

  // sat: extract the state reads mentioned in the goal from the model
  std::vector<ModelSample> samples;
  if (!script.sample_points.empty() && !rest.empty()) {
    try {
      // parse everything first; the reader keeps pointers into these nodes
      std::vector<Sexpr> nodes;
      SexprParser p{rest, 0};
      while (!p.done()) nodes.push_back(p.parse());
      ModelReader reader;
      for (const auto& e : nodes) {
        if (e.is_atom) continue;
        // both "(model (define-fun ...) ...)" wrappers and bare
        // "((define-fun ...) ...)" response lists appear in the wild
        reader.index(e);
      }
      for (const auto& [state, addr] : script.sample_points) {
        auto it = reader.defs.find(state);
        if (it == reader.defs.end()) continue;
        samples.push_back(ModelSample{state, addr, reader.read_array(*it->second, addr)});
      }
    } catch (const SolverError&) {
      // model shape outside the recognized fragment: report the verdict
      // without samples rather than inventing values
      samples.clear();
    }
  }
  return SolverVerdict::invalid(std::move(samples));
}

SolverVerdict solve_goal(const Goal& g, const SolverConfig& config) {
  if (!config.dump_dir.empty()) {
    LoweredScript script = lower(g);
    std::ofstream f(config.dump_dir + "/" + sanitize_label(g.label) + ".smt2");
    f << script.text;
  }
  if (config.command.empty() || config.command == "builtin")
    return builtin_solve(g);
  return check(lower(g), config);
}

} // namespace relic
