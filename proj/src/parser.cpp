#include "relic/parser.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace relic {

namespace {

// ------------------------------------------------------------------ lexer

struct Token {
  enum class Kind { Ident, Number, Punct, Eof };
  Kind kind = Kind::Eof;
  std::string text;
  int line = 1;
  int col = 1;
};

const std::set<std::string> kKeywords = {
    "proc", "requires", "ensures", "relational", "property", "assert",
    "invariant", "call", "skip", "if", "else", "while", "true", "false",
    "forall", "exists", "old"};

bool is_location_token(const std::string& s) {
  if (s.size() < 2 || s[0] != 'x') return false;
  return std::all_of(s.begin() + 1, s.end(),
                     [](char c) { return c >= '0' && c <= '9'; });
}

class Lexer {
public:
  explicit Lexer(std::string_view text) : text_(text) { lex(); }
  const std::vector<Token>& tokens() const { return toks_; }

private:
  std::string_view text_;
  std::vector<Token> toks_;

  void lex() {
    int line = 1, col = 1;
    size_t i = 0;
    auto advance = [&](size_t n) {
      for (size_t k = 0; k < n; ++k) {
        if (text_[i + k] == '\n') {
          ++line;
          col = 1;
        } else {
          ++col;
        }
      }
      i += n;
    };
    while (i < text_.size()) {
      char c = text_[i];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance(1);
        continue;
      }
      if (c == '/' && i + 1 < text_.size() && text_[i + 1] == '/') {
        while (i < text_.size() && text_[i] != '\n') advance(1);
        continue;
      }
      Token t;
      t.line = line;
      t.col = col;
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        size_t j = i;
        while (j < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[j])) ||
                text_[j] == '_'))
          ++j;
        t.kind = Token::Kind::Ident;
        t.text = std::string(text_.substr(i, j - i));
        advance(j - i);
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        size_t j = i;
        while (j < text_.size() &&
               std::isdigit(static_cast<unsigned char>(text_[j])))
          ++j;
        t.kind = Token::Kind::Number;
        t.text = std::string(text_.substr(i, j - i));
        advance(j - i);
      } else {
        static const char* two_char[] = {":=", "==>", "==", "!=", "<=",
                                         ">=", "&&", "||", nullptr};
        t.kind = Token::Kind::Punct;
        std::string_view rest = text_.substr(i);
        if (rest.substr(0, 3) == "==>") {
          t.text = "==>";
        } else {
          t.text = "";
          for (const char** p = two_char; *p; ++p) {
            if (rest.substr(0, 2) == *p) {
              t.text = *p;
              break;
            }
          }
          if (t.text.empty()) t.text = std::string(1, c);
        }
        advance(t.text.size());
      }
      toks_.push_back(std::move(t));
    }
    Token eof;
    eof.kind = Token::Kind::Eof;
    eof.line = line;
    eof.col = col;
    toks_.push_back(eof);
  }
};

// ----------------------------------------------------------------- parser

class Parser {
public:
  explicit Parser(std::string_view text) : lexer_(text) {}
  ProgramFile parse_file();

private:
  Lexer lexer_;
  size_t pos_ = 0;

  const Token& peek(size_t k = 0) const {
    size_t idx = std::min(pos_ + k, lexer_.tokens().size() - 1);
    return lexer_.tokens()[idx];
  }
  const Token& next() {
    const Token& t = lexer_.tokens()[pos_];
    if (t.kind != Token::Kind::Eof) ++pos_;
    return t;
  }
  [[noreturn]] void fail(const std::string& msg, const Token& at) const {
    throw ParseError(msg + " at line " + std::to_string(at.line) + ":" +
                         std::to_string(at.col),
                     at.line, at.col);
  }
  bool at_punct(const std::string& p, size_t k = 0) const {
    return peek(k).kind == Token::Kind::Punct && peek(k).text == p;
  }
  bool at_ident(const std::string& w, size_t k = 0) const {
    return peek(k).kind == Token::Kind::Ident && peek(k).text == w;
  }
  void expect_punct(const std::string& p) {
    if (!at_punct(p)) fail("expected '" + p + "'", peek());
    next();
  }
  void expect_keyword(const std::string& w) {
    if (!at_ident(w)) fail("expected '" + w + "'", peek());
    next();
  }
  std::string expect_name() {
    if (peek().kind != Token::Kind::Ident) fail("expected a name", peek());
    if (kKeywords.count(peek().text)) fail("keyword used as name", peek());
    if (is_location_token(peek().text))
      fail("location token used as name", peek());
    return next().text;
  }

  Loc expect_location() {
    if (peek().kind != Token::Kind::Ident || !is_location_token(peek().text))
      fail("expected a location (x<digits>)", peek());
    Token t = next();
    return Loc{addr_of(t.text)};
  }

  BigNat expect_number() {
    if (peek().kind != Token::Kind::Number) fail("expected a number", peek());
    auto n = BigNat::parse(next().text);
    return *n;
  }

  // --- commands
  ComPtr parse_block();
  ComPtr parse_com();
  AexpPtr parse_aexp();
  AexpPtr parse_aprod();
  AexpPtr parse_afactor();
  BexpPtr parse_bexp();
  BexpPtr parse_band();
  BexpPtr parse_bunary();

  // --- assertions
  AssertionPtr parse_assertion();
  AssertionPtr parse_adisj();
  AssertionPtr parse_aconj();
  AssertionPtr parse_aunary();
  LTermPtr parse_lterm();
  LTermPtr parse_lprod();
  LTermPtr parse_latom();
  LTermPtr parse_state_read();
  // A location possibly followed by a run tag <k>.
  std::pair<Loc, std::optional<unsigned>> parse_tagged_location();
};

std::pair<Loc, std::optional<unsigned>> Parser::parse_tagged_location() {
  Loc loc = expect_location();
  // 'x3<1>' is a tagged read; 'x3 < 1' (not followed by '>') is left to the
  // comparison grammar.
  if (at_punct("<") && peek(1).kind == Token::Kind::Number && at_punct(">", 2)) {
    next();
    BigNat run = expect_number();
    expect_punct(">");
    if (!run.fits_u64() || run.to_u64() == 0 || run.to_u64() > 1000000)
      fail("run tag out of range", peek());
    return {loc, static_cast<unsigned>(run.to_u64())};
  }
  return {loc, std::nullopt};
}

LTermPtr Parser::parse_state_read() {
  bool is_old = false;
  size_t derefs = 0;
  if (at_ident("old")) {
    next();
    expect_punct("(");
    is_old = true;
  }
  while (at_punct("*")) {
    next();
    ++derefs;
  }
  auto [loc, tag] = parse_tagged_location();
  if (is_old) expect_punct(")");
  StateRef ref;
  if (tag) {
    ref = is_old ? StateRef::old_tag(*tag) : StateRef::tag(*tag);
  } else {
    ref = is_old ? StateRef::old() : StateRef::cur();
  }
  LTermPtr t = LTerm::read(ref, LTerm::constant(BigNat(loc.index)));
  for (size_t k = 0; k < derefs; ++k) t = LTerm::read(ref, t);
  return t;
}

LTermPtr Parser::parse_latom() {
  if (peek().kind == Token::Kind::Number) return LTerm::constant(expect_number());
  if (at_punct("(")) {
    next();
    LTermPtr t = parse_lterm();
    expect_punct(")");
    return t;
  }
  if (at_punct("*") || at_ident("old")) return parse_state_read();
  if (peek().kind == Token::Kind::Ident) {
    if (is_location_token(peek().text)) return parse_state_read();
    if (kKeywords.count(peek().text)) fail("unexpected keyword in term", peek());
    return LTerm::logical_var(next().text);
  }
  fail("expected a term", peek());
}

LTermPtr Parser::parse_lprod() {
  LTermPtr t = parse_latom();
  while (at_punct("*")) {
    next();
    t = LTerm::arith(ArithOp::Mul, t, parse_latom());
  }
  return t;
}

LTermPtr Parser::parse_lterm() {
  LTermPtr t = parse_lprod();
  while (at_punct("+") || at_punct("-")) {
    bool add = peek().text == "+";
    next();
    t = LTerm::arith(add ? ArithOp::Add : ArithOp::Monus, t, parse_lprod());
  }
  return t;
}

namespace {
std::optional<CmpOp> cmp_from(const std::string& p) {
  if (p == "==") return CmpOp::Eq;
  if (p == "!=") return CmpOp::Ne;
  if (p == "<=") return CmpOp::Le;
  if (p == "<") return CmpOp::Lt;
  if (p == ">=") return CmpOp::Ge;
  if (p == ">") return CmpOp::Gt;
  return std::nullopt;
}
} // namespace

AssertionPtr Parser::parse_aunary() {
  if (at_punct("!")) {
    next();
    return Assertion::negate(parse_aunary());
  }
  if (at_ident("forall") || at_ident("exists")) {
    bool is_forall = peek().text == "forall";
    next();
    std::string var = expect_name();
    LTermPtr bound;
    if (at_punct("<")) {
      next();
      bound = parse_lterm();
    }
    expect_punct(".");
    AssertionPtr body = parse_assertion();
    return is_forall ? Assertion::forall(var, bound, body)
                     : Assertion::exists(var, bound, body);
  }
  if (at_ident("true") || at_ident("false")) {
    // Could be the start of a comparison only if booleans were terms; they
    // are not, so this is a constant.
    bool v = peek().text == "true";
    next();
    return Assertion::bool_const(v);
  }
  if (at_punct("(")) {
    // Either a parenthesized formula or a parenthesized arithmetic term
    // starting a comparison; try the formula reading first.
    size_t save = pos_;
    try {
      next();
      AssertionPtr inner = parse_assertion();
      expect_punct(")");
      return inner;
    } catch (const ParseError&) {
      pos_ = save;
    }
  }
  LTermPtr lhs = parse_lterm();
  if (peek().kind != Token::Kind::Punct) fail("expected comparison", peek());
  auto op = cmp_from(peek().text);
  if (!op) fail("expected comparison operator", peek());
  next();
  LTermPtr rhs = parse_lterm();
  return Assertion::compare(*op, lhs, rhs);
}

AssertionPtr Parser::parse_aconj() {
  AssertionPtr a = parse_aunary();
  while (at_punct("&&")) {
    next();
    a = Assertion::conj(a, parse_aunary());
  }
  return a;
}

AssertionPtr Parser::parse_adisj() {
  AssertionPtr a = parse_aconj();
  while (at_punct("||")) {
    next();
    a = Assertion::disj(a, parse_aconj());
  }
  return a;
}

AssertionPtr Parser::parse_assertion() {
  AssertionPtr a = parse_adisj();
  if (at_punct("==>")) {
    next();
    return Assertion::implies(a, parse_assertion());
  }
  return a;
}

AexpPtr Parser::parse_afactor() {
  if (peek().kind == Token::Kind::Number) return Aexp::nat(expect_number());
  if (at_punct("*")) {
    next();
    return Aexp::deref(expect_location());
  }
  if (at_punct("&")) {
    next();
    return Aexp::addr_of(expect_location());
  }
  if (at_punct("(")) {
    next();
    AexpPtr e = parse_aexp();
    expect_punct(")");
    return e;
  }
  if (peek().kind == Token::Kind::Ident && is_location_token(peek().text))
    return Aexp::var(expect_location());
  fail("expected an arithmetic expression", peek());
}

AexpPtr Parser::parse_aprod() {
  AexpPtr e = parse_afactor();
  while (at_punct("*")) {
    next();
    e = Aexp::bin(AOp::Mul, e, parse_afactor());
  }
  return e;
}

AexpPtr Parser::parse_aexp() {
  AexpPtr e = parse_aprod();
  while (at_punct("+") || at_punct("-")) {
    bool add = peek().text == "+";
    next();
    e = Aexp::bin(add ? AOp::Add : AOp::Monus, e, parse_aprod());
  }
  return e;
}

BexpPtr Parser::parse_bunary() {
  if (at_punct("!")) {
    next();
    return Bexp::negate(parse_bunary());
  }
  if (at_ident("true") || at_ident("false")) {
    bool v = peek().text == "true";
    next();
    return Bexp::bool_const(v);
  }
  if (at_punct("(")) {
    size_t save = pos_;
    try {
      next();
      BexpPtr inner = parse_bexp();
      expect_punct(")");
      return inner;
    } catch (const ParseError&) {
      pos_ = save;
    }
  }
  AexpPtr lhs = parse_aexp();
  if (peek().kind != Token::Kind::Punct) fail("expected comparison", peek());
  auto op = cmp_from(peek().text);
  if (!op) fail("expected comparison operator", peek());
  next();
  AexpPtr rhs = parse_aexp();
  return Bexp::cmp_exp(*op, lhs, rhs);
}

BexpPtr Parser::parse_band() {
  BexpPtr b = parse_bunary();
  while (at_punct("&&")) {
    next();
    b = Bexp::bin(LOp::And, b, parse_bunary());
  }
  return b;
}

BexpPtr Parser::parse_bexp() {
  BexpPtr b = parse_band();
  while (at_punct("||")) {
    next();
    b = Bexp::bin(LOp::Or, b, parse_band());
  }
  return b;
}

ComPtr Parser::parse_com() {
  if (at_ident("skip")) {
    next();
    return Com::skip();
  }
  if (at_ident("assert")) {
    next();
    expect_punct("(");
    AssertionPtr a = parse_assertion();
    expect_punct(")");
    return Com::assert_cmd(a);
  }
  if (at_ident("call")) {
    next();
    return Com::call(expect_name());
  }
  if (at_ident("if")) {
    next();
    expect_punct("(");
    BexpPtr cond = parse_bexp();
    expect_punct(")");
    ComPtr then_c = parse_block();
    expect_keyword("else");
    ComPtr else_c = parse_block();
    return Com::if_cmd(cond, then_c, else_c);
  }
  if (at_ident("while")) {
    next();
    expect_punct("(");
    BexpPtr cond = parse_bexp();
    expect_punct(")");
    if (!at_ident("invariant"))
      fail("while requires an invariant annotation", peek());
    next();
    expect_punct("(");
    AssertionPtr inv = parse_assertion();
    expect_punct(")");
    ComPtr body = parse_block();
    return Com::while_cmd(cond, inv, body);
  }
  if (at_punct("*")) {
    next();
    Loc loc = expect_location();
    expect_punct(":=");
    return Com::indirect_assign(loc, parse_aexp());
  }
  if (peek().kind == Token::Kind::Ident && is_location_token(peek().text)) {
    Loc loc = expect_location();
    expect_punct(":=");
    return Com::assign(loc, parse_aexp());
  }
  fail("expected a command", peek());
}

ComPtr Parser::parse_block() {
  expect_punct("{");
  if (at_punct("}")) {
    next();
    return Com::skip();
  }
  std::vector<ComPtr> cmds;
  cmds.push_back(parse_com());
  while (at_punct(";")) {
    next();
    if (at_punct("}")) break; // trailing semicolon
    cmds.push_back(parse_com());
  }
  expect_punct("}");
  // Right-associated: c1; c2; c3 is Seq(c1, Seq(c2, c3)).
  ComPtr out = cmds.back();
  for (size_t i = cmds.size() - 1; i-- > 0;) out = Com::seq(cmds[i], out);
  return out;
}

void collect_calls(const Com& c, std::set<std::string>& out) {
  switch (c.kind) {
    case Com::Kind::Call: out.insert(c.callee); return;
    case Com::Kind::Seq:
    case Com::Kind::If:
      collect_calls(*c.c0, out);
      collect_calls(*c.c1, out);
      return;
    case Com::Kind::While: collect_calls(*c.c0, out); return;
    default: return;
  }
}

ProgramFile Parser::parse_file() {
  ProgramFile file;
  while (peek().kind != Token::Kind::Eof) {
    if (at_ident("proc")) {
      next();
      Token name_tok = peek();
      ProcDef def;
      def.name = expect_name();
      def.pre = Assertion::bool_const(true);
      def.post = Assertion::bool_const(true);
      if (at_ident("requires")) {
        next();
        def.pre = parse_assertion();
        def.has_contract = true;
      }
      if (at_ident("ensures")) {
        next();
        def.post = parse_assertion();
        def.has_contract = true;
      }
      def.body = parse_block();
      for (const auto& p : file.procs)
        if (p.name == def.name)
          fail("duplicate procedure '" + def.name + "'", name_tok);
      try {
        check_unary_pre(*def.pre);
        check_unary_post(*def.post);
      } catch (const ArityError& e) {
        fail(std::string("in contract of '") + def.name + "': " + e.what(),
             name_tok);
      }
      file.procs.push_back(std::move(def));
    } else if (at_ident("relational")) {
      Token kw = peek();
      next();
      expect_punct("[");
      RelContractDef def;
      def.names.push_back(expect_name());
      while (at_punct(",")) {
        next();
        def.names.push_back(expect_name());
      }
      expect_punct("]");
      def.pre = Assertion::bool_const(true);
      def.post = Assertion::bool_const(true);
      if (at_ident("requires")) {
        next();
        def.pre = parse_assertion();
      }
      if (at_ident("ensures")) {
        next();
        def.post = parse_assertion();
      }
      unsigned n = static_cast<unsigned>(def.names.size());
      try {
        check_rel_pre(*def.pre, n);
        check_rel_post(*def.post, n);
      } catch (const ArityError& e) {
        fail(std::string("in relational contract: ") + e.what(), kw);
      }
      for (const auto& rc : file.rel_contracts)
        if (rc.names == def.names)
          fail("duplicate relational contract for this sequence", kw);
      file.rel_contracts.push_back(std::move(def));
    } else if (at_ident("property")) {
      Token kw = peek();
      next();
      PropertyDef def;
      def.label = expect_name();
      def.commands.push_back(parse_block());
      while (at_punct("~")) {
        next();
        def.commands.push_back(parse_block());
      }
      def.pre = Assertion::bool_const(true);
      def.post = Assertion::bool_const(true);
      if (at_ident("requires")) {
        next();
        def.pre = parse_assertion();
      }
      if (at_ident("ensures")) {
        next();
        def.post = parse_assertion();
      }
      unsigned n = static_cast<unsigned>(def.commands.size());
      try {
        check_rel_pre(*def.pre, n);
        check_rel_post(*def.post, n);
      } catch (const ArityError& e) {
        fail(std::string("in property '") + def.label + "': " + e.what(), kw);
      }
      for (const auto& p : file.properties)
        if (p.label == def.label)
          fail("duplicate property '" + def.label + "'", kw);
      file.properties.push_back(std::move(def));
    } else {
      fail("expected 'proc', 'relational' or 'property'", peek());
    }
  }

  // Every call target, including those in property commands and relational
  // contract sequences, must have a body.
  std::set<std::string> defined;
  for (const auto& p : file.procs) defined.insert(p.name);
  std::set<std::string> called;
  for (const auto& p : file.procs) collect_calls(*p.body, called);
  for (const auto& prop : file.properties)
    for (const auto& c : prop.commands) collect_calls(*c, called);
  for (const auto& rc : file.rel_contracts)
    for (const auto& n : rc.names) called.insert(n);
  for (const auto& name : called)
    if (!defined.count(name))
      throw ParseError("unresolved procedure '" + name + "'");
  return file;
}

} // namespace

ProgramFile parse(std::string_view text) { return Parser(text).parse_file(); }

ProcEnv ProgramFile::proc_env() const {
  ProcEnv env;
  for (const auto& p : procs) env.define(p.name, p.body);
  return env;
}

ContractEnv ProgramFile::contract_env() const {
  ContractEnv env;
  for (const auto& p : procs)
    if (p.has_contract) env.define(p.name, Contract{p.pre, p.post});
  return env;
}

RelContractEnv ProgramFile::rel_env() const {
  RelContractEnv env;
  for (const auto& rc : rel_contracts)
    env.define(rc.names, RelContract{rc.pre, rc.post});
  return env;
}

const PropertyDef* ProgramFile::find_property(const std::string& label) const {
  for (const auto& p : properties)
    if (p.label == label) return &p;
  return nullptr;
}

// ---------------------------------------------------------- pretty printer

namespace {

int aexp_prec(const Aexp& a) {
  if (a.kind != Aexp::Kind::Bin) return 3;
  return a.op == AOp::Mul ? 2 : 1;
}

std::string pp_aexp(const Aexp& a, int ctx_prec) {
  std::string s;
  switch (a.kind) {
    case Aexp::Kind::Nat: s = a.value.str(); break;
    case Aexp::Kind::Var: s = a.loc.name(); break;
    case Aexp::Kind::Deref: s = "*" + a.loc.name(); break;
    case Aexp::Kind::AddrOf: s = "&" + a.loc.name(); break;
    case Aexp::Kind::Bin: {
      int p = aexp_prec(a);
      const char* op = a.op == AOp::Add ? " + " : a.op == AOp::Mul ? " * " : " - ";
      // Left-associative grammar: the right child needs parens at equal
      // precedence.
      s = pp_aexp(*a.lhs, p) + op + pp_aexp(*a.rhs, p + 1);
      if (p < ctx_prec) s = "(" + s + ")";
      return s;
    }
  }
  return s;
}

int bexp_prec(const Bexp& b) {
  if (b.kind == Bexp::Kind::Bin) return b.lop == LOp::Or ? 1 : 2;
  return 3;
}

std::string pp_bexp(const Bexp& b, int ctx_prec) {
  switch (b.kind) {
    case Bexp::Kind::BoolConst: return b.bval ? "true" : "false";
    case Bexp::Kind::Cmp:
      return pp_aexp(*b.lhs, 0) + " " + cmp_op_str(b.cmp) + " " +
             pp_aexp(*b.rhs, 0);
    case Bexp::Kind::Bin: {
      int p = bexp_prec(b);
      const char* op = b.lop == LOp::Or ? " || " : " && ";
      std::string s = pp_bexp(*b.b0, p) + op + pp_bexp(*b.b1, p + 1);
      if (p < ctx_prec) s = "(" + s + ")";
      return s;
    }
    case Bexp::Kind::Not: {
      std::string inner = pp_bexp(*b.b0, 3);
      if (b.b0->kind == Bexp::Kind::Cmp || b.b0->kind == Bexp::Kind::Bin)
        inner = "(" + inner + ")";
      return "!" + inner;
    }
  }
  return "?";
}

// Surface form of a read: either x_i, possibly tagged, possibly old-glossed,
// or a chain of same-state dereferences of such a read.
std::string pp_read(const LTerm& t) {
  StateRef ref = t.state;
  size_t derefs = 0;
  const LTerm* cur = &t;
  while (cur->arg0->kind == LTerm::Kind::Read) {
    if (!(cur->arg0->state == ref))
      throw std::logic_error("unprintable mixed-state read");
    ++derefs;
    cur = cur->arg0.get();
  }
  if (cur->arg0->kind != LTerm::Kind::Const)
    throw std::logic_error("unprintable computed read address");
  std::string loc = "x" + cur->arg0->value.str();
  std::string stars(derefs, '*');
  bool old_form =
      ref.kind == StateRef::Kind::Old || ref.kind == StateRef::Kind::OldTag;
  std::string tag;
  if (ref.kind == StateRef::Kind::Tag || ref.kind == StateRef::Kind::OldTag)
    tag = "<" + std::to_string(ref.run) + ">";
  std::string body = stars + loc + tag;
  return old_form ? "old(" + body + ")" : body;
}

int lterm_prec(const LTerm& t) {
  if (t.kind != LTerm::Kind::Arith) return 3;
  return t.op == ArithOp::Mul ? 2 : 1;
}

std::string pp_lterm(const LTerm& t, int ctx_prec) {
  switch (t.kind) {
    case LTerm::Kind::Const: return t.value.str();
    case LTerm::Kind::Var: return t.var;
    case LTerm::Kind::Read: return pp_read(t);
    case LTerm::Kind::Arith: {
      int p = lterm_prec(t);
      const char* op = t.op == ArithOp::Add ? " + "
                       : t.op == ArithOp::Mul ? " * " : " - ";
      std::string s = pp_lterm(*t.arg0, p) + op + pp_lterm(*t.arg1, p + 1);
      if (p < ctx_prec) s = "(" + s + ")";
      return s;
    }
  }
  return "?";
}

std::string pp_assertion(const Assertion& a, int ctx_prec) {
  switch (a.kind) {
    case Assertion::Kind::BoolConst: return a.bval ? "true" : "false";
    case Assertion::Kind::Compare:
      return pp_lterm(*a.lhs, 0) + " " + cmp_op_str(a.cmp) + " " +
             pp_lterm(*a.rhs, 0);
    case Assertion::Kind::Not: return "!(" + pp_assertion(*a.a, 0) + ")";
    case Assertion::Kind::And: {
      std::string s = pp_assertion(*a.a, 3) + " && " + pp_assertion(*a.b, 4);
      return 3 < ctx_prec ? "(" + s + ")" : s;
    }
    case Assertion::Kind::Or: {
      std::string s = pp_assertion(*a.a, 2) + " || " + pp_assertion(*a.b, 3);
      return 2 < ctx_prec ? "(" + s + ")" : s;
    }
    case Assertion::Kind::Implies: {
      // Right-associative.
      std::string s = pp_assertion(*a.a, 2) + " ==> " + pp_assertion(*a.b, 1);
      return 1 < ctx_prec ? "(" + s + ")" : s;
    }
    case Assertion::Kind::Forall:
    case Assertion::Kind::Exists: {
      std::string s = a.kind == Assertion::Kind::Forall ? "forall " : "exists ";
      s += a.var;
      if (a.bound) s += " < " + pp_lterm(*a.bound, 0);
      s += ". " + pp_assertion(*a.a, 0);
      return 0 < ctx_prec ? "(" + s + ")" : s;
    }
  }
  return "?";
}

std::string indent_str(int n) { return std::string(static_cast<size_t>(n) * 2, ' '); }

void pp_com(const Com& c, int indent, std::string& out) {
  // Flatten sequence spines; everything else is one command per line.
  if (c.kind == Com::Kind::Seq) {
    pp_com(*c.c0, indent, out);
    out += ";\n";
    pp_com(*c.c1, indent, out);
    return;
  }
  out += indent_str(indent);
  switch (c.kind) {
    case Com::Kind::Skip: out += "skip"; break;
    case Com::Kind::Assign:
      out += c.loc.name() + " := " + pp_aexp(*c.aexp, 0);
      break;
    case Com::Kind::IndirectAssign:
      out += "*" + c.loc.name() + " := " + pp_aexp(*c.aexp, 0);
      break;
    case Com::Kind::Assert:
      out += "assert (" + pp_assertion(*c.assertion, 0) + ")";
      break;
    case Com::Kind::If:
      out += "if (" + pp_bexp(*c.cond, 0) + ") {\n";
      pp_com(*c.c0, indent + 1, out);
      out += "\n" + indent_str(indent) + "} else {\n";
      pp_com(*c.c1, indent + 1, out);
      out += "\n" + indent_str(indent) + "}";
      break;
    case Com::Kind::While:
      out += "while (" + pp_bexp(*c.cond, 0) + ") invariant (" +
             pp_assertion(*c.assertion, 0) + ") {\n";
      pp_com(*c.c0, indent + 1, out);
      out += "\n" + indent_str(indent) + "}";
      break;
    case Com::Kind::Call: out += "call " + c.callee; break;
    case Com::Kind::Seq: break; // handled above
  }
}

} // namespace

std::string pretty_com(const Com& c, int indent) {
  std::string out;
  pp_com(c, indent, out);
  return out;
}

std::string pretty_assertion(const Assertion& a) { return pp_assertion(a, 0); }
std::string pretty_aexp(const Aexp& a) { return pp_aexp(a, 0); }
std::string pretty_bexp(const Bexp& b) { return pp_bexp(b, 0); }

std::string pretty(const ProgramFile& p) {
  std::string out;
  for (const auto& proc : p.procs) {
    out += "proc " + proc.name;
    if (proc.has_contract) {
      out += "\n  requires " + pretty_assertion(*proc.pre);
      out += "\n  ensures " + pretty_assertion(*proc.post);
      out += "\n";
    } else {
      out += " ";
    }
    out += "{\n" + pretty_com(*proc.body, 1) + "\n}\n\n";
  }
  for (const auto& rc : p.rel_contracts) {
    out += "relational [";
    for (size_t i = 0; i < rc.names.size(); ++i)
      out += (i ? ", " : "") + rc.names[i];
    out += "]\n  requires " + pretty_assertion(*rc.pre);
    out += "\n  ensures " + pretty_assertion(*rc.post) + "\n\n";
  }
  for (const auto& prop : p.properties) {
    out += "property " + prop.label + "\n";
    for (size_t i = 0; i < prop.commands.size(); ++i) {
      out += i == 0 ? "{\n" : " ~ {\n";
      out += pretty_com(*prop.commands[i], 1) + "\n}";
    }
    out += "\n  requires " + pretty_assertion(*prop.pre);
    out += "\n  ensures " + pretty_assertion(*prop.post) + "\n\n";
  }
  return out;
}

} // namespace relic
