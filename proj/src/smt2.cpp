#include "nracegar/smt2.h"

#include <cctype>
#include <set>
#include <sstream>

#include "nracegar/exceptions.h"
#include "nracegar/term_ops.h"

namespace nracegar {

namespace {

const std::set<std::string> & reserved_words()
{
  static const std::set<std::string> words = {
    "and", "or", "not", "=>", "xor", "ite", "true", "false", "let", "!", "=", "<=", "<", ">=", ">",
    "+", "-", "*", "/", "distinct", "fmul", "assert", "par", "_", "as", "exists", "forall", "match",
    "NUMERAL", "DECIMAL", "STRING", "BINARY", "HEXADECIMAL"
  };
  return words;
}

bool is_strict_symbol_char(char c)
{
  if (std::isalnum(static_cast<unsigned char>(c))) return true;
  switch (c) {
    case '~': case '!': case '@': case '$': case '%': case '^': case '&': case '*':
    case '_': case '-': case '+': case '=': case '<': case '>': case '.': case '?':
    case '/':
      return true;
    default: return false;
  }
}

[[noreturn]] void fail(const Sexpr & e, const std::string & msg) { throw ParseError(msg, e.line, e.column); }

void print(std::ostringstream & os, const Term & t)
{
  auto app = [&](const char * op) {
    os << "(" << op;
    for (const Term & c : t.children()) {
      os << " ";
      print(os, c);
    }
    os << ")";
  };
  switch (t.kind()) {
    case Kind::RealConst: os << smt2_rational(t.value()); break;
    case Kind::BoolConst: os << (t.bool_value() ? "true" : "false"); break;
    case Kind::Var: os << smt2_symbol(t); break;
    case Kind::Add: app("+"); break;
    case Kind::Scale:
      os << "(* " << smt2_rational(t.value()) << " ";
      print(os, t[0]);
      os << ")";
      break;
    case Kind::Mul: app("*"); break;
    case Kind::Fmul: app(kFmulName); break;
    case Kind::Ite: app("ite"); break;
    case Kind::Le: app("<="); break;
    case Kind::Lt: app("<"); break;
    case Kind::Eq: app("="); break;
    case Kind::Not: app("not"); break;
    case Kind::And: app("and"); break;
    case Kind::Or: app("or"); break;
    case Kind::Implies: app("=>"); break;
    case Kind::Iff: app("="); break;
  }
}

Rat literal_value(const Sexpr & e)
{
  try {
    return Rat::parse(e.atom);
  } catch (const std::invalid_argument & ex) {
    fail(e, ex.what());
  }
}

}  // namespace

std::string smt2_rational(const Rat & r)
{
  Rat a = r.abs();
  std::string body = a.is_integer() ? a.numerator().get_str()
                                    : "(/ " + a.numerator().get_str() + " " + a.denominator().get_str() + ")";
  return r.sign() < 0 ? "(- " + body + ")" : body;
}

std::string smt2_quote(const std::string & name)
{
  bool simple = !name.empty() && !std::isdigit(static_cast<unsigned char>(name[0]))
                && !reserved_words().count(name);
  for (char c : name) simple = simple && is_strict_symbol_char(c);
  return simple ? name : "|" + name + "|";
}

std::string smt2_symbol(const Term & var)
{
  std::string n = var.name();
  if (var.frame().is_next()) n += ".next";
  if (var.frame().is_timed()) n += "@" + std::to_string(var.frame().index());
  return smt2_quote(n);
}

std::string to_smt2(const Term & t)
{
  std::ostringstream os;
  print(os, t);
  return os.str();
}

std::string serialize_smt2(const Term & f)
{
  std::ostringstream os;
  if (contains_kind(f, Kind::Fmul)) os << "(declare-fun " << kFmulName << " (Real Real) Real)\n";
  for (const Term & v : vars_of(f)) {
    os << "(declare-fun " << smt2_symbol(v) << " () " << to_string(v.sort()) << ")\n";
  }
  os << "(assert " << to_smt2(f) << ")\n";
  return os.str();
}

Term decode_var(const std::string & printed, Sort sort)
{
  if (auto at = printed.rfind('@'); at != std::string::npos && at > 0 && at + 1 < printed.size()) {
    bool digits = true;
    for (size_t i = at + 1; i < printed.size(); ++i) {
      digits = digits && std::isdigit(static_cast<unsigned char>(printed[i]));
    }
    if (digits) return mk_var(printed.substr(0, at), sort, Frame::at(std::stoi(printed.substr(at + 1))));
  }
  static const std::string suffix = ".next";
  if (printed.size() > suffix.size() && printed.compare(printed.size() - suffix.size(), suffix.size(), suffix) == 0) {
    return mk_var(printed.substr(0, printed.size() - suffix.size()), sort, Frame::next());
  }
  return mk_var(printed, sort);
}

Sort parse_sort(const Sexpr & e)
{
  if (e.is_symbol("Real")) return Sort::Real;
  if (e.is_symbol("Bool")) return Sort::Bool;
  fail(e, "unsupported sort '" + e.to_string() + "' (only Real and Bool are supported)");
}

std::optional<Term> Smt2Context::lookup(const std::string & name) const
{
  for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
    if (auto f = it->find(name); f != it->end()) return f->second;
  }
  if (auto f = symbols_.find(name); f != symbols_.end()) return f->second;
  return std::nullopt;
}

Term Smt2Context::declare(const Sexpr & cmd)
{
  const std::string & h = cmd.head();
  if (h == "declare-const") {
    if (cmd.size() != 3 || !cmd[1].is_symbol()) fail(cmd, "malformed declare-const");
    Sort s = parse_sort(cmd[2]);
    Term v = opts_.decode_frames ? decode_var(cmd[1].atom, s) : mk_var(cmd[1].atom, s);
    symbols_[cmd[1].atom] = v;
    return v;
  }
  if (cmd.size() != 4 || !cmd[1].is_symbol() || !cmd[2].is_list()) fail(cmd, "malformed declare-fun");
  const std::string & name = cmd[1].atom;
  if (name == kFmulName) {
    if (cmd[2].size() != 2 || parse_sort(cmd[2][0]) != Sort::Real || parse_sort(cmd[2][1]) != Sort::Real
        || parse_sort(cmd[3]) != Sort::Real) {
      fail(cmd, "fmul must be declared as (Real Real) Real");
    }
    fmul_declared_ = true;
    return Term();
  }
  if (!cmd[2].list.empty()) fail(cmd, "uninterpreted function '" + name + "' is not supported");
  Sort s = parse_sort(cmd[3]);
  Term v = opts_.decode_frames ? decode_var(name, s) : mk_var(name, s);
  symbols_[name] = v;
  return v;
}

void Smt2Context::define(const Sexpr & cmd)
{
  if (cmd.size() != 5 || !cmd[1].is_symbol() || !cmd[2].is_list()) fail(cmd, "malformed define-fun");
  Macro m;
  for (const Sexpr & p : cmd[2].list) {
    if (!p.is_list() || p.size() != 2 || !p[0].is_symbol()) fail(p, "malformed define-fun parameter");
    m.params.emplace_back(p[0].atom, parse_sort(p[1]));
  }
  m.result = parse_sort(cmd[3]);
  m.body = cmd[4];
  if (macros_.count(cmd[1].atom)) fail(cmd, "redefinition of '" + cmd[1].atom + "'");
  macros_[cmd[1].atom] = std::move(m);
}

const Sexpr & Smt2Context::strip_annotations(const Sexpr & e,
                                              std::vector<std::pair<std::string, Sexpr>> * attrs)
{
  const Sexpr * cur = &e;
  while (cur->is_list() && cur->head() == "!") {
    if (cur->size() < 2) fail(*cur, "malformed annotation");
    for (size_t i = 2; i < cur->size(); ++i) {
      const Sexpr & k = (*cur)[i];
      if (k.type != Sexpr::Type::Keyword) fail(k, "expected an attribute keyword");
      Sexpr v;
      if (i + 1 < cur->size() && (*cur)[i + 1].type != Sexpr::Type::Keyword) {
        v = (*cur)[++i];
      }
      if (attrs) attrs->emplace_back(k.atom, v);
    }
    cur = &(*cur)[1];
  }
  return *cur;
}

bool Smt2Context::is_unresolved_symbol(const Sexpr & e) const
{
  return e.is_symbol() && !lookup(e.atom) && !macros_.count(e.atom) && e.atom != "true" && e.atom != "false";
}

Term Smt2Context::parse_symbol(const Sexpr & e, std::optional<Sort> expected)
{
  if (e.atom == "true") return mk_true();
  if (e.atom == "false") return mk_false();
  if (auto t = lookup(e.atom)) return *t;
  if (auto m = macros_.find(e.atom); m != macros_.end()) {
    if (!m->second.params.empty()) fail(e, "function '" + e.atom + "' applied to no arguments");
    Term body = parse_term(m->second.body, m->second.result);
    if (body.sort() != m->second.result) fail(e, "definition of '" + e.atom + "' does not match its sort");
    return body;
  }
  if (!opts_.allow_undeclared) fail(e, "unknown symbol '" + e.atom + "'");
  Sort s = expected.value_or(Sort::Real);
  Term v = opts_.decode_frames ? decode_var(e.atom, s) : mk_var(e.atom, s);
  symbols_[e.atom] = v;
  undeclared_.push_back(v);
  return v;
}

std::vector<Term> Smt2Context::parse_args(const Sexpr & e, size_t from, std::optional<Sort> sort)
{
  std::vector<Term> out;
  for (size_t i = from; i < e.size(); ++i) {
    Term t = parse_term(e[i], sort);
    if (sort && t.sort() != *sort) {
      fail(e[i], std::string("expected a ") + to_string(*sort) + " term in '" + e.head() + "'");
    }
    out.push_back(t);
  }
  return out;
}

std::vector<Term> Smt2Context::parse_same_sort(const Sexpr & e, size_t from, std::optional<Sort> hint)
{
  // parse resolvable arguments first to learn the common sort
  std::vector<Term> out(e.size() - from);
  std::optional<Sort> sort = hint;
  for (size_t i = from; i < e.size(); ++i) {
    if (is_unresolved_symbol(e[i])) continue;
    out[i - from] = parse_term(e[i], sort);
    if (!sort) sort = out[i - from].sort();
  }
  for (size_t i = from; i < e.size(); ++i) {
    if (out[i - from].is_null()) out[i - from] = parse_term(e[i], sort.value_or(Sort::Real));
    if (!sort) sort = out[i - from].sort();
    if (out[i - from].sort() != *sort) fail(e[i], "arguments of '" + e.head() + "' have different sorts");
  }
  return out;
}

Term Smt2Context::parse_term(const Sexpr & e, std::optional<Sort> expected)
{
  switch (e.type) {
    case Sexpr::Type::Numeral:
    case Sexpr::Type::Decimal: return mk_real(literal_value(e));
    case Sexpr::Type::Symbol: return parse_symbol(e, expected);
    case Sexpr::Type::Keyword:
    case Sexpr::Type::String: fail(e, "unexpected '" + e.to_string() + "' in term position");
    case Sexpr::Type::List: break;
  }
  try {
    return parse_app(e, expected);
  } catch (const SortError & ex) {
    fail(e, ex.what());
  }
}

Term Smt2Context::parse_app(const Sexpr & e, std::optional<Sort> expected)
{
  if (e.list.empty()) fail(e, "empty application");
  if (!e[0].is_symbol()) fail(e, "expected an operator symbol");
  const std::string & op = e.head();
  const size_t n = e.size() - 1;
  auto need = [&](size_t lo, size_t hi) {
    if (n < lo || n > hi) fail(e, "wrong number of arguments to '" + op + "'");
  };

  if (op == "!") return parse_term(strip_annotations(e, nullptr), expected);
  if (op == "let") {
    need(2, 2);
    if (!e[1].is_list()) fail(e, "malformed let");
    std::map<std::string, Term> scope;
    for (const Sexpr & b : e[1].list) {
      if (!b.is_list() || b.size() != 2 || !b[0].is_symbol()) fail(b, "malformed let binding");
      scope[b[0].atom] = parse_term(b[1]);
    }
    scopes_.push_back(std::move(scope));
    Term body = parse_term(e[2], expected);
    scopes_.pop_back();
    return body;
  }
  if (op == "and" || op == "or") {
    auto args = parse_args(e, 1, Sort::Bool);
    return op == "and" ? mk_and(args) : mk_or(args);
  }
  if (op == "not") {
    need(1, 1);
    return mk_not(parse_args(e, 1, Sort::Bool)[0]);
  }
  if (op == "=>") {
    need(2, SIZE_MAX);
    auto args = parse_args(e, 1, Sort::Bool);
    Term r = args.back();
    for (size_t i = args.size() - 1; i-- > 0;) r = mk_implies(args[i], r);
    return r;
  }
  if (op == "xor") {
    need(2, 2);
    auto args = parse_args(e, 1, Sort::Bool);
    return mk_not(mk_iff(args[0], args[1]));
  }
  if (op == "=" || op == "distinct") {
    need(2, SIZE_MAX);
    auto args = parse_same_sort(e, 1, std::nullopt);
    TermVec conj;
    if (op == "=") {
      for (size_t i = 0; i + 1 < args.size(); ++i) conj.push_back(mk_eq(args[i], args[i + 1]));
    } else {
      for (size_t i = 0; i < args.size(); ++i) {
        for (size_t j = i + 1; j < args.size(); ++j) conj.push_back(mk_not(mk_eq(args[i], args[j])));
      }
    }
    return mk_and(conj);
  }
  if (op == "ite") {
    need(3, 3);
    Term c = parse_term(e[1], Sort::Bool);
    if (!c.is_bool()) fail(e[1], "ite condition must be Bool");
    Sexpr branches;
    branches.list = { e[0], e[2], e[3] };
    auto br = parse_same_sort(branches, 1, expected);
    return mk_ite(c, br[0], br[1]);
  }
  if (op == "<=" || op == "<" || op == ">=" || op == ">") {
    need(2, SIZE_MAX);
    auto args = parse_args(e, 1, Sort::Real);
    TermVec conj;
    for (size_t i = 0; i + 1 < args.size(); ++i) {
      const Term & a = args[i];
      const Term & b = args[i + 1];
      if (op == "<=") conj.push_back(mk_le(a, b));
      if (op == "<") conj.push_back(mk_lt(a, b));
      if (op == ">=") conj.push_back(mk_ge(a, b));
      if (op == ">") conj.push_back(mk_gt(a, b));
    }
    return mk_and(conj);
  }
  if (op == "+") {
    need(1, SIZE_MAX);
    return mk_add(parse_args(e, 1, Sort::Real));
  }
  if (op == "-") {
    need(1, SIZE_MAX);
    auto args = parse_args(e, 1, Sort::Real);
    if (args.size() == 1) return mk_neg(args[0]);
    TermVec sum{ args[0] };
    for (size_t i = 1; i < args.size(); ++i) sum.push_back(mk_neg(args[i]));
    return mk_add(sum);
  }
  if (op == "*") {
    need(1, SIZE_MAX);
    auto args = parse_args(e, 1, Sort::Real);
    Term r = args[0];
    for (size_t i = 1; i < args.size(); ++i) r = mk_mul(r, args[i]);
    return r;
  }
  if (op == "/") {
    need(2, SIZE_MAX);
    auto args = parse_args(e, 1, Sort::Real);
    Term r = args[0];
    for (size_t i = 1; i < args.size(); ++i) {
      if (args[i].kind() != Kind::RealConst) fail(e[i + 1], "division by a non-constant term is not supported");
      if (args[i].value().is_zero()) fail(e[i + 1], "division by zero");
      r = mk_scale(args[i].value().inverse(), r);
    }
    return r;
  }
  if (op == kFmulName) {
    if (!fmul_declared_ && !opts_.implicit_fmul) fail(e, "fmul used without declaration");
    need(2, 2);
    auto args = parse_args(e, 1, Sort::Real);
    return mk_fmul(args[0], args[1]);
  }
  if (op == "to_real" || op == "to_int" || op == "div" || op == "mod" || op == "abs") {
    fail(e, "integer arithmetic ('" + op + "') is not supported");
  }
  if (auto m = macros_.find(op); m != macros_.end()) {
    const Macro & mac = m->second;
    if (mac.params.size() != n) fail(e, "wrong number of arguments to '" + op + "'");
    std::map<std::string, Term> scope;
    for (size_t i = 0; i < n; ++i) {
      Term a = parse_term(e[i + 1], mac.params[i].second);
      if (a.sort() != mac.params[i].second) fail(e[i + 1], "argument sort mismatch in '" + op + "'");
      scope[mac.params[i].first] = a;
    }
    // macro bodies see only their parameters and global symbols
    auto saved = std::move(scopes_);
    scopes_.clear();
    scopes_.push_back(std::move(scope));
    Term body;
    try {
      body = parse_term(mac.body, mac.result);
    } catch (...) {
      scopes_ = std::move(saved);
      throw;
    }
    scopes_ = std::move(saved);
    return body;
  }
  fail(e, "unknown function '" + op + "'");
}

Term parse_smt2_formula(std::string_view text)
{
  Smt2Context ctx(Smt2Context::Options{ .allow_undeclared = true, .decode_frames = true, .implicit_fmul = true });
  std::vector<Sexpr> top = parse_sexprs(text);
  if (top.empty()) throw ParseError("empty input", 0, 0);

  bool script = false;
  for (const Sexpr & s : top) {
    const std::string & h = s.head();
    if (h == "assert" || h == "declare-fun" || h == "declare-const" || h == "define-fun" || h == "set-logic"
        || h == "set-info" || h == "set-option" || h == "check-sat") {
      script = true;
    }
  }
  if (!script) {
    if (top.size() != 1) throw ParseError("expected a single term", top[1].line, top[1].column);
    Term f = ctx.parse_term(top[0], Sort::Bool);
    if (!f.is_bool()) fail(top[0], "formula must be Bool");
    return f;
  }

  TermVec asserts;
  for (const Sexpr & s : top) {
    const std::string & h = s.head();
    if (h == "declare-fun" || h == "declare-const") {
      ctx.declare(s);
    } else if (h == "define-fun") {
      ctx.define(s);
    } else if (h == "assert") {
      if (s.size() != 2) fail(s, "malformed assert");
      Term f = ctx.parse_term(s[1], Sort::Bool);
      if (!f.is_bool()) fail(s[1], "asserted term must be Bool");
      asserts.push_back(f);
    } else if (h == "set-logic" || h == "set-info" || h == "set-option" || h == "check-sat" || h == "exit"
               || h == "get-model" || h == "get-info") {
      continue;
    } else {
      fail(s, "unsupported command '" + (h.empty() ? s.to_string() : h) + "'");
    }
  }
  return mk_and(asserts);
}

}  // namespace nracegar
