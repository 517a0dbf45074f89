#include "nracegar/vmt.h"

#include <optional>
#include <set>
#include <sstream>

#include "nracegar/exceptions.h"
#include "nracegar/smt2.h"
#include "nracegar/term_ops.h"

namespace nracegar {

const Term & TransitionSystem::property(std::optional<int> index) const
{
  if (properties.empty()) throw SortError("transition system has no property");
  if (!index) return properties.begin()->second;
  auto it = properties.find(*index);
  if (it == properties.end()) throw SortError("no property with index " + std::to_string(*index));
  return it->second;
}

Term next_var(const Term & v) { return mk_var(v.name(), v.sort(), Frame::next()); }

void validate(const TransitionSystem & ts)
{
  std::set<Term, TermLess> cur(ts.state_vars.begin(), ts.state_vars.end());
  auto check = [&](const Term & f, bool allow_next, const char * what) {
    if (!f.is_bool()) throw SortError(std::string(what) + " is not Bool");
    for (const Term & v : vars_of(f)) {
      bool ok = v.frame().is_current() ? cur.count(v) > 0
                                       : (allow_next && v.frame().is_next()
                                          && cur.count(mk_var(v.name(), v.sort())) > 0);
      if (!ok) throw SortError(std::string(what) + " mentions non-state variable " + to_string(v));
    }
  };
  check(ts.init, false, "initial formula");
  check(ts.trans, true, "transition relation");
  for (const auto & [i, p] : ts.properties) check(p, false, "property");
}

namespace {

[[noreturn]] void fail(const Sexpr & e, const std::string & msg) { throw ParseError(msg, e.line, e.column); }

struct Annotated
{
  std::string key;
  Sexpr value;
  Sexpr body;
  const Sexpr * cmd;
};

}  // namespace

TransitionSystem parse_vmt(std::string_view text)
{
  std::vector<Sexpr> top = parse_sexprs(text);
  Smt2Context ctx(Smt2Context::Options{ .allow_undeclared = false, .decode_frames = false, .implicit_fmul = false });

  std::vector<std::pair<std::string, Sort>> declared;
  std::map<std::string, Sort> declared_sort;
  std::vector<Annotated> annotated;

  for (const Sexpr & s : top) {
    const std::string & h = s.head();
    if (h == "declare-fun" || h == "declare-const") {
      Term v = ctx.declare(s);
      if (v.is_null()) continue;  // fmul declaration
      if (declared_sort.count(v.name())) fail(s, "duplicate declaration of '" + v.name() + "'");
      declared.emplace_back(v.name(), v.sort());
      declared_sort[v.name()] = v.sort();
    } else if (h == "define-fun") {
      ctx.define(s);
      std::vector<std::pair<std::string, Sexpr>> attrs;
      const Sexpr & body = Smt2Context::strip_annotations(s[4], &attrs);
      for (auto & [k, v] : attrs) {
        if (k == ":live-property") fail(s, "liveness properties (:live-property) are not supported");
        if (k == ":next" || k == ":init" || k == ":trans" || k == ":invar-property") {
          if (!s[2].list.empty()) fail(s, "annotated definitions must not take parameters");
          annotated.push_back({ k, v, body, &s });
        }
      }
    } else if (h == "assert") {
      if (s.size() != 2 || !s[1].is_symbol("true")) fail(s, "top-level assertions are not supported in VMT input");
    } else if (h == "set-logic" || h == "set-info" || h == "set-option" || h == "check-sat" || h == "exit") {
      continue;
    } else {
      fail(s, "unsupported command '" + (h.empty() ? s.to_string() : h) + "'");
    }
  }

  // pair current/next symbols
  std::map<std::string, std::string> next_of;
  std::map<std::string, std::string> cur_of;
  for (const Annotated & a : annotated) {
    if (a.key != ":next") continue;
    if (!a.body.is_symbol() || !declared_sort.count(a.body.atom)) {
      fail(a.body, ":next must annotate a declared variable");
    }
    if (!a.value.is_symbol() || !declared_sort.count(a.value.atom)) {
      fail(*a.cmd, ":next value must be a declared variable");
    }
    const std::string & c = a.body.atom;
    const std::string & n = a.value.atom;
    if (declared_sort[c] != declared_sort[n]) fail(*a.cmd, "'" + c + "' and '" + n + "' have different sorts");
    if (next_of.count(c) || cur_of.count(c) || next_of.count(n) || cur_of.count(n) || c == n) {
      fail(*a.cmd, "variable paired more than once in :next annotations");
    }
    next_of[c] = n;
    cur_of[n] = c;
  }

  TransitionSystem ts;
  for (const auto & [name, sort] : declared) {
    if (next_of.count(name)) {
      Term v = mk_var(name, sort);
      ts.state_vars.push_back(v);
      ctx.bind(name, v);
      ctx.bind(next_of[name], next_var(v));
    } else if (!cur_of.count(name)) {
      throw ParseError("declared symbol '" + name + "' is not a state variable (no :next pairing)", 0, 0);
    }
  }

  TermVec init;
  TermVec trans;
  bool has_init = false;
  bool has_trans = false;
  for (const Annotated & a : annotated) {
    if (a.key == ":next") continue;
    Term f = ctx.parse_term(a.body, Sort::Bool);
    if (!f.is_bool()) fail(a.body, "annotated formula must be Bool");
    if (a.key == ":init") {
      has_init = true;
      init.push_back(f);
    } else if (a.key == ":trans") {
      has_trans = true;
      trans.push_back(f);
    } else {
      int idx = 0;
      try {
        if (a.value.type != Sexpr::Type::Numeral) throw std::invalid_argument("");
        idx = std::stoi(a.value.atom);
      } catch (const std::exception &) {
        fail(*a.cmd, ":invar-property expects a numeral index");
      }
      if (!ts.properties.emplace(idx, f).second) {
        fail(*a.cmd, "property index " + std::to_string(idx) + " used twice");
      }
    }
  }
  if (!has_trans) throw ParseError("no transition relation (missing :trans annotation)", 0, 0);
  if (!has_init) throw ParseError("no initial states (missing :init annotation)", 0, 0);
  if (ts.properties.empty()) throw ParseError("no property (missing :invar-property annotation)", 0, 0);
  ts.init = mk_and(init);
  ts.trans = mk_and(trans);
  try {
    validate(ts);
  } catch (const SortError & e) {
    throw ParseError(e.what(), 0, 0);
  }
  return ts;
}

std::string serialize_vmt(const TransitionSystem & ts)
{
  std::ostringstream os;
  TermVec all{ ts.init, ts.trans };
  for (const auto & [i, p] : ts.properties) all.push_back(p);
  bool uses_fmul = false;
  for (const Term & f : all) uses_fmul = uses_fmul || contains_kind(f, Kind::Fmul);
  if (uses_fmul) os << "(declare-fun " << kFmulName << " (Real Real) Real)\n";
  for (size_t i = 0; i < ts.state_vars.size(); ++i) {
    const Term & v = ts.state_vars[i];
    const char * sort = to_string(v.sort());
    os << "(declare-fun " << smt2_symbol(v) << " () " << sort << ")\n";
    os << "(declare-fun " << smt2_symbol(next_var(v)) << " () " << sort << ")\n";
    os << "(define-fun .sv" << i << " () " << sort << " (! " << smt2_symbol(v) << " :next "
       << smt2_symbol(next_var(v)) << "))\n";
  }
  os << "(define-fun .init () Bool (! " << to_smt2(ts.init) << " :init true))\n";
  os << "(define-fun .trans () Bool (! " << to_smt2(ts.trans) << " :trans true))\n";
  for (const auto & [i, p] : ts.properties) {
    os << "(define-fun .prop" << i << " () Bool (! " << to_smt2(p) << " :invar-property " << i << "))\n";
  }
  return os.str();
}

}  // namespace nracegar
