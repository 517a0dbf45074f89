#include "nracegar/term_ops.h"

#include <algorithm>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "nracegar/exceptions.h"

namespace nracegar {

namespace {

class Evaluator
{
 public:
  explicit Evaluator(const Model & m) : m_(m) {}

  Value eval(const Term & t)
  {
    if (auto it = cache_.find(t.id()); it != cache_.end()) return it->second;
    Value v = compute(t);
    cache_.emplace(t.id(), v);
    return v;
  }

 private:
  Rat real(const Term & t) { return std::get<Rat>(eval(t)); }
  bool boolean(const Term & t) { return std::get<bool>(eval(t)); }

  Value compute(const Term & t)
  {
    switch (t.kind()) {
      case Kind::RealConst: return t.value();
      case Kind::BoolConst: return t.bool_value();
      case Kind::Var:
        if (t.is_real()) {
          auto it = m_.var_values.find(t);
          if (it == m_.var_values.end()) throw UnassignedSymbolError(to_string(t));
          return it->second;
        } else {
          auto it = m_.bool_values.find(t);
          if (it == m_.bool_values.end()) throw UnassignedSymbolError(to_string(t));
          return it->second;
        }
      case Kind::Add: {
        Rat s(0);
        for (const Term & c : t.children()) s += real(c);
        return s;
      }
      case Kind::Scale: return t.value() * real(t[0]);
      case Kind::Mul: return real(t[0]) * real(t[1]);
      case Kind::Fmul: {
        auto it = m_.fmul_values.find(t);
        if (it == m_.fmul_values.end()) throw UnassignedSymbolError(to_string(t));
        return it->second;
      }
      case Kind::Ite: return boolean(t[0]) ? eval(t[1]) : eval(t[2]);
      case Kind::Le: return real(t[0]) <= real(t[1]);
      case Kind::Lt: return real(t[0]) < real(t[1]);
      case Kind::Eq: return real(t[0]) == real(t[1]);
      case Kind::Not: return !boolean(t[0]);
      case Kind::And:
        for (const Term & c : t.children()) {
          if (!boolean(c)) return false;
        }
        return true;
      case Kind::Or:
        for (const Term & c : t.children()) {
          if (boolean(c)) return true;
        }
        return false;
      case Kind::Implies: return !boolean(t[0]) || boolean(t[1]);
      case Kind::Iff: return boolean(t[0]) == boolean(t[1]);
    }
    throw InternalError("evaluate: unknown kind");
  }

  const Model & m_;
  std::unordered_map<const Node *, Value> cache_;
};

template <typename Visit>
void visit_dag(const Term & root, Visit && visit)
{
  std::unordered_set<const Node *> seen;
  std::vector<std::pair<Term, bool>> stack{ { root, false } };
  while (!stack.empty()) {
    auto [t, expanded] = stack.back();
    stack.pop_back();
    if (expanded) {
      visit(t);
      continue;
    }
    if (!seen.insert(t.id()).second) continue;
    stack.push_back({ t, true });
    const TermVec & kids = t.children();
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back({ *it, false });
  }
}

}  // namespace

Value evaluate(const Term & t, const Model & m) { return Evaluator(m).eval(t); }

Rat evaluate_real(const Term & t, const Model & m)
{
  if (!t.is_real()) throw SortError("evaluate_real on a Bool term");
  return std::get<Rat>(evaluate(t, m));
}

bool evaluate_bool(const Term & t, const Model & m)
{
  if (!t.is_bool()) throw SortError("evaluate_bool on a Real term");
  return std::get<bool>(evaluate(t, m));
}

Model with_exact_products(const Model & m, const TermVec & fmuls)
{
  Model out = m;
  for (const Term & f : fmuls) {
    out.fmul_values[f] = evaluate_real(f[0], out) * evaluate_real(f[1], out);
  }
  return out;
}

Term transform(const Term & t, const std::function<Term(const Term &, const Term &)> & f)
{
  std::unordered_map<const Node *, Term> done;
  visit_dag(t, [&](const Term & n) {
    TermVec kids;
    kids.reserve(n.num_children());
    bool changed = false;
    for (const Term & c : n.children()) {
      const Term & r = done.at(c.id());
      changed = changed || r.id() != c.id();
      kids.push_back(r);
    }
    Term rebuilt = changed ? rebuild(n, kids) : n;
    Term out = f(n, rebuilt);
    done.emplace(n.id(), out.is_null() ? rebuilt : out);
  });
  return done.at(t.id());
}

Term substitute(const Term & t, const Substitution & map)
{
  for (const auto & [from, to] : map) {
    if (!from.is_var()) throw SortError("substitute: only variables can be replaced, got " + to_string(from));
    if (from.sort() != to.sort()) {
      throw SortError("substitute: sort mismatch for " + to_string(from));
    }
  }
  return transform(t, [&](const Term & n, const Term & rebuilt) -> Term {
    if (!n.is_var()) return rebuilt;
    auto it = map.find(n);
    return it == map.end() ? n : it->second;
  });
}

Term remap_frames(const Term & t, const std::function<std::optional<Frame>(Frame)> & f)
{
  return transform(t, [&](const Term & n, const Term & rebuilt) -> Term {
    if (!n.is_var()) return rebuilt;
    std::optional<Frame> fr = f(n.frame());
    if (!fr) throw SortError("cannot retime variable " + to_string(n));
    return *fr == n.frame() ? n : mk_var(n.name(), n.sort(), *fr);
  });
}

Term at_time(const Term & f, int i)
{
  return remap_frames(f, [i](Frame fr) -> std::optional<Frame> {
    if (fr.is_current()) return Frame::at(i);
    if (fr.is_next()) return Frame::at(i + 1);
    return std::nullopt;
  });
}

Term untime(const Term & f, int i)
{
  return remap_frames(f, [i](Frame fr) -> std::optional<Frame> {
    if (fr == Frame::at(i)) return Frame::current();
    if (fr == Frame::at(i + 1)) return Frame::next();
    return std::nullopt;
  });
}

TermVec atoms_of(const Term & f)
{
  TermVec out;
  std::unordered_set<Term> seen;
  std::unordered_set<const Node *> visited;
  std::vector<Term> stack{ f };
  while (!stack.empty()) {
    Term t = stack.back();
    stack.pop_back();
    if (!visited.insert(t.id()).second) continue;
    if (is_atom(t)) {
      if (seen.insert(t).second) out.push_back(t);
      continue;
    }
    if (!t.is_bool()) continue;
    const TermVec & kids = t.children();
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
  }
  return out;
}

TermVec fmuls_of(const Term & f)
{
  TermVec out;
  std::unordered_set<Term> seen;
  visit_dag(f, [&](const Term & t) {
    if (t.kind() == Kind::Fmul && seen.insert(t).second) out.push_back(t);
  });
  return out;
}

TermVec fmuls_of(const TermVec & fs)
{
  TermVec out;
  std::unordered_set<Term> seen;
  for (const Term & f : fs) {
    for (const Term & m : fmuls_of(f)) {
      if (seen.insert(m).second) out.push_back(m);
    }
  }
  return out;
}

TermVec vars_of(const Term & f)
{
  TermVec out;
  std::unordered_set<Term> seen;
  visit_dag(f, [&](const Term & t) {
    if (t.is_var() && seen.insert(t).second) out.push_back(t);
  });
  return out;
}

TermVec vars_of(const TermVec & fs)
{
  TermVec out;
  std::unordered_set<Term> seen;
  for (const Term & f : fs) {
    for (const Term & v : vars_of(f)) {
      if (seen.insert(v).second) out.push_back(v);
    }
  }
  return out;
}

std::vector<Frame> frames_of(const Term & f)
{
  std::set<Frame> frames;
  for (const Term & v : vars_of(f)) frames.insert(v.frame());
  return { frames.begin(), frames.end() };
}

bool contains_kind(const Term & f, Kind k)
{
  bool found = false;
  visit_dag(f, [&](const Term & t) { found = found || t.kind() == k; });
  return found;
}

}  // namespace nracegar
