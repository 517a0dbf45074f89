#include "nracegar/term.h"

#include <algorithm>
#include <cassert>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "nracegar/exceptions.h"

namespace nracegar {

struct Node
{
  Kind kind;
  Sort sort;
  Frame frame = Frame::current();
  bool bval = false;
  Rat value;
  std::string name;
  TermVec kids;
  size_t hash = 0;
};

Term make_term(Node && n);

namespace {

const TermVec kNoChildren;

size_t mix(size_t h, size_t v) { return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)); }

size_t compute_hash(const Node & n)
{
  size_t h = std::hash<int>()(static_cast<int>(n.kind));
  switch (n.kind) {
    case Kind::RealConst: return mix(h, n.value.hash());
    case Kind::BoolConst: return mix(h, n.bval ? 1 : 2);
    case Kind::Var:
      h = mix(h, std::hash<std::string>()(n.name));
      h = mix(h, std::hash<int>()(n.frame.index()));
      return mix(h, static_cast<size_t>(n.sort));
    case Kind::Scale: h = mix(h, n.value.hash()); break;
    default: break;
  }
  for (const Term & k : n.kids) h = mix(h, k.hash());
  return h;
}

void require_real(const Term & t, const char * ctx)
{
  if (t.is_null() || !t.is_real()) {
    throw SortError(std::string(ctx) + ": expected a Real term");
  }
}

void require_bool(const Term & t, const char * ctx)
{
  if (t.is_null() || !t.is_bool()) {
    throw SortError(std::string(ctx) + ": expected a Bool term");
  }
}

Term make_node(Kind k, Sort s, TermVec kids, const Rat & value = Rat())
{
  Node n;
  n.kind = k;
  n.sort = s;
  n.kids = std::move(kids);
  n.value = value;
  return make_term(std::move(n));
}

}  // namespace

Term make_term(Node && n)
{
  n.hash = compute_hash(n);
  return Term(std::make_shared<const Node>(std::move(n)));
}

const char * to_string(Kind k)
{
  switch (k) {
    case Kind::RealConst: return "real-const";
    case Kind::BoolConst: return "bool-const";
    case Kind::Var: return "var";
    case Kind::Add: return "add";
    case Kind::Scale: return "scale";
    case Kind::Mul: return "mul";
    case Kind::Fmul: return "fmul";
    case Kind::Ite: return "ite";
    case Kind::Le: return "le";
    case Kind::Lt: return "lt";
    case Kind::Eq: return "eq";
    case Kind::Not: return "not";
    case Kind::And: return "and";
    case Kind::Or: return "or";
    case Kind::Implies: return "implies";
    case Kind::Iff: return "iff";
  }
  return "?";
}

const char * to_string(Sort s) { return s == Sort::Real ? "Real" : "Bool"; }

Kind Term::kind() const { return node_->kind; }
Sort Term::sort() const { return node_->sort; }
const Rat & Term::value() const { return node_->value; }
bool Term::bool_value() const { return node_->bval; }
const std::string & Term::name() const { return node_->name; }
Frame Term::frame() const { return node_->frame; }
const TermVec & Term::children() const { return node_ ? node_->kids : kNoChildren; }
size_t Term::hash() const { return node_ ? node_->hash : 0; }

bool operator==(const Term & a, const Term & b)
{
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.node_->hash != b.node_->hash) return false;
  return compare(a, b) == 0;
}

int compare(const Term & a, const Term & b)
{
  if (a.id() == b.id()) return 0;
  if (a.is_null()) return -1;
  if (b.is_null()) return 1;
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  switch (a.kind()) {
    case Kind::RealConst: return a.value() < b.value() ? -1 : (a.value() == b.value() ? 0 : 1);
    case Kind::BoolConst: return static_cast<int>(a.bool_value()) - static_cast<int>(b.bool_value());
    case Kind::Var: {
      if (int c = a.name().compare(b.name()); c != 0) return c < 0 ? -1 : 1;
      if (a.frame() != b.frame()) return a.frame() < b.frame() ? -1 : 1;
      if (a.sort() != b.sort()) return a.sort() < b.sort() ? -1 : 1;
      return 0;
    }
    case Kind::Scale:
      if (a.value() != b.value()) return a.value() < b.value() ? -1 : 1;
      break;
    default: break;
  }
  const TermVec & ka = a.children();
  const TermVec & kb = b.children();
  size_t n = std::min(ka.size(), kb.size());
  for (size_t i = 0; i < n; ++i) {
    if (int c = compare(ka[i], kb[i]); c != 0) return c;
  }
  if (ka.size() != kb.size()) return ka.size() < kb.size() ? -1 : 1;
  return 0;
}

Term mk_real(const Rat & v)
{
  Node n;
  n.kind = Kind::RealConst;
  n.sort = Sort::Real;
  n.value = v;
  return make_term(std::move(n));
}

Term mk_bool(bool v)
{
  Node n;
  n.kind = Kind::BoolConst;
  n.sort = Sort::Bool;
  n.bval = v;
  return make_term(std::move(n));
}

Term mk_true() { return mk_bool(true); }
Term mk_false() { return mk_bool(false); }

Term mk_var(const std::string & name, Sort sort, Frame frame)
{
  if (name.empty()) throw SortError("variable with empty name");
  Node n;
  n.kind = Kind::Var;
  n.sort = sort;
  n.name = name;
  n.frame = frame;
  return make_term(std::move(n));
}

Term mk_add(const TermVec & args)
{
  TermVec flat;
  Rat constant(0);
  auto push = [&](const Term & t) {
    require_real(t, "add");
    if (t.kind() == Kind::Add) {
      for (const Term & k : t.children()) {
        if (k.kind() == Kind::RealConst) {
          constant += k.value();
        } else {
          flat.push_back(k);
        }
      }
    } else if (t.kind() == Kind::RealConst) {
      constant += t.value();
    } else {
      flat.push_back(t);
    }
  };
  for (const Term & a : args) push(a);
  if (flat.empty()) return mk_real(constant);
  if (!constant.is_zero()) flat.push_back(mk_real(constant));
  if (flat.size() == 1) return flat[0];
  std::sort(flat.begin(), flat.end(), TermLess());
  return make_node(Kind::Add, Sort::Real, std::move(flat));
}

Term mk_add(const Term & a, const Term & b) { return mk_add(TermVec{ a, b }); }

Term mk_sub(const Term & a, const Term & b) { return mk_add(a, mk_neg(b)); }

Term mk_neg(const Term & a) { return mk_scale(Rat(-1), a); }

Term mk_scale(const Rat & c, const Term & a)
{
  require_real(a, "scale");
  if (a.kind() == Kind::RealConst) return mk_real(c * a.value());
  if (c.is_zero()) return mk_real(0);
  if (c == Rat(1)) return a;
  if (a.kind() == Kind::Scale) return mk_scale(c * a.value(), a[0]);
  return make_node(Kind::Scale, Sort::Real, { a }, c);
}

Term mk_mul(const Term & a, const Term & b)
{
  require_real(a, "mul");
  require_real(b, "mul");
  if (a.kind() == Kind::RealConst) return mk_scale(a.value(), b);
  if (b.kind() == Kind::RealConst) return mk_scale(b.value(), a);
  if (a.kind() == Kind::Scale) return mk_scale(a.value(), mk_mul(a[0], b));
  if (b.kind() == Kind::Scale) return mk_scale(b.value(), mk_mul(a, b[0]));
  if (compare(b, a) < 0) return make_node(Kind::Mul, Sort::Real, { b, a });
  return make_node(Kind::Mul, Sort::Real, { a, b });
}

Term mk_fmul(const Term & a, const Term & b)
{
  require_real(a, "fmul");
  require_real(b, "fmul");
  if (!a.is_const() && !b.is_const() && compare(b, a) < 0) {
    return make_node(Kind::Fmul, Sort::Real, { b, a });
  }
  return make_node(Kind::Fmul, Sort::Real, { a, b });
}

Term mk_ite(const Term & c, const Term & a, const Term & b)
{
  require_bool(c, "ite condition");
  if (a.is_null() || b.is_null() || a.sort() != b.sort()) {
    throw SortError("ite: branches must have the same sort");
  }
  if (c.kind() == Kind::BoolConst) return c.bool_value() ? a : b;
  if (a == b) return a;
  if (a.is_bool()) {
    return mk_or(mk_and(c, a), mk_and(mk_not(c), b));
  }
  return make_node(Kind::Ite, Sort::Real, { c, a, b });
}

Term mk_abs(const Term & t) { return mk_ite(mk_lt(t, mk_real(0)), mk_neg(t), t); }

Term mk_le(const Term & a, const Term & b)
{
  require_real(a, "<=");
  require_real(b, "<=");
  if (a.kind() == Kind::RealConst && b.kind() == Kind::RealConst) return mk_bool(a.value() <= b.value());
  if (a == b) return mk_true();
  return make_node(Kind::Le, Sort::Bool, { a, b });
}

Term mk_lt(const Term & a, const Term & b)
{
  require_real(a, "<");
  require_real(b, "<");
  if (a.kind() == Kind::RealConst && b.kind() == Kind::RealConst) return mk_bool(a.value() < b.value());
  if (a == b) return mk_false();
  return make_node(Kind::Lt, Sort::Bool, { a, b });
}

Term mk_ge(const Term & a, const Term & b) { return mk_le(b, a); }
Term mk_gt(const Term & a, const Term & b) { return mk_lt(b, a); }

Term mk_eq(const Term & a, const Term & b)
{
  if (a.is_null() || b.is_null() || a.sort() != b.sort()) {
    throw SortError("=: arguments must have the same sort");
  }
  if (a.is_bool()) return mk_iff(a, b);
  if (a.kind() == Kind::RealConst && b.kind() == Kind::RealConst) return mk_bool(a.value() == b.value());
  if (a == b) return mk_true();
  return make_node(Kind::Eq, Sort::Bool, { a, b });
}

Term mk_not(const Term & a)
{
  require_bool(a, "not");
  if (a.kind() == Kind::BoolConst) return mk_bool(!a.bool_value());
  if (a.kind() == Kind::Not) return a[0];
  return make_node(Kind::Not, Sort::Bool, { a });
}

namespace {

Term mk_junction(Kind k, const TermVec & args)
{
  const bool unit = (k == Kind::And);  // neutral element
  TermVec flat;
  std::unordered_set<Term> seen;
  std::function<bool(const Term &)> push = [&](const Term & t) -> bool {
    require_bool(t, k == Kind::And ? "and" : "or");
    if (t.kind() == Kind::BoolConst) {
      return t.bool_value() == unit;  // false means absorbing element hit
    }
    if (t.kind() == k) {
      for (const Term & c : t.children()) {
        if (!push(c)) return false;
      }
      return true;
    }
    if (seen.insert(t).second) flat.push_back(t);
    return true;
  };
  for (const Term & a : args) {
    if (!push(a)) return mk_bool(!unit);
  }
  if (flat.empty()) return mk_bool(unit);
  if (flat.size() == 1) return flat[0];
  return make_node(k, Sort::Bool, std::move(flat));
}

}  // namespace

Term mk_and(const TermVec & args) { return mk_junction(Kind::And, args); }
Term mk_and(const Term & a, const Term & b) { return mk_and(TermVec{ a, b }); }
Term mk_or(const TermVec & args) { return mk_junction(Kind::Or, args); }
Term mk_or(const Term & a, const Term & b) { return mk_or(TermVec{ a, b }); }

Term mk_implies(const Term & a, const Term & b)
{
  require_bool(a, "=>");
  require_bool(b, "=>");
  if (a.kind() == Kind::BoolConst) return a.bool_value() ? b : mk_true();
  if (b.kind() == Kind::BoolConst && b.bool_value()) return mk_true();
  if (b.kind() == Kind::BoolConst) return mk_not(a);
  return make_node(Kind::Implies, Sort::Bool, { a, b });
}

Term mk_iff(const Term & a, const Term & b)
{
  require_bool(a, "iff");
  require_bool(b, "iff");
  if (a.kind() == Kind::BoolConst) return a.bool_value() ? b : mk_not(b);
  if (b.kind() == Kind::BoolConst) return b.bool_value() ? a : mk_not(a);
  if (a == b) return mk_true();
  return make_node(Kind::Iff, Sort::Bool, { a, b });
}

Term rebuild(const Term & t, const TermVec & k)
{
  switch (t.kind()) {
    case Kind::RealConst:
    case Kind::BoolConst:
    case Kind::Var: return t;
    case Kind::Add: return mk_add(k);
    case Kind::Scale: return mk_scale(t.value(), k[0]);
    case Kind::Mul: return mk_mul(k[0], k[1]);
    case Kind::Fmul: return mk_fmul(k[0], k[1]);
    case Kind::Ite: return mk_ite(k[0], k[1], k[2]);
    case Kind::Le: return mk_le(k[0], k[1]);
    case Kind::Lt: return mk_lt(k[0], k[1]);
    case Kind::Eq: return mk_eq(k[0], k[1]);
    case Kind::Not: return mk_not(k[0]);
    case Kind::And: return mk_and(k);
    case Kind::Or: return mk_or(k);
    case Kind::Implies: return mk_implies(k[0], k[1]);
    case Kind::Iff: return mk_iff(k[0], k[1]);
  }
  throw InternalError("rebuild: unknown kind");
}

bool is_atom(const Term & t)
{
  switch (t.kind()) {
    case Kind::Le:
    case Kind::Lt:
    case Kind::Eq: return true;
    case Kind::Var: return t.is_bool();
    default: return false;
  }
}

namespace {

void render(std::ostream & os, const Term & t)
{
  auto list = [&](const char * sep) {
    os << "(";
    for (size_t i = 0; i < t.num_children(); ++i) {
      if (i) os << sep;
      render(os, t[i]);
    }
    os << ")";
  };
  switch (t.kind()) {
    case Kind::RealConst: os << t.value(); break;
    case Kind::BoolConst: os << (t.bool_value() ? "true" : "false"); break;
    case Kind::Var:
      os << t.name();
      if (t.frame().is_next()) os << "'";
      if (t.frame().is_timed()) os << "@" << t.frame().index();
      break;
    case Kind::Add: list(" + "); break;
    case Kind::Scale:
      os << t.value() << "*";
      render(os, t[0]);
      break;
    case Kind::Mul: list(" * "); break;
    case Kind::Fmul:
      os << "fmul";
      list(", ");
      break;
    case Kind::Ite:
      os << "ite";
      list(", ");
      break;
    case Kind::Le: list(" <= "); break;
    case Kind::Lt: list(" < "); break;
    case Kind::Eq: list(" = "); break;
    case Kind::Not:
      os << "!";
      render(os, t[0]);
      break;
    case Kind::And: list(" & "); break;
    case Kind::Or: list(" | "); break;
    case Kind::Implies: list(" -> "); break;
    case Kind::Iff: list(" <-> "); break;
  }
}

}  // namespace

std::string to_string(const Term & t)
{
  std::ostringstream os;
  if (t.is_null()) return "<null>";
  render(os, t);
  return os.str();
}

std::ostream & operator<<(std::ostream & os, const Term & t) { return os << to_string(t); }

}  // namespace nracegar
