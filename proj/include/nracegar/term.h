/*! \file term.h
** \brief Immutable, structurally compared terms over reals and booleans.
**
** Terms are built only through the mk_* functions, which keep them in a
** canonical form: constant subterms are folded, n-ary sums are flattened
** with sorted children, constant factors are pulled into `scale` nodes and
** the arguments of a non-linear product (`mul` or `fmul`) are ordered by
** the total term order below.
**/

#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "nracegar/rational.h"

namespace nracegar {

enum class Sort : uint8_t
{
  Real,
  Bool
};

enum class Kind : uint8_t
{
  RealConst,
  BoolConst,
  Var,
  Add,
  Scale,
  Mul,
  Fmul,
  Ite,
  Le,
  Lt,
  Eq,
  Not,
  And,
  Or,
  Implies,
  Iff
};

const char * to_string(Kind k);
const char * to_string(Sort s);

/** The time frame a variable lives in: untimed current (x), untimed
 *  next (x'), or a concrete unrolling index (x^i).
 */
class Frame
{
 public:
  static constexpr Frame current() { return Frame(kCurrent); }
  static constexpr Frame next() { return Frame(kNext); }
  static constexpr Frame at(int i) { return Frame(i); }

  constexpr bool is_current() const { return v_ == kCurrent; }
  constexpr bool is_next() const { return v_ == kNext; }
  constexpr bool is_timed() const { return v_ >= 0; }
  constexpr int index() const { return v_; }

  friend constexpr bool operator==(Frame a, Frame b) { return a.v_ == b.v_; }
  /** current < next < timed 0 < timed 1 < ... */
  friend constexpr std::strong_ordering operator<=>(Frame a, Frame b) { return a.key() <=> b.key(); }

 private:
  static constexpr int kCurrent = -2;
  static constexpr int kNext = -1;
  constexpr explicit Frame(int v) : v_(v) {}
  constexpr int key() const { return v_; }
  int v_;
};

struct Node;

class Term
{
 public:
  Term() = default;

  bool is_null() const { return !node_; }
  explicit operator bool() const { return static_cast<bool>(node_); }

  Kind kind() const;
  Sort sort() const;
  bool is_real() const { return sort() == Sort::Real; }
  bool is_bool() const { return sort() == Sort::Bool; }
  bool is_const() const { return kind() == Kind::RealConst || kind() == Kind::BoolConst; }
  bool is_var() const { return kind() == Kind::Var; }

  /** Value of a real constant, or the coefficient of a scale node. */
  const Rat & value() const;
  bool bool_value() const;

  const std::string & name() const;
  Frame frame() const;

  const std::vector<Term> & children() const;
  const Term & operator[](size_t i) const { return children()[i]; }
  size_t num_children() const { return children().size(); }

  size_t hash() const;
  /** Address of the shared node; stable identity for memo tables. */
  const Node * id() const { return node_.get(); }

  friend bool operator==(const Term & a, const Term & b);

 private:
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;

  friend Term make_term(Node && n);
};

/** Deterministic total order on terms. Variables compare by name first,
 *  then by frame, so the order is invariant under uniform retiming.
 */
int compare(const Term & a, const Term & b);

struct TermLess
{
  bool operator()(const Term & a, const Term & b) const { return compare(a, b) < 0; }
};

using TermVec = std::vector<Term>;

// constants and variables
Term mk_real(const Rat & v);
Term mk_bool(bool v);
Term mk_true();
Term mk_false();
Term mk_var(const std::string & name, Sort sort, Frame frame = Frame::current());

// real arithmetic
Term mk_add(const TermVec & args);
Term mk_add(const Term & a, const Term & b);
Term mk_sub(const Term & a, const Term & b);
Term mk_neg(const Term & a);
Term mk_scale(const Rat & c, const Term & a);
/** Concrete product. Constant factors become `scale`. */
Term mk_mul(const Term & a, const Term & b);
/** Uninterpreted multiplication. Arguments are ordered when both are
 *  non-constant; with a constant argument the given positions are kept,
 *  since they carry the multiplication-line congruence.
 */
Term mk_fmul(const Term & a, const Term & b);
Term mk_ite(const Term & c, const Term & a, const Term & b);
/** ite(t < 0, -t, t) */
Term mk_abs(const Term & t);

// atoms
Term mk_le(const Term & a, const Term & b);
Term mk_lt(const Term & a, const Term & b);
Term mk_ge(const Term & a, const Term & b);
Term mk_gt(const Term & a, const Term & b);
Term mk_eq(const Term & a, const Term & b);

// boolean structure
Term mk_not(const Term & a);
Term mk_and(const TermVec & args);
Term mk_and(const Term & a, const Term & b);
Term mk_or(const TermVec & args);
Term mk_or(const Term & a, const Term & b);
Term mk_implies(const Term & a, const Term & b);
Term mk_iff(const Term & a, const Term & b);

/** Rebuilds a node of the same kind over new children (canonicalizing). */
Term rebuild(const Term & t, const TermVec & children);

bool is_atom(const Term & t);

/** Human-readable infix-ish rendering for diagnostics (not SMT-LIB). */
std::string to_string(const Term & t);
std::ostream & operator<<(std::ostream & os, const Term & t);

}  // namespace nracegar

template <>
struct std::hash<nracegar::Term>
{
  size_t operator()(const nracegar::Term & t) const { return t.hash(); }
};
