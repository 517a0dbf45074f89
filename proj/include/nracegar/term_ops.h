/*! \file term_ops.h
** \brief Models, exact evaluation, substitution and (un)timing of terms.
**/

#pragma once

#include <functional>
#include <map>
#include <optional>
#include <variant>

#include "nracegar/term.h"

namespace nracegar {

/** An exact assignment. Real and Bool variables live in separate maps;
 *  fmul applications are looked up, never multiplied out.
 */
struct Model
{
  std::map<Term, Rat, TermLess> var_values;
  std::map<Term, bool, TermLess> bool_values;
  std::map<Term, Rat, TermLess> fmul_values;

  void set(const Term & var, const Rat & v) { var_values[var] = v; }
  void set(const Term & var, bool v) { bool_values[var] = v; }
  void set_fmul(const Term & app, const Rat & v) { fmul_values[app] = v; }
  bool empty() const { return var_values.empty() && bool_values.empty() && fmul_values.empty(); }
};

using Value = std::variant<Rat, bool>;

/** Exact evaluation. Throws UnassignedSymbolError naming the first
 *  variable or fmul application without a value.
 */
Value evaluate(const Term & t, const Model & m);
Rat evaluate_real(const Term & t, const Model & m);
bool evaluate_bool(const Term & t, const Model & m);

/** Copy of m where every given fmul term is assigned the exact product of
 *  its argument values (existing fmul values are overwritten).
 */
Model with_exact_products(const Model & m, const TermVec & fmuls);

using Substitution = std::map<Term, Term, TermLess>;

/** Simultaneous, sort-preserving substitution of variables. */
Term substitute(const Term & t, const Substitution & map);

/** Generic bottom-up rewrite; `f` sees each node after its children were
 *  rewritten and returns the replacement (or a null Term to rebuild).
 */
Term transform(const Term & t, const std::function<Term(const Term & original, const Term & rebuilt)> & f);

/** Maps the frame of every variable; std::nullopt from `f` is an error. */
Term remap_frames(const Term & t, const std::function<std::optional<Frame>(Frame)> & f);

/** x -> x^i, x' -> x^(i+1). */
Term at_time(const Term & f, int i);
/** x^i -> x, x^(i+1) -> x'. Throws on any other frame. */
Term untime(const Term & f, int i);

/** Bool-sorted atoms (comparisons and Bool variables) in first-occurrence order. */
TermVec atoms_of(const Term & f);
/** Distinct fmul applications in first-occurrence (post-)order. */
TermVec fmuls_of(const Term & f);
TermVec fmuls_of(const TermVec & fs);
/** Distinct variables in first-occurrence order. */
TermVec vars_of(const Term & f);
TermVec vars_of(const TermVec & fs);
/** Sorted, distinct frames of all variables in f. */
std::vector<Frame> frames_of(const Term & f);

bool contains_kind(const Term & f, Kind k);

}  // namespace nracegar
