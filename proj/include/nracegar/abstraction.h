/*! \file abstraction.h
** \brief LRA+EUF over-approximation of non-linear formulas and systems.
**
** Every product of two non-constant terms becomes an application of the
** uninterpreted function fmul. Static axioms recover the sign rules of
** multiplication; concretize maps fmul back to products.
**/

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nracegar/term.h"
#include "nracegar/vmt.h"

namespace nracegar {

enum class AxiomKind
{
  Tangent,
  Monotonicity,
  Static
};

const char * to_string(AxiomKind k);

struct Axiom
{
  Term formula;
  AxiomKind kind = AxiomKind::Static;
  std::optional<std::pair<Rat, Rat>> point;  // tangent point

  friend bool operator==(const Axiom & a, const Axiom & b) { return a.formula == b.formula; }
};

struct AbstractionOptions
{
  bool sign_axioms = true;
  bool zero_axioms = true;
};

struct AbstractionResult
{
  Term abstract_formula;
  TermVec fmuls;  // includes the applications introduced by sign axioms
  std::vector<Axiom> static_axioms;
};

/** mul -> fmul, everything else untouched. */
Term abstract(const Term & f);
/** fmul -> mul. */
Term concretize(const Term & f);

AbstractionResult abstract_formula(const Term & phi, const AbstractionOptions & opts = {});

/** Sign and zero axioms for each application. New applications created by
 *  the sign axioms are appended to `fmuls`; they get no axioms of their own.
 */
std::vector<Axiom> static_axioms(TermVec & fmuls, const AbstractionOptions & opts = {});

struct AbstractSystem
{
  TransitionSystem ts;  // I^, T^ and P^ (at the property's original index)
  Term property;        // P^
  int property_index = 0;
};

/** Abstracts I, T and the selected property. Static axioms over the
 *  current-frame versions of all single-frame applications go into I^;
 *  T^ gets them over both frames, plus axioms for mixed-frame applications.
 */
AbstractSystem abstract_system(const TransitionSystem & ts, std::optional<int> property_index = std::nullopt,
                               const AbstractionOptions & opts = {});

}  // namespace nracegar
