/*! \file refinement.h
** \brief Tangent-plane and monotonicity lemmas for spurious fmul values.
**/

#pragma once

#include <map>
#include <ostream>
#include <utility>
#include <vector>

#include "nracegar/abstraction.h"
#include "nracegar/term.h"
#include "nracegar/term_ops.h"

namespace nracegar {

using Point = std::pair<Rat, Rat>;

/** Per-application box <l_x, u_x, l_y, u_y> inside which both tangent
 *  bounds are already available.
 */
struct Frontier
{
  Rat lx, ux, ly, uy;

  friend bool operator==(const Frontier &, const Frontier &) = default;
};

using FrontierStore = std::map<Term, Frontier, TermLess>;

struct RefineOptions
{
  bool all_tangent_points = false;
  mpz_class rounding_threshold = 1000000;
};

/** b*x + a*y - a*b */
Term tangent_plane(const Rat & a, const Rat & b, const Term & x, const Term & y);

/** Both multiplication lines through (a, b) plus the four-region bounds. */
Axiom tangent_lemma(const Term & m, const Rat & a, const Rat & b);

/** Tangent points for a spurious application m. */
std::vector<Point> select_points(const Term & m, const Model & mu, const RefineOptions & opts = {});

/** Extra points and the updated frontier after instantiating at p. */
std::pair<std::vector<Point>, Frontier> frontier_update(const Frontier & fr, const Point & p);

/** Triggered monotonicity lemmas over every pair of applications. */
std::vector<Axiom> monotonicity_lemmas(const TermVec & fmuls, const Model & mu);

/** Applications whose value differs from the product of their arguments. */
TermVec spurious_fmuls(const TermVec & fmuls, const Model & mu);

/** Applications with two non-constant arguments; only these are refined. */
bool refinable(const Term & m);

/** Lemmas blocking mu. Throws InternalError when mu is not spurious. */
std::vector<Axiom> refine(const Model & mu, const TermVec & fmuls, FrontierStore & frontiers,
                          const RefineOptions & opts = {});

/** Extends mu with values for the fmul applications of `terms` that it
 *  lacks, the way an EUF solver would: an application takes the value of
 *  a known application whose arguments evaluate to the same values, and
 *  otherwise the product of its argument values.
 */
Model extend_by_congruence(const Model & mu, const TermVec & terms);

/** `(axiom :kind tangent :point (a b) <formula>)` */
void write_axiom(std::ostream & os, const Axiom & a);

}  // namespace nracegar
