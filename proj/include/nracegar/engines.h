/*! \file engines.h
** \brief LRA+EUF model checking engines for abstract transition systems.
**
** Unrollings use timed variables: state i of a path is X^i, and the
** transition from state i to state i+1 is T[X^i, X^(i+1)].
**/

#pragma once

#include <optional>
#include <string>

#include "nracegar/solver.h"
#include "nracegar/term.h"
#include "nracegar/term_ops.h"
#include "nracegar/vmt.h"

namespace nracegar {

struct EngineOptions
{
  std::string solver_cmd = default_solver_command();
  /** Largest unrolling depth (number of transitions) explored. */
  size_t max_k = 50;
  /** Base-case depths below this are known to be unsatisfiable. */
  size_t min_depth = 0;
  std::optional<Clock::time_point> deadline;
  /** External checker command, run as `cmd <file.vmt>`. */
  std::string external_cmd;
};

struct EngineResult
{
  enum class Status
  {
    Proved,
    Cex,
    Unknown
  };
  Status status = Status::Unknown;
  size_t length = 0;  // cex: number of states
  Model model;        // cex: values of the timed variables (may be empty)
  size_t depth = 0;   // proved: induction depth
  std::string reason;
  size_t solver_checks = 0;
};

/** I[X^0] and T[X^0,X^1] ... T[X^(k-1),X^k]. */
Term unrolling(const TransitionSystem & ts, size_t k);

/** Finds the shallowest depth k <= max_k where P fails at X^k. */
EngineResult engine_bmc(const TransitionSystem & ts, const Term & prop, const EngineOptions & opts);

/** k-induction with simple-path constraints. `invariant` (current frame)
 *  must be an inductive invariant of ts; it is assumed in every frame.
 */
EngineResult engine_kind(const TransitionSystem & ts, const Term & prop, const EngineOptions & opts,
                         const Term & invariant = mk_true());

/** Candidate invariants over the current frame: atoms of the initial
 *  formula, the property and `lemmas`, their negations, the weakenings of
 *  equalities and strict inequalities, and both literals of Bool atoms.
 */
TermVec houdini_candidates(const TransitionSystem & ts, const Term & prop, const TermVec & lemmas);

/** Largest subset of `candidates` that holds initially and is inductive
 *  relative to itself. std::nullopt when a solver call gives up.
 */
std::optional<TermVec> houdini(const TransitionSystem & ts, const TermVec & candidates, const EngineOptions & opts,
                               size_t * checks = nullptr);

/** Houdini strengthening, then k-induction relative to the survivors. */
EngineResult engine_kind_houdini(const TransitionSystem & ts, const Term & prop, const TermVec & lemmas,
                                 const EngineOptions & opts);

/** Writes ts as VMT, runs the external command and reads its verdict. */
EngineResult engine_external(const TransitionSystem & ts, const Term & prop, const EngineOptions & opts);

}  // namespace nracegar
