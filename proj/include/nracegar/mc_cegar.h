/*! \file mc_cegar.h
** \brief Counterexample-guided abstraction refinement for non-linear
** transition systems.
**
** The system is abstracted to LRA+EUF and handed to a model checking
** engine. Abstract counterexamples are checked with the non-linear SMT
** loop; the lemmas it produces are mapped back from the unrolling to the
** initial formula and the transition relation.
**/

#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "nracegar/abstraction.h"
#include "nracegar/engines.h"
#include "nracegar/nra_smt.h"
#include "nracegar/vmt.h"

namespace nracegar {

enum class EngineKind
{
  Bmc,
  Kind,
  KindHoudini,
  External
};

const char * to_string(EngineKind e);
std::optional<EngineKind> parse_engine(const std::string & s);

/** How much of the abstract counterexample pins the cex formula. */
enum class ConstrainMode
{
  None,  // only its length
  Bool,  // Bool state variables
  Full   // every state variable
};

const char * to_string(ConstrainMode m);
std::optional<ConstrainMode> parse_constrain_mode(const std::string & s);

struct McConfig
{
  EngineKind engine = EngineKind::KindHoudini;
  std::string engine_cmd;
  NraOptions nra;  // solver command, model finder, refinement options
  size_t max_k = 50;
  size_t max_refinements = 100;
  ConstrainMode constrain = ConstrainMode::None;
  bool axioms_everywhere = false;
  bool reduce = true;
  /** Checks the untiming round trip and re-checks every reduced axiom set;
   *  a violation raises InternalError.
   */
  bool self_check = false;
  std::optional<int> property;
  std::optional<Clock::time_point> deadline;
  std::ostream * lemma_log = nullptr;
};

struct Trace
{
  std::vector<Model> states;  // values of the state variables
};

struct McStats
{
  size_t iterations = 0;
  size_t engine_calls = 0;
  size_t solver_checks = 0;
  size_t lemmas_init = 0;
  size_t lemmas_trans = 0;
  std::map<AxiomKind, size_t> lemmas_by_kind;
  size_t reduce_failures = 0;
  size_t self_checks = 0;
};

struct McVerdict
{
  enum class Result
  {
    Safe,
    Unsafe,
    Unknown
  };
  enum class Why
  {
    None,
    Budget,
    RefinementFailure,
    EngineLimit
  };
  Result result = Result::Unknown;
  Why why = Why::None;
  std::string detail;
  Trace trace;
  McStats stats;
};

const char * to_string(McVerdict::Result r);
const char * to_string(McVerdict::Why w);

/** Γ_I and Γ_T: lemmas for the initial formula (over X) and for the
 *  transition relation (over X and X').
 */
struct UntimedAxioms
{
  std::vector<Axiom> init;
  std::vector<Axiom> trans;
};

/** I^[X^0] ∧ T^[X^0,X^1] ∧ ... ∧ ¬P^[X^(k-1)], optionally pinned to the
 *  values of the abstract counterexample `cex`.
 */
Term get_cex_formula(const TransitionSystem & abs, const Term & prop, size_t k, ConstrainMode mode = ConstrainMode::None,
                     const Model & cex = {});

/** Maps lemmas over timed variables to single-step lemmas. An axiom over
 *  X^0 goes to the initial formula; one over a single X^i, i > 0, goes to
 *  the transition relation on both X and X'; one spanning several frames
 *  maps its lowest frame to X and all higher ones to X'. Duplicates are
 *  dropped.
 */
UntimedAxioms untime_axioms(const std::vector<Axiom> & gamma);

/** Checks that the single-frame and two-frame lemmas map back to the
 *  originals under at_time; throws InternalError otherwise.
 */
void check_untime_round_trip(const std::vector<Axiom> & gamma, const UntimedAxioms & untimed);

/** Conjoins the lemmas to I^ and T^. */
TransitionSystem refine_transition_system(const TransitionSystem & abs, const UntimedAxioms & g);

/** Keeps the lemmas that appear in an unsat core of the length-k cex
 *  formula of the refined system. std::nullopt when that formula is still
 *  satisfiable (a refinement failure) or the solver gives up.
 */
std::optional<UntimedAxioms> reduce_axioms(const TransitionSystem & abs, const Term & prop, size_t k,
                                           const UntimedAxioms & g, const std::string & solver_cmd,
                                           ConstrainMode mode = ConstrainMode::None, const Model & cex = {},
                                           std::optional<Clock::time_point> deadline = std::nullopt,
                                           size_t * checks = nullptr);

/** Projects the frames 0..k-1 of a model of the cex formula to states and
 *  replays them on the concrete system; throws InternalError on mismatch.
 */
Trace build_trace(const TransitionSystem & ts, const Term & prop, const Model & m, size_t k);

/** Replays a trace on the concrete system: I, T and ¬P by exact evaluation. */
bool replay_trace(const TransitionSystem & ts, const Term & prop, const Trace & trace);

McVerdict vmt_nra_check(const TransitionSystem & ts, const McConfig & cfg = {});

}  // namespace nracegar
