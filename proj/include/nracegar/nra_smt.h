/*! \file nra_smt.h
** \brief Satisfiability of non-linear real formulas by incremental
** linearization over an LRA+EUF solver.
**/

#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "nracegar/abstraction.h"
#include "nracegar/refinement.h"
#include "nracegar/solver.h"

namespace nracegar {

enum class ModelFinder
{
  Eval,
  Lines,
  Nra
};

const char * to_string(ModelFinder f);

struct NraOptions
{
  std::string solver_cmd = default_solver_command();
  std::string nra_solver_cmd;  // empty: no complete NRA solver
  ModelFinder finder = ModelFinder::Lines;
  size_t max_iterations = 100;
  /** Give up once a refined argument value needs more bits than this. */
  size_t max_value_bits = 4096;
  /** After a sat check, look for a model inside the boxes |v| <= 2^i,
   *  i < small_model_steps, and refine at the first one found. Small
   *  models give tangent points near the constraint vertices. */
  size_t small_model_steps = 11;
  std::optional<Clock::time_point> deadline;
  RefineOptions refine;
  AbstractionOptions abstraction;
  std::ostream * lemma_log = nullptr;
};

struct SmtVerdict
{
  CheckResult result = CheckResult::Unknown;
  Model model;                // sat: exact products for every fmul
  std::vector<Axiom> axioms;  // unsat: the dynamically added lemmas
  std::string reason;         // unknown
  size_t iterations = 0;
  size_t solver_checks = 0;
};

/** Abstracts phi (with static axioms) and runs the refinement loop. */
SmtVerdict smt_nra_check(const Term & phi, const NraOptions & opts = {});

/** The refinement loop on an already abstract formula. Only applications
 *  in `fmuls` with two non-constant arguments are refined.
 */
SmtVerdict smt_nra_check_ext(const Term & phi_hat, const TermVec & fmuls, const NraOptions & opts = {},
                             FrontierStore * frontiers = nullptr);

/** mu itself when every fmul value is the exact product. */
std::optional<Model> get_nra_model_eval(const Term & phi_hat, const Model & mu, const TermVec & fmuls);

/** The truth assignment mu induces on the atoms of phi_hat. */
Term truth_assignment(const Term & phi_hat, const Model & mu);

/** Checks the truth assignment conjoined with one multiplication line per
 *  application (fixing either argument at its model value) in a pushed
 *  scope of `session`.
 */
std::optional<Model> get_nra_model_lines(SolverSession & session, const Term & phi_hat, const Model & mu,
                                         const TermVec & fmuls);

/** Ships the concretized truth assignment to a complete QF_NRA solver.
 *  Irrational witnesses are rejected.
 */
std::optional<Model> get_nra_model_complete(const Term & phi_hat, const Model & mu, const std::string & command,
                                            std::optional<Clock::time_point> deadline = std::nullopt);

/** Verifies that m (with exact products) satisfies phi_hat; InternalError
 *  otherwise. Returns m restricted to exact products.
 */
Model verify_nra_model(const Term & phi_hat, const Model & m);

}  // namespace nracegar
