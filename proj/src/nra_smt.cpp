#include "nracegar/nra_smt.h"

#include <algorithm>
#include <iostream>

#include "nracegar/exceptions.h"

namespace nracegar {

const char * to_string(ModelFinder f)
{
  switch (f) {
    case ModelFinder::Eval: return "eval";
    case ModelFinder::Lines: return "lines";
    case ModelFinder::Nra: return "nra";
  }
  return "?";
}

std::optional<Model> get_nra_model_eval(const Term &, const Model & mu, const TermVec & fmuls)
{
  for (const Term & m : fmuls) {
    if (evaluate_real(m, mu) != evaluate_real(m[0], mu) * evaluate_real(m[1], mu)) return std::nullopt;
  }
  return mu;
}

Term truth_assignment(const Term & phi_hat, const Model & mu)
{
  TermVec lits;
  for (const Term & a : atoms_of(phi_hat)) lits.push_back(evaluate_bool(a, mu) ? a : mk_not(a));
  return mk_and(lits);
}

std::optional<Model> get_nra_model_lines(SolverSession & session, const Term & phi_hat, const Model & mu,
                                         const TermVec & fmuls)
{
  if (fmuls.empty()) return mu;
  TermVec parts{ truth_assignment(phi_hat, mu) };
  for (const Term & m : fmuls) {
    const Term & s = m[0];
    const Term & t = m[1];
    const Rat vs = evaluate_real(s, mu);
    const Rat vt = evaluate_real(t, mu);
    parts.push_back(mk_or(mk_and(mk_eq(s, mk_real(vs)), mk_eq(m, mk_scale(vs, t))),
                          mk_and(mk_eq(t, mk_real(vt)), mk_eq(m, mk_scale(vt, s)))));
  }
  std::optional<Model> out;
  session.push();
  try {
    session.assert_formula(mk_and(parts));
    if (session.check_sat() == CheckResult::Sat) out = session.model();
  } catch (const SolverError &) {
    out.reset();
  }
  try {
    session.pop();
  } catch (const SolverError &) {
  }
  if (out && !get_nra_model_eval(phi_hat, *out, fmuls)) return std::nullopt;
  return out;
}

std::optional<Model> get_nra_model_complete(const Term & phi_hat, const Model & mu, const std::string & command,
                                            std::optional<Clock::time_point> deadline)
{
  if (command.empty()) return std::nullopt;
  Term psi = concretize(truth_assignment(phi_hat, mu));
  try {
    SolverSession s(SolverSession::Options{ command, "QF_NRA", true, false });
    s.set_deadline(deadline);
    s.assert_formula(psi);
    if (s.check_sat() != CheckResult::Sat) return std::nullopt;
    Model m;
    try {
      m = s.model(vars_of(phi_hat));
    } catch (const SolverError & e) {
      std::cerr << "warning: NRA solver model rejected (" << e.what() << ")\n";
      return std::nullopt;
    }
    return with_exact_products(m, fmuls_of(phi_hat));
  } catch (const SolverError & e) {
    std::cerr << "warning: NRA solver failed: " << e.what() << "\n";
    return std::nullopt;
  }
}

Model verify_nra_model(const Term & phi_hat, const Model & m)
{
  TermVec fmuls = fmuls_of(phi_hat);
  Model exact = with_exact_products(m, fmuls);
  for (const Term & f : fmuls) {
    auto it = m.fmul_values.find(f);
    if (it != m.fmul_values.end() && it->second != exact.fmul_values.at(f)) {
      throw InternalError("model assigns a non-product value to " + to_string(f));
    }
  }
  if (!evaluate_bool(phi_hat, exact)) throw InternalError("model does not satisfy the formula");
  Model out;
  for (const Term & v : vars_of(phi_hat)) {
    if (v.is_real()) {
      out.set(v, exact.var_values.at(v));
    } else {
      out.set(v, exact.bool_values.at(v));
    }
  }
  for (const Term & f : fmuls) out.set_fmul(f, exact.fmul_values.at(f));
  return out;
}

SmtVerdict smt_nra_check_ext(const Term & phi_hat, const TermVec & fmuls, const NraOptions & opts,
                             FrontierStore * frontiers)
{
  SmtVerdict v;
  FrontierStore local;
  FrontierStore & store = frontiers ? *frontiers : local;
  TermVec refined;
  for (const Term & m : fmuls) {
    if (refinable(m)) refined.push_back(m);
  }
  // applications with a constant argument are not refined but must still
  // be exact in a returned model
  TermVec exact = fmuls;
  for (const Term & m : fmuls_of(phi_hat)) {
    if (std::find(exact.begin(), exact.end(), m) == exact.end()) exact.push_back(m);
  }

  std::optional<SolverSession> session;
  try {
    session.emplace(SolverSession::Options{ opts.solver_cmd });
    session->set_deadline(opts.deadline);
    session->assert_formula(phi_hat);
  } catch (const SolverError & e) {
    v.reason = e.what();
    return v;
  }

  TermVec reals;
  for (const Term & x : vars_of(phi_hat)) {
    if (x.is_real()) reals.push_back(x);
  }
  auto box = [&](const Rat & bound) {
    TermVec parts;
    for (const Term & x : reals) parts.push_back(mk_and(mk_le(mk_real(-bound), x), mk_le(x, mk_real(bound))));
    return mk_and(parts);
  };

  auto finish = [&](CheckResult r, std::string reason = {}) {
    v.result = r;
    v.reason = std::move(reason);
    v.solver_checks = session->num_checks();
    return v;
  };

  while (true) {
    if (v.iterations >= opts.max_iterations) return finish(CheckResult::Unknown, "refinement budget exhausted");
    if (opts.deadline && Clock::now() >= *opts.deadline) return finish(CheckResult::Unknown, "timeout");
    ++v.iterations;
    Model mu;
    try {
      CheckResult r = session->check_sat();
      if (r == CheckResult::Unsat) return finish(CheckResult::Unsat);
      if (r == CheckResult::Unknown) return finish(CheckResult::Unknown, session->reason_unknown());
      mu = session->model();
      // prefer a model in the smallest box |v| <= 2^i around the origin
      for (size_t i = 0; i < opts.small_model_steps && !reals.empty(); ++i) {
        session->push();
        session->assert_formula(box(Rat(1L << i)));
        bool sat = session->check_sat() == CheckResult::Sat;
        if (sat) mu = session->model();
        session->pop();
        if (sat) break;
      }
    } catch (const SolverError & e) {
      return finish(CheckResult::Unknown, e.what());
    }

    std::optional<Model> found = get_nra_model_eval(phi_hat, mu, exact);
    if (!found && opts.finder != ModelFinder::Eval) {
      if (opts.finder == ModelFinder::Nra && !opts.nra_solver_cmd.empty()) {
        found = get_nra_model_complete(phi_hat, mu, opts.nra_solver_cmd, opts.deadline);
      }
      if (!found) found = get_nra_model_lines(*session, phi_hat, mu, exact);
    }
    if (found) {
      v.model = verify_nra_model(phi_hat, *found);
      return finish(CheckResult::Sat);
    }

    for (const Term & m : spurious_fmuls(refined, mu)) {
      for (const Term & arg : m.children()) {
        Rat a = evaluate_real(arg, mu);
        if (mpz_sizeinbase(a.numerator().get_mpz_t(), 2) > opts.max_value_bits
            || mpz_sizeinbase(a.denominator().get_mpz_t(), 2) > opts.max_value_bits) {
          return finish(CheckResult::Unknown, "model values exceed the size budget");
        }
      }
    }

    std::vector<Axiom> lemmas = refine(mu, refined, store, opts.refine);
    TermVec formulas;
    for (const Axiom & a : lemmas) formulas.push_back(a.formula);
    Model ext = extend_by_congruence(mu, formulas);
    if (evaluate_bool(mk_and(formulas), ext)) return finish(CheckResult::Unknown, "refinement made no progress");

    try {
      session->push();
      for (const Axiom & a : lemmas) {
        session->assert_formula(a.formula);
        if (opts.lemma_log) write_axiom(*opts.lemma_log, a);
        v.axioms.push_back(a);
      }
    } catch (const SolverError & e) {
      return finish(CheckResult::Unknown, e.what());
    }
  }
}

SmtVerdict smt_nra_check(const Term & phi, const NraOptions & opts)
{
  AbstractionResult abs = abstract_formula(phi, opts.abstraction);
  TermVec parts{ abs.abstract_formula };
  for (const Axiom & a : abs.static_axioms) parts.push_back(a.formula);
  SmtVerdict v = smt_nra_check_ext(mk_and(parts), abs.fmuls, opts);
  if (v.result == CheckResult::Sat) {
    // the original formula must hold under the same assignment
    Model concrete;
    concrete.var_values = v.model.var_values;
    concrete.bool_values = v.model.bool_values;
    if (!evaluate_bool(phi, concrete)) throw InternalError("sat model does not satisfy the input formula");
  }
  return v;
}

}  // namespace nracegar
