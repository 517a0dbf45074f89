#include "nracegar/mc_cegar.h"

#include <functional>
#include <set>

#include "nracegar/exceptions.h"
#include "nracegar/refinement.h"

namespace nracegar {

const char * to_string(EngineKind e)
{
  switch (e) {
    case EngineKind::Bmc: return "bmc";
    case EngineKind::Kind: return "kind";
    case EngineKind::KindHoudini: return "kind-houdini";
    case EngineKind::External: return "external";
  }
  return "?";
}

std::optional<EngineKind> parse_engine(const std::string & s)
{
  for (EngineKind e : { EngineKind::Bmc, EngineKind::Kind, EngineKind::KindHoudini, EngineKind::External }) {
    if (s == to_string(e)) return e;
  }
  return std::nullopt;
}

const char * to_string(ConstrainMode m)
{
  switch (m) {
    case ConstrainMode::None: return "none";
    case ConstrainMode::Bool: return "bool";
    case ConstrainMode::Full: return "full";
  }
  return "?";
}

std::optional<ConstrainMode> parse_constrain_mode(const std::string & s)
{
  for (ConstrainMode m : { ConstrainMode::None, ConstrainMode::Bool, ConstrainMode::Full }) {
    if (s == to_string(m)) return m;
  }
  return std::nullopt;
}

const char * to_string(McVerdict::Result r)
{
  switch (r) {
    case McVerdict::Result::Safe: return "SAFE";
    case McVerdict::Result::Unsafe: return "UNSAFE";
    case McVerdict::Result::Unknown: return "UNKNOWN";
  }
  return "?";
}

const char * to_string(McVerdict::Why w)
{
  switch (w) {
    case McVerdict::Why::None: return "none";
    case McVerdict::Why::Budget: return "budget";
    case McVerdict::Why::RefinementFailure: return "refinement-failure";
    case McVerdict::Why::EngineLimit: return "engine-limit";
  }
  return "?";
}

namespace {

Term retime(const Term & f, const std::function<Frame(int)> & g)
{
  return remap_frames(f, [&](Frame fr) -> std::optional<Frame> {
    if (!fr.is_timed()) return std::nullopt;
    return g(fr.index());
  });
}

Term all_current(const Term & f)
{
  return retime(f, [](int) { return Frame::current(); });
}

Term all_next(const Term & f)
{
  return retime(f, [](int) { return Frame::next(); });
}

Term current_to_next(const Term & f)
{
  return remap_frames(f, [](Frame) -> std::optional<Frame> { return Frame::next(); });
}

/** Lowest frame to X, all higher ones to X'. */
Term flatten(const Term & f, int lo)
{
  return retime(f, [lo](int i) { return i == lo ? Frame::current() : Frame::next(); });
}

class AxiomSet
{
 public:
  bool add(std::vector<Axiom> & into, Axiom a)
  {
    if (!seen_.insert(a.formula).second) return false;
    into.push_back(std::move(a));
    return true;
  }

 private:
  std::set<Term, TermLess> seen_;
};

Axiom with_formula(const Axiom & a, Term f) { return Axiom{ std::move(f), a.kind, a.point }; }

}  // namespace

Term get_cex_formula(const TransitionSystem & abs, const Term & prop, size_t k, ConstrainMode mode, const Model & cex)
{
  if (k == 0) throw InternalError("counterexample of length 0");
  TermVec parts{ unrolling(abs, k - 1), mk_not(at_time(prop, static_cast<int>(k - 1))) };
  if (mode != ConstrainMode::None) {
    for (size_t i = 0; i < k; ++i) {
      for (const Term & v : abs.state_vars) {
        Term tv = at_time(v, static_cast<int>(i));
        if (v.is_bool()) {
          auto it = cex.bool_values.find(tv);
          if (it != cex.bool_values.end()) parts.push_back(it->second ? tv : mk_not(tv));
        } else if (mode == ConstrainMode::Full) {
          auto it = cex.var_values.find(tv);
          if (it != cex.var_values.end()) parts.push_back(mk_eq(tv, mk_real(it->second)));
        }
      }
    }
  }
  return mk_and(parts);
}

UntimedAxioms untime_axioms(const std::vector<Axiom> & gamma)
{
  UntimedAxioms out;
  AxiomSet init;
  AxiomSet trans;
  for (const Axiom & g : gamma) {
    std::vector<Frame> frames = frames_of(g.formula);
    if (frames.empty()) continue;
    for (Frame f : frames) {
      if (!f.is_timed()) throw InternalError("refinement lemma over untimed variables: " + to_string(g.formula));
    }
    const int lo = frames.front().index();
    if (frames.size() == 1 && lo == 0) {
      init.add(out.init, with_formula(g, all_current(g.formula)));
    } else if (frames.size() == 1) {
      trans.add(out.trans, with_formula(g, all_current(g.formula)));
      trans.add(out.trans, with_formula(g, all_next(g.formula)));
    } else {
      trans.add(out.trans, with_formula(g, flatten(g.formula, lo)));
    }
  }
  return out;
}

void check_untime_round_trip(const std::vector<Axiom> & gamma, const UntimedAxioms & untimed)
{
  std::set<Term, TermLess> init;
  std::set<Term, TermLess> trans;
  for (const Axiom & a : untimed.init) init.insert(a.formula);
  for (const Axiom & a : untimed.trans) trans.insert(a.formula);
  auto fail = [](const Term & g) { throw InternalError("untiming round trip failed for " + to_string(g)); };
  for (const Axiom & a : gamma) {
    const Term & g = a.formula;
    std::vector<Frame> frames = frames_of(g);
    if (frames.empty()) continue;
    const int lo = frames.front().index();
    const int hi = frames.back().index();
    if (frames.size() == 1 && lo == 0) {
      Term u = all_current(g);
      if (!init.count(u) || at_time(u, 0) != g) fail(g);
    } else if (frames.size() == 1) {
      Term cur = all_current(g);
      Term nxt = all_next(g);
      if (!trans.count(cur) || !trans.count(nxt)) fail(g);
      if (at_time(cur, lo) != g || at_time(nxt, lo - 1) != g) fail(g);
    } else {
      Term u = flatten(g, lo);
      if (!trans.count(u)) fail(g);
      // only adjacent frames survive flattening unchanged
      if (hi == lo + 1 && at_time(u, lo) != g) fail(g);
    }
  }
}

TransitionSystem refine_transition_system(const TransitionSystem & abs, const UntimedAxioms & g)
{
  TransitionSystem out = abs;
  TermVec init{ abs.init };
  TermVec trans{ abs.trans };
  for (const Axiom & a : g.init) init.push_back(a.formula);
  for (const Axiom & a : g.trans) trans.push_back(a.formula);
  out.init = mk_and(init);
  out.trans = mk_and(trans);
  return out;
}

std::optional<UntimedAxioms> reduce_axioms(const TransitionSystem & abs, const Term & prop, size_t k,
                                           const UntimedAxioms & g, const std::string & solver_cmd,
                                           ConstrainMode mode, const Model & cex,
                                           std::optional<Clock::time_point> deadline, size_t * checks)
{
  std::optional<SolverSession> s;
  std::vector<std::string> core;
  CheckResult r = CheckResult::Unknown;
  try {
    s.emplace(SolverSession::Options{ solver_cmd, "QF_UFLRA", false, true });
    s->set_deadline(deadline);
    s->assert_formula(get_cex_formula(abs, prop, k, mode, cex));
    for (size_t a = 0; a < g.init.size(); ++a) s->assert_named("i" + std::to_string(a), at_time(g.init[a].formula, 0));
    for (size_t b = 0; b < g.trans.size(); ++b) {
      for (size_t j = 0; j + 1 < k; ++j) {
        s->assert_named("t" + std::to_string(b) + "_" + std::to_string(j),
                        at_time(g.trans[b].formula, static_cast<int>(j)));
      }
    }
    r = s->check_sat();
    if (r == CheckResult::Unsat) core = s->unsat_core();
  } catch (const SolverError &) {
    r = CheckResult::Unknown;
  }
  if (checks && s) *checks += s->num_checks();
  if (r != CheckResult::Unsat) return std::nullopt;

  std::set<size_t> keep_init;
  std::set<size_t> keep_trans;
  for (const std::string & label : core) {
    if (label.empty()) continue;
    size_t idx = std::stoul(label.substr(1));
    (label[0] == 'i' ? keep_init : keep_trans).insert(idx);
  }
  UntimedAxioms out;
  for (size_t a = 0; a < g.init.size(); ++a) {
    if (keep_init.count(a)) out.init.push_back(g.init[a]);
  }
  for (size_t b = 0; b < g.trans.size(); ++b) {
    if (keep_trans.count(b)) out.trans.push_back(g.trans[b]);
  }
  return out;
}

bool replay_trace(const TransitionSystem & ts, const Term & prop, const Trace & trace)
{
  if (trace.states.empty()) return false;
  try {
    if (!evaluate_bool(ts.init, trace.states.front())) return false;
    for (size_t i = 0; i + 1 < trace.states.size(); ++i) {
      Model step = trace.states[i];
      for (const auto & [v, x] : trace.states[i + 1].var_values) step.set(next_var(v), x);
      for (const auto & [v, b] : trace.states[i + 1].bool_values) step.set(next_var(v), b);
      if (!evaluate_bool(ts.trans, step)) return false;
    }
    return !evaluate_bool(prop, trace.states.back());
  } catch (const UnassignedSymbolError &) {
    return false;
  }
}

Trace build_trace(const TransitionSystem & ts, const Term & prop, const Model & m, size_t k)
{
  Trace t;
  for (size_t i = 0; i < k; ++i) {
    Model st;
    for (const Term & v : ts.state_vars) {
      Term tv = at_time(v, static_cast<int>(i));
      if (v.is_bool()) {
        auto it = m.bool_values.find(tv);
        st.set(v, it != m.bool_values.end() && it->second);
      } else {
        auto it = m.var_values.find(tv);
        st.set(v, it != m.var_values.end() ? it->second : Rat(0));
      }
    }
    t.states.push_back(std::move(st));
  }
  if (!replay_trace(ts, prop, t)) throw InternalError("counterexample trace does not replay on the concrete system");
  return t;
}

McVerdict vmt_nra_check(const TransitionSystem & ts, const McConfig & cfg)
{
  validate(ts);
  McVerdict out;
  McStats & st = out.stats;
  auto finish = [&](McVerdict::Result r, McVerdict::Why why = McVerdict::Why::None, std::string detail = {}) {
    out.result = r;
    out.why = why;
    out.detail = std::move(detail);
    return out;
  };
  auto timed_out = [&] { return cfg.deadline && Clock::now() >= *cfg.deadline; };

  const Term & concrete_prop = ts.property(cfg.property);
  AbstractSystem abs = abstract_system(ts, cfg.property, cfg.nra.abstraction);
  TransitionSystem S = abs.ts;
  const Term & P = abs.property;

  EngineOptions eo;
  eo.solver_cmd = cfg.nra.solver_cmd;
  eo.max_k = cfg.max_k;
  eo.deadline = cfg.deadline;
  eo.external_cmd = cfg.engine_cmd;
  NraOptions no = cfg.nra;
  no.deadline = cfg.deadline;
  no.lemma_log = nullptr;

  TermVec lemmas;  // every added lemma, for invariant candidates
  AxiomSet have_init;
  AxiomSet have_trans;
  std::optional<size_t> failed_length;

  while (true) {
    if (st.iterations >= cfg.max_refinements) {
      return finish(McVerdict::Result::Unknown, McVerdict::Why::Budget, "refinement budget exhausted");
    }
    if (timed_out()) return finish(McVerdict::Result::Unknown, McVerdict::Why::Budget, "timeout");
    ++st.iterations;

    EngineResult er;
    switch (cfg.engine) {
      case EngineKind::Bmc: er = engine_bmc(S, P, eo); break;
      case EngineKind::Kind: er = engine_kind(S, P, eo); break;
      case EngineKind::KindHoudini: er = engine_kind_houdini(S, P, lemmas, eo); break;
      case EngineKind::External: er = engine_external(S, P, eo); break;
    }
    ++st.engine_calls;
    st.solver_checks += er.solver_checks;
    if (er.status == EngineResult::Status::Proved) return finish(McVerdict::Result::Safe);
    if (er.status == EngineResult::Status::Unknown) {
      return finish(McVerdict::Result::Unknown, timed_out() ? McVerdict::Why::Budget : McVerdict::Why::EngineLimit,
                    er.reason);
    }

    const size_t k = er.length;
    Term psi = get_cex_formula(S, P, k, cfg.constrain, er.model);
    SmtVerdict v = smt_nra_check_ext(psi, fmuls_of(psi), no);
    st.solver_checks += v.solver_checks;
    if (v.result == CheckResult::Sat) {
      out.trace = build_trace(ts, concrete_prop, v.model, k);
      return finish(McVerdict::Result::Unsafe);
    }
    if (v.result == CheckResult::Unknown) return finish(McVerdict::Result::Unknown, McVerdict::Why::Budget, v.reason);
    if (v.axioms.empty()) {
      return finish(McVerdict::Result::Unknown, McVerdict::Why::RefinementFailure,
                    "abstract counterexample of length " + std::to_string(k) + " is infeasible without lemmas");
    }

    UntimedAxioms g = untime_axioms(v.axioms);
    if (cfg.self_check) {
      check_untime_round_trip(v.axioms, g);
      ++st.self_checks;
    }
    UntimedAxioms add = g;
    if (cfg.reduce) {
      std::optional<UntimedAxioms> reduced =
          reduce_axioms(S, P, k, g, cfg.nra.solver_cmd, cfg.constrain, er.model, cfg.deadline, &st.solver_checks);
      if (reduced) {
        add = std::move(*reduced);
        if (cfg.self_check) {
          SolverSession s(SolverSession::Options{ cfg.nra.solver_cmd, "QF_UFLRA", false, false });
          s.set_deadline(cfg.deadline);
          s.assert_formula(get_cex_formula(refine_transition_system(S, add), P, k, cfg.constrain, er.model));
          if (s.check_sat() == CheckResult::Sat) throw InternalError("reduced lemmas do not block the counterexample");
          ++st.self_checks;
        }
      } else {
        if (timed_out()) return finish(McVerdict::Result::Unknown, McVerdict::Why::Budget, "timeout");
        ++st.reduce_failures;
        if (failed_length == k) {
          return finish(McVerdict::Result::Unknown, McVerdict::Why::RefinementFailure,
                        "lemmas do not block the counterexample of length " + std::to_string(k));
        }
        failed_length = k;
      }
    }
    if (cfg.axioms_everywhere) {
      for (const Axiom & a : add.init) {
        add.trans.push_back(a);
        add.trans.push_back(with_formula(a, current_to_next(a.formula)));
      }
    }

    UntimedAxioms fresh;
    for (const Axiom & a : add.init) have_init.add(fresh.init, a);
    for (const Axiom & a : add.trans) have_trans.add(fresh.trans, a);
    if (fresh.init.empty() && fresh.trans.empty()) {
      return finish(McVerdict::Result::Unknown, McVerdict::Why::RefinementFailure, "no new lemmas");
    }
    S = refine_transition_system(S, fresh);
    st.lemmas_init += fresh.init.size();
    st.lemmas_trans += fresh.trans.size();
    for (const auto * set : { &fresh.init, &fresh.trans }) {
      for (const Axiom & a : *set) {
        ++st.lemmas_by_kind[a.kind];
        lemmas.push_back(a.formula);
      }
    }
    if (cfg.lemma_log) {
      *cfg.lemma_log << "; refinement " << st.iterations << ": counterexample length " << k << ", "
                     << fresh.init.size() << " init and " << fresh.trans.size() << " trans lemmas\n";
      for (const Axiom & a : fresh.init) write_axiom(*cfg.lemma_log, a);
      for (const Axiom & a : fresh.trans) write_axiom(*cfg.lemma_log, a);
    }
    eo.min_depth = k - 1;
  }
}

}  // namespace nracegar
