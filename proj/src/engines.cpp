#include "nracegar/engines.h"

#include <unistd.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <fstream>
#include <set>
#include <sstream>

#include "nracegar/exceptions.h"

namespace nracegar {

namespace {

using Status = EngineResult::Status;

SolverSession::Options session_options(const EngineOptions & opts)
{
  return SolverSession::Options{ opts.solver_cmd, "QF_UFLRA", true, false };
}

Term same_value(const Term & a, const Term & b) { return a.is_bool() ? mk_iff(a, b) : mk_eq(a, b); }

/** Some state variable differs between frames i and j. */
Term distinct_states(const TermVec & state_vars, size_t i, size_t j)
{
  TermVec diff;
  for (const Term & v : state_vars) {
    diff.push_back(mk_not(same_value(at_time(v, static_cast<int>(i)), at_time(v, static_cast<int>(j)))));
  }
  return mk_or(diff);
}

Term to_next(const Term & t)
{
  return remap_frames(t, [](Frame) -> std::optional<Frame> { return Frame::next(); });
}

Term to_current(const Term & t)
{
  return remap_frames(t, [](Frame) -> std::optional<Frame> { return Frame::current(); });
}

bool holds(const Term & c, const Model & m)
{
  try {
    return evaluate_bool(c, m);
  } catch (const UnassignedSymbolError &) {
    return false;
  }
}

}  // namespace

Term unrolling(const TransitionSystem & ts, size_t k)
{
  TermVec parts{ at_time(ts.init, 0) };
  for (size_t i = 0; i < k; ++i) parts.push_back(at_time(ts.trans, static_cast<int>(i)));
  return mk_and(parts);
}

EngineResult engine_bmc(const TransitionSystem & ts, const Term & prop, const EngineOptions & opts)
{
  EngineResult r;
  std::optional<SolverSession> s;
  try {
    s.emplace(session_options(opts));
    s->set_deadline(opts.deadline);
    s->assert_formula(at_time(ts.init, 0));
    for (size_t k = 0; k <= opts.max_k; ++k) {
      if (k > 0) s->assert_formula(at_time(ts.trans, static_cast<int>(k - 1)));
      if (k < opts.min_depth) continue;
      s->push();
      s->assert_formula(mk_not(at_time(prop, static_cast<int>(k))));
      CheckResult c = s->check_sat();
      if (c == CheckResult::Sat) {
        r.status = Status::Cex;
        r.length = k + 1;
        r.model = s->model();
      } else if (c == CheckResult::Unknown) {
        r.reason = s->reason_unknown();
      }
      s->pop();
      if (c != CheckResult::Unsat) break;
    }
    if (r.status == Status::Unknown && r.reason.empty()) r.reason = "depth bound reached";
  } catch (const SolverError & e) {
    r = EngineResult{};
    r.reason = e.what();
  }
  if (s) r.solver_checks = s->num_checks();
  return r;
}

EngineResult engine_kind(const TransitionSystem & ts, const Term & prop, const EngineOptions & opts,
                         const Term & invariant)
{
  EngineResult r;
  std::optional<SolverSession> base;
  std::optional<SolverSession> step;
  try {
    base.emplace(session_options(opts));
    step.emplace(session_options(opts));
    base->set_deadline(opts.deadline);
    step->set_deadline(opts.deadline);
    base->assert_formula(at_time(ts.init, 0));
    step->assert_formula(at_time(invariant, 0));
    for (size_t k = 0; k <= opts.max_k; ++k) {
      const int ik = static_cast<int>(k);
      // base case: a violation at depth k
      if (k > 0) base->assert_formula(at_time(ts.trans, ik - 1));
      if (k >= opts.min_depth) {
        base->push();
        base->assert_formula(mk_not(at_time(prop, ik)));
        CheckResult c = base->check_sat();
        if (c == CheckResult::Sat) {
          r.status = Status::Cex;
          r.length = k + 1;
          r.model = base->model();
        } else if (c == CheckResult::Unknown) {
          r.reason = base->reason_unknown();
        }
        base->pop();
        if (c != CheckResult::Unsat) break;
      }
      // step case: k+1 distinct P-states cannot be followed by a ¬P-state
      step->assert_formula(at_time(prop, ik));
      step->assert_formula(at_time(ts.trans, ik));
      step->assert_formula(at_time(invariant, ik + 1));
      for (size_t j = 0; j <= k; ++j) step->assert_formula(distinct_states(ts.state_vars, j, k + 1));
      step->push();
      step->assert_formula(mk_not(at_time(prop, ik + 1)));
      CheckResult c = step->check_sat();
      step->pop();
      if (c == CheckResult::Unsat) {
        r.status = Status::Proved;
        r.depth = k + 1;
        break;
      }
      if (c == CheckResult::Unknown) {
        r.reason = step->reason_unknown();
        break;
      }
    }
    if (r.status == Status::Unknown && r.reason.empty()) r.reason = "depth bound reached";
  } catch (const SolverError & e) {
    r = EngineResult{};
    r.reason = e.what();
  }
  if (base) r.solver_checks += base->num_checks();
  if (step) r.solver_checks += step->num_checks();
  return r;
}

TermVec houdini_candidates(const TransitionSystem & ts, const Term & prop, const TermVec & lemmas)
{
  TermVec out;
  std::set<Term, TermLess> seen;
  auto add = [&](const Term & c) {
    if (c.kind() == Kind::BoolConst) return;
    if (seen.insert(c).second) out.push_back(c);
  };
  auto add_atom = [&](const Term & a) {
    auto frames = frames_of(a);
    if (frames.size() != 1) return;
    Term c = frames[0].is_current() ? a : frames[0].is_next() ? to_current(a) : Term();
    if (!c) return;
    if (c.is_var()) {
      add(c);
      add(mk_not(c));
    } else if (c.kind() == Kind::Le || c.kind() == Kind::Lt || c.kind() == Kind::Eq) {
      const Term & l = c[0];
      const Term & r = c[1];
      add(mk_le(l, r));
      add(mk_le(r, l));
      add(mk_lt(l, r));
      add(mk_lt(r, l));
      add(mk_eq(l, r));
    }
  };
  if (!frames_of(prop).empty()) add(prop);
  TermVec sources{ ts.init, prop };
  sources.insert(sources.end(), lemmas.begin(), lemmas.end());
  for (const Term & f : sources) {
    for (const Term & a : atoms_of(f)) add_atom(a);
  }
  return out;
}

std::optional<TermVec> houdini(const TransitionSystem & ts, const TermVec & candidates, const EngineOptions & opts,
                               size_t * checks)
{
  TermVec keep = candidates;
  // drop every candidate falsified by the model of `query`
  auto prune = [&](SolverSession & s, const std::function<Term(const TermVec &)> & query,
                   const std::function<Term(const Term &)> & view) -> bool {
    while (!keep.empty()) {
      s.push();
      s.assert_formula(query(keep));
      CheckResult c = s.check_sat();
      if (c == CheckResult::Unknown) {
        s.pop();
        return false;
      }
      if (c == CheckResult::Unsat) {
        s.pop();
        return true;
      }
      Model m = s.model();
      s.pop();
      TermVec next;
      for (const Term & k : keep) {
        if (holds(view(k), m)) next.push_back(k);
      }
      // the model falsifies the conjunction, so at least one candidate goes
      if (next.size() == keep.size()) next.clear();
      keep = std::move(next);
    }
    return true;
  };

  std::optional<SolverSession> init;
  std::optional<SolverSession> cons;
  bool ok = false;
  try {
    init.emplace(session_options(opts));
    init->set_deadline(opts.deadline);
    init->assert_formula(ts.init);
    ok = prune(*init, [](const TermVec & cs) { return mk_not(mk_and(cs)); }, [](const Term & c) { return c; });
    if (ok) {
      cons.emplace(session_options(opts));
      cons->set_deadline(opts.deadline);
      cons->assert_formula(ts.trans);
      ok = prune(
          *cons,
          [](const TermVec & cs) {
            TermVec next;
            for (const Term & c : cs) next.push_back(to_next(c));
            return mk_and(mk_and(cs), mk_not(mk_and(next)));
          },
          to_next);
    }
  } catch (const SolverError &) {
    ok = false;
  }
  if (checks) *checks += (init ? init->num_checks() : 0) + (cons ? cons->num_checks() : 0);
  if (!ok) return std::nullopt;
  return keep;
}

EngineResult engine_kind_houdini(const TransitionSystem & ts, const Term & prop, const TermVec & lemmas,
                                 const EngineOptions & opts)
{
  size_t checks = 0;
  std::optional<TermVec> inv = houdini(ts, houdini_candidates(ts, prop, lemmas), opts, &checks);
  Term strengthening = inv ? mk_and(*inv) : mk_true();
  if (inv && !inv->empty()) {
    try {
      SolverSession s(session_options(opts));
      s.set_deadline(opts.deadline);
      s.assert_formula(mk_and(strengthening, mk_not(prop)));
      CheckResult c = s.check_sat();
      checks += s.num_checks();
      if (c == CheckResult::Unsat) {
        EngineResult r;
        r.status = Status::Proved;
        r.depth = 1;
        r.solver_checks = checks;
        return r;
      }
    } catch (const SolverError &) {
    }
  }
  EngineResult r = engine_kind(ts, prop, opts, strengthening);
  r.solver_checks += checks;
  return r;
}

EngineResult engine_external(const TransitionSystem & ts, const Term & prop, const EngineOptions & opts)
{
  EngineResult r;
  if (opts.external_cmd.empty()) {
    r.reason = "no external engine command";
    return r;
  }
  TransitionSystem out;
  out.state_vars = ts.state_vars;
  out.init = ts.init;
  out.trans = ts.trans;
  out.properties[0] = prop;

  std::string path = (std::filesystem::temp_directory_path() / "nracegar-XXXXXX.vmt").string();
  int fd = mkstemps(path.data(), 4);
  if (fd < 0) {
    r.reason = "cannot create a temporary file";
    return r;
  }
  close(fd);
  {
    std::ofstream os(path);
    os << serialize_vmt(out);
  }

  std::string cmd = opts.external_cmd + " " + path;
  if (opts.deadline) {
    double secs = std::chrono::duration<double>(*opts.deadline - Clock::now()).count();
    if (secs <= 0) {
      std::filesystem::remove(path);
      r.reason = "timeout";
      return r;
    }
    cmd = "timeout " + std::to_string(static_cast<long>(std::ceil(secs))) + " " + cmd;
  }
  std::string output;
  if (FILE * p = popen(cmd.c_str(), "r")) {
    std::array<char, 4096> buf;
    size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) output.append(buf.data(), n);
    pclose(p);
  }
  std::filesystem::remove(path);

  std::istringstream is(output);
  std::string verdict;
  is >> verdict;
  if (verdict == "safe") {
    r.status = Status::Proved;
  } else if (verdict == "unsafe") {
    long k = 0;
    if (is >> k && k >= 1) {
      r.status = Status::Cex;
      r.length = static_cast<size_t>(k);
    } else {
      r.reason = "external engine reported unsafe without a length";
    }
  } else {
    r.reason = verdict.empty() ? "external engine gave no verdict" : "external engine: " + verdict;
  }
  return r;
}

}  // namespace nracegar
