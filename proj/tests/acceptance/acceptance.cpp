/*! \file acceptance.cpp
** \brief End-to-end acceptance checks; prints one PASS/FAIL line each.
**/

#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>

#include "frontier_cases.h"
#include "nracegar/cli.h"
#include "nracegar/exceptions.h"
#include "nracegar/mc_cegar.h"
#include "oracles.h"

using namespace nracegar;
namespace fs = std::filesystem;

namespace {

using Seconds = std::chrono::duration<double>;

struct Outcome
{
  bool pass;
  std::string detail;
};

std::string bench(const std::string & f) { return std::string(NRACEGAR_BENCH_DIR) + "/" + f; }
Term real(const std::string & n) { return mk_var(n, Sort::Real); }

std::string fmt(double s)
{
  std::ostringstream os;
  os.precision(1);
  os << std::fixed << s << "s";
  return os.str();
}

template <class F>
double timed(F && f)
{
  auto t0 = std::chrono::steady_clock::now();
  f();
  return Seconds(std::chrono::steady_clock::now() - t0).count();
}

int run_cli(std::vector<std::string> args, std::string & out)
{
  args.insert(args.begin(), "nracegar");
  std::vector<const char *> argv;
  for (const std::string & a : args) argv.push_back(a.c_str());
  std::ostringstream os, es;
  int code = run(static_cast<int>(argv.size()), argv.data(), os, es);
  out = os.str();
  return code;
}

Outcome running_example_safe()
{
  std::string out;
  int code = 0;
  double t = timed([&] { code = run_cli({ "check-vmt", bench("intro.vmt") }, out); });
  std::string kind_out;
  int kind_code = run_cli({ "check-vmt", bench("intro.vmt"), "--engine", "kind", "--max-k", "20" }, kind_out);
  bool pass = code == kExitSafe && out == "SAFE\n" && t <= 60 && kind_code == kExitUnknown && kind_out == "UNKNOWN\n";
  return { pass, "default engine: " + out.substr(0, out.find('\n')) + " in " + fmt(t) +
                   "; plain k-induction at max-k 20: " + kind_out.substr(0, kind_out.find('\n')) };
}

Outcome running_example_unsafe()
{
  TransitionSystem ts = oracle::load_vmt(bench("intro_z_le_100.vmt"));
  McVerdict v;
  double t = timed([&] { v = vmt_nra_check(ts); });
  if (v.result != McVerdict::Result::Unsafe) return { false, std::string("verdict ") + to_string(v.result) };
  const Model & last = v.trace.states.back();
  bool end = last.var_values.at(real("x")) == Rat(11) && last.var_values.at(real("y")) == Rat(11)
             && last.var_values.at(real("z")) == Rat(121);
  bool replay = oracle::replays(ts, ts.property(), v.trace.states);
  bool pass = v.trace.states.size() == 10 && end && replay && t <= 60;
  return { pass, std::to_string(v.trace.states.size()) + " states, ends at (" + last.var_values.at(real("x")).to_string()
                   + "," + last.var_values.at(real("y")).to_string() + "," + last.var_values.at(real("z")).to_string()
                   + "), replay " + (replay ? "ok" : "FAILED") + ", " + fmt(t) };
}

Outcome lemma_validity()
{
  constexpr int kSamples = 100000;
  oracle::Rng rng(2718);
  TermVec xs = oracle::real_vars(3);
  auto value = [&] { return rng.coin(0.15) ? Rat(0) : rng.rational(12, 5); };
  auto point = [&] {
    Model mu;
    for (const Term & x : xs) mu.set(x, value());
    return mu;
  };
  size_t bad_tangent = 0, bad_mono = 0, bad_static = 0;

  const Term m = mk_fmul(xs[0], xs[1]);
  for (int i = 0; i < kSamples; ++i) {
    Model mu = point();
    Rat a = rng.coin(0.2) ? mu.var_values.at(xs[0]) : value();
    Rat b = rng.coin(0.2) ? mu.var_values.at(xs[1]) : value();
    if (!oracle::eval_bool(tangent_lemma(m, a, b).formula, mu)) ++bad_tangent;
  }

  // every pair shape: disjoint, shared argument, squares
  const TermVec apps = { mk_fmul(xs[0], xs[1]), mk_fmul(xs[1], xs[2]), mk_fmul(xs[0], xs[0]), mk_fmul(xs[2], xs[2]),
                         mk_fmul(xs[0], xs[2]) };
  int mono_samples = 0;
  while (mono_samples < kSamples) {
    Model trigger = point();
    for (const Term & a : apps) trigger.set_fmul(a, rng.rational(40, 3));
    for (const Axiom & ax : monotonicity_lemmas(apps, trigger)) {
      for (int j = 0; j < 20 && mono_samples < kSamples; ++j, ++mono_samples) {
        if (!oracle::eval_bool(ax.formula, point())) ++bad_mono;
      }
    }
  }

  TermVec fmuls = { mk_fmul(xs[0], xs[1]), mk_fmul(xs[2], xs[2]) };
  std::vector<Axiom> statics = static_axioms(fmuls);
  for (int i = 0; i < kSamples; ++i) {
    Model mu = point();
    for (const Axiom & ax : statics) {
      if (!oracle::eval_bool(ax.formula, mu)) ++bad_static;
    }
  }
  bool pass = bad_tangent == 0 && bad_mono == 0 && bad_static == 0;
  return { pass, "violations: tangent " + std::to_string(bad_tangent) + ", monotonicity " + std::to_string(bad_mono)
                   + ", static " + std::to_string(bad_static) + " (" + std::to_string(kSamples)
                   + " samples per family)" };
}

Outcome refine_progress()
{
  oracle::Rng rng(31415);
  TermVec xs = oracle::real_vars(3);
  const TermVec pool = { mk_fmul(xs[0], xs[1]), mk_fmul(xs[1], xs[2]), mk_fmul(xs[0], xs[0]), mk_fmul(xs[0], xs[2]) };
  SolverSession solver({ default_solver_command(), "QF_UFLRA", true, false });
  size_t checked = 0, failures = 0, undecided = 0;
  while (checked < 1000) {
    TermVec fmuls;
    for (const Term & a : pool) {
      if (rng.coin(0.6)) fmuls.push_back(a);
    }
    if (fmuls.empty()) continue;
    Model mu;
    for (const Term & x : xs) mu.set(x, rng.coin(0.1) ? Rat(0) : rng.rational(30, 7));
    for (const Term & a : fmuls) mu.set_fmul(a, rng.rational(200, 9));
    if (spurious_fmuls(fmuls, mu).empty()) continue;
    ++checked;
    FrontierStore store;
    std::vector<Axiom> lemmas = refine(mu, fmuls, store);
    // the lemmas must exclude every EUF extension of mu
    std::vector<std::pair<std::string, Term>> q;
    for (const auto & [x, v] : mu.var_values) q.emplace_back("v" + std::to_string(q.size()), mk_eq(x, mk_real(v)));
    for (const auto & [a, v] : mu.fmul_values) q.emplace_back("f" + std::to_string(q.size()), mk_eq(a, mk_real(v)));
    for (const Axiom & ax : lemmas) q.emplace_back("l" + std::to_string(q.size()), ax.formula);
    CheckResult r = solver.check(q).result;
    if (r == CheckResult::Sat) ++failures;
    if (r == CheckResult::Unknown) ++undecided;
  }
  return { failures == 0 && undecided == 0, std::to_string(checked) + " spurious models, " + std::to_string(failures)
                                               + " not blocked, " + std::to_string(undecided) + " undecided" };
}

Outcome frontier_suite()
{
  size_t ok = 0;
  std::string bad;
  auto cases = oracle::frontier_cases();
  for (const oracle::FrontierCase & c : cases) {
    auto [extra, after] = frontier_update(c.before, c.point);
    if (extra == c.extra && after == c.after) {
      ++ok;
    } else {
      bad += " [" + c.name + "]";
    }
  }
  return { ok == cases.size() && cases.size() == 8, std::to_string(ok) + "/" + std::to_string(cases.size()) + " cases" + bad };
}

Outcome fuzz()
{
  constexpr int kFormulas = 500;
  oracle::Rng rng(161803);
  NraOptions opts;
  opts.max_iterations = 30;
  opts.max_value_bits = 256;
  size_t sat = 0, unsat = 0, unknown = 0, violations = 0, grid = 0;
  std::string first_bad;
  for (int i = 0; i < kFormulas; ++i) {
    TermVec xs = oracle::real_vars(static_cast<size_t>(rng.uniform(1, 4)));
    Term phi = oracle::random_nra_formula(rng, xs, static_cast<size_t>(rng.uniform(1, 3)), 5);
    opts.deadline = Clock::now() + std::chrono::seconds(5);
    SmtVerdict v = smt_nra_check(phi, opts);
    bool bad = false;
    if (v.result == CheckResult::Sat) {
      ++sat;
      bad = !oracle::eval_bool(phi, v.model);
    } else if (v.result == CheckResult::Unsat) {
      ++unsat;
      auto z = oracle::z3_nra_sat(phi, 30);
      if (z) {
        bad = *z;
      } else {
        ++grid;
        bad = oracle::grid_has_model(phi, xs, -8, 8, 0.125);
      }
    } else {
      ++unknown;
    }
    if (bad) {
      ++violations;
      if (first_bad.empty()) first_bad = " first: " + to_string(phi);
    }
  }
  return { violations == 0, std::to_string(kFormulas) + " formulas: " + std::to_string(sat) + " sat, " + std::to_string(unsat)
                              + " unsat, " + std::to_string(unknown) + " unknown; " + std::to_string(violations)
                              + " soundness violations; " + std::to_string(grid) + " unsat checked by grid" + first_bad };
}

Outcome self_checks()
{
  size_t runs = 0, checks = 0, errors = 0;
  std::string bad;
  for (const auto & e : fs::directory_iterator(NRACEGAR_BENCH_DIR)) {
    if (e.path().extension() != ".vmt") continue;
    McConfig cfg;
    cfg.self_check = true;
    cfg.deadline = Clock::now() + std::chrono::seconds(120);
    try {
      McVerdict v = vmt_nra_check(oracle::load_vmt(e.path().string()), cfg);
      checks += v.stats.self_checks;
      ++runs;
    } catch (const InternalError & ex) {
      ++errors;
      bad += " " + e.path().filename().string() + ": " + ex.what();
    }
  }
  return { errors == 0 && checks > 0,
           std::to_string(runs) + " runs, " + std::to_string(checks) + " refinement rounds checked, "
             + std::to_string(errors) + " violations" + bad };
}

std::string strip_time(const std::string & csv)
{
  std::istringstream in(csv);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cols;
    std::stringstream ls(line);
    std::string c;
    while (std::getline(ls, c, ',')) cols.push_back(c);
    if (line.back() == ',') cols.emplace_back();
    for (size_t i = 0; i < cols.size(); ++i) {
      if (i == 3) continue;
      out << cols[i] << (i + 1 < cols.size() ? "," : "");
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace

int main()
{
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
    { "running example proved safe", running_example_safe },
    { "running example with z <= 100 unsafe", running_example_unsafe },
    { "lemma validity by sampling", lemma_validity },
    { "refinement progress", refine_progress },
    { "frontier update cases", frontier_suite },
    { "fuzzed SMT loop against complete oracle", fuzz },
  };

  bool all = true;
  auto report = [&](const std::string & name, const Outcome & o) {
    all = all && o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << name << ": " << o.detail << std::endl;
  };
  for (const auto & [name, f] : criteria) {
    try {
      report(name, f());
    } catch (const std::exception & e) {
      report(name, { false, std::string("exception: ") + e.what() });
    }
  }
  try {
    report("untiming and reduction self-checks on the corpus", self_checks());
  } catch (const std::exception & e) {
    report("untiming and reduction self-checks on the corpus", { false, std::string("exception: ") + e.what() });
  }

  try {
    RunConfig cfg;
    std::vector<BenchRow> first, second;
    double t = timed([&] { first = nracegar::bench(NRACEGAR_BENCH_DIR, cfg); });
    second = nracegar::bench(NRACEGAR_BENCH_DIR, cfg);
    std::ostringstream a, b;
    write_csv(a, first);
    write_csv(b, second);
    bool same = strip_time(a.str()) == strip_time(b.str());
    report("deterministic bench tables", { same, same ? "identical apart from the time column" : "tables differ" });

    size_t with_expected = 0, mismatches = 0, errors = 0;
    bool has_linear = false;
    std::string bad;
    for (const BenchRow & r : first) {
      with_expected += !r.expected.empty();
      mismatches += r.mismatch();
      errors += !r.error.empty();
      has_linear |= r.file == "train.vmt";
      if (r.mismatch() || !r.error.empty()) bad += " " + r.file;
    }
    bool pass = first.size() >= 12 && with_expected == first.size() && mismatches == 0 && errors == 0 && has_linear
                && t <= 900;
    report("bundled corpus verdicts", { pass, bench_summary(first) + "; " + std::to_string(with_expected)
                                                + " with expected verdicts; wall " + fmt(t) + bad });
  } catch (const std::exception & e) {
    report("deterministic bench tables", { false, std::string("exception: ") + e.what() });
    report("bundled corpus verdicts", { false, "not run" });
  }
  return all ? 0 : 1;
}
