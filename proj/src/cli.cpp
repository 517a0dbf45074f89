#include "nracegar/cli.h"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "nracegar/exceptions.h"
#include "nracegar/smt2.h"

namespace nracegar {

namespace fs = std::filesystem;

namespace {

std::string read_file(const std::string & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NracegarException("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string trim(const std::string & s)
{
  const char * ws = " \t\r\n";
  size_t b = s.find_first_not_of(ws);
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

bool ends_with(const std::string & s, const std::string & suffix)
{
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::optional<Clock::time_point> deadline_after(double seconds)
{
  if (seconds <= 0) return std::nullopt;
  return Clock::now() + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(seconds));
}

McConfig with_deadline(const RunConfig & cfg)
{
  McConfig mc = cfg.mc;
  mc.deadline = deadline_after(cfg.timeout_s);
  mc.nra.deadline = mc.deadline;
  return mc;
}

void print_value(std::ostream & os, const Term & v, const Model & m)
{
  os << v.name() << " = ";
  if (v.is_bool()) {
    auto it = m.bool_values.find(v);
    os << (it != m.bool_values.end() && it->second ? "true" : "false");
  } else {
    auto it = m.var_values.find(v);
    os << (it != m.var_values.end() ? it->second : Rat(0));
  }
  os << "\n";
}

void print_mc_stats(std::ostream & err, const McStats & st, double seconds)
{
  err << "iterations: " << st.iterations << "\n";
  err << "engine calls: " << st.engine_calls << "\n";
  err << "lemmas: " << st.lemmas_init << " init, " << st.lemmas_trans << " trans\n";
  for (const auto & [kind, n] : st.lemmas_by_kind) err << "lemmas " << to_string(kind) << ": " << n << "\n";
  err << "reduce failures: " << st.reduce_failures << "\n";
  err << "solver checks: " << st.solver_checks << "\n";
  err << "time: " << std::fixed << std::setprecision(3) << seconds << "s\n";
}

void print_smt_stats(std::ostream & err, const SmtVerdict & v, double seconds)
{
  std::map<AxiomKind, size_t> by_kind;
  for (const Axiom & a : v.axioms) ++by_kind[a.kind];
  err << "iterations: " << v.iterations << "\n";
  err << "lemmas: " << v.axioms.size() << "\n";
  for (const auto & [kind, n] : by_kind) err << "lemmas " << to_string(kind) << ": " << n << "\n";
  err << "solver checks: " << v.solver_checks << "\n";
  err << "time: " << std::fixed << std::setprecision(3) << seconds << "s\n";
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int check_vmt(const RunConfig & cfg, std::ostream & out, std::ostream & err)
{
  TransitionSystem ts = parse_vmt(read_file(cfg.input));
  McConfig mc = with_deadline(cfg);
  std::unique_ptr<std::ofstream> log;
  if (!cfg.dump_lemmas.empty()) {
    log = std::make_unique<std::ofstream>(cfg.dump_lemmas);
    mc.lemma_log = log.get();
  }
  const auto t0 = Clock::now();
  McVerdict v = vmt_nra_check(ts, mc);
  out << to_string(v.result) << "\n";
  if (v.result == McVerdict::Result::Unsafe) {
    for (size_t i = 0; i < v.trace.states.size(); ++i) {
      out << "step " << i << ":\n";
      for (const Term & var : ts.state_vars) {
        out << "  ";
        print_value(out, var, v.trace.states[i]);
      }
    }
  }
  if (v.result == McVerdict::Result::Unknown) err << "unknown (" << to_string(v.why) << "): " << v.detail << "\n";
  if (cfg.stats) print_mc_stats(err, v.stats, seconds_since(t0));
  switch (v.result) {
    case McVerdict::Result::Safe: return kExitSafe;
    case McVerdict::Result::Unsafe: return kExitUnsafe;
    case McVerdict::Result::Unknown: return kExitUnknown;
  }
  return kExitError;
}

int check_smt(const RunConfig & cfg, std::ostream & out, std::ostream & err)
{
  Term phi = parse_smt2_formula(read_file(cfg.input));
  NraOptions opts = with_deadline(cfg).nra;
  opts.max_iterations = cfg.mc.max_refinements;
  std::unique_ptr<std::ofstream> log;
  if (!cfg.dump_lemmas.empty()) {
    log = std::make_unique<std::ofstream>(cfg.dump_lemmas);
    opts.lemma_log = log.get();
  }
  const auto t0 = Clock::now();
  SmtVerdict v = smt_nra_check(phi, opts);
  out << to_string(v.result) << "\n";
  if (v.result == CheckResult::Sat) {
    for (const Term & var : vars_of(phi)) print_value(out, var, v.model);
  }
  if (v.result == CheckResult::Unknown) err << "unknown: " << v.reason << "\n";
  if (cfg.stats) print_smt_stats(err, v, seconds_since(t0));
  switch (v.result) {
    case CheckResult::Unsat: return kExitSafe;
    case CheckResult::Sat: return kExitUnsafe;
    case CheckResult::Unknown: return kExitUnknown;
  }
  return kExitError;
}

int run_bench(const RunConfig & cfg, std::ostream & out, std::ostream & err)
{
  std::vector<BenchRow> rows = bench(cfg.input, cfg);
  if (cfg.csv_path.empty()) {
    write_csv(out, rows);
  } else {
    std::ofstream os(cfg.csv_path);
    if (!os) throw NracegarException("cannot write " + cfg.csv_path);
    write_csv(os, rows);
  }
  for (const BenchRow & r : rows) {
    if (!r.error.empty()) err << r.file << ": " << r.error << "\n";
  }
  err << bench_summary(rows) << "\n";
  bool bad = std::any_of(rows.begin(), rows.end(), [](const BenchRow & r) { return r.mismatch(); });
  return bad ? kExitUnsafe : kExitSafe;
}

void add_common_options(CLI::App & app, RunConfig & cfg, std::string & finder, std::string & engine,
                        std::string & constrain, std::string & threshold)
{
  app.add_option("--engine", engine, "Model checking engine: bmc, kind, kind-houdini, external")
      ->capture_default_str();
  app.add_option("--engine-cmd", cfg.mc.engine_cmd, "External checker, run as `cmd file.vmt`");
  app.add_option("--solver-cmd", cfg.mc.nra.solver_cmd, "SMT-LIB2 solver command for LRA+EUF queries")
      ->capture_default_str();
  app.add_option("--nra-solver-cmd", cfg.mc.nra.nra_solver_cmd, "Complete QF_NRA solver used by --model-finder nra");
  app.add_option("--model-finder", finder, "How to complete spurious models: eval, lines, nra")->capture_default_str();
  app.add_option("--timeout", cfg.timeout_s, "Wall-clock limit per problem in seconds (0: none)")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  app.add_option("--max-k", cfg.mc.max_k, "Largest unrolling depth of the engines")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--max-refinements", cfg.mc.max_refinements, "Refinement budget")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_flag("--all-tangent-points", cfg.mc.nra.refine.all_tangent_points,
               "Also instantiate tangent lemmas at (1/v, b) and (a, 1/v)");
  app.add_flag("--axioms-everywhere", cfg.mc.axioms_everywhere,
               "Add initial-state lemmas to the transition relation too");
  app.add_option("--constrain-mode", constrain, "Pin the cex formula to the abstract trace: none, bool, full")
      ->capture_default_str();
  app.add_option("--rounding-threshold", threshold, "Round tangent coordinates above this magnitude")
      ->capture_default_str();
  app.add_flag("!--no-sign-axioms", cfg.mc.nra.abstraction.sign_axioms, "Omit the static sign axioms");
  app.add_flag("!--no-reduce", cfg.mc.reduce, "Keep all lemmas instead of an unsat-core subset");
  app.add_option("--dump-lemmas", cfg.dump_lemmas, "Write every added lemma to this file");
  app.add_flag("--stats", cfg.stats, "Print statistics to stderr");
  app.add_option("--property", cfg.mc.property, "Index of the :invar-property to check");
  app.add_flag("--self-check", cfg.mc.self_check, "Verify lemma untiming and reduction on every refinement");
}

}  // namespace

BenchRow check_file(const std::string & path, const RunConfig & cfg)
{
  BenchRow row;
  row.file = path;
  const auto t0 = Clock::now();
  try {
    if (ends_with(path, ".vmt")) {
      McVerdict v = vmt_nra_check(parse_vmt(read_file(path)), with_deadline(cfg));
      row.verdict = to_string(v.result);
      row.iterations = v.stats.iterations;
      row.lemmas = v.stats.lemmas_init + v.stats.lemmas_trans;
    } else {
      NraOptions opts = with_deadline(cfg).nra;
      opts.max_iterations = cfg.mc.max_refinements;
      SmtVerdict v = smt_nra_check(parse_smt2_formula(read_file(path)), opts);
      row.verdict = to_string(v.result);
      row.iterations = v.iterations;
      row.lemmas = v.axioms.size();
    }
  } catch (const std::exception & e) {
    row.verdict = "ERROR";
    row.error = e.what();
  }
  row.seconds = seconds_since(t0);
  return row;
}

std::vector<BenchRow> bench(const std::string & dir, const RunConfig & cfg)
{
  std::vector<fs::path> files;
  for (const auto & entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (entry.is_regular_file() && (ends_with(name, ".vmt") || ends_with(name, ".smt2"))) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  std::vector<BenchRow> rows(files.size());
  std::atomic<size_t> next{ 0 };
  auto worker = [&] {
    for (size_t i = next++; i < files.size(); i = next++) {
      BenchRow r = check_file(files[i].string(), cfg);
      r.file = files[i].filename().string();
      fs::path sidecar = files[i];
      sidecar += ".expected";
      if (fs::exists(sidecar)) r.expected = trim(read_file(sidecar.string()));
      rows[i] = std::move(r);
    }
  };
  const size_t n = std::max<size_t>(1, std::min(cfg.jobs, files.size()));
  std::vector<std::thread> pool;
  for (size_t i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto & t : pool) t.join();
  return rows;
}

void write_csv(std::ostream & os, const std::vector<BenchRow> & rows)
{
  os << "file,verdict,expected,time,iterations,lemmas,flag\n";
  for (const BenchRow & r : rows) {
    os << r.file << "," << r.verdict << "," << r.expected << "," << std::fixed << std::setprecision(2) << r.seconds
       << "," << r.iterations << "," << r.lemmas << "," << (r.mismatch() ? "MISMATCH" : "") << "\n";
  }
}

std::string bench_summary(const std::vector<BenchRow> & rows)
{
  size_t safe = 0, unsafe = 0, unknown = 0, errors = 0, mismatches = 0;
  double total = 0;
  for (const BenchRow & r : rows) {
    if (r.verdict == "SAFE" || r.verdict == "unsat") ++safe;
    else if (r.verdict == "UNSAFE" || r.verdict == "sat") ++unsafe;
    else if (r.verdict == "ERROR") ++errors;
    else ++unknown;
    if (r.mismatch()) ++mismatches;
    total += r.seconds;
  }
  std::ostringstream os;
  os << "solved: " << safe << " safe, " << unsafe << " unsafe; " << unknown << " unknown, " << errors
     << " errors, " << mismatches << " mismatches in " << rows.size() << " files, " << std::fixed
     << std::setprecision(1) << total << "s";
  return os.str();
}

int run(int argc, const char * const * argv, std::ostream & out, std::ostream & err)
{
  RunConfig cfg;
  std::string finder = "lines";
  std::string engine = "kind-houdini";
  std::string constrain = "none";
  std::string threshold = "1000000";

  CLI::App app{ "Model checker for transition systems over non-linear real arithmetic" };
  app.require_subcommand(1);
  CLI::App * vmt = app.add_subcommand("check-vmt", "Check the invariant property of a VMT file");
  CLI::App * smt = app.add_subcommand("check-smt", "Decide satisfiability of an SMT-LIB2 formula");
  CLI::App * bn = app.add_subcommand("bench", "Check every .vmt/.smt2 file of a directory");
  for (CLI::App * sub : { vmt, smt, bn }) {
    add_common_options(*sub, cfg, finder, engine, constrain, threshold);
  }
  vmt->add_option("file", cfg.input, "VMT file")->required();
  smt->add_option("file", cfg.input, "SMT-LIB2 file")->required();
  bn->add_option("dir", cfg.input, "Benchmark directory")->required()->check(CLI::ExistingDirectory);
  bn->add_option("--jobs", cfg.jobs, "Files checked in parallel")->capture_default_str()->check(CLI::PositiveNumber);
  bn->add_option("--csv", cfg.csv_path, "Write the table here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitError;
  }

  cfg.mode = vmt->parsed() ? Mode::CheckVmt : smt->parsed() ? Mode::CheckSmt : Mode::Bench;
  try {
    if (finder == "eval") {
      cfg.mc.nra.finder = ModelFinder::Eval;
    } else if (finder == "lines") {
      cfg.mc.nra.finder = ModelFinder::Lines;
    } else if (finder == "nra") {
      cfg.mc.nra.finder = ModelFinder::Nra;
    } else {
      throw CLI::ValidationError("--model-finder", "unknown model finder " + finder);
    }
    auto e = parse_engine(engine);
    if (!e) throw CLI::ValidationError("--engine", "unknown engine " + engine);
    cfg.mc.engine = *e;
    if (cfg.mc.engine == EngineKind::External && cfg.mc.engine_cmd.empty()) {
      throw CLI::ValidationError("--engine-cmd", "required by --engine external");
    }
    auto c = parse_constrain_mode(constrain);
    if (!c) throw CLI::ValidationError("--constrain-mode", "unknown mode " + constrain);
    cfg.mc.constrain = *c;
    if (cfg.mc.nra.refine.rounding_threshold.set_str(threshold, 10) != 0
        || cfg.mc.nra.refine.rounding_threshold <= 0) {
      throw CLI::ValidationError("--rounding-threshold", "expects a positive integer");
    }
    if (cfg.mc.nra.solver_cmd.empty()) throw CLI::ValidationError("--solver-cmd", "solver command is empty");
  } catch (const CLI::ValidationError & e) {
    err << e.what() << "\n";
    return kExitError;
  }

  try {
    switch (cfg.mode) {
      case Mode::CheckVmt: return check_vmt(cfg, out, err);
      case Mode::CheckSmt: return check_smt(cfg, out, err);
      case Mode::Bench: return run_bench(cfg, out, err);
    }
  } catch (const ParseError & e) {
    err << "parse error: " << e.what() << "\n";
  } catch (const InternalError & e) {
    err << "internal error: " << e.what() << "\n";
  } catch (const std::exception & e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitError;
}

}  // namespace nracegar
