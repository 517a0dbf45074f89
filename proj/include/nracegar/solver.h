/*! \file solver.h
** \brief An external SMT-LIB2 solver driven over pipes.
**
** The session keeps a replay log of declarations and assertions so that a
** solver killed on timeout can be restarted transparently at the same
** assertion-stack depth.
**/

#pragma once

#include <chrono>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "nracegar/sexpr.h"
#include "nracegar/term.h"
#include "nracegar/term_ops.h"

namespace nracegar {

using Clock = std::chrono::steady_clock;

enum class CheckResult
{
  Sat,
  Unsat,
  Unknown
};

const char * to_string(CheckResult r);

struct SolverVerdict
{
  CheckResult result = CheckResult::Unknown;
  Model model;                     // sat
  std::vector<std::string> core;   // unsat, user labels
  std::string reason;              // unknown
};

/** NRACEGAR_SOLVER from the environment, else the build-time default. */
std::string default_solver_command();

class SolverSession
{
 public:
  struct Options
  {
    std::string command;
    std::string logic = "QF_UFLRA";
    bool produce_models = true;
    bool produce_cores = true;
  };

  explicit SolverSession(Options opts);
  ~SolverSession();
  SolverSession(const SolverSession &) = delete;
  SolverSession & operator=(const SolverSession &) = delete;

  /** Hard wall-clock limit shared by every call of this session. */
  void set_deadline(std::optional<Clock::time_point> d) { deadline_ = d; }
  /** Optional limit for each individual check-sat. */
  void set_call_timeout(std::optional<std::chrono::milliseconds> t) { call_timeout_ = t; }

  void assert_formula(const Term & f);
  /** Named assertion; the label is reported back in unsat cores. */
  void assert_named(const std::string & label, const Term & f);
  void push();
  void pop(size_t n = 1);
  size_t depth() const { return log_.size() - 1; }

  CheckResult check_sat();
  /** Values of every variable and fmul application asserted so far. */
  Model model();
  /** Values of the given variables / fmul applications only. */
  Model model(const TermVec & terms);
  std::vector<std::string> unsat_core();
  const std::string & reason_unknown() const { return reason_; }

  /** One-shot check: push, assert labelled formulas, check, extract, pop. */
  SolverVerdict check(const std::vector<std::pair<std::string, Term>> & assertions);

  size_t num_checks() const { return num_checks_; }
  size_t num_restarts() const { return num_restarts_; }

 private:
  void spawn();
  void kill_child();
  void ensure_alive();
  void send(const std::string & cmd);
  std::string read_response(std::optional<Clock::time_point> limit);
  /** Sends a command that must answer `success`. */
  void command(const std::string & cmd, bool log = true);
  void track(const Term & f);
  std::optional<Clock::time_point> limit_for_call(bool check) const;

  Options opts_;
  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
  bool dead_ = true;

  std::vector<std::vector<std::string>> log_{ 1 };
  std::vector<std::string> declarations_;
  std::set<Term, TermLess> declared_;
  TermVec tracked_;  // variables and fmul applications, first-seen order
  std::set<Term, TermLess> tracked_set_;
  std::map<std::string, std::string> wire_to_label_;
  size_t next_label_ = 0;

  std::optional<Clock::time_point> deadline_;
  std::optional<std::chrono::milliseconds> call_timeout_;
  std::string reason_;
  size_t num_checks_ = 0;
  size_t num_restarts_ = 0;
};

/** Parses a model value: numerals, decimals, (- v), (/ v v), true/false. */
std::optional<Value> parse_model_value(const Sexpr & e);

}  // namespace nracegar
