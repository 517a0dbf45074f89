#include "nracegar/solver.h"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <mutex>

#include "nracegar/exceptions.h"
#include "nracegar/sexpr.h"
#include "nracegar/smt2.h"

#ifndef NRACEGAR_DEFAULT_SOLVER
#define NRACEGAR_DEFAULT_SOLVER "z3 -in -smt2"
#endif

namespace nracegar {

namespace {

constexpr auto kHandshakeTimeout = std::chrono::seconds(30);

void ignore_sigpipe()
{
  static std::once_flag once;
  std::call_once(once, [] { signal(SIGPIPE, SIG_IGN); });
}

}  // namespace

const char * to_string(CheckResult r)
{
  switch (r) {
    case CheckResult::Sat: return "sat";
    case CheckResult::Unsat: return "unsat";
    case CheckResult::Unknown: return "unknown";
  }
  return "?";
}

std::string default_solver_command()
{
  if (const char * env = std::getenv("NRACEGAR_SOLVER"); env && *env) return env;
  return NRACEGAR_DEFAULT_SOLVER;
}

std::optional<Value> parse_model_value(const Sexpr & e)
{
  if (e.is_symbol("true")) return Value(true);
  if (e.is_symbol("false")) return Value(false);
  if (e.type == Sexpr::Type::Numeral || e.type == Sexpr::Type::Decimal) return Value(Rat::parse(e.atom));
  if (!e.is_list()) return std::nullopt;
  if (e.head() == "-" && e.size() == 2) {
    auto v = parse_model_value(e[1]);
    if (!v || !std::holds_alternative<Rat>(*v)) return std::nullopt;
    return Value(-std::get<Rat>(*v));
  }
  if (e.head() == "/" && e.size() == 3) {
    auto n = parse_model_value(e[1]);
    auto d = parse_model_value(e[2]);
    if (!n || !d || !std::holds_alternative<Rat>(*n) || !std::holds_alternative<Rat>(*d)) return std::nullopt;
    if (std::get<Rat>(*d).is_zero()) return std::nullopt;
    return Value(std::get<Rat>(*n) / std::get<Rat>(*d));
  }
  return std::nullopt;
}

SolverSession::SolverSession(Options opts) : opts_(std::move(opts))
{
  if (opts_.command.empty()) throw SolverError("empty solver command");
  ignore_sigpipe();
  spawn();
}

SolverSession::~SolverSession() { kill_child(); }

void SolverSession::spawn()
{
  int in_pipe[2];
  int out_pipe[2];
  if (pipe2(in_pipe, O_CLOEXEC) != 0) throw SolverError(std::string("pipe: ") + std::strerror(errno));
  if (pipe2(out_pipe, O_CLOEXEC) != 0) {
    close(in_pipe[0]);
    close(in_pipe[1]);
    throw SolverError(std::string("pipe: ") + std::strerror(errno));
  }
  pid_t pid = fork();
  if (pid < 0) throw SolverError(std::string("fork: ") + std::strerror(errno));
  if (pid == 0) {
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    int devnull = open("/dev/null", O_WRONLY);
    if (devnull >= 0) dup2(devnull, STDERR_FILENO);
    close(in_pipe[0]);
    close(in_pipe[1]);
    close(out_pipe[0]);
    close(out_pipe[1]);
    std::string cmd = "exec " + opts_.command;
    execl("/bin/sh", "sh", "-c", cmd.c_str(), static_cast<char *>(nullptr));
    _exit(127);
  }
  close(in_pipe[0]);
  close(out_pipe[1]);
  pid_ = pid;
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  buffer_.clear();
  dead_ = false;

  try {
    auto limit = Clock::now() + kHandshakeTimeout;
    auto hs = [&](const std::string & c) {
      send(c);
      std::string r = read_response(limit);
      if (r != "success") throw SolverError("solver handshake failed on " + c + ": " + r);
    };
    hs("(set-option :print-success true)");
    hs("(set-option :global-declarations true)");
    if (opts_.produce_models) hs("(set-option :produce-models true)");
    if (opts_.produce_cores) hs("(set-option :produce-unsat-cores true)");
    hs("(set-logic " + opts_.logic + ")");
    if (opts_.logic.find("UF") != std::string::npos) {
      hs(std::string("(declare-fun ") + kFmulName + " (Real Real) Real)");
    }
  } catch (const SolverError & e) {
    kill_child();
    throw SolverError("cannot start solver '" + opts_.command + "': " + e.what());
  }
}

void SolverSession::kill_child()
{
  if (to_child_ >= 0) close(to_child_);
  if (from_child_ >= 0) close(from_child_);
  to_child_ = from_child_ = -1;
  if (pid_ > 0) {
    kill(pid_, SIGKILL);
    int status;
    while (waitpid(pid_, &status, 0) < 0 && errno == EINTR) {
    }
  }
  pid_ = -1;
  dead_ = true;
}

void SolverSession::ensure_alive()
{
  if (!dead_) return;
  ++num_restarts_;
  spawn();
  for (const std::string & d : declarations_) command(d, false);
  for (size_t level = 0; level < log_.size(); ++level) {
    if (level > 0) command("(push 1)", false);
    for (const std::string & c : log_[level]) command(c, false);
  }
}

void SolverSession::send(const std::string & cmd)
{
  if (const char * trace = std::getenv("NRACEGAR_SOLVER_TRACE"); trace && *trace) {
    if (FILE * f = std::fopen(trace, "a")) {
      std::fprintf(f, "%s\n", cmd.c_str());
      std::fclose(f);
    }
  }
  std::string line = cmd + "\n";
  size_t off = 0;
  while (off < line.size()) {
    ssize_t n = write(to_child_, line.data() + off, line.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      kill_child();
      throw SolverError("solver process closed its input");
    }
    off += static_cast<size_t>(n);
  }
}

std::string SolverSession::read_response(std::optional<Clock::time_point> limit)
{
  while (true) {
    if (size_t len = complete_sexpr_length(buffer_); len > 0) {
      std::string resp = buffer_.substr(0, len);
      buffer_.erase(0, len);
      size_t b = resp.find_first_not_of(" \t\r\n");
      return b == std::string::npos ? std::string() : resp.substr(b);
    }
    int wait_ms = -1;
    if (limit) {
      auto left = std::chrono::duration_cast<std::chrono::milliseconds>(*limit - Clock::now()).count();
      if (left <= 0) {
        kill_child();
        throw SolverError("timeout");
      }
      wait_ms = static_cast<int>(std::min<long long>(left, 1000 * 60 * 60));
    }
    pollfd p{ from_child_, POLLIN, 0 };
    int r = poll(&p, 1, wait_ms);
    if (r < 0) {
      if (errno == EINTR) continue;
      kill_child();
      throw SolverError(std::string("poll: ") + std::strerror(errno));
    }
    if (r == 0) continue;  // re-check the limit
    char buf[65536];
    ssize_t n = read(from_child_, buf, sizeof(buf));
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) {
      // a trailing atom without newline is still a complete answer at EOF
      size_t b = buffer_.find_first_not_of(" \t\r\n");
      std::string rest = b == std::string::npos ? std::string() : buffer_.substr(b);
      kill_child();
      throw SolverError(rest.empty() ? "solver process exited" : "solver process exited after: " + rest);
    }
    buffer_.append(buf, static_cast<size_t>(n));
  }
}

std::optional<Clock::time_point> SolverSession::limit_for_call(bool check) const
{
  std::optional<Clock::time_point> limit = deadline_;
  if (check && call_timeout_) {
    auto t = Clock::now() + *call_timeout_;
    if (!limit || t < *limit) limit = t;
  }
  return limit;
}

void SolverSession::command(const std::string & cmd, bool log)
{
  send(cmd);
  std::string r = read_response(limit_for_call(false));
  if (r != "success") throw SolverError("solver rejected " + cmd.substr(0, 200) + ": " + r);
  if (log) log_.back().push_back(cmd);
}

void SolverSession::track(const Term & f)
{
  for (const Term & v : vars_of(f)) {
    if (!declared_.insert(v).second) continue;
    std::string d = "(declare-fun " + smt2_symbol(v) + " () " + to_string(v.sort()) + ")";
    ensure_alive();
    command(d, false);
    declarations_.push_back(d);
  }
  auto add = [&](const Term & t) {
    if (tracked_set_.insert(t).second) tracked_.push_back(t);
  };
  for (const Term & v : vars_of(f)) add(v);
  for (const Term & m : fmuls_of(f)) add(m);
}

void SolverSession::assert_formula(const Term & f)
{
  if (!f.is_bool()) throw SortError("asserting a non-Bool term");
  ensure_alive();
  track(f);
  command("(assert " + to_smt2(f) + ")");
}

void SolverSession::assert_named(const std::string & label, const Term & f)
{
  if (!f.is_bool()) throw SortError("asserting a non-Bool term");
  ensure_alive();
  track(f);
  std::string wire = "lbl#" + std::to_string(next_label_++);
  wire_to_label_[wire] = label;
  command("(assert (! " + to_smt2(f) + " :named " + smt2_quote(wire) + "))");
}

void SolverSession::push()
{
  ensure_alive();
  command("(push 1)", false);
  log_.emplace_back();
}

void SolverSession::pop(size_t n)
{
  if (n > depth()) throw SolverError("pop below the base level");
  if (n == 0) return;
  ensure_alive();
  command("(pop " + std::to_string(n) + ")", false);
  log_.resize(log_.size() - n);
}

CheckResult SolverSession::check_sat()
{
  ++num_checks_;
  reason_.clear();
  try {
    ensure_alive();
    send("(check-sat)");
    std::string r = read_response(limit_for_call(true));
    if (r == "sat") return CheckResult::Sat;
    if (r == "unsat") return CheckResult::Unsat;
    if (r == "unknown") {
      send("(get-info :reason-unknown)");
      std::string why = read_response(limit_for_call(false));
      auto e = parse_sexprs(why);
      reason_ = e.size() == 1 && e[0].is_list() && e[0].size() == 2 ? e[0][1].atom : why;
      if (reason_.empty()) reason_ = "solver returned unknown";
      return CheckResult::Unknown;
    }
    reason_ = "unexpected check-sat response: " + r;
    return CheckResult::Unknown;
  } catch (const SolverError & e) {
    reason_ = e.what();
    return CheckResult::Unknown;
  }
}

Model SolverSession::model() { return model(tracked_); }

Model SolverSession::model(const TermVec & terms)
{
  Model m;
  if (terms.empty()) return m;
  std::string cmd = "(get-value (";
  for (const Term & t : terms) cmd += (t.is_var() ? smt2_symbol(t) : to_smt2(t)) + " ";
  cmd += "))";
  send(cmd);
  std::string r = read_response(limit_for_call(false));
  std::vector<Sexpr> e;
  try {
    e = parse_sexprs(r);
  } catch (const ParseError &) {
    throw SolverError("unparsable get-value response: " + r.substr(0, 200));
  }
  if (e.size() != 1 || !e[0].is_list() || e[0].size() != terms.size()) {
    throw SolverError("unexpected get-value response: " + r.substr(0, 200));
  }
  for (size_t i = 0; i < terms.size(); ++i) {
    const Sexpr & pair = e[0][i];
    if (!pair.is_list() || pair.size() != 2) throw SolverError("malformed get-value entry: " + pair.to_string());
    std::optional<Value> v;
    try {
      v = parse_model_value(pair[1]);
    } catch (const std::invalid_argument &) {
    }
    if (!v) throw SolverError("unsupported model value: " + pair[1].to_string());
    const Term & t = terms[i];
    if (t.is_bool() != std::holds_alternative<bool>(*v)) throw SolverError("model value of wrong sort for " + to_string(t));
    if (t.kind() == Kind::Fmul) {
      m.set_fmul(t, std::get<Rat>(*v));
    } else if (t.is_bool()) {
      m.set(t, std::get<bool>(*v));
    } else {
      m.set(t, std::get<Rat>(*v));
    }
  }
  return m;
}

std::vector<std::string> SolverSession::unsat_core()
{
  send("(get-unsat-core)");
  std::string r = read_response(limit_for_call(false));
  auto e = parse_sexprs(r);
  if (e.size() != 1 || !e[0].is_list()) throw SolverError("unexpected get-unsat-core response: " + r.substr(0, 200));
  std::vector<std::string> out;
  for (const Sexpr & s : e[0].list) {
    auto it = wire_to_label_.find(s.atom);
    if (it == wire_to_label_.end()) throw SolverError("unknown core label " + s.atom);
    out.push_back(it->second);
  }
  return out;
}

SolverVerdict SolverSession::check(const std::vector<std::pair<std::string, Term>> & assertions)
{
  SolverVerdict v;
  const size_t d0 = depth();
  try {
    push();
    TermVec terms;
    std::set<Term, TermLess> seen;
    for (const auto & [label, f] : assertions) {
      assert_named(label, f);
      for (const Term & t : vars_of(f)) {
        if (seen.insert(t).second) terms.push_back(t);
      }
      for (const Term & t : fmuls_of(f)) {
        if (seen.insert(t).second) terms.push_back(t);
      }
    }
    v.result = check_sat();
    if (v.result == CheckResult::Sat) {
      v.model = model(terms);
    } else if (v.result == CheckResult::Unsat && opts_.produce_cores) {
      v.core = unsat_core();
    } else {
      v.reason = reason_;
    }
    pop();
  } catch (const SolverError & e) {
    v = SolverVerdict{};
    v.reason = e.what();
    if (depth() > d0) {
      if (dead_) {
        log_.resize(d0 + 1);
      } else {
        try {
          pop(depth() - d0);
        } catch (const SolverError &) {
          kill_child();
          log_.resize(d0 + 1);
        }
      }
    }
  }
  return v;
}

}  // namespace nracegar
