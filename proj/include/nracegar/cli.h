/*! \file cli.h
** \brief Command-line front end and benchmark harness.
**/

#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "nracegar/mc_cegar.h"

namespace nracegar {

enum class Mode
{
  CheckVmt,
  CheckSmt,
  Bench
};

struct RunConfig
{
  Mode mode = Mode::CheckVmt;
  std::string input;  // file, or directory for bench
  McConfig mc;        // mc.nra carries the settings of the SMT loop
  double timeout_s = 600;
  std::string dump_lemmas;
  bool stats = false;
  size_t jobs = 1;
  std::string csv_path;  // bench: write here instead of stdout
};

/** Exit codes. */
inline constexpr int kExitSafe = 0;     // SAFE / unsat
inline constexpr int kExitUnsafe = 1;   // UNSAFE / sat / bench mismatch
inline constexpr int kExitUnknown = 2;  // UNKNOWN / unknown
inline constexpr int kExitError = 3;    // usage, parse or internal error

int run(int argc, const char * const * argv, std::ostream & out, std::ostream & err);

struct BenchRow
{
  std::string file;  // relative to the bench directory
  std::string verdict;
  std::string expected;  // empty without a sidecar
  double seconds = 0;
  size_t iterations = 0;
  size_t lemmas = 0;
  std::string error;

  bool mismatch() const { return !expected.empty() && expected != verdict; }
};

/** Checks every .vmt and .smt2 file of `dir` (sorted by name), using up to
 *  `jobs` worker threads. `<file>.expected` holds the expected verdict.
 */
std::vector<BenchRow> bench(const std::string & dir, const RunConfig & cfg);

/** file,verdict,expected,time,iterations,lemmas,flag */
void write_csv(std::ostream & os, const std::vector<BenchRow> & rows);

/** `solved: S safe, U unsafe, ...` over the rows. */
std::string bench_summary(const std::vector<BenchRow> & rows);

/** Runs a single file (.vmt or .smt2) and fills verdict and counters. */
BenchRow check_file(const std::string & path, const RunConfig & cfg);

}  // namespace nracegar
