#pragma once

#include <stdexcept>
#include <string>

namespace nracegar {

class NracegarException : public std::runtime_error
{
 public:
  explicit NracegarException(const std::string & msg) : std::runtime_error(msg) {}
};

/** Ill-sorted term construction or substitution. */
class SortError : public NracegarException
{
 public:
  using NracegarException::NracegarException;
};

/** Evaluation hit a variable or fmul application without a value. */
class UnassignedSymbolError : public NracegarException
{
 public:
  explicit UnassignedSymbolError(const std::string & symbol)
      : NracegarException("unassigned symbol: " + symbol), symbol_(symbol)
  {
  }
  const std::string & symbol() const { return symbol_; }

 private:
  std::string symbol_;
};

class ParseError : public NracegarException
{
 public:
  ParseError(const std::string & msg, int line, int column)
      : NracegarException(line > 0 ? std::to_string(line) + ":" + std::to_string(column) + ": " + msg
                                   : msg),
        line_(line),
        column_(column)
  {
  }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

class SolverError : public NracegarException
{
 public:
  using NracegarException::NracegarException;
};

/** Broken internal invariant (e.g. a counterexample that does not replay). */
class InternalError : public NracegarException
{
 public:
  using NracegarException::NracegarException;
};

}  // namespace nracegar
