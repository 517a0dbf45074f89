/*! \file smt2.h
** \brief SMT-LIB2 term parsing and printing.
**
** Printed variable names encode their frame: `x` (current), `x.next`
** (next state) and `x@3` (unrolling index 3). The generic formula parser
** decodes the same convention, so printing followed by parsing is the
** identity on canonical terms.
**/

#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nracegar/sexpr.h"
#include "nracegar/term.h"

namespace nracegar {

/** The name of the uninterpreted multiplication symbol. */
inline constexpr const char * kFmulName = "fmul";

/** Rational constant: `3`, `(- 3)`, `(/ 3 2)`, `(- (/ 3 2))`. */
std::string smt2_rational(const Rat & r);
/** The SMT-LIB2 symbol for a variable (frame-encoded, quoted if needed). */
std::string smt2_symbol(const Term & var);
/** Quotes `name` with |bars| unless it is a legal simple symbol. */
std::string smt2_quote(const std::string & name);
/** Term in SMT-LIB2 syntax. */
std::string to_smt2(const Term & t);

/** Full script: fmul declaration (if used), one declare-fun per free
 *  variable, and a single assert.
 */
std::string serialize_smt2(const Term & f);

/** Decodes `x.next` / `x@3` printed names. */
Term decode_var(const std::string & printed, Sort sort);

/** Parses a formula given either as a bare term or as a script of
 *  declarations and asserts (conjoined). Undeclared symbols default to
 *  Bool in Boolean positions and Real elsewhere.
 */
Term parse_smt2_formula(std::string_view text);

/** Term-level parser with a symbol table; shared by the formula and VMT
 *  front ends.
 */
class Smt2Context
{
 public:
  struct Options
  {
    bool allow_undeclared = false;
    bool decode_frames = true;
    bool implicit_fmul = true;
  };

  Smt2Context() = default;
  explicit Smt2Context(Options opts) : opts_(opts) {}

  void bind(const std::string & name, const Term & t) { symbols_[name] = t; }
  std::optional<Term> lookup(const std::string & name) const;
  void declare_fmul() { fmul_declared_ = true; }
  bool fmul_declared() const { return fmul_declared_; }

  /** Handles (declare-fun ...) / (declare-const ...); returns the variable. */
  Term declare(const Sexpr & cmd);
  /** Handles (define-fun name ((p S) ...) S body); body is kept unparsed. */
  void define(const Sexpr & cmd);
  bool is_defined(const std::string & name) const { return macros_.count(name) > 0; }

  Term parse_term(const Sexpr & e, std::optional<Sort> expected = std::nullopt);

  /** Strips (! e :k v ...) returning e and the attribute list. */
  static const Sexpr & strip_annotations(const Sexpr & e, std::vector<std::pair<std::string, Sexpr>> * attrs);

  const std::vector<Term> & undeclared() const { return undeclared_; }

 private:
  struct Macro
  {
    std::vector<std::pair<std::string, Sort>> params;
    Sort result;
    Sexpr body;
  };

  Term parse_app(const Sexpr & e, std::optional<Sort> expected);
  Term parse_symbol(const Sexpr & e, std::optional<Sort> expected);
  std::vector<Term> parse_args(const Sexpr & e, size_t from, std::optional<Sort> sort);
  std::vector<Term> parse_same_sort(const Sexpr & e, size_t from, std::optional<Sort> hint);
  bool is_unresolved_symbol(const Sexpr & e) const;

  Options opts_;
  std::map<std::string, Term> symbols_;
  std::map<std::string, Macro> macros_;
  std::vector<std::map<std::string, Term>> scopes_;
  std::vector<Term> undeclared_;
  bool fmul_declared_ = false;
};

Sort parse_sort(const Sexpr & e);

}  // namespace nracegar
