/*! \file sexpr.h
** \brief SMT-LIB2 s-expression reader.
**/

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace nracegar {

struct Sexpr
{
  enum class Type
  {
    Symbol,
    Keyword,
    Numeral,
    Decimal,
    String,
    List
  };

  Type type = Type::List;
  std::string atom;  // symbol text without |bars|, keyword with its ':'
  std::vector<Sexpr> list;
  int line = 0;
  int column = 0;

  bool is_list() const { return type == Type::List; }
  bool is_atom() const { return type != Type::List; }
  bool is_symbol() const { return type == Type::Symbol; }
  bool is_symbol(std::string_view s) const { return type == Type::Symbol && atom == s; }
  bool is_keyword(std::string_view s) const { return type == Type::Keyword && atom == s; }
  /** Head symbol of a non-empty list, or "" */
  const std::string & head() const;
  size_t size() const { return list.size(); }
  const Sexpr & operator[](size_t i) const { return list[i]; }

  std::string to_string() const;
};

/** Parses every top-level s-expression in `text`. Throws ParseError
 *  carrying line and column.
 */
std::vector<Sexpr> parse_sexprs(std::string_view text);

/** Length of the first complete s-expression in `buf` (including leading
 *  whitespace/comments), or 0 if the buffer does not yet hold one.
 */
size_t complete_sexpr_length(std::string_view buf);

}  // namespace nracegar
