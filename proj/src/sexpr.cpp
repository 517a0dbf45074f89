#include "nracegar/sexpr.h"

#include <cctype>

#include "nracegar/exceptions.h"

namespace nracegar {

namespace {

bool is_symbol_char(char c)
{
  if (std::isalnum(static_cast<unsigned char>(c))) return true;
  switch (c) {
    case '~': case '!': case '@': case '$': case '%': case '^': case '&': case '*':
    case '_': case '-': case '+': case '=': case '<': case '>': case '.': case '?':
    case '/': case '\'':
      return true;
    default: return false;
  }
}

class Lexer
{
 public:
  explicit Lexer(std::string_view s) : s_(s) {}

  std::vector<Sexpr> all()
  {
    std::vector<Sexpr> out;
    skip();
    while (pos_ < s_.size()) {
      out.push_back(read());
      skip();
    }
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string & msg) { throw ParseError(msg, line_, col_); }

  char peek() const { return s_[pos_]; }

  void advance()
  {
    if (s_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip()
  {
    while (pos_ < s_.size()) {
      char c = peek();
      if (c == ';') {
        while (pos_ < s_.size() && peek() != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  Sexpr read()
  {
    Sexpr e;
    e.line = line_;
    e.column = col_;
    char c = peek();
    if (c == '(') {
      advance();
      e.type = Sexpr::Type::List;
      skip();
      while (true) {
        if (pos_ >= s_.size()) throw ParseError("unbalanced '('", e.line, e.column);
        if (peek() == ')') {
          advance();
          break;
        }
        e.list.push_back(read());
        skip();
      }
      return e;
    }
    if (c == ')') fail("unexpected ')'");
    if (c == '|') {
      advance();
      e.type = Sexpr::Type::Symbol;
      while (pos_ < s_.size() && peek() != '|') {
        e.atom.push_back(peek());
        advance();
      }
      if (pos_ >= s_.size()) throw ParseError("unterminated quoted symbol", e.line, e.column);
      advance();
      return e;
    }
    if (c == '"') {
      advance();
      e.type = Sexpr::Type::String;
      while (true) {
        if (pos_ >= s_.size()) throw ParseError("unterminated string literal", e.line, e.column);
        if (peek() == '"') {
          advance();
          if (pos_ < s_.size() && peek() == '"') {  // "" escapes a quote
            e.atom.push_back('"');
            advance();
            continue;
          }
          break;
        }
        e.atom.push_back(peek());
        advance();
      }
      return e;
    }
    while (pos_ < s_.size() && (is_symbol_char(peek()) || peek() == ':' || peek() == '#')) {
      e.atom.push_back(peek());
      advance();
    }
    if (e.atom.empty()) fail(std::string("unexpected character '") + c + "'");
    if (e.atom[0] == ':') {
      e.type = Sexpr::Type::Keyword;
    } else if (std::isdigit(static_cast<unsigned char>(e.atom[0]))) {
      size_t dots = 0;
      for (char d : e.atom) {
        if (d == '.') {
          ++dots;
        } else if (!std::isdigit(static_cast<unsigned char>(d))) {
          throw ParseError("malformed numeral '" + e.atom + "'", e.line, e.column);
        }
      }
      if (dots > 1 || e.atom.back() == '.') {
        throw ParseError("malformed decimal '" + e.atom + "'", e.line, e.column);
      }
      e.type = dots ? Sexpr::Type::Decimal : Sexpr::Type::Numeral;
    } else {
      e.type = Sexpr::Type::Symbol;
    }
    return e;
  }

  std::string_view s_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

const std::string & Sexpr::head() const
{
  static const std::string empty;
  if (type != Type::List || list.empty() || list[0].type != Type::Symbol) return empty;
  return list[0].atom;
}

std::string Sexpr::to_string() const
{
  switch (type) {
    case Type::List: {
      std::string s = "(";
      for (size_t i = 0; i < list.size(); ++i) {
        if (i) s += ' ';
        s += list[i].to_string();
      }
      return s + ")";
    }
    case Type::String: return "\"" + atom + "\"";
    case Type::Symbol: {
      bool simple = !atom.empty();
      for (char c : atom) simple = simple && is_symbol_char(c);
      return simple ? atom : "|" + atom + "|";
    }
    default: return atom;
  }
}

std::vector<Sexpr> parse_sexprs(std::string_view text) { return Lexer(text).all(); }

size_t complete_sexpr_length(std::string_view buf)
{
  size_t i = 0;
  int depth = 0;
  bool started = false;
  while (i < buf.size()) {
    char c = buf[i];
    if (c == ';') {
      while (i < buf.size() && buf[i] != '\n') ++i;
      continue;
    }
    if (c == '|' || c == '"') {
      size_t j = buf.find(c, i + 1);
      if (c == '"') {
        while (j != std::string_view::npos && j + 1 < buf.size() && buf[j + 1] == '"') {
          j = buf.find('"', j + 2);
        }
      }
      if (j == std::string_view::npos) return 0;
      i = j + 1;
      started = true;
      if (depth == 0) return i;
      continue;
    }
    if (c == '(') {
      ++depth;
      started = true;
    } else if (c == ')') {
      --depth;
      if (depth <= 0) return i + 1;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      if (started && depth == 0) return i;
    } else {
      started = true;
    }
    ++i;
  }
  return 0;  // an atom without trailing whitespace may still be growing
}

}  // namespace nracegar
