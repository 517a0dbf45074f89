#include "nracegar/rational.h"

#include <cctype>
#include <functional>
#include <ostream>
#include <stdexcept>

namespace nracegar {

Rat::Rat(long num, long den) : Rat(mpz_class(num), mpz_class(den)) {}

Rat::Rat(const mpz_class & num, const mpz_class & den)
{
  if (den == 0) {
    throw std::invalid_argument("rational with zero denominator");
  }
  v_ = mpq_class(num, den);
  v_.canonicalize();
}

Rat Rat::parse(std::string_view text)
{
  auto bad = [&]() {
    return std::invalid_argument("malformed rational literal '" + std::string(text) + "'");
  };
  if (text.empty()) throw bad();

  std::string s(text);
  bool neg = false;
  if (s[0] == '-') {
    neg = true;
    s.erase(0, 1);
  }
  if (s.empty()) throw bad();

  Rat r;
  if (auto slash = s.find('/'); slash != std::string::npos) {
    std::string n = s.substr(0, slash), d = s.substr(slash + 1);
    if (n.empty() || d.empty()) throw bad();
    for (char c : n + d) {
      if (!std::isdigit(static_cast<unsigned char>(c))) throw bad();
    }
    r = Rat(mpz_class(n), mpz_class(d));
  } else if (auto dot = s.find('.'); dot != std::string::npos) {
    std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
    if (ip.empty() && fp.empty()) throw bad();
    for (char c : ip + fp) {
      if (!std::isdigit(static_cast<unsigned char>(c))) throw bad();
    }
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, fp.size());
    mpz_class num((ip.empty() ? "0" : ip) + fp);
    r = Rat(num, den);
  } else {
    for (char c : s) {
      if (!std::isdigit(static_cast<unsigned char>(c))) throw bad();
    }
    r = Rat(mpz_class(s), mpz_class(1));
  }
  return neg ? -r : r;
}

Rat Rat::floor() const
{
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
  return Rat(q, mpz_class(1));
}

Rat Rat::ceil() const
{
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
  return Rat(q, mpz_class(1));
}

Rat Rat::inverse() const
{
  if (is_zero()) throw std::domain_error("inverse of zero");
  return Rat(v_.get_den(), v_.get_num());
}

bool Rat::exceeds(const mpz_class & bound) const
{
  return ::abs(v_.get_num()) > bound || v_.get_den() > bound;
}

size_t Rat::hash() const
{
  // low limbs are enough for hashing; equality is checked separately
  size_t h = mpz_get_ui(v_.get_num_mpz_t()) * 0x9e3779b97f4a7c15ULL;
  h ^= static_cast<size_t>(sgn(v_) + 1) << 7;
  h ^= mpz_get_ui(v_.get_den_mpz_t()) + (h << 6) + (h >> 2);
  return h;
}

Rat operator/(const Rat & a, const Rat & b)
{
  if (b.is_zero()) throw std::domain_error("division by zero");
  return Rat(mpq_class(a.v_ / b.v_));
}

std::ostream & operator<<(std::ostream & os, const Rat & r) { return os << r.to_string(); }

}  // namespace nracegar
