/*! \file rational.h
** \brief Exact arbitrary-precision rationals in canonical form.
**/

#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace nracegar {

/** An exact rational number. The value is always kept canonical:
 *  gcd(|num|, den) = 1 and den > 0.
 */
class Rat
{
 public:
  Rat() = default;
  Rat(long v) : v_(v) {}
  Rat(int v) : v_(v) {}
  Rat(long num, long den);
  Rat(const mpz_class & num, const mpz_class & den);
  explicit Rat(const mpq_class & q) : v_(q) { v_.canonicalize(); }

  /** Parses "n", "-n", "p/q" and decimal literals such as "-1.25"
   *  (converted exactly). Throws std::invalid_argument on junk.
   */
  static Rat parse(std::string_view text);

  mpz_class numerator() const { return v_.get_num(); }
  mpz_class denominator() const { return v_.get_den(); }
  const mpq_class & get_mpq() const { return v_; }

  bool is_integer() const { return v_.get_den() == 1; }
  bool is_zero() const { return sgn(v_) == 0; }
  int sign() const { return sgn(v_); }

  Rat floor() const;
  Rat ceil() const;
  Rat abs() const { return Rat(::abs(v_)); }
  Rat inverse() const;

  /** True when |numerator| or denominator exceeds the given bound. */
  bool exceeds(const mpz_class & bound) const;

  std::string to_string() const { return v_.get_str(); }
  size_t hash() const;

  Rat operator-() const { return Rat(mpq_class(-v_)); }
  friend Rat operator+(const Rat & a, const Rat & b) { return Rat(mpq_class(a.v_ + b.v_)); }
  friend Rat operator-(const Rat & a, const Rat & b) { return Rat(mpq_class(a.v_ - b.v_)); }
  friend Rat operator*(const Rat & a, const Rat & b) { return Rat(mpq_class(a.v_ * b.v_)); }
  friend Rat operator/(const Rat & a, const Rat & b);
  Rat & operator+=(const Rat & o) { v_ += o.v_; return *this; }
  Rat & operator*=(const Rat & o) { v_ *= o.v_; return *this; }

  friend bool operator==(const Rat & a, const Rat & b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const Rat & a, const Rat & b)
  {
    int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  mpq_class v_;
};

std::ostream & operator<<(std::ostream & os, const Rat & r);

}  // namespace nracegar
