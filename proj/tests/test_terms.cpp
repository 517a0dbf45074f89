#include <gtest/gtest.h>

#include "nracegar/exceptions.h"
#include "nracegar/term.h"
#include "nracegar/term_ops.h"
#include "oracles.h"

using namespace nracegar;

namespace {

Term real(const std::string & n, Frame f = Frame::current()) { return mk_var(n, Sort::Real, f); }
Term num(long p, long q = 1) { return mk_real(Rat(p, q)); }

}  // namespace

TEST(Rat, Canonical)
{
  EXPECT_EQ(Rat(2, 4), Rat(1, 2));
  EXPECT_EQ(Rat(3, -6).numerator(), -1);
  EXPECT_EQ(Rat(3, -6).denominator(), 2);
  EXPECT_EQ(Rat::parse("-1.25"), Rat(-5, 4));
  EXPECT_EQ(Rat::parse("6/4"), Rat(3, 2));
  EXPECT_EQ(Rat(-7, 2).floor(), Rat(-4));
  EXPECT_EQ(Rat(-7, 2).ceil(), Rat(-3));
  EXPECT_THROW(Rat::parse("1/x"), std::invalid_argument);
}

TEST(Evaluate, Examples)
{
  Term x = real("x"), y = real("y");
  Model m;
  m.set(x, Rat(2));
  m.set(y, Rat(3));
  EXPECT_EQ(evaluate_real(mk_add({ mk_scale(3, x), mk_scale(2, y), num(-6) }), m), Rat(6));

  Model m2;
  m2.set(x, Rat(2));
  m2.set(y, Rat(2));
  m2.set_fmul(mk_fmul(x, y), Rat(5));
  EXPECT_TRUE(evaluate_bool(mk_ge(mk_fmul(x, y), mk_add(x, y)), m2));

  Model m3;
  m3.set(x, Rat(-7, 2));
  EXPECT_EQ(evaluate_real(mk_ite(mk_lt(x, num(0)), mk_neg(x), x), m3), Rat(7, 2));
}

TEST(Evaluate, FmulIsLookedUp)
{
  Term x = real("x"), y = real("y");
  Model m;
  m.set(x, Rat(2));
  m.set(y, Rat(3));
  m.set_fmul(mk_fmul(x, y), Rat(-1));
  EXPECT_EQ(evaluate_real(mk_fmul(x, y), m), Rat(-1));
  EXPECT_EQ(evaluate_real(mk_mul(x, y), m), Rat(6));
}

TEST(Evaluate, UnassignedNamesSymbol)
{
  Term x = real("x"), q = real("qq");
  Model m;
  m.set(x, Rat(1));
  try {
    evaluate(mk_add(x, q), m);
    FAIL() << "expected an error";
  } catch (const UnassignedSymbolError & e) {
    EXPECT_NE(std::string(e.what()).find("qq"), std::string::npos);
  }
}

TEST(Substitute, Examples)
{
  Term x = real("x"), y = real("y"), xn = real("x", Frame::next());
  EXPECT_EQ(substitute(mk_add(x, y), { { x, xn } }), mk_add(xn, y));
  EXPECT_EQ(substitute(mk_fmul(y, x), {}), mk_fmul(x, y));
  EXPECT_EQ(mk_fmul(y, x)[0], x);
  EXPECT_EQ(substitute(mk_gt(x, num(0)), { { x, x } }), mk_gt(x, num(0)));
  EXPECT_THROW(substitute(x, { { x, mk_var("b", Sort::Bool) } }), SortError);
}

TEST(Substitute, CanonicalOrderAfterRenaming)
{
  Term a = real("a"), b = real("b"), z = real("z");
  // fmul(a, b) with a -> z must come out as fmul(b, z)
  Term t = substitute(mk_fmul(a, b), { { a, z } });
  EXPECT_EQ(t, mk_fmul(b, z));
  EXPECT_EQ(t[0], b);
}

TEST(Substitute, CommutesWithEvaluate)
{
  oracle::Rng rng(7);
  TermVec xs = oracle::real_vars(3);
  TermVec bs = { mk_var("p", Sort::Bool) };
  for (int i = 0; i < 300; ++i) {
    Term f = oracle::random_formula(rng, xs, bs, 3);
    // x_i -> (c_i * x_j + d_i)
    Substitution s;
    Model inner;
    for (const Term & x : xs) {
      s[x] = mk_add(mk_scale(rng.rational(5, 3), rng.pick(xs)), mk_real(rng.rational(5, 3)));
      inner.set(x, rng.rational(10, 4));
    }
    inner.set(bs[0], rng.coin());
    Model outer = inner;
    for (const Term & x : xs) outer.set(x, Rat(oracle::eval_real(s.at(x), inner)));
    EXPECT_EQ(oracle::eval_bool(substitute(f, s), inner), oracle::eval_bool(f, outer));
  }
}

TEST(Constants, Folding)
{
  Term x = real("x");
  EXPECT_EQ(mk_add(num(1), num(2)), num(3));
  EXPECT_EQ(mk_scale(2, mk_scale(3, x)), mk_scale(6, x));
  EXPECT_EQ(mk_mul(num(2), x).kind(), Kind::Scale);
  EXPECT_EQ(mk_mul(x, real("y")).kind(), Kind::Mul);
  EXPECT_EQ(mk_add(x, real("y")), mk_add(real("y"), x));
  EXPECT_EQ(mk_add(mk_add(x, num(1)), real("y")), mk_add({ x, real("y"), num(1) }));
}

TEST(Timing, Examples)
{
  Term x = real("x"), xn = real("x", Frame::next());
  Term x3 = real("x", Frame::at(3)), x4 = real("x", Frame::at(4));
  EXPECT_EQ(at_time(mk_eq(xn, mk_add(x, num(1))), 3), mk_eq(x4, mk_add(x3, num(1))));
  EXPECT_EQ(untime(mk_eq(x4, mk_add(x3, num(1))), 3), mk_eq(xn, mk_add(x, num(1))));
  EXPECT_EQ(at_time(mk_ge(x, num(2)), 0), mk_ge(real("x", Frame::at(0)), num(2)));
  EXPECT_THROW(untime(mk_eq(real("x", Frame::at(5)), x3), 3), SortError);
}

TEST(Timing, RoundTrip)
{
  oracle::Rng rng(11);
  TermVec reals = { real("a"), real("b"), real("a", Frame::next()), real("b", Frame::next()) };
  TermVec bools = { mk_var("p", Sort::Bool), mk_var("p", Sort::Bool, Frame::next()) };
  for (int i = 0; i < 500; ++i) {
    Term f = oracle::random_formula(rng, reals, bools, 4);
    int k = static_cast<int>(rng.uniform(0, 9));
    EXPECT_EQ(untime(at_time(f, k), k), f);
  }
}

TEST(Collect, AtomsAndFmuls)
{
  Term x = real("x"), y = real("y");
  TermVec atoms = atoms_of(mk_and(mk_gt(x, num(0)), mk_not(mk_eq(y, num(1)))));
  ASSERT_EQ(atoms.size(), 2u);
  EXPECT_NE(std::find(atoms.begin(), atoms.end(), mk_gt(x, num(0))), atoms.end());
  EXPECT_NE(std::find(atoms.begin(), atoms.end(), mk_eq(y, num(1))), atoms.end());

  Term f = mk_fmul(x, y);
  EXPECT_EQ(fmuls_of(mk_ge(mk_add(f, mk_fmul(y, x)), num(0))), TermVec{ f });
  EXPECT_TRUE(fmuls_of(mk_ge(mk_add(x, mk_scale(2, y)), num(0))).empty());
}

TEST(Collect, Deterministic)
{
  oracle::Rng rng(3);
  TermVec xs = oracle::real_vars(4);
  for (int i = 0; i < 100; ++i) {
    Term f = oracle::random_formula(rng, xs, {}, 4);
    EXPECT_EQ(atoms_of(f), atoms_of(f));
    EXPECT_EQ(fmuls_of(f), fmuls_of(f));
  }
}
