#include <gtest/gtest.h>

#include "nracegar/nra_smt.h"
#include "oracles.h"

using namespace nracegar;

namespace {

Term real(const std::string & n) { return mk_var(n, Sort::Real); }
Term num(long v) { return mk_real(Rat(v)); }

SolverSession::Options uflra() { return { default_solver_command(), "QF_UFLRA", true, false }; }

}  // namespace

TEST(SmtNraCheck, Examples)
{
  Term x = real("x"), y = real("y");
  SmtVerdict u = smt_nra_check(mk_and({ mk_ge(x, num(2)), mk_ge(y, num(2)), mk_le(mk_mul(x, y), num(3)) }));
  EXPECT_EQ(u.result, CheckResult::Unsat);

  Term phi = mk_and(mk_eq(x, num(2)), mk_eq(mk_mul(x, y), num(6)));
  SmtVerdict s = smt_nra_check(phi);
  ASSERT_EQ(s.result, CheckResult::Sat);
  EXPECT_EQ(s.model.var_values.at(y), Rat(3));
  EXPECT_TRUE(oracle::eval_bool(phi, s.model));

  NraOptions small;
  small.max_iterations = 20;
  SmtVerdict k = smt_nra_check(mk_eq(mk_mul(x, x), num(2)), small);
  EXPECT_EQ(k.result, CheckResult::Unknown);
  EXPECT_FALSE(k.reason.empty());
}

TEST(SmtNraCheckExt, ProductAtLeastFactor)
{
  Term x = real("x"), y = real("y");
  Term hat = mk_and({ mk_ge(x, num(1)), mk_ge(y, num(1)), mk_lt(mk_fmul(x, y), x) });
  SmtVerdict v = smt_nra_check_ext(hat, fmuls_of(hat));
  EXPECT_EQ(v.result, CheckResult::Unsat);
  EXPECT_LE(v.iterations, 10u);
  for (const Axiom & a : v.axioms) EXPECT_NE(a.kind, AxiomKind::Static);
}

TEST(SmtNraCheckExt, ConcreteFirstModel)
{
  Term x = real("x"), y = real("y");
  Term m = mk_fmul(x, y);
  Term hat = mk_and({ mk_eq(m, num(4)), mk_eq(x, num(2)), mk_eq(y, num(2)) });
  SmtVerdict v = smt_nra_check_ext(hat, { m });
  ASSERT_EQ(v.result, CheckResult::Sat);
  EXPECT_EQ(v.model.fmul_values.at(m), Rat(4));
}

TEST(SmtNraCheckExt, ZeroBudgetAborts)
{
  Term x = real("x"), y = real("y");
  Term hat = mk_and({ mk_ge(x, num(1)), mk_ge(y, num(1)), mk_lt(mk_fmul(x, y), x) });
  NraOptions o;
  o.max_iterations = 0;
  SmtVerdict v = smt_nra_check_ext(hat, fmuls_of(hat), o);
  EXPECT_EQ(v.result, CheckResult::Unknown);
}

TEST(ModelEval, Examples)
{
  Term x = real("x"), y = real("y");
  Term m = mk_fmul(x, y), sq = mk_fmul(x, x);
  Model a;
  a.set(x, Rat(2));
  a.set(y, Rat(3));
  a.set_fmul(m, Rat(6));
  EXPECT_TRUE(get_nra_model_eval(mk_ge(m, num(0)), a, { m }));
  a.set_fmul(m, Rat(5));
  EXPECT_FALSE(get_nra_model_eval(mk_ge(m, num(0)), a, { m }));
  Model b;
  b.set(x, Rat(-2));
  b.set_fmul(sq, Rat(4));
  EXPECT_TRUE(get_nra_model_eval(mk_ge(sq, num(0)), b, { sq }));
}

TEST(ModelLines, Examples)
{
  Term x = real("x"), y = real("y");
  Term m = mk_fmul(x, y);
  SolverSession session(uflra());

  Term hat = mk_and(mk_eq(m, num(6)), mk_eq(x, num(2)));
  Model mu;
  mu.set(x, Rat(2));
  mu.set(y, Rat(0));
  mu.set_fmul(m, Rat(6));
  auto found = get_nra_model_lines(session, hat, mu, { m });
  ASSERT_TRUE(found);
  EXPECT_EQ(found->var_values.at(x), Rat(2));
  EXPECT_EQ(found->var_values.at(y), Rat(3));
  EXPECT_EQ(found->fmul_values.at(m), Rat(6));

  Term hat2 = mk_and(mk_eq(m, num(6)), mk_eq(x, num(0)));
  Model mu2;
  mu2.set(x, Rat(0));
  mu2.set(y, Rat(5));
  mu2.set_fmul(m, Rat(6));
  EXPECT_FALSE(get_nra_model_lines(session, hat2, mu2, { m }));

  Term lin = mk_ge(x, num(1));
  Model mu3;
  mu3.set(x, Rat(4));
  auto same = get_nra_model_lines(session, lin, mu3, {});
  ASSERT_TRUE(same);
  EXPECT_EQ(same->var_values, mu3.var_values);
}

TEST(ModelComplete, Examples)
{
  const std::string z3 = oracle::z3_path();
  if (z3.empty()) GTEST_SKIP() << "z3 not available";
  const std::string cmd = z3 + " -in -smt2";
  Term x = real("x"), y = real("y");
  Term m = mk_fmul(x, y), sq = mk_fmul(x, x);

  Term hat = mk_and(mk_eq(m, num(6)), mk_eq(x, num(2)));
  Model mu;
  mu.set(x, Rat(2));
  mu.set(y, Rat(0));
  mu.set_fmul(m, Rat(6));
  auto found = get_nra_model_complete(hat, mu, cmd);
  ASSERT_TRUE(found);
  EXPECT_EQ(found->var_values.at(y), Rat(3));

  Term root = mk_eq(sq, num(2));
  Model mu2;
  mu2.set(x, Rat(1));
  mu2.set_fmul(sq, Rat(2));
  EXPECT_FALSE(get_nra_model_complete(root, mu2, cmd));

  EXPECT_FALSE(get_nra_model_complete(hat, mu, ""));
}

TEST(SmtNraCheck, NraFinderFallsBackWithoutCommand)
{
  Term x = real("x"), y = real("y");
  Term phi = mk_and(mk_eq(x, num(2)), mk_eq(mk_mul(x, y), num(6)));
  NraOptions o;
  o.finder = ModelFinder::Nra;
  SmtVerdict v = smt_nra_check(phi, o);
  ASSERT_EQ(v.result, CheckResult::Sat);
  EXPECT_TRUE(oracle::eval_bool(phi, v.model));
}

TEST(SmtNraCheck, AgreesWithOracleOnSmallCorpus)
{
  oracle::Rng rng(321);
  TermVec xs = oracle::real_vars(2);
  NraOptions o;
  o.max_iterations = 30;
  o.max_value_bits = 256;
  for (int i = 0; i < 25; ++i) {
    Term phi = oracle::random_nra_formula(rng, xs, 2, 5);
    o.deadline = Clock::now() + std::chrono::seconds(5);
    SmtVerdict v = smt_nra_check(phi, o);
    if (v.result == CheckResult::Sat) {
      EXPECT_TRUE(oracle::eval_bool(phi, v.model)) << to_string(phi);
    } else if (v.result == CheckResult::Unsat) {
      EXPECT_FALSE(oracle::grid_has_model(phi, xs, -8, 8, 0.125)) << to_string(phi);
      auto z = oracle::z3_nra_sat(phi);
      if (z) EXPECT_FALSE(*z) << to_string(phi);
    }
  }
}

TEST(SmtNraCheck, MonotoneAbstraction)
{
  // every model of phi with exact products satisfies phi^ and all lemmas
  oracle::Rng rng(77);
  TermVec xs = oracle::real_vars(3);
  NraOptions o;
  o.max_iterations = 10;
  o.max_value_bits = 256;
  for (int i = 0; i < 15; ++i) {
    Term phi = oracle::random_nra_formula(rng, xs, 3, 5);
    o.deadline = Clock::now() + std::chrono::seconds(5);
    SmtVerdict v = smt_nra_check(phi, o);
    if (v.result != CheckResult::Unsat) continue;
    for (int j = 0; j < 200; ++j) {
      Model mu;
      for (const Term & x : xs) mu.set(x, rng.rational(8, 4));
      for (const Axiom & a : v.axioms) ASSERT_TRUE(oracle::eval_bool(a.formula, mu)) << to_string(a.formula);
    }
  }
}
