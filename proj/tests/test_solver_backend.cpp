#include <gtest/gtest.h>

#include <algorithm>

#include "nracegar/exceptions.h"
#include "nracegar/solver.h"
#include "oracles.h"

using namespace nracegar;

namespace {

Term real(const std::string & n) { return mk_var(n, Sort::Real); }

SolverSession::Options opts() { return { default_solver_command(), "QF_UFLRA", true, true }; }

}  // namespace

TEST(Solver, UnsatCore)
{
  SolverSession s(opts());
  Term x = real("x");
  SolverVerdict v = s.check({ { "a", mk_gt(x, mk_real(0)) }, { "b", mk_lt(x, mk_real(0)) } });
  ASSERT_EQ(v.result, CheckResult::Unsat);
  for (const std::string & l : v.core) EXPECT_TRUE(l == "a" || l == "b") << l;
}

TEST(Solver, EufFreedom)
{
  SolverSession s(opts());
  Term x = real("x"), y = real("y");
  Term f = mk_fmul(x, y);
  SolverVerdict v = s.check({ { "a", mk_and(mk_eq(f, mk_real(6)), mk_eq(x, mk_real(2))) } });
  ASSERT_EQ(v.result, CheckResult::Sat);
  EXPECT_EQ(v.model.var_values.at(x), Rat(2));
  EXPECT_EQ(v.model.fmul_values.at(f), Rat(6));
  EXPECT_TRUE(v.model.var_values.count(y));
}

TEST(Solver, ExactRational)
{
  SolverSession s(opts());
  Term x = real("x");
  SolverVerdict v = s.check({ { "a", mk_eq(x, mk_real(Rat(1, 3))) } });
  ASSERT_EQ(v.result, CheckResult::Sat);
  EXPECT_EQ(v.model.var_values.at(x), Rat(1, 3));
}

TEST(Solver, NoSuchBinary)
{
  EXPECT_THROW(SolverSession({ "no-such-binary-nracegar", "QF_UFLRA", true, true }), SolverError);
}

TEST(Solver, ConcurrentSessionsAreIndependent)
{
  SolverSession a(opts());
  SolverSession b(opts());
  Term x = real("x");
  a.assert_formula(mk_gt(x, mk_real(5)));
  b.assert_formula(mk_lt(x, mk_real(-5)));
  ASSERT_EQ(a.check_sat(), CheckResult::Sat);
  ASSERT_EQ(b.check_sat(), CheckResult::Sat);
  EXPECT_GT(a.model().var_values.at(x), Rat(5));
  EXPECT_LT(b.model().var_values.at(x), Rat(-5));
}

TEST(Solver, PushPopReuse)
{
  SolverSession s(opts());
  Term x = real("x");
  s.assert_formula(mk_ge(x, mk_real(0)));
  s.push();
  s.assert_formula(mk_lt(x, mk_real(0)));
  EXPECT_EQ(s.check_sat(), CheckResult::Unsat);
  s.pop();
  EXPECT_EQ(s.check_sat(), CheckResult::Sat);
  EXPECT_EQ(s.depth(), 0u);
}

TEST(Solver, CoresReCheckUnsatAndModelsSatisfy)
{
  oracle::Rng rng(99);
  TermVec xs = oracle::real_vars(3);
  SolverSession s(opts());
  size_t unsat = 0, sat = 0;
  for (int i = 0; i < 60; ++i) {
    std::vector<std::pair<std::string, Term>> as;
    for (int j = 0; j < 6; ++j) {
      TermVec parts;
      for (const Term & x : xs) parts.push_back(mk_scale(Rat(rng.uniform(-3, 3)), x));
      parts.push_back(mk_scale(Rat(rng.uniform(-2, 2)), mk_fmul(xs[0], xs[1])));
      Term lhs = mk_add(parts);
      Term rhs = mk_real(Rat(rng.uniform(-4, 4)));
      as.emplace_back("c" + std::to_string(j), rng.coin() ? mk_le(lhs, rhs) : mk_lt(lhs, rhs));
    }
    SolverVerdict v = s.check(as);
    if (v.result == CheckResult::Sat) {
      ++sat;
      for (const auto & [l, f] : as) EXPECT_TRUE(oracle::eval_bool_uf(f, v.model)) << l;
    } else if (v.result == CheckResult::Unsat) {
      ++unsat;
      std::vector<std::pair<std::string, Term>> core;
      for (const auto & a : as) {
        if (std::find(v.core.begin(), v.core.end(), a.first) != v.core.end()) core.push_back(a);
      }
      EXPECT_EQ(core.size(), v.core.size());
      EXPECT_EQ(s.check(core).result, CheckResult::Unsat);
    }
  }
  EXPECT_GT(sat, 0u);
  EXPECT_GT(unsat, 0u);
}

TEST(Solver, CheckWithoutCores)
{
  SolverSession s({ default_solver_command(), "QF_UFLRA", true, false });
  Term x = real("x");
  SolverVerdict v = s.check({ { "a", mk_gt(x, mk_real(0)) }, { "b", mk_lt(x, mk_real(0)) } });
  EXPECT_EQ(v.result, CheckResult::Unsat);
  EXPECT_TRUE(v.core.empty());
}
