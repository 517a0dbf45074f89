#include <gtest/gtest.h>

#include <sstream>

#include "frontier_cases.h"
#include "nracegar/exceptions.h"
#include "nracegar/refinement.h"
#include "oracles.h"

using namespace nracegar;

namespace {

Term real(const std::string & n) { return mk_var(n, Sort::Real); }

Model model(std::initializer_list<std::pair<Term, Rat>> vars, std::initializer_list<std::pair<Term, Rat>> fmuls)
{
  Model m;
  for (const auto & [v, r] : vars) m.set(v, r);
  for (const auto & [f, r] : fmuls) m.set_fmul(f, r);
  return m;
}

}  // namespace

TEST(TangentPlane, Examples)
{
  Term x = real("x"), y = real("y");
  EXPECT_EQ(tangent_plane(2, 3, x, y), mk_add({ mk_scale(3, x), mk_scale(2, y), mk_real(-6) }));
  EXPECT_EQ(tangent_plane(0, 0, x, y), mk_real(0));
  EXPECT_EQ(tangent_plane(-1, Rat(1, 2), x, y), mk_add({ mk_scale(Rat(1, 2), x), mk_neg(y), mk_real(Rat(1, 2)) }));
}

TEST(TangentLemma, Shape)
{
  Term x = real("x"), y = real("y");
  Term m = mk_fmul(x, y);
  Axiom a = tangent_lemma(m, 2, 3);
  Term t = mk_add({ mk_scale(3, x), mk_scale(2, y), mk_real(-6) });
  Term c2 = mk_real(2), c3 = mk_real(3);
  Term expect = mk_and({
    mk_eq(mk_fmul(c2, y), mk_scale(2, y)),
    mk_eq(mk_fmul(x, c3), mk_scale(3, x)),
    mk_implies(mk_or(mk_and(mk_gt(x, c2), mk_lt(y, c3)), mk_and(mk_lt(x, c2), mk_gt(y, c3))), mk_lt(m, t)),
    mk_implies(mk_or(mk_and(mk_lt(x, c2), mk_lt(y, c3)), mk_and(mk_gt(x, c2), mk_gt(y, c3))), mk_gt(m, t)),
  });
  EXPECT_EQ(a.formula, expect);
  EXPECT_EQ(a.kind, AxiomKind::Tangent);
  EXPECT_EQ(a.point, (Point{ 2, 3 }));
  EXPECT_FALSE(contains_kind(a.formula, Kind::Mul));
}

TEST(TangentLemma, ValidBySampling)
{
  oracle::Rng rng(1);
  Term x = real("x"), y = real("y");
  Term m = mk_fmul(x, y);
  for (int i = 0; i < 10000; ++i) {
    Axiom a = tangent_lemma(m, rng.rational(9, 4), rng.rational(9, 4));
    Model mu;
    mu.set(x, rng.coin(0.1) ? a.point->first : rng.rational(9, 4));
    mu.set(y, rng.coin(0.1) ? a.point->second : rng.rational(9, 4));
    ASSERT_TRUE(oracle::eval_bool(a.formula, mu));
  }
}

TEST(SelectPoints, Examples)
{
  Term s = real("s"), t = real("t");
  Term m = mk_fmul(s, t);
  Model mu = model({ { s, 2 }, { t, 3 } }, { { m, 5 } });
  EXPECT_EQ(select_points(m, mu), (std::vector<Point>{ { 2, 3 } }));
  RefineOptions all;
  all.all_tangent_points = true;
  EXPECT_EQ(select_points(m, mu, all), (std::vector<Point>{ { 2, 3 }, { Rat(1, 5), 3 }, { 2, Rat(1, 5) } }));

  Model big = model({ { s, Rat(1234567, 999983) }, { t, 2 } }, { { m, 0 } });
  EXPECT_EQ(select_points(m, big), (std::vector<Point>{ { 1, 2 }, { 2, 2 } }));
}

TEST(SelectPoints, RoundsOnlyFirstOversizedCoordinate)
{
  Term s = real("s"), t = real("t");
  Term m = mk_fmul(s, t);
  Model mu = model({ { s, Rat(3, 2) }, { t, Rat(2000001, 2) } }, { { m, 0 } });
  EXPECT_EQ(select_points(m, mu), (std::vector<Point>{ { Rat(3, 2), 1000000 }, { Rat(3, 2), 1000001 } }));
}

TEST(Frontier, Cases)
{
  for (const oracle::FrontierCase & c : oracle::frontier_cases()) {
    auto [extra, after] = frontier_update(c.before, c.point);
    EXPECT_EQ(extra, c.extra) << c.name;
    EXPECT_EQ(after, c.after) << c.name;
  }
}

TEST(Frontier, Grows)
{
  oracle::Rng rng(8);
  for (int i = 0; i < 2000; ++i) {
    Rat lx = rng.rational(5, 2), ly = rng.rational(5, 2);
    Frontier fr{ lx, lx + Rat(rng.uniform(0, 4)), ly, ly + Rat(rng.uniform(0, 4)) };
    auto [extra, next] = frontier_update(fr, { rng.rational(9, 2), rng.rational(9, 2) });
    EXPECT_LE(next.lx, fr.lx);
    EXPECT_GE(next.ux, fr.ux);
    EXPECT_LE(next.ly, fr.ly);
    EXPECT_GE(next.uy, fr.uy);
  }
}

TEST(Monotonicity, Examples)
{
  Term s = real("s"), t = real("t"), w = real("w"), z = real("z");
  Term m1 = mk_fmul(s, t), m2 = mk_fmul(w, z);
  auto one = monotonicity_lemmas({ m1, m2 }, model({ { s, 1 }, { t, 1 }, { w, 2 }, { z, 2 } }, { { m1, 5 }, { m2, 3 } }));
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].kind, AxiomKind::Monotonicity);
  EXPECT_EQ(one[0].formula, mk_implies(mk_and(mk_le(mk_abs(s), mk_abs(w)), mk_le(mk_abs(t), mk_abs(z))),
                                       mk_le(mk_abs(m1), mk_abs(m2))));
  auto none = monotonicity_lemmas({ m1, m2 }, model({ { s, 1 }, { t, 1 }, { w, 2 }, { z, 2 } }, { { m1, 1 }, { m2, 4 } }));
  EXPECT_TRUE(none.empty());
}

TEST(Monotonicity, SwappedPairing)
{
  // |s| <= |z| and |t| <= |w| only holds with the arguments of m2 swapped
  Term s = real("s"), t = real("t"), w = real("w"), z = real("z");
  Term m1 = mk_fmul(s, t), m2 = mk_fmul(w, z);
  auto l = monotonicity_lemmas({ m1, m2 }, model({ { s, 3 }, { t, 1 }, { w, 1 }, { z, 3 } }, { { m1, 9 }, { m2, 3 } }));
  ASSERT_EQ(l.size(), 1u);
  EXPECT_EQ(l[0].formula, mk_implies(mk_and(mk_le(mk_abs(s), mk_abs(z)), mk_le(mk_abs(t), mk_abs(w))),
                                     mk_le(mk_abs(m1), mk_abs(m2))));
}

TEST(Refine, BlocksSpuriousModel)
{
  Term x = real("x"), y = real("y");
  Term m = mk_fmul(x, y);
  Model mu = model({ { x, 2 }, { y, 3 } }, { { m, 5 } });
  FrontierStore fs;
  auto axs = refine(mu, { m }, fs);
  ASSERT_FALSE(axs.empty());
  EXPECT_EQ(axs[0].formula, tangent_lemma(m, 2, 3).formula);
  TermVec all;
  for (const Axiom & a : axs) all.push_back(a.formula);
  Model ext = extend_by_congruence(mu, all);
  EXPECT_FALSE(oracle::eval_bool_uf(mk_and(all), ext));
  EXPECT_EQ(fs.at(m), (Frontier{ 0, 2, 0, 3 }));
}

TEST(Refine, NonSpuriousIsAnError)
{
  Term x = real("x"), y = real("y");
  Term m = mk_fmul(x, y);
  FrontierStore fs;
  EXPECT_THROW(refine(model({ { x, 2 }, { y, 3 } }, { { m, 6 } }), { m }, fs), InternalError);
}

TEST(Refine, TwoSpuriousApplications)
{
  Term x = real("x"), y = real("y"), z = real("z");
  Term m1 = mk_fmul(x, y), m2 = mk_fmul(y, z);
  Model mu = model({ { x, 2 }, { y, 3 }, { z, -1 } }, { { m1, 5 }, { m2, 7 } });
  FrontierStore fs;
  auto axs = refine(mu, { m1, m2 }, fs);
  bool for1 = false, for2 = false;
  for (const Axiom & a : axs) {
    if (a.kind != AxiomKind::Tangent) continue;
    for1 |= a.formula == tangent_lemma(m1, 2, 3).formula;
    for2 |= a.formula == tangent_lemma(m2, 3, -1).formula;
  }
  EXPECT_TRUE(for1);
  EXPECT_TRUE(for2);
  EXPECT_EQ(fs.at(m1), (Frontier{ 0, 2, 0, 3 }));
  EXPECT_EQ(fs.at(m2), (Frontier{ 0, 3, -1, 0 }));
}

TEST(Refine, Deterministic)
{
  oracle::Rng rng(4);
  TermVec xs = oracle::real_vars(3);
  TermVec ms = { mk_fmul(xs[0], xs[1]), mk_fmul(xs[1], xs[2]), mk_fmul(xs[0], xs[0]) };
  for (int i = 0; i < 50; ++i) {
    Model mu;
    for (const Term & x : xs) mu.set(x, rng.rational(6, 3));
    for (const Term & m : ms) mu.set_fmul(m, rng.rational(20, 3));
    if (spurious_fmuls(ms, mu).empty()) continue;
    FrontierStore a, b;
    auto la = refine(mu, ms, a);
    auto lb = refine(mu, ms, b);
    ASSERT_EQ(la.size(), lb.size());
    for (size_t j = 0; j < la.size(); ++j) EXPECT_EQ(la[j].formula, lb[j].formula);
  }
}

TEST(WriteAxiom, Format)
{
  Term x = real("x"), y = real("y");
  std::ostringstream os;
  write_axiom(os, tangent_lemma(mk_fmul(x, y), Rat(1, 2), -3));
  EXPECT_EQ(os.str().rfind("(axiom :kind tangent :point ((/ 1 2) (- 3)) ", 0), 0u) << os.str();
}
