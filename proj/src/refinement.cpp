#include "nracegar/refinement.h"

#include <algorithm>
#include <set>

#include "nracegar/exceptions.h"
#include "nracegar/smt2.h"

namespace nracegar {

Term tangent_plane(const Rat & a, const Rat & b, const Term & x, const Term & y)
{
  return mk_add({ mk_scale(b, x), mk_scale(a, y), mk_real(-(a * b)) });
}

Axiom tangent_lemma(const Term & m, const Rat & a, const Rat & b)
{
  const Term & s = m[0];
  const Term & t = m[1];
  const Term ca = mk_real(a);
  const Term cb = mk_real(b);
  const Term plane = tangent_plane(a, b, s, t);
  TermVec parts{
    mk_eq(mk_fmul(ca, t), mk_scale(a, t)),
    mk_eq(mk_fmul(s, cb), mk_scale(b, s)),
    mk_implies(mk_or(mk_and(mk_gt(s, ca), mk_lt(t, cb)), mk_and(mk_lt(s, ca), mk_gt(t, cb))), mk_lt(m, plane)),
    mk_implies(mk_or(mk_and(mk_lt(s, ca), mk_lt(t, cb)), mk_and(mk_gt(s, ca), mk_gt(t, cb))), mk_gt(m, plane)),
  };
  return { mk_and(parts), AxiomKind::Tangent, Point{ a, b } };
}

namespace {

std::vector<Rat> round_coordinate(const Rat & v) { return { v.floor(), v.ceil() }; }

void push_unique(std::vector<Point> & pts, const Point & p)
{
  if (std::find(pts.begin(), pts.end(), p) == pts.end()) pts.push_back(p);
}

}  // namespace

std::vector<Point> select_points(const Term & m, const Model & mu, const RefineOptions & opts)
{
  const Rat s = evaluate_real(m[0], mu);
  const Rat t = evaluate_real(m[1], mu);
  const Rat v = evaluate_real(m, mu);
  std::vector<Point> raw{ { s, t } };
  if (opts.all_tangent_points && !v.is_zero()) {
    raw.push_back({ v.inverse(), t });
    raw.push_back({ s, v.inverse() });
  }
  // only the first oversized coordinate is rounded; the exact other one
  // keeps the multiplication line through the model point
  std::vector<Point> out;
  for (const Point & p : raw) {
    if (p.first.exceeds(opts.rounding_threshold)) {
      for (const Rat & a : round_coordinate(p.first)) push_unique(out, { a, p.second });
    } else if (p.second.exceeds(opts.rounding_threshold)) {
      for (const Rat & b : round_coordinate(p.second)) push_unique(out, { p.first, b });
    } else {
      push_unique(out, p);
    }
  }
  return out;
}

std::pair<std::vector<Point>, Frontier> frontier_update(const Frontier & fr, const Point & p)
{
  const auto & [a, b] = p;
  const bool below_x = a < fr.lx;
  const bool above_x = a > fr.ux;
  const bool below_y = b < fr.ly;
  const bool above_y = b > fr.uy;
  Frontier n = fr;
  std::vector<Point> extra;
  if (below_x && below_y) {
    extra = { { a, fr.uy }, { fr.ux, b } };
    n = { a, fr.ux, b, fr.uy };
  } else if (below_x && above_y) {
    extra = { { a, fr.ly }, { fr.ux, b } };
    n = { a, fr.ux, fr.ly, b };
  } else if (above_x && above_y) {
    extra = { { a, fr.ly }, { fr.lx, b } };
    n = { fr.lx, a, fr.ly, b };
  } else if (above_x && below_y) {
    extra = { { a, fr.uy }, { fr.lx, b } };
    n = { fr.lx, a, b, fr.uy };
  } else if (below_x || above_x) {
    // b is inside [l_y, u_y]: pair a with the y bound farther from b
    const Rat & far = (b - fr.ly) >= (fr.uy - b) ? fr.ly : fr.uy;
    extra = { { a, far } };
    (below_x ? n.lx : n.ux) = a;
  } else if (below_y || above_y) {
    const Rat & far = (a - fr.lx) >= (fr.ux - a) ? fr.lx : fr.ux;
    extra = { { far, b } };
    (below_y ? n.ly : n.uy) = b;
  }
  return { extra, n };
}

bool refinable(const Term & m) { return m.kind() == Kind::Fmul && !m[0].is_const() && !m[1].is_const(); }

TermVec spurious_fmuls(const TermVec & fmuls, const Model & mu)
{
  TermVec out;
  for (const Term & m : fmuls) {
    if (!refinable(m)) continue;
    if (evaluate_real(m, mu) != evaluate_real(m[0], mu) * evaluate_real(m[1], mu)) out.push_back(m);
  }
  return out;
}

std::vector<Axiom> monotonicity_lemmas(const TermVec & fmuls, const Model & mu)
{
  struct Vals
  {
    Term m;
    Rat s, t, v;
  };
  std::vector<Vals> vals;
  for (const Term & m : fmuls) {
    if (!refinable(m)) continue;
    vals.push_back({ m, evaluate_real(m[0], mu).abs(), evaluate_real(m[1], mu).abs(), evaluate_real(m, mu).abs() });
  }
  std::vector<Axiom> out;
  for (const Vals & p : vals) {
    for (const Vals & q : vals) {
      if (p.m == q.m || !(p.v > q.v)) continue;
      // product is symmetric, so both argument pairings of q may be used
      for (int swap = 0; swap < 2; ++swap) {
        const Rat & w = swap ? q.t : q.s;
        const Rat & z = swap ? q.s : q.t;
        if (!(p.s <= w && p.t <= z)) continue;
        const Term & tw = swap ? q.m[1] : q.m[0];
        const Term & tz = swap ? q.m[0] : q.m[1];
        Term f = mk_implies(mk_and(mk_le(mk_abs(p.m[0]), mk_abs(tw)), mk_le(mk_abs(p.m[1]), mk_abs(tz))),
                            mk_le(mk_abs(p.m), mk_abs(q.m)));
        out.push_back({ f, AxiomKind::Monotonicity, std::nullopt });
        break;
      }
    }
  }
  return out;
}

Model extend_by_congruence(const Model & mu, const TermVec & terms)
{
  Model out = mu;
  std::vector<std::pair<std::pair<Rat, Rat>, Rat>> known;
  for (const auto & [m, v] : mu.fmul_values) {
    try {
      known.push_back({ { evaluate_real(m[0], mu), evaluate_real(m[1], mu) }, v });
    } catch (const UnassignedSymbolError &) {
    }
  }
  for (const Term & m : fmuls_of(terms)) {
    if (out.fmul_values.count(m)) continue;
    Rat a = evaluate_real(m[0], out);
    Rat b = evaluate_real(m[1], out);
    auto it = std::find_if(known.begin(), known.end(),
                           [&](const auto & k) { return k.first.first == a && k.first.second == b; });
    Rat v = it != known.end() ? it->second : a * b;
    out.set_fmul(m, v);
    known.push_back({ { a, b }, v });
  }
  return out;
}

std::vector<Axiom> refine(const Model & mu, const TermVec & fmuls, FrontierStore & frontiers,
                          const RefineOptions & opts)
{
  TermVec spurious = spurious_fmuls(fmuls, mu);
  if (spurious.empty()) throw InternalError("refine called on a model without spurious fmul values");

  std::vector<Axiom> out;
  std::set<Term, TermLess> seen;
  auto add = [&](Axiom a) {
    if (seen.insert(a.formula).second) out.push_back(std::move(a));
  };
  for (const Term & m : spurious) {
    std::vector<Point> pts = select_points(m, mu, opts);
    Frontier & fr = frontiers[m];
    const size_t primary = pts.size();
    for (size_t i = 0; i < primary; ++i) {
      auto [extra, next] = frontier_update(fr, pts[i]);
      fr = next;
      for (const Point & p : extra) push_unique(pts, p);
    }
    for (const Point & p : pts) add(tangent_lemma(m, p.first, p.second));
  }
  for (Axiom & a : monotonicity_lemmas(fmuls, mu)) add(std::move(a));
  return out;
}

void write_axiom(std::ostream & os, const Axiom & a)
{
  os << "(axiom :kind " << to_string(a.kind);
  if (a.point) os << " :point (" << smt2_rational(a.point->first) << " " << smt2_rational(a.point->second) << ")";
  os << " " << to_smt2(a.formula) << ")\n";
}

}  // namespace nracegar
