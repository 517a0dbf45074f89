#include "nracegar/abstraction.h"

#include <set>

#include "nracegar/term_ops.h"

namespace nracegar {

const char * to_string(AxiomKind k)
{
  switch (k) {
    case AxiomKind::Tangent: return "tangent";
    case AxiomKind::Monotonicity: return "monotonicity";
    case AxiomKind::Static: return "static";
  }
  return "?";
}

Term abstract(const Term & f)
{
  return transform(f, [](const Term &, const Term & r) -> Term {
    return r.kind() == Kind::Mul ? mk_fmul(r[0], r[1]) : r;
  });
}

Term concretize(const Term & f)
{
  return transform(f, [](const Term &, const Term & r) -> Term {
    return r.kind() == Kind::Fmul ? mk_mul(r[0], r[1]) : r;
  });
}

std::vector<Axiom> static_axioms(TermVec & fmuls, const AbstractionOptions & opts)
{
  std::vector<Axiom> out;
  std::set<Term, TermLess> known(fmuls.begin(), fmuls.end());
  const size_t n = fmuls.size();
  const Term zero = mk_real(0);
  auto add = [&](const Term & f) {
    if (f.kind() == Kind::BoolConst && f.bool_value()) return;
    out.push_back({ f, AxiomKind::Static, std::nullopt });
    for (const Term & m : fmuls_of(f)) {
      if (known.insert(m).second) fmuls.push_back(m);
    }
  };
  for (size_t i = 0; i < n; ++i) {
    const Term m = fmuls[i];
    const Term & x = m[0];
    const Term & y = m[1];
    if (x.is_const() || y.is_const()) continue;
    if (opts.sign_axioms) {
      add(mk_eq(m, mk_fmul(mk_neg(x), mk_neg(y))));
      add(mk_eq(m, mk_neg(mk_fmul(mk_neg(x), y))));
      add(mk_eq(m, mk_neg(mk_fmul(x, mk_neg(y)))));
    }
    if (opts.zero_axioms) {
      if (x == y) {
        add(mk_iff(mk_eq(x, zero), mk_eq(m, zero)));
        add(mk_implies(mk_not(mk_eq(x, zero)), mk_gt(m, zero)));
      } else {
        add(mk_iff(mk_or(mk_eq(x, zero), mk_eq(y, zero)), mk_eq(m, zero)));
        add(mk_implies(mk_or(mk_and(mk_gt(x, zero), mk_gt(y, zero)), mk_and(mk_lt(x, zero), mk_lt(y, zero))),
                       mk_gt(m, zero)));
        add(mk_implies(mk_or(mk_and(mk_lt(x, zero), mk_gt(y, zero)), mk_and(mk_gt(x, zero), mk_lt(y, zero))),
                       mk_lt(m, zero)));
      }
    }
  }
  return out;
}

AbstractionResult abstract_formula(const Term & phi, const AbstractionOptions & opts)
{
  AbstractionResult r;
  r.abstract_formula = abstract(phi);
  r.fmuls = fmuls_of(r.abstract_formula);
  r.static_axioms = static_axioms(r.fmuls, opts);
  return r;
}

namespace {

Term conjoin(const Term & f, const std::vector<Axiom> & axioms)
{
  TermVec parts{ f };
  for (const Axiom & a : axioms) parts.push_back(a.formula);
  return mk_and(parts);
}

Term to_frame(const Term & t, Frame target)
{
  return remap_frames(t, [target](Frame) -> std::optional<Frame> { return target; });
}

}  // namespace

AbstractSystem abstract_system(const TransitionSystem & ts, std::optional<int> property_index,
                               const AbstractionOptions & opts)
{
  AbstractSystem out;
  const auto & prop = ts.property(property_index);
  out.property_index = property_index ? *property_index : ts.properties.begin()->first;
  Term init = abstract(ts.init);
  Term trans = abstract(ts.trans);
  out.property = abstract(prop);

  // single-frame applications, brought to the current frame; mixed ones as-is
  TermVec current;
  TermVec mixed;
  std::set<Term, TermLess> seen;
  for (const Term & m : fmuls_of(TermVec{ init, trans, out.property })) {
    auto frames = frames_of(m);
    Term c = frames.size() <= 1 ? to_frame(m, Frame::current()) : m;
    if (!seen.insert(c).second) continue;
    (frames.size() <= 1 ? current : mixed).push_back(c);
  }

  TermVec cur_fmuls = current;
  std::vector<Axiom> cur_axioms = static_axioms(cur_fmuls, opts);
  TermVec next_fmuls;
  for (const Term & m : current) next_fmuls.push_back(to_frame(m, Frame::next()));
  std::vector<Axiom> next_axioms = static_axioms(next_fmuls, opts);
  std::vector<Axiom> mixed_axioms = static_axioms(mixed, opts);

  out.ts.state_vars = ts.state_vars;
  out.ts.init = conjoin(init, cur_axioms);
  std::vector<Axiom> trans_axioms = cur_axioms;
  trans_axioms.insert(trans_axioms.end(), next_axioms.begin(), next_axioms.end());
  trans_axioms.insert(trans_axioms.end(), mixed_axioms.begin(), mixed_axioms.end());
  out.ts.trans = conjoin(trans, trans_axioms);
  out.ts.properties[out.property_index] = out.property;
  return out;
}

}  // namespace nracegar
