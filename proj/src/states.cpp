#include "decor/states.hpp"

#include <algorithm>
#include <set>

#include "decor/error.hpp"

namespace decor {

Theory build_states_theory(const std::vector<std::string>& locations, const std::string& name) {
  std::set<std::string> seen;
  for (const auto& i : locations)
    if (!seen.insert(i).second) throw DecorError(ErrorCode::DuplicateLocation, i);
  Theory th;
  th.name = name;
  th.flavor = Flavor::States;
  th.locations = locations;
  for (const auto& i : locations) {
    th.add_generator(tm::gen("l_" + i, ty::unit(), ty::value(i), 1, GenRole::Lookup, i));
    th.add_generator(tm::gen("u_" + i, ty::value(i), ty::unit(), 2, GenRole::Update, i));
  }
  for (const auto& i : locations)
    th.add_axiom("A1_" + i, {tm::comp(th.lookup(i), th.update(i)), tm::id(ty::value(i)), EqKind::Weak});
  for (const auto& i : locations)
    for (const auto& j : locations) {
      if (i == j) continue;
      th.add_axiom("A2_" + i + "_" + j,
                   {tm::comp(th.lookup(j), th.update(i)),
                    tm::comp(th.lookup(j), tm::to_unit(ty::value(i))), EqKind::Weak});
    }
  return th;
}

SemiPure semi_pure_product(Theory& th, const Term& f, const Term& g, bool pure_left) {
  if (th.flavor == Flavor::Exceptions)
    throw DecorError(ErrorCode::FlavorViolation, "semi-pure products live in states theories");
  typecheck(th, f);
  typecheck(th, g);
  if (decoration(f) != 0) throw DecorError(ErrorCode::PureSideNotPure, to_string(f));
  Term t = tm::semiprod(f, g, pure_left);
  Judgment j1 = apply_rule(th, RuleId::SemiprodP1, {}, {{"t", t}});
  Judgment j2 = apply_rule(th, RuleId::SemiprodP2, {}, {{"t", t}});
  std::string tag = "[" + to_string(t) + "]";
  if (!th.find_axiom("P1" + tag)) th.add_axiom("P1" + tag, j1.eq);
  if (!th.find_axiom("P2" + tag)) th.add_axiom("P2" + tag, j2.eq);
  return {t, j1.eq, j2.eq};
}

namespace st {
Term swap_left(const Theory& th, const std::string& i, const std::string& j) {
  return tm::semiprod(tm::id(ty::value(j)), th.update(i), false);
}
Term swap_right(const Theory& th, const std::string& i, const std::string& j) {
  return tm::semiprod(tm::id(ty::value(i)), th.update(j), true);
}
Equation commutation6(const Theory& th, const std::string& i, const std::string& j) {
  Term r = swap_left(th, i, j);
  Term l = swap_right(th, i, j);
  return {tm::chain({th.update(j), tm::proj2(cod(r)), r}), tm::chain({th.update(i), tm::proj1(cod(l)), l}),
          EqKind::Strong};
}
Equation interaction3(const Theory& th, const std::string& i) {
  Term r = swap_left(th, i, i);
  return {tm::chain({th.update(i), tm::proj2(cod(r)), r}), tm::comp(th.update(i), tm::proj2(dom(r))),
          EqKind::Strong};
}
Equation annihilation(const Theory& th, const std::string& i) {
  return {tm::comp(th.update(i), th.lookup(i)), tm::id(ty::unit()), EqKind::Strong};
}
}  // namespace st

namespace {

// Small proof combinators over one theory.
struct P {
  const Theory& th;

  Derivation ax(const std::string& n) const { return dv::axiom(th, n); }
  Derivation a1(const std::string& i) const { return ax("A1_" + i); }
  Derivation a2(const std::string& i, const std::string& j) const { return ax("A2_" + i + "_" + j); }

  Derivation r(RuleId id, std::vector<Derivation> ps, Inst inst = {}) const {
    return dv::rule(th, id, std::move(ps), std::move(inst));
  }
  Derivation wsubs(Derivation d, const Term& t) const { return r(RuleId::WSubs, {std::move(d)}, {{"t", t}}); }
  Derivation subs(Derivation d, const Term& t) const { return r(RuleId::EqSubs, {std::move(d)}, {{"t", t}}); }
  Derivation repl(Derivation d, const Term& t) const { return r(RuleId::EqRepl, {std::move(d)}, {{"t", t}}); }
  Derivation wsym(Derivation d) const { return r(RuleId::WSym, {std::move(d)}); }
  Derivation sym(Derivation d) const { return r(RuleId::EqSym, {std::move(d)}); }
  Derivation wtrans(Derivation a, Derivation b) const { return r(RuleId::WTrans, {std::move(a), std::move(b)}); }
  Derivation trans(Derivation a, Derivation b) const { return r(RuleId::EqTrans, {std::move(a), std::move(b)}); }
  Derivation stow(Derivation d) const { return r(RuleId::SToW, {std::move(d)}); }
  Derivation wtos(Derivation d) const { return r(RuleId::WToS, {std::move(d)}); }

  // a, b : X -> 1 at level <= 1 give a == b.
  Derivation final_eq(const Term& a, const Term& b) const {
    Derivation da = r(RuleId::WFinal, {}, {{"t", a}});
    Derivation db = r(RuleId::WFinal, {}, {{"t", b}});
    return wtos(wtrans(std::move(da), wsym(std::move(db))));
  }
};

Term unit_of(const TypeExpr& x) { return tm::to_unit(x); }

// One side of (6)/(3): u_o . q_out . T where T is a semi-pure product whose
// effectful part updates n and lands in 1 through q_in.
struct Side {
  Term T;
  std::string o, n;
  Term q_out, q_in;  // projections out of cod T: onto V_o (pure side) and onto 1
  Term r_in, r_out;  // projections out of dom T: onto V_n and V_o
  Term whole(const Theory& th) const { return tm::chain({th.update(o), q_out, T}); }
};

Side lhs_side(const Theory& th, const std::string& i, const std::string& j) {
  Term T = st::swap_left(th, i, j);
  return {T, j, i, tm::proj2(cod(T)), tm::proj1(cod(T)), tm::proj1(dom(T)), tm::proj2(dom(T))};
}
Side rhs_side(const Theory& th, const std::string& i, const std::string& j) {
  Term T = st::swap_right(th, i, j);
  return {T, i, j, tm::proj1(cod(T)), tm::proj2(cod(T)), tm::proj2(dom(T)), tm::proj1(dom(T))};
}

// l_k . u_n . r ~ l_k . <>_{dom r}, k != n
Derivation far_plain(const P& p, const std::string& n, const Term& r, const std::string& k) {
  const Theory& th = p.th;
  Derivation a = p.wsubs(p.a2(n, k), r);
  Derivation b = p.stow(p.repl(p.final_eq(tm::comp(unit_of(ty::value(n)), r), unit_of(dom(r))), th.lookup(k)));
  return p.wtrans(std::move(a), std::move(b));
}

// Pr1 shape: l_k . u_o . q_out . T ~ l_k . <>_{V_o} . q_out . T, k != o
Derivation far1(const P& p, const Side& s, const std::string& k) {
  return p.wsubs(p.a2(s.o, k), tm::comp(s.q_out, s.T));
}

// Pr2 shape: l_k . <>_{V_o} . q_out . T ~ l_k . u_n . r_in
Derivation far2(const P& p, const Side& s, const std::string& k) {
  const Theory& th = p.th;
  Derivation e = p.subs(p.final_eq(tm::comp(unit_of(ty::value(s.o)), s.q_out), s.q_in), s.T);
  Derivation p2 = p.r(RuleId::SemiprodP2, {}, {{"t", s.T}});
  return p.stow(p.repl(p.trans(std::move(e), std::move(p2)), th.lookup(k)));
}

// Pr4 shape: l_k . u_o . q_out . T ~ l_k . <>_{dom T}, k != o, n
Derivation far(const P& p, const Side& s, const std::string& k) {
  return p.wtrans(p.wtrans(far1(p, s, k), far2(p, s, k)), far_plain(p, s.n, s.r_in, k));
}

// Pr5 shape: l_n . u_o . q_out . T ~ l_n . <>_{cod T} . T
Derivation inner1(const P& p, const Side& s) {
  const Theory& th = p.th;
  Derivation a = p.wsubs(p.a2(s.o, s.n), tm::comp(s.q_out, s.T));
  Derivation e = p.final_eq(tm::comp(unit_of(ty::value(s.o)), s.q_out), unit_of(cod(s.T)));
  Derivation b = p.stow(p.repl(p.subs(std::move(e), s.T), th.lookup(s.n)));
  return p.wtrans(std::move(a), std::move(b));
}

// Pr6 shape: l_n . <>_{cod T} . T ~ l_n . u_n . r_in
Derivation inner2(const P& p, const Side& s) {
  const Theory& th = p.th;
  Derivation e = p.subs(p.final_eq(unit_of(cod(s.T)), s.q_in), s.T);
  Derivation p2 = p.r(RuleId::SemiprodP2, {}, {{"t", s.T}});
  return p.stow(p.repl(p.trans(std::move(e), std::move(p2)), th.lookup(s.n)));
}

// Pr7 shape: l_n . u_o . q_out . T ~ r_in
Derivation inner(const P& p, const Side& s) {
  return p.wtrans(p.wtrans(inner1(p, s), inner2(p, s)), p.wsubs(p.a1(s.n), s.r_in));
}

// Pr8 shape: l_o . u_o . q_out . T ~ r_out
Derivation outer(const P& p, const Side& s) {
  Derivation a = p.wsubs(p.a1(s.o), tm::comp(s.q_out, s.T));
  Derivation p1 = p.r(RuleId::SemiprodP1, {}, {{"t", s.T}});
  return p.wtrans(std::move(a), std::move(p1));
}

Derivation observe(const P& p, const Side& s, const std::string& k) {
  if (k == s.o) return outer(p, s);
  if (k == s.n) return inner(p, s);
  return far(p, s, k);
}

std::string index_arg(const LemmaArgs& args, std::size_t k, const Theory& th, const char* lemma) {
  if (k >= args.size() || !std::holds_alternative<std::string>(args[k]))
    throw DecorError(ErrorCode::BadParams, std::string(lemma) + " expects a location as argument " +
                                               std::to_string(k + 1));
  const auto& i = std::get<std::string>(args[k]);
  if (!th.has_location(i)) throw DecorError(ErrorCode::BadParams, i + " is not a location of " + th.name);
  return i;
}

void arity(const LemmaArgs& args, std::size_t n, const char* lemma) {
  if (args.size() != n)
    throw DecorError(ErrorCode::BadParams, std::string(lemma) + " takes " + std::to_string(n) + " arguments");
}

Derivation annihilation_proof(const P& p, const std::string& i) {
  const Theory& th = p.th;
  Term g = tm::comp(th.update(i), th.lookup(i));
  std::vector<Derivation> lhs, rhs;
  for (const auto& j : th.locations) {
    if (j == i) {
      lhs.push_back(p.wsubs(p.a1(i), th.lookup(i)));
    } else {
      Derivation a = p.wsubs(p.a2(i, j), th.lookup(i));
      Derivation e = p.final_eq(tm::comp(unit_of(ty::value(i)), th.lookup(i)), tm::id(ty::unit()));
      lhs.push_back(p.wtrans(std::move(a), p.stow(p.repl(std::move(e), th.lookup(j)))));
    }
    rhs.push_back(p.r(RuleId::WRefl, {}, {{"f", th.lookup(j)}}));
  }
  Derivation u1 = p.r(RuleId::LocTupleUnique, std::move(lhs), {{"t", g}});
  Derivation u2 = p.r(RuleId::LocTupleUnique, std::move(rhs), {{"t", tm::id(ty::unit())}});
  return p.trans(std::move(u1), p.sym(std::move(u2)));
}

Derivation commutation_proof(const P& p, const std::string& i, const std::string& j) {
  const Theory& th = p.th;
  Side L = lhs_side(th, i, j), R = rhs_side(th, i, j);
  std::vector<Derivation> lp, rp;
  for (const auto& k : th.locations) {
    Derivation a = observe(p, L, k);
    Derivation b = observe(p, R, k);
    if (k != i && k != j) {
      a.label = "Pr4";
    } else if (k == i) {
      a.label = "Pr7";
      b.label = "Pr8";
    }
    lp.push_back(std::move(a));
    rp.push_back(std::move(b));
  }
  Derivation u1 = p.r(RuleId::LocTupleUnique, std::move(lp), {{"t", L.whole(th)}});
  Derivation u2 = p.r(RuleId::LocTupleUnique, std::move(rp), {{"t", R.whole(th)}});
  return p.trans(std::move(u1), p.sym(std::move(u2)));
}

Derivation interaction_proof(const P& p, const std::string& i) {
  const Theory& th = p.th;
  Side L = lhs_side(th, i, i);
  Term r2 = L.r_out;  // p2 on V_i x V_i
  std::vector<Derivation> lp, rp;
  for (const auto& k : th.locations) {
    if (k == i) {
      lp.push_back(outer(p, L));
      rp.push_back(p.wsubs(p.a1(i), r2));
    } else {
      lp.push_back(far(p, L, k));
      rp.push_back(far_plain(p, i, r2, k));
    }
  }
  Derivation u1 = p.r(RuleId::LocTupleUnique, std::move(lp), {{"t", L.whole(th)}});
  Derivation u2 = p.r(RuleId::LocTupleUnique, std::move(rp), {{"t", tm::comp(th.update(i), r2)}});
  return p.trans(std::move(u1), p.sym(std::move(u2)));
}

Derivation pr_proof(const P& p, int n, const std::string& i, const std::string& j, const std::string& k) {
  const Theory& th = p.th;
  Side L = lhs_side(th, i, j), R = rhs_side(th, i, j);
  auto need = [&](bool ok, const char* what) {
    if (!ok) throw DecorError(ErrorCode::BadParams, "pr" + std::to_string(n) + " requires " + what);
  };
  Derivation d;
  switch (n) {
    case 1: need(k != j, "k != j"); d = far1(p, L, k); break;
    case 2: d = far2(p, L, k); break;
    case 3: need(k != i, "k != i"); d = far_plain(p, i, L.r_in, k); break;
    case 4: need(k != i && k != j, "k distinct from i and j"); d = far(p, L, k); break;
    case 5: d = inner1(p, L); break;
    case 6: d = inner2(p, L); break;
    case 7: d = inner(p, L); break;
    case 8: d = outer(p, R); break;
    default: throw DecorError(ErrorCode::UnknownLemma, "pr" + std::to_string(n));
  }
  d.label = "Pr" + std::to_string(n);
  return d;
}

}  // namespace

const std::vector<std::string>& states_lemma_ids() {
  static const std::vector<std::string> ids{"final-uniqueness", "annihilation", "commutation-6", "interaction-3",
                                            "pr1", "pr2", "pr3", "pr4", "pr5", "pr6", "pr7", "pr8"};
  return ids;
}

Derivation derive_states_lemma(const Theory& th, const std::string& id, const LemmaArgs& args) {
  if (th.flavor != Flavor::States)
    throw DecorError(ErrorCode::FlavorViolation, id + " is a states lemma");
  P p{th};
  if (id == "final-uniqueness") {
    arity(args, 1, "final-uniqueness");
    if (!std::holds_alternative<Term>(args[0]))
      throw DecorError(ErrorCode::BadParams, "final-uniqueness expects a term");
    return derive_final_uniqueness(th, std::get<Term>(args[0]));
  }
  if (id == "annihilation") {
    arity(args, 1, "annihilation");
    return dv::labelled(annihilation_proof(p, index_arg(args, 0, th, "annihilation")), "annihilation");
  }
  if (id == "commutation-6") {
    arity(args, 2, "commutation-6");
    std::string i = index_arg(args, 0, th, "commutation-6"), j = index_arg(args, 1, th, "commutation-6");
    if (i == j) throw DecorError(ErrorCode::BadParams, "commutation-6 requires i != j");
    return dv::labelled(commutation_proof(p, i, j), "commutation-6");
  }
  if (id == "interaction-3") {
    arity(args, 1, "interaction-3");
    return dv::labelled(interaction_proof(p, index_arg(args, 0, th, "interaction-3")), "interaction-3");
  }
  if (id.size() == 3 && id[0] == 'p' && id[1] == 'r' && id[2] >= '1' && id[2] <= '8') {
    arity(args, 3, id.c_str());
    std::string i = index_arg(args, 0, th, id.c_str()), j = index_arg(args, 1, th, id.c_str()),
                k = index_arg(args, 2, th, id.c_str());
    if (i == j) throw DecorError(ErrorCode::BadParams, id + " requires i != j");
    return pr_proof(p, id[2] - '0', i, j, k);
  }
  throw DecorError(ErrorCode::UnknownLemma, id);
}

std::vector<SevenGoal> seven_equation_goals(const Theory& th, const std::string& i, const std::string& j,
                                            const std::string& k) {
  if (th.flavor != Flavor::States) throw DecorError(ErrorCode::FlavorViolation, "seven laws need states");
  for (const auto& x : {i, j})
    if (!th.has_location(x)) throw DecorError(ErrorCode::BadParams, x + " is not a location");
  if (!k.empty() && !th.has_location(k)) throw DecorError(ErrorCode::BadParams, k + " is not a location");
  if (i == j) throw DecorError(ErrorCode::BadParams, "laws 5-7 need two distinct locations");
  Term li = th.lookup(i), lj = th.lookup(j), ui = th.update(i);
  TypeExpr Vi = ty::value(i), Vj = ty::value(j);
  std::vector<SevenGoal> out;
  auto add = [&](int n, const char* name, Equation e) {
    SevenGoal g{n, name, e, {}};
    if (same(cod(e.lhs), ty::unit()))
      for (const auto& obs : th.locations)
        if (k.empty() || obs == k)
          g.observed.push_back({tm::comp(th.lookup(obs), e.lhs), tm::comp(th.lookup(obs), e.rhs), EqKind::Weak});
    out.push_back(std::move(g));
  };
  add(1, "annihilation lookup-update", st::annihilation(th, i));
  add(2, "interaction lookup-lookup", {tm::chain({li, tm::to_unit(Vi), li}), li, EqKind::Strong});
  add(3, "interaction update-update", st::interaction3(th, i));
  add(4, "interaction update-lookup", {tm::comp(li, ui), tm::id(Vi), EqKind::Weak});
  add(5, "commutation lookup-lookup",
      {tm::acc_pair(li, tm::chain({lj, tm::to_unit(Vi), li})),
       tm::acc_pair(tm::chain({li, tm::to_unit(Vj), lj}), lj), EqKind::Strong});
  add(6, "commutation update-update", st::commutation6(th, i, j));
  add(7, "commutation update-lookup",
      {tm::comp(lj, ui), tm::case_prod(tm::comp(lj, tm::to_unit(Vi)), ui), EqKind::Strong});
  return out;
}

}  // namespace decor
