#include "decor/exceptions.hpp"

#include <set>

#include "decor/error.hpp"
#include "decor/translate.hpp"

namespace decor {

Theory build_exceptions_theory(const std::vector<std::string>& constructors, const std::string& name) {
  std::set<std::string> seen;
  for (const auto& i : constructors)
    if (!seen.insert(i).second) throw DecorError(ErrorCode::DuplicateLocation, "duplicate constructor " + i);
  Theory th;
  th.name = name;
  th.flavor = Flavor::Exceptions;
  th.constructors = constructors;
  for (const auto& i : constructors) {
    th.add_generator(tm::gen("t_" + i, ty::param(i), ty::empty(), 1, GenRole::Throw, i));
    th.add_generator(tm::gen("c_" + i, ty::empty(), ty::param(i), 2, GenRole::Catch, i));
  }
  for (const auto& i : constructors)
    th.add_axiom("B1_" + i, {tm::comp(th.catcher(i), th.thrower(i)), tm::id(ty::param(i)), EqKind::Weak});
  for (const auto& i : constructors)
    for (const auto& j : constructors) {
      if (i == j) continue;
      th.add_axiom("B2_" + i + "_" + j,
                   {tm::comp(th.catcher(i), th.thrower(j)),
                    tm::comp(tm::from_empty(ty::param(i)), th.thrower(j)), EqKind::Weak});
    }
  return th;
}

Term raise_term(const Theory& th, const std::string& i, const TypeExpr& Y) {
  if (th.flavor != Flavor::Exceptions) throw DecorError(ErrorCode::FlavorViolation, "raise needs exceptions");
  if (!th.has_constructor(i)) throw DecorError(ErrorCode::UnknownConstructor, i);
  check_type(th, Y);
  return tm::comp(tm::from_empty(Y), th.thrower(i));
}

void add_catch_all(Theory& th) {
  if (th.flavor != Flavor::Exceptions) throw DecorError(ErrorCode::FlavorViolation, "catch-all needs exceptions");
  if (th.find_generator("c_all")) return;
  Term c = tm::gen("c_all", ty::empty(), ty::unit(), 2, GenRole::CatchAll, "");
  th.add_generator(c);
  for (const auto& j : th.constructors)
    th.add_axiom("C_all_" + j, {tm::comp(c, th.thrower(j)), tm::to_unit(ty::param(j)), EqKind::Weak});
}

namespace {
Handled build_handler(const Theory& th, const HandlerSpec& spec) {
  if (th.flavor != Flavor::Exceptions) throw DecorError(ErrorCode::FlavorViolation, "handlers need exceptions");
  if (!spec.body) throw DecorError(ErrorCode::BadParams, "handler without a body");
  if (spec.clauses.empty() && !spec.catch_all) throw DecorError(ErrorCode::EmptyHandler, "no clauses");
  typecheck(th, spec.body);
  if (decoration(spec.body) > 1)
    throw DecorError(ErrorCode::SideConditionViolated, "handled body must be a propagator");
  TypeExpr Y = cod(spec.body);
  auto check_branch = [&](const Term& g, const TypeExpr& from, const std::string& what) {
    typecheck(th, g);
    if (!same(cod(g), Y))
      throw DecorError(ErrorCode::CodomainMismatch, what + " returns " + to_string(cod(g)) + ", body returns " +
                                                        to_string(Y));
    if (!same(dom(g), from))
      throw DecorError(ErrorCode::CompositionMismatch, what + " must start at " + to_string(from));
    if (decoration(g) > 1) throw DecorError(ErrorCode::SideConditionViolated, what + " must be a propagator");
  };
  Term acc;
  if (spec.catch_all) {
    check_branch(*spec.catch_all, ty::unit(), "catch-all handler");
    auto c = th.find_generator("c_all");
    if (!c) throw DecorError(ErrorCode::UnknownGenerator, "c_all (call add_catch_all first)");
    acc = tm::comp(*spec.catch_all, *c);
  }
  for (auto it = spec.clauses.rbegin(); it != spec.clauses.rend(); ++it) {
    const auto& [i, g] = *it;
    if (!th.has_constructor(i)) throw DecorError(ErrorCode::UnknownConstructor, i);
    check_branch(g, ty::param(i), "handler for " + i);
    Term c = th.catcher(i);
    acc = acc ? tm::comp(tm::case_sum(g, acc), c) : tm::comp(g, c);
  }
  Handled h;
  h.chain = acc;
  h.handle = tm::comp(tm::case_sum(tm::id(Y), acc), spec.body);
  h.result = tm::coerce(h.handle);
  return h;
}
}  // namespace

Handled handle_term(Theory& th, const HandlerSpec& spec) {
  if (spec.catch_all) add_catch_all(th);
  return build_handler(th, spec);
}

Handled handle_term(const Theory& th, const HandlerSpec& spec) { return build_handler(th, spec); }

SemiPure semi_pure_coproduct(Theory& th, const Term& f, const Term& g, bool pure_left) {
  if (th.flavor == Flavor::States)
    throw DecorError(ErrorCode::FlavorViolation, "semi-pure coproducts live in exceptions theories");
  typecheck(th, f);
  typecheck(th, g);
  if (decoration(f) != 0) throw DecorError(ErrorCode::PureSideNotPure, to_string(f));
  Term t = tm::semicoprod(f, g, pure_left);
  Judgment j1 = apply_rule(th, RuleId::SemicoprodP1, {}, {{"t", t}});
  Judgment j2 = apply_rule(th, RuleId::SemicoprodP2, {}, {{"t", t}});
  std::string tag = "[" + to_string(t) + "]";
  if (!th.find_axiom("P1" + tag)) th.add_axiom("P1" + tag, j1.eq);
  if (!th.find_axiom("P2" + tag)) th.add_axiom("P2" + tag, j2.eq);
  return {t, j1.eq, j2.eq};
}

namespace ex {
Term swap_left(const Theory& th, const std::string& i, const std::string& j) {
  return tm::semicoprod(tm::id(ty::param(j)), th.catcher(i), false);
}
Term swap_right(const Theory& th, const std::string& i, const std::string& j) {
  return tm::semicoprod(tm::id(ty::param(i)), th.catcher(j), true);
}
Equation commutation6(const Theory& th, const std::string& i, const std::string& j) {
  Term l = swap_left(th, i, j), r = swap_right(th, i, j);
  return {tm::chain({l, tm::inj2(dom(l)), th.catcher(j)}), tm::chain({r, tm::inj1(dom(r)), th.catcher(i)}),
          EqKind::Strong};
}
Equation interaction3(const Theory& th, const std::string& i) {
  Term l = swap_left(th, i, i);
  return {tm::chain({l, tm::inj2(dom(l)), th.catcher(i)}), tm::comp(tm::inj2(cod(l)), th.catcher(i)),
          EqKind::Strong};
}
Equation key_annihilation(const Theory& th, const std::string& i) {
  return {tm::comp(th.thrower(i), th.catcher(i)), tm::id(ty::empty()), EqKind::Strong};
}
}  // namespace ex

namespace {

struct P {
  const Theory& th;
  Derivation r(RuleId id, std::vector<Derivation> ps, Inst inst = {}) const {
    return dv::rule(th, id, std::move(ps), std::move(inst));
  }
  Derivation subs(Derivation d, const Term& t) const { return r(RuleId::EqSubs, {std::move(d)}, {{"t", t}}); }
  Derivation repl(Derivation d, const Term& t) const { return r(RuleId::EqRepl, {std::move(d)}, {{"t", t}}); }
  Derivation wrepl(Derivation d, const Term& t) const { return r(RuleId::WRepl, {std::move(d)}, {{"t", t}}); }
  Derivation sym(Derivation d) const { return r(RuleId::EqSym, {std::move(d)}); }
  Derivation wsym(Derivation d) const { return r(RuleId::WSym, {std::move(d)}); }
  Derivation trans(Derivation a, Derivation b) const { return r(RuleId::EqTrans, {std::move(a), std::move(b)}); }
  Derivation trans(std::vector<Derivation> ds) const {
    Derivation acc = std::move(ds.at(0));
    for (std::size_t k = 1; k < ds.size(); ++k) acc = trans(std::move(acc), std::move(ds[k]));
    return acc;
  }
  Derivation wtrans(Derivation a, Derivation b) const { return r(RuleId::WTrans, {std::move(a), std::move(b)}); }
  Derivation stow(Derivation d) const { return r(RuleId::SToW, {std::move(d)}); }

  // a, b : 0 -> X at level <= 1 give a == b.
  Derivation initial_eq(const Term& a, const Term& b) const {
    Derivation da = r(RuleId::WInitial, {}, {{"t", a}});
    Derivation db = r(RuleId::WInitial, {}, {{"t", b}});
    return r(RuleId::WToSProp, {wtrans(std::move(da), wsym(std::move(db)))});
  }
};

// For S = f (+) c (pure part f = id) and pc = pcase(g, h): builds
// [pure branch | other branch . c] == pc . S . in_pure.
Derivation bridge(const P& p, const Term& pc, const Term& S) {
  bool left = S->pure_left;
  TypeExpr D = dom(S);  // P + 0 or 0 + P
  Term in_pure = left ? tm::inj1(D) : tm::inj2(D);
  Term in_other = left ? tm::inj2(D) : tm::inj1(D);
  Term c = S->kids[1];
  Term K = tm::chain({pc, S, in_pure});

  // weak part: K ~ pure branch
  Derivation w1 = p.wrepl(p.r(RuleId::SemicoprodP1, {}, {{"t", S}}), pc);
  Derivation w2 = p.stow(p.r(left ? RuleId::PropcaseInl : RuleId::PropcaseInr, {}, {{"t", pc}}));
  Derivation weak = p.wtrans(std::move(w1), std::move(w2));

  // empty part: K . []_P == other branch . c
  Derivation e1 = p.repl(p.initial_eq(tm::comp(in_pure, tm::from_empty(dom(in_pure))), in_other), tm::comp(pc, S));
  Derivation e2 = p.repl(p.r(RuleId::SemicoprodP2, {}, {{"t", S}}), pc);
  Derivation e3 = p.subs(p.r(left ? RuleId::PropcaseInr : RuleId::PropcaseInl, {}, {{"t", pc}}), c);
  Derivation strong = p.trans({std::move(e1), std::move(e2), std::move(e3)});
  return p.sym(p.r(RuleId::SumCaseUnique, {std::move(weak), std::move(strong)}, {{"t", K}}));
}

Theory dual_states(const Theory& th) { return dualize_theory(th); }

Derivation via_states(const Theory& th, const std::string& id, const LemmaArgs& args) {
  Theory S = dual_states(th);
  LemmaArgs sargs;
  for (const auto& a : args) {
    if (auto* t = std::get_if<Term>(&a)) sargs.push_back(dualize_term(*t, Flavor::Exceptions));
    else if (auto* y = std::get_if<TypeExpr>(&a)) sargs.push_back(dualize_type(*y, Flavor::Exceptions));
    else sargs.push_back(a);
  }
  Derivation d = derive_states_lemma(S, id, sargs);
  return dualize_derivation(S, d);
}

std::string ctor_arg(const Theory& th, const LemmaArgs& args, std::size_t k, const std::string& lemma) {
  if (k >= args.size() || !std::holds_alternative<std::string>(args[k]))
    throw DecorError(ErrorCode::BadParams, lemma + " expects a constructor as argument " + std::to_string(k + 1));
  const auto& i = std::get<std::string>(args[k]);
  if (!th.has_constructor(i)) throw DecorError(ErrorCode::BadParams, i + " is not a constructor of " + th.name);
  return i;
}

Term term_arg(const Theory& th, const LemmaArgs& args, std::size_t k, const std::string& lemma) {
  if (k >= args.size() || !std::holds_alternative<Term>(args[k]))
    throw DecorError(ErrorCode::BadParams, lemma + " expects a term as argument " + std::to_string(k + 1));
  Term t = std::get<Term>(args[k]);
  typecheck(th, t);
  if (decoration(t) > 1) throw DecorError(ErrorCode::BadParams, lemma + ": " + to_string(t) + " is a catcher");
  return t;
}

// case(id | C1) . f == case(id | C2) . f, then the coerced forms.
Derivation seal(const P& p, Derivation c1c2, const Term& f) {
  const Equation& e = c1c2.conclusion.eq;
  TypeExpr Y = cod(f);
  Term K = tm::case_sum(tm::id(Y), e.lhs);
  Derivation weak = p.r(RuleId::SumCaseWeak, {}, {{"t", K}});
  Derivation strong = p.trans(p.r(RuleId::SumCaseEmpty, {}, {{"t", K}}), std::move(c1c2));
  Derivation cases = p.r(RuleId::SumCaseUnique, {std::move(weak), std::move(strong)}, {{"t", K}});
  Derivation h = p.subs(std::move(cases), f);
  const Equation& he = h.conclusion.eq;
  Term d1 = tm::coerce(he.lhs);
  Derivation w = p.wtrans(p.r(RuleId::CoerceWeak, {}, {{"t", d1}}), p.stow(std::move(h)));
  return p.r(RuleId::CoerceUnique, {std::move(w)});
}

void same_codomain(const std::vector<Term>& ts, const std::string& lemma) {
  for (const auto& t : ts)
    if (!same(cod(t), cod(ts[0])))
      throw DecorError(ErrorCode::CodomainMismatch, lemma + ": branches and body must share a codomain");
}

}  // namespace

const std::vector<std::string>& exceptions_lemma_ids() {
  static const std::vector<std::string> ids{"key-annihilation", "initial-uniqueness", "commutation-6",
                                            "interaction-3",    "catch-throw",        "handler-commute",
                                            "handler-idempotent", "bridge"};
  return ids;
}

Derivation derive_exceptions_lemma(const Theory& th, const std::string& id, const LemmaArgs& args) {
  if (th.flavor != Flavor::Exceptions) throw DecorError(ErrorCode::FlavorViolation, id + " is an exceptions lemma");
  P p{th};
  auto arity = [&](std::size_t lo, std::size_t hi) {
    if (args.size() < lo || args.size() > hi)
      throw DecorError(ErrorCode::BadParams, id + ": wrong number of arguments");
  };
  if (id == "key-annihilation") {
    arity(1, 1);
    ctor_arg(th, args, 0, id);
    return dv::labelled(via_states(th, "annihilation", args), id);
  }
  if (id == "initial-uniqueness") {
    arity(1, 1);
    if (!std::holds_alternative<Term>(args[0])) throw DecorError(ErrorCode::BadParams, id + " expects a term");
    Term f = std::get<Term>(args[0]);
    typecheck(th, f);
    if (decoration(f) > 1) throw DecorError(ErrorCode::NotAnAccessor, to_string(f) + " is a catcher");
    return dv::labelled(via_states(th, "final-uniqueness", args), id);
  }
  if (id == "commutation-6") {
    arity(2, 2);
    if (ctor_arg(th, args, 0, id) == ctor_arg(th, args, 1, id))
      throw DecorError(ErrorCode::BadParams, "commutation-6 requires i != j");
    return dv::labelled(via_states(th, id, args), id);
  }
  if (id == "interaction-3") {
    arity(1, 1);
    ctor_arg(th, args, 0, id);
    return dv::labelled(via_states(th, id, args), id);
  }
  if (id == "catch-throw") {
    arity(1, 2);
    std::string i = ctor_arg(th, args, 0, id);
    TypeExpr Y = ty::param(i);
    if (args.size() == 2) {
      if (!std::holds_alternative<TypeExpr>(args[1])) throw DecorError(ErrorCode::BadParams, id + " expects a type");
      Y = std::get<TypeExpr>(args[1]);
      check_type(th, Y);
    }
    Derivation ka = via_states(th, "annihilation", {i});
    return dv::labelled(p.repl(std::move(ka), tm::from_empty(Y)), id);
  }
  if (id == "bridge") {
    arity(4, 4);
    std::string i = ctor_arg(th, args, 0, id), j = ctor_arg(th, args, 1, id);
    Term g = term_arg(th, args, 2, id), h = term_arg(th, args, 3, id);
    return dv::labelled(bridge(p, tm::prop_case(g, h), ex::swap_right(th, i, j)), id);
  }
  if (id == "handler-commute") {
    arity(5, 5);
    std::string i = ctor_arg(th, args, 0, id), j = ctor_arg(th, args, 1, id);
    if (i == j) throw DecorError(ErrorCode::BadParams, "handler-commute requires i != j");
    Term f = term_arg(th, args, 2, id), g = term_arg(th, args, 3, id), h = term_arg(th, args, 4, id);
    same_codomain({f, g, h}, id);
    Term pc = tm::prop_case(g, h);
    // [g | h.c_j] == pc . SR . in1   and   [h | g.c_i] == pc . SL . in2
    Derivation bl = p.subs(bridge(p, pc, ex::swap_right(th, i, j)), th.catcher(i));
    Derivation six = via_states(th, "commutation-6", {i, j});
    Derivation mid = p.repl(p.sym(std::move(six)), pc);
    Derivation br = p.sym(p.subs(bridge(p, pc, ex::swap_left(th, i, j)), th.catcher(j)));
    Derivation c1c2 = p.trans({std::move(bl), std::move(mid), std::move(br)});
    return dv::labelled(seal(p, std::move(c1c2), f), id);
  }
  if (id == "handler-idempotent") {
    arity(4, 4);
    std::string i = ctor_arg(th, args, 0, id);
    Term f = term_arg(th, args, 1, id), g = term_arg(th, args, 2, id), h = term_arg(th, args, 3, id);
    same_codomain({f, g, h}, id);
    Term pc = tm::prop_case(h, g);
    Derivation b = p.subs(bridge(p, pc, ex::swap_left(th, i, i)), th.catcher(i));
    Derivation three = p.repl(via_states(th, "interaction-3", {i}), pc);
    Derivation inr = p.subs(p.r(RuleId::PropcaseInr, {}, {{"t", pc}}), th.catcher(i));
    Derivation c1c2 = p.trans({std::move(b), std::move(three), std::move(inr)});
    return dv::labelled(seal(p, std::move(c1c2), f), id);
  }
  throw DecorError(ErrorCode::UnknownLemma, id);
}

Derivation derive_lemma(const Theory& th, const std::string& id, const LemmaArgs& args) {
  switch (th.flavor) {
    case Flavor::States: return derive_states_lemma(th, id, args);
    case Flavor::Exceptions: return derive_exceptions_lemma(th, id, args);
    case Flavor::Plain: break;
  }
  throw DecorError(ErrorCode::FlavorViolation, "plain theories have no lemma catalog");
}

}  // namespace decor
