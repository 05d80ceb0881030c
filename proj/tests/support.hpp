#pragma once
// Shared fixtures for the unit tests and the acceptance binary.

#include <random>
#include <string>
#include <vector>

#include "decor/error.hpp"
#include "decor/exceptions.hpp"
#include "decor/model.hpp"
#include "decor/translate.hpp"

namespace decor::testing {

struct NamedDerivation {
  std::string name;
  const Theory* theory;
  Derivation d;
};

// Theories the built-in derivations live in. Exceptions theory E carries
// the user generators the handler lemmas quantify over.
struct Catalog {
  Theory S2 = build_states_theory({"x", "y"});
  Theory S3 = build_states_theory({"x", "y", "z"});
  Theory E;
  std::vector<NamedDerivation> items;

  Catalog() {
    E = build_exceptions_theory({"x", "y"});
    TypeExpr A = ty::named("A"), B = ty::named("B");
    E.add_generator(tm::gen("f", A, B, 1));
    E.add_generator(tm::gen("g", ty::param("x"), B, 1));
    E.add_generator(tm::gen("h", ty::param("y"), B, 1));
    E.add_generator(tm::gen("h2", ty::param("x"), B, 1));
    auto s = [](const char* x) { return Meta{std::string(x)}; };
    auto gen = [&](const char* n) { return Meta{*E.find_generator(n)}; };
    add("final-uniqueness(p1)", S2,
        derive_final_uniqueness(S2, tm::proj1(ty::prod(ty::unit(), ty::value("x")))));
    add("final-uniqueness(<> . l_x)", S2,
        derive_final_uniqueness(S2, tm::comp(tm::to_unit(ty::value("x")), S2.lookup("x"))));
    add("annihilation(x)", S2, derive_lemma(S2, "annihilation", {s("x")}));
    add("annihilation(y)", S2, derive_lemma(S2, "annihilation", {s("y")}));
    add("interaction-3(x)", S2, derive_lemma(S2, "interaction-3", {s("x")}));
    add("commutation-6(x,y)", S2, derive_lemma(S2, "commutation-6", {s("x"), s("y")}));
    add("commutation-6(y,x) in 3 locations", S3, derive_lemma(S3, "commutation-6", {s("y"), s("x")}));
    add("pr1(x,y,x)", S2, derive_lemma(S2, "pr1", {s("x"), s("y"), s("x")}));
    add("pr2(x,y,x)", S2, derive_lemma(S2, "pr2", {s("x"), s("y"), s("x")}));
    add("pr3(x,y,y)", S2, derive_lemma(S2, "pr3", {s("x"), s("y"), s("y")}));
    add("pr4(x,y,z)", S3, derive_lemma(S3, "pr4", {s("x"), s("y"), s("z")}));
    for (const char* pr : {"pr5", "pr6", "pr7", "pr8"})
      add(std::string(pr) + "(x,y,z)", S3, derive_lemma(S3, pr, {s("x"), s("y"), s("z")}));
    add("key-annihilation(x)", E, derive_lemma(E, "key-annihilation", {s("x")}));
    add("catch-throw(x)", E, derive_lemma(E, "catch-throw", {s("x")}));
    add("handler-commute(x,y)", E, derive_lemma(E, "handler-commute", {s("x"), s("y"), gen("f"), gen("g"), gen("h")}));
    add("handler-idempotent(x)", E, derive_lemma(E, "handler-idempotent", {s("x"), gen("f"), gen("g"), gen("h2")}));
  }

  void add(std::string n, const Theory& th, Derivation d) { items.push_back({std::move(n), &th, std::move(d)}); }
};

// ---- random terms over a random theory ----

struct RandomTheory {
  Theory th;
  FiniteModel model;
};

inline RandomTheory random_theory(std::mt19937& rng) {
  std::uniform_int_distribution<int> coin(0, 1), n_idx(1, 2), car(1, 3);
  bool states = coin(rng) == 0;
  std::vector<std::string> idx = n_idx(rng) == 1 ? std::vector<std::string>{"x"} : std::vector<std::string>{"x", "y"};
  Theory th = states ? build_states_theory(idx, "S") : build_exceptions_theory(idx, "E");
  std::vector<int> sizes;
  for (std::size_t k = 0; k < idx.size(); ++k) sizes.push_back(car(rng));
  return {th, make_model(th, sizes)};
}

// A pool of well-typed terms of size <= max_size, grown by random
// constructor applications starting from the generators and structural atoms.
class TermPool {
 public:
  TermPool(const Theory& th, std::mt19937& rng, std::size_t max_size = 8) : th_(th), rng_(rng), max_(max_size) {
    bool st = th.flavor == Flavor::States;
    const auto& idx = st ? th.locations : th.constructors;
    std::vector<TypeExpr> base{st ? ty::unit() : ty::empty()};
    for (const auto& i : idx) base.push_back(st ? ty::value(i) : ty::param(i));
    for (const auto& i : idx) {
      if (st) {
        push(th.lookup(i));
        push(th.update(i));
      } else {
        push(th.thrower(i));
        push(th.catcher(i));
      }
    }
    for (const auto& t : base) {
      push(tm::id(t));
      push(st ? tm::to_unit(t) : tm::from_empty(t));
    }
    for (const auto& a : base)
      for (const auto& b : base) {
        if (st) {
          TypeExpr p = ty::prod(a, b);
          push(tm::proj1(p));
          push(tm::proj2(p));
        } else {
          TypeExpr c = ty::coprod(a, b);
          push(tm::inj1(c));
          push(tm::inj2(c));
        }
      }
    for (int k = 0; k < 400; ++k) grow();
  }

  const std::vector<Term>& terms() const { return terms_; }

  Term pick() { return terms_[std::uniform_int_distribution<std::size_t>(0, terms_.size() - 1)(rng_)]; }

  // Some term with the same signature as t (possibly t itself).
  Term partner(const Term& t) {
    std::vector<Term> c;
    for (const auto& u : terms_)
      if (same(dom(u), dom(t)) && same(cod(u), cod(t))) c.push_back(u);
    return c[std::uniform_int_distribution<std::size_t>(0, c.size() - 1)(rng_)];
  }

  Term with_cod(const TypeExpr& y) {
    std::vector<Term> c;
    for (const auto& u : terms_)
      if (same(cod(u), y)) c.push_back(u);
    if (c.empty()) return tm::id(y);
    return c[std::uniform_int_distribution<std::size_t>(0, c.size() - 1)(rng_)];
  }

  Term with_dom(const TypeExpr& x) {
    std::vector<Term> c;
    for (const auto& u : terms_)
      if (same(dom(u), x)) c.push_back(u);
    if (c.empty()) return tm::id(x);
    return c[std::uniform_int_distribution<std::size_t>(0, c.size() - 1)(rng_)];
  }

 private:
  void push(const Term& t) {
    if (size(t) > max_) return;
    for (const auto& u : terms_)
      if (same(u, t)) return;
    terms_.push_back(t);
  }

  void grow() {
    bool st = th_.flavor == Flavor::States;
    int op = std::uniform_int_distribution<int>(0, 5)(rng_);
    try {
      Term a = pick();
      Term t;
      switch (op) {
        case 0:
        case 1: t = tm::comp(with_dom(cod(a)), a); break;
        case 2: {
          Term f = pick();
          if (decoration(f) != 0) return;
          bool left = std::uniform_int_distribution<int>(0, 1)(rng_) == 0;
          t = st ? tm::semiprod(f, a, left) : tm::semicoprod(f, a, left);
          break;
        }
        case 3: {
          Term b = pick();
          if (decoration(a) > 1 || decoration(b) > 1) return;
          if (st) {
            if (!same(dom(a), dom(b))) return;
            t = tm::acc_pair(a, b);
          } else {
            if (!same(cod(a), cod(b))) return;
            t = tm::prop_case(a, b);
          }
          break;
        }
        case 4: t = st ? tm::coerce_acc(a) : tm::coerce(a); break;
        default: {
          // case_prod / case_sum around a level-1 term
          if (decoration(a) > 1) return;
          if (st) {
            Term k = with_dom(dom(a));
            if (!same(cod(k), ty::unit())) k = tm::to_unit(dom(a));
            t = tm::case_prod(a, k);
          } else {
            t = tm::case_sum(a, tm::from_empty(cod(a)));
          }
        }
      }
      typecheck(th_, t);
      push(t);
    } catch (const DecorError&) {
    }
  }

  const Theory& th_;
  std::mt19937& rng_;
  std::size_t max_;
  std::vector<Term> terms_;
};

// Random derivations: rule applications with random instantiations over a
// pool of earlier conclusions, keeping the ones the kernel accepts.
class DerivationPool {
 public:
  DerivationPool(const Theory& th, TermPool& terms, std::mt19937& rng) : th_(th), terms_(terms), rng_(rng) {
    for (const auto& a : th.axioms) ds_.push_back(dv::axiom(th, a.name));
  }

  const std::vector<Derivation>& derivations() const { return ds_; }

  // One attempt; returns true when a new derivation was added. Half the
  // attempts are blind, half extend an earlier equation with a rule that
  // consumes it.
  bool step() {
    if (std::uniform_int_distribution<int>(0, 1)(rng_) == 0) return blind();
    return extend();
  }

 private:
  bool add(RuleId r, std::vector<Derivation> prem, Inst inst) {
    if (!rule_allowed(r, th_.flavor)) return false;
    try {
      Derivation d = dv::rule(th_, r, std::move(prem), std::move(inst));
      if (node_count(d) > 40) return false;
      ds_.push_back(std::move(d));
      return true;
    } catch (const DecorError&) {
      return false;
    }
  }

  bool blind() {
    const auto& rules = all_rules();
    RuleId r = rules[pick(rules.size())];
    std::vector<Derivation> prem;
    int np = std::uniform_int_distribution<int>(0, 2)(rng_);
    for (int k = 0; k < np && !ds_.empty(); ++k) prem.push_back(ds_[pick(ds_.size())]);
    Inst inst;
    Term t = terms_.pick();
    switch (std::uniform_int_distribution<int>(0, 4)(rng_)) {
      case 0: break;
      case 1: inst["t"] = t; break;
      case 2: inst["f"] = t; break;
      case 3: inst["X"] = dom(t); break;
      default: inst["t"] = t; inst["X"] = cod(t); break;
    }
    return add(r, std::move(prem), std::move(inst));
  }

  bool extend() {
    std::vector<std::size_t> eqs;
    for (std::size_t k = 0; k < ds_.size(); ++k)
      if (ds_[k].conclusion.kind == Judgment::Kind::Holds) eqs.push_back(k);
    if (eqs.empty()) return false;
    const Derivation& d = ds_[eqs[pick(eqs.size())]];
    const Equation& e = d.conclusion.eq;
    static const RuleId subs[] = {RuleId::EqSubs, RuleId::WSubs, RuleId::WSubsPure};
    static const RuleId repl[] = {RuleId::EqRepl, RuleId::WRepl, RuleId::WReplPure};
    static const RuleId unary[] = {RuleId::EqSym, RuleId::WSym, RuleId::SToW, RuleId::WToS, RuleId::WToSProp};
    switch (std::uniform_int_distribution<int>(0, 3)(rng_)) {
      case 0: return add(subs[pick(3)], {d}, {{"t", terms_.with_cod(dom(e.lhs))}});
      case 1: return add(repl[pick(3)], {d}, {{"t", terms_.with_dom(cod(e.lhs))}});
      case 2: return add(unary[pick(5)], {d}, {});
      default: {
        for (std::size_t k : eqs) {
          const Equation& o = ds_[k].conclusion.eq;
          if (compare(normalize_assoc(o.lhs), normalize_assoc(e.rhs)) != 0) continue;
          RuleId r = e.kind == EqKind::Strong && o.kind == EqKind::Strong ? RuleId::EqTrans : RuleId::WTrans;
          return add(r, {d, ds_[k]}, {});
        }
        return false;
      }
    }
  }

  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  const Theory& th_;
  TermPool& terms_;
  std::mt19937& rng_;
  std::vector<Derivation> ds_;
};

}  // namespace decor::testing
