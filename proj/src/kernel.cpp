#include "decor/kernel.hpp"

#include <algorithm>
#include <array>

#include "decor/error.hpp"

namespace decor {

namespace {
struct RuleInfo {
  RuleId id;
  const char* name;
};

constexpr std::array kRules{
    RuleInfo{RuleId::Comp, "comp"},
    RuleInfo{RuleId::Id, "id"},
    RuleInfo{RuleId::Assoc, "assoc"},
    RuleInfo{RuleId::IdSrc, "id-src"},
    RuleInfo{RuleId::IdTgt, "id-tgt"},
    RuleInfo{RuleId::EqRefl, "eq-refl"},
    RuleInfo{RuleId::EqSym, "eq-sym"},
    RuleInfo{RuleId::EqTrans, "eq-trans"},
    RuleInfo{RuleId::EqSubs, "eq-subs"},
    RuleInfo{RuleId::EqRepl, "eq-repl"},
    RuleInfo{RuleId::Gen, "gen"},
    RuleInfo{RuleId::ZeroToOne, "0-to-1"},
    RuleInfo{RuleId::OneToTwo, "1-to-2"},
    RuleInfo{RuleId::ZeroComp, "0-comp"},
    RuleInfo{RuleId::OneComp, "1-comp"},
    RuleInfo{RuleId::ZeroId, "0-id"},
    RuleInfo{RuleId::WRefl, "w-refl"},
    RuleInfo{RuleId::WSym, "w-sym"},
    RuleInfo{RuleId::WTrans, "w-trans"},
    RuleInfo{RuleId::SToW, "s-to-w"},
    RuleInfo{RuleId::WSubs, "w-subs"},
    RuleInfo{RuleId::WReplPure, "w-repl-pure"},
    RuleInfo{RuleId::WToS, "w-to-s"},
    RuleInfo{RuleId::Final, "final"},
    RuleInfo{RuleId::UnitArrow, "unit-arrow"},
    RuleInfo{RuleId::WFinal, "w-final"},
    RuleInfo{RuleId::LocTuple, "loc-tuple"},
    RuleInfo{RuleId::LocTupleUnique, "loc-tuple-unique"},
    RuleInfo{RuleId::SemiprodP1, "semiprod-P1"},
    RuleInfo{RuleId::SemiprodP2, "semiprod-P2"},
    RuleInfo{RuleId::BinprodProj, "binprod-proj"},
    RuleInfo{RuleId::AccPairFst, "accpair-fst"},
    RuleInfo{RuleId::AccPairSnd, "accpair-snd"},
    RuleInfo{RuleId::CaseProdExists, "case-prod-exists"},
    RuleInfo{RuleId::CaseProdWeak, "case-prod-weak"},
    RuleInfo{RuleId::CaseProdUnit, "case-prod-unit"},
    RuleInfo{RuleId::CaseProdAcc, "case-prod-acc"},
    RuleInfo{RuleId::CaseProdUnique, "case-prod-unique"},
    RuleInfo{RuleId::CoerceAccExists, "coerce-acc-exists"},
    RuleInfo{RuleId::CoerceAccWeak, "coerce-acc-weak"},
    RuleInfo{RuleId::CoerceAccUnique, "coerce-acc-unique"},
    RuleInfo{RuleId::WSubsPure, "w-subs-pure"},
    RuleInfo{RuleId::WRepl, "w-repl"},
    RuleInfo{RuleId::WToSProp, "w-to-s-prop"},
    RuleInfo{RuleId::Initial, "initial"},
    RuleInfo{RuleId::EmptyArrow, "empty-arrow"},
    RuleInfo{RuleId::WInitial, "w-initial"},
    RuleInfo{RuleId::ConstCotuple, "const-cotuple"},
    RuleInfo{RuleId::ConstCotupleUnique, "const-cotuple-unique"},
    RuleInfo{RuleId::SemicoprodP1, "semicoprod-P1"},
    RuleInfo{RuleId::SemicoprodP2, "semicoprod-P2"},
    RuleInfo{RuleId::BincoprodInj, "bincoprod-inj"},
    RuleInfo{RuleId::PropcaseInl, "propcase-inl"},
    RuleInfo{RuleId::PropcaseInr, "propcase-inr"},
    RuleInfo{RuleId::SumCaseExists, "sum-case-exists"},
    RuleInfo{RuleId::SumCaseWeak, "sum-case-weak"},
    RuleInfo{RuleId::SumCaseEmpty, "sum-case-empty"},
    RuleInfo{RuleId::SumCaseProp, "sum-case-prop"},
    RuleInfo{RuleId::SumCaseUnique, "sum-case-unique"},
    RuleInfo{RuleId::CoerceExists, "coerce-exists"},
    RuleInfo{RuleId::CoerceWeak, "coerce-weak"},
    RuleInfo{RuleId::CoerceUnique, "coerce-unique"},
    RuleInfo{RuleId::SFinal, "s-final"},
    RuleInfo{RuleId::SInitial, "s-initial"},
};

enum Scope : unsigned { kPlain = 1, kStates = 2, kExc = 4, kAll = 7, kDeco = 6 };

unsigned scope(RuleId r) {
  switch (r) {
    case RuleId::Comp: case RuleId::Id: case RuleId::Assoc: case RuleId::IdSrc:
    case RuleId::IdTgt: case RuleId::EqRefl: case RuleId::EqSym: case RuleId::EqTrans:
    case RuleId::EqSubs: case RuleId::EqRepl: case RuleId::Gen:
      return kAll;
    case RuleId::ZeroToOne: case RuleId::OneToTwo: case RuleId::ZeroComp: case RuleId::OneComp:
    case RuleId::ZeroId: case RuleId::WRefl: case RuleId::WSym: case RuleId::WTrans:
    case RuleId::SToW:
      return kDeco;
    case RuleId::WSubs: case RuleId::WReplPure: case RuleId::WToS:
      return kStates;
    case RuleId::WSubsPure: case RuleId::WRepl: case RuleId::WToSProp:
      return kExc;
    // the pure-only halves of terminal/initial are valid in both flavors
    case RuleId::Final: case RuleId::UnitArrow: case RuleId::Initial: case RuleId::EmptyArrow:
      return kAll;
    case RuleId::WFinal: case RuleId::WInitial:
      return kDeco;
    case RuleId::LocTuple: case RuleId::LocTupleUnique: case RuleId::SemiprodP1:
    case RuleId::SemiprodP2: case RuleId::BinprodProj: case RuleId::AccPairFst:
    case RuleId::AccPairSnd: case RuleId::CaseProdExists: case RuleId::CaseProdWeak:
    case RuleId::CaseProdUnit: case RuleId::CaseProdAcc: case RuleId::CaseProdUnique:
    case RuleId::CoerceAccExists: case RuleId::CoerceAccWeak: case RuleId::CoerceAccUnique:
      return kStates | kPlain;
    case RuleId::ConstCotuple: case RuleId::ConstCotupleUnique: case RuleId::SemicoprodP1:
    case RuleId::SemicoprodP2: case RuleId::BincoprodInj: case RuleId::PropcaseInl:
    case RuleId::PropcaseInr: case RuleId::SumCaseExists: case RuleId::SumCaseWeak:
    case RuleId::SumCaseEmpty: case RuleId::SumCaseProp: case RuleId::SumCaseUnique:
    case RuleId::CoerceExists: case RuleId::CoerceWeak: case RuleId::CoerceUnique:
      return kExc | kPlain;
    case RuleId::SFinal: case RuleId::SInitial:
      return kPlain;
  }
  return 0;
}
}  // namespace

const std::vector<RuleId>& all_rules() {
  static const std::vector<RuleId> v = [] {
    std::vector<RuleId> out;
    for (const auto& r : kRules) out.push_back(r.id);
    return out;
  }();
  return v;
}

const char* rule_name(RuleId r) {
  for (const auto& info : kRules)
    if (info.id == r) return info.name;
  return "?";
}

std::optional<RuleId> rule_from_name(const std::string& n) {
  for (const auto& info : kRules)
    if (n == info.name) return info.id;
  return std::nullopt;
}

bool rule_allowed(RuleId r, Flavor f) {
  unsigned bit = f == Flavor::Plain ? kPlain : f == Flavor::States ? kStates : kExc;
  return (scope(r) & bit) != 0;
}

bool same_up_to_assoc(const Judgment& a, const Judgment& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == Judgment::Kind::WellFormed)
    return a.level == b.level && same(normalize_assoc(a.term), normalize_assoc(b.term));
  return same_up_to_assoc(a.eq, b.eq);
}

std::string to_string(const Judgment& j) {
  if (j.kind == Judgment::Kind::WellFormed)
    return to_string(j.term) + " @" + std::to_string(j.level);
  return to_string(j.eq);
}

std::string to_string(const RuleRef& r) {
  switch (r.kind) {
    case RuleRef::Kind::Rule: return rule_name(r.rule);
    case RuleRef::Kind::Axiom: return "axiom(" + (r.label.empty() ? std::to_string(r.axiom) : r.label) + ")";
    case RuleRef::Kind::Hypothesis: return "hyp(" + r.label + ")";
  }
  return "?";
}

namespace {
bool meta_equal(const Meta& a, const Meta& b) {
  if (a.index() != b.index()) return false;
  if (auto* t = std::get_if<Term>(&a)) return same(*t, std::get<Term>(b));
  if (auto* t = std::get_if<TypeExpr>(&a)) return same(*t, std::get<TypeExpr>(b));
  return std::get<std::string>(a) == std::get<std::string>(b);
}

bool judgment_equal(const Judgment& a, const Judgment& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == Judgment::Kind::WellFormed) return a.level == b.level && same(a.term, b.term);
  return compare(a.eq, b.eq) == 0;
}
}  // namespace

bool structurally_equal(const Derivation& a, const Derivation& b) {
  if (!judgment_equal(a.conclusion, b.conclusion)) return false;
  if (a.rule.kind != b.rule.kind) return false;
  if (a.rule.kind == RuleRef::Kind::Rule && a.rule.rule != b.rule.rule) return false;
  if (a.rule.kind == RuleRef::Kind::Axiom && a.rule.axiom != b.rule.axiom) return false;
  if (a.rule.kind == RuleRef::Kind::Hypothesis && a.rule.label != b.rule.label) return false;
  if (a.inst.size() != b.inst.size() || a.premises.size() != b.premises.size()) return false;
  for (auto ia = a.inst.begin(), ib = b.inst.begin(); ia != a.inst.end(); ++ia, ++ib)
    if (ia->first != ib->first || !meta_equal(ia->second, ib->second)) return false;
  for (std::size_t k = 0; k < a.premises.size(); ++k)
    if (!structurally_equal(a.premises[k], b.premises[k])) return false;
  return true;
}

std::size_t node_count(const Derivation& d) {
  std::size_t n = 1;
  for (const auto& p : d.premises) n += node_count(p);
  return n;
}

// ---------------------------------------------------------------------------
// apply_rule

namespace {

struct Ctx {
  const Theory& th;
  RuleId r;
  const std::vector<Judgment>& ps;
  const Inst& inst;

  bool plain() const { return th.flavor == Flavor::Plain; }
  EqKind weak() const { return plain() ? EqKind::Strong : EqKind::Weak; }

  [[noreturn]] void side(const std::string& what) const {
    throw DecorError(ErrorCode::SideConditionViolated, std::string(rule_name(r)) + ": " + what);
  }
  [[noreturn]] void shape(const std::string& what) const {
    throw DecorError(ErrorCode::PremiseShapeMismatch, std::string(rule_name(r)) + ": " + what);
  }

  void arity(std::size_t n) const {
    if (ps.size() != n)
      shape("expected " + std::to_string(n) + " premises, got " + std::to_string(ps.size()));
  }
  void no_inst_except(std::initializer_list<const char*> keys) const {
    for (const auto& [k, v] : inst)
      if (std::find_if(keys.begin(), keys.end(), [&](const char* s) { return k == s; }) == keys.end())
        shape("unexpected instantiation key '" + k + "'");
    for (const char* k : keys)
      if (!inst.count(k)) shape(std::string("missing instantiation '") + k + "'");
  }

  Term term(const char* key) const {
    auto it = inst.find(key);
    if (it == inst.end() || !std::holds_alternative<Term>(it->second))
      shape(std::string("instantiation '") + key + "' must be a term");
    const Term& t = std::get<Term>(it->second);
    typecheck(th, t);
    return t;
  }
  Term term_of(const char* key, TermKind k) const {
    Term t = term(key);
    if (t->kind != k) shape(std::string("instantiation '") + key + "' has the wrong constructor");
    return t;
  }
  TypeExpr type(const char* key) const {
    auto it = inst.find(key);
    if (it == inst.end() || !std::holds_alternative<TypeExpr>(it->second))
      shape(std::string("instantiation '") + key + "' must be a type");
    const TypeExpr& t = std::get<TypeExpr>(it->second);
    check_type(th, t);
    return t;
  }
  std::string index(const char* key) const {
    auto it = inst.find(key);
    if (it == inst.end() || !std::holds_alternative<std::string>(it->second))
      shape(std::string("instantiation '") + key + "' must be an index");
    return std::get<std::string>(it->second);
  }

  const Equation& eq(std::size_t k, EqKind kind) const {
    if (ps[k].kind != Judgment::Kind::Holds) shape("premise " + std::to_string(k) + " is not an equation");
    if (ps[k].eq.kind != kind)
      shape("premise " + std::to_string(k) + " must be " + (kind == EqKind::Strong ? "strong" : "weak"));
    typecheck(th, ps[k].eq);
    return ps[k].eq;
  }
  const Judgment& wf(std::size_t k) const {
    if (ps[k].kind != Judgment::Kind::WellFormed) shape("premise " + std::to_string(k) + " is not a term judgment");
    typecheck(th, ps[k].term);
    return ps[k];
  }

  Decoration level(const Term& t) const { return plain() ? 0 : decoration(t); }

  Judgment conclude(Term l, Term r2, EqKind k) const {
    Equation e{std::move(l), std::move(r2), k};
    typecheck(th, e);
    return Judgment::holds(e);
  }
  Judgment conclude_wf(Term t, Decoration lvl) const {
    typecheck(th, t);
    return Judgment::wf(std::move(t), plain() ? 0 : lvl);
  }
};

bool eq_norm(const Term& a, const Term& b) { return same(normalize_assoc(a), normalize_assoc(b)); }

Judgment apply(const Ctx& c) {
  using K = EqKind;
  const Theory& th = c.th;
  switch (c.r) {
    case RuleId::Comp: {
      c.arity(2);
      c.no_inst_except({});
      const auto& f = c.wf(0);
      const auto& g = c.wf(1);
      return c.conclude_wf(tm::comp(g.term, f.term), 2);
    }
    case RuleId::Id: {
      c.arity(0);
      c.no_inst_except({"X"});
      return c.conclude_wf(tm::id(c.type("X")), 2);
    }
    case RuleId::Gen: {
      c.arity(0);
      c.no_inst_except({"t"});
      Term g = c.term_of("t", TermKind::Gen);
      return c.conclude_wf(g, g->dec);
    }
    case RuleId::Assoc: {
      c.arity(0);
      c.no_inst_except({"f", "g", "h"});
      Term f = c.term("f"), g = c.term("g"), h = c.term("h");
      return c.conclude(tm::comp(tm::comp(h, g), f), tm::comp(h, tm::comp(g, f)), K::Strong);
    }
    case RuleId::IdSrc: {
      c.arity(0);
      c.no_inst_except({"f"});
      Term f = c.term("f");
      return c.conclude(tm::comp(f, tm::id(dom(f))), f, K::Strong);
    }
    case RuleId::IdTgt: {
      c.arity(0);
      c.no_inst_except({"f"});
      Term f = c.term("f");
      return c.conclude(tm::comp(tm::id(cod(f)), f), f, K::Strong);
    }
    case RuleId::EqRefl:
    case RuleId::WRefl: {
      c.arity(0);
      c.no_inst_except({"f"});
      Term f = c.term("f");
      return c.conclude(f, f, c.r == RuleId::EqRefl ? K::Strong : c.weak());
    }
    case RuleId::EqSym:
    case RuleId::WSym: {
      c.arity(1);
      c.no_inst_except({});
      K k = c.r == RuleId::EqSym ? K::Strong : c.weak();
      const auto& e = c.eq(0, k);
      return c.conclude(e.rhs, e.lhs, k);
    }
    case RuleId::EqTrans:
    case RuleId::WTrans: {
      c.arity(2);
      c.no_inst_except({});
      K k = c.r == RuleId::EqTrans ? K::Strong : c.weak();
      const auto& a = c.eq(0, k);
      const auto& b = c.eq(1, k);
      if (!eq_norm(a.rhs, b.lhs)) c.shape("middle terms differ: " + to_string(a.rhs) + " vs " + to_string(b.lhs));
      return c.conclude(a.lhs, b.rhs, k);
    }
    case RuleId::EqSubs:
    case RuleId::WSubs:
    case RuleId::WSubsPure: {
      c.arity(1);
      c.no_inst_except({"t"});
      K k = c.r == RuleId::EqSubs ? K::Strong : c.weak();
      const auto& e = c.eq(0, k);
      Term f = c.term("t");
      if (c.r == RuleId::WSubsPure && c.level(f) != 0)
        c.side("substituted term must be pure, " + to_string(f) + " is level " + std::to_string(c.level(f)));
      return c.conclude(tm::comp(e.lhs, f), tm::comp(e.rhs, f), k);
    }
    case RuleId::EqRepl:
    case RuleId::WRepl:
    case RuleId::WReplPure: {
      c.arity(1);
      c.no_inst_except({"t"});
      K k = c.r == RuleId::EqRepl ? K::Strong : c.weak();
      const auto& e = c.eq(0, k);
      Term g = c.term("t");
      if (c.r == RuleId::WReplPure && c.level(g) != 0)
        c.side("replacing term must be pure, " + to_string(g) + " is level " + std::to_string(c.level(g)));
      return c.conclude(tm::comp(g, e.lhs), tm::comp(g, e.rhs), k);
    }
    case RuleId::ZeroToOne:
    case RuleId::OneToTwo: {
      c.arity(1);
      c.no_inst_except({});
      const auto& p = c.wf(0);
      Decoration from = c.r == RuleId::ZeroToOne ? 0 : 1;
      if (p.level != from) c.shape("premise must be at level " + std::to_string(from));
      return c.conclude_wf(p.term, from + 1);
    }
    case RuleId::ZeroComp:
    case RuleId::OneComp: {
      c.arity(2);
      c.no_inst_except({});
      Decoration lvl = c.r == RuleId::ZeroComp ? 0 : 1;
      const auto& f = c.wf(0);
      const auto& g = c.wf(1);
      if (f.level != lvl || g.level != lvl) c.shape("premises must be at level " + std::to_string(lvl));
      return c.conclude_wf(tm::comp(g.term, f.term), lvl);
    }
    case RuleId::ZeroId: {
      c.arity(0);
      c.no_inst_except({"X"});
      return c.conclude_wf(tm::id(c.type("X")), 0);
    }
    case RuleId::SToW: {
      c.arity(1);
      c.no_inst_except({});
      const auto& e = c.eq(0, K::Strong);
      return c.conclude(e.lhs, e.rhs, K::Weak);
    }
    case RuleId::WToS:
    case RuleId::WToSProp: {
      if (c.ps.empty() || c.ps.size() > 3) c.shape("expected 1 to 3 premises");
      c.no_inst_except({});
      const auto& e = c.eq(0, K::Weak);
      for (std::size_t k = 1; k < c.ps.size(); ++k) {
        const auto& w = c.wf(k);
        if (w.level > 1) c.shape("decoration premise above level 1");
        if (!eq_norm(w.term, e.lhs) && !eq_norm(w.term, e.rhs))
          c.shape("decoration premise does not mention either side");
      }
      if (decoration(e.lhs) > 1 || decoration(e.rhs) > 1)
        c.side("both sides must be level <= 1 in " + to_string(e));
      return c.conclude(e.lhs, e.rhs, K::Strong);
    }
    case RuleId::Final: {
      c.arity(0);
      c.no_inst_except({});
      return c.conclude_wf(tm::id(ty::unit()), 0);
    }
    case RuleId::Initial: {
      c.arity(0);
      c.no_inst_except({});
      return c.conclude_wf(tm::id(ty::empty()), 0);
    }
    case RuleId::UnitArrow: {
      c.arity(0);
      c.no_inst_except({"X"});
      return c.conclude_wf(tm::to_unit(c.type("X")), 0);
    }
    case RuleId::EmptyArrow: {
      c.arity(0);
      c.no_inst_except({"X"});
      return c.conclude_wf(tm::from_empty(c.type("X")), 0);
    }
    case RuleId::WFinal:
    case RuleId::SFinal: {
      c.arity(0);
      c.no_inst_except({"t"});
      Term f = c.term("t");
      if (!same(cod(f), ty::unit())) c.side("codomain must be 1");
      if (th.flavor == Flavor::Exceptions && decoration(f) != 0)
        c.side("with exceptions only pure terms into 1 are unique");
      return c.conclude(f, tm::to_unit(dom(f)), c.r == RuleId::SFinal ? K::Strong : c.weak());
    }
    case RuleId::WInitial:
    case RuleId::SInitial: {
      c.arity(0);
      c.no_inst_except({"t"});
      Term f = c.term("t");
      if (!same(dom(f), ty::empty())) c.side("domain must be 0");
      if (th.flavor == Flavor::States && decoration(f) != 0)
        c.side("with states only pure terms out of 0 are unique");
      return c.conclude(f, tm::from_empty(cod(f)), c.r == RuleId::SInitial ? K::Strong : c.weak());
    }
    case RuleId::LocTuple:
    case RuleId::ConstCotuple: {
      c.arity(0);
      c.no_inst_except({"t", "i"});
      bool st = c.r == RuleId::LocTuple;
      Term t = c.term_of("t", st ? TermKind::LocTuple : TermKind::ConstCotuple);
      std::string i = c.index("i");
      auto pos = std::find(t->keys.begin(), t->keys.end(), i);
      if (pos == t->keys.end()) c.shape("index " + i + " not in the (co)tuple");
      Term fi = t->kids[pos - t->keys.begin()];
      if (st) return c.conclude(tm::comp(th.lookup(i), t), fi, c.weak());
      return c.conclude(tm::comp(t, th.thrower(i)), fi, c.weak());
    }
    case RuleId::LocTupleUnique:
    case RuleId::ConstCotupleUnique: {
      bool st = c.r == RuleId::LocTupleUnique;
      const auto& idx = st ? th.locations : th.constructors;
      c.arity(idx.size());
      c.no_inst_except({"t"});
      Term g = c.term("t");
      std::vector<Term> comps;
      for (std::size_t k = 0; k < idx.size(); ++k) {
        const auto& e = c.eq(k, c.weak());
        Term expect = st ? tm::comp(th.lookup(idx[k]), g) : tm::comp(g, th.thrower(idx[k]));
        if (!eq_norm(e.lhs, expect)) c.shape("premise " + std::to_string(k) + " must start with " + to_string(expect));
        if (!c.plain() && decoration(e.rhs) > 1) c.side("component " + to_string(e.rhs) + " is not level <= 1");
        comps.push_back(e.rhs);
      }
      Term tuple = st ? tm::loc_tuple(dom(g), idx, comps) : tm::const_cotuple(cod(g), idx, comps);
      return c.conclude(g, tuple, K::Strong);
    }
    case RuleId::SemiprodP1:
    case RuleId::SemiprodP2: {
      c.arity(0);
      c.no_inst_except({"t"});
      Term t = c.term_of("t", TermKind::SemiProd);
      const Term& f = t->kids[0];
      const Term& g = t->kids[1];
      bool pure_side = c.r == RuleId::SemiprodP1;
      bool first = pure_side == t->pure_left;  // which projection the law talks about
      Term pc = first ? tm::proj1(cod(t)) : tm::proj2(cod(t));
      Term pd = first ? tm::proj1(dom(t)) : tm::proj2(dom(t));
      return c.conclude(tm::comp(pc, t), tm::comp(pure_side ? f : g, pd),
                        pure_side ? c.weak() : K::Strong);
    }
    case RuleId::SemicoprodP1:
    case RuleId::SemicoprodP2: {
      c.arity(0);
      c.no_inst_except({"t"});
      Term t = c.term_of("t", TermKind::SemiCoprod);
      const Term& f = t->kids[0];
      const Term& g = t->kids[1];
      bool pure_side = c.r == RuleId::SemicoprodP1;
      bool first = pure_side == t->pure_left;
      Term id_ = first ? tm::inj1(dom(t)) : tm::inj2(dom(t));
      Term ic = first ? tm::inj1(cod(t)) : tm::inj2(cod(t));
      return c.conclude(tm::comp(t, id_), tm::comp(ic, pure_side ? f : g),
                        pure_side ? c.weak() : K::Strong);
    }
    case RuleId::BinprodProj:
    case RuleId::BincoprodInj: {
      c.arity(2);
      c.no_inst_except({"t"});
      bool st = c.r == RuleId::BinprodProj;
      Term k = c.term("t");
      if (!c.plain() && decoration(k) > 1) c.side("mediator must be level <= 1");
      const auto& a = c.eq(0, K::Strong);
      const auto& b = c.eq(1, K::Strong);
      Term e1 = st ? tm::comp(tm::proj1(cod(k)), k) : tm::comp(k, tm::inj1(dom(k)));
      Term e2 = st ? tm::comp(tm::proj2(cod(k)), k) : tm::comp(k, tm::inj2(dom(k)));
      if (!eq_norm(a.lhs, e1) || !eq_norm(b.lhs, e2)) c.shape("premises must characterize the mediator");
      if (!c.plain() && (decoration(a.rhs) > 1 || decoration(b.rhs) > 1)) c.side("components must be level <= 1");
      return c.conclude(k, st ? tm::acc_pair(a.rhs, b.rhs) : tm::prop_case(a.rhs, b.rhs), K::Strong);
    }
    case RuleId::AccPairFst:
    case RuleId::AccPairSnd: {
      c.arity(0);
      c.no_inst_except({"t"});
      Term t = c.term_of("t", TermKind::AccPair);
      bool fst = c.r == RuleId::AccPairFst;
      return c.conclude(tm::comp(fst ? tm::proj1(cod(t)) : tm::proj2(cod(t)), t), t->kids[fst ? 0 : 1], K::Strong);
    }
    case RuleId::PropcaseInl:
    case RuleId::PropcaseInr: {
      c.arity(0);
      c.no_inst_except({"t"});
      Term t = c.term_of("t", TermKind::PropCase);
      bool inl = c.r == RuleId::PropcaseInl;
      return c.conclude(tm::comp(t, inl ? tm::inj1(dom(t)) : tm::inj2(dom(t))), t->kids[inl ? 0 : 1], K::Strong);
    }
    case RuleId::SumCaseExists:
    case RuleId::CaseProdExists: {
      c.arity(0);
      c.no_inst_except({"t"});
      Term t = c.term_of("t", c.r == RuleId::SumCaseExists ? TermKind::CaseSum : TermKind::CaseProd);
      return c.conclude_wf(t, decoration(t));
    }
    case RuleId::SumCaseWeak:
    case RuleId::CaseProdWeak: {
      c.arity(0);
      c.no_inst_except({"t"});
      Term t = c.term_of("t", c.r == RuleId::SumCaseWeak ? TermKind::CaseSum : TermKind::CaseProd);
      return c.conclude(t, t->kids[0], c.weak());
    }
    case RuleId::SumCaseEmpty: {
      c.arity(0);
      c.no_inst_except({"t"});
      Term t = c.term_of("t", TermKind::CaseSum);
      return c.conclude(tm::comp(t, tm::from_empty(dom(t))), t->kids[1], K::Strong);
    }
    case RuleId::CaseProdUnit: {
      c.arity(0);
      c.no_inst_except({"t"});
      Term t = c.term_of("t", TermKind::CaseProd);
      return c.conclude(tm::comp(tm::to_unit(cod(t)), t), t->kids[1], K::Strong);
    }
    case RuleId::SumCaseProp:
    case RuleId::CaseProdAcc: {
      c.arity(0);
      c.no_inst_except({"t"});
      Term t = c.term_of("t", c.r == RuleId::SumCaseProp ? TermKind::CaseSum : TermKind::CaseProd);
      if (!c.plain() && decoration(t->kids[1]) > 1) c.side("second branch must be level <= 1");
      return c.conclude(t, t->kids[0], K::Strong);
    }
    case RuleId::SumCaseUnique:
    case RuleId::CaseProdUnique: {
      c.arity(2);
      c.no_inst_except({"t"});
      bool sum = c.r == RuleId::SumCaseUnique;
      Term k = c.term("t");
      const auto& a = c.eq(0, c.weak());
      const auto& b = c.eq(1, K::Strong);
      Term e2 = sum ? tm::comp(k, tm::from_empty(dom(k))) : tm::comp(tm::to_unit(cod(k)), k);
      if (!eq_norm(a.lhs, k) || !eq_norm(b.lhs, e2)) c.shape("premises must characterize the candidate");
      if (!c.plain() && decoration(a.rhs) > 1) c.side("first branch must be level <= 1");
      return c.conclude(k, sum ? tm::case_sum(a.rhs, b.rhs) : tm::case_prod(a.rhs, b.rhs), K::Strong);
    }
    case RuleId::CoerceExists:
    case RuleId::CoerceAccExists: {
      c.arity(0);
      c.no_inst_except({"t"});
      Term t = c.term_of("t", c.r == RuleId::CoerceExists ? TermKind::Coerce : TermKind::CoerceAcc);
      return c.conclude_wf(t, 1);
    }
    case RuleId::CoerceWeak:
    case RuleId::CoerceAccWeak: {
      c.arity(0);
      c.no_inst_except({"t"});
      Term t = c.term_of("t", c.r == RuleId::CoerceWeak ? TermKind::Coerce : TermKind::CoerceAcc);
      return c.conclude(t, t->kids[0], c.weak());
    }
    case RuleId::CoerceUnique:
    case RuleId::CoerceAccUnique: {
      c.arity(1);
      c.no_inst_except({});
      const auto& e = c.eq(0, c.weak());
      if (!c.plain() && decoration(e.lhs) > 1) c.side("candidate must be level <= 1");
      Term k = e.rhs;
      return c.conclude(e.lhs, c.r == RuleId::CoerceUnique ? tm::coerce(k) : tm::coerce_acc(k), K::Strong);
    }
  }
  c.shape("unknown rule");
}
}  // namespace

Judgment apply_rule(const Theory& th, RuleId r, const std::vector<Judgment>& premises,
                    const Inst& inst) {
  if (!rule_allowed(r, th.flavor))
    throw DecorError(ErrorCode::FlavorViolation,
                     std::string(rule_name(r)) + " is not a rule of the " + flavor_name(th.flavor) + " logic");
  return apply(Ctx{th, r, premises, inst});
}

// ---------------------------------------------------------------------------
// check_derivation

namespace {
bool check_node(const Theory& th, const Derivation& d, const HypothesisTable& hyps,
                std::vector<std::size_t>& path, CheckReport& rep) {
  ++rep.nodes;
  for (std::size_t k = 0; k < d.premises.size(); ++k) {
    path.push_back(k);
    if (!check_node(th, d.premises[k], hyps, path, rep)) return false;
    path.pop_back();
  }
  auto fail = [&](const std::string& rule, const std::string& detail) {
    rep.valid = false;
    rep.path = path;
    rep.rule = rule;
    rep.detail = detail;
    return false;
  };
  try {
    switch (d.rule.kind) {
      case RuleRef::Kind::Axiom: {
        if (!d.premises.empty() || !d.inst.empty()) return fail("axiom", "axiom leaves take no premises");
        if (d.rule.axiom >= th.axioms.size()) return fail("axiom", "no axiom with that index");
        const auto& ax = th.axioms[d.rule.axiom];
        if (d.conclusion.kind != Judgment::Kind::Holds || !same_up_to_assoc(d.conclusion.eq, ax.eq))
          return fail("axiom", "leaf does not match axiom " + ax.name);
        return true;
      }
      case RuleRef::Kind::Hypothesis: {
        auto it = hyps.entries.find(d.rule.label);
        if (it == hyps.entries.end()) return fail("hyp", "unknown hypothesis " + d.rule.label);
        if (!same_up_to_assoc(d.conclusion, it->second)) return fail("hyp", "hypothesis mismatch");
        return true;
      }
      case RuleRef::Kind::Rule: {
        std::vector<Judgment> ps;
        for (const auto& p : d.premises) ps.push_back(p.conclusion);
        Judgment got = apply_rule(th, d.rule.rule, ps, d.inst);
        if (!same_up_to_assoc(got, d.conclusion))
          return fail(rule_name(d.rule.rule),
                      "conclusion mismatch: rule yields " + to_string(got) + ", node states " + to_string(d.conclusion));
        return true;
      }
    }
  } catch (const DecorError& e) {
    return fail(to_string(d.rule), e.what());
  }
  return true;
}
}  // namespace

CheckReport check_derivation(const Theory& th, const Derivation& d, const HypothesisTable& hyps) {
  CheckReport rep;
  std::vector<std::size_t> path;
  check_node(th, d, hyps, path, rep);
  return rep;
}

namespace dv {
Derivation rule(const Theory& th, RuleId r, std::vector<Derivation> premises, Inst inst) {
  std::vector<Judgment> ps;
  for (const auto& p : premises) ps.push_back(p.conclusion);
  Judgment j = apply_rule(th, r, ps, inst);
  return Derivation{std::move(j), RuleRef::of(r), std::move(premises), std::move(inst), {}};
}

Derivation axiom(const Theory& th, const std::string& name) {
  auto k = th.find_axiom(name);
  if (!k) throw DecorError(ErrorCode::BadParams, "no axiom named " + name + " in " + th.name);
  return Derivation{Judgment::holds(th.axioms[*k].eq), RuleRef::ax(*k, name), {}, {}, {}};
}

Derivation labelled(Derivation d, std::string label) {
  d.label = std::move(label);
  return d;
}
}  // namespace dv

Derivation derive_final_uniqueness(const Theory& th, const Term& f) {
  if (th.flavor != Flavor::States)
    throw DecorError(ErrorCode::FlavorViolation, "final uniqueness is a states derivation");
  typecheck(th, f);
  if (!same(cod(f), ty::unit())) throw DecorError(ErrorCode::BadParams, "codomain must be 1");
  if (decoration(f) > 1) throw DecorError(ErrorCode::NotAnAccessor, to_string(f) + " is a modifier");
  TypeExpr X = dom(f);
  Derivation weak = dv::rule(th, RuleId::WFinal, {}, {{"t", f}});
  Derivation unit = dv::rule(th, RuleId::ZeroToOne, {dv::rule(th, RuleId::UnitArrow, {}, {{"X", X}})});
  return dv::labelled(dv::rule(th, RuleId::WToS, {weak, unit}), "s-final");
}

}  // namespace decor
