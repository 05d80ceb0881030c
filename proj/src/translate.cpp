#include "decor/translate.hpp"

#include <functional>

#include "decor/error.hpp"

namespace decor {

// ---------------------------------------------------------------------------
// erasure

Term erase(const Term& t) {
  if (t->kind == TermKind::Gen) {
    if (t->dec == 0) return t;
    return tm::gen(t->name, t->dom, t->cod, 0, t->role, t->index);
  }
  if (t->kids.empty()) return t;
  TermNode n = *t;
  bool changed = false;
  for (auto& k : n.kids) {
    Term e = erase(k);
    changed = changed || e != k;
    k = e;
  }
  return changed ? std::make_shared<const TermNode>(std::move(n)) : t;
}

Equation erase(const Equation& e) { return {erase(e.lhs), erase(e.rhs), EqKind::Strong}; }

Judgment erase(const Judgment& j) {
  if (j.kind == Judgment::Kind::WellFormed) return Judgment::wf(erase(j.term), 0);
  return Judgment::holds(erase(j.eq));
}

Theory erase(const Theory& th) {
  if (th.flavor == Flavor::Plain) return th;
  Theory out;
  out.name = th.name + "_app";
  out.flavor = Flavor::Plain;
  out.locations = th.locations;
  out.constructors = th.constructors;
  for (const auto& g : th.generators) out.generators.push_back(erase(g));
  for (const auto& a : th.axioms) out.axioms.push_back({a.name, erase(a.eq)});
  return out;
}

namespace {
std::optional<RuleId> erased_rule(RuleId r) {
  switch (r) {
    case RuleId::SToW: case RuleId::WToS: case RuleId::WToSProp:
    case RuleId::ZeroToOne: case RuleId::OneToTwo:
      return std::nullopt;
    case RuleId::WRefl: return RuleId::EqRefl;
    case RuleId::WSym: return RuleId::EqSym;
    case RuleId::WTrans: return RuleId::EqTrans;
    case RuleId::WSubs: case RuleId::WSubsPure: return RuleId::EqSubs;
    case RuleId::WRepl: case RuleId::WReplPure: return RuleId::EqRepl;
    case RuleId::WFinal: return RuleId::SFinal;
    case RuleId::WInitial: return RuleId::SInitial;
    case RuleId::ZeroComp: case RuleId::OneComp: return RuleId::Comp;
    case RuleId::ZeroId: return RuleId::Id;
    default: return r;
  }
}

Meta map_meta(const Meta& m, const std::function<Term(const Term&)>& ft,
              const std::function<TypeExpr(const TypeExpr&)>& fy,
              const std::function<std::string(const std::string&)>& fi) {
  if (auto* t = std::get_if<Term>(&m)) return ft(*t);
  if (auto* y = std::get_if<TypeExpr>(&m)) return fy(*y);
  return fi(std::get<std::string>(m));
}
}  // namespace

Derivation erase(const Derivation& d) {
  if (d.rule.kind == RuleRef::Kind::Rule) {
    auto r = erased_rule(d.rule.rule);
    if (!r) {
      Derivation inner = erase(d.premises.at(0));
      if (inner.label.empty()) inner.label = d.label;
      return inner;
    }
    Derivation out{erase(d.conclusion), RuleRef::of(*r), {}, {}, d.label};
    for (const auto& p : d.premises) out.premises.push_back(erase(p));
    for (const auto& [k, v] : d.inst)
      out.inst[k] = map_meta(v, [](const Term& t) { return erase(t); }, [](const TypeExpr& y) { return y; },
                             [](const std::string& s) { return s; });
    return out;
  }
  Derivation out = d;
  out.conclusion = erase(d.conclusion);
  return out;
}

// ---------------------------------------------------------------------------
// duality

std::string DualityMap::to_ctor(const std::string& loc) const {
  auto it = loc_to_ctor.find(loc);
  return it == loc_to_ctor.end() ? loc : it->second;
}

std::string DualityMap::to_loc(const std::string& ctor) const {
  for (const auto& [l, c] : loc_to_ctor)
    if (c == ctor) return l;
  return ctor;
}

namespace {
void require_effect(Flavor f) {
  if (f == Flavor::Plain) throw DecorError(ErrorCode::FlavorViolation, "duality needs a states or exceptions input");
}

std::string rename(const std::string& idx, Flavor source, const DualityMap& m) {
  return source == Flavor::States ? m.to_ctor(idx) : m.to_loc(idx);
}

const char* prefix(GenRole r) {
  switch (r) {
    case GenRole::Lookup: return "l_";
    case GenRole::Update: return "u_";
    case GenRole::Throw: return "t_";
    case GenRole::Catch: return "c_";
    default: return "";
  }
}

GenRole dual_role(GenRole r) {
  switch (r) {
    case GenRole::Lookup: return GenRole::Throw;
    case GenRole::Throw: return GenRole::Lookup;
    case GenRole::Update: return GenRole::Catch;
    case GenRole::Catch: return GenRole::Update;
    case GenRole::CatchAll: return GenRole::UpdateAll;
    case GenRole::UpdateAll: return GenRole::CatchAll;
    case GenRole::User: return GenRole::User;
  }
  return r;
}
}  // namespace

TypeExpr dualize_type(const TypeExpr& t, Flavor source, const DualityMap& m) {
  require_effect(source);
  switch (t->kind) {
    case TypeKind::Unit: return ty::empty();
    case TypeKind::Empty: return ty::unit();
    case TypeKind::Value: return ty::param(rename(t->name, source, m));
    case TypeKind::Param: return ty::value(rename(t->name, source, m));
    case TypeKind::Prod:
      return ty::coprod(dualize_type(t->left, source, m), dualize_type(t->right, source, m));
    case TypeKind::Coprod:
      return ty::prod(dualize_type(t->left, source, m), dualize_type(t->right, source, m));
    case TypeKind::State: return ty::exc();
    case TypeKind::Exc: return ty::state();
    case TypeKind::Named: return t;
  }
  return t;
}

Term dualize_term(const Term& t, Flavor source, const DualityMap& m) {
  require_effect(source);
  auto T = [&](const TypeExpr& y) { return dualize_type(y, source, m); };
  auto D = [&](const Term& x) { return dualize_term(x, source, m); };
  const auto& k = t->kids;
  switch (t->kind) {
    case TermKind::Gen: {
      GenRole r = dual_role(t->role);
      std::string idx = t->index.empty() ? t->index : rename(t->index, source, m);
      std::string name;
      if (r == GenRole::CatchAll) name = "c_all";
      else if (r == GenRole::UpdateAll) name = "u_all";
      else if (r == GenRole::User) name = t->name;
      else name = prefix(r) + idx;
      return tm::gen(name, T(t->cod), T(t->dom), t->dec, r, idx);
    }
    case TermKind::Id: return tm::id(T(t->dom));
    case TermKind::Comp: return tm::comp(D(k[1]), D(k[0]));
    case TermKind::ToUnit: return tm::from_empty(T(t->dom));
    case TermKind::FromEmpty: return tm::to_unit(T(t->cod));
    case TermKind::Proj1: return tm::inj1(T(t->dom));
    case TermKind::Proj2: return tm::inj2(T(t->dom));
    case TermKind::Inj1: return tm::proj1(T(t->cod));
    case TermKind::Inj2: return tm::proj2(T(t->cod));
    case TermKind::SemiProd: return tm::semicoprod(D(k[0]), D(k[1]), t->pure_left);
    case TermKind::SemiCoprod: return tm::semiprod(D(k[0]), D(k[1]), t->pure_left);
    case TermKind::CaseSum: return tm::case_prod(D(k[0]), D(k[1]));
    case TermKind::CaseProd: return tm::case_sum(D(k[0]), D(k[1]));
    case TermKind::PropCase: return tm::acc_pair(D(k[0]), D(k[1]));
    case TermKind::AccPair: return tm::prop_case(D(k[0]), D(k[1]));
    case TermKind::Coerce: return tm::coerce_acc(D(k[0]));
    case TermKind::CoerceAcc: return tm::coerce(D(k[0]));
    case TermKind::LocTuple:
    case TermKind::ConstCotuple: {
      std::vector<std::string> keys;
      std::vector<Term> comps;
      for (std::size_t n = 0; n < k.size(); ++n) {
        keys.push_back(rename(t->keys[n], source, m));
        comps.push_back(D(k[n]));
      }
      if (t->kind == TermKind::LocTuple) return tm::const_cotuple(T(t->dom), keys, comps);
      return tm::loc_tuple(T(t->cod), keys, comps);
    }
  }
  throw DecorError(ErrorCode::IllFormed, "unknown term kind");
}

Equation dualize_equation(const Equation& e, Flavor source, const DualityMap& m) {
  return {dualize_term(e.lhs, source, m), dualize_term(e.rhs, source, m), e.kind};
}

std::string dual_axiom_name(const std::string& n, Flavor source, const DualityMap& m) {
  require_effect(source);
  char from1 = source == Flavor::States ? 'A' : 'B';
  char to1 = source == Flavor::States ? 'B' : 'A';
  if (n.size() > 3 && n[0] == from1 && (n[1] == '1' || n[1] == '2') && n[2] == '_') {
    std::string rest = n.substr(3), out = std::string(1, to1) + n[1];
    std::size_t start = 0;
    while (true) {
      std::size_t us = rest.find('_', start);
      out += "_" + rename(rest.substr(start, us == std::string::npos ? std::string::npos : us - start), source, m);
      if (us == std::string::npos) break;
      start = us + 1;
    }
    return out;
  }
  if (n == "C_all" || n.rfind("C_all_", 0) == 0 || n.rfind("D_all_", 0) == 0) {
    // catch-all axioms c_all . t_j ~ <>_{P_j} and their duals
    bool catch_side = n[0] == 'C';
    std::string idx = n.size() > 6 ? n.substr(6) : "";
    return std::string(catch_side ? "D" : "C") + "_all_" + rename(idx, source, m);
  }
  return n;
}

namespace {
Term find_semi(const Term& t) {
  if (t->kind == TermKind::SemiProd || t->kind == TermKind::SemiCoprod) return t;
  for (const auto& k : t->kids)
    if (Term s = find_semi(k)) return s;
  return nullptr;
}
}  // namespace

Theory dualize_theory(const Theory& th, const DualityMap& m) {
  require_effect(th.flavor);
  Theory out;
  out.name = th.name.rfind("dual(", 0) == 0 && th.name.back() == ')' ? th.name.substr(5, th.name.size() - 6)
                                                                       : "dual(" + th.name + ")";
  out.flavor = th.flavor == Flavor::States ? Flavor::Exceptions : Flavor::States;
  if (th.flavor == Flavor::States)
    for (const auto& i : th.locations) out.constructors.push_back(m.to_ctor(i));
  else
    for (const auto& i : th.constructors) out.locations.push_back(m.to_loc(i));
  for (const auto& g : th.generators) out.generators.push_back(dualize_term(g, th.flavor, m));
  for (const auto& a : th.axioms) {
    Equation e = dualize_equation(a.eq, th.flavor, m);
    std::string name = dual_axiom_name(a.name, th.flavor, m);
    if ((a.name.rfind("P1[", 0) == 0 || a.name.rfind("P2[", 0) == 0)) {
      if (Term s = find_semi(e.lhs)) name = a.name.substr(0, 3) + to_string(s) + "]";
    }
    out.axioms.push_back({name, e});
  }
  return out;
}

RuleId dual_rule(RuleId r) {
  using R = RuleId;
  static const std::pair<R, R> pairs[] = {
      {R::WSubs, R::WRepl},
      {R::WReplPure, R::WSubsPure},
      {R::EqSubs, R::EqRepl},
      {R::WToS, R::WToSProp},
      {R::Final, R::Initial},
      {R::UnitArrow, R::EmptyArrow},
      {R::WFinal, R::WInitial},
      {R::SFinal, R::SInitial},
      {R::LocTuple, R::ConstCotuple},
      {R::LocTupleUnique, R::ConstCotupleUnique},
      {R::SemiprodP1, R::SemicoprodP1},
      {R::SemiprodP2, R::SemicoprodP2},
      {R::BinprodProj, R::BincoprodInj},
      {R::AccPairFst, R::PropcaseInl},
      {R::AccPairSnd, R::PropcaseInr},
      {R::CaseProdExists, R::SumCaseExists},
      {R::CaseProdWeak, R::SumCaseWeak},
      {R::CaseProdUnit, R::SumCaseEmpty},
      {R::CaseProdAcc, R::SumCaseProp},
      {R::CaseProdUnique, R::SumCaseUnique},
      {R::CoerceAccExists, R::CoerceExists},
      {R::CoerceAccWeak, R::CoerceWeak},
      {R::CoerceAccUnique, R::CoerceUnique},
      {R::IdSrc, R::IdTgt},
  };
  for (const auto& [a, b] : pairs) {
    if (r == a) return b;
    if (r == b) return a;
  }
  return r;
}

namespace {
Judgment dualize_judgment(const Judgment& j, Flavor source, const DualityMap& m) {
  if (j.kind == Judgment::Kind::WellFormed) return Judgment::wf(dualize_term(j.term, source, m), j.level);
  return Judgment::holds(dualize_equation(j.eq, source, m));
}

Derivation dualize_node(const Derivation& d, Flavor source, const DualityMap& m) {
  Derivation out;
  out.conclusion = dualize_judgment(d.conclusion, source, m);
  out.label = d.label;
  out.rule = d.rule;
  if (d.rule.kind == RuleRef::Kind::Axiom) out.rule.label = dual_axiom_name(d.rule.label, source, m);
  for (const auto& p : d.premises) out.premises.push_back(dualize_node(p, source, m));
  for (const auto& [k, v] : d.inst)
    out.inst[k] = map_meta(
        v, [&](const Term& t) { return dualize_term(t, source, m); },
        [&](const TypeExpr& y) { return dualize_type(y, source, m); },
        [&](const std::string& s) { return rename(s, source, m); });
  if (d.rule.kind == RuleRef::Kind::Rule) {
    RuleId r = d.rule.rule;
    out.rule.rule = dual_rule(r);
    if (r == RuleId::Comp || r == RuleId::ZeroComp || r == RuleId::OneComp)
      std::swap(out.premises[0], out.premises[1]);
    if (r == RuleId::Assoc) std::swap(out.inst.at("f"), out.inst.at("h"));
  }
  return out;
}
}  // namespace

Derivation dualize_derivation(const Theory& th, const Derivation& d, const DualityMap& m) {
  require_effect(th.flavor);
  return dualize_node(d, th.flavor, m);
}

}  // namespace decor
