#include "decor/term.hpp"

#include "decor/error.hpp"

namespace decor {

const char* code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::UnknownGenerator: return "UnknownGenerator";
    case ErrorCode::CompositionMismatch: return "CompositionMismatch";
    case ErrorCode::FlavorViolation: return "FlavorViolation";
    case ErrorCode::IllFormed: return "IllFormed";
    case ErrorCode::SideConditionViolated: return "SideConditionViolated";
    case ErrorCode::PremiseShapeMismatch: return "PremiseShapeMismatch";
    case ErrorCode::NotAnAccessor: return "NotAnAccessor";
    case ErrorCode::DuplicateLocation: return "DuplicateLocation";
    case ErrorCode::PureSideNotPure: return "PureSideNotPure";
    case ErrorCode::UnknownLemma: return "UnknownLemma";
    case ErrorCode::BadParams: return "BadParams";
    case ErrorCode::UnknownConstructor: return "UnknownConstructor";
    case ErrorCode::EmptyHandler: return "EmptyHandler";
    case ErrorCode::CodomainMismatch: return "CodomainMismatch";
    case ErrorCode::CarrierMissing: return "CarrierMissing";
    case ErrorCode::SearchSpaceTooLarge: return "SearchSpaceTooLarge";
    case ErrorCode::SuiteUnknown: return "SuiteUnknown";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::NameError: return "NameError";
  }
  return "Error";
}

namespace tm {
namespace {
Term mk(TermNode n) { return std::make_shared<const TermNode>(std::move(n)); }
}  // namespace

Term gen(const std::string& name, TypeExpr d, TypeExpr c, Decoration dec, GenRole role,
         const std::string& index) {
  TermNode n{}; n.kind = TermKind::Gen;
  n.name = name;
  n.role = role;
  n.index = index;
  n.dec = dec;
  n.dom = std::move(d);
  n.cod = std::move(c);
  return mk(std::move(n));
}

Term id(TypeExpr x) {
  TermNode n{}; n.kind = TermKind::Id;
  n.dom = std::move(x);
  return mk(std::move(n));
}

Term comp(Term after, Term before) {
  TermNode n{}; n.kind = TermKind::Comp;
  n.kids = {std::move(after), std::move(before)};
  return mk(std::move(n));
}

Term chain(const std::vector<Term>& ts) {
  if (ts.empty()) throw DecorError(ErrorCode::IllFormed, "empty composition chain");
  Term acc = ts.back();
  for (std::size_t k = ts.size() - 1; k-- > 0;) acc = comp(ts[k], acc);
  return acc;
}

Term to_unit(TypeExpr x) {
  TermNode n{}; n.kind = TermKind::ToUnit;
  n.dom = std::move(x);
  return mk(std::move(n));
}

Term from_empty(TypeExpr x) {
  TermNode n{}; n.kind = TermKind::FromEmpty;
  n.cod = std::move(x);
  return mk(std::move(n));
}

namespace {
Term structural(TermKind k, TypeExpr t, bool on_dom) {
  TermNode n{}; n.kind = k;
  (on_dom ? n.dom : n.cod) = std::move(t);
  return mk(std::move(n));
}
Term binary(TermKind k, Term a, Term b, bool pure_left = true) {
  TermNode n{}; n.kind = k;
  n.pure_left = pure_left;
  n.kids = {std::move(a), std::move(b)};
  return mk(std::move(n));
}
Term unary(TermKind k, Term a) {
  TermNode n{}; n.kind = k;
  n.kids = {std::move(a)};
  return mk(std::move(n));
}
}  // namespace

Term proj1(TypeExpr p) { return structural(TermKind::Proj1, std::move(p), true); }
Term proj2(TypeExpr p) { return structural(TermKind::Proj2, std::move(p), true); }
Term inj1(TypeExpr c) { return structural(TermKind::Inj1, std::move(c), false); }
Term inj2(TypeExpr c) { return structural(TermKind::Inj2, std::move(c), false); }
Term semiprod(Term pure, Term other, bool pure_left) {
  return binary(TermKind::SemiProd, std::move(pure), std::move(other), pure_left);
}
Term semicoprod(Term pure, Term other, bool pure_left) {
  return binary(TermKind::SemiCoprod, std::move(pure), std::move(other), pure_left);
}
Term case_sum(Term v, Term e) { return binary(TermKind::CaseSum, std::move(v), std::move(e)); }
Term case_prod(Term v, Term u) { return binary(TermKind::CaseProd, std::move(v), std::move(u)); }
Term prop_case(Term l, Term r) { return binary(TermKind::PropCase, std::move(l), std::move(r)); }
Term acc_pair(Term l, Term r) { return binary(TermKind::AccPair, std::move(l), std::move(r)); }
Term coerce(Term k) { return unary(TermKind::Coerce, std::move(k)); }
Term coerce_acc(Term k) { return unary(TermKind::CoerceAcc, std::move(k)); }

Term loc_tuple(TypeExpr d, std::vector<std::string> keys, std::vector<Term> comps) {
  TermNode n{}; n.kind = TermKind::LocTuple;
  n.dom = std::move(d);
  n.keys = std::move(keys);
  n.kids = std::move(comps);
  return mk(std::move(n));
}

Term const_cotuple(TypeExpr c, std::vector<std::string> keys, std::vector<Term> comps) {
  TermNode n{}; n.kind = TermKind::ConstCotuple;
  n.cod = std::move(c);
  n.keys = std::move(keys);
  n.kids = std::move(comps);
  return mk(std::move(n));
}
}  // namespace tm

int compare(const Term& a, const Term& b) {
  if (a == b) return 0;
  if (!a || !b) return a ? 1 : -1;
  auto cmp = [](auto x, auto y) { return x < y ? -1 : (y < x ? 1 : 0); };
  if (int c = cmp(static_cast<int>(a->kind), static_cast<int>(b->kind))) return c;
  if (int c = a->name.compare(b->name)) return c < 0 ? -1 : 1;
  if (int c = cmp(static_cast<int>(a->role), static_cast<int>(b->role))) return c;
  if (int c = a->index.compare(b->index)) return c < 0 ? -1 : 1;
  if (int c = cmp(a->dec, b->dec)) return c;
  if (int c = compare(a->dom, b->dom)) return c;
  if (int c = compare(a->cod, b->cod)) return c;
  if (int c = cmp(a->pure_left, b->pure_left)) return c;
  if (int c = cmp(a->keys, b->keys)) return c;
  if (int c = cmp(a->kids.size(), b->kids.size())) return c;
  for (std::size_t k = 0; k < a->kids.size(); ++k)
    if (int c = compare(a->kids[k], b->kids[k])) return c;
  return 0;
}

namespace {
[[noreturn]] void mismatch(const TypeExpr& expected, const TypeExpr& found, const Term& t) {
  throw DecorError(ErrorCode::CompositionMismatch,
                   "expected " + to_string(expected) + ", found " + to_string(found) + " in " +
                       to_string(t));
}

TypeExpr factor(const TypeExpr& t, TypeKind k, bool left, const Term& at) {
  if (!t || t->kind != k)
    throw DecorError(ErrorCode::IllFormed, "expected a binary (co)product type in " + to_string(at));
  return left ? t->left : t->right;
}

struct Sig {
  TypeExpr d, c;
};

Sig sig(const Term& t) {
  switch (t->kind) {
    case TermKind::Gen: return {t->dom, t->cod};
    case TermKind::Id: return {t->dom, t->dom};
    case TermKind::Comp: {
      Sig a = sig(t->kids[0]), b = sig(t->kids[1]);
      if (!same(b.c, a.d)) mismatch(a.d, b.c, t);
      return {b.d, a.c};
    }
    case TermKind::ToUnit: return {t->dom, ty::unit()};
    case TermKind::FromEmpty: return {ty::empty(), t->cod};
    case TermKind::Proj1: return {t->dom, factor(t->dom, TypeKind::Prod, true, t)};
    case TermKind::Proj2: return {t->dom, factor(t->dom, TypeKind::Prod, false, t)};
    case TermKind::Inj1: return {factor(t->cod, TypeKind::Coprod, true, t), t->cod};
    case TermKind::Inj2: return {factor(t->cod, TypeKind::Coprod, false, t), t->cod};
    case TermKind::SemiProd:
    case TermKind::SemiCoprod: {
      Sig p = sig(t->kids[0]), o = sig(t->kids[1]);
      Sig l = t->pure_left ? p : o, r = t->pure_left ? o : p;
      if (t->kind == TermKind::SemiProd) return {ty::prod(l.d, r.d), ty::prod(l.c, r.c)};
      return {ty::coprod(l.d, r.d), ty::coprod(l.c, r.c)};
    }
    case TermKind::CaseSum: {
      Sig g = sig(t->kids[0]), k = sig(t->kids[1]);
      if (!same(k.d, ty::empty())) mismatch(ty::empty(), k.d, t);
      if (!same(g.c, k.c)) mismatch(g.c, k.c, t);
      return g;
    }
    case TermKind::CaseProd: {
      Sig g = sig(t->kids[0]), k = sig(t->kids[1]);
      if (!same(k.c, ty::unit())) mismatch(ty::unit(), k.c, t);
      if (!same(g.d, k.d)) mismatch(g.d, k.d, t);
      return g;
    }
    case TermKind::PropCase: {
      Sig g = sig(t->kids[0]), h = sig(t->kids[1]);
      if (!same(g.c, h.c)) mismatch(g.c, h.c, t);
      return {ty::coprod(g.d, h.d), g.c};
    }
    case TermKind::AccPair: {
      Sig g = sig(t->kids[0]), h = sig(t->kids[1]);
      if (!same(g.d, h.d)) mismatch(g.d, h.d, t);
      return {g.d, ty::prod(g.c, h.c)};
    }
    case TermKind::Coerce:
    case TermKind::CoerceAcc: return sig(t->kids[0]);
    case TermKind::LocTuple: {
      for (std::size_t k = 0; k < t->kids.size(); ++k) {
        Sig s = sig(t->kids[k]);
        if (!same(s.d, t->dom)) mismatch(t->dom, s.d, t);
        if (!same(s.c, ty::value(t->keys[k]))) mismatch(ty::value(t->keys[k]), s.c, t);
      }
      return {t->dom, ty::unit()};
    }
    case TermKind::ConstCotuple: {
      for (std::size_t k = 0; k < t->kids.size(); ++k) {
        Sig s = sig(t->kids[k]);
        if (!same(s.c, t->cod)) mismatch(t->cod, s.c, t);
        if (!same(s.d, ty::param(t->keys[k]))) mismatch(ty::param(t->keys[k]), s.d, t);
      }
      return {ty::empty(), t->cod};
    }
  }
  throw DecorError(ErrorCode::IllFormed, "unknown term kind");
}
}  // namespace

TypeExpr dom(const Term& t) { return sig(t).d; }
TypeExpr cod(const Term& t) { return sig(t).c; }

std::size_t size(const Term& t) {
  if (t->kind == TermKind::Id) return 0;
  std::size_t n = t->kind == TermKind::Comp ? 0 : 1;
  for (const auto& k : t->kids) n += size(k);
  return n;
}

namespace {
std::string bracket(const char* head, const TypeExpr& t) {
  return std::string(head) + "[" + to_string(t) + "]";
}
std::string components(const Term& t) {
  std::string s = "{";
  for (std::size_t k = 0; k < t->kids.size(); ++k) {
    if (k) s += ", ";
    s += t->keys[k] + ": " + to_string(t->kids[k]);
  }
  return s + "}";
}
}  // namespace

std::string to_string(const Term& t) {
  if (!t) return "?";
  const auto& k = t->kids;
  switch (t->kind) {
    case TermKind::Gen: return t->name;
    case TermKind::Id: return bracket("id", t->dom);
    case TermKind::Comp: {
      std::string a = to_string(k[0]);
      if (k[0]->kind == TermKind::Comp) a = "(" + a + ")";
      return a + " . " + to_string(k[1]);
    }
    case TermKind::ToUnit: return bracket("<>", t->dom);
    case TermKind::FromEmpty: return bracket("[]", t->cod);
    case TermKind::Proj1: return bracket("p1", t->dom);
    case TermKind::Proj2: return bracket("p2", t->dom);
    case TermKind::Inj1: return bracket("in1", t->cod);
    case TermKind::Inj2: return bracket("in2", t->cod);
    case TermKind::SemiProd:
      return t->pure_left ? "lsemi(" + to_string(k[0]) + ", " + to_string(k[1]) + ")"
                          : "rsemi(" + to_string(k[1]) + ", " + to_string(k[0]) + ")";
    case TermKind::SemiCoprod:
      return t->pure_left ? "lsum(" + to_string(k[0]) + ", " + to_string(k[1]) + ")"
                          : "rsum(" + to_string(k[1]) + ", " + to_string(k[0]) + ")";
    case TermKind::CaseSum: return "case(" + to_string(k[0]) + " | " + to_string(k[1]) + ")";
    case TermKind::CaseProd: return "cprod(" + to_string(k[0]) + " | " + to_string(k[1]) + ")";
    case TermKind::PropCase: return "pcase(" + to_string(k[0]) + ", " + to_string(k[1]) + ")";
    case TermKind::AccPair: return "pair(" + to_string(k[0]) + ", " + to_string(k[1]) + ")";
    case TermKind::Coerce: return "down(" + to_string(k[0]) + ")";
    case TermKind::CoerceAcc: return "up(" + to_string(k[0]) + ")";
    case TermKind::LocTuple: return bracket("tuple", t->dom) + components(t);
    case TermKind::ConstCotuple: return bracket("cotuple", t->cod) + components(t);
  }
  return "?";
}

namespace {
void flatten(const Term& t, std::vector<Term>& out);

Term rebuild(const Term& t) {
  if (t->kids.empty()) return t;
  TermNode n = *t;
  for (auto& k : n.kids) k = normalize_assoc(k);
  return std::make_shared<const TermNode>(std::move(n));
}

void flatten(const Term& t, std::vector<Term>& out) {
  if (t->kind == TermKind::Comp) {
    flatten(t->kids[0], out);
    flatten(t->kids[1], out);
  } else if (t->kind != TermKind::Id) {
    out.push_back(rebuild(t));
  }
}
}  // namespace

Term normalize_assoc(const Term& t) {
  if (t->kind != TermKind::Comp) return rebuild(t);
  std::vector<Term> parts;
  flatten(t, parts);
  if (parts.empty()) return tm::id(dom(t));
  return tm::chain(parts);
}

std::vector<Term> spine(const Term& t) {
  std::vector<Term> out;
  Term cur = t;
  while (cur->kind == TermKind::Comp) {
    out.push_back(cur->kids[0]);
    cur = cur->kids[1];
  }
  out.push_back(cur);
  return out;
}

int compare(const Equation& a, const Equation& b) {
  if (a.kind != b.kind) return a.kind == EqKind::Strong ? -1 : 1;
  if (int c = compare(a.lhs, b.lhs)) return c;
  return compare(a.rhs, b.rhs);
}

std::string to_string(const Equation& e) {
  return to_string(e.lhs) + (e.kind == EqKind::Strong ? " == " : " ~~ ") + to_string(e.rhs);
}

Equation normalize(const Equation& e) {
  return {normalize_assoc(e.lhs), normalize_assoc(e.rhs), e.kind};
}

bool same_up_to_assoc(const Equation& a, const Equation& b) {
  return compare(normalize(a), normalize(b)) == 0;
}

}  // namespace decor
