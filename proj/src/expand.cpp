#include "decor/expand.hpp"

#include <algorithm>

#include "decor/error.hpp"

namespace decor {

namespace {

XTerm mk(XNode n) { return std::make_shared<const XNode>(std::move(n)); }

XNode node(XKind k) {
  XNode n{};
  n.kind = k;
  return n;
}

bool is(const TypeExpr& t, TypeKind k) { return t && t->kind == k; }

}  // namespace

namespace xt {
XTerm gen(const std::string& name, TypeExpr dom, TypeExpr cod, Term origin, Decoration level) {
  XNode n = node(XKind::Gen);
  n.name = name;
  n.dom = std::move(dom);
  n.cod = std::move(cod);
  n.origin = std::move(origin);
  n.level = level;
  return mk(std::move(n));
}
XTerm id(TypeExpr x) {
  XNode n = node(XKind::Id);
  n.dom = std::move(x);
  return mk(std::move(n));
}
XTerm comp(XTerm after, XTerm before) {
  if (!same(xcod(before), xdom(after)))
    throw DecorError(ErrorCode::CompositionMismatch,
                     "explicit composite " + to_string(after) + " . " + to_string(before));
  XNode n = node(XKind::Comp);
  n.kids = {std::move(after), std::move(before)};
  return mk(std::move(n));
}
XTerm bang(TypeExpr x) {
  XNode n = node(XKind::Bang);
  n.dom = std::move(x);
  return mk(std::move(n));
}
XTerm nabla(TypeExpr x) {
  XNode n = node(XKind::Nabla);
  n.cod = std::move(x);
  return mk(std::move(n));
}
XTerm pr1(TypeExpr p) {
  XNode n = node(XKind::Pr1);
  n.dom = std::move(p);
  return mk(std::move(n));
}
XTerm pr2(TypeExpr p) {
  XNode n = node(XKind::Pr2);
  n.dom = std::move(p);
  return mk(std::move(n));
}
XTerm in1(TypeExpr c) {
  XNode n = node(XKind::In1);
  n.cod = std::move(c);
  return mk(std::move(n));
}
XTerm in2(TypeExpr c) {
  XNode n = node(XKind::In2);
  n.cod = std::move(c);
  return mk(std::move(n));
}
XTerm pair(XTerm a, XTerm b) {
  if (!same(xdom(a), xdom(b)))
    throw DecorError(ErrorCode::CompositionMismatch, "pairing with different sources");
  XNode n = node(XKind::Pair);
  n.kids = {std::move(a), std::move(b)};
  return mk(std::move(n));
}
XTerm copair(XTerm a, XTerm b) {
  if (!same(xcod(a), xcod(b)))
    throw DecorError(ErrorCode::CompositionMismatch, "copairing with different targets");
  XNode n = node(XKind::Copair);
  n.kids = {std::move(a), std::move(b)};
  return mk(std::move(n));
}
XTerm state_tuple(TypeExpr dom, std::vector<std::string> keys, std::vector<XTerm> comps) {
  XNode n = node(XKind::StateTuple);
  n.dom = std::move(dom);
  n.keys = std::move(keys);
  n.kids = std::move(comps);
  return mk(std::move(n));
}
XTerm exc_cotuple(TypeExpr cod, std::vector<std::string> keys, std::vector<XTerm> comps) {
  XNode n = node(XKind::ExcCotuple);
  n.cod = std::move(cod);
  n.keys = std::move(keys);
  n.kids = std::move(comps);
  return mk(std::move(n));
}
}  // namespace xt

TypeExpr xdom(const XTerm& t) {
  switch (t->kind) {
    case XKind::Comp: return xdom(t->kids[1]);
    case XKind::Nabla: return ty::empty();
    case XKind::In1: return t->cod->left;
    case XKind::In2: return t->cod->right;
    case XKind::Pair: return xdom(t->kids[0]);
    case XKind::Copair: return ty::coprod(xdom(t->kids[0]), xdom(t->kids[1]));
    case XKind::ExcCotuple: return ty::exc();
    default: return t->dom;
  }
}

TypeExpr xcod(const XTerm& t) {
  switch (t->kind) {
    case XKind::Id: return t->dom;
    case XKind::Comp: return xcod(t->kids[0]);
    case XKind::Bang: return ty::unit();
    case XKind::Pr1: return t->dom->left;
    case XKind::Pr2: return t->dom->right;
    case XKind::Pair: return ty::prod(xcod(t->kids[0]), xcod(t->kids[1]));
    case XKind::Copair: return xcod(t->kids[0]);
    case XKind::StateTuple: return ty::state();
    default: return t->cod;
  }
}

std::string to_string(const XTerm& t) {
  auto br = [](const char* h, const TypeExpr& x) { return std::string(h) + "[" + to_string(x) + "]"; };
  auto comps = [&]() {
    std::string s = "{";
    for (std::size_t k = 0; k < t->kids.size(); ++k) {
      if (k) s += ", ";
      s += t->keys[k] + ": " + to_string(t->kids[k]);
    }
    return s + "}";
  };
  switch (t->kind) {
    case XKind::Gen: return t->name;
    case XKind::Id: return br("id", t->dom);
    case XKind::Comp: {
      std::string a = to_string(t->kids[0]);
      if (t->kids[0]->kind == XKind::Comp) a = "(" + a + ")";
      return a + " . " + to_string(t->kids[1]);
    }
    case XKind::Bang: return br("<>", t->dom);
    case XKind::Nabla: return br("[]", t->cod);
    case XKind::Pr1: return br("p1", t->dom);
    case XKind::Pr2: return br("p2", t->dom);
    case XKind::In1: return br("in1", t->cod);
    case XKind::In2: return br("in2", t->cod);
    case XKind::Pair: return "<" + to_string(t->kids[0]) + ", " + to_string(t->kids[1]) + ">";
    case XKind::Copair: return "[" + to_string(t->kids[0]) + " | " + to_string(t->kids[1]) + "]";
    case XKind::StateTuple: return "stuple" + comps();
    case XKind::ExcCotuple: return "ecotuple" + comps();
  }
  return "?";
}

bool same(const XTerm& a, const XTerm& b) {
  if (a->kind != b->kind || a->name != b->name || a->keys != b->keys || a->kids.size() != b->kids.size())
    return false;
  if ((a->dom || b->dom) && !(a->dom && b->dom && same(a->dom, b->dom))) return false;
  if ((a->cod || b->cod) && !(a->cod && b->cod && same(a->cod, b->cod))) return false;
  for (std::size_t k = 0; k < a->kids.size(); ++k)
    if (!same(a->kids[k], b->kids[k])) return false;
  return true;
}

std::string to_string(const XEquation& e) { return to_string(e.lhs) + " == " + to_string(e.rhs); }

TypeExpr with_state(const TypeExpr& x) { return is(x, TypeKind::Unit) ? ty::state() : ty::prod(x, ty::state()); }
TypeExpr with_exc(const TypeExpr& x) { return is(x, TypeKind::Empty) ? ty::exc() : ty::coprod(x, ty::exc()); }

// ---- simplification ----

namespace {

void flatten(const XTerm& t, std::vector<XTerm>& out) {
  if (t->kind == XKind::Comp) {
    flatten(t->kids[0], out);
    flatten(t->kids[1], out);
  } else if (t->kind != XKind::Id) {
    out.push_back(t);
  }
}

bool is_gen_prefix(const XTerm& t, const char* prefix, const std::string& key) {
  return t->kind == XKind::Gen && t->name == prefix + key;
}

XTerm simplify_node(const XTerm& t);

// One pass over a composition spine; returns true if something changed.
bool reduce(std::vector<XTerm>& sp) {
  for (std::size_t k = 0; k + 1 < sp.size(); ++k) {
    const XTerm& a = sp[k];
    const XTerm& b = sp[k + 1];
    XTerm r;
    if ((a->kind == XKind::Pr1 || a->kind == XKind::Pr2) && b->kind == XKind::Pair)
      r = b->kids[a->kind == XKind::Pr1 ? 0 : 1];
    else if (a->kind == XKind::Copair && (b->kind == XKind::In1 || b->kind == XKind::In2))
      r = a->kids[b->kind == XKind::In1 ? 0 : 1];
    else if (a->kind == XKind::Bang)
      r = xt::bang(xdom(b));
    else if (b->kind == XKind::Nabla)
      r = xt::nabla(xcod(a));
    if (!r) continue;
    std::vector<XTerm> rs;
    flatten(simplify_node(r), rs);
    sp.erase(sp.begin() + static_cast<long>(k), sp.begin() + static_cast<long>(k) + 2);
    sp.insert(sp.begin() + static_cast<long>(k), rs.begin(), rs.end());
    return true;
  }
  return false;
}

XTerm rebuild(const std::vector<XTerm>& sp, const TypeExpr& d) {
  if (sp.empty()) return xt::id(d);
  XTerm acc = sp.back();
  for (std::size_t k = sp.size() - 1; k-- > 0;) acc = xt::comp(sp[k], acc);
  return acc;
}

XTerm simplify_node(const XTerm& t) {
  switch (t->kind) {
    case XKind::Comp: {
      TypeExpr d = xdom(t);
      std::vector<XTerm> sp;
      flatten(t, sp);
      for (auto& s : sp) s = simplify_node(s);
      std::vector<XTerm> flat;
      for (const auto& s : sp) flatten(s, flat);
      while (reduce(flat)) {
      }
      return rebuild(flat, d);
    }
    case XKind::Bang:
      return is(t->dom, TypeKind::Unit) ? xt::id(t->dom) : t;
    case XKind::Nabla:
      return is(t->cod, TypeKind::Empty) ? xt::id(t->cod) : t;
    case XKind::Pair: {
      XTerm a = simplify_node(t->kids[0]), b = simplify_node(t->kids[1]);
      if (a->kind == XKind::Pr1 && b->kind == XKind::Pr2 && same(a->dom, b->dom)) return xt::id(a->dom);
      return xt::pair(a, b);
    }
    case XKind::Copair: {
      XTerm a = simplify_node(t->kids[0]), b = simplify_node(t->kids[1]);
      if (a->kind == XKind::In1 && b->kind == XKind::In2 && same(a->cod, b->cod)) return xt::id(a->cod);
      return xt::copair(a, b);
    }
    case XKind::StateTuple:
    case XKind::ExcCotuple: {
      std::vector<XTerm> ks;
      bool ident = true;
      const char* pre = t->kind == XKind::StateTuple ? "lt_" : "tt_";
      for (std::size_t k = 0; k < t->kids.size(); ++k) {
        ks.push_back(simplify_node(t->kids[k]));
        ident = ident && is_gen_prefix(ks.back(), pre, t->keys[k]);
      }
      if (t->kind == XKind::StateTuple) {
        if (ident && is(t->dom, TypeKind::State)) return xt::id(ty::state());
        return xt::state_tuple(t->dom, t->keys, std::move(ks));
      }
      if (ident && is(t->cod, TypeKind::Exc)) return xt::id(ty::exc());
      return xt::exc_cotuple(t->cod, t->keys, std::move(ks));
    }
    default: return t;
  }
}

}  // namespace

XTerm simplify(const XTerm& t) {
  XTerm cur = t;
  for (int k = 0; k < 16; ++k) {
    XTerm next = simplify_node(cur);
    if (same(next, cur)) return next;
    cur = next;
  }
  return cur;
}

// ---- expansion ----

namespace {

// The distinguished object and its structure, for one flavor. In the
// exceptions case "fst" is the injection X -> X+E and "pack" the copairing.
struct Shape {
  bool states;

  TypeExpr lift(const TypeExpr& x) const { return states ? with_state(x) : with_exc(x); }
  // states: X*S -> X, exceptions: X -> X+E
  XTerm val(const TypeExpr& x) const {
    if (states) return is(x, TypeKind::Unit) ? xt::bang(ty::state()) : xt::pr1(lift(x));
    return is(x, TypeKind::Empty) ? xt::nabla(ty::exc()) : xt::in1(lift(x));
  }
  // states: X*S -> S, exceptions: E -> X+E
  XTerm eff(const TypeExpr& x) const {
    if (states) return is(x, TypeKind::Unit) ? xt::id(ty::state()) : xt::pr2(lift(x));
    return is(x, TypeKind::Empty) ? xt::id(ty::exc()) : xt::in2(lift(x));
  }
  // states: <a, s> into Y*S; exceptions: [a | e] out of X+E
  XTerm pack(const TypeExpr& y, const XTerm& a, const XTerm& e) const {
    if (states) return is(y, TypeKind::Unit) ? e : xt::pair(a, e);
    return is(y, TypeKind::Empty) ? e : xt::copair(a, e);
  }
  XTerm seq(const XTerm& first, const XTerm& second) const { return xt::comp(second, first); }
};

class Expander {
 public:
  explicit Expander(Flavor f) : f_(f), sh_{f == Flavor::States} {
    if (f == Flavor::Plain) throw DecorError(ErrorCode::FlavorViolation, "expansion needs an effect flavor");
  }

  Expanded graded(const Term& t) {
    Expanded e = go(t);
    e.term = simplify(e.term);
    return e;
  }

  XTerm full(const Term& t) {
    Expanded e = go(t);
    return simplify(raise_to(e, 2, dom(t), cod(t)));
  }

 private:
  // Lift a graded image to a higher level.
  XTerm raise_to(const Expanded& e, Decoration to, const TypeExpr& X, const TypeExpr& Y) const {
    XTerm t = e.term;
    Decoration l = e.level;
    if (l == 0 && to >= 1) {
      t = sh_.states ? xt::comp(t, sh_.val(X)) : xt::comp(sh_.val(Y), t);
      l = 1;
    }
    if (l == 1 && to == 2) {
      t = sh_.states ? sh_.pack(Y, t, sh_.eff(X)) : sh_.pack(X, t, sh_.eff(Y));
      l = 2;
    }
    return t;
  }

  // Full form down to an accessor/propagator, valid for terms of level <= 1.
  XTerm lower(const XTerm& full, const TypeExpr& X, const TypeExpr& Y) const {
    return sh_.states ? xt::comp(sh_.val(Y), full) : xt::comp(full, sh_.val(X));
  }

  Expanded at_level(const Term& t, Decoration want, XTerm full) const {
    if (want == 2) return {2, full};
    return {1, lower(full, dom(t), cod(t))};
  }

  Expanded gen(const Term& t) const {
    const std::string& i = t->index;
    switch (t->role) {
      case GenRole::Lookup: return {1, xt::gen("lt_" + i, ty::state(), ty::value(i), t, 1)};
      case GenRole::Update: return {2, xt::gen("ut_" + i, with_state(ty::value(i)), ty::state(), t, 2)};
      case GenRole::Throw: return {1, xt::gen("tt_" + i, ty::param(i), ty::exc(), t, 1)};
      case GenRole::Catch: return {2, xt::gen("ct_" + i, ty::exc(), with_exc(ty::param(i)), t, 2)};
      default: break;
    }
    std::string n = t->role == GenRole::CatchAll ? "ct_all"
                    : t->role == GenRole::UpdateAll ? "ut_all"
                                                    : t->name + "~";
    Decoration d = t->dec;
    TypeExpr X = t->dom, Y = t->cod;
    if (d == 0) return {0, xt::gen(n, X, Y, t, 0)};
    if (d == 1)
      return {1, sh_.states ? xt::gen(n, sh_.lift(X), Y, t, 1) : xt::gen(n, X, sh_.lift(Y), t, 1)};
    return {2, xt::gen(n, sh_.lift(X), sh_.lift(Y), t, 2)};
  }

  Expanded go(const Term& t) {
    TypeExpr X = dom(t), Y = cod(t);
    switch (t->kind) {
      case TermKind::Gen: return gen(t);
      case TermKind::Id: return {0, xt::id(X)};
      case TermKind::ToUnit: return {0, xt::bang(X)};
      case TermKind::FromEmpty: return {0, xt::nabla(Y)};
      case TermKind::Proj1: return {0, xt::pr1(X)};
      case TermKind::Proj2: return {0, xt::pr2(X)};
      case TermKind::Inj1: return {0, xt::in1(Y)};
      case TermKind::Inj2: return {0, xt::in2(Y)};
      case TermKind::Comp: {
        const Term& g = t->kids[0];
        const Term& f = t->kids[1];
        TypeExpr Z = cod(f);
        Expanded ef = go(f), eg = go(g);
        Decoration l = std::max(ef.level, eg.level);
        if (l == 0) return {0, xt::comp(eg.term, ef.term)};
        XTerm F = raise_to(ef, l, X, Z), G = raise_to(eg, l, Z, Y);
        if (l == 2) return {2, xt::comp(G, F)};
        // co-Kleisli / Kleisli composition of accessors / propagators
        if (sh_.states) return {1, xt::comp(G, sh_.pack(Z, F, sh_.eff(X)))};
        return {1, xt::comp(sh_.pack(Z, G, sh_.eff(Y)), F)};
      }
      case TermKind::AccPair:
      case TermKind::PropCase: {
        Expanded a = go(t->kids[0]), b = go(t->kids[1]);
        Decoration l = std::max(a.level, b.level);
        TypeExpr Xa = dom(t->kids[0]), Xb = dom(t->kids[1]);
        TypeExpr Ya = cod(t->kids[0]), Yb = cod(t->kids[1]);
        XTerm A = raise_to(a, l, Xa, Ya), B = raise_to(b, l, Xb, Yb);
        if (t->kind == TermKind::AccPair) return {l, xt::pair(A, B)};
        return {l, xt::copair(A, B)};
      }
      case TermKind::CoerceAcc: return {1, lower(full(t->kids[0]), X, Y)};
      case TermKind::Coerce: return {1, lower(full(t->kids[0]), X, Y)};
      case TermKind::CaseProd: {
        XTerm g = raise_to(go(t->kids[0]), 1, X, Y);
        XTerm k = full(t->kids[1]);  // X*S -> S
        return at_level(t, decoration(t), sh_.pack(Y, g, k));
      }
      case TermKind::CaseSum: {
        XTerm g = raise_to(go(t->kids[0]), 1, X, Y);
        XTerm k = full(t->kids[1]);  // E -> Y+E
        return at_level(t, decoration(t), sh_.pack(X, g, k));
      }
      case TermKind::LocTuple: {
        std::vector<XTerm> cs;
        for (const auto& c : t->kids) cs.push_back(raise_to(go(c), 1, X, cod(c)));
        return {2, xt::state_tuple(with_state(X), t->keys, std::move(cs))};
      }
      case TermKind::ConstCotuple: {
        std::vector<XTerm> cs;
        for (const auto& c : t->kids) cs.push_back(raise_to(go(c), 1, dom(c), Y));
        return {2, xt::exc_cotuple(with_exc(Y), t->keys, std::move(cs))};
      }
      case TermKind::SemiProd: return {2, semiprod(t)};
      case TermKind::SemiCoprod: return {2, semicoprod(t)};
    }
    throw DecorError(ErrorCode::IllFormed, "unknown term kind");
  }

  XTerm semiprod(const Term& t) {
    if (!sh_.states) throw DecorError(ErrorCode::FlavorViolation, "semi-pure products are states-only");
    TypeExpr X = dom(t), Y = cod(t);
    TypeExpr PX = with_state(X);
    const Term& f = t->kids[0];
    const Term& g = t->kids[1];
    XTerm fp = go(f).term;
    XTerm gf = full(g);
    XTerm a1 = xt::comp(xt::pr1(X), xt::pr1(PX));
    XTerm a2 = xt::comp(xt::pr2(X), xt::pr1(PX));
    XTerm s = xt::pr2(PX);
    if (t->pure_left) {
      XTerm G = xt::comp(gf, sh_.pack(X->right, a2, s));
      return sh_.pack(Y, xt::pair(xt::comp(fp, a1), xt::comp(sh_.val(cod(g)), G)), xt::comp(sh_.eff(cod(g)), G));
    }
    XTerm G = xt::comp(gf, sh_.pack(X->left, a1, s));
    return sh_.pack(Y, xt::pair(xt::comp(sh_.val(cod(g)), G), xt::comp(fp, a2)), xt::comp(sh_.eff(cod(g)), G));
  }

  XTerm semicoprod(const Term& t) {
    if (sh_.states) throw DecorError(ErrorCode::FlavorViolation, "semi-pure coproducts are exceptions-only");
    TypeExpr X = dom(t), Y = cod(t);
    TypeExpr QY = with_exc(Y);
    (void)X;
    const Term& f = t->kids[0];
    const Term& g = t->kids[1];
    XTerm fp = go(f).term;
    XTerm gf = full(g);
    XTerm inY = xt::in1(QY), exY = xt::in2(QY);
    XTerm val1 = xt::comp(inY, xt::in1(Y)), val2 = xt::comp(inY, xt::in2(Y));
    if (t->pure_left) {
      XTerm H = xt::comp(sh_.pack(Y->right, val2, exY), gf);
      return xt::copair(xt::copair(xt::comp(val1, fp), xt::comp(H, sh_.val(X->right))),
                        xt::comp(H, sh_.eff(X->right)));
    }
    XTerm H = xt::comp(sh_.pack(Y->left, val1, exY), gf);
    return xt::copair(xt::copair(xt::comp(H, sh_.val(X->left)), xt::comp(val2, fp)),
                      xt::comp(H, sh_.eff(X->left)));
  }

  Flavor f_;
  Shape sh_;
};

}  // namespace

Expanded expand_graded(const Term& t, Flavor f) { return Expander(f).graded(t); }
XTerm expand_full(const Term& t, Flavor f) { return Expander(f).full(t); }
XTerm expand_states(const Term& t) { return Expander(Flavor::States).graded(t).term; }
XTerm expand_exceptions(const Term& t) { return Expander(Flavor::Exceptions).graded(t).term; }

namespace {
XEquation expand_eq(const Equation& e, Flavor f) {
  Expander x(f);
  XTerm l = x.full(e.lhs), r = x.full(e.rhs);
  if (e.kind == EqKind::Weak) {
    if (f == Flavor::States) {
      XTerm p = Shape{true}.val(cod(e.lhs));
      l = xt::comp(p, l);
      r = xt::comp(p, r);
    } else {
      XTerm i = Shape{false}.val(dom(e.lhs));
      l = xt::comp(l, i);
      r = xt::comp(r, i);
    }
  }
  return {simplify(l), simplify(r)};
}

ExplicitTheory expand_theory(const Theory& th, Flavor f) {
  if (th.flavor != f)
    throw DecorError(ErrorCode::FlavorViolation, th.name + " is a " + flavor_name(th.flavor) + " theory");
  ExplicitTheory out;
  out.name = th.name + "_expl";
  out.source = f;
  Expander x(f);
  for (const auto& g : th.generators) out.generators.push_back(x.graded(g).term);
  for (const auto& a : th.axioms) out.axioms.emplace_back(a.name, expand_eq(a.eq, f));
  return out;
}
}  // namespace

XEquation expand_states(const Equation& e) { return expand_eq(e, Flavor::States); }
XEquation expand_exceptions(const Equation& e) { return expand_eq(e, Flavor::Exceptions); }
ExplicitTheory expand_states(const Theory& th) { return expand_theory(th, Flavor::States); }
ExplicitTheory expand_exceptions(const Theory& th) { return expand_theory(th, Flavor::Exceptions); }
ExplicitTheory expand(const Theory& th) { return expand_theory(th, th.flavor); }

// ---- explicit evaluation ----

Value encode_state(const State& s) {
  Value v = Value::atom_of(0, 's');
  v.kids = s;
  return v;
}

Value encode_exc(const Outcome& e) {
  Value v = Value::atom_of(0, 'e', e.ctor);
  v.kids = {e.v};
  return v;
}

Value encode_point(const FiniteModel&, const TypeExpr& x, const Value& v, const State& s) {
  if (is(x, TypeKind::Unit)) return encode_state(s);
  return Value::pair(v, encode_state(s));
}

Value encode_outcome(const TypeExpr& x, const Outcome& o) {
  if (is(x, TypeKind::Empty)) return encode_exc(o);
  return o.exc ? Value::inr(encode_exc(o)) : Value::inl(o.v);
}

namespace {

[[noreturn]] void xstuck(const XTerm& t, const Value& v) {
  throw DecorError(ErrorCode::IllFormed, "cannot evaluate " + to_string(t) + " on " + to_string(v));
}

bool is_state(const Value& v) { return v.kind == Value::Kind::Atom && v.tag == 's'; }
bool is_exc(const Value& v) { return v.kind == Value::Kind::Atom && v.tag == 'e'; }

// Interpret a generator through the direct evaluator.
Value xgen(const FiniteModel& m, const XTerm& t, const Value& in) {
  const Term& g = t->origin;
  if (!g) xstuck(t, in);
  TypeExpr X = g->dom, Y = g->cod;
  if (m.flavor == Flavor::States) {
    Value a = in;
    State s(m.indices.size(), Value::atom_of(0));
    if (t->level > 0) {
      if (is(X, TypeKind::Unit)) {
        if (!is_state(in)) xstuck(t, in);
        a = Value::unit();
        s = in.kids;
      } else {
        if (in.kind != Value::Kind::Pair || !is_state(in.kids[1])) xstuck(t, in);
        a = in.kids[0];
        s = in.kids[1].kids;
      }
    }
    auto [v, s2] = eval_states(m, g, a, s);
    if (t->level < 2) return v;
    return encode_point(m, Y, v, s2);
  }
  Outcome o;
  if (t->level == 2) {
    if (is_exc(in)) o = {true, in.sym, in.kids[0]};
    else if (in.kind == Value::Kind::Inr && is_exc(in.kids[0])) o = {true, in.kids[0].sym, in.kids[0].kids[0]};
    else if (in.kind == Value::Kind::Inl) o = {false, {}, in.kids[0]};
    else xstuck(t, in);
  } else {
    o = {false, {}, in};
  }
  Outcome r = eval_exceptions(m, g, o);
  if (t->level == 0) return r.v;
  return encode_outcome(Y, r);
}

}  // namespace

Value xeval(const FiniteModel& m, const XTerm& t, const Value& in) {
  switch (t->kind) {
    case XKind::Gen: return xgen(m, t, in);
    case XKind::Id: return in;
    case XKind::Comp: return xeval(m, t->kids[0], xeval(m, t->kids[1], in));
    case XKind::Bang: return Value::unit();
    case XKind::Nabla: xstuck(t, in);
    case XKind::Pr1:
    case XKind::Pr2:
      if (in.kind != Value::Kind::Pair) xstuck(t, in);
      return in.kids[t->kind == XKind::Pr1 ? 0 : 1];
    case XKind::In1: return Value::inl(in);
    case XKind::In2: return Value::inr(in);
    case XKind::Pair: return Value::pair(xeval(m, t->kids[0], in), xeval(m, t->kids[1], in));
    case XKind::Copair:
      if (in.kind == Value::Kind::Inl) return xeval(m, t->kids[0], in.kids[0]);
      if (in.kind == Value::Kind::Inr) return xeval(m, t->kids[1], in.kids[0]);
      xstuck(t, in);
    case XKind::StateTuple: {
      State s(m.indices.size());
      for (std::size_t k = 0; k < t->kids.size(); ++k) s[m.position(t->keys[k])] = xeval(m, t->kids[k], in);
      return encode_state(s);
    }
    case XKind::ExcCotuple:
      if (!is_exc(in)) xstuck(t, in);
      for (std::size_t k = 0; k < t->keys.size(); ++k)
        if (t->keys[k] == in.sym) return xeval(m, t->kids[k], in.kids[0]);
      xstuck(t, in);
  }
  xstuck(t, in);
}

}  // namespace decor
