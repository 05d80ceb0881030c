#pragma once

#include <string>
#include <utility>
#include <vector>

#include "decor/model.hpp"
#include "decor/theory.hpp"

namespace decor {

// Plain terms over explicit types, where S (states) or E (exceptions) is a
// distinguished object. Types are normalized: 1*S = S and 0+E = E, and the
// distinguished object is always the right factor/summand.
enum class XKind {
  Gen,     // lt_i: S -> V_i, ut_i: V_i*S -> S, tt_i: P_i -> E, ct_i: E -> P_i+E, user f~
  Id,
  Comp,    // kids {after, before}
  Bang,    // X -> 1
  Nabla,   // 0 -> X
  Pr1,
  Pr2,
  In1,
  In2,
  Pair,    // <a, b>: Z -> A*B
  Copair,  // [a | b]: A+B -> Z
  StateTuple,  // Z -> S, one component Z -> V_j per location
  ExcCotuple,  // E -> Z, one component P_j -> Z per constructor
};

struct XNode;
using XTerm = std::shared_ptr<const XNode>;

struct XNode {
  XKind kind;
  std::string name;
  TypeExpr dom, cod;
  std::vector<XTerm> kids;
  std::vector<std::string> keys;
  // Gen only: the decorated generator it comes from and the form it has
  // (0 pure, 1 accessor/propagator, 2 full), so xeval can interpret it.
  Term origin;
  Decoration level = 0;
};

namespace xt {
XTerm gen(const std::string& name, TypeExpr dom, TypeExpr cod, Term origin = nullptr, Decoration level = 0);
XTerm id(TypeExpr x);
XTerm comp(XTerm after, XTerm before);
XTerm bang(TypeExpr x);
XTerm nabla(TypeExpr x);
XTerm pr1(TypeExpr product);
XTerm pr2(TypeExpr product);
XTerm in1(TypeExpr coproduct);
XTerm in2(TypeExpr coproduct);
XTerm pair(XTerm a, XTerm b);
XTerm copair(XTerm a, XTerm b);
XTerm state_tuple(TypeExpr dom, std::vector<std::string> keys, std::vector<XTerm> comps);
XTerm exc_cotuple(TypeExpr cod, std::vector<std::string> keys, std::vector<XTerm> comps);
}  // namespace xt

TypeExpr xdom(const XTerm& t);
TypeExpr xcod(const XTerm& t);
std::string to_string(const XTerm& t);
bool same(const XTerm& a, const XTerm& b);

// Projection/injection cancellation, identity removal and the (co)terminal
// laws, applied to a fixpoint.
XTerm simplify(const XTerm& t);

struct XEquation {
  XTerm lhs, rhs;
};
std::string to_string(const XEquation& e);

// X*S and X+E in normal form.
TypeExpr with_state(const TypeExpr& x);
TypeExpr with_exc(const TypeExpr& x);

// Level-indexed image, simplified: pure X -> Y, accessor X*S -> Y /
// propagator X -> Y+E, modifier X*S -> Y*S / catcher X+E -> Y+E.
XTerm expand_states(const Term& t);
XTerm expand_exceptions(const Term& t);
// Full image X*S -> Y*S or X+E -> Y+E whatever the level.
XTerm expand_full(const Term& t, Flavor f);
// Strong: f~ == g~. Weak: pr_Y . f~ == pr_Y . g~ (states) or
// f~ . in_X == g~ . in_X (exceptions).
XEquation expand_states(const Equation& e);
XEquation expand_exceptions(const Equation& e);

struct Expanded {
  Decoration level;
  XTerm term;
};
Expanded expand_graded(const Term& t, Flavor f);

struct ExplicitTheory {
  std::string name;
  Flavor source = Flavor::States;
  std::vector<XTerm> generators;
  std::vector<std::pair<std::string, XEquation>> axioms;
};

// Throws FlavorViolation unless th has the matching flavor.
ExplicitTheory expand_states(const Theory& th);
ExplicitTheory expand_exceptions(const Theory& th);
// Dispatch on the theory flavor.
ExplicitTheory expand(const Theory& th);

// Evaluation of explicit terms in a finite model, used to cross-check the
// direct evaluator. State elements are tuples tagged 's'; exceptions are
// atoms tagged 'e' whose `sym` is the constructor and kids[0] the parameter.
Value xeval(const FiniteModel& m, const XTerm& t, const Value& in);
Value encode_state(const State& s);
Value encode_exc(const Outcome& e);
// Element of X*S / X+E for a point of the direct semantics.
Value encode_point(const FiniteModel& m, const TypeExpr& x, const Value& v, const State& s);
Value encode_outcome(const TypeExpr& x, const Outcome& o);

}  // namespace decor
