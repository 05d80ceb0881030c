#pragma once

#include <memory>
#include <string>
#include <vector>

#include "decor/type.hpp"

namespace decor {

// 0 pure, 1 accessor/propagator, 2 modifier/catcher.
using Decoration = int;

enum class TermKind {
  Gen,
  Id,
  Comp,
  ToUnit,     // <>_X
  FromEmpty,  // []_X
  Proj1,
  Proj2,
  Inj1,
  Inj2,
  SemiProd,      // f |x g (pure left) or g x| f (pure right)
  SemiCoprod,    // dual of SemiProd
  CaseSum,       // [g | k] on X = X+0
  CaseProd,      // <g | k> on X = X*1, mirror of CaseSum
  PropCase,      // [g | h] on A+B for propagators
  AccPair,       // <g, h> into A*B for accessors, mirror of PropCase
  Coerce,        // propagator weakly equal to a catcher
  CoerceAcc,     // accessor weakly equal to a modifier, mirror of Coerce
  LocTuple,      // <f_j>_j into the lookup cone
  ConstCotuple,  // [f_j]_j out of the throw cocone
};

enum class GenRole { User, Lookup, Update, Throw, Catch, CatchAll, UpdateAll };

struct TermNode;
using Term = std::shared_ptr<const TermNode>;

struct TermNode {
  TermKind kind;
  // Gen: name/role/index/dec; dom and cod are the signature.
  // Id/ToUnit: dom is the object. FromEmpty: cod is the object.
  // Proj*: dom is the product. Inj*: cod is the coproduct.
  // LocTuple: dom is the source. ConstCotuple: cod is the target.
  std::string name;
  GenRole role = GenRole::User;
  std::string index;
  Decoration dec = 0;
  TypeExpr dom, cod;
  bool pure_left = true;          // SemiProd / SemiCoprod
  std::vector<Term> kids;         // Comp: {after, before}; SemiProd: {pure, other}
  std::vector<std::string> keys;  // LocTuple / ConstCotuple component indices
};

namespace tm {
Term gen(const std::string& name, TypeExpr dom, TypeExpr cod, Decoration dec,
         GenRole role = GenRole::User, const std::string& index = {});
Term id(TypeExpr x);
Term comp(Term after, Term before);
// comp_chain({h, g, f}) = h . g . f
Term chain(const std::vector<Term>& ts);
Term to_unit(TypeExpr x);
Term from_empty(TypeExpr x);
Term proj1(TypeExpr product);
Term proj2(TypeExpr product);
Term inj1(TypeExpr coproduct);
Term inj2(TypeExpr coproduct);
Term semiprod(Term pure, Term other, bool pure_left);
Term semicoprod(Term pure, Term other, bool pure_left);
Term case_sum(Term on_value, Term on_empty);
Term case_prod(Term on_value, Term on_unit);
Term prop_case(Term left, Term right);
Term acc_pair(Term left, Term right);
Term coerce(Term inner);
Term coerce_acc(Term inner);
Term loc_tuple(TypeExpr dom, std::vector<std::string> keys, std::vector<Term> comps);
Term const_cotuple(TypeExpr cod, std::vector<std::string> keys, std::vector<Term> comps);
}  // namespace tm

int compare(const Term& a, const Term& b);
inline bool same(const Term& a, const Term& b) { return compare(a, b) == 0; }

// Unchecked signature; throws CompositionMismatch / IllFormed on bad shapes.
TypeExpr dom(const Term& t);
TypeExpr cod(const Term& t);

std::size_t size(const Term& t);
std::string to_string(const Term& t);

// Flatten composition spines to the right and drop identities.
Term normalize_assoc(const Term& t);

// Composition spine of a normalized term, outermost first.
std::vector<Term> spine(const Term& t);

enum class EqKind { Strong, Weak };

struct Equation {
  Term lhs, rhs;
  EqKind kind = EqKind::Strong;
};

int compare(const Equation& a, const Equation& b);
std::string to_string(const Equation& e);
Equation normalize(const Equation& e);
bool same_up_to_assoc(const Equation& a, const Equation& b);

}  // namespace decor
