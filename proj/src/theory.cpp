#include "decor/theory.hpp"

#include <algorithm>

#include "decor/error.hpp"

namespace decor {

const char* flavor_name(Flavor f) {
  switch (f) {
    case Flavor::Plain: return "plain";
    case Flavor::States: return "states";
    case Flavor::Exceptions: return "exceptions";
  }
  return "?";
}

std::optional<Term> Theory::find_generator(const std::string& n) const {
  for (const auto& g : generators)
    if (g->name == n) return g;
  return std::nullopt;
}

std::optional<std::size_t> Theory::find_axiom(const std::string& n) const {
  for (std::size_t k = 0; k < axioms.size(); ++k)
    if (axioms[k].name == n) return k;
  return std::nullopt;
}

bool Theory::has_location(const std::string& i) const {
  return std::find(locations.begin(), locations.end(), i) != locations.end();
}

bool Theory::has_constructor(const std::string& i) const {
  return std::find(constructors.begin(), constructors.end(), i) != constructors.end();
}

namespace {
Term builtin(const Theory& th, GenRole role, const std::string& i) {
  for (const auto& g : th.generators)
    if (g->role == role && g->index == i) return g;
  ErrorCode c = (role == GenRole::Lookup || role == GenRole::Update) ? ErrorCode::BadParams
                                                                     : ErrorCode::UnknownConstructor;
  throw DecorError(c, "no builtin generator for index '" + i + "' in theory " + th.name);
}
}  // namespace

Term Theory::lookup(const std::string& i) const { return builtin(*this, GenRole::Lookup, i); }
Term Theory::update(const std::string& i) const { return builtin(*this, GenRole::Update, i); }
Term Theory::thrower(const std::string& i) const { return builtin(*this, GenRole::Throw, i); }
Term Theory::catcher(const std::string& i) const { return builtin(*this, GenRole::Catch, i); }

void Theory::add_generator(Term g) {
  if (find_generator(g->name))
    throw DecorError(ErrorCode::IllFormed, "duplicate generator " + g->name);
  check_type(*this, g->dom);
  check_type(*this, g->cod);
  if (g->dec < 0 || g->dec > 2) throw DecorError(ErrorCode::IllFormed, "bad decoration");
  generators.push_back(std::move(g));
}

void Theory::add_axiom(const std::string& n, const Equation& e) {
  typecheck(*this, e);
  axioms.push_back({n, e});
}

bool operator==(const Theory& a, const Theory& b) {
  if (a.flavor != b.flavor || a.locations != b.locations || a.constructors != b.constructors)
    return false;
  if (a.generators.size() != b.generators.size() || a.axioms.size() != b.axioms.size())
    return false;
  for (std::size_t k = 0; k < a.generators.size(); ++k)
    if (!same(a.generators[k], b.generators[k])) return false;
  for (std::size_t k = 0; k < a.axioms.size(); ++k)
    if (a.axioms[k].name != b.axioms[k].name || compare(a.axioms[k].eq, b.axioms[k].eq) != 0)
      return false;
  return true;
}

void check_type(const Theory& th, const TypeExpr& t) {
  switch (t->kind) {
    case TypeKind::Value:
      if (!th.has_location(t->name))
        throw DecorError(th.flavor == Flavor::Exceptions ? ErrorCode::FlavorViolation
                                                         : ErrorCode::BadParams,
                         "V_" + t->name + " is not a location of " + th.name);
      return;
    case TypeKind::Param:
      if (!th.has_constructor(t->name))
        throw DecorError(th.flavor == Flavor::States ? ErrorCode::FlavorViolation
                                                     : ErrorCode::UnknownConstructor,
                         "P_" + t->name + " is not a constructor of " + th.name);
      return;
    case TypeKind::State:
    case TypeKind::Exc:
      throw DecorError(ErrorCode::FlavorViolation, "explicit objects S/E are not decorated types");
    case TypeKind::Prod:
    case TypeKind::Coprod:
      check_type(th, t->left);
      check_type(th, t->right);
      return;
    default: return;
  }
}

namespace {
bool states_only(TermKind k) {
  return k == TermKind::SemiProd || k == TermKind::LocTuple || k == TermKind::CaseProd ||
         k == TermKind::AccPair || k == TermKind::CoerceAcc;
}
bool exceptions_only(TermKind k) {
  return k == TermKind::SemiCoprod || k == TermKind::ConstCotuple || k == TermKind::CaseSum ||
         k == TermKind::PropCase || k == TermKind::Coerce;
}

void check_term(const Theory& th, const Term& t) {
  if (th.flavor == Flavor::States && exceptions_only(t->kind))
    throw DecorError(ErrorCode::FlavorViolation, to_string(t) + " is exceptions-only");
  if (th.flavor == Flavor::Exceptions && states_only(t->kind))
    throw DecorError(ErrorCode::FlavorViolation, to_string(t) + " is states-only");
  if (t->dom) check_type(th, t->dom);
  if (t->cod) check_type(th, t->cod);
  switch (t->kind) {
    case TermKind::Gen: {
      auto g = th.find_generator(t->name);
      if (!g) throw DecorError(ErrorCode::UnknownGenerator, t->name);
      if (!same(*g, t))
        throw DecorError(ErrorCode::UnknownGenerator, t->name + " used with a different signature");
      break;
    }
    case TermKind::SemiProd:
    case TermKind::SemiCoprod:
      if (decoration(t->kids[0]) != 0)
        throw DecorError(ErrorCode::PureSideNotPure, to_string(t->kids[0]));
      break;
    case TermKind::CaseSum:
    case TermKind::CaseProd:
      if (decoration(t->kids[0]) > 1)
        throw DecorError(ErrorCode::SideConditionViolated,
                         "first branch must be level <= 1 in " + to_string(t));
      break;
    case TermKind::PropCase:
    case TermKind::AccPair:
    case TermKind::LocTuple:
    case TermKind::ConstCotuple:
      for (const auto& k : t->kids)
        if (decoration(k) > 1)
          throw DecorError(ErrorCode::SideConditionViolated,
                           "component must be level <= 1 in " + to_string(t));
      break;
    default: break;
  }
  if (t->kind == TermKind::LocTuple || t->kind == TermKind::ConstCotuple) {
    const auto& idx = t->kind == TermKind::LocTuple ? th.locations : th.constructors;
    if (th.flavor != Flavor::Plain && t->keys != idx)
      throw DecorError(ErrorCode::IllFormed,
                       "(co)tuple must list every index in theory order: " + to_string(t));
  }
  for (const auto& k : t->kids) check_term(th, k);
}
}  // namespace

std::pair<TypeExpr, TypeExpr> typecheck(const Theory& th, const Term& t) {
  TypeExpr d = dom(t), c = cod(t);
  check_term(th, t);
  return {d, c};
}

void typecheck(const Theory& th, const Equation& e) {
  auto [ld, lc] = typecheck(th, e.lhs);
  auto [rd, rc] = typecheck(th, e.rhs);
  if (!same(ld, rd)) throw DecorError(ErrorCode::CompositionMismatch,
                                      "equation domains differ: " + to_string(e));
  if (!same(lc, rc)) throw DecorError(ErrorCode::CompositionMismatch,
                                      "equation codomains differ: " + to_string(e));
}

Decoration decoration(const Term& t) {
  switch (t->kind) {
    case TermKind::Gen: return t->dec;
    case TermKind::Id:
    case TermKind::ToUnit:
    case TermKind::FromEmpty:
    case TermKind::Proj1:
    case TermKind::Proj2:
    case TermKind::Inj1:
    case TermKind::Inj2: return 0;
    case TermKind::Comp:
    case TermKind::PropCase:
    case TermKind::AccPair:
      return std::max(decoration(t->kids[0]), decoration(t->kids[1]));
    case TermKind::CaseSum:
    case TermKind::CaseProd: return decoration(t->kids[1]) <= 1 ? 1 : 2;
    case TermKind::Coerce:
    case TermKind::CoerceAcc: return 1;
    case TermKind::SemiProd:
    case TermKind::SemiCoprod:
    case TermKind::LocTuple:
    case TermKind::ConstCotuple: return 2;
  }
  return 2;
}

Decoration infer_decoration(const Theory& th, const Term& t) {
  typecheck(th, t);
  if (th.flavor == Flavor::Plain) return 0;
  return decoration(t);
}

}  // namespace decor
