#include "decor/type.hpp"

#include <stdexcept>

namespace decor {

namespace ty {
namespace {
TypeExpr mk(TypeKind k, std::string n = {}, TypeExpr l = nullptr, TypeExpr r = nullptr) {
  return std::make_shared<const TypeNode>(TypeNode{k, std::move(n), std::move(l), std::move(r)});
}
}  // namespace

TypeExpr named(const std::string& n) { return mk(TypeKind::Named, n); }
TypeExpr unit() {
  static const TypeExpr u = mk(TypeKind::Unit);
  return u;
}
TypeExpr empty() {
  static const TypeExpr e = mk(TypeKind::Empty);
  return e;
}
TypeExpr prod(TypeExpr a, TypeExpr b) { return mk(TypeKind::Prod, {}, std::move(a), std::move(b)); }
TypeExpr coprod(TypeExpr a, TypeExpr b) { return mk(TypeKind::Coprod, {}, std::move(a), std::move(b)); }
TypeExpr value(const std::string& loc) { return mk(TypeKind::Value, loc); }
TypeExpr param(const std::string& ctor) { return mk(TypeKind::Param, ctor); }
TypeExpr state() {
  static const TypeExpr s = mk(TypeKind::State);
  return s;
}
TypeExpr exc() {
  static const TypeExpr e = mk(TypeKind::Exc);
  return e;
}
}  // namespace ty

int compare(const TypeExpr& a, const TypeExpr& b) {
  if (a == b) return 0;
  if (!a || !b) return a ? 1 : -1;
  if (a->kind != b->kind) return static_cast<int>(a->kind) < static_cast<int>(b->kind) ? -1 : 1;
  if (int c = a->name.compare(b->name)) return c < 0 ? -1 : 1;
  if (int c = compare(a->left, b->left)) return c;
  return compare(a->right, b->right);
}

std::string to_string(const TypeExpr& t) {
  if (!t) return "?";
  switch (t->kind) {
    case TypeKind::Named: return t->name;
    case TypeKind::Unit: return "1";
    case TypeKind::Empty: return "0";
    case TypeKind::Prod: return "(" + to_string(t->left) + " * " + to_string(t->right) + ")";
    case TypeKind::Coprod: return "(" + to_string(t->left) + " + " + to_string(t->right) + ")";
    case TypeKind::Value: return "V_" + t->name;
    case TypeKind::Param: return "P_" + t->name;
    case TypeKind::State: return "S";
    case TypeKind::Exc: return "E";
  }
  return "?";
}

TypeExpr dual(const TypeExpr& t) {
  switch (t->kind) {
    case TypeKind::Named: return t;
    case TypeKind::Unit: return ty::empty();
    case TypeKind::Empty: return ty::unit();
    case TypeKind::Prod: return ty::coprod(dual(t->left), dual(t->right));
    case TypeKind::Coprod: return ty::prod(dual(t->left), dual(t->right));
    case TypeKind::Value: return ty::param(t->name);
    case TypeKind::Param: return ty::value(t->name);
    case TypeKind::State: return ty::exc();
    case TypeKind::Exc: return ty::state();
  }
  throw std::logic_error("dual: bad type");
}

}  // namespace decor
