#pragma once

#include <memory>
#include <string>

namespace decor {

enum class TypeKind { Named, Unit, Empty, Prod, Coprod, Value, Param, State, Exc };

struct TypeNode;
using TypeExpr = std::shared_ptr<const TypeNode>;

// State and Exc are the distinguished objects S and E of the explicit
// logics; they never appear in decorated theories.
struct TypeNode {
  TypeKind kind;
  std::string name;  // Named: identifier; Value/Param: index
  TypeExpr left, right;
};

namespace ty {
TypeExpr named(const std::string& n);
TypeExpr unit();
TypeExpr empty();
TypeExpr prod(TypeExpr a, TypeExpr b);
TypeExpr coprod(TypeExpr a, TypeExpr b);
TypeExpr value(const std::string& loc);
TypeExpr param(const std::string& ctor);
TypeExpr state();
TypeExpr exc();
}  // namespace ty

int compare(const TypeExpr& a, const TypeExpr& b);
inline bool same(const TypeExpr& a, const TypeExpr& b) { return compare(a, b) == 0; }

std::string to_string(const TypeExpr& t);

// Swaps 1/0, V/P, products/coproducts. Named types are fixed.
TypeExpr dual(const TypeExpr& t);

}  // namespace decor
