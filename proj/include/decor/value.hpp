#pragma once

#include <string>
#include <vector>

#include "decor/type.hpp"

namespace decor {

// Carrier element. Atoms are small integers tagged by the kind of carrier
// they come from: 'v' location value, 'p' exception parameter, 'n' named
// base type (with the type name in `sym`), 's' a whole state (components in
// `kids`), 'e' an exception (constructor in `sym`, parameter in kids[0]). Sym holds the result of a free
// (uninterpreted) generator, e.g. "g(a0)".
struct Value {
  enum class Kind { Unit, Atom, Pair, Inl, Inr, Sym };
  Kind kind = Kind::Unit;
  int atom = 0;
  char tag = 'v';
  std::string sym;
  std::vector<Value> kids;

  static Value unit() { return {}; }
  static Value atom_of(int k, char tag = 'v', const std::string& type = {});
  static Value pair(Value a, Value b);
  static Value inl(Value a);
  static Value inr(Value b);
  static Value symbol(std::string s);
};

bool operator==(const Value& a, const Value& b);
inline bool operator!=(const Value& a, const Value& b) { return !(a == b); }
bool operator<(const Value& a, const Value& b);

std::string to_string(const Value& v);
std::string to_string(const std::vector<Value>& state);

}  // namespace decor
