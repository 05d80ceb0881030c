#include "decor/value.hpp"

#include <tuple>

namespace decor {

Value Value::atom_of(int k, char tag, const std::string& type) {
  Value v;
  v.kind = Kind::Atom;
  v.atom = k;
  v.tag = tag;
  v.sym = type;
  return v;
}

Value Value::pair(Value a, Value b) {
  Value v;
  v.kind = Kind::Pair;
  v.kids = {std::move(a), std::move(b)};
  return v;
}

Value Value::inl(Value a) {
  Value v;
  v.kind = Kind::Inl;
  v.kids = {std::move(a)};
  return v;
}

Value Value::inr(Value b) {
  Value v;
  v.kind = Kind::Inr;
  v.kids = {std::move(b)};
  return v;
}

Value Value::symbol(std::string s) {
  Value v;
  v.kind = Kind::Sym;
  v.sym = std::move(s);
  return v;
}

bool operator==(const Value& a, const Value& b) {
  return a.kind == b.kind && a.atom == b.atom && a.tag == b.tag && a.sym == b.sym && a.kids == b.kids;
}

bool operator<(const Value& a, const Value& b) {
  return std::tie(a.kind, a.atom, a.tag, a.sym, a.kids) < std::tie(b.kind, b.atom, b.tag, b.sym, b.kids);
}

std::string to_string(const std::vector<Value>& state);

std::string to_string(const Value& v) {
  switch (v.kind) {
    case Value::Kind::Unit: return "()";
    case Value::Kind::Atom:
      if (v.tag == 'p') return "a" + std::to_string(v.atom);
      if (v.tag == 's') return "S" + to_string(v.kids);
      if (v.tag == 'e') return v.sym + "!(" + to_string(v.kids[0]) + ")";
      if (v.tag == 'n') return v.sym + std::to_string(v.atom);
      return std::to_string(v.atom);
    case Value::Kind::Pair: return "(" + to_string(v.kids[0]) + ", " + to_string(v.kids[1]) + ")";
    case Value::Kind::Inl: return "inl(" + to_string(v.kids[0]) + ")";
    case Value::Kind::Inr: return "inr(" + to_string(v.kids[0]) + ")";
    case Value::Kind::Sym: return v.sym;
  }
  return "?";
}

std::string to_string(const std::vector<Value>& state) {
  std::string s = "(";
  for (std::size_t k = 0; k < state.size(); ++k) {
    if (k) s += ",";
    s += to_string(state[k]);
  }
  return s + ")";
}

}  // namespace decor
