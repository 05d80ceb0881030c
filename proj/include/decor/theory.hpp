#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "decor/term.hpp"

namespace decor {

enum class Flavor { Plain, States, Exceptions };

const char* flavor_name(Flavor f);

struct NamedEquation {
  std::string name;
  Equation eq;
};

// A generator is stored as its Gen term, which carries the signature.
struct Theory {
  std::string name;
  Flavor flavor = Flavor::Plain;
  // States: locations. Exceptions: constructors. Plain theories obtained by
  // erasure keep the index set of their source so V_i / P_i stay meaningful.
  std::vector<std::string> locations;
  std::vector<std::string> constructors;
  std::vector<Term> generators;
  std::vector<NamedEquation> axioms;

  std::optional<Term> find_generator(const std::string& name) const;
  std::optional<std::size_t> find_axiom(const std::string& name) const;
  bool has_location(const std::string& i) const;
  bool has_constructor(const std::string& i) const;

  // Builtin generator accessors; throw UnknownConstructor / BadParams.
  Term lookup(const std::string& i) const;
  Term update(const std::string& i) const;
  Term thrower(const std::string& i) const;
  Term catcher(const std::string& i) const;

  void add_generator(Term g);
  void add_axiom(const std::string& name, const Equation& e);
};

bool operator==(const Theory& a, const Theory& b);

// Checks the type is admissible in the theory (V_i / P_i indices, no S/E).
void check_type(const Theory& th, const TypeExpr& t);

std::pair<TypeExpr, TypeExpr> typecheck(const Theory& th, const Term& t);
void typecheck(const Theory& th, const Equation& e);

Decoration infer_decoration(const Theory& th, const Term& t);
// Same rules without a theory; the term is assumed well formed.
Decoration decoration(const Term& t);

}  // namespace decor
