#pragma once

#include <map>
#include <string>

#include "decor/kernel.hpp"

namespace decor {

// Decoration erasure onto the apparent (plain) logic.
Theory erase(const Theory& th);
Term erase(const Term& t);
Equation erase(const Equation& e);
Judgment erase(const Judgment& j);
// Total on well-formed input; the result is meant to be re-checked against
// erase(th) with check_derivation.
Derivation erase(const Derivation& d);

// Index bijection between locations and constructors. An empty map is the
// identity renaming.
struct DualityMap {
  std::map<std::string, std::string> loc_to_ctor;

  std::string to_ctor(const std::string& loc) const;
  std::string to_loc(const std::string& ctor) const;
};

// `source` is the flavor of the input; Plain input is rejected.
TypeExpr dualize_type(const TypeExpr& t, Flavor source, const DualityMap& m = {});
Term dualize_term(const Term& t, Flavor source, const DualityMap& m = {});
Equation dualize_equation(const Equation& e, Flavor source, const DualityMap& m = {});
Theory dualize_theory(const Theory& th, const DualityMap& m = {});
Derivation dualize_derivation(const Theory& th, const Derivation& d, const DualityMap& m = {});

RuleId dual_rule(RuleId r);
std::string dual_axiom_name(const std::string& n, Flavor source, const DualityMap& m = {});

}  // namespace decor
