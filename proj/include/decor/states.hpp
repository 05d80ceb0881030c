#pragma once

#include <string>
#include <vector>

#include "decor/kernel.hpp"

namespace decor {

// Generators l_i (accessor, 1 -> V_i) and u_i (modifier, V_i -> 1); axioms
// A1_i and A2_i_j (for j != i), A1s first, pairs in location order.
Theory build_states_theory(const std::vector<std::string>& locations, const std::string& name = "S");

struct SemiPure {
  Term term;
  Equation p1;  // weak law on the pure side
  Equation p2;  // strong law on the effectful side
};

// f must be pure. pure_left builds f |x g, otherwise g x| f. The two laws are
// added to th as axioms (once) and also follow from the semiprod rules.
SemiPure semi_pure_product(Theory& th, const Term& f, const Term& g, bool pure_left = true);

using LemmaArgs = std::vector<Meta>;

// Lemmas: final-uniqueness(f), annihilation(i), commutation-6(i, j),
// interaction-3(i), pr1..pr8(i, j, k).
Derivation derive_states_lemma(const Theory& th, const std::string& id, const LemmaArgs& args);
const std::vector<std::string>& states_lemma_ids();

struct SevenGoal {
  int number;
  std::string name;
  Equation direct;
  std::vector<Equation> observed;  // l_k . lhs ~ l_k . rhs, only for laws landing in 1
};

// All seven laws of the lookup/update signature for locations i != j. When k
// is non-empty only that observation is generated.
std::vector<SevenGoal> seven_equation_goals(const Theory& th, const std::string& i,
                                            const std::string& j, const std::string& k = {});

namespace st {
// The terms appearing in the commutation and interaction laws.
Term swap_left(const Theory& th, const std::string& i, const std::string& j);   // u_i x| id_{V_j}
Term swap_right(const Theory& th, const std::string& i, const std::string& j);  // id_{V_i} |x u_j
Equation commutation6(const Theory& th, const std::string& i, const std::string& j);
Equation interaction3(const Theory& th, const std::string& i);
Equation annihilation(const Theory& th, const std::string& i);
}  // namespace st

}  // namespace decor
