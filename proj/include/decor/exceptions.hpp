#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "decor/states.hpp"

namespace decor {

// Generators t_i (propagator, P_i -> 0) and c_i (catcher, 0 -> P_i); axioms
// B1_i and B2_i_j, in the same order as the dual states theory.
Theory build_exceptions_theory(const std::vector<std::string>& constructors, const std::string& name = "E");

// []_Y . t_i
Term raise_term(const Theory& th, const std::string& i, const TypeExpr& Y);

struct HandlerSpec {
  Term body;
  std::vector<std::pair<std::string, Term>> clauses;
  std::optional<Term> catch_all;  // 1 -> Y
};

struct Handled {
  Term chain;   // 0 -> Y
  Term handle;  // [id_Y | chain] . body
  Term result;  // down(handle)
};

// Adds c_all and its axioms to th when the spec has a catch-all clause.
Handled handle_term(Theory& th, const HandlerSpec& spec);
// Same, for specs without a catch-all; th is not modified.
Handled handle_term(const Theory& th, const HandlerSpec& spec);

void add_catch_all(Theory& th);

SemiPure semi_pure_coproduct(Theory& th, const Term& f, const Term& g, bool pure_left = true);

// Lemmas: key-annihilation(i), initial-uniqueness(f), commutation-6(i, j),
// interaction-3(i), catch-throw(i[, Y]), handler-commute(i, j, f, g, h),
// handler-idempotent(i, f, g, h), bridge(i, j, g, h).
Derivation derive_exceptions_lemma(const Theory& th, const std::string& id, const LemmaArgs& args);
const std::vector<std::string>& exceptions_lemma_ids();

// Dispatch on the theory flavor.
Derivation derive_lemma(const Theory& th, const std::string& id, const LemmaArgs& args);

namespace ex {
Term swap_left(const Theory& th, const std::string& i, const std::string& j);   // c_i x| id_{P_j}, 0+P_j -> P_i+P_j
Term swap_right(const Theory& th, const std::string& i, const std::string& j);  // id_{P_i} |x c_j, P_i+0 -> P_i+P_j
Equation commutation6(const Theory& th, const std::string& i, const std::string& j);
Equation interaction3(const Theory& th, const std::string& i);
Equation key_annihilation(const Theory& th, const std::string& i);
}  // namespace ex

}  // namespace decor
