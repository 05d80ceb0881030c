#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "decor/theory.hpp"
#include "decor/value.hpp"

namespace decor {

using State = std::vector<Value>;

// Element of X + Exc. `ctor` names the constructor of an exception.
struct Outcome {
  bool exc = false;
  std::string ctor;
  Value v;
};

bool operator==(const Outcome& a, const Outcome& b);
std::string to_string(const Outcome& o);

using StateInterp = std::function<std::pair<Value, State>(const Value&, const State&)>;
using ExcInterp = std::function<Outcome(const Outcome&)>;

// Finite carriers for one theory. `indices` are the locations (States) or
// constructors (Exceptions) in theory order; sizes[k] is |Val| or |Par|.
// Named base types need an entry in `named`. User generators without an
// interpretation evaluate freely: their results are symbolic values.
struct FiniteModel {
  Flavor flavor = Flavor::States;
  std::vector<std::string> indices;
  std::vector<int> sizes;
  std::map<std::string, int> named;
  std::map<std::string, StateInterp> state_interp;
  std::map<std::string, ExcInterp> exc_interp;
  std::size_t bound = 10'000'000;

  int size_of(const std::string& index) const;
  std::size_t position(const std::string& index) const;
};

// Throws BadParams when sizes do not match the index set, FlavorViolation on
// Plain theories.
FiniteModel make_model(const Theory& th, const std::vector<int>& sizes,
                       std::map<std::string, int> named = {});

// Carrier enumeration in canonical order: products left-major, inl before inr.
std::vector<Value> elements(const FiniteModel& m, const TypeExpr& t);
// All states, last location varying fastest.
std::vector<State> all_states(const FiniteModel& m);
// All exceptions ordered by (constructor index, parameter).
std::vector<Outcome> all_exceptions(const FiniteModel& m);

std::pair<Value, State> eval_states(const FiniteModel& m, const Term& t, const Value& in, const State& s);
Outcome eval_exceptions(const FiniteModel& m, const Term& t, const Outcome& in);

struct Point {
  Outcome in;   // states: in.v is the argument
  State state;  // states only
};

std::string to_string(const FiniteModel& m, const Point& p);

struct Witness {
  Point at;
  Point lhs, rhs;  // results; for states `state` is the final state
};

struct CheckResult {
  bool holds = true;
  std::size_t points = 0;
  std::optional<Witness> witness;
};

// Exhaustive check. Both variants return the same witness: the first failing
// point in canonical order. Throws SearchSpaceTooLarge past m.bound.
CheckResult check_equation(const FiniteModel& m, const Equation& e);
CheckResult check_equation_serial(const FiniteModel& m, const Equation& e);
std::size_t point_count(const FiniteModel& m, const Equation& e);

bool observational_equiv(const FiniteModel& m, const State& s, const State& t);

}  // namespace decor
