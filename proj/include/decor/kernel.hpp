#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "decor/theory.hpp"

namespace decor {

// Closed rule catalog. Names follow the figure labels by meaning; see
// rule_name for the spelling used in scripts and reports.
enum class RuleId {
  // monadic equational logic
  Comp, Id, Assoc, IdSrc, IdTgt, EqRefl, EqSym, EqTrans, EqSubs, EqRepl,
  Gen,  // generator declaration leaf
  // decorated, shared by both flavors
  ZeroToOne, OneToTwo, ZeroComp, OneComp, ZeroId, WRefl, WSym, WTrans, SToW,
  // states
  WSubs, WReplPure, WToS, Final, UnitArrow, WFinal, LocTuple, LocTupleUnique,
  SemiprodP1, SemiprodP2, BinprodProj, AccPairFst, AccPairSnd,
  CaseProdExists, CaseProdWeak, CaseProdUnit, CaseProdAcc, CaseProdUnique,
  CoerceAccExists, CoerceAccWeak, CoerceAccUnique,
  // exceptions
  WSubsPure, WRepl, WToSProp, Initial, EmptyArrow, WInitial, ConstCotuple, ConstCotupleUnique,
  SemicoprodP1, SemicoprodP2, BincoprodInj, PropcaseInl, PropcaseInr,
  SumCaseExists, SumCaseWeak, SumCaseEmpty, SumCaseProp, SumCaseUnique,
  CoerceExists, CoerceWeak, CoerceUnique,
  // apparent (plain) counterparts of the weak terminal/initial rules
  SFinal, SInitial,
};

const std::vector<RuleId>& all_rules();
const char* rule_name(RuleId r);
std::optional<RuleId> rule_from_name(const std::string& n);
bool rule_allowed(RuleId r, Flavor f);

struct Judgment {
  enum class Kind { WellFormed, Holds };
  Kind kind = Kind::Holds;
  Term term;  // WellFormed
  Decoration level = 0;
  Equation eq;  // Holds

  static Judgment wf(Term t, Decoration l) { return {Kind::WellFormed, std::move(t), l, {}}; }
  static Judgment holds(Equation e) { return {Kind::Holds, nullptr, 0, std::move(e)}; }
};

bool same_up_to_assoc(const Judgment& a, const Judgment& b);
std::string to_string(const Judgment& j);

using Meta = std::variant<Term, TypeExpr, std::string>;
using Inst = std::map<std::string, Meta>;

struct RuleRef {
  enum class Kind { Rule, Axiom, Hypothesis };
  Kind kind = Kind::Rule;
  RuleId rule = RuleId::EqRefl;
  std::size_t axiom = 0;
  std::string label;  // hypothesis label, or axiom name for display

  static RuleRef of(RuleId r) { return {Kind::Rule, r, 0, {}}; }
  static RuleRef ax(std::size_t k, std::string name = {}) { return {Kind::Axiom, RuleId::EqRefl, k, std::move(name)}; }
  static RuleRef hyp(std::string l) { return {Kind::Hypothesis, RuleId::EqRefl, 0, std::move(l)}; }
};

std::string to_string(const RuleRef& r);

struct Derivation {
  Judgment conclusion;
  RuleRef rule;
  std::vector<Derivation> premises;
  Inst inst;
  std::string label;  // optional, e.g. "Pr4"
};

bool structurally_equal(const Derivation& a, const Derivation& b);
std::size_t node_count(const Derivation& d);

// Returns the unique conclusion or throws SideConditionViolated,
// PremiseShapeMismatch, FlavorViolation (or typing errors).
Judgment apply_rule(const Theory& th, RuleId r, const std::vector<Judgment>& premises,
                    const Inst& inst);

struct CheckReport {
  bool valid = true;
  std::vector<std::size_t> path;  // premise indices from the root to the first failing node
  std::string rule;
  std::string detail;
  std::size_t nodes = 0;
};

struct HypothesisTable {
  std::map<std::string, Judgment> entries;
};

CheckReport check_derivation(const Theory& th, const Derivation& d,
                             const HypothesisTable& hyps = {});

// Builder helpers used by the lemma catalogs. Each computes its conclusion
// with apply_rule, so a builder bug surfaces as an exception, not a bad tree.
namespace dv {
Derivation rule(const Theory& th, RuleId r, std::vector<Derivation> premises, Inst inst = {});
Derivation axiom(const Theory& th, const std::string& name);
Derivation labelled(Derivation d, std::string label);
}  // namespace dv

Derivation derive_final_uniqueness(const Theory& th, const Term& f);

struct SaturationResult {
  std::optional<Derivation> proof;  // nullopt means Unknown
  std::size_t facts = 0;
  int rounds = 0;
};

SaturationResult saturate_prove(const Theory& th, const Equation& goal, int budget);

}  // namespace decor
