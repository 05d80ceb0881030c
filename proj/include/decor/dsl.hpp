#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "decor/exceptions.hpp"
#include "decor/model.hpp"
#include "decor/serialize.hpp"

namespace decor {

// Script syntax. Statements are free-form (newlines are whitespace); `#`
// starts a comment.
//
//   theory S = states(x:3, y:2)            theory E = exceptions(i:2, j:2)
//   theory D = dual(S)                     theory P = plain(locations: x, y) { ... }
//   theory S2 = states(x:2) { gen f : V_x -> V_x pure   axiom ax : f ~~ id[V_x]   catchall }
//   gen f : A -> B accessor [in S]         axiom name [in S] : EQ
//   term t [in S] = TERM                   goal g [in S] : TERM ~~ TERM
//   model S (x: 4, Y: 2)
//   proof p [in S] [: EQ] { s1: axiom(A1_x)  s2: w-subs(t = l_y) from s1 }
//   lemma annihilation(x) [in S]           verify states-seven [in S]
//   check proof pr1 [in S]                 check proof p
//   check equation g                       check equation [in S] : EQ
//   prove g [budget 4]                     prove [in S] : EQ [budget 4]
//   eval [in S] : TERM on VALUE [at (0, 1)]
//
// Terms use the printed syntax (see to_string(Term)) plus raise(i[, Y]),
// handle(body, i => g, _ => k) and try body catch i => g | j => h.
// Without `in`, a statement refers to the most recently declared theory.

struct Pos {
  int line = 1, col = 1;
};

struct SyntaxErrorInfo {
  Pos pos;
  std::string expected;
};

enum class TheorySource { States, Exceptions, Dual, Plain };

struct GenSpec {
  std::string name;
  TypeExpr dom, cod;
  Decoration level = 0;
};

struct TheoryDecl {
  std::string name;
  TheorySource source = TheorySource::States;
  std::vector<std::pair<std::string, int>> carriers;  // states/exceptions
  std::string of;                                     // dual
  bool plain_locations = true;                        // plain: which index set
  std::vector<std::string> indices;                   // plain
  // block contents, in order
  std::vector<GenSpec> gens;
  std::vector<std::pair<std::string, Equation>> axioms;
  bool catch_all = false;
};

struct GenDecl {
  std::string theory;
  GenSpec gen;
};

struct AxiomDecl {
  std::string theory, name;
  Equation eq;
};

struct TermDecl {
  std::string theory, name;
  Term term;
};

struct GoalDecl {
  std::string theory, name;
  Equation eq;
};

struct ModelDecl {
  std::string theory;
  std::vector<std::pair<std::string, int>> sizes;
};

struct ProofStep {
  std::string label;
  enum class Kind { Rule, Axiom, Hyp } kind = Kind::Rule;
  RuleId rule = RuleId::EqRefl;
  std::string name;  // axiom or hypothesis
  Inst inst;
  std::vector<std::string> from;
};

struct ProofDecl {
  std::string theory, name;
  std::optional<Equation> goal;
  std::vector<ProofStep> steps;
};

struct Command {
  enum class Kind { Lemma, Verify, CheckProof, CheckEquation, Prove, Eval };
  Kind kind = Kind::Lemma;
  std::string theory;
  std::string name;   // lemma / suite / proof / goal name (empty when inline)
  LemmaArgs args;     // lemma and built-in proof arguments
  bool has_args = false;
  std::optional<Equation> eq;  // inline equation
  std::optional<int> budget;
  Term term;                   // eval
  Value input;                 // eval: argument (states) or value (exceptions)
  std::optional<Outcome> exc;  // eval: exceptional input
  std::optional<State> state;  // eval: states only
};

using Decl = std::variant<TheoryDecl, GenDecl, AxiomDecl, TermDecl, GoalDecl, ModelDecl, ProofDecl, Command>;

struct Environment {
  std::map<std::string, Theory> theories;
  std::map<std::string, std::vector<int>> carriers;          // per theory, index order
  std::map<std::string, std::map<std::string, int>> named;   // per theory
  std::map<std::string, Term> terms;
  std::map<std::string, GoalDecl> goals;
  std::map<std::string, ProofDecl> proofs;
};

struct Script {
  std::vector<Decl> decls;
  std::vector<Pos> positions;  // one per decl
  Environment env;             // state after all declarations
};

// Throws DecorError(SyntaxError | NameError | typing errors); SyntaxError
// messages carry "line:col: expected ...".
Script parse_script(const std::string& text);
std::string print_script(const Script& s);
bool operator==(const Script& a, const Script& b);

std::string print_decl(const Decl& d);
std::string print_theory(const Theory& th, const std::vector<int>& carriers = {});

// Value literal syntax of the evaluator output, e.g. (2, a0), inl(()), x!(a1).
Value parse_value(const std::string& text);

// The model of a declared theory with overrides applied.
FiniteModel model_of(const Environment& env, const std::string& theory,
                     const std::map<std::string, int>& overrides = {});

// Proof blocks are rebuilt step by step through apply_rule.
Derivation build_proof(const Environment& env, const ProofDecl& p);

// ---- execution ----

struct Config {
  std::map<std::string, int> model;  // carrier overrides for every theory
  int budget = 4;                    // default saturation budget
  bool fail_fast = false;
  bool timing = false;               // text reports only
  enum class Filter { All, Verify, Eval } filter = Filter::All;
};

enum class Status { Ok, Fail, Error };
const char* status_name(Status s);

struct CommandResult {
  std::size_t index = 0;
  int line = 0;
  std::string command;  // canonical text
  std::string kind;
  Status status = Status::Ok;
  std::string summary;  // one line
  std::string text;     // tree, witness or table, may be empty
  nlohmann::ordered_json data;
  std::size_t nodes = 0, points = 0;
  double seconds = 0;
};

struct Report {
  std::vector<CommandResult> commands;
  bool aborted = false;  // fail-fast stopped the run
  std::size_t nodes() const;
  std::size_t points() const;
};

Report execute(const Script& script, const Config& config = {});

enum class Format { Text, Json };
// JSON uses schema "decor-report/1" and omits timings, so equal inputs give
// byte-identical output.
std::string emit_report(const Report& r, Format f, bool timing = false);

// 0 all commands Ok, 1 otherwise. Parse and type errors (2) happen before a
// report exists.
int exit_code(const Report& r);

}  // namespace decor
