// Script parser and printer. Names are resolved while parsing, so the
// environment (theories, aliases, goals, proofs) is built in the same pass.
#include <algorithm>
#include <cctype>
#include <set>

#include "decor/dsl.hpp"
#include "decor/error.hpp"
#include "decor/serialize.hpp"
#include "decor/translate.hpp"

namespace decor {

namespace {

const std::set<std::string> kReservedTerms{"id",    "p1",   "p2",    "in1",   "in2",  "lsemi", "rsemi",
                                           "lsum",  "rsum", "case",  "cprod", "pcase", "pair", "down",
                                           "up",    "tuple", "cotuple", "raise", "handle", "try", "catch"};

const std::set<std::string> kKeywords{"theory", "gen",   "axiom", "term",  "goal", "model", "proof",
                                      "lemma",  "verify", "check", "prove", "eval"};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Parser {
 public:
  explicit Parser(const std::string& text) : s_(text) {}

  Script run() {
    Script sc;
    ws();
    while (i_ < s_.size()) {
      Pos p = pos();
      sc.decls.push_back(statement());
      sc.positions.push_back(p);
      ws();
    }
    sc.env = std::move(env_);
    return sc;
  }

  // ---- lexical ----

  Pos pos() const { return {line_, col_}; }

  [[noreturn]] void fail(const std::string& expected) const {
    std::string found = i_ < s_.size() ? "'" + std::string(1, s_[i_]) + "'" : "end of input";
    throw DecorError(ErrorCode::SyntaxError, std::to_string(line_) + ":" + std::to_string(col_) +
                                                 ": expected " + expected + ", found " + found);
  }

  [[noreturn]] void name_error(const std::string& what) const {
    throw DecorError(ErrorCode::NameError, std::to_string(line_) + ":" + std::to_string(col_) + ": " + what);
  }

  void advance() {
    if (s_[i_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++i_;
  }

  void ws() {
    while (i_ < s_.size()) {
      if (std::isspace(static_cast<unsigned char>(s_[i_]))) {
        advance();
      } else if (s_[i_] == '#') {
        while (i_ < s_.size() && s_[i_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  bool at(const std::string& lit) {
    ws();
    return s_.compare(i_, lit.size(), lit) == 0;
  }

  bool eat(const std::string& lit) {
    if (!at(lit)) return false;
    for (std::size_t k = 0; k < lit.size(); ++k) advance();
    return true;
  }

  void expect(const std::string& lit) {
    if (!eat(lit)) fail("'" + lit + "'");
  }

  std::string peek_ident() {
    ws();
    std::size_t j = i_;
    if (j >= s_.size() || !ident_start(s_[j])) return {};
    while (j < s_.size() && ident_char(s_[j])) ++j;
    return s_.substr(i_, j - i_);
  }

  bool eat_word(const std::string& w) {
    if (peek_ident() != w) return false;
    for (std::size_t k = 0; k < w.size(); ++k) advance();
    return true;
  }

  void expect_word(const std::string& w) {
    if (!eat_word(w)) fail("'" + w + "'");
  }

  std::string ident(const char* what = "a name") {
    std::string id = peek_ident();
    if (id.empty()) fail(what);
    for (std::size_t k = 0; k < id.size(); ++k) advance();
    return id;
  }

  // Rule, lemma and suite names: letters, digits, '-' and '_'.
  std::string dashed(const char* what) {
    ws();
    std::size_t j = i_;
    while (j < s_.size() && (ident_char(s_[j]) || s_[j] == '-')) ++j;
    if (j == i_) fail(what);
    std::string out = s_.substr(i_, j - i_);
    while (i_ < j) advance();
    return out;
  }

  // Identifier or JSON-style quoted string.
  std::string name_or_string(const char* what) {
    ws();
    if (i_ < s_.size() && s_[i_] == '"') {
      std::string out;
      advance();
      while (i_ < s_.size() && s_[i_] != '"') {
        if (s_[i_] == '\\' && i_ + 1 < s_.size()) advance();
        out += s_[i_];
        advance();
      }
      expect("\"");
      return out;
    }
    return ident(what);
  }

  int integer() {
    ws();
    std::size_t j = i_;
    if (j < s_.size() && s_[j] == '-') ++j;
    while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) ++j;
    if (j == i_ || (j == i_ + 1 && s_[i_] == '-')) fail("an integer");
    int v = std::stoi(s_.substr(i_, j - i_));
    while (i_ < j) advance();
    return v;
  }

  bool at_integer() {
    ws();
    return i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]));
  }

  // ---- types ----

  TypeExpr type() {
    TypeExpr t = type_atom();
    while (true) {
      if (eat("*")) t = ty::prod(t, type_atom());
      else if (at("+") ) { expect("+"); t = ty::coprod(t, type_atom()); }
      else break;
    }
    return t;
  }

  TypeExpr type_atom() {
    if (eat("(")) {
      TypeExpr t = type();
      expect(")");
      return t;
    }
    if (eat("1")) return ty::unit();
    if (eat("0")) return ty::empty();
    std::string id = peek_ident();
    if (id.empty()) fail("a type");
    ident();
    if (id.rfind("V_", 0) == 0 && id.size() > 2) return ty::value(id.substr(2));
    if (id.rfind("P_", 0) == 0 && id.size() > 2) return ty::param(id.substr(2));
    return ty::named(id);
  }

  // ---- terms ----

  Theory& theory(const std::string& name) {
    auto it = env_.theories.find(name);
    if (it == env_.theories.end()) name_error("unknown theory " + name);
    return it->second;
  }

  std::string theory_clause() {
    if (eat_word("in")) {
      std::string n = ident("a theory name");
      theory(n);
      return n;
    }
    if (last_theory_.empty()) name_error("no theory declared yet");
    return last_theory_;
  }

  Term term(Theory& th) {
    Term a = term_atom(th);
    if (eat(".")) {
      Term b = term(th);
      if (!same(cod(b), dom(a)))
        throw DecorError(ErrorCode::CompositionMismatch,
                         std::to_string(line_) + ":" + std::to_string(col_) + ": " + to_string(a) +
                             " cannot follow " + to_string(b));
      return tm::comp(a, b);
    }
    return a;
  }

  TypeExpr bracket_type() {
    expect("[");
    TypeExpr t = type();
    expect("]");
    return t;
  }

  std::pair<Term, Term> two(Theory& th, const char* sep) {
    expect("(");
    Term a = term(th);
    expect(sep);
    Term b = term(th);
    expect(")");
    return {a, b};
  }

  Term one(Theory& th) {
    expect("(");
    Term a = term(th);
    expect(")");
    return a;
  }

  Term term_atom(Theory& th) {
    if (eat("(")) {
      Term t = term(th);
      expect(")");
      return t;
    }
    if (eat("<>")) return tm::to_unit(bracket_type());
    if (at("[]")) {
      expect("[]");
      return tm::from_empty(bracket_type());
    }
    std::string id = peek_ident();
    if (id.empty()) fail("a term");
    if (kReservedTerms.count(id)) return keyword_term(th, id);
    ident();
    if (auto a = env_.terms.find(alias_key(th.name, id)); a != env_.terms.end()) return a->second;
    if (auto g = th.find_generator(id)) return *g;
    if (id == "c_all" && th.flavor == Flavor::Exceptions) {
      add_catch_all(th);
      return *th.find_generator(id);
    }
    name_error("unknown generator or term " + id + " in " + th.name);
  }

  static std::string alias_key(const std::string& th, const std::string& name) { return th + "::" + name; }

  Term keyword_term(Theory& th, const std::string& id) {
    if (id == "catch") fail("a term");
    ident();
    if (id == "id") return tm::id(bracket_type());
    if (id == "p1") return tm::proj1(bracket_type());
    if (id == "p2") return tm::proj2(bracket_type());
    if (id == "in1") return tm::inj1(bracket_type());
    if (id == "in2") return tm::inj2(bracket_type());
    if (id == "lsemi" || id == "lsum") {
      auto [f, g] = two(th, ",");
      return id == "lsemi" ? tm::semiprod(f, g, true) : tm::semicoprod(f, g, true);
    }
    if (id == "rsemi" || id == "rsum") {
      auto [g, f] = two(th, ",");
      return id == "rsemi" ? tm::semiprod(f, g, false) : tm::semicoprod(f, g, false);
    }
    if (id == "case") {
      auto [g, k] = two(th, "|");
      return tm::case_sum(g, k);
    }
    if (id == "cprod") {
      auto [g, k] = two(th, "|");
      return tm::case_prod(g, k);
    }
    if (id == "pcase") {
      auto [g, h] = two(th, ",");
      return tm::prop_case(g, h);
    }
    if (id == "pair") {
      auto [g, h] = two(th, ",");
      return tm::acc_pair(g, h);
    }
    if (id == "down") return tm::coerce(one(th));
    if (id == "up") return tm::coerce_acc(one(th));
    if (id == "tuple" || id == "cotuple") {
      TypeExpr x = bracket_type();
      expect("{");
      std::vector<std::string> keys;
      std::vector<Term> comps;
      if (!at("}")) {
        do {
          keys.push_back(ident("an index"));
          expect(":");
          comps.push_back(term(th));
        } while (eat(","));
      }
      expect("}");
      return id == "tuple" ? tm::loc_tuple(x, keys, comps) : tm::const_cotuple(x, keys, comps);
    }
    if (id == "raise") {
      expect("(");
      std::string i = ident("a constructor");
      TypeExpr y;
      if (eat(",")) y = type();
      else if (raise_target_) y = raise_target_;
      else fail("a target type (raise(i, Y)) outside a handled body");
      expect(")");
      return raise_term(th, i, y);
    }
    if (id == "handle") {
      expect("(");
      std::size_t body_at = i_;
      Pos body_pos = pos();
      skip_until({","});
      HandlerSpec spec;
      while (eat(",")) clause(th, spec, "=>");
      expect(")");
      return finish_handler(th, spec, body_at, body_pos);
    }
    // try BODY catch i => g | j => h | _ => k
    std::size_t body_at = i_;
    Pos body_pos = pos();
    skip_until({"catch"});
    expect_word("catch");
    HandlerSpec spec;
    do {
      clause(th, spec, "=>");
    } while (eat("|"));
    return finish_handler(th, spec, body_at, body_pos);
  }

  void clause(Theory& th, HandlerSpec& spec, const char* arrow) {
    if (eat_word("_")) {
      expect(arrow);
      spec.catch_all = term(th);
      return;
    }
    std::string i = ident("a constructor or _");
    expect(arrow);
    spec.clauses.emplace_back(i, term(th));
  }

  Term finish_handler(Theory& th, HandlerSpec& spec, std::size_t body_at, Pos body_pos) {
    if (spec.clauses.empty() && !spec.catch_all) fail("a handler clause");
    TypeExpr y = spec.clauses.empty() ? cod(*spec.catch_all) : cod(spec.clauses[0].second);
    std::size_t end = i_;
    Pos end_pos = pos();
    i_ = body_at;
    line_ = body_pos.line;
    col_ = body_pos.col;
    TypeExpr saved = raise_target_;
    raise_target_ = y;
    spec.body = term(th);
    raise_target_ = saved;
    i_ = end;
    line_ = end_pos.line;
    col_ = end_pos.col;
    return handle_term(th, spec).result;
  }

  // Skips a balanced stretch up to a top-level stop token.
  void skip_until(const std::vector<std::string>& stops) {
    int depth = 0;
    while (i_ < s_.size()) {
      char c = s_[i_];
      if (depth == 0) {
        for (const auto& st : stops) {
          if (s_.compare(i_, st.size(), st) != 0) continue;
          bool word = ident_start(st[0]);
          bool bounded = !word || ((i_ == 0 || !ident_char(s_[i_ - 1])) &&
                                   (i_ + st.size() >= s_.size() || !ident_char(s_[i_ + st.size()])));
          if (bounded) return;
        }
        if (c == ')' || c == ']' || c == '}') fail("end of handled body");
      }
      if (c == '(' || c == '[' || c == '{') ++depth;
      if (c == ')' || c == ']' || c == '}') --depth;
      advance();
    }
    fail("end of handled body");
  }

  Equation equation(Theory& th) {
    Term l = term(th);
    EqKind k;
    if (eat("==")) k = EqKind::Strong;
    else if (eat("~~")) k = EqKind::Weak;
    else fail("'==' or '~~'");
    Term r = term(th);
    Equation e{l, r, k};
    typecheck(th, e);
    return e;
  }

  // ---- statements ----

  Decl statement() {
    std::string kw = peek_ident();
    if (!kKeywords.count(kw)) fail("a statement keyword");
    ident();
    if (kw == "theory") return theory_decl();
    if (kw == "gen") return gen_decl();
    if (kw == "axiom") return axiom_decl();
    if (kw == "term") return term_decl();
    if (kw == "goal") return goal_decl();
    if (kw == "model") return model_decl();
    if (kw == "proof") return proof_decl();
    return command(kw);
  }

  std::vector<std::pair<std::string, int>> carrier_list() {
    std::vector<std::pair<std::string, int>> out;
    expect("(");
    if (!at(")")) {
      do {
        std::string k = ident("an index");
        expect(":");
        int n = integer();
        out.emplace_back(k, n);
      } while (eat(","));
    }
    expect(")");
    return out;
  }

  Decl theory_decl() {
    TheoryDecl d;
    d.name = ident("a theory name");
    if (env_.theories.count(d.name)) name_error("theory " + d.name + " declared twice");
    expect("=");
    std::string src = ident("states, exceptions, dual or plain");
    Theory th;
    std::vector<int> sizes;
    std::map<std::string, int> named;
    if (src == "states" || src == "exceptions") {
      d.source = src == "states" ? TheorySource::States : TheorySource::Exceptions;
      d.carriers = carrier_list();
      std::vector<std::string> idx;
      for (const auto& [k, n] : d.carriers) {
        idx.push_back(k);
        if (n < 1) throw DecorError(ErrorCode::BadParams, "carrier of " + k + " must be positive");
        sizes.push_back(n);
      }
      th = src == "states" ? build_states_theory(idx, d.name) : build_exceptions_theory(idx, d.name);
    } else if (src == "dual") {
      d.source = TheorySource::Dual;
      expect("(");
      d.of = ident("a theory name");
      expect(")");
      th = dualize_theory(theory(d.of));
      th.name = d.name;
      sizes = env_.carriers[d.of];
      named = env_.named[d.of];
    } else if (src == "plain") {
      d.source = TheorySource::Plain;
      expect("(");
      std::string which = ident("locations or constructors");
      if (which != "locations" && which != "constructors") fail("locations or constructors");
      d.plain_locations = which == "locations";
      expect(":");
      if (!at(")")) {
        do d.indices.push_back(ident("an index"));
        while (eat(","));
      }
      expect(")");
      th.name = d.name;
      th.flavor = Flavor::Plain;
      (d.plain_locations ? th.locations : th.constructors) = d.indices;
    } else {
      fail("states, exceptions, dual or plain");
    }
    if (eat("{")) {
      while (!eat("}")) {
        std::string w = peek_ident();
        if (w == "gen") {
          ident();
          d.gens.push_back(gen_spec(th));
          add_gen(th, d.gens.back());
        } else if (w == "axiom") {
          ident();
          std::string n = name_or_string("an axiom name");
          expect(":");
          Equation e = equation(th);
          th.add_axiom(n, e);
          d.axioms.emplace_back(n, e);
        } else if (w == "catchall") {
          ident();
          add_catch_all(th);
          d.catch_all = true;
        } else {
          fail("gen, axiom, catchall or '}'");
        }
      }
    }
    env_.theories[d.name] = std::move(th);
    env_.carriers[d.name] = sizes;
    env_.named[d.name] = named;
    last_theory_ = d.name;
    return d;
  }

  Decoration level_word(const Theory& th) {
    if (at_integer()) {
      int n = integer();
      if (n < 0 || n > 2) fail("a level 0, 1 or 2");
      return th.flavor == Flavor::Plain ? 0 : n;
    }
    std::string w = ident("a decoration");
    if (w == "pure") return 0;
    bool st = th.flavor == Flavor::States, ex = th.flavor == Flavor::Exceptions;
    if ((w == "accessor" && st) || (w == "propagator" && ex)) return 1;
    if ((w == "modifier" && st) || (w == "catcher" && ex)) return 2;
    if (w == "accessor" || w == "modifier" || w == "propagator" || w == "catcher")
      throw DecorError(ErrorCode::FlavorViolation, w + " does not exist in " + flavor_name(th.flavor) + " theories");
    fail("pure, accessor, modifier, propagator or catcher");
  }

  GenSpec gen_spec(const Theory& th) {
    GenSpec g;
    g.name = ident("a generator name");
    if (kReservedTerms.count(g.name) || g.name == "c_all") name_error(g.name + " is reserved");
    expect(":");
    g.dom = type();
    expect("->");
    g.cod = type();
    g.level = level_word(th);
    return g;
  }

  void add_gen(Theory& th, const GenSpec& g) {
    if (th.find_generator(g.name)) name_error("generator " + g.name + " declared twice");
    check_type(th, g.dom);
    check_type(th, g.cod);
    th.add_generator(tm::gen(g.name, g.dom, g.cod, g.level));
  }

  Decl gen_decl() {
    // the theory clause comes last, so read the spec against a probe first
    std::size_t at0 = i_;
    Pos p0 = pos();
    std::string name = ident("a generator name");
    (void)name;
    skip_to_in();
    std::string thn = theory_clause_here();
    std::size_t end = i_;
    Pos pend = pos();
    i_ = at0;
    line_ = p0.line;
    col_ = p0.col;
    Theory& th = theory(thn);
    GenDecl d;
    d.theory = thn;
    d.gen = gen_spec(th);
    i_ = end;
    line_ = pend.line;
    col_ = pend.col;
    add_gen(th, d.gen);
    return d;
  }

  // gen NAME : A -> B LEVEL [in T]: find the optional trailing clause.
  void skip_to_in() {
    expect(":");
    type();
    expect("->");
    type();
    if (at_integer()) integer();
    else ident("a decoration");
  }

  std::string theory_clause_here() { return theory_clause(); }

  Decl axiom_decl() {
    AxiomDecl d;
    d.name = name_or_string("an axiom name");
    d.theory = theory_clause();
    expect(":");
    Theory& th = theory(d.theory);
    d.eq = equation(th);
    th.add_axiom(d.name, d.eq);
    return d;
  }

  Decl term_decl() {
    TermDecl d;
    d.name = ident("a term name");
    d.theory = theory_clause();
    expect("=");
    Theory& th = theory(d.theory);
    d.term = term(th);
    typecheck(th, d.term);
    env_.terms[alias_key(d.theory, d.name)] = d.term;
    return d;
  }

  Decl goal_decl() {
    GoalDecl d;
    d.name = ident("a goal name");
    d.theory = theory_clause();
    expect(":");
    d.eq = equation(theory(d.theory));
    env_.goals[d.name] = d;
    return d;
  }

  Decl model_decl() {
    ModelDecl d;
    d.theory = ident("a theory name");
    const Theory& th = theory(d.theory);
    d.sizes = carrier_list();
    apply_model(th, d.sizes);
    return d;
  }

  void apply_model(const Theory& th, const std::vector<std::pair<std::string, int>>& sizes) {
    const auto& idx = th.flavor == Flavor::Exceptions ? th.constructors : th.locations;
    auto& cs = env_.carriers[th.name];
    if (cs.size() != idx.size()) cs.assign(idx.size(), 1);
    for (const auto& [k, n] : sizes) {
      if (n < 1) throw DecorError(ErrorCode::BadParams, "carrier of " + k + " must be positive");
      auto it = std::find(idx.begin(), idx.end(), k);
      if (it != idx.end()) cs[static_cast<std::size_t>(it - idx.begin())] = n;
      else env_.named[th.name][k] = n;
    }
  }

  Meta inst_value(Theory& th, const std::string& key) {
    if (key == "X" || key == "Y") return type();
    if (key == "i") return ident("an index");
    return term(th);
  }

  Decl proof_decl() {
    ProofDecl d;
    d.name = ident("a proof name");
    if (env_.proofs.count(d.name)) name_error("proof " + d.name + " declared twice");
    d.theory = theory_clause();
    Theory& th = theory(d.theory);
    if (eat(":")) d.goal = equation(th);
    expect("{");
    std::set<std::string> labels;
    while (!eat("}")) {
      ProofStep st;
      st.label = ident("a step label");
      if (labels.count(st.label)) name_error("step " + st.label + " defined twice");
      expect(":");
      std::string r = dashed("a rule name");
      expect("(");
      if (r == "axiom" || r == "hyp") {
        st.kind = r == "axiom" ? ProofStep::Kind::Axiom : ProofStep::Kind::Hyp;
        st.name = name_or_string("an axiom name");
        if (st.kind == ProofStep::Kind::Axiom && !th.find_axiom(st.name)) name_error("unknown axiom " + st.name);
        if (st.kind == ProofStep::Kind::Hyp) name_error("hypotheses are not supported in scripts");
      } else {
        auto rid = rule_from_name(r);
        if (!rid) name_error("unknown rule " + r);
        st.rule = *rid;
        if (!at(")")) {
          do {
            std::string key = ident("an instantiation key");
            expect("=");
            st.inst[key] = inst_value(th, key);
          } while (eat(","));
        }
      }
      expect(")");
      if (eat_word("from")) {
        while (true) {
          std::string l = peek_ident();
          if (l.empty()) break;
          // a label followed by ':' starts the next step
          std::size_t j = i_ + l.size();
          while (j < s_.size() && std::isspace(static_cast<unsigned char>(s_[j]))) ++j;
          if (j < s_.size() && s_[j] == ':') break;
          if (!labels.count(l)) name_error("unknown step " + l);
          ident();
          st.from.push_back(l);
        }
      }
      labels.insert(st.label);
      d.steps.push_back(std::move(st));
    }
    if (d.steps.empty()) fail("at least one proof step");
    env_.proofs[d.name] = d;
    return d;
  }

  Meta lemma_arg(Theory& th) {
    std::string id = peek_ident();
    const auto& idx = th.flavor == Flavor::Exceptions ? th.constructors : th.locations;
    if (!id.empty() && std::find(idx.begin(), idx.end(), id) != idx.end()) {
      ident();
      return id;
    }
    std::size_t at0 = i_;
    Pos p0 = pos();
    try {
      return term(th);
    } catch (const DecorError&) {
      i_ = at0;
      line_ = p0.line;
      col_ = p0.col;
    }
    return type();
  }

  LemmaArgs arg_list(Theory& th) {
    LemmaArgs args;
    expect("(");
    if (!at(")")) {
      do args.push_back(lemma_arg(th));
      while (eat(","));
    }
    expect(")");
    return args;
  }

  // Lemma arguments are parsed before the theory clause; re-read them once the
  // theory is known.
  LemmaArgs deferred_args(std::size_t at0, Pos p0, Theory& th) {
    std::size_t end = i_;
    Pos pend = pos();
    i_ = at0;
    line_ = p0.line;
    col_ = p0.col;
    LemmaArgs a = arg_list(th);
    i_ = end;
    line_ = pend.line;
    col_ = pend.col;
    return a;
  }

  void skip_args() {
    expect("(");
    skip_until({")"});
    expect(")");
  }

  Decl command(const std::string& kw) {
    Command c;
    if (kw == "lemma") {
      c.kind = Command::Kind::Lemma;
      c.name = dashed("a lemma name");
      std::size_t a0 = i_;
      Pos p0 = pos();
      bool has = at("(");
      if (has) skip_args();
      c.theory = theory_clause();
      if (has) c.args = deferred_args(a0, p0, theory(c.theory));
      c.has_args = has;
      return c;
    }
    if (kw == "verify") {
      c.kind = Command::Kind::Verify;
      c.name = dashed("a suite name");
      c.theory = theory_clause();
      return c;
    }
    if (kw == "check") {
      std::string what = ident("proof or equation");
      if (what == "proof") {
        c.kind = Command::Kind::CheckProof;
        c.name = dashed("a proof or lemma name");
        std::size_t a0 = i_;
        Pos p0 = pos();
        bool has = at("(");
        if (has) skip_args();
        if (auto p = env_.proofs.find(c.name); p != env_.proofs.end() && !has && !at_word("in")) {
          c.theory = p->second.theory;
        } else {
          c.theory = theory_clause();
        }
        if (has) c.args = deferred_args(a0, p0, theory(c.theory));
        c.has_args = has;
        return c;
      }
      if (what != "equation") fail("proof or equation");
      c.kind = Command::Kind::CheckEquation;
      inline_or_goal(c);
      return c;
    }
    if (kw == "prove") {
      c.kind = Command::Kind::Prove;
      inline_or_goal(c);
      if (eat_word("budget")) c.budget = integer();
      return c;
    }
    // eval
    c.kind = Command::Kind::Eval;
    c.theory = theory_clause();
    expect(":");
    Theory& th = theory(c.theory);
    c.term = term(th);
    typecheck(th, c.term);
    expect_word("on");
    Value v = value();
    if (v.kind == Value::Kind::Atom && v.tag == 'e') c.exc = Outcome{true, v.sym, v.kids[0]};
    else c.input = v;
    if (eat_word("at")) {
      State st;
      expect("(");
      if (!at(")")) {
        do st.push_back(value());
        while (eat(","));
      }
      expect(")");
      c.state = st;
    }
    return c;
  }

  bool at_word(const std::string& w) { return peek_ident() == w; }

  bool done() {
    ws();
    return i_ >= s_.size();
  }

  void inline_or_goal(Command& c) {
    if (at(":") || at_word("in")) {
      c.theory = theory_clause();
      expect(":");
      c.eq = equation(theory(c.theory));
      return;
    }
    c.name = ident("a goal name");
    auto g = env_.goals.find(c.name);
    if (g == env_.goals.end()) name_error("unknown goal " + c.name);
    c.theory = g->second.theory;
  }

  // ---- values ----

  Value value() {
    ws();
    if (eat("(")) {
      if (eat(")")) return Value::unit();
      // (idx: v) annotates the carrier of an atom
      std::string id = peek_ident();
      if (!id.empty()) {
        std::size_t j = i_ + id.size();
        while (j < s_.size() && s_[j] == ' ') ++j;
        if (j < s_.size() && s_[j] == ':') {
          ident();
          expect(":");
          Value v = value();
          expect(")");
          return v;
        }
      }
      Value a = value();
      expect(",");
      Value b = value();
      expect(")");
      return Value::pair(a, b);
    }
    if (at_integer()) return Value::atom_of(integer(), 'v');
    std::string id = ident("a value");
    if (id == "inl" || id == "inr") {
      expect("(");
      Value v = value();
      expect(")");
      return id == "inl" ? Value::inl(v) : Value::inr(v);
    }
    if (eat("!")) {
      expect("(");
      Value v = value();
      expect(")");
      Value e = Value::atom_of(0, 'e', id);
      e.kids = {v};
      return e;
    }
    // a0 is a parameter atom, Name3 an atom of a named type
    std::size_t k = id.size();
    while (k > 0 && std::isdigit(static_cast<unsigned char>(id[k - 1]))) --k;
    if (k == id.size() || k == 0) fail("a value literal");
    int n = std::stoi(id.substr(k));
    std::string head = id.substr(0, k);
    if (head == "a") return Value::atom_of(n, 'p');
    return Value::atom_of(n, 'n', head);
  }

 private:
  const std::string& s_;
  std::size_t i_ = 0;
  int line_ = 1, col_ = 1;
  Environment env_;
  std::string last_theory_;
  TypeExpr raise_target_;
};

// ---- printing ----

std::string level_word(Flavor f, Decoration d) {
  if (d == 0 || f == Flavor::Plain) return "pure";
  if (f == Flavor::States) return d == 1 ? "accessor" : "modifier";
  return d == 1 ? "propagator" : "catcher";
}

std::string quoted(const std::string& s) {
  bool plain = !s.empty() && ident_start(s[0]) &&
               std::all_of(s.begin(), s.end(), [](char c) { return ident_char(c); });
  if (plain) return s;
  return json(s).dump();
}

std::string carriers(const std::vector<std::pair<std::string, int>>& cs) {
  std::string out = "(";
  for (std::size_t k = 0; k < cs.size(); ++k) {
    if (k) out += ", ";
    out += cs[k].first + ":" + std::to_string(cs[k].second);
  }
  return out + ")";
}

std::string gen_line(const GenSpec& g, Flavor f) {
  return "gen " + g.name + " : " + to_string(g.dom) + " -> " + to_string(g.cod) + " " + level_word(f, g.level);
}

std::string args_text(const LemmaArgs& a) {
  std::string out = "(";
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (k) out += ", ";
    out += to_string(a[k]);
  }
  return out + ")";
}

std::string value_text(const Value& v) { return to_string(v); }

struct Printer {
  std::string operator()(const TheoryDecl& d) const {
    std::string out = "theory " + d.name + " = ";
    Flavor f = Flavor::Plain;
    switch (d.source) {
      case TheorySource::States: out += "states" + carriers(d.carriers); f = Flavor::States; break;
      case TheorySource::Exceptions: out += "exceptions" + carriers(d.carriers); f = Flavor::Exceptions; break;
      case TheorySource::Dual: out += "dual(" + d.of + ")"; f = Flavor::Plain; break;
      case TheorySource::Plain: {
        out += std::string("plain(") + (d.plain_locations ? "locations" : "constructors") + ":";
        for (std::size_t k = 0; k < d.indices.size(); ++k) out += (k ? ", " : " ") + d.indices[k];
        out += ")";
        break;
      }
    }
    if (d.gens.empty() && d.axioms.empty() && !d.catch_all) return out;
    out += " {\n";
    for (const auto& g : d.gens) out += "  " + gen_line(g, d.source == TheorySource::Dual ? dual_flavor : f) + "\n";
    for (const auto& [n, e] : d.axioms) out += "  axiom " + quoted(n) + " : " + to_string(e) + "\n";
    if (d.catch_all) out += "  catchall\n";
    return out + "}";
  }
  std::string operator()(const GenDecl& d) const {
    return gen_line(d.gen, flavor) + " in " + d.theory;
  }
  std::string operator()(const AxiomDecl& d) const {
    return "axiom " + quoted(d.name) + " in " + d.theory + " : " + to_string(d.eq);
  }
  std::string operator()(const TermDecl& d) const {
    return "term " + d.name + " in " + d.theory + " = " + to_string(d.term);
  }
  std::string operator()(const GoalDecl& d) const {
    return "goal " + d.name + " in " + d.theory + " : " + to_string(d.eq);
  }
  std::string operator()(const ModelDecl& d) const { return "model " + d.theory + " " + carriers(d.sizes); }
  std::string operator()(const ProofDecl& d) const {
    std::string out = "proof " + d.name + " in " + d.theory;
    if (d.goal) out += " : " + to_string(*d.goal);
    out += " {\n";
    for (const auto& s : d.steps) {
      out += "  " + s.label + ": ";
      if (s.kind == ProofStep::Kind::Axiom) {
        out += "axiom(" + quoted(s.name) + ")";
      } else if (s.kind == ProofStep::Kind::Hyp) {
        out += "hyp(" + quoted(s.name) + ")";
      } else {
        out += rule_name(s.rule);
        out += "(";
        bool first = true;
        for (const auto& [k, v] : s.inst) {
          out += (first ? "" : ", ") + k + " = " + to_string(v);
          first = false;
        }
        out += ")";
      }
      if (!s.from.empty()) {
        out += " from";
        for (const auto& f : s.from) out += " " + f;
      }
      out += "\n";
    }
    return out + "}";
  }
  std::string operator()(const Command& c) const {
    auto eq_or_goal = [&]() {
      if (c.eq) return "in " + c.theory + " : " + to_string(*c.eq);
      return c.name;
    };
    switch (c.kind) {
      case Command::Kind::Lemma:
        return "lemma " + c.name + (c.has_args ? args_text(c.args) : "") + " in " + c.theory;
      case Command::Kind::Verify: return "verify " + c.name + " in " + c.theory;
      case Command::Kind::CheckProof:
        return "check proof " + c.name + (c.has_args ? args_text(c.args) : "") + " in " + c.theory;
      case Command::Kind::CheckEquation: return "check equation " + eq_or_goal();
      case Command::Kind::Prove:
        return "prove " + eq_or_goal() + (c.budget ? " budget " + std::to_string(*c.budget) : "");
      case Command::Kind::Eval: {
        std::string out = "eval in " + c.theory + " : " + to_string(c.term) + " on ";
        out += c.exc ? value_text(encode_exc_value(*c.exc)) : value_text(c.input);
        if (c.state) {
          out += " at (";
          for (std::size_t k = 0; k < c.state->size(); ++k) out += (k ? ", " : "") + to_string((*c.state)[k]);
          out += ")";
        }
        return out;
      }
    }
    return {};
  }
  static Value encode_exc_value(const Outcome& o) {
    Value e = Value::atom_of(0, 'e', o.ctor);
    e.kids = {o.v};
    return e;
  }
  Flavor flavor = Flavor::Plain;
  Flavor dual_flavor = Flavor::Plain;
};

bool meta_eq(const Meta& a, const Meta& b) {
  if (a.index() != b.index()) return false;
  if (auto* t = std::get_if<Term>(&a)) return same(*t, std::get<Term>(b));
  if (auto* t = std::get_if<TypeExpr>(&a)) return same(*t, std::get<TypeExpr>(b));
  return std::get<std::string>(a) == std::get<std::string>(b);
}

bool args_eq(const LemmaArgs& a, const LemmaArgs& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k)
    if (!meta_eq(a[k], b[k])) return false;
  return true;
}

bool eq_eq(const Equation& a, const Equation& b) { return compare(a, b) == 0; }

bool opt_eq_eq(const std::optional<Equation>& a, const std::optional<Equation>& b) {
  return a.has_value() == b.has_value() && (!a || eq_eq(*a, *b));
}

bool gen_eq(const GenSpec& a, const GenSpec& b) {
  return a.name == b.name && same(a.dom, b.dom) && same(a.cod, b.cod) && a.level == b.level;
}

struct Equal {
  bool operator()(const TheoryDecl& a, const TheoryDecl& b) const {
    if (a.name != b.name || a.source != b.source || a.carriers != b.carriers || a.of != b.of ||
        a.plain_locations != b.plain_locations || a.indices != b.indices || a.catch_all != b.catch_all ||
        a.gens.size() != b.gens.size() || a.axioms.size() != b.axioms.size())
      return false;
    for (std::size_t k = 0; k < a.gens.size(); ++k)
      if (!gen_eq(a.gens[k], b.gens[k])) return false;
    for (std::size_t k = 0; k < a.axioms.size(); ++k)
      if (a.axioms[k].first != b.axioms[k].first || !eq_eq(a.axioms[k].second, b.axioms[k].second)) return false;
    return true;
  }
  bool operator()(const GenDecl& a, const GenDecl& b) const { return a.theory == b.theory && gen_eq(a.gen, b.gen); }
  bool operator()(const AxiomDecl& a, const AxiomDecl& b) const {
    return a.theory == b.theory && a.name == b.name && eq_eq(a.eq, b.eq);
  }
  bool operator()(const TermDecl& a, const TermDecl& b) const {
    return a.theory == b.theory && a.name == b.name && same(a.term, b.term);
  }
  bool operator()(const GoalDecl& a, const GoalDecl& b) const {
    return a.theory == b.theory && a.name == b.name && eq_eq(a.eq, b.eq);
  }
  bool operator()(const ModelDecl& a, const ModelDecl& b) const { return a.theory == b.theory && a.sizes == b.sizes; }
  bool operator()(const ProofDecl& a, const ProofDecl& b) const {
    if (a.theory != b.theory || a.name != b.name || !opt_eq_eq(a.goal, b.goal) || a.steps.size() != b.steps.size())
      return false;
    for (std::size_t k = 0; k < a.steps.size(); ++k) {
      const auto &x = a.steps[k], &y = b.steps[k];
      if (x.label != y.label || x.kind != y.kind || x.name != y.name || x.from != y.from) return false;
      if (x.kind == ProofStep::Kind::Rule && x.rule != y.rule) return false;
      if (x.inst.size() != y.inst.size()) return false;
      for (auto i = x.inst.begin(), j = y.inst.begin(); i != x.inst.end(); ++i, ++j)
        if (i->first != j->first || !meta_eq(i->second, j->second)) return false;
    }
    return true;
  }
  bool operator()(const Command& a, const Command& b) const {
    bool term_ok = (!a.term && !b.term) || (a.term && b.term && same(a.term, b.term));
    bool exc_ok = a.exc.has_value() == b.exc.has_value() && (!a.exc || *a.exc == *b.exc);
    return a.kind == b.kind && a.theory == b.theory && a.name == b.name && a.has_args == b.has_args &&
           args_eq(a.args, b.args) && opt_eq_eq(a.eq, b.eq) && a.budget == b.budget && term_ok &&
           a.input == b.input && exc_ok && a.state == b.state;
  }
  template <class A, class B>
  bool operator()(const A&, const B&) const {
    return false;
  }
};

}  // namespace

Script parse_script(const std::string& text) { return Parser(text).run(); }

std::string print_decl(const Decl& d) { return std::visit(Printer{}, d); }

std::string print_script(const Script& s) {
  std::string out;
  std::map<std::string, Flavor> flavors;
  for (const auto& d : s.decls) {
    Printer p;
    if (auto* t = std::get_if<TheoryDecl>(&d)) {
      auto it = s.env.theories.find(t->name);
      Flavor f = it != s.env.theories.end() ? it->second.flavor : Flavor::Plain;
      flavors[t->name] = f;
      p.dual_flavor = f;
    }
    if (auto* g = std::get_if<GenDecl>(&d)) p.flavor = flavors[g->theory];
    out += std::visit(p, d) + "\n";
  }
  return out;
}

bool operator==(const Script& a, const Script& b) {
  if (a.decls.size() != b.decls.size()) return false;
  for (std::size_t k = 0; k < a.decls.size(); ++k)
    if (!std::visit(Equal{}, a.decls[k], b.decls[k])) return false;
  return true;
}

std::string print_theory(const Theory& th, const std::vector<int>& sizes) {
  TheoryDecl d;
  std::string name;
  for (char c : th.name) name += ident_char(c) ? c : '_';
  while (!name.empty() && name.back() == '_') name.pop_back();
  d.name = name;
  Theory base;
  switch (th.flavor) {
    case Flavor::States:
    case Flavor::Exceptions: {
      bool st = th.flavor == Flavor::States;
      d.source = st ? TheorySource::States : TheorySource::Exceptions;
      const auto& idx = st ? th.locations : th.constructors;
      for (std::size_t k = 0; k < idx.size(); ++k)
        d.carriers.emplace_back(idx[k], k < sizes.size() ? sizes[k] : 1);
      base = st ? build_states_theory(idx, th.name) : build_exceptions_theory(idx, th.name);
      break;
    }
    case Flavor::Plain:
      d.source = TheorySource::Plain;
      d.plain_locations = !th.locations.empty() || th.constructors.empty();
      d.indices = d.plain_locations ? th.locations : th.constructors;
      base.flavor = Flavor::Plain;
      break;
  }
  for (const auto& g : th.generators) {
    if (base.find_generator(g->name)) continue;
    if (g->role == GenRole::CatchAll) {
      d.catch_all = true;
      continue;
    }
    d.gens.push_back(GenSpec{g->name, g->dom, g->cod, g->dec});
  }
  for (const auto& a : th.axioms) {
    if (base.find_axiom(a.name)) continue;
    if (d.catch_all && a.name.rfind("C_all_", 0) == 0) continue;
    d.axioms.emplace_back(a.name, a.eq);
  }
  Printer p;
  p.dual_flavor = th.flavor;
  std::string out = p(d);
  // TheoryDecl printing picks the flavor from the source; plain keeps "pure"
  return out;
}

Value parse_value(const std::string& text) {
  Parser p(text);
  Value v = p.value();
  if (!p.done()) p.fail("end of value");
  return v;
}

FiniteModel model_of(const Environment& env, const std::string& theory,
                     const std::map<std::string, int>& overrides) {
  auto it = env.theories.find(theory);
  if (it == env.theories.end()) throw DecorError(ErrorCode::NameError, "unknown theory " + theory);
  const Theory& th = it->second;
  std::vector<int> sizes;
  if (auto c = env.carriers.find(theory); c != env.carriers.end()) sizes = c->second;
  const auto& idx = th.flavor == Flavor::Exceptions ? th.constructors : th.locations;
  if (sizes.size() != idx.size()) sizes.assign(idx.size(), 2);
  std::map<std::string, int> named;
  if (auto n = env.named.find(theory); n != env.named.end()) named = n->second;
  for (const auto& [k, n] : overrides) {
    auto pos = std::find(idx.begin(), idx.end(), k);
    if (pos != idx.end()) sizes[static_cast<std::size_t>(pos - idx.begin())] = n;
    else named[k] = n;
  }
  return make_model(th, sizes, named);
}

Derivation build_proof(const Environment& env, const ProofDecl& p) {
  auto it = env.theories.find(p.theory);
  if (it == env.theories.end()) throw DecorError(ErrorCode::NameError, "unknown theory " + p.theory);
  const Theory& th = it->second;
  std::map<std::string, Derivation> built;
  Derivation last;
  for (const auto& st : p.steps) {
    Derivation d;
    try {
      if (st.kind == ProofStep::Kind::Axiom) {
        d = dv::axiom(th, st.name);
      } else {
        std::vector<Derivation> prem;
        for (const auto& f : st.from) prem.push_back(built.at(f));
        d = dv::rule(th, st.rule, std::move(prem), st.inst);
      }
    } catch (const DecorError& e) {
      throw DecorError(e.code(), "step " + st.label + ": " + e.what());
    }
    built[st.label] = d;
    last = d;
  }
  return last;
}

}  // namespace decor
