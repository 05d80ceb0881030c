#include "decor/suites.hpp"

#include <algorithm>
#include <set>

#include "decor/error.hpp"
#include "decor/exceptions.hpp"
#include "decor/translate.hpp"

namespace decor {

bool SuiteReport::ok() const {
  return std::all_of(laws.begin(), laws.end(), [](const LawCheck& l) { return l.ok(); }) &&
         std::all_of(nesting.begin(), nesting.end(), [](const NestingCase& n) { return n.ok(); });
}

const std::vector<std::string>& suite_ids() {
  static const std::vector<std::string> ids{"states-seven", "states-laws", "exceptions-laws", "nesting-matrix",
                                            "duality-semantic"};
  return ids;
}

namespace {

LawCheck run(const FiniteModel& m, const std::string& name, const Equation& e, bool expect = true) {
  LawCheck c;
  c.name = name;
  c.equation = to_string(e);
  c.expect_holds = expect;
  c.result = check_equation(m, e);
  return c;
}

LawCheck skipped(const std::string& name, const std::string& why) {
  LawCheck c;
  c.name = name;
  c.skipped = true;
  c.note = why;
  return c;
}

LawCheck lemma(const FiniteModel& m, const Theory& th, const std::string& name, const std::string& id,
               const LemmaArgs& args) {
  return run(m, name, derive_lemma(th, id, args).conclusion.eq);
}

Equation strong(Equation e) {
  e.kind = EqKind::Strong;
  return e;
}

void need_flavor(const FiniteModel& m, Flavor f, const std::string& suite) {
  if (m.flavor != f)
    throw DecorError(ErrorCode::FlavorViolation, suite + " needs a " + flavor_name(f) + " model");
}

void need_pair(const FiniteModel& m, const std::string& suite) {
  if (m.indices.size() < 2) throw DecorError(ErrorCode::BadParams, suite + " needs two distinct indices");
}

void total(SuiteReport& r) {
  for (const auto& l : r.laws) r.points += l.result.points;
}

// ---- states ----

std::vector<LawCheck> seven(const FiniteModel& m, const Theory& S) {
  std::vector<LawCheck> out;
  const std::string &i = m.indices[0], &j = m.indices[1];
  for (const auto& g : seven_equation_goals(S, i, j)) {
    LawCheck c = run(m, std::to_string(g.number) + " " + g.name, g.direct);
    std::size_t seen = 0;
    for (const auto& o : g.observed) {
      CheckResult r = check_equation(m, o);
      if (!r.holds && c.result.holds) c.result = r;
      ++seen;
    }
    if (seen) c.note = "observed through " + std::to_string(seen) + " lookups";
    out.push_back(std::move(c));
  }
  return out;
}

SuiteReport states_seven(const FiniteModel& m) {
  need_flavor(m, Flavor::States, "states-seven");
  need_pair(m, "states-seven");
  Theory S = build_states_theory(m.indices);
  SuiteReport r;
  r.suite = "states-seven";
  r.laws = seven(m, S);
  total(r);
  return r;
}

SuiteReport states_laws(const FiniteModel& m) {
  need_flavor(m, Flavor::States, "states-laws");
  Theory S = build_states_theory(m.indices);
  SuiteReport r;
  r.suite = "states-laws";
  for (const auto& a : S.axioms) r.laws.push_back(run(m, a.name, a.eq));
  for (const auto& i : m.indices) {
    auto a1 = S.find_axiom("A1_" + i);
    r.laws.push_back(run(m, "A1_" + i + " strong", strong(S.axioms[*a1].eq), false));
    r.laws.push_back(lemma(m, S, "annihilation(" + i + ")", "annihilation", {i}));
    r.laws.push_back(lemma(m, S, "interaction-3(" + i + ")", "interaction-3", {i}));
    Term f = tm::comp(tm::to_unit(ty::value(i)), S.lookup(i));
    r.laws.push_back(lemma(m, S, "final-uniqueness(" + i + ")", "final-uniqueness", {f}));
  }
  for (const auto& i : m.indices)
    for (const auto& j : m.indices) {
      if (i == j) continue;
      r.laws.push_back(lemma(m, S, "commutation-6(" + i + "," + j + ")", "commutation-6", {i, j}));
      for (const auto& k : m.indices)
        for (int n = 1; n <= 8; ++n) {
          std::string id = "pr" + std::to_string(n);
          std::string name = id + "(" + i + "," + j + "," + k + ")";
          try {
            r.laws.push_back(lemma(m, S, name, id, {i, j, k}));
          } catch (const DecorError& e) {
            if (e.code() != ErrorCode::BadParams) throw;
          }
        }
    }
  total(r);
  return r;
}

// ---- exceptions ----

// Y is a named base type; f covers the three behaviors of a body: raise i,
// raise j, return a value.
struct HandlerKit {
  Theory E;
  FiniteModel m;
  TypeExpr Y = ty::named("Y");

  HandlerKit(const FiniteModel& model) : E(build_exceptions_theory(model.indices)), m(model) {
    if (!m.named.count("Y")) m.named["Y"] = 2;
  }

  Term gen(const std::string& name, TypeExpr from, TypeExpr to) {
    Term g = tm::gen(name, std::move(from), std::move(to), 0);
    if (!E.find_generator(name)) E.add_generator(g);
    return g;
  }
  Term raise(const std::string& i) { return raise_term(E, i, Y); }
  Term branch(const std::string& i) { return gen("g_" + i, ty::param(i), Y); }
  Term body(const std::string& i, const std::string& j) {
    return tm::prop_case(tm::prop_case(raise(i), raise(j)), tm::id(Y));
  }
};

SuiteReport exceptions_laws(const FiniteModel& model) {
  need_flavor(model, Flavor::Exceptions, "exceptions-laws");
  HandlerKit kit(model);
  const Theory& E = kit.E;
  const FiniteModel& m = kit.m;
  SuiteReport r;
  r.suite = "exceptions-laws";
  for (const auto& a : E.axioms) r.laws.push_back(run(m, a.name, a.eq));
  for (const auto& i : m.indices) {
    auto b1 = E.find_axiom("B1_" + i);
    r.laws.push_back(run(m, "B1_" + i + " strong", strong(E.axioms[*b1].eq), false));
    r.laws.push_back(lemma(m, E, "key-annihilation(" + i + ")", "key-annihilation", {i}));
    r.laws.push_back(lemma(m, E, "catch-throw(" + i + ")", "catch-throw", {i}));
    r.laws.push_back(lemma(m, E, "interaction-3(" + i + ")", "interaction-3", {i}));
    Term g = kit.branch(i);
    Term h = kit.gen("h_" + i, ty::param(i), kit.Y);
    Term f = tm::prop_case(kit.raise(i), tm::id(kit.Y));
    r.laws.push_back(lemma(m, E, "handler-idempotent(" + i + ")", "handler-idempotent", {i, f, g, h}));
  }
  if (m.indices.size() < 2) r.laws.push_back(skipped("pairwise laws", "needs two distinct constructors"));
  for (const auto& i : m.indices)
    for (const auto& j : m.indices) {
      if (i == j) continue;
      r.laws.push_back(lemma(m, E, "commutation-6(" + i + "," + j + ")", "commutation-6", {i, j}));
      Term f = kit.body(i, j);
      r.laws.push_back(lemma(m, E, "handler-commute(" + i + "," + j + ")", "handler-commute",
                             {i, j, f, kit.branch(i), kit.branch(j)}));
    }
  total(r);
  return r;
}

SuiteReport nesting_matrix(const FiniteModel& model) {
  need_flavor(model, Flavor::Exceptions, "nesting-matrix");
  need_pair(model, "nesting-matrix");
  HandlerKit kit(model);
  FiniteModel& m = kit.m;
  const std::string &i = m.indices[0], &j = m.indices[1];
  int bj = m.size_of(j) > 1 ? 1 : 0;
  // a: 1 -> P_i picks a0; beta: P_i -> P_j and b: 1 -> P_j pick b
  Term a = kit.gen("a", ty::unit(), ty::param(i));
  Term beta = kit.gen("beta", ty::param(i), ty::param(j));
  Term b = kit.gen("b", ty::unit(), ty::param(j));
  Term h = kit.gen("h", ty::param(j), kit.Y);
  auto constant = [](Value v) { return [v](const Outcome& o) { return o.exc ? o : Outcome{false, {}, v}; }; };
  m.exc_interp["a"] = constant(Value::atom_of(0, 'p'));
  m.exc_interp["beta"] = constant(Value::atom_of(bj, 'p'));
  m.exc_interp["b"] = constant(Value::atom_of(bj, 'p'));
  Term g = tm::comp(kit.raise(j), beta);

  auto variants = [&](const Term& f) {
    const Theory& E = kit.E;
    Term v1 = handle_term(E, HandlerSpec{f, {{i, g}, {j, h}}, std::nullopt}).result;
    Term inner = handle_term(E, HandlerSpec{f, {{i, g}}, std::nullopt}).result;
    Term v2 = handle_term(E, HandlerSpec{inner, {{j, h}}, std::nullopt}).result;
    Term g2 = handle_term(E, HandlerSpec{g, {{j, h}}, std::nullopt}).result;
    Term v3 = handle_term(E, HandlerSpec{f, {{i, g2}}, std::nullopt}).result;
    std::array<std::string, 3> got;
    const Term vs[3] = {v1, v2, v3};
    for (int k = 0; k < 3; ++k) {
      typecheck(E, vs[k]);
      got[k] = to_string(eval_exceptions(m, vs[k], Outcome{false, {}, Value::unit()}));
    }
    return got;
  };

  // Expected outcomes, spelled out independently of the evaluator.
  std::string b_str = "a" + std::to_string(bj);
  std::string uncaught = j + "!(" + b_str + ")", handled = "h(" + b_str + ")";

  SuiteReport r;
  r.suite = "nesting-matrix";
  NestingCase A;
  A.scenario = "f raises " + i + "(a0), g raises " + j + "(" + b_str + ")";
  A.got = variants(tm::comp(kit.raise(i), a));
  A.expected = {uncaught, handled, handled};
  NestingCase B;
  B.scenario = "f raises " + j + "(" + b_str + ")";
  B.got = variants(tm::comp(kit.raise(j), b));
  B.expected = {handled, handled, uncaught};
  r.nesting = {A, B};
  return r;
}

// ---- duality ----

SuiteReport duality_semantic(const FiniteModel& model) {
  FiniteModel ms = model, me = model;
  ms.flavor = Flavor::States;
  me.flavor = Flavor::Exceptions;
  Theory S = build_states_theory(model.indices);
  Theory E = build_exceptions_theory(model.indices);
  SuiteReport r;
  r.suite = "duality-semantic";

  auto pair_up = [&](LawCheck s, LawCheck e) {
    s.dual = e.name;
    e.dual = s.name;
    r.laws.push_back(std::move(s));
    r.laws.push_back(std::move(e));
  };
  auto fact = [](const std::string& name, const std::string& what, bool holds, std::size_t points) {
    LawCheck c;
    c.name = name;
    c.equation = what;
    c.result.holds = holds;
    c.result.points = points;
    return c;
  };

  // carriers: St is the product of the Val_i, Exc the sum of the Par_i
  std::size_t prod = 1, sum = 0;
  for (int n : model.sizes) {
    prod *= static_cast<std::size_t>(n);
    sum += static_cast<std::size_t>(n);
  }
  auto sts = all_states(ms);
  auto exs = all_exceptions(me);
  pair_up(fact("St", "|St| = " + std::to_string(prod), sts.size() == prod, sts.size()),
          fact("Exc", "|Exc| = " + std::to_string(sum), exs.size() == sum, exs.size()));

  // lookups jointly separate states; throws have disjoint injective images
  bool separates = true;
  for (const auto& s : sts)
    for (const auto& t : sts) separates = separates && (observational_equiv(ms, s, t) == (s == t));
  std::set<std::string> images;
  std::size_t thrown = 0;
  for (const auto& i : model.indices)
    for (const auto& a : elements(me, ty::param(i))) {
      images.insert(to_string(eval_exceptions(me, E.thrower(i), Outcome{false, {}, a})));
      ++thrown;
    }
  pair_up(fact("lookups", "l_i(s) = l_i(s') for all i iff s = s'", separates, sts.size() * sts.size()),
          fact("throws", "t_i(a) = t_j(b) iff i = j and a = b", images.size() == thrown, thrown));

  for (const auto& a : S.axioms) {
    std::string dn = dual_axiom_name(a.name, Flavor::States);
    auto k = E.find_axiom(dn);
    if (!k) throw DecorError(ErrorCode::NameError, "no dual axiom for " + a.name);
    LawCheck s = run(ms, a.name, a.eq);
    LawCheck e = run(me, dn, E.axioms[*k].eq);
    Equation mapped = dualize_equation(a.eq, Flavor::States);
    if (compare(mapped, E.axioms[*k].eq) != 0) {
      e.result.holds = false;
      e.note = "dual equation does not match " + to_string(mapped);
    }
    pair_up(std::move(s), std::move(e));
  }
  if (model.indices.size() >= 2) {
    for (auto& s : seven(ms, S)) {
      const std::string eq_name = s.name;
      auto goals = seven_equation_goals(S, model.indices[0], model.indices[1]);
      const auto& g = *std::find_if(goals.begin(), goals.end(),
                                    [&](const SevenGoal& x) { return eq_name == std::to_string(x.number) + " " + x.name; });
      LawCheck e = run(me, "dual " + s.name, dualize_equation(g.direct, Flavor::States));
      pair_up(std::move(s), std::move(e));
    }
  }
  total(r);
  return r;
}

}  // namespace

SuiteReport verify_law_suite(const FiniteModel& m, const std::string& suite) {
  if (suite == "states-seven") return states_seven(m);
  if (suite == "states-laws") return states_laws(m);
  if (suite == "exceptions-laws") return exceptions_laws(m);
  if (suite == "nesting-matrix") return nesting_matrix(m);
  if (suite == "duality-semantic") return duality_semantic(m);
  throw DecorError(ErrorCode::SuiteUnknown, suite);
}

}  // namespace decor
