#include <doctest.h>

#include <random>

#include "decor/expand.hpp"
#include "support.hpp"

using namespace decor;

TEST_CASE("erasure turns weak equations strong") {
  Theory S = build_states_theory({"x", "y"});
  CHECK(to_string(erase(S.axioms[0].eq)) == "l_x . u_x == id[V_x]");
  Theory P = erase(S);
  CHECK(P.flavor == Flavor::Plain);
  for (const auto& g : P.generators) CHECK(g->dec == 0);
  CHECK(erase(P) == P);
}

TEST_CASE("erased derivations are apparent-valid and erasure is idempotent") {
  testing::Catalog cat;
  for (const auto& item : cat.items) {
    CAPTURE(item.name);
    Theory P = erase(*item.theory);
    Derivation e = erase(item.d);
    CHECK(check_derivation(P, e).valid);
    CHECK(structurally_equal(erase(e), e));
  }
}

TEST_CASE("dualize generators and axioms") {
  Theory S = build_states_theory({"x", "y"});
  Term t = dualize_term(S.lookup("x"), Flavor::States);
  CHECK(to_string(t) == "t_x");
  CHECK(t->dec == 1);
  CHECK(same(dom(t), ty::param("x")));
  CHECK(same(cod(t), ty::empty()));
  Theory E = build_exceptions_theory({"x", "y"});
  CHECK(compare(dualize_equation(S.axioms[2].eq, Flavor::States), E.axioms[2].eq) == 0);
  CHECK(dual_axiom_name("A2_x_y", Flavor::States) == "B2_x_y");
  CHECK(dualize_theory(S) == E);
  CHECK(dualize_theory(S).name == "dual(S)");
  CHECK(dualize_theory(dualize_theory(S)).name == "S");
  CHECK_THROWS_AS(dualize_theory(erase(S)), DecorError);
}

TEST_CASE("duality map renames indices") {
  Theory S = build_states_theory({"x", "y"});
  DualityMap m{{{"x", "i"}, {"y", "j"}}};
  CHECK(dualize_theory(S, m) == build_exceptions_theory({"i", "j"}));
  CHECK(dualize_theory(dualize_theory(S, m), m) == S);
}

TEST_CASE("dualize is an involution on built-in artifacts") {
  testing::Catalog cat;
  for (const Theory* th : {&cat.S2, &cat.S3, &cat.E}) CHECK(dualize_theory(dualize_theory(*th)) == *th);
  for (const auto& item : cat.items) {
    CAPTURE(item.name);
    Flavor f = item.theory->flavor;
    Theory dth = dualize_theory(*item.theory);
    Derivation dd = dualize_derivation(*item.theory, item.d);
    CHECK(structurally_equal(dualize_derivation(dth, dd), item.d));
    CHECK(compare(dualize_equation(dualize_equation(item.d.conclusion.eq, f), dth.flavor),
                  item.d.conclusion.eq) == 0);
  }
  // a semi-pure product instance round-trips too
  Theory S = cat.S2;
  auto sp = semi_pure_product(S, tm::id(ty::value("x")), S.update("y"));
  CHECK(same(dualize_term(dualize_term(sp.term, Flavor::States), Flavor::Exceptions), sp.term));
}

TEST_CASE("dual states proofs are exceptions proofs") {
  Theory S = build_states_theory({"x", "y", "z"});
  Theory E = build_exceptions_theory({"x", "y", "z"});
  const std::vector<std::pair<std::string, LemmaArgs>> cases{
      {"annihilation", {std::string("x")}},
      {"interaction-3", {std::string("y")}},
      {"commutation-6", {std::string("x"), std::string("y")}},
      {"pr4", {std::string("x"), std::string("y"), std::string("z")}},
      {"pr7", {std::string("x"), std::string("y"), std::string("z")}},
  };
  for (const auto& [id, args] : cases) {
    CAPTURE(id);
    Derivation d = dualize_derivation(S, derive_lemma(S, id, args));
    CHECK(check_derivation(E, d).valid);
  }
  Derivation ka = derive_lemma(E, "key-annihilation", {std::string("x")});
  CHECK(structurally_equal(dualize_derivation(S, derive_lemma(S, "annihilation", {std::string("x")})), ka));
}

TEST_CASE("states expansion") {
  Theory S = build_states_theory({"x", "y"});
  XTerm u = expand_states(S.update("x"));
  CHECK(to_string(u) == "ut_x");
  CHECK(to_string(xdom(u)) == "(V_x * S)");
  CHECK(to_string(xcod(u)) == "S");
  XTerm l = expand_states(S.lookup("x"));
  CHECK(to_string(l) == "lt_x");
  CHECK(to_string(xdom(l)) == "S");
  CHECK(to_string(expand_states(S.axioms[0].eq)) == "lt_x . ut_x == p1[(V_x * S)]");
  CHECK(expand(S).name == "S_expl");
}

TEST_CASE("exceptions expansion") {
  Theory E = build_exceptions_theory({"x", "y"});
  XTerm t = expand_exceptions(E.thrower("x"));
  CHECK(to_string(t) == "tt_x");
  CHECK(to_string(xcod(t)) == "E");
  CHECK(to_string(expand_exceptions(raise_term(E, "x", ty::param("y")))) == "in2[(P_y + E)] . tt_x");
  CHECK(to_string(expand_exceptions(E.axioms[0].eq)) == "ct_x . tt_x == in1[(P_x + E)]");
}

// The explicit interpretation of the expanded term agrees with the direct
// decorated semantics on every point.
TEST_CASE("expansion commutes with evaluation on random terms") {
  std::mt19937 rng(3);
  std::size_t checked = 0;
  for (int round = 0; round < 12; ++round) {
    auto rt = testing::random_theory(rng);
    testing::TermPool pool(rt.th, rng, 6);
    const FiniteModel& m = rt.model;
    for (const auto& t : pool.terms()) {
      XTerm F = expand_full(t, m.flavor);
      TypeExpr X = dom(t), Y = cod(t);
      if (m.flavor == Flavor::States) {
        for (const auto& a : elements(m, X))
          for (const auto& s : all_states(m)) {
            auto [v, s2] = eval_states(m, t, a, s);
            CHECK(xeval(m, F, encode_point(m, X, a, s)) == encode_point(m, Y, v, s2));
            ++checked;
          }
      } else {
        std::vector<Outcome> ins;
        for (const auto& a : elements(m, X)) ins.push_back({false, {}, a});
        for (const auto& e : all_exceptions(m)) ins.push_back(e);
        for (const auto& o : ins) {
          CHECK(xeval(m, F, encode_outcome(X, o)) == encode_outcome(Y, eval_exceptions(m, t, o)));
          ++checked;
        }
      }
    }
  }
  CHECK(checked > 1000);
}
