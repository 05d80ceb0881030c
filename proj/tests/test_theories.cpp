#include <doctest.h>

#include <utility>

#include "support.hpp"

using namespace decor;

namespace {
std::string s(const Equation& e) { return to_string(e); }
}  // namespace

TEST_CASE("semi-pure product laws") {
  Theory S = build_states_theory({"x", "y"});
  auto sp = semi_pure_product(S, tm::id(ty::value("x")), S.update("y"), true);
  CHECK(to_string(sp.term) == "lsemi(id[V_x], u_y)");
  CHECK(s(sp.p1) == "p1[(V_x * 1)] . lsemi(id[V_x], u_y) ~~ id[V_x] . p1[(V_x * V_y)]");
  CHECK(s(sp.p2) == "p2[(V_x * 1)] . lsemi(id[V_x], u_y) == u_y . p2[(V_x * V_y)]");

  // mirrored form: the oracle must accept both registered laws
  auto m = make_model(S, {2, 2});
  auto sq = semi_pure_product(S, tm::id(ty::value("y")), S.update("x"), false);
  CHECK(s(sq.p1) == "p2[(1 * V_y)] . rsemi(u_x, id[V_y]) ~~ id[V_y] . p2[(V_x * V_y)]");
  CHECK(s(sq.p2) == "p1[(1 * V_y)] . rsemi(u_x, id[V_y]) == u_x . p1[(V_x * V_y)]");
  CHECK(check_equation(m, sq.p1).holds);
  CHECK(check_equation(m, sq.p2).holds);
  CHECK(check_equation(m, sp.p1).holds);
  CHECK(check_equation(m, sp.p2).holds);

  // id x| id is the identity
  TypeExpr P = ty::prod(ty::value("x"), ty::value("y"));
  Term ii = tm::semiprod(tm::id(ty::value("x")), tm::id(ty::value("y")), true);
  CHECK(check_equation(m, {ii, tm::id(P), EqKind::Strong}).holds);
}

TEST_CASE("seven laws as goals") {
  Theory S = build_states_theory({"x", "y"});
  auto goals = seven_equation_goals(S, "x", "y");
  REQUIRE(goals.size() == 7);
  CHECK(s(goals[3].direct) == "l_x . u_x ~~ id[V_x]");
  CHECK(s(goals[0].direct) == "u_x . l_x == id[1]");
  REQUIRE(goals[0].observed.size() == 2);
  CHECK(s(goals[0].observed[1]) == "l_y . u_x . l_x ~~ l_y . id[1]");
  CHECK(s(goals[1].direct) == "l_x . <>[V_x] . l_x == l_x");
  CHECK(s(goals[6].direct) == "l_y . u_x == cprod(l_y . <>[V_x] | u_x)");
  CHECK(seven_equation_goals(S, "x", "y", "y")[0].observed.size() == 1);
}

TEST_CASE("states lemma conclusions") {
  Theory S = build_states_theory({"x", "y"});
  auto one = [&](const char* id) { return to_string(derive_lemma(S, id, {std::string("x")}).conclusion); };
  CHECK(one("annihilation") == "u_x . l_x == id[1]");
  CHECK(one("interaction-3") == "u_x . p2[(1 * V_x)] . rsemi(u_x, id[V_x]) == u_x . p2[(V_x * V_x)]");
  CHECK(to_string(derive_lemma(S, "commutation-6", {std::string("x"), std::string("y")}).conclusion) ==
        "u_y . p2[(1 * V_y)] . rsemi(u_x, id[V_y]) == u_x . p1[(V_x * 1)] . lsemi(id[V_x], u_y)");
}

TEST_CASE("commutation-6 in three locations embeds the k != i,j cases") {
  Theory S = build_states_theory({"x", "y", "z"});
  Derivation d = derive_lemma(S, "commutation-6", {std::string("x"), std::string("y")});
  std::vector<std::string> labels;
  std::function<void(const Derivation&)> walk = [&](const Derivation& n) {
    if (!n.label.empty()) labels.push_back(n.label);
    for (const auto& p : n.premises) walk(p);
  };
  walk(d);
  auto has = [&](const std::string& l) { return std::find(labels.begin(), labels.end(), l) != labels.end(); };
  CHECK(has("Pr4"));
  CHECK(has("Pr7"));
  CHECK(has("Pr8"));
  CHECK(check_derivation(S, d).valid);
}

TEST_CASE("exceptions lemma conclusions") {
  Theory E = build_exceptions_theory({"i", "j"});
  CHECK(to_string(derive_lemma(E, "key-annihilation", {std::string("i")}).conclusion) == "t_i . c_i == id[0]");
  CHECK(to_string(derive_lemma(E, "catch-throw", {std::string("i")}).conclusion) ==
        "[][P_i] . t_i . c_i == [][P_i] . id[0]");
}

TEST_CASE("raise and handler shapes") {
  Theory E = build_exceptions_theory({"i", "j"});
  TypeExpr Y = ty::named("Y");
  E.add_generator(tm::gen("f", ty::named("A"), Y, 1));
  E.add_generator(tm::gen("g", ty::param("i"), Y, 1));
  E.add_generator(tm::gen("h", ty::param("j"), Y, 1));
  E.add_generator(tm::gen("k", ty::unit(), Y, 1));
  Term f = *E.find_generator("f"), g = *E.find_generator("g"), h = *E.find_generator("h"),
       k = *E.find_generator("k");
  const Theory& cE = E;
  CHECK(to_string(handle_term(cE, HandlerSpec{f, {{"i", g}}, std::nullopt}).result) ==
        "down(case(id[Y] | g . c_i) . f)");
  Handled two = handle_term(cE, HandlerSpec{f, {{"i", g}, {"j", h}}, std::nullopt});
  CHECK(to_string(two.chain) == "case(g | h . c_j) . c_i");
  CHECK(to_string(two.result) == "down(case(id[Y] | case(g | h . c_j) . c_i) . f)");
  CHECK_FALSE(E.find_generator("c_all"));
  CHECK(to_string(handle_term(E, HandlerSpec{f, {}, k}).result) == "down(case(id[Y] | k . c_all) . f)");
  CHECK(E.find_generator("c_all"));
  CHECK(E.find_axiom("C_all_i"));
  CHECK_THROWS_AS(handle_term(cE, HandlerSpec{f, {}, std::nullopt}), DecorError);
  CHECK_THROWS_AS(handle_term(cE, HandlerSpec{f, {{"q", g}}, std::nullopt}), DecorError);

  // raise into 0 is the throw itself
  auto m = make_model(build_exceptions_theory({"i", "j"}), {2, 2});
  CHECK(check_equation(m, {raise_term(E, "i", ty::empty()), E.thrower("i"), EqKind::Strong}).holds);
}

TEST_CASE("semi-pure coproduct laws") {
  Theory E = build_exceptions_theory({"i", "j"});
  auto sc = semi_pure_coproduct(E, tm::id(ty::param("i")), E.catcher("j"), true);
  CHECK(to_string(sc.term) == "lsum(id[P_i], c_j)");
  CHECK(s(sc.p1) == "lsum(id[P_i], c_j) . in1[(P_i + 0)] ~~ in1[(P_i + P_j)] . id[P_i]");
  CHECK(s(sc.p2) == "lsum(id[P_i], c_j) . in2[(P_i + 0)] == in2[(P_i + P_j)] . c_j");
  auto m = make_model(E, {2, 2});
  CHECK(check_equation(m, sc.p1).holds);
  CHECK(check_equation(m, sc.p2).holds);
  TypeExpr C = ty::coprod(ty::param("i"), ty::param("j"));
  Term ii = tm::semicoprod(tm::id(ty::param("i")), tm::id(ty::param("j")), true);
  CHECK(check_equation(m, {ii, tm::id(C), EqKind::Strong}).holds);
}

TEST_CASE("every axiom and lemma conclusion holds in the (3,2) models") {
  testing::Catalog cat;
  for (const auto& item : cat.items) {
    CAPTURE(item.name);
    const Theory& th = *item.theory;
    std::vector<int> sizes = th.flavor == Flavor::States ? std::vector<int>(th.locations.size(), 2)
                                                         : std::vector<int>{3, 2};
    if (th.flavor == Flavor::States && th.locations.size() == 2) sizes = {3, 2};
    auto m = make_model(th, sizes, {{"A", 2}, {"B", 2}});
    CHECK(check_equation(m, item.d.conclusion.eq).holds);
  }
}
