#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "decor/dsl.hpp"
#include "support.hpp"

using namespace decor;

namespace {
ErrorCode parse_error(const std::string& text) {
  try {
    parse_script(text);
  } catch (const DecorError& e) {
    return e.code();
  }
  FAIL("script parsed: " << text);
  return ErrorCode::IllFormed;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const CommandResult& only(const Report& r) {
  REQUIRE(r.commands.size() == 1);
  return r.commands[0];
}
}  // namespace

TEST_CASE("theory declarations") {
  Script s = parse_script("theory S = states(x:3, y:2)\ntheory E = dual(S)\n");
  const Theory& S = s.env.theories.at("S");
  CHECK(S.flavor == Flavor::States);
  CHECK(S == build_states_theory({"x", "y"}));
  CHECK(s.env.carriers.at("S") == std::vector<int>{3, 2});
  CHECK(s.env.theories.at("E") == build_exceptions_theory({"x", "y"}));
  CHECK(s.env.carriers.at("E") == std::vector<int>{3, 2});
  CHECK(s.positions[1].line == 2);
}

TEST_CASE("lemma command") {
  Script s = parse_script("theory S = states(x:3, y:2)\nlemma annihilation(x) in S");
  const auto& c = std::get<Command>(s.decls[1]);
  CHECK(c.kind == Command::Kind::Lemma);
  CHECK(c.name == "annihilation");
  CHECK(c.theory == "S");
  REQUIRE(c.args.size() == 1);
  CHECK(std::get<std::string>(c.args[0]) == "x");
}

TEST_CASE("syntax and name errors") {
  try {
    parse_script("theory S = states(x:3)\ncheck equation : l_x . u_x =~ id[V_x]");
    FAIL("parsed");
  } catch (const DecorError& e) {
    CHECK(e.code() == ErrorCode::SyntaxError);
    CHECK(std::string(e.what()).find("2:28: expected '==' or '~~'") != std::string::npos);
  }
  CHECK(parse_error("lemma annihilation(x)") == ErrorCode::NameError);
  CHECK(parse_error("theory S = states(x:2)\nterm t = l_z") == ErrorCode::NameError);
  CHECK(parse_error("theory S = states(x:2)\nterm t = u_x . u_x") == ErrorCode::CompositionMismatch);
  CHECK(parse_error("theory S = states(x:2) { gen id : 1 -> 1 pure }") == ErrorCode::NameError);
  CHECK(parse_error("theory S = states(x:2) { gen f : 1 -> 1 catcher }") == ErrorCode::FlavorViolation);
  CHECK(parse_error("theory S = states(x:0)") == ErrorCode::BadParams);
  CHECK(parse_error("theory S = states(x:2)\nproof p { s1: axiom(A9) }") == ErrorCode::NameError);
  CHECK(parse_error("theory S = states(x:2)\nproof p { s1: bogus() }") == ErrorCode::NameError);
}

TEST_CASE("paper commands through execute") {
  Script s = parse_script(
      "theory S = states(x:3, y:2)\n"
      "theory E = exceptions(i:2, j:2) { gen g : P_i -> P_j pure }\n"
      "verify states-seven in S\n"
      "check proof pr1 in S\n"
      "eval in E: handle(raise(i), i => g) on (i: a0)\n");
  Report r = execute(s);
  REQUIRE(r.commands.size() == 3);
  CHECK(r.commands[0].status == Status::Ok);
  CHECK(r.commands[0].summary == "7/7 checks as expected, 144 points");
  CHECK(r.commands[1].status == Status::Ok);
  CHECK(r.commands[1].data["check"]["valid"] == true);
  CHECK(r.commands[2].summary == "g(a0)");
  CHECK(exit_code(r) == 0);
}

TEST_CASE("failures are reported, not thrown") {
  Script s = parse_script(
      "theory S = states(x:3, y:2)\n"
      "check equation : l_x . u_x == id[V_x]\n"
      "lemma commutation-6(x, x)\n"
      "lemma annihilation(y)\n");
  Report r = execute(s);
  REQUIRE(r.commands.size() == 3);
  CHECK(r.commands[0].status == Status::Fail);
  CHECK(r.commands[0].text == "at a=0, s=(1,0): lhs gives a=0, s=(0,0), rhs gives a=0, s=(1,0)\n");
  CHECK(r.commands[1].status == Status::Error);
  CHECK(r.commands[2].status == Status::Ok);
  CHECK(exit_code(r) == 1);
  Config ff;
  ff.fail_fast = true;
  Report r2 = execute(s, ff);
  CHECK(r2.commands.size() == 1);
  CHECK(r2.aborted);
}

TEST_CASE("user proofs") {
  std::string base = "theory S = states(x:3, y:2)\n";
  Report ok = execute(parse_script(base +
                                   "proof p : l_x . u_x . l_x ~~ l_x {\n"
                                   "  s1: axiom(A1_x)\n  s2: w-subs(t = l_x) from s1\n}\n"
                                   "check proof p\n"));
  CHECK(only(ok).status == Status::Ok);
  Report bad = execute(parse_script(base +
                                    "proof p {\n  s1: axiom(A1_x)\n  s2: w-repl-pure(t = u_x) from s1\n}\n"
                                    "check proof p\n"));
  CHECK(only(bad).status == Status::Fail);
  CHECK(only(bad).summary.find("step s2") != std::string::npos);
  Report wrong_goal = execute(parse_script(base + "proof p : l_x . u_x == id[V_x] {\n  s1: axiom(A1_x)\n}\ncheck proof p\n"));
  CHECK(only(wrong_goal).status == Status::Fail);
}

TEST_CASE("model overrides and eval input checks") {
  std::string base = "theory S = states(x:3, y:2)\n";
  Config c;
  c.model["x"] = 2;
  Report r = execute(parse_script(base + "check equation : l_x . u_x ~~ id[V_x]\n"), c);
  CHECK(only(r).points == 8);
  Report bad = execute(parse_script(base + "eval : u_x on 5 at (0, 0)\n"));
  CHECK(only(bad).status == Status::Error);
  Report st = execute(parse_script(base + "eval : u_x on 2\n"));
  CHECK(only(st).summary == "((), (2,0))");
}

TEST_CASE("json reports are deterministic and versioned") {
  std::string text = slurp(DECOR_SOURCE_DIR "/tests/scripts/examples.decor");
  Script s = parse_script(text);
  std::string a = emit_report(execute(s), Format::Json);
  std::string b = emit_report(execute(parse_script(text)), Format::Json);
  CHECK(a == b);
  json j = json::parse(a);
  CHECK(j["schema"] == "decor-report/1");
  CHECK(j["ok"] == true);
  std::string t = emit_report(execute(s), Format::Text);
  CHECK(t.find("[w-subs t=l_x]") != std::string::npos);
}

TEST_CASE("round trip on the sample scripts") {
  for (const char* f : {"/tests/scripts/examples.decor", "/tests/scripts/failing.decor", "/docs/bank_account.decor"}) {
    CAPTURE(f);
    Script s = parse_script(slurp(std::string(DECOR_SOURCE_DIR) + f));
    std::string printed = print_script(s);
    Script t = parse_script(printed);
    CHECK(t == s);
    CHECK(print_script(t) == printed);
  }
}

TEST_CASE("round trip on random scripts") {
  std::mt19937 rng(17);
  for (int round = 0; round < 30; ++round) {
    auto rt = testing::random_theory(rng);
    bool st = rt.th.flavor == Flavor::States;
    const auto& idx = st ? rt.th.locations : rt.th.constructors;
    std::string text = "theory T = " + std::string(st ? "states(" : "exceptions(");
    for (std::size_t k = 0; k < idx.size(); ++k) text += (k ? ", " : "") + idx[k] + ":" + std::to_string(rt.model.sizes[k]);
    text += ")\n";
    testing::TermPool pool(rt.th, rng);
    for (int k = 0; k < 10; ++k) {
      Term f = pool.pick(), g = pool.partner(f);
      std::string n = std::to_string(k);
      text += "term t" + n + " = " + to_string(f) + "\n";
      text += "goal g" + n + " : " + to_string(f) + (k % 2 ? " == " : " ~~ ") + to_string(g) + "\n";
      text += "check equation g" + n + "\n";
    }
    text += "lemma interaction-3(x)\nmodel T (x: 2)\nprove : " + to_string(pool.pick()) + " ~~ " +
            to_string(pool.pick()) + " budget 1\n";
    CAPTURE(text);
    Script s;
    try {
      s = parse_script(text);
    } catch (const DecorError& e) {
      // the prove line pairs two unrelated terms and may not typecheck
      CHECK(e.code() != ErrorCode::SyntaxError);
      continue;
    }
    Script t = parse_script(print_script(s));
    CHECK(t == s);
    for (int k = 0; k < 10; ++k) {
      const auto& g = std::get<GoalDecl>(s.decls[3 * k + 2]);
      CHECK(compare(g.eq, std::get<GoalDecl>(t.decls[3 * k + 2]).eq) == 0);
    }
  }
}

TEST_CASE("bank account goal") {
  Script s = parse_script(slurp(DECOR_SOURCE_DIR "/docs/bank_account.decor"));
  Report r = execute(s);
  REQUIRE(r.commands.size() == 2);
  CHECK(r.commands[0].status == Status::Ok);
  CHECK(r.commands[1].summary == "((), (plus((seven(()), 2))))");
  auto m = model_of(s.env, "Bank");
  CHECK_FALSE(check_equation(m, s.env.goals.at("deposit_then_read_strong").eq).holds);
}

TEST_CASE("value literals") {
  CHECK(to_string(parse_value("(2, a0)")) == "(2, a0)");
  CHECK(parse_value("inl(())") == Value::inl(Value::unit()));
  Value e = parse_value("x!(a1)");
  CHECK(e.tag == 'e');
  CHECK(e.sym == "x");
  CHECK_THROWS_AS(parse_value("(1,"), DecorError);
}
