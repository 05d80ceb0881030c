#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "decor/dsl.hpp"
#include "decor/error.hpp"
#include "decor/translate.hpp"

using namespace decor;

namespace {

struct Options {
  std::string script;
  std::vector<std::string> model;
  std::string format = "text";
  int budget = 4;
  bool fail_fast = false;
  bool timing = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DecorError(ErrorCode::NameError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Config make_config(const Options& o) {
  Config c;
  c.budget = o.budget;
  c.fail_fast = o.fail_fast;
  c.timing = o.timing;
  for (const auto& kv : o.model) {
    auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0)
      throw DecorError(ErrorCode::BadParams, "--model expects k=v, got " + kv);
    c.model[kv.substr(0, eq)] = std::stoi(kv.substr(eq + 1));
  }
  return c;
}

int run_commands(const Options& o, Config::Filter filter) {
  Script s = parse_script(read_file(o.script));
  Config c = make_config(o);
  c.filter = filter;
  Report r = execute(s, c);
  std::cout << emit_report(r, o.format == "json" ? Format::Json : Format::Text, o.timing);
  return exit_code(r);
}

std::vector<int> carriers_of(const Script& s, const std::string& th) {
  auto it = s.env.carriers.find(th);
  return it == s.env.carriers.end() ? std::vector<int>{} : it->second;
}

std::string explicit_text(const ExplicitTheory& th) {
  std::string out = "explicit " + th.name + " {\n";
  for (const auto& g : th.generators)
    out += "  gen " + to_string(g) + " : " + to_string(xdom(g)) + " -> " + to_string(xcod(g)) + "\n";
  for (const auto& [n, e] : th.axioms) out += "  axiom " + n + " : " + to_string(e) + "\n";
  return out + "}\n";
}

// Prints the translation of every declared theory.
int run_translation(const Options& o, const std::string& what) {
  Script s = parse_script(read_file(o.script));
  json all = json::array();
  std::string text;
  int code = 0;
  for (const auto& [name, th] : s.env.theories) {
    try {
      if (what == "erase") {
        Theory e = erase(th);
        text += print_theory(e) + "\n";
        all.push_back(to_json(e));
      } else if (what == "dualize") {
        Theory d = dualize_theory(th);
        text += print_theory(d, carriers_of(s, name)) + "\n";
        all.push_back(to_json(d));
      } else {
        ExplicitTheory x = expand(th);
        text += explicit_text(x);
        all.push_back(to_json(x));
      }
    } catch (const DecorError& e) {
      text += "# " + name + ": " + e.what() + "\n";
      all.push_back({{"name", name}, {"error", e.what()}});
      code = 1;
    }
  }
  if (o.format == "json") std::cout << all.dump(2) << "\n";
  else std::cout << text;
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"decor: decorated equational logic for states and exceptions"};
  app.require_subcommand(1);
  Options o;
  std::map<std::string, CLI::App*> subs;
  const std::vector<std::pair<std::string, std::string>> kinds{
      {"check", "run every command of the script"},
      {"verify", "run only the verify commands"},
      {"eval", "run only the eval commands"},
      {"erase", "print the decoration erasure of each theory"},
      {"expand", "print the explicit form of each theory"},
      {"dualize", "print the dual of each theory"}};
  for (const auto& [k, help] : kinds) {
    CLI::App* sub = app.add_subcommand(k, help);
    sub->add_option("script", o.script, "script file")->required();
    sub->add_option("--model", o.model, "carrier size override, k=v")->expected(1, -1);
    sub->add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--budget", o.budget, "saturation budget for prove");
    sub->add_flag("--fail-fast", o.fail_fast, "stop at the first failing command");
    sub->add_flag("--timing", o.timing, "show timings in text reports");
    subs[k] = sub;
  }
  CLI11_PARSE(app, argc, argv);
  try {
    if (subs["check"]->parsed()) return run_commands(o, Config::Filter::All);
    if (subs["verify"]->parsed()) return run_commands(o, Config::Filter::Verify);
    if (subs["eval"]->parsed()) return run_commands(o, Config::Filter::Eval);
    for (const char* k : {"erase", "expand", "dualize"})
      if (subs[k]->parsed()) return run_translation(o, k);
  } catch (const DecorError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
