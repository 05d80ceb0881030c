#include <algorithm>
#include <chrono>
#include <functional>

#include "decor/dsl.hpp"
#include "decor/error.hpp"

namespace decor {

const char* status_name(Status s) {
  switch (s) {
    case Status::Ok: return "ok";
    case Status::Fail: return "FAIL";
    case Status::Error: return "ERROR";
  }
  return "?";
}

std::size_t Report::nodes() const {
  std::size_t n = 0;
  for (const auto& c : commands) n += c.nodes;
  return n;
}

std::size_t Report::points() const {
  std::size_t n = 0;
  for (const auto& c : commands) n += c.points;
  return n;
}

int exit_code(const Report& r) {
  for (const auto& c : r.commands)
    if (c.status != Status::Ok) return 1;
  return r.aborted ? 1 : 0;
}

namespace {

const char* kind_name(Command::Kind k) {
  switch (k) {
    case Command::Kind::Lemma: return "lemma";
    case Command::Kind::Verify: return "verify";
    case Command::Kind::CheckProof: return "check-proof";
    case Command::Kind::CheckEquation: return "check-equation";
    case Command::Kind::Prove: return "prove";
    case Command::Kind::Eval: return "eval";
  }
  return "?";
}

const std::vector<std::string>& indices_of(const Theory& th) {
  return th.flavor == Flavor::Exceptions ? th.constructors : th.locations;
}

// Without explicit arguments a lemma is tried on index tuples of growing
// length, in index order; the first instance that builds is used.
Derivation derive_default(const Theory& th, const std::string& id, LemmaArgs& used) {
  const auto& idx = indices_of(th);
  std::optional<DecorError> first;
  try {
    used.clear();
    return derive_lemma(th, id, used);
  } catch (const DecorError& e) {
    if (e.code() == ErrorCode::UnknownLemma) throw;
    first = e;
  }
  for (std::size_t len = 1; len <= 3; ++len) {
    std::vector<std::size_t> pick(len, 0);
    while (true) {
      LemmaArgs a;
      for (auto k : pick) a.emplace_back(idx.empty() ? std::string() : idx[k]);
      try {
        Derivation d = derive_lemma(th, id, a);
        used = a;
        return d;
      } catch (const DecorError&) {
      }
      std::size_t p = len;
      while (p > 0 && ++pick[p - 1] == idx.size()) pick[--p] = 0;
      if (p == 0 || idx.empty()) break;
    }
  }
  throw *first;
}

std::string indent(const std::string& text, const std::string& pad = "    ") {
  std::string out;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    out += pad + text.substr(start, end - start) + "\n";
    start = end + 1;
  }
  return out;
}

// Parsed literals carry guessed tags; fix them against the expected type and
// check membership in the carrier.
Value conform(const FiniteModel& m, const TypeExpr& t, const Value& v) {
  Value out = v;
  std::function<void(Value&, const TypeExpr&)> go = [&](Value& x, const TypeExpr& ty) {
    switch (ty->kind) {
      case TypeKind::Prod:
        if (x.kind == Value::Kind::Pair) {
          go(x.kids[0], ty->left);
          go(x.kids[1], ty->right);
        }
        break;
      case TypeKind::Coprod:
        if (x.kind == Value::Kind::Inl) go(x.kids[0], ty->left);
        if (x.kind == Value::Kind::Inr) go(x.kids[0], ty->right);
        break;
      case TypeKind::Param:
        if (x.kind == Value::Kind::Atom) x = Value::atom_of(x.atom, 'p');
        break;
      case TypeKind::Value:
        if (x.kind == Value::Kind::Atom) x = Value::atom_of(x.atom, 'v');
        break;
      case TypeKind::Named:
        if (x.kind == Value::Kind::Atom) x = Value::atom_of(x.atom, 'n', ty->name);
        break;
      default: break;
    }
  };
  go(out, t);
  auto els = elements(m, t);
  if (std::find(els.begin(), els.end(), out) == els.end())
    throw DecorError(ErrorCode::BadParams, to_string(v) + " is not an element of " + to_string(t));
  return out;
}

struct Runner {
  const Script& script;
  const Config& cfg;

  const Theory& theory(const std::string& n) const {
    auto it = script.env.theories.find(n);
    if (it == script.env.theories.end()) throw DecorError(ErrorCode::NameError, "unknown theory " + n);
    return it->second;
  }

  FiniteModel model(const std::string& th) const { return model_of(script.env, th, cfg.model); }

  void derivation(CommandResult& r, const Theory& th, const Derivation& d, const std::optional<Equation>& goal) {
    CheckReport rep = check_derivation(th, d);
    r.nodes = rep.nodes;
    r.data["check"] = to_json(rep);
    r.data["conclusion"] = to_string(d.conclusion);
    r.data["derivation"] = to_json(d);
    r.text = render_tree(d);
    if (!rep.valid) {
      r.status = Status::Fail;
      r.summary = "rejected at " + rep.rule + ": " + rep.detail;
      return;
    }
    if (goal && !same_up_to_assoc(d.conclusion, Judgment::holds(*goal))) {
      r.status = Status::Fail;
      r.summary = "valid, but proves " + to_string(d.conclusion) + " instead of the stated goal";
      return;
    }
    r.summary = "valid, " + std::to_string(rep.nodes) + " nodes: " + to_string(d.conclusion);
  }

  void lemma(CommandResult& r, const Command& c) {
    const Theory& th = theory(c.theory);
    LemmaArgs args = c.args;
    Derivation d = c.has_args ? derive_lemma(th, c.name, args) : derive_default(th, c.name, args);
    json a = json::array();
    for (const auto& x : args) a.push_back(to_string(x));
    r.data["args"] = a;
    derivation(r, th, d, std::nullopt);
  }

  void check_proof(CommandResult& r, const Command& c) {
    auto p = script.env.proofs.find(c.name);
    if (p != script.env.proofs.end() && !c.has_args) {
      const Theory& th = theory(p->second.theory);
      Derivation d;
      try {
        d = build_proof(script.env, p->second);
      } catch (const DecorError& e) {
        r.status = Status::Fail;
        r.summary = std::string("rejected: ") + e.what();
        r.data["check"] = {{"valid", false}, {"detail", e.what()}};
        return;
      }
      derivation(r, th, d, p->second.goal);
      return;
    }
    lemma(r, c);
  }

  const Equation& equation(const Command& c) const {
    if (c.eq) return *c.eq;
    return script.env.goals.at(c.name).eq;
  }

  void check_equation(CommandResult& r, const Command& c) {
    FiniteModel m = model(c.theory);
    const Equation& e = equation(c);
    CheckResult res = decor::check_equation(m, e);
    r.points = res.points;
    r.data["equation"] = to_string(e);
    r.data["result"] = to_json(m, res);
    if (res.holds) {
      r.summary = "holds on " + std::to_string(res.points) + " points";
    } else {
      r.status = Status::Fail;
      r.summary = "fails";
      r.text = render_witness(m, *res.witness) + "\n";
    }
  }

  void prove(CommandResult& r, const Command& c) {
    const Theory& th = theory(c.theory);
    const Equation& e = equation(c);
    int budget = c.budget.value_or(cfg.budget);
    SaturationResult res = saturate_prove(th, e, budget);
    r.data["equation"] = to_string(e);
    r.data["budget"] = budget;
    r.data["facts"] = res.facts;
    r.data["rounds"] = res.rounds;
    if (!res.proof) {
      r.status = Status::Fail;
      r.data["result"] = "unknown";
      r.summary = "unknown after " + std::to_string(res.rounds) + " rounds (" + std::to_string(res.facts) + " facts)";
      return;
    }
    r.data["result"] = "proven";
    derivation(r, th, *res.proof, e);
    if (r.status == Status::Ok) r.summary = "proven in " + std::to_string(res.rounds) + " rounds, " + r.summary;
  }

  void verify(CommandResult& r, const Command& c) {
    FiniteModel m = model(c.theory);
    SuiteReport rep = verify_law_suite(m, c.name);
    r.points = rep.points;
    r.data["report"] = to_json(m, rep);
    std::size_t good = 0;
    for (const auto& l : rep.laws) {
      good += l.ok();
      std::string mark = l.skipped ? "skip" : (l.ok() ? "ok" : "FAIL");
      std::string res = l.skipped ? "skipped" : (l.result.holds ? "holds" : "fails");
      r.text += mark + "  " + l.name + ": " + res;
      if (!l.skipped && !l.expect_holds) r.text += " (expected)";
      if (!l.note.empty()) r.text += "  [" + l.note + "]";
      r.text += "\n";
      if (!l.ok() && l.result.witness) r.text += "      " + render_witness(m, *l.result.witness) + "\n";
    }
    for (const auto& n : rep.nesting) {
      good += n.ok();
      r.text += std::string(n.ok() ? "ok" : "FAIL") + "  " + n.scenario + ": " + n.got[0] + " | " + n.got[1] +
                " | " + n.got[2] + "\n";
    }
    std::size_t total = rep.laws.size() + rep.nesting.size();
    if (!rep.ok()) r.status = Status::Fail;
    r.summary = std::to_string(good) + "/" + std::to_string(total) + " checks as expected, " +
                std::to_string(rep.points) + " points";
  }

  void eval(CommandResult& r, const Command& c) {
    FiniteModel m = model(c.theory);
    TypeExpr x = dom(c.term);
    std::string out;
    if (m.flavor == Flavor::States) {
      if (c.exc) throw DecorError(ErrorCode::FlavorViolation, "exceptional input in a states theory");
      Value in = conform(m, x, c.input);
      State s;
      if (c.state) {
        if (c.state->size() != m.indices.size())
          throw DecorError(ErrorCode::BadParams, "state needs " + std::to_string(m.indices.size()) + " components");
        for (std::size_t k = 0; k < m.indices.size(); ++k)
          s.push_back(conform(m, ty::value(m.indices[k]), (*c.state)[k]));
      } else {
        s = all_states(m).front();
      }
      auto [v, s2] = eval_states(m, c.term, in, s);
      out = "(" + to_string(v) + ", " + to_string(s2) + ")";
      r.data["value"] = to_string(v);
      r.data["state"] = to_string(s2);
    } else {
      if (c.state) throw DecorError(ErrorCode::FlavorViolation, "state given in an exceptions theory");
      Outcome in;
      if (c.exc) {
        in = *c.exc;
        if (std::find(m.indices.begin(), m.indices.end(), in.ctor) == m.indices.end())
          throw DecorError(ErrorCode::UnknownConstructor, in.ctor);
        in.v = conform(m, ty::param(in.ctor), in.v);
      } else {
        in.v = conform(m, x, c.input);
      }
      Outcome o = eval_exceptions(m, c.term, in);
      out = to_string(o);
      r.data["exception"] = o.exc;
      r.data["outcome"] = out;
    }
    r.summary = out;
  }

  CommandResult run(const Command& c, std::size_t index, Pos pos) {
    CommandResult r;
    r.index = index;
    r.line = pos.line;
    r.command = print_decl(c);
    r.kind = kind_name(c.kind);
    r.data = json::object();
    auto t0 = std::chrono::steady_clock::now();
    try {
      switch (c.kind) {
        case Command::Kind::Lemma: lemma(r, c); break;
        case Command::Kind::Verify: verify(r, c); break;
        case Command::Kind::CheckProof: check_proof(r, c); break;
        case Command::Kind::CheckEquation: check_equation(r, c); break;
        case Command::Kind::Prove: prove(r, c); break;
        case Command::Kind::Eval: eval(r, c); break;
      }
    } catch (const DecorError& e) {
      r.status = Status::Error;
      r.summary = e.what();
      r.data["error"] = {{"code", code_name(e.code())}, {"message", e.what()}};
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
  }
};

bool selected(const Config& cfg, Command::Kind k) {
  switch (cfg.filter) {
    case Config::Filter::All: return true;
    case Config::Filter::Verify: return k == Command::Kind::Verify;
    case Config::Filter::Eval: return k == Command::Kind::Eval;
  }
  return true;
}

}  // namespace

Report execute(const Script& script, const Config& config) {
  Report rep;
  Runner run{script, config};
  for (std::size_t k = 0; k < script.decls.size(); ++k) {
    const auto* c = std::get_if<Command>(&script.decls[k]);
    if (!c || !selected(config, c->kind)) continue;
    Pos p = k < script.positions.size() ? script.positions[k] : Pos{};
    rep.commands.push_back(run.run(*c, rep.commands.size() + 1, p));
    if (config.fail_fast && rep.commands.back().status != Status::Ok) {
      rep.aborted = true;
      break;
    }
  }
  return rep;
}

std::string emit_report(const Report& r, Format f, bool timing) {
  std::size_t ok = 0, fail = 0, err = 0;
  for (const auto& c : r.commands) {
    ok += c.status == Status::Ok;
    fail += c.status == Status::Fail;
    err += c.status == Status::Error;
  }
  if (f == Format::Json) {
    json j;
    j["schema"] = "decor-report/1";
    j["ok"] = exit_code(r) == 0;
    j["aborted"] = r.aborted;
    j["counters"] = {{"commands", r.commands.size()}, {"ok", ok}, {"failed", fail}, {"errors", err},
                     {"nodes", r.nodes()}, {"points", r.points()}};
    j["commands"] = json::array();
    for (const auto& c : r.commands) {
      json x;
      x["index"] = c.index;
      x["line"] = c.line;
      x["kind"] = c.kind;
      x["command"] = c.command;
      x["status"] = status_name(c.status);
      x["summary"] = c.summary;
      x["nodes"] = c.nodes;
      x["points"] = c.points;
      x["data"] = c.data;
      j["commands"].push_back(std::move(x));
    }
    return j.dump(2) + "\n";
  }
  std::string out;
  double total = 0;
  for (const auto& c : r.commands) {
    total += c.seconds;
    out += "[" + std::to_string(c.index) + "] " + status_name(c.status) + "  " + c.command + "  (line " +
           std::to_string(c.line) + ")\n";
    out += "    " + c.summary;
    if (timing) out += "  [" + std::to_string(c.seconds * 1000).substr(0, 6) + " ms]";
    out += "\n";
    out += indent(c.text, "      ");
  }
  out += std::to_string(r.commands.size()) + " commands: " + std::to_string(ok) + " ok, " + std::to_string(fail) +
         " failed, " + std::to_string(err) + " errors; " + std::to_string(r.nodes()) + " nodes checked, " +
         std::to_string(r.points()) + " points enumerated";
  if (r.aborted) out += "; stopped early (--fail-fast)";
  if (timing) out += "; " + std::to_string(total).substr(0, 6) + " s";
  return out + "\n";
}

}  // namespace decor
