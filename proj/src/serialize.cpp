#include "decor/serialize.hpp"

#include <cctype>
#include <functional>

namespace decor {

std::string to_string(const Meta& m) {
  if (auto* t = std::get_if<Term>(&m)) return to_string(*t);
  if (auto* t = std::get_if<TypeExpr>(&m)) return to_string(*t);
  return std::get<std::string>(m);
}

namespace {
json inst_json(const Inst& inst) {
  json j = json::object();
  for (const auto& [k, v] : inst) j[k] = to_string(v);
  return j;
}

bool plain_name(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

std::string quote_name(const std::string& s) { return plain_name(s) ? s : json(s).dump(); }
}  // namespace

json to_json(const Derivation& d) {
  json j;
  j["rule"] = to_string(d.rule);
  j["conclusion"] = to_string(d.conclusion);
  if (!d.inst.empty()) j["inst"] = inst_json(d.inst);
  if (!d.label.empty()) j["label"] = d.label;
  if (!d.premises.empty()) {
    j["premises"] = json::array();
    for (const auto& p : d.premises) j["premises"].push_back(to_json(p));
  }
  return j;
}

json to_json(const CheckReport& r) {
  json j;
  j["valid"] = r.valid;
  j["nodes"] = r.nodes;
  if (!r.valid) {
    j["path"] = r.path;
    j["rule"] = r.rule;
    j["detail"] = r.detail;
  }
  return j;
}

json to_json(const FiniteModel& m, const Witness& w) {
  json j;
  j["at"] = to_string(m, w.at);
  j["lhs"] = to_string(m, w.lhs);
  j["rhs"] = to_string(m, w.rhs);
  return j;
}

json to_json(const FiniteModel& m, const CheckResult& r) {
  json j;
  j["holds"] = r.holds;
  j["points"] = r.points;
  if (r.witness) j["witness"] = to_json(m, *r.witness);
  return j;
}

json to_json(const FiniteModel& m, const SuiteReport& r) {
  json j;
  j["suite"] = r.suite;
  j["ok"] = r.ok();
  j["points"] = r.points;
  j["laws"] = json::array();
  for (const auto& l : r.laws) {
    json x;
    x["name"] = l.name;
    if (!l.equation.empty()) x["equation"] = l.equation;
    if (l.skipped) {
      x["skipped"] = true;
    } else {
      x["expect"] = l.expect_holds ? "holds" : "fails";
      x["result"] = to_json(m, l.result);
    }
    if (!l.dual.empty()) x["dual"] = l.dual;
    if (!l.note.empty()) x["note"] = l.note;
    x["ok"] = l.ok();
    j["laws"].push_back(std::move(x));
  }
  if (!r.nesting.empty()) {
    j["nesting"] = json::array();
    for (const auto& n : r.nesting) {
      json x;
      x["scenario"] = n.scenario;
      x["got"] = n.got;
      x["expected"] = n.expected;
      x["ok"] = n.ok();
      j["nesting"].push_back(std::move(x));
    }
  }
  return j;
}

json to_json(const Theory& th) {
  json j;
  j["name"] = th.name;
  j["flavor"] = flavor_name(th.flavor);
  j["locations"] = th.locations;
  j["constructors"] = th.constructors;
  j["generators"] = json::array();
  for (const auto& g : th.generators) {
    json x;
    x["name"] = g->name;
    x["dom"] = to_string(g->dom);
    x["cod"] = to_string(g->cod);
    x["level"] = g->dec;
    j["generators"].push_back(std::move(x));
  }
  j["axioms"] = json::array();
  for (const auto& a : th.axioms) j["axioms"].push_back({{"name", a.name}, {"equation", to_string(a.eq)}});
  return j;
}

json to_json(const ExplicitTheory& th) {
  json j;
  j["name"] = th.name;
  j["source"] = flavor_name(th.source);
  j["generators"] = json::array();
  for (const auto& g : th.generators)
    j["generators"].push_back({{"name", to_string(g)}, {"dom", to_string(xdom(g))}, {"cod", to_string(xcod(g))}});
  j["axioms"] = json::array();
  for (const auto& [n, e] : th.axioms) j["axioms"].push_back({{"name", n}, {"equation", to_string(e)}});
  return j;
}

std::string render_tree(const Derivation& d) {
  std::string out;
  std::function<void(const Derivation&, int)> go = [&](const Derivation& n, int depth) {
    out += std::string(static_cast<std::size_t>(depth) * 2, ' ');
    out += "[" + to_string(n.rule);
    for (const auto& [k, v] : n.inst) out += " " + k + "=" + to_string(v);
    out += "] " + to_string(n.conclusion);
    if (!n.label.empty()) out += "   (" + n.label + ")";
    out += "\n";
    for (const auto& p : n.premises) go(p, depth + 1);
  };
  go(d, 0);
  return out;
}

std::string render_witness(const FiniteModel& m, const Witness& w) {
  return "at " + to_string(m, w.at) + ": lhs gives " + to_string(m, w.lhs) + ", rhs gives " + to_string(m, w.rhs);
}

std::string render_steps(const Derivation& d, const std::string& indent) {
  std::string out;
  int next = 0;
  std::function<std::string(const Derivation&)> go = [&](const Derivation& n) {
    std::vector<std::string> from;
    for (const auto& p : n.premises) from.push_back(go(p));
    std::string label = "s" + std::to_string(++next);
    out += indent + label + ": ";
    switch (n.rule.kind) {
      case RuleRef::Kind::Axiom: out += "axiom(" + quote_name(n.rule.label) + ")"; break;
      case RuleRef::Kind::Hypothesis: out += "hyp(" + quote_name(n.rule.label) + ")"; break;
      case RuleRef::Kind::Rule: {
        out += rule_name(n.rule.rule);
        out += "(";
        bool first = true;
        for (const auto& [k, v] : n.inst) {
          if (!first) out += ", ";
          first = false;
          out += k + " = " + to_string(v);
        }
        out += ")";
        break;
      }
    }
    if (!from.empty()) {
      out += " from";
      for (const auto& f : from) out += " " + f;
    }
    if (!n.label.empty()) out += "  # " + n.label;
    out += "\n";
    return label;
  };
  go(d);
  return out;
}

}  // namespace decor
