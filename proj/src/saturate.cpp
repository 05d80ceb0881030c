// Bounded forward saturation over the rule catalog. Facts are kept as a
// flat table with parent links; the derivation tree is only rebuilt (and
// re-checked through apply_rule) for the goal.
#include <algorithm>
#include <map>
#include <set>

#include "decor/error.hpp"
#include "decor/kernel.hpp"

namespace decor {

namespace {

enum class Src { Axiom, Terminal, Sym, SToW, WToS, Trans, Subs, Repl };

struct Fact {
  Equation eq;  // normalized
  Src src;
  int a = -1, b = -1;
  Term t;
  std::size_t axiom = 0;
};

constexpr std::size_t kMaxFacts = 200000;

class Saturator {
 public:
  Saturator(const Theory& th, const Equation& goal) : th_(th) {
    EqKind gk = plain() ? EqKind::Strong : goal.kind;
    goal_ = normalize(Equation{goal.lhs, goal.rhs, gk});
    bound_ = std::max(size(goal_.lhs), size(goal_.rhs)) + 3;
  }

  SaturationResult run(int budget) {
    SaturationResult res;
    if (same(goal_.lhs, goal_.rhs)) {
      RuleId r = goal_.kind == EqKind::Strong ? RuleId::EqRefl : RuleId::WRefl;
      res.proof = dv::rule(th_, r, {}, {{"f", goal_.lhs}});
      return res;
    }
    add_universe(goal_.lhs);
    add_universe(goal_.rhs);
    for (std::size_t k = 0; k < th_.axioms.size(); ++k) {
      Equation e = normalize(th_.axioms[k].eq);
      if (plain()) e.kind = EqKind::Strong;
      add_universe(e.lhs);
      add_universe(e.rhs);
      push({e, Src::Axiom, -1, -1, nullptr, k});
    }
    for (const auto& u : std::vector<Term>(universe_.begin(), universe_.end())) terminal(u);
    if (th_.flavor != Flavor::Exceptions) terminal(tm::id(ty::unit()));
    if (th_.flavor != Flavor::States) terminal(tm::id(ty::empty()));
    std::vector<Term> uni = sorted_universe();

    for (int round = 1; round <= budget && !found(); ++round) {
      res.rounds = round;
      std::size_t n = facts_.size();
      for (std::size_t i = 0; i < n && !full() && !found(); ++i) {
        const Equation e = facts_[i].eq;
        auto it = by_lhs_.find(to_string(e.rhs));
        if (it != by_lhs_.end()) {
          for (int j : std::vector<int>(it->second)) {
            if (static_cast<std::size_t>(j) >= n || facts_[j].eq.kind != e.kind) continue;
            push({{e.lhs, facts_[j].eq.rhs, e.kind}, Src::Trans, static_cast<int>(i), j, nullptr, 0});
          }
        }
        for (const auto& u : uni) {
          if (same(cod(u), dom(e.lhs)) && subs_ok(e.kind, u))
            push({{tm::comp(e.lhs, u), tm::comp(e.rhs, u), e.kind}, Src::Subs, static_cast<int>(i), -1, u, 0});
          if (same(dom(u), cod(e.lhs)) && repl_ok(e.kind, u))
            push({{tm::comp(u, e.lhs), tm::comp(u, e.rhs), e.kind}, Src::Repl, static_cast<int>(i), -1, u, 0});
        }
      }
      if (full()) break;
    }
    res.facts = facts_.size();
    auto it = index_.find(key(goal_));
    if (it != index_.end()) res.proof = rebuild(it->second);
    return res;
  }

 private:
  bool plain() const { return th_.flavor == Flavor::Plain; }
  bool full() const { return facts_.size() >= kMaxFacts; }
  bool found() const { return index_.count(key(goal_)) > 0; }

  static std::string key(const Equation& e) { return to_string(e); }

  bool subs_ok(EqKind k, const Term& u) const {
    return k == EqKind::Strong || th_.flavor != Flavor::Exceptions || decoration(u) == 0;
  }
  bool repl_ok(EqKind k, const Term& u) const {
    return k == EqKind::Strong || th_.flavor != Flavor::States || decoration(u) == 0;
  }

  void add_universe(const Term& t) {
    auto sp = spine(normalize_assoc(t));
    for (std::size_t a = 0; a < sp.size(); ++a)
      for (std::size_t b = a + 1; b <= sp.size(); ++b)
        universe_.insert(normalize_assoc(
            tm::chain(std::vector<Term>(sp.begin() + static_cast<long>(a), sp.begin() + static_cast<long>(b)))));
  }

  struct TermLess {
    bool operator()(const Term& a, const Term& b) const { return compare(a, b) < 0; }
  };

  std::vector<Term> sorted_universe() const {
    std::vector<Term> v(universe_.begin(), universe_.end());
    std::stable_sort(v.begin(), v.end(), [](const Term& a, const Term& b) {
      if (size(a) != size(b)) return size(a) < size(b);
      return to_string(a) < to_string(b);
    });
    return v;
  }

  // Weak terminal/initial instance for a side that lands in 1 or leaves 0.
  void terminal(const Term& s) {
    if (s->kind == TermKind::ToUnit || s->kind == TermKind::FromEmpty) return;
    std::string k = to_string(s);
    if (!terminal_done_.insert(k).second) return;
    EqKind kind = plain() ? EqKind::Strong : EqKind::Weak;
    if (same(cod(s), ty::unit())) {
      if (th_.flavor == Flavor::Exceptions && decoration(s) != 0) return;
      push({normalize(Equation{s, tm::to_unit(dom(s)), kind}), Src::Terminal, -1, -1, s, 0});
    } else if (same(dom(s), ty::empty())) {
      if (th_.flavor == Flavor::States && decoration(s) != 0) return;
      push({normalize(Equation{s, tm::from_empty(cod(s)), kind}), Src::Terminal, -1, -1, s, 0});
    }
  }

  void push(Fact f) {
    f.eq = normalize(f.eq);
    if (std::max(size(f.eq.lhs), size(f.eq.rhs)) > bound_) return;
    std::string k = key(f.eq);
    if (index_.count(k) || full()) return;
    int id = static_cast<int>(facts_.size());
    index_.emplace(k, id);
    by_lhs_[to_string(f.eq.lhs)].push_back(id);
    Equation e = f.eq;
    facts_.push_back(std::move(f));
    // eager closure
    push({{e.rhs, e.lhs, e.kind}, Src::Sym, id, -1, nullptr, 0});
    if (!plain()) {
      if (e.kind == EqKind::Strong) {
        push({{e.lhs, e.rhs, EqKind::Weak}, Src::SToW, id, -1, nullptr, 0});
      } else if (decoration(e.lhs) <= 1 && decoration(e.rhs) <= 1) {
        push({{e.lhs, e.rhs, EqKind::Strong}, Src::WToS, id, -1, nullptr, 0});
      }
    }
    terminal_parts(e.lhs);
    terminal_parts(e.rhs);
  }

  // Terminal/initial instances for every contiguous piece of a side.
  void terminal_parts(const Term& side) {
    auto sp = spine(side);
    for (std::size_t a = 0; a < sp.size(); ++a)
      for (std::size_t b = a + 1; b <= sp.size(); ++b) {
        bool to_one = same(cod(sp[a]), ty::unit());
        bool from_zero = same(dom(sp[b - 1]), ty::empty());
        if (!to_one && !from_zero) continue;
        terminal(normalize_assoc(
            tm::chain(std::vector<Term>(sp.begin() + static_cast<long>(a), sp.begin() + static_cast<long>(b)))));
      }
  }

  Derivation rebuild(int id) {
    auto memo = built_.find(id);
    if (memo != built_.end()) return memo->second;
    const Fact& f = facts_[id];
    bool strong = f.eq.kind == EqKind::Strong;
    Derivation d;
    switch (f.src) {
      case Src::Axiom: d = dv::axiom(th_, th_.axioms[f.axiom].name); break;
      case Src::Terminal: {
        bool fin = same(cod(f.t), ty::unit());
        RuleId r = plain() ? (fin ? RuleId::SFinal : RuleId::SInitial) : (fin ? RuleId::WFinal : RuleId::WInitial);
        d = dv::rule(th_, r, {}, {{"t", f.t}});
        if (!same(normalize_assoc(d.conclusion.eq.lhs), f.eq.lhs))
          d = dv::rule(th_, plain() ? RuleId::EqSym : RuleId::WSym, {d});
        break;
      }
      case Src::Sym:
        d = dv::rule(th_, strong ? RuleId::EqSym : RuleId::WSym, {rebuild(f.a)});
        break;
      case Src::SToW: d = dv::rule(th_, RuleId::SToW, {rebuild(f.a)}); break;
      case Src::WToS:
        d = dv::rule(th_, th_.flavor == Flavor::States ? RuleId::WToS : RuleId::WToSProp, {rebuild(f.a)});
        break;
      case Src::Trans:
        d = dv::rule(th_, strong ? RuleId::EqTrans : RuleId::WTrans, {rebuild(f.a), rebuild(f.b)});
        break;
      case Src::Subs: {
        RuleId r = strong ? RuleId::EqSubs
                          : th_.flavor == Flavor::States ? RuleId::WSubs : RuleId::WSubsPure;
        d = dv::rule(th_, r, {rebuild(f.a)}, {{"t", f.t}});
        break;
      }
      case Src::Repl: {
        RuleId r = strong ? RuleId::EqRepl
                          : th_.flavor == Flavor::States ? RuleId::WReplPure : RuleId::WRepl;
        d = dv::rule(th_, r, {rebuild(f.a)}, {{"t", f.t}});
        break;
      }
    }
    built_.emplace(id, d);
    return d;
  }

  const Theory& th_;
  Equation goal_;
  std::size_t bound_ = 0;
  std::vector<Fact> facts_;
  std::map<std::string, int> index_;
  std::map<std::string, std::vector<int>> by_lhs_;
  std::set<Term, TermLess> universe_;
  std::set<std::string> terminal_done_;
  std::map<int, Derivation> built_;
};

}  // namespace

SaturationResult saturate_prove(const Theory& th, const Equation& goal, int budget) {
  typecheck(th, goal);
  if (budget < 0) throw DecorError(ErrorCode::BadParams, "negative budget");
  return Saturator(th, goal).run(budget);
}

}  // namespace decor
