#include "decor/model.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <limits>

#include "decor/error.hpp"

namespace decor {

bool operator==(const Outcome& a, const Outcome& b) {
  return a.exc == b.exc && a.ctor == b.ctor && a.v == b.v;
}

std::string to_string(const Outcome& o) {
  if (o.exc) return o.ctor + "!(" + to_string(o.v) + ")";
  return to_string(o.v);
}

int FiniteModel::size_of(const std::string& index) const { return sizes[position(index)]; }

std::size_t FiniteModel::position(const std::string& index) const {
  auto it = std::find(indices.begin(), indices.end(), index);
  if (it == indices.end()) throw DecorError(ErrorCode::CarrierMissing, "no carrier for index " + index);
  return static_cast<std::size_t>(it - indices.begin());
}

FiniteModel make_model(const Theory& th, const std::vector<int>& sizes, std::map<std::string, int> named) {
  if (th.flavor == Flavor::Plain)
    throw DecorError(ErrorCode::FlavorViolation, "finite models interpret decorated theories only");
  FiniteModel m;
  m.flavor = th.flavor;
  m.indices = th.flavor == Flavor::States ? th.locations : th.constructors;
  if (sizes.size() != m.indices.size())
    throw DecorError(ErrorCode::BadParams, "expected " + std::to_string(m.indices.size()) + " carrier sizes");
  for (int n : sizes)
    if (n < 1) throw DecorError(ErrorCode::BadParams, "carrier sizes must be positive");
  m.sizes = sizes;
  m.named = std::move(named);
  return m;
}

namespace {

using Count = unsigned long long;
constexpr Count kHuge = std::numeric_limits<Count>::max() / 4;

Count mul(Count a, Count b) { return (a != 0 && b > kHuge / a) ? kHuge : a * b; }
Count add(Count a, Count b) { return std::min(kHuge, a + b); }

Count count(const FiniteModel& m, const TypeExpr& t) {
  switch (t->kind) {
    case TypeKind::Unit: return 1;
    case TypeKind::Empty: return 0;
    case TypeKind::Prod: return mul(count(m, t->left), count(m, t->right));
    case TypeKind::Coprod: return add(count(m, t->left), count(m, t->right));
    case TypeKind::Value:
    case TypeKind::Param: return static_cast<Count>(m.size_of(t->name));
    case TypeKind::Named: {
      auto it = m.named.find(t->name);
      if (it == m.named.end()) throw DecorError(ErrorCode::CarrierMissing, "no carrier for " + t->name);
      return static_cast<Count>(it->second);
    }
    default: throw DecorError(ErrorCode::FlavorViolation, "explicit objects have no finite carrier here");
  }
}

Count state_count(const FiniteModel& m) {
  Count n = 1;
  for (int s : m.sizes) n = mul(n, static_cast<Count>(s));
  return n;
}

Count exc_count(const FiniteModel& m) {
  Count n = 0;
  for (int s : m.sizes) n = add(n, static_cast<Count>(s));
  return n;
}

// Generic value for an uninterpreted result; products are split so that
// projections still compute.
Value free_value(const TypeExpr& t, const std::string& label) {
  switch (t->kind) {
    case TypeKind::Unit: return Value::unit();
    case TypeKind::Empty: throw DecorError(ErrorCode::IllFormed, "uninterpreted result in 0: " + label);
    case TypeKind::Prod:
      return Value::pair(free_value(t->left, "fst " + label), free_value(t->right, "snd " + label));
    default: return Value::symbol(label);
  }
}

[[noreturn]] void stuck(const Term& t, const std::string& why) {
  throw DecorError(ErrorCode::IllFormed, "cannot evaluate " + to_string(t) + ": " + why);
}

const Value& kid(const Value& v, Value::Kind k, const Term& t) {
  if (v.kind != k) stuck(t, "argument " + to_string(v) + " has the wrong shape");
  return v.kids[0];
}

// ---- states ----

std::pair<Value, State> ev_st(const FiniteModel& m, const Term& t, const Value& a, const State& s) {
  switch (t->kind) {
    case TermKind::Gen:
      switch (t->role) {
        case GenRole::Lookup: return {s[m.position(t->index)], s};
        case GenRole::Update: {
          State s2 = s;
          s2[m.position(t->index)] = a;
          return {Value::unit(), s2};
        }
        case GenRole::User: {
          auto it = m.state_interp.find(t->name);
          if (it != m.state_interp.end()) return it->second(a, s);
          if (t->dec == 0) return {free_value(t->cod, t->name + "(" + to_string(a) + ")"), s};
          std::string arg = "(" + to_string(a) + "; " + to_string(s) + ")";
          Value v = free_value(t->cod, t->name + arg);
          if (t->dec == 1) return {v, s};
          State s2(s.size());
          for (std::size_t k = 0; k < s.size(); ++k) s2[k] = Value::symbol(t->name + "." + m.indices[k] + arg);
          return {v, s2};
        }
        default: stuck(t, "generator has no states meaning");
      }
    case TermKind::Id: return {a, s};
    case TermKind::Comp: {
      auto [v, s1] = ev_st(m, t->kids[1], a, s);
      return ev_st(m, t->kids[0], v, s1);
    }
    case TermKind::ToUnit: return {Value::unit(), s};
    case TermKind::FromEmpty: stuck(t, "no element of 0");
    case TermKind::Proj1: {
      if (a.kind != Value::Kind::Pair) stuck(t, "not a pair");
      return {a.kids[0], s};
    }
    case TermKind::Proj2: {
      if (a.kind != Value::Kind::Pair) stuck(t, "not a pair");
      return {a.kids[1], s};
    }
    case TermKind::Inj1: return {Value::inl(a), s};
    case TermKind::Inj2: return {Value::inr(a), s};
    case TermKind::SemiProd: {
      if (a.kind != Value::Kind::Pair) stuck(t, "not a pair");
      const Term& f = t->kids[0];
      const Term& g = t->kids[1];
      if (t->pure_left) {
        Value c = ev_st(m, f, a.kids[0], s).first;
        auto [d, s2] = ev_st(m, g, a.kids[1], s);
        return {Value::pair(c, d), s2};
      }
      auto [c, s2] = ev_st(m, g, a.kids[0], s);
      Value d = ev_st(m, f, a.kids[1], s).first;
      return {Value::pair(c, d), s2};
    }
    case TermKind::CaseProd: {
      Value v = ev_st(m, t->kids[0], a, s).first;
      return {v, ev_st(m, t->kids[1], a, s).second};
    }
    case TermKind::AccPair:
      return {Value::pair(ev_st(m, t->kids[0], a, s).first, ev_st(m, t->kids[1], a, s).first), s};
    case TermKind::CoerceAcc: return {ev_st(m, t->kids[0], a, s).first, s};
    case TermKind::LocTuple: {
      State s2 = s;
      for (std::size_t k = 0; k < t->kids.size(); ++k)
        s2[m.position(t->keys[k])] = ev_st(m, t->kids[k], a, s).first;
      return {Value::unit(), s2};
    }
    default: stuck(t, "exceptions-only construct");
  }
}

// ---- exceptions ----

Outcome value(Value v) { return {false, {}, std::move(v)}; }

Outcome ev_ex(const FiniteModel& m, const Term& t, const Outcome& in) {
  bool catcher = t->kind == TermKind::Comp || t->kind == TermKind::SemiCoprod ||
                 t->kind == TermKind::CaseSum || t->kind == TermKind::ConstCotuple ||
                 (t->kind == TermKind::Gen && t->dec == 2);
  if (in.exc && !catcher) return in;
  const Value& a = in.v;
  switch (t->kind) {
    case TermKind::Gen:
      switch (t->role) {
        case GenRole::Throw: return {true, t->index, a};
        case GenRole::Catch:
          if (in.exc && in.ctor == t->index) return value(in.v);
          return in;
        case GenRole::CatchAll: return in.exc ? value(Value::unit()) : in;
        case GenRole::User: {
          auto it = m.exc_interp.find(t->name);
          if (it != m.exc_interp.end()) return it->second(in);
          return value(free_value(t->cod, t->name + "(" + to_string(in) + ")"));
        }
        default: stuck(t, "generator has no exceptions meaning");
      }
    case TermKind::Id: return in;
    case TermKind::Comp: return ev_ex(m, t->kids[0], ev_ex(m, t->kids[1], in));
    case TermKind::ToUnit: return value(Value::unit());
    case TermKind::FromEmpty: stuck(t, "no element of 0");
    case TermKind::Proj1:
    case TermKind::Proj2:
      if (a.kind != Value::Kind::Pair) stuck(t, "not a pair");
      return value(a.kids[t->kind == TermKind::Proj1 ? 0 : 1]);
    case TermKind::Inj1: return value(Value::inl(a));
    case TermKind::Inj2: return value(Value::inr(a));
    case TermKind::SemiCoprod: {
      const Term& f = t->kids[0];
      const Term& g = t->kids[1];
      // the pure side sees values of its own summand; everything else,
      // exceptions included, goes through the effectful side
      Value::Kind fk = t->pure_left ? Value::Kind::Inl : Value::Kind::Inr;
      auto wrap = [&](Outcome o, bool left) {
        if (o.exc) return o;
        return value(left ? Value::inl(o.v) : Value::inr(o.v));
      };
      if (!in.exc && a.kind == fk) return wrap(ev_ex(m, f, value(a.kids[0])), t->pure_left);
      Outcome gin = in.exc ? in : value(a.kids[0]);
      return wrap(ev_ex(m, g, gin), !t->pure_left);
    }
    case TermKind::CaseSum:
      return in.exc ? ev_ex(m, t->kids[1], in) : ev_ex(m, t->kids[0], in);
    case TermKind::PropCase:
      if (a.kind == Value::Kind::Inl) return ev_ex(m, t->kids[0], value(a.kids[0]));
      return ev_ex(m, t->kids[1], value(kid(a, Value::Kind::Inr, t)));
    case TermKind::Coerce: return ev_ex(m, t->kids[0], in);
    case TermKind::ConstCotuple: {
      if (!in.exc) stuck(t, "no element of 0");
      for (std::size_t k = 0; k < t->keys.size(); ++k)
        if (t->keys[k] == in.ctor) return ev_ex(m, t->kids[k], value(in.v));
      stuck(t, "constructor " + in.ctor + " not covered");
    }
    default: stuck(t, "states-only construct");
  }
}

void enumerate(const FiniteModel& m, const TypeExpr& t, std::vector<Value>& out) {
  switch (t->kind) {
    case TypeKind::Unit: out.push_back(Value::unit()); return;
    case TypeKind::Empty: return;
    case TypeKind::Prod: {
      std::vector<Value> l, r;
      enumerate(m, t->left, l);
      enumerate(m, t->right, r);
      for (const auto& a : l)
        for (const auto& b : r) out.push_back(Value::pair(a, b));
      return;
    }
    case TypeKind::Coprod: {
      std::vector<Value> l, r;
      enumerate(m, t->left, l);
      enumerate(m, t->right, r);
      for (auto& a : l) out.push_back(Value::inl(std::move(a)));
      for (auto& b : r) out.push_back(Value::inr(std::move(b)));
      return;
    }
    case TypeKind::Value:
    case TypeKind::Param: {
      int n = m.size_of(t->name);
      char tag = t->kind == TypeKind::Value ? 'v' : 'p';
      for (int k = 0; k < n; ++k) out.push_back(Value::atom_of(k, tag));
      return;
    }
    case TypeKind::Named: {
      int n = static_cast<int>(count(m, t));
      for (int k = 0; k < n; ++k) out.push_back(Value::atom_of(k, 'n', t->name));
      return;
    }
    default: throw DecorError(ErrorCode::FlavorViolation, "explicit objects have no finite carrier here");
  }
}

// The enumeration domain of one equation, indexed 0..n-1 in canonical order.
struct Space {
  const FiniteModel& m;
  bool strong;
  std::vector<Value> inputs;
  std::vector<State> states;          // states flavor
  std::vector<Outcome> exceptions;    // exceptions flavor, strong only

  Space(const FiniteModel& model, const Equation& e) : m(model), strong(e.kind == EqKind::Strong) {
    if (m.flavor == Flavor::Plain)
      throw DecorError(ErrorCode::FlavorViolation, "finite models interpret decorated theories only");
    TypeExpr d = dom(e.lhs);
    if (!same(d, dom(e.rhs)) || !same(cod(e.lhs), cod(e.rhs)))
      throw DecorError(ErrorCode::CompositionMismatch, "sides have different signatures: " + to_string(e));
    Count n = point_estimate(d);
    if (n > m.bound)
      throw DecorError(ErrorCode::SearchSpaceTooLarge,
                       std::to_string(n) + " points exceed the bound " + std::to_string(m.bound));
    enumerate(m, d, inputs);
    if (m.flavor == Flavor::States) states = all_states(m);
    else if (strong) exceptions = all_exceptions(m);
  }

  Count point_estimate(const TypeExpr& d) const {
    if (m.flavor == Flavor::States) return mul(count(m, d), state_count(m));
    return strong ? add(count(m, d), exc_count(m)) : count(m, d);
  }

  std::size_t size() const {
    if (m.flavor == Flavor::States) return inputs.size() * states.size();
    return inputs.size() + exceptions.size();
  }

  Point point(std::size_t p) const {
    Point pt;
    if (m.flavor == Flavor::States) {
      pt.in = value(inputs[p / states.size()]);
      pt.state = states[p % states.size()];
    } else {
      pt.in = p < inputs.size() ? value(inputs[p]) : exceptions[p - inputs.size()];
    }
    return pt;
  }

  Point run(const Term& t, const Point& at) const {
    Point r;
    if (m.flavor == Flavor::States) {
      auto [v, s] = ev_st(m, t, at.in.v, at.state);
      r.in = value(std::move(v));
      r.state = std::move(s);
    } else {
      r.in = ev_ex(m, t, at.in);
    }
    return r;
  }

  bool agree(const Point& l, const Point& r) const {
    if (m.flavor == Flavor::States) return l.in == r.in && (!strong || l.state == r.state);
    return l.in == r.in;
  }
};

Witness witness_at(const Space& sp, const Equation& e, std::size_t p) {
  Witness w;
  w.at = sp.point(p);
  w.lhs = sp.run(e.lhs, w.at);
  w.rhs = sp.run(e.rhs, w.at);
  return w;
}

}  // namespace

std::vector<Value> elements(const FiniteModel& m, const TypeExpr& t) {
  std::vector<Value> out;
  if (count(m, t) > m.bound) throw DecorError(ErrorCode::SearchSpaceTooLarge, to_string(t));
  enumerate(m, t, out);
  return out;
}

std::vector<State> all_states(const FiniteModel& m) {
  std::vector<State> out{State{}};
  for (std::size_t k = 0; k < m.indices.size(); ++k) {
    std::vector<State> next;
    next.reserve(out.size() * static_cast<std::size_t>(m.sizes[k]));
    for (const auto& s : out)
      for (int v = 0; v < m.sizes[k]; ++v) {
        State s2 = s;
        s2.push_back(Value::atom_of(v, 'v'));
        next.push_back(std::move(s2));
      }
    out = std::move(next);
  }
  return out;
}

std::vector<Outcome> all_exceptions(const FiniteModel& m) {
  std::vector<Outcome> out;
  for (std::size_t k = 0; k < m.indices.size(); ++k)
    for (int a = 0; a < m.sizes[k]; ++a) out.push_back({true, m.indices[k], Value::atom_of(a, 'p')});
  return out;
}

std::pair<Value, State> eval_states(const FiniteModel& m, const Term& t, const Value& in, const State& s) {
  if (m.flavor != Flavor::States) throw DecorError(ErrorCode::FlavorViolation, "not a states model");
  if (s.size() != m.indices.size()) throw DecorError(ErrorCode::BadParams, "state has the wrong arity");
  return ev_st(m, t, in, s);
}

Outcome eval_exceptions(const FiniteModel& m, const Term& t, const Outcome& in) {
  if (m.flavor != Flavor::Exceptions) throw DecorError(ErrorCode::FlavorViolation, "not an exceptions model");
  return ev_ex(m, t, in);
}

std::string to_string(const FiniteModel& m, const Point& p) {
  if (m.flavor == Flavor::States) return "a=" + to_string(p.in.v) + ", s=" + to_string(p.state);
  return p.in.exc ? "exc " + to_string(p.in) : "v=" + to_string(p.in.v);
}

std::size_t point_count(const FiniteModel& m, const Equation& e) { return Space(m, e).size(); }

CheckResult check_equation_serial(const FiniteModel& m, const Equation& e) {
  Space sp(m, e);
  CheckResult r;
  r.points = sp.size();
  for (std::size_t p = 0; p < r.points; ++p) {
    Point at = sp.point(p);
    if (!sp.agree(sp.run(e.lhs, at), sp.run(e.rhs, at))) {
      r.holds = false;
      r.witness = witness_at(sp, e, p);
      break;
    }
  }
  return r;
}

CheckResult check_equation(const FiniteModel& m, const Equation& e) {
  Space sp(m, e);
  CheckResult r;
  r.points = sp.size();
  const long long n = static_cast<long long>(r.points);
  std::atomic<long long> best{n};
  std::exception_ptr err;
  long long err_at = n;
  long long first = n;
#pragma omp parallel for schedule(dynamic, 64) reduction(min : first)
  for (long long p = 0; p < n; ++p) {
    if (p >= best.load(std::memory_order_relaxed)) continue;
    try {
      Point at = sp.point(static_cast<std::size_t>(p));
      if (!sp.agree(sp.run(e.lhs, at), sp.run(e.rhs, at))) {
        first = std::min(first, p);
        long long cur = best.load();
        while (p < cur && !best.compare_exchange_weak(cur, p)) {
        }
      }
    } catch (...) {
#pragma omp critical
      if (p < err_at) {
        err_at = p;
        err = std::current_exception();
      }
    }
  }
  // match the serial reference: an evaluation error only counts if no
  // earlier point already refutes the equation
  if (err && err_at < first) std::rethrow_exception(err);
  if (first < n) {
    r.holds = false;
    r.witness = witness_at(sp, e, static_cast<std::size_t>(first));
  }
  return r;
}

bool observational_equiv(const FiniteModel& m, const State& s, const State& t) {
  for (std::size_t k = 0; k < m.indices.size(); ++k)
    if (!(s[k] == t[k])) return false;
  return true;
}

}  // namespace decor
