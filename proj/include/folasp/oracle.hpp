// SPDX-License-Identifier: MIT
//
// Reference semantics, implemented directly from the definitions: Tarskian
// evaluation over total structures, the parametrized well-founded model of a
// definition via the alternating fixpoint, and brute-force model expansion.
// Deliberately independent of the translation pipeline so the two can be
// checked against each other.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "folasp/ast.hpp"
#include "folasp/validate.hpp"

namespace folasp {

struct OracleError : Error {
  using Error::Error;
};

// ------------------------------------------------------------- environment

namespace detail {

struct Env {
  std::vector<std::pair<std::string, Value>> stack;

  const Value& get(const std::string& name) const {
    for (auto it = stack.rbegin(); it != stack.rend(); ++it)
      if (it->first == name) return it->second;
    throw OracleError("unbound variable '" + name + "' during evaluation");
  }
  void push(const std::string& name, Value v) { stack.emplace_back(name, std::move(v)); }
  void pop() { stack.pop_back(); }
};

}  // namespace detail

// ------------------------------------------------- two-valued evaluation

class Evaluator {
 public:
  Evaluator(const Vocabulary& voc, const Structure& s) : voc_(voc), s_(s) {
    for (const auto& [p, rows] : s.pred_interp) preds_[p].insert(rows.begin(), rows.end());
    for (const auto& [f, rows] : s.func_interp)
      for (const auto& [args, val] : rows) funcs_[f][args] = val;
  }

  bool sentence(const Formula& f) const {
    detail::Env env;
    return formula(f, env);
  }

  bool formula(const Formula& f, detail::Env& env) const {
    return std::visit(
        [&](const auto& n) -> bool {
          using N = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<N, PredAtom>) {
            Tuple t;
            for (const auto& a : n.args) t.push_back(term(a, env));
            auto it = preds_.find(n.predicate);
            return it != preds_.end() && it->second.count(t);
          } else if constexpr (std::is_same_v<N, Comparison>) {
            return compare(term(n.lhs, env), n.op, term(n.rhs, env));
          } else if constexpr (std::is_same_v<N, BoolConst>) {
            return n.value;
          } else if constexpr (std::is_same_v<N, Not>) {
            return !formula(*n.f, env);
          } else if constexpr (std::is_same_v<N, And>) {
            return formula(*n.lhs, env) && formula(*n.rhs, env);
          } else if constexpr (std::is_same_v<N, Or>) {
            return formula(*n.lhs, env) || formula(*n.rhs, env);
          } else if constexpr (std::is_same_v<N, Implies>) {
            return !formula(*n.lhs, env) || formula(*n.rhs, env);
          } else if constexpr (std::is_same_v<N, Iff>) {
            return formula(*n.lhs, env) == formula(*n.rhs, env);
          } else {  // Quant
            const auto& dom = domain(n.var.type);
            for (const auto& v : dom) {
              env.push(n.var.name, v);
              bool b = formula(*n.body, env);
              env.pop();
              if (n.kind == QuantKind::Forall && !b) return false;
              if (n.kind == QuantKind::Exists && b) return true;
            }
            return n.kind == QuantKind::Forall;
          }
        },
        f.node);
  }

  Value term(const Term& t, detail::Env& env) const {
    return std::visit(
        [&](const auto& n) -> Value {
          using N = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<N, Variable>) {
            return env.get(n.name);
          } else if constexpr (std::is_same_v<N, IntConst>) {
            return Value{n.value};
          } else if constexpr (std::is_same_v<N, ElemConst>) {
            return Value{n.name};
          } else if constexpr (std::is_same_v<N, FuncApp>) {
            Tuple args;
            for (const auto& a : n.args) args.push_back(term(a, env));
            auto f = funcs_.find(n.function);
            if (f == funcs_.end())
              throw OracleError("function '" + n.function + "' is not interpreted");
            auto row = f->second.find(args);
            if (row == f->second.end())
              throw OracleError("function '" + n.function + "' is partial");
            return row->second;
          } else {  // Cardinality
            long long cnt = 0;
            count_card(n, 0, env, cnt);
            return Value{cnt};
          }
        },
        t.node);
  }

  static bool compare(const Value& a, CmpOp op, const Value& b) {
    if (op == CmpOp::Eq) return a == b;
    if (op == CmpOp::Neq) return a != b;
    const auto* x = std::get_if<long long>(&a);
    const auto* y = std::get_if<long long>(&b);
    if (!x || !y) throw OracleError("ordering comparison on non-integer values");
    switch (op) {
      case CmpOp::Leq: return *x <= *y;
      case CmpOp::Geq: return *x >= *y;
      case CmpOp::Lt: return *x < *y;
      case CmpOp::Gt: return *x > *y;
      default: return false;
    }
  }

  const std::vector<Value>& domain(const std::string& type) const {
    auto it = s_.type_interp.find(type);
    if (it == s_.type_interp.end()) throw OracleError("type '" + type + "' has no domain");
    return it->second;
  }

 private:
  void count_card(const Cardinality& c, size_t i, detail::Env& env, long long& cnt) const {
    if (i == c.bound.size()) {
      if (formula(*c.body, env)) ++cnt;
      return;
    }
    for (const auto& v : domain(c.bound[i].type)) {
      env.push(c.bound[i].name, v);
      count_card(c, i + 1, env, cnt);
      env.pop();
    }
  }

  const Vocabulary& voc_;
  const Structure& s_;
  std::map<std::string, std::set<Tuple>> preds_;
  std::map<std::string, std::map<Tuple, Value>> funcs_;
};

// --------------------------------------------- three-valued evaluation

enum class TV { False = 0, Unknown = 1, True = 2 };

inline TV tv_not(TV t) {
  if (t == TV::True) return TV::False;
  if (t == TV::False) return TV::True;
  return TV::Unknown;
}

using AtomSet = std::map<std::string, std::set<Tuple>>;

namespace detail {

// Pair ("certainly true", "possibly true") of truth values.  Evaluating under
// an arbitrary pair of interpretations — not necessarily lower ⊆ upper —
// keeps the inner fixpoint of the well-founded computation order-independent:
// negation swaps the components, so negative information always comes from
// the frozen second interpretation.
struct P3 {
  bool first, second;
};
inline P3 p3_not(P3 a) { return {!a.second, !a.first}; }
inline P3 p3_and(P3 a, P3 b) { return {a.first && b.first, a.second && b.second}; }
inline P3 p3_or(P3 a, P3 b) { return {a.first || b.first, a.second || b.second}; }

// Evaluation under a pair (lower, upper) of interpretations for the defined
// predicates; everything else comes from the open structure.  Kleene
// connectives; cardinalities evaluate to count intervals.
class Eval3 {
 public:
  Eval3(const Evaluator& open, const std::set<std::string>& defined, const AtomSet& lower,
        const AtomSet& upper)
      : open_(open), defined_(defined), lower_(lower), upper_(upper) {}

  P3 formula(const Formula& f, Env& env) const {
    return std::visit(
        [&](const auto& n) -> P3 {
          using N = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<N, PredAtom>) {
            if (!defined_.count(n.predicate)) {
              bool v = open_.formula(f, env);
              return {v, v};
            }
            Tuple t;
            for (const auto& a : n.args) t.push_back(open_.term(a, env));
            return {contains(lower_, n.predicate, t), contains(upper_, n.predicate, t)};
          } else if constexpr (std::is_same_v<N, Comparison>) {
            return compare3(n, env);
          } else if constexpr (std::is_same_v<N, BoolConst>) {
            return {n.value, n.value};
          } else if constexpr (std::is_same_v<N, Not>) {
            return p3_not(formula(*n.f, env));
          } else if constexpr (std::is_same_v<N, And>) {
            return p3_and(formula(*n.lhs, env), formula(*n.rhs, env));
          } else if constexpr (std::is_same_v<N, Or>) {
            return p3_or(formula(*n.lhs, env), formula(*n.rhs, env));
          } else if constexpr (std::is_same_v<N, Implies>) {
            return p3_or(p3_not(formula(*n.lhs, env)), formula(*n.rhs, env));
          } else if constexpr (std::is_same_v<N, Iff>) {
            P3 a = formula(*n.lhs, env);
            P3 b = formula(*n.rhs, env);
            return p3_or(p3_and(a, b), p3_and(p3_not(a), p3_not(b)));
          } else {  // Quant
            P3 acc = (n.kind == QuantKind::Forall) ? P3{true, true} : P3{false, false};
            for (const auto& v : open_.domain(n.var.type)) {
              env.push(n.var.name, v);
              P3 b = formula(*n.body, env);
              env.pop();
              acc = (n.kind == QuantKind::Forall) ? p3_and(acc, b) : p3_or(acc, b);
            }
            return acc;
          }
        },
        f.node);
  }

 private:
  static bool contains(const AtomSet& s, const std::string& p, const Tuple& t) {
    auto it = s.find(p);
    return it != s.end() && it->second.count(t);
  }

  struct Interval {
    long long lo, hi;
  };

  // A term is either definite or a count interval.
  std::variant<Value, Interval> term3(const Term& t, Env& env) const {
    if (const auto* c = std::get_if<Cardinality>(&t.node)) {
      long long n1 = 0, n2 = 0;
      count3(*c, 0, env, n1, n2);
      return Interval{std::min(n1, n2), std::max(n1, n2)};
    }
    return open_.term(t, env);
  }

  void count3(const Cardinality& c, size_t i, Env& env, long long& n1, long long& n2) const {
    if (i == c.bound.size()) {
      P3 b = formula(*c.body, env);
      if (b.first) ++n1;
      if (b.second) ++n2;
      return;
    }
    for (const auto& v : open_.domain(c.bound[i].type)) {
      env.push(c.bound[i].name, v);
      count3(c, i + 1, env, n1, n2);
      env.pop();
    }
  }

  // Interval test: first component = the comparison holds for every count in
  // range, second = it holds for some.
  P3 compare3(const Comparison& cmp, Env& env) const {
    auto l = term3(cmp.lhs, env);
    auto r = term3(cmp.rhs, env);
    if (std::holds_alternative<Value>(l) && std::holds_alternative<Value>(r)) {
      bool v = Evaluator::compare(std::get<Value>(l), cmp.op, std::get<Value>(r));
      return {v, v};
    }
    Interval a = to_interval(l);
    Interval b = to_interval(r);
    switch (cmp.op) {
      case CmpOp::Eq:
        return {a.lo == a.hi && b.lo == b.hi && a.lo == b.lo, a.hi >= b.lo && b.hi >= a.lo};
      case CmpOp::Neq:
        return p3_not(compare3(Comparison{cmp.lhs, CmpOp::Eq, cmp.rhs}, env));
      case CmpOp::Leq:
        return {a.hi <= b.lo, a.lo <= b.hi};
      case CmpOp::Geq:
        return {a.lo >= b.hi, a.hi >= b.lo};
      case CmpOp::Lt:
        return {a.hi < b.lo, a.lo < b.hi};
      case CmpOp::Gt:
        return {a.lo > b.hi, a.hi > b.lo};
    }
    return {false, true};
  }

  Interval to_interval(const std::variant<Value, Interval>& v) const {
    if (const auto* iv = std::get_if<Interval>(&v)) return *iv;
    const auto* n = std::get_if<long long>(&std::get<Value>(v));
    if (!n) throw OracleError("interval comparison against a non-integer value");
    return Interval{*n, *n};
  }

  const Evaluator& open_;
  const std::set<std::string>& defined_;
  const AtomSet& lower_;
  const AtomSet& upper_;
};

}  // namespace detail

// ------------------------------------------------- well-founded semantics

enum class WfStatus { Total, ThreeValued };

struct WfResult {
  AtomSet lower;
  AtomSet upper;
  WfStatus status = WfStatus::Total;
  bool total() const { return status == WfStatus::Total; }
};

// Parametrized well-founded model of one definition. `open` must interpret
// every symbol of the rules except the defined predicates themselves.
inline WfResult well_founded(const Vocabulary& voc, const Structure& open,
                             const Definition& def) {
  Evaluator ev(voc, open);
  std::set<std::string> defined = def.defined();

  // Herbrand base of the defined predicates
  AtomSet base;
  for (const auto& p : defined) {
    const auto& sig = voc.predicate_types.at(p);
    std::set<Tuple>& rows = base[p];
    Tuple cur(sig.size());
    std::function<void(size_t)> rec = [&](size_t i) {
      if (i == sig.size()) {
        rows.insert(cur);
        return;
      }
      for (const auto& v : ev.domain(sig[i])) {
        cur[i] = v;
        rec(i + 1);
      }
    };
    rec(0);
  }

  // A(J): least fixpoint of one-step derivation, reading negative
  // information from J.
  auto apply = [&](const AtomSet& j) {
    AtomSet k;
    bool changed = true;
    while (changed) {
      changed = false;
      detail::Eval3 e3(ev, defined, k, j);
      for (const auto& r : def.rules) {
        // distinct head variables, in occurrence order (incl. nested in terms)
        std::vector<Variable> hv;
        std::function<void(const Term&)> collect = [&](const Term& t) {
          if (const auto* v = std::get_if<Variable>(&t.node)) {
            for (const auto& w : hv)
              if (w.name == v->name) return;
            hv.push_back(*v);
          } else if (const auto* fa = std::get_if<FuncApp>(&t.node)) {
            for (const auto& a : fa->args) collect(a);
          }
        };
        for (const auto& a : r.head_args) collect(a);
        detail::Env env;
        std::function<void(size_t)> rec = [&](size_t i) {
          if (i == hv.size()) {
            if (!e3.formula(r.body, env).first) return;
            Tuple head;
            for (const auto& a : r.head_args) head.push_back(ev.term(a, env));
            if (k[r.head].insert(head).second) changed = true;
            return;
          }
          for (const auto& v : ev.domain(hv[i].type)) {
            env.push(hv[i].name, v);
            rec(i + 1);
            env.pop();
          }
        };
        rec(0);
      }
    }
    for (const auto& p : defined) k[p];  // ensure keys exist
    return k;
  };

  AtomSet lower;
  for (const auto& p : defined) lower[p];
  AtomSet upper = base;
  while (true) {
    AtomSet nl = apply(upper);
    AtomSet nu = apply(lower);
    if (nl == lower && nu == upper) break;
    lower = std::move(nl);
    upper = std::move(nu);
  }

  WfResult out;
  out.lower = std::move(lower);
  out.upper = std::move(upper);
  out.status = (out.lower == out.upper) ? WfStatus::Total : WfStatus::ThreeValued;
  return out;
}

// ------------------------------------------------------- model checking

struct CheckResult {
  bool ok = true;
  std::string reason;
};

// Restriction of `total` to the symbols a definition leaves open.
namespace detail {

inline Structure restrict_open(const Structure& total, const std::set<std::string>& defined) {
  Structure s = total;
  for (const auto& p : defined) s.pred_interp.erase(p);
  return s;
}

}  // namespace detail

// Does `total` expand m.structure and satisfy m.theory?  `total` must
// interpret every vocabulary symbol.
inline CheckResult satisfies(const ModelExpansionProblem& m, const Structure& total) {
  for (const auto& t : m.vocabulary.types) {
    auto it = total.type_interp.find(t);
    if (it == total.type_interp.end() || it->second != m.structure.type_interp.at(t))
      return {false, "type '" + t + "' differs from the input structure"};
  }
  for (const auto& [p, rows] : m.structure.pred_interp) {
    std::set<Tuple> a(rows.begin(), rows.end());
    auto it = total.pred_interp.find(p);
    std::set<Tuple> b;
    if (it != total.pred_interp.end()) b.insert(it->second.begin(), it->second.end());
    if (a != b) return {false, "'" + p + "' differs from the input structure"};
  }
  for (const auto& [f, rows] : m.structure.func_interp) {
    auto it = total.func_interp.find(f);
    if (it == total.func_interp.end())
      return {false, "function '" + f + "' missing from the candidate"};
    std::map<Tuple, Value> a(rows.begin(), rows.end());
    std::map<Tuple, Value> b(it->second.begin(), it->second.end());
    if (a != b) return {false, "function '" + f + "' differs from the input structure"};
  }
  for (const auto& p : m.vocabulary.predicates)
    if (!total.interprets(p)) return {false, "'" + p + "' is not interpreted"};
  for (const auto& f : m.vocabulary.functions) {
    auto it = total.func_interp.find(f);
    if (it == total.func_interp.end()) return {false, "function '" + f + "' is not interpreted"};
  }

  Evaluator ev(m.vocabulary, total);
  for (size_t i = 0; i < m.theory.sentences.size(); ++i)
    if (!ev.sentence(m.theory.sentences[i]))
      return {false, "sentence " + std::to_string(i + 1) + " is false"};

  for (size_t d = 0; d < m.theory.definitions.size(); ++d) {
    const Definition& def = m.theory.definitions[d];
    std::set<std::string> defined = def.defined();
    WfResult wf = well_founded(m.vocabulary, detail::restrict_open(total, defined), def);
    if (!wf.total())
      return {false, "definition " + std::to_string(d + 1) + " has a three-valued model"};
    for (const auto& p : defined) {
      std::set<Tuple> have;
      auto it = total.pred_interp.find(p);
      if (it != total.pred_interp.end()) have.insert(it->second.begin(), it->second.end());
      if (have != wf.lower.at(p))
        return {false, "definition " + std::to_string(d + 1) + " does not derive '" + p + "'"};
    }
  }
  return {true, ""};
}

// --------------------------------------------------- brute-force expansion

// Sorts computed interpretations so structures compare canonically.
inline Structure canonical_structure(Structure s) {
  for (auto& [p, rows] : s.pred_interp) std::sort(rows.begin(), rows.end());
  for (auto& [f, rows] : s.func_interp) std::sort(rows.begin(), rows.end());
  return s;
}

// All solutions of the model expansion problem, by direct enumeration of the
// uninterpreted symbols.  Deterministic order. Throws when the search space
// exceeds `cap` candidates.
inline std::vector<Structure> solve_bruteforce(const ModelExpansionProblem& m,
                                               long long cap = 1'000'000) {
  Evaluator base_ev(m.vocabulary, m.structure);

  struct PredSlot {
    std::string name;
    std::vector<Tuple> space;  // candidate rows, product order
  };
  struct FuncSlot {
    std::string name;
    std::vector<Tuple> args;          // argument tuples, product order
    std::vector<Value> range;         // result domain
  };
  std::vector<PredSlot> preds;
  std::vector<FuncSlot> funcs;

  auto product = [&](const std::vector<std::string>& sig) {
    std::vector<Tuple> out{Tuple{}};
    for (const auto& t : sig) {
      std::vector<Tuple> next;
      for (const auto& partial : out)
        for (const auto& v : base_ev.domain(t)) {
          Tuple row = partial;
          row.push_back(v);
          next.push_back(std::move(row));
        }
      out = std::move(next);
    }
    return out;
  };

  long double space = 1;
  for (const auto& p : m.vocabulary.predicates) {
    if (m.structure.interprets(p)) continue;
    PredSlot slot{p, product(m.vocabulary.predicate_types.at(p))};
    space *= std::pow(2.0L, static_cast<long double>(slot.space.size()));
    preds.push_back(std::move(slot));
  }
  for (const auto& f : m.vocabulary.functions) {
    if (m.structure.interprets(f)) continue;
    FuncSlot slot{f, product(m.vocabulary.function_arg_types.at(f)),
                  base_ev.domain(m.vocabulary.function_result_type.at(f))};
    if (slot.range.empty() && !slot.args.empty())
      return {};  // no total function exists
    space *= std::pow(static_cast<long double>(std::max<size_t>(slot.range.size(), 1)),
                      static_cast<long double>(slot.args.size()));
    funcs.push_back(std::move(slot));
  }
  if (space > static_cast<long double>(cap))
    throw OracleError("search space of " + std::to_string(static_cast<double>(space)) +
                      " candidates exceeds the cap of " + std::to_string(cap));

  // odometer state
  std::vector<std::vector<bool>> pred_bits;
  for (const auto& p : preds) pred_bits.emplace_back(p.space.size(), false);
  std::vector<std::vector<size_t>> func_digits;
  for (const auto& f : funcs) func_digits.emplace_back(f.args.size(), 0);

  std::vector<Structure> out;
  while (true) {
    Structure cand = m.structure;
    for (size_t i = 0; i < preds.size(); ++i) {
      std::vector<Tuple>& rows = cand.pred_interp[preds[i].name];
      for (size_t b = 0; b < pred_bits[i].size(); ++b)
        if (pred_bits[i][b]) rows.push_back(preds[i].space[b]);
    }
    for (size_t i = 0; i < funcs.size(); ++i) {
      auto& rows = cand.func_interp[funcs[i].name];
      for (size_t a = 0; a < funcs[i].args.size(); ++a)
        rows.emplace_back(funcs[i].args[a], funcs[i].range[func_digits[i][a]]);
    }
    if (satisfies(m, cand).ok) out.push_back(canonical_structure(std::move(cand)));

    // advance
    bool carried = false;
    for (auto& bits : pred_bits) {
      for (size_t b = 0; b < bits.size() && !carried; ++b) {
        bits[b] = !bits[b];
        carried = bits[b];
      }
      if (carried) break;
    }
    for (size_t i = 0; i < func_digits.size() && !carried; ++i) {
      size_t radix = funcs[i].range.size();
      for (size_t a = 0; a < func_digits[i].size() && !carried; ++a) {
        func_digits[i][a] = (func_digits[i][a] + 1) % radix;
        carried = func_digits[i][a] != 0;
      }
    }
    if (!carried) break;
  }
  return out;
}

}  // namespace folasp
