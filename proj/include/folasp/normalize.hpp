// SPDX-License-Identifier: MIT
//
// Normalization pipeline: negation normal form, term unnesting, function
// elimination, comparison negation folding.  After normalize():
//   - no Implies/Iff anywhere; Not appears only on predicate atoms
//   - every atom is P(simple...) or t ~ s with t a simple term or a
//     cardinality and s a simple term
//   - the vocabulary is function free; each function graph lives in a
//     same-named predicate of arity n+1
#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "folasp/ast.hpp"
#include "folasp/validate.hpp"

namespace folasp {

// ------------------------------------------------------------ shape checks

inline bool is_simple(const Term& t) {
  return !std::holds_alternative<FuncApp>(t.node) &&
         !std::holds_alternative<Cardinality>(t.node);
}

namespace detail {

inline bool nnf_term(const Term& t);

inline bool nnf_formula(const Formula& f, bool under_not) {
  return std::visit(
      [&](const auto& n) -> bool {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, PredAtom>) {
          for (const auto& a : n.args)
            if (!nnf_term(a)) return false;
          return true;
        } else if constexpr (std::is_same_v<N, Comparison>) {
          return nnf_term(n.lhs) && nnf_term(n.rhs);
        } else if constexpr (std::is_same_v<N, BoolConst>) {
          return !under_not;
        } else if constexpr (std::is_same_v<N, Not>) {
          return !under_not && nnf_formula(*n.f, true);
        } else if constexpr (std::is_same_v<N, And> || std::is_same_v<N, Or>) {
          return !under_not && nnf_formula(*n.lhs, false) && nnf_formula(*n.rhs, false);
        } else if constexpr (std::is_same_v<N, Implies> || std::is_same_v<N, Iff>) {
          return false;
        } else {  // Quant
          return !under_not && nnf_formula(*n.body, false);
        }
      },
      f.node);
}

inline bool nnf_term(const Term& t) {
  if (const auto* c = std::get_if<Cardinality>(&t.node)) return nnf_formula(*c->body, false);
  if (const auto* fa = std::get_if<FuncApp>(&t.node)) {
    for (const auto& a : fa->args)
      if (!nnf_term(a)) return false;
  }
  return true;
}

}  // namespace detail

inline bool is_nnf(const Formula& f) { return detail::nnf_formula(f, false); }

// Acceptable atoms after unnesting:
//   P(simple...)                     predicate atom
//   F(simple...) = s, or its ~=      function graph literal, s simple
//   simple ~ simple
//   #{...} ~ simple                  cardinality comparison (body recursed)
namespace detail {

inline bool unnested_formula(const Formula& f);

inline bool args_simple(const std::vector<Term>& args) {
  return std::all_of(args.begin(), args.end(), [](const Term& t) { return is_simple(t); });
}

inline bool unnested_atom(const Formula& f) {
  if (const auto* p = std::get_if<PredAtom>(&f.node)) return args_simple(p->args);
  if (const auto* c = std::get_if<Comparison>(&f.node)) {
    if (!is_simple(c->rhs)) return false;
    if (const auto* fa = std::get_if<FuncApp>(&c->lhs.node))
      return (c->op == CmpOp::Eq || c->op == CmpOp::Neq) && args_simple(fa->args);
    if (const auto* card = std::get_if<Cardinality>(&c->lhs.node))
      return unnested_formula(*card->body);
    return is_simple(c->lhs);
  }
  return true;  // BoolConst
}

inline bool unnested_formula(const Formula& f) {
  return std::visit(
      [&](const auto& n) -> bool {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, PredAtom> || std::is_same_v<N, Comparison> ||
                      std::is_same_v<N, BoolConst>) {
          return unnested_atom(f);
        } else if constexpr (std::is_same_v<N, Not>) {
          return unnested_formula(*n.f);
        } else if constexpr (std::is_same_v<N, And> || std::is_same_v<N, Or> ||
                             std::is_same_v<N, Implies> || std::is_same_v<N, Iff>) {
          return unnested_formula(*n.lhs) && unnested_formula(*n.rhs);
        } else {  // Quant
          return unnested_formula(*n.body);
        }
      },
      f.node);
}

inline bool function_free_formula(const Formula& f);

inline bool function_free_term(const Term& t) {
  if (std::holds_alternative<FuncApp>(t.node)) return false;
  if (const auto* c = std::get_if<Cardinality>(&t.node)) return function_free_formula(*c->body);
  return true;
}

inline bool function_free_formula(const Formula& f) {
  return std::visit(
      [&](const auto& n) -> bool {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, PredAtom>) {
          return std::all_of(n.args.begin(), n.args.end(), function_free_term);
        } else if constexpr (std::is_same_v<N, Comparison>) {
          return function_free_term(n.lhs) && function_free_term(n.rhs);
        } else if constexpr (std::is_same_v<N, BoolConst>) {
          return true;
        } else if constexpr (std::is_same_v<N, Not>) {
          return function_free_formula(*n.f);
        } else if constexpr (std::is_same_v<N, And> || std::is_same_v<N, Or> ||
                             std::is_same_v<N, Implies> || std::is_same_v<N, Iff>) {
          return function_free_formula(*n.lhs) && function_free_formula(*n.rhs);
        } else {  // Quant
          return function_free_formula(*n.body);
        }
      },
      f.node);
}

}  // namespace detail

inline bool is_unnested(const Formula& f) { return detail::unnested_formula(f); }

inline bool is_function_free(const Formula& f) { return detail::function_free_formula(f); }

// True if some comparison or boolean constant still sits under a negation.
inline bool has_negated_comparisons(const Formula& f) {
  bool found = false;
  std::vector<const Formula*> stack{&f};
  while (!stack.empty() && !found) {
    const Formula* g = stack.back();
    stack.pop_back();
    std::visit(
        [&](const auto& n) {
          using N = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<N, Not>) {
            if (!std::holds_alternative<PredAtom>(n.f->node)) found = true;
            stack.push_back(&*n.f);
          } else if constexpr (std::is_same_v<N, And> || std::is_same_v<N, Or> ||
                               std::is_same_v<N, Implies> || std::is_same_v<N, Iff>) {
            stack.push_back(&*n.lhs);
            stack.push_back(&*n.rhs);
          } else if constexpr (std::is_same_v<N, Quant>) {
            stack.push_back(&*n.body);
          } else if constexpr (std::is_same_v<N, Comparison>) {
            if (const auto* c = std::get_if<Cardinality>(&n.lhs.node)) stack.push_back(&*c->body);
            if (const auto* c = std::get_if<Cardinality>(&n.rhs.node)) stack.push_back(&*c->body);
          }
        },
        g->node);
  }
  return found;
}

// -------------------------------------------------------------------- NNF

namespace detail {

inline Term nnf_card_bodies(const Term& t);

inline Formula nnf(const Formula& f, bool pos);

// true/false absorb through connectives; quantifiers are left alone because
// a type may be empty in some other structure.
inline Formula fold_and(Formula a, Formula b) {
  if (const auto* c = std::get_if<BoolConst>(&a.node)) return c->value ? std::move(b) : std::move(a);
  if (const auto* c = std::get_if<BoolConst>(&b.node)) return c->value ? std::move(a) : std::move(b);
  return mk_and(std::move(a), std::move(b));
}

inline Formula fold_or(Formula a, Formula b) {
  if (const auto* c = std::get_if<BoolConst>(&a.node)) return c->value ? std::move(a) : std::move(b);
  if (const auto* c = std::get_if<BoolConst>(&b.node)) return c->value ? std::move(b) : std::move(a);
  return mk_or(std::move(a), std::move(b));
}

inline Term nnf_card_bodies(const Term& t) {
  Term out = t;
  if (auto* c = std::get_if<Cardinality>(&out.node)) {
    *c->body = nnf(*c->body, true);
  } else if (auto* fa = std::get_if<FuncApp>(&out.node)) {
    for (auto& a : fa->args) a = nnf_card_bodies(a);
  }
  return out;
}

inline Formula nnf(const Formula& f, bool pos) {
  return std::visit(
      [&](const auto& n) -> Formula {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, PredAtom>) {
          PredAtom a = n;
          for (auto& t : a.args) t = nnf_card_bodies(t);
          Formula out{std::move(a)};
          return pos ? std::move(out) : mk_not(std::move(out));
        } else if constexpr (std::is_same_v<N, Comparison>) {
          Comparison c{nnf_card_bodies(n.lhs), n.op, nnf_card_bodies(n.rhs)};
          Formula out{std::move(c)};
          return pos ? std::move(out) : mk_not(std::move(out));
        } else if constexpr (std::is_same_v<N, BoolConst>) {
          return Formula{BoolConst{pos ? n.value : !n.value}};
        } else if constexpr (std::is_same_v<N, Not>) {
          return nnf(*n.f, !pos);
        } else if constexpr (std::is_same_v<N, And>) {
          Formula l = nnf(*n.lhs, pos);
          Formula r = nnf(*n.rhs, pos);
          return pos ? fold_and(std::move(l), std::move(r)) : fold_or(std::move(l), std::move(r));
        } else if constexpr (std::is_same_v<N, Or>) {
          Formula l = nnf(*n.lhs, pos);
          Formula r = nnf(*n.rhs, pos);
          return pos ? fold_or(std::move(l), std::move(r)) : fold_and(std::move(l), std::move(r));
        } else if constexpr (std::is_same_v<N, Implies>) {
          Formula l = nnf(*n.lhs, !pos);
          Formula r = nnf(*n.rhs, pos);
          return pos ? fold_or(std::move(l), std::move(r)) : fold_and(std::move(l), std::move(r));
        } else if constexpr (std::is_same_v<N, Iff>) {
          if (pos) {
            Formula a = fold_or(nnf(*n.lhs, false), nnf(*n.rhs, true));
            Formula b = fold_or(nnf(*n.lhs, true), nnf(*n.rhs, false));
            return fold_and(std::move(a), std::move(b));
          }
          Formula a = fold_and(nnf(*n.lhs, true), nnf(*n.rhs, false));
          Formula b = fold_and(nnf(*n.lhs, false), nnf(*n.rhs, true));
          return fold_or(std::move(a), std::move(b));
        } else {  // Quant
          QuantKind k = n.kind;
          if (!pos) k = (k == QuantKind::Forall) ? QuantKind::Exists : QuantKind::Forall;
          return mk_quant(k, n.var, nnf(*n.body, pos));
        }
      },
      f.node);
}

}  // namespace detail

inline Formula to_nnf(const Formula& f) { return detail::nnf(f, true); }

// ------------------------------------------------------- comparison folding

namespace detail {

inline Term push_cmp_term(const Term& t);

inline Formula push_cmp(const Formula& f, bool pos) {
  return std::visit(
      [&](const auto& n) -> Formula {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, Not>) {
          return push_cmp(*n.f, !pos);
        } else if constexpr (std::is_same_v<N, Comparison>) {
          Comparison c{push_cmp_term(n.lhs), pos ? n.op : negate(n.op), push_cmp_term(n.rhs)};
          return Formula{std::move(c)};
        } else if constexpr (std::is_same_v<N, BoolConst>) {
          return Formula{BoolConst{pos ? n.value : !n.value}};
        } else if constexpr (std::is_same_v<N, PredAtom>) {
          Formula out{n};
          return pos ? std::move(out) : mk_not(std::move(out));
        } else if constexpr (std::is_same_v<N, And>) {
          Formula l = push_cmp(*n.lhs, pos);
          Formula r = push_cmp(*n.rhs, pos);
          return pos ? mk_and(std::move(l), std::move(r)) : mk_or(std::move(l), std::move(r));
        } else if constexpr (std::is_same_v<N, Or>) {
          Formula l = push_cmp(*n.lhs, pos);
          Formula r = push_cmp(*n.rhs, pos);
          return pos ? mk_or(std::move(l), std::move(r)) : mk_and(std::move(l), std::move(r));
        } else if constexpr (std::is_same_v<N, Implies>) {
          Formula l = push_cmp(*n.lhs, !pos);
          Formula r = push_cmp(*n.rhs, pos);
          return pos ? mk_or(std::move(l), std::move(r)) : mk_and(std::move(l), std::move(r));
        } else if constexpr (std::is_same_v<N, Iff>) {
          // keep the connective; negation distributes to one side
          Formula l = push_cmp(*n.lhs, pos);
          Formula r = push_cmp(*n.rhs, true);
          return Formula{Iff{Box<Formula>(std::move(l)), Box<Formula>(std::move(r))}};
        } else {  // Quant
          QuantKind k = n.kind;
          if (!pos) k = (k == QuantKind::Forall) ? QuantKind::Exists : QuantKind::Forall;
          return mk_quant(k, n.var, push_cmp(*n.body, pos));
        }
      },
      f.node);
}

inline Term push_cmp_term(const Term& t) {
  Term out = t;
  if (auto* c = std::get_if<Cardinality>(&out.node)) {
    *c->body = push_cmp(*c->body, true);
  } else if (auto* fa = std::get_if<FuncApp>(&out.node)) {
    for (auto& a : fa->args) a = push_cmp_term(a);
  }
  return out;
}

}  // namespace detail

inline Formula push_comparison_negations(const Formula& f) { return detail::push_cmp(f, true); }

// ------------------------------------------------------------- normalizer

struct NormalizedProblem {
  ModelExpansionProblem problem;  // function free; exactness sentences kept separate
  std::vector<Formula> exactness;  // one per eliminated uninterpreted function
  std::vector<std::string> function_preds;  // graph predicates, in declaration order
  std::vector<std::string> internal_types;  // count ranges added while unnesting

  // The normalized problem with exactness constraints folded into the theory.
  ModelExpansionProblem as_problem() const {
    ModelExpansionProblem m = problem;
    for (const auto& e : exactness) m.theory.sentences.push_back(e);
    return m;
  }
};

class Normalizer {
 public:
  explicit Normalizer(ModelExpansionProblem m) : m_(std::move(m)) {}

  NormalizedProblem run() {
    m_ = validate_problem(std::move(m_));
    for (auto& s : m_.theory.sentences) s = to_nnf(s);
    for (auto& d : m_.theory.definitions)
      for (auto& r : d.rules) r.body = to_nnf(r.body);

    for (auto& s : m_.theory.sentences) s = unnest(s);
    for (auto& d : m_.theory.definitions)
      for (auto& r : d.rules) r.body = unnest(r.body);

    eliminate_functions();

    for (auto& s : m_.theory.sentences) s = push_comparison_negations(s);
    for (auto& d : m_.theory.definitions)
      for (auto& r : d.rules) r.body = push_comparison_negations(r.body);
    for (auto& e : exactness_) e = push_comparison_negations(e);

    check_invariants();
    NormalizedProblem out;
    out.problem = std::move(m_);
    out.exactness = std::move(exactness_);
    out.function_preds = std::move(function_preds_);
    out.internal_types = std::move(internal_types_);
    return out;
  }

 private:
  // ---- unnesting

  Formula unnest(const Formula& sentence) {
    used_names_.clear();
    for (const auto& v : free_variables(sentence)) used_names_.insert(v.name);
    collect_binders(sentence);
    Formula f = sentence;
    while (true) {
      auto r = rewrite_one(f);
      if (!r) break;
      f = std::move(*r);
    }
    return f;
  }

  void collect_binders(const Formula& f) {
    std::visit(
        [&](const auto& n) {
          using N = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<N, Quant>) {
            used_names_.insert(n.var.name);
            collect_binders(*n.body);
          } else if constexpr (std::is_same_v<N, Not>) {
            collect_binders(*n.f);
          } else if constexpr (std::is_same_v<N, And> || std::is_same_v<N, Or> ||
                               std::is_same_v<N, Implies> || std::is_same_v<N, Iff>) {
            collect_binders(*n.lhs);
            collect_binders(*n.rhs);
          } else if constexpr (std::is_same_v<N, PredAtom>) {
            for (const auto& t : n.args) collect_binders_term(t);
          } else if constexpr (std::is_same_v<N, Comparison>) {
            collect_binders_term(n.lhs);
            collect_binders_term(n.rhs);
          }
        },
        f.node);
  }

  void collect_binders_term(const Term& t) {
    if (const auto* c = std::get_if<Cardinality>(&t.node)) {
      for (const auto& v : c->bound) used_names_.insert(v.name);
      collect_binders(*c->body);
    } else if (const auto* fa = std::get_if<FuncApp>(&t.node)) {
      for (const auto& a : fa->args) collect_binders_term(a);
    }
  }

  std::string fresh_var() {
    while (true) {
      std::string cand = "u" + std::to_string(++fresh_counter_);
      if (!used_names_.count(cand) && !m_.vocabulary.declared(cand)) {
        used_names_.insert(cand);
        return cand;
      }
    }
  }

  // One rewrite step anywhere in the formula; nullopt when fully unnested.
  std::optional<Formula> rewrite_one(const Formula& f) {
    return std::visit(
        [&](const auto& n) -> std::optional<Formula> {
          using N = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<N, PredAtom> || std::is_same_v<N, Comparison>) {
            return rewrite_atom(f, false);
          } else if constexpr (std::is_same_v<N, Not>) {
            // literal is the rewrite unit so the guard stays outside negation
            if (std::holds_alternative<PredAtom>(n.f->node) ||
                std::holds_alternative<Comparison>(n.f->node))
              return rewrite_atom(*n.f, true);
            return std::nullopt;
          } else if constexpr (std::is_same_v<N, And> || std::is_same_v<N, Or> ||
                               std::is_same_v<N, Implies> || std::is_same_v<N, Iff>) {
            if (auto l = rewrite_one(*n.lhs)) {
              N out = n;
              *out.lhs = std::move(*l);
              return Formula{std::move(out)};
            }
            if (auto r = rewrite_one(*n.rhs)) {
              N out = n;
              *out.rhs = std::move(*r);
              return Formula{std::move(out)};
            }
            return std::nullopt;
          } else if constexpr (std::is_same_v<N, Quant>) {
            if (auto b = rewrite_one(*n.body)) {
              return mk_quant(n.kind, n.var, std::move(*b));
            }
            return std::nullopt;
          } else {
            return std::nullopt;  // BoolConst
          }
        },
        f.node);
  }

  // Rewrites the first violation in a (possibly negated) atom.  `negated`
  // only tells us how to rebuild the literal.
  std::optional<Formula> rewrite_atom(const Formula& atom, bool negated) {
    // cardinality on the right flips to the left
    if (const auto* c = std::get_if<Comparison>(&atom.node)) {
      if (std::holds_alternative<Cardinality>(c->rhs.node) &&
          !std::holds_alternative<Cardinality>(c->lhs.node)) {
        Formula flipped{Comparison{c->rhs, flip(c->op), c->lhs}};
        return negated ? mk_not(std::move(flipped)) : std::move(flipped);
      }
    }

    // recurse into cardinality bodies first; their violations stay local
    if (const auto* c = std::get_if<Comparison>(&atom.node)) {
      if (const auto* card = std::get_if<Cardinality>(&c->lhs.node)) {
        if (auto b = rewrite_one(*card->body)) {
          Comparison out = *c;
          *std::get<Cardinality>(out.lhs.node).body = std::move(*b);
          Formula g{std::move(out)};
          return negated ? mk_not(std::move(g)) : std::move(g);
        }
      }
    }

    const Term* viol = find_violation_in_atom(atom);
    if (!viol) return std::nullopt;

    Term pulled = *viol;
    std::string result_type = pulled_type(pulled);
    Variable u{fresh_var(), result_type};

    Formula replaced = replace_in_atom(atom, pulled, u);
    if (negated) replaced = mk_not(std::move(replaced));
    Formula guard = mk_not(Formula{Comparison{std::move(pulled), CmpOp::Eq, Term{u}}});
    return mk_quant(QuantKind::Forall, u, mk_or(std::move(guard), std::move(replaced)));
  }

  std::string pulled_type(const Term& t) {
    if (const auto* fa = std::get_if<FuncApp>(&t.node))
      return m_.vocabulary.function_result_type.at(fa->function);
    const auto& card = std::get<Cardinality>(t.node);
    long long n = 1;
    for (const auto& v : card.bound) {
      n *= static_cast<long long>(m_.structure.type_interp.at(v.type).size());
    }
    return ensure_count_type(n);
  }

  // Internal integer range 0..n used to name a cardinality's value.
  std::string ensure_count_type(long long n) {
    std::string name = "_cnt" + std::to_string(n);
    if (!m_.vocabulary.is_type(name)) {
      m_.vocabulary.types.push_back(name);
      std::vector<Value>& dom = m_.structure.type_interp[name];
      for (long long i = 0; i <= n; ++i) dom.push_back(Value{i});
      internal_types_.push_back(name);
    }
    return name;
  }

  // Innermost-leftmost subterm that sits in a position where it may not.
  const Term* find_violation_in_atom(const Formula& atom) {
    if (const auto* p = std::get_if<PredAtom>(&atom.node)) {
      for (const auto& a : p->args)
        if (const Term* v = find_violation(a, false, false)) return v;
      return nullptr;
    }
    const auto& c = std::get<Comparison>(atom.node);
    bool lhs_func_ok = (c.op == CmpOp::Eq || c.op == CmpOp::Neq);
    if (const Term* v = find_violation(c.lhs, lhs_func_ok, true)) return v;
    return find_violation(c.rhs, false, false);
  }

  const Term* find_violation(const Term& t, bool func_ok_here, bool card_ok_here) {
    if (const auto* fa = std::get_if<FuncApp>(&t.node)) {
      for (const auto& a : fa->args)
        if (const Term* v = find_violation(a, false, false)) return v;
      return func_ok_here ? nullptr : &t;
    }
    if (std::holds_alternative<Cardinality>(t.node)) {
      return card_ok_here ? nullptr : &t;
    }
    return nullptr;
  }

  // All occurrences structurally equal to `what` become variable u.
  Formula replace_in_atom(const Formula& atom, const Term& what, const Variable& u) {
    if (const auto* p = std::get_if<PredAtom>(&atom.node)) {
      PredAtom out = *p;
      for (auto& a : out.args) a = replace_term(a, what, u);
      return Formula{std::move(out)};
    }
    const auto& c = std::get<Comparison>(atom.node);
    return Formula{Comparison{replace_term(c.lhs, what, u), c.op, replace_term(c.rhs, what, u)}};
  }

  Term replace_term(const Term& t, const Term& what, const Variable& u) {
    if (t == what) return Term{u};
    Term out = t;
    if (auto* fa = std::get_if<FuncApp>(&out.node)) {
      for (auto& a : fa->args) a = replace_term(a, what, u);
    }
    return out;
  }

  // ---- function elimination

  void eliminate_functions() {
    for (const auto& fn : m_.vocabulary.functions) {
      std::vector<std::string> sig = m_.vocabulary.function_arg_types.at(fn);
      std::string res = m_.vocabulary.function_result_type.at(fn);
      sig.push_back(res);
      m_.vocabulary.predicates.push_back(fn);
      m_.vocabulary.predicate_types[fn] = std::move(sig);
      function_preds_.push_back(fn);

      auto it = m_.structure.func_interp.find(fn);
      if (it != m_.structure.func_interp.end()) {
        std::vector<Tuple>& rows = m_.structure.pred_interp[fn];
        for (const auto& [args, val] : it->second) {
          Tuple row = args;
          row.push_back(val);
          rows.push_back(std::move(row));
        }
        m_.structure.func_interp.erase(it);
      } else {
        exactness_.push_back(exactness_sentence(fn, res));
      }
    }
    m_.vocabulary.functions.clear();
    m_.vocabulary.function_arg_types.clear();
    m_.vocabulary.function_result_type.clear();

    for (auto& s : m_.theory.sentences) s = graphs(s);
    for (auto& d : m_.theory.definitions)
      for (auto& r : d.rules) r.body = graphs(r.body);
  }

  // !x1[T1]...!xn[Tn]: #{y[Tr] : P(x1..xn,y)} = 1
  Formula exactness_sentence(const std::string& fn, const std::string& res) {
    const auto& sig = m_.vocabulary.predicate_types.at(fn);
    std::vector<Variable> vars;
    for (size_t i = 0; i + 1 < sig.size(); ++i)
      vars.push_back(Variable{"x" + std::to_string(i + 1), sig[i]});
    Variable y{"y", res};
    std::vector<Term> args;
    for (const auto& v : vars) args.push_back(Term{v});
    args.push_back(Term{y});
    Formula body{PredAtom{fn, std::move(args)}};
    Cardinality card{{y}, Box<Formula>(std::move(body))};
    Formula f{Comparison{Term{std::move(card)}, CmpOp::Eq, Term{IntConst{1}}}};
    for (auto it = vars.rbegin(); it != vars.rend(); ++it)
      f = mk_quant(QuantKind::Forall, *it, std::move(f));
    return f;
  }

  Formula graphs(const Formula& f) {
    return std::visit(
        [&](const auto& n) -> Formula {
          using N = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<N, Comparison>) {
            if (const auto* fa = std::get_if<FuncApp>(&n.lhs.node)) {
              PredAtom a{fa->function, fa->args};
              a.args.push_back(graphs_term(n.rhs));
              for (auto& t : a.args) t = graphs_term(t);
              Formula out{std::move(a)};
              return (n.op == CmpOp::Eq) ? std::move(out) : mk_not(std::move(out));
            }
            return Formula{Comparison{graphs_term(n.lhs), n.op, graphs_term(n.rhs)}};
          } else if constexpr (std::is_same_v<N, PredAtom>) {
            PredAtom out = n;
            for (auto& t : out.args) t = graphs_term(t);
            return Formula{std::move(out)};
          } else if constexpr (std::is_same_v<N, BoolConst>) {
            return f;
          } else if constexpr (std::is_same_v<N, Not>) {
            Formula inner = graphs(*n.f);
            if (auto* nn = std::get_if<Not>(&inner.node)) return std::move(*nn->f);
            return mk_not(std::move(inner));
          } else if constexpr (std::is_same_v<N, And> || std::is_same_v<N, Or> ||
                               std::is_same_v<N, Implies> || std::is_same_v<N, Iff>) {
            N out = n;
            *out.lhs = graphs(*n.lhs);
            *out.rhs = graphs(*n.rhs);
            return Formula{std::move(out)};
          } else {  // Quant
            return mk_quant(n.kind, n.var, graphs(*n.body));
          }
        },
        f.node);
  }

  Term graphs_term(const Term& t) {
    Term out = t;
    if (auto* c = std::get_if<Cardinality>(&out.node)) *c->body = graphs(*c->body);
    return out;  // unnesting left no FuncApp outside graph literals
  }

  // ---- invariants

  void check_invariants() {
    auto check = [&](const Formula& f, const char* where) {
      if (!is_nnf(f)) throw std::logic_error(std::string("normalize: not NNF in ") + where);
      if (!is_unnested(f))
        throw std::logic_error(std::string("normalize: nested term in ") + where);
      if (!is_function_free(f))
        throw std::logic_error(std::string("normalize: function left in ") + where);
      if (has_negated_comparisons(f))
        throw std::logic_error(std::string("normalize: negated comparison in ") + where);
    };
    for (const auto& s : m_.theory.sentences) check(s, "sentence");
    for (const auto& d : m_.theory.definitions)
      for (const auto& r : d.rules) check(r.body, "rule body");
    for (const auto& e : exactness_) check(e, "exactness");
    if (!m_.vocabulary.functions.empty())
      throw std::logic_error("normalize: vocabulary still has functions");
  }

  ModelExpansionProblem m_;
  std::vector<Formula> exactness_;
  std::vector<std::string> function_preds_;
  std::vector<std::string> internal_types_;
  std::set<std::string> used_names_;
  int fresh_counter_ = 0;
};

inline NormalizedProblem normalize(const ModelExpansionProblem& m) {
  return Normalizer(m).run();
}

}  // namespace folasp
