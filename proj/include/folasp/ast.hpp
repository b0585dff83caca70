// folasp -- typed first-order logic with inductive definitions, model expansion.
// SPDX-License-Identifier: MIT
#ifndef FOLASP_AST_HPP
#define FOLASP_AST_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace folasp {

// Heap box with value semantics; lets recursive variants compare deeply.
template <class T>
class Box {
 public:
  Box(T v) : p_(std::make_unique<T>(std::move(v))) {}  // NOLINT: implicit
  Box(const Box& o) : p_(std::make_unique<T>(*o.p_)) {}
  Box(Box&&) noexcept = default;
  Box& operator=(const Box& o) {
    p_ = std::make_unique<T>(*o.p_);
    return *this;
  }
  Box& operator=(Box&&) noexcept = default;

  T& operator*() { return *p_; }
  const T& operator*() const { return *p_; }
  T* operator->() { return p_.get(); }
  const T* operator->() const { return p_.get(); }

  friend bool operator==(const Box& a, const Box& b) { return *a.p_ == *b.p_; }
  friend bool operator!=(const Box& a, const Box& b) { return !(a == b); }

 private:
  std::unique_ptr<T> p_;
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised by the reader; carries 1-based source position.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, int line, int col)
      : Error(msg + " (line " + std::to_string(line) + ", column " + std::to_string(col) + ")"),
        line(line),
        col(col) {}
  int line;
  int col;
};

class ValidateError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------- vocabulary

struct Vocabulary {
  // Declaration order is kept; deterministic output depends on it.
  std::vector<std::string> types;
  std::vector<std::string> predicates;             // names, order of declaration
  std::map<std::string, std::vector<std::string>> predicate_types;
  std::vector<std::string> functions;
  std::map<std::string, std::vector<std::string>> function_arg_types;
  std::map<std::string, std::string> function_result_type;

  bool is_type(const std::string& n) const {
    for (const auto& t : types)
      if (t == n) return true;
    return false;
  }
  bool is_predicate(const std::string& n) const { return predicate_types.count(n) != 0; }
  bool is_function(const std::string& n) const { return function_result_type.count(n) != 0; }
  bool declared(const std::string& n) const {
    return is_type(n) || is_predicate(n) || is_function(n);
  }

  bool operator==(const Vocabulary&) const = default;
};

// ----------------------------------------------------------------- structure

// Domain elements are either integers (names made of digits, optional minus)
// or plain symbols. They compare as values, integers before symbols.
using Value = std::variant<long long, std::string>;

inline std::string to_string(const Value& v) {
  if (std::holds_alternative<long long>(v)) return std::to_string(std::get<long long>(v));
  return std::get<std::string>(v);
}

using Tuple = std::vector<Value>;

struct Structure {
  // Interpretations in source order; set-valued comparisons sort first.
  std::map<std::string, std::vector<Value>> type_interp;
  std::map<std::string, std::vector<Tuple>> pred_interp;
  std::map<std::string, std::vector<std::pair<Tuple, Value>>> func_interp;

  bool interprets(const std::string& n) const {
    return type_interp.count(n) || pred_interp.count(n) || func_interp.count(n);
  }

  bool operator==(const Structure&) const = default;
};

// --------------------------------------------------------------------- terms

struct Formula;

// Also used for binder declarations; `type` is empty until validation fills it.
struct Variable {
  std::string name;
  std::string type;
  bool operator==(const Variable&) const = default;
};

struct IntConst {
  long long value = 0;
  bool operator==(const IntConst&) const = default;
};

struct ElemConst {
  std::string name;
  std::string type;  // filled by validation
  bool operator==(const ElemConst&) const = default;
};

struct Term;

struct FuncApp {
  std::string function;
  std::vector<Term> args;
  bool operator==(const FuncApp&) const;
};

// #{x1[T1],...,xk[Tk] : body} -- counts satisfying tuples.
struct Cardinality {
  std::vector<Variable> bound;
  Box<Formula> body;
  bool operator==(const Cardinality&) const;
};

struct Term {
  std::variant<Variable, IntConst, ElemConst, FuncApp, Cardinality> node;
  bool operator==(const Term&) const = default;
};

// ------------------------------------------------------------------ formulas

enum class CmpOp { Eq, Neq, Leq, Geq, Lt, Gt };

inline CmpOp negate(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return CmpOp::Neq;
    case CmpOp::Neq: return CmpOp::Eq;
    case CmpOp::Leq: return CmpOp::Gt;
    case CmpOp::Gt: return CmpOp::Leq;
    case CmpOp::Geq: return CmpOp::Lt;
    case CmpOp::Lt: return CmpOp::Geq;
  }
  return CmpOp::Eq;  // unreachable
}

// Mirror image: x op y  <=>  y flip(op) x.
inline CmpOp flip(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return CmpOp::Eq;
    case CmpOp::Neq: return CmpOp::Neq;
    case CmpOp::Leq: return CmpOp::Geq;
    case CmpOp::Geq: return CmpOp::Leq;
    case CmpOp::Lt: return CmpOp::Gt;
    case CmpOp::Gt: return CmpOp::Lt;
  }
  return CmpOp::Eq;  // unreachable
}

struct PredAtom {
  std::string predicate;
  std::vector<Term> args;
  bool operator==(const PredAtom&) const = default;
};

struct Comparison {
  Term lhs;
  CmpOp op;
  Term rhs;
  bool operator==(const Comparison&) const = default;
};

struct BoolConst {
  bool value = true;
  bool operator==(const BoolConst&) const = default;
};

struct Not {
  Box<Formula> f;
  bool operator==(const Not&) const = default;
};
struct And {
  Box<Formula> lhs, rhs;
  bool operator==(const And&) const = default;
};
struct Or {
  Box<Formula> lhs, rhs;
  bool operator==(const Or&) const = default;
};
struct Implies {
  Box<Formula> lhs, rhs;
  bool operator==(const Implies&) const = default;
};
struct Iff {
  Box<Formula> lhs, rhs;
  bool operator==(const Iff&) const = default;
};

enum class QuantKind { Forall, Exists };

// One variable per node; a source block `!x,y:` parses to nested nodes.
struct Quant {
  QuantKind kind;
  Variable var;
  Box<Formula> body;
  bool operator==(const Quant&) const = default;
};

struct Formula {
  std::variant<PredAtom, Comparison, BoolConst, Not, And, Or, Implies, Iff, Quant> node;
  bool operator==(const Formula&) const = default;
};

inline bool FuncApp::operator==(const FuncApp& o) const {
  return function == o.function && args == o.args;
}
inline bool Cardinality::operator==(const Cardinality& o) const {
  return bound == o.bound && body == o.body;
}

// Convenience constructors; normalization code builds a lot of formulas.
inline Formula mk_not(Formula f) { return Formula{Not{Box<Formula>(std::move(f))}}; }
inline Formula mk_and(Formula a, Formula b) {
  return Formula{And{Box<Formula>(std::move(a)), Box<Formula>(std::move(b))}};
}
inline Formula mk_or(Formula a, Formula b) {
  return Formula{Or{Box<Formula>(std::move(a)), Box<Formula>(std::move(b))}};
}
inline Formula mk_quant(QuantKind k, Variable v, Formula body) {
  return Formula{Quant{k, std::move(v), Box<Formula>(std::move(body))}};
}

// ------------------------------------------------------------------- theory

// One rule of an inductive definition: P(x1,...,xn) <- body.
// Head arguments are simple terms (variables after validation, or integers);
// free variables of the body must occur in the head.
struct DefRule {
  std::string head;
  std::vector<Term> head_args;
  Formula body;
  bool operator==(const DefRule&) const = default;
};

struct Definition {
  std::vector<DefRule> rules;
  std::set<std::string> defined() const {
    std::set<std::string> out;
    for (const auto& r : rules) out.insert(r.head);
    return out;
  }
  bool operator==(const Definition&) const = default;
};

struct Theory {
  std::vector<Formula> sentences;
  std::vector<Definition> definitions;
  bool operator==(const Theory&) const = default;
};

struct ModelExpansionProblem {
  Vocabulary vocabulary;
  Structure structure;
  Theory theory;
  bool operator==(const ModelExpansionProblem&) const = default;
};

// ------------------------------------------------------------ free variables

namespace detail {
inline void free_vars_term(const Term& t, std::vector<std::string>& bound,
                           std::vector<Variable>& out);

inline void free_vars_formula(const Formula& f, std::vector<std::string>& bound,
                              std::vector<Variable>& out) {
  std::visit(
      [&](const auto& n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, PredAtom>) {
          for (const auto& a : n.args) free_vars_term(a, bound, out);
        } else if constexpr (std::is_same_v<N, Comparison>) {
          free_vars_term(n.lhs, bound, out);
          free_vars_term(n.rhs, bound, out);
        } else if constexpr (std::is_same_v<N, BoolConst>) {
        } else if constexpr (std::is_same_v<N, Not>) {
          free_vars_formula(*n.f, bound, out);
        } else if constexpr (std::is_same_v<N, Quant>) {
          bound.push_back(n.var.name);
          free_vars_formula(*n.body, bound, out);
          bound.pop_back();
        } else {
          free_vars_formula(*n.lhs, bound, out);
          free_vars_formula(*n.rhs, bound, out);
        }
      },
      f.node);
}

inline void free_vars_term(const Term& t, std::vector<std::string>& bound,
                           std::vector<Variable>& out) {
  std::visit(
      [&](const auto& n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, Variable>) {
          for (const auto& b : bound)
            if (b == n.name) return;
          for (const auto& v : out)
            if (v.name == n.name) return;
          out.push_back(n);
        } else if constexpr (std::is_same_v<N, FuncApp>) {
          for (const auto& a : n.args) free_vars_term(a, bound, out);
        } else if constexpr (std::is_same_v<N, Cardinality>) {
          for (const auto& v : n.bound) bound.push_back(v.name);
          free_vars_formula(*n.body, bound, out);
          for (size_t i = 0; i < n.bound.size(); ++i) bound.pop_back();
        }
      },
      t.node);
}
}  // namespace detail

// Free variables in deterministic first-occurrence order.
inline std::vector<Variable> free_variables(const Formula& f) {
  std::vector<std::string> bound;
  std::vector<Variable> out;
  detail::free_vars_formula(f, bound, out);
  return out;
}

}  // namespace folasp

#endif  // FOLASP_AST_HPP
