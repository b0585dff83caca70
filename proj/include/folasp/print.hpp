// Pretty-printer for problems and formulas, emitting the input grammar.
// SPDX-License-Identifier: MIT
#ifndef FOLASP_PRINT_HPP
#define FOLASP_PRINT_HPP

#include <ostream>
#include <sstream>

#include "folasp/ast.hpp"

namespace folasp {

inline const char* cmp_token(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "=";
    case CmpOp::Neq: return "~=";
    case CmpOp::Leq: return "=<";
    case CmpOp::Geq: return ">=";
    case CmpOp::Lt: return "<";
    case CmpOp::Gt: return ">";
  }
  return "=";  // unreachable
}

namespace detail {

void print_formula(std::ostream& os, const Formula& f, int min_level, bool tail);

inline void print_var_decl(std::ostream& os, const Variable& v) {
  os << v.name;
  if (!v.type.empty()) os << "[" << v.type << "]";
}

inline void print_term(std::ostream& os, const Term& t) {
  std::visit(
      [&](const auto& n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, Variable>) {
          os << n.name;
        } else if constexpr (std::is_same_v<N, IntConst>) {
          os << n.value;
        } else if constexpr (std::is_same_v<N, ElemConst>) {
          os << n.name;
        } else if constexpr (std::is_same_v<N, FuncApp>) {
          os << n.function;
          if (!n.args.empty()) {
            os << "(";
            for (size_t i = 0; i < n.args.size(); ++i) {
              if (i) os << ", ";
              print_term(os, n.args[i]);
            }
            os << ")";
          }
        } else if constexpr (std::is_same_v<N, Cardinality>) {
          os << "#{";
          for (size_t i = 0; i < n.bound.size(); ++i) {
            if (i) os << ", ";
            print_var_decl(os, n.bound[i]);
          }
          os << " : ";
          print_formula(os, *n.body, 1, true);
          os << "}";
        }
      },
      t.node);
}

// Levels: <=> 1, => 2, | 3, & 4, ~ 5, atoms 6. Quantifiers scope maximally
// right, so they print bare only in tail position and parenthesize elsewhere.
inline void print_formula(std::ostream& os, const Formula& f, int min_level, bool tail) {
  std::visit(
      [&](const auto& n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, PredAtom>) {
          os << n.predicate;
          if (!n.args.empty()) {
            os << "(";
            for (size_t i = 0; i < n.args.size(); ++i) {
              if (i) os << ", ";
              print_term(os, n.args[i]);
            }
            os << ")";
          }
        } else if constexpr (std::is_same_v<N, Comparison>) {
          print_term(os, n.lhs);
          os << " " << cmp_token(n.op) << " ";
          print_term(os, n.rhs);
        } else if constexpr (std::is_same_v<N, BoolConst>) {
          os << (n.value ? "true" : "false");
        } else if constexpr (std::is_same_v<N, Quant>) {
          if (!tail) os << "(";
          os << (n.kind == QuantKind::Forall ? "!" : "?");
          print_var_decl(os, n.var);
          os << ": ";
          print_formula(os, *n.body, 1, true);
          if (!tail) os << ")";
        } else if constexpr (std::is_same_v<N, Not>) {
          os << "~";
          print_formula(os, *n.f, 5, false);
        } else {
          int level = std::is_same_v<N, And>       ? 4
                      : std::is_same_v<N, Or>      ? 3
                      : std::is_same_v<N, Implies> ? 2
                                                   : 1;
          bool parens = level < min_level;
          if (parens) os << "(";
          const char* tok = std::is_same_v<N, And>       ? " & "
                            : std::is_same_v<N, Or>      ? " | "
                            : std::is_same_v<N, Implies> ? " => "
                                                         : " <=> ";
          bool in_tail = tail || parens;
          if constexpr (std::is_same_v<N, Implies>) {  // right-associative
            print_formula(os, *n.lhs, level + 1, false);
            os << tok;
            print_formula(os, *n.rhs, level, in_tail);
          } else {  // left-associative
            print_formula(os, *n.lhs, level, false);
            os << tok;
            print_formula(os, *n.rhs, level + 1, in_tail);
          }
          if (parens) os << ")";
        }
      },
      f.node);
}

inline void print_tuple(std::ostream& os, const Tuple& t) {
  for (size_t i = 0; i < t.size(); ++i) {
    if (i) os << ", ";
    os << to_string(t[i]);
  }
}

}  // namespace detail

inline std::string to_string(const Formula& f) {
  std::ostringstream os;
  detail::print_formula(os, f, 1, true);
  return os.str();
}

inline std::string to_string(const Term& t) {
  std::ostringstream os;
  detail::print_term(os, t);
  return os.str();
}

inline void print_structure_block(std::ostream& os, const Vocabulary& voc, const Structure& s,
                                  const std::string& indent = "  ") {
  os << "structure {\n";
  for (const auto& t : voc.types) {
    auto it = s.type_interp.find(t);
    if (it == s.type_interp.end()) continue;
    os << indent << t << " = {";
    for (size_t i = 0; i < it->second.size(); ++i) {
      if (i) os << ", ";
      os << to_string(it->second[i]);
    }
    os << "}\n";
  }
  for (const auto& p : voc.predicates) {
    auto it = s.pred_interp.find(p);
    if (it == s.pred_interp.end()) continue;
    if (voc.predicate_types.at(p).empty()) {
      os << indent << p << " = " << (it->second.empty() ? "false" : "true") << "\n";
      continue;
    }
    os << indent << p << " = {";
    for (size_t i = 0; i < it->second.size(); ++i) {
      if (i) os << "; ";
      detail::print_tuple(os, it->second[i]);
    }
    os << "}\n";
  }
  for (const auto& fn : voc.functions) {
    auto it = s.func_interp.find(fn);
    if (it == s.func_interp.end()) continue;
    os << indent << fn << " = {";
    for (size_t i = 0; i < it->second.size(); ++i) {
      if (i) os << "; ";
      detail::print_tuple(os, it->second[i].first);
      os << " -> " << to_string(it->second[i].second);
    }
    os << "}\n";
  }
  os << "}\n";
}

inline void print_problem(std::ostream& os, const ModelExpansionProblem& m) {
  const Vocabulary& v = m.vocabulary;
  os << "vocabulary {\n";
  for (const auto& t : v.types) os << "  type " << t << "\n";
  for (const auto& p : v.predicates) {
    os << "  " << p;
    const auto& ts = v.predicate_types.at(p);
    if (!ts.empty()) {
      os << "(";
      for (size_t i = 0; i < ts.size(); ++i) {
        if (i) os << ", ";
        os << ts[i];
      }
      os << ")";
    }
    os << "\n";
  }
  for (const auto& f : v.functions) {
    os << "  " << f << "(";
    const auto& ts = v.function_arg_types.at(f);
    for (size_t i = 0; i < ts.size(); ++i) {
      if (i) os << ", ";
      os << ts[i];
    }
    os << ") : " << v.function_result_type.at(f) << "\n";
  }
  os << "}\n";
  print_structure_block(os, v, m.structure);
  os << "theory {\n";
  for (const auto& f : m.theory.sentences) {
    os << "  ";
    detail::print_formula(os, f, 1, true);
    os << ".\n";
  }
  for (const auto& d : m.theory.definitions) {
    os << "  define {\n";
    for (const auto& r : d.rules) {
      os << "    " << r.head;
      if (!r.head_args.empty()) {
        os << "(";
        for (size_t i = 0; i < r.head_args.size(); ++i) {
          if (i) os << ", ";
          detail::print_term(os, r.head_args[i]);
        }
        os << ")";
      }
      os << " <- ";
      detail::print_formula(os, r.body, 1, true);
      os << ".\n";
    }
    os << "  }\n";
  }
  os << "}\n";
}

inline std::string to_string(const ModelExpansionProblem& m) {
  std::ostringstream os;
  print_problem(os, m);
  return os.str();
}

}  // namespace folasp

#endif  // FOLASP_PRINT_HPP
