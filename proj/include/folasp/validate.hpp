// Static checks and type inference for parsed problems.
//
// validate_problem returns a rewritten copy in which every variable and
// element occurrence carries its type and bound-variable names are unique
// within each sentence and rule. The rewrite is idempotent.
// SPDX-License-Identifier: MIT
#ifndef FOLASP_VALIDATE_HPP
#define FOLASP_VALIDATE_HPP

#include <algorithm>

#include "folasp/ast.hpp"
#include "folasp/print.hpp"

namespace folasp {
namespace detail {

class Validator {
 public:
  Validator(const Vocabulary& voc, const Structure& s) : voc_(voc), s_(s) {
    for (const auto& [t, vals] : s.type_interp) {
      bool allint = true;
      for (const auto& v : vals) {
        if (std::holds_alternative<long long>(v)) continue;  // int ranges may overlap
        allint = false;
        auto [it, fresh] = elem_type_.emplace(v, t);
        if (!fresh && it->second != t)
          throw ValidateError("element '" + folasp::to_string(v) + "' occurs in both type '" +
                              it->second + "' and type '" + t + "'");
      }
      if (allint) int_types_.insert(t);
    }
  }

  void check_structure() {
    for (const auto& t : voc_.types)
      if (!s_.type_interp.count(t))
        throw ValidateError("type '" + t + "' has no interpretation");
    for (const auto& [t, vals] : s_.type_interp) {
      std::set<Value> seen;
      for (const auto& v : vals)
        if (!seen.insert(v).second)
          throw ValidateError("duplicate element '" + folasp::to_string(v) + "' in type '" + t +
                              "'");
    }
    for (const auto& [p, tuples] : s_.pred_interp) {
      const auto& types = voc_.predicate_types.at(p);
      std::set<Tuple> seen;
      for (const auto& tup : tuples) {
        if (tup.size() != types.size())
          throw ValidateError("tuple of wrong arity in interpretation of '" + p + "'");
        for (size_t i = 0; i < tup.size(); ++i) check_member(tup[i], types[i], p);
        if (!seen.insert(tup).second)
          throw ValidateError("duplicate tuple in interpretation of '" + p + "'");
      }
    }
    for (const auto& [f, entries] : s_.func_interp) {
      const auto& args = voc_.function_arg_types.at(f);
      const auto& res = voc_.function_result_type.at(f);
      std::set<Tuple> seen;
      size_t space = 1;
      for (const auto& t : args) space *= s_.type_interp.at(t).size();
      for (const auto& [tup, val] : entries) {
        if (tup.size() != args.size())
          throw ValidateError("tuple of wrong arity in interpretation of '" + f + "'");
        for (size_t i = 0; i < tup.size(); ++i) check_member(tup[i], args[i], f);
        check_member(val, res, f);
        if (!seen.insert(tup).second)
          throw ValidateError("function '" + f + "' maps a tuple twice");
      }
      if (entries.size() != space)
        throw ValidateError("function '" + f + "' is not total");
    }
  }

  Formula check_sentence(const Formula& f) {
    begin_formula(f, {});
    infer_formula(f);
    finish_inference();
    return rewrite_formula(f);
  }

  DefRule check_rule(const DefRule& r) {
    if (!voc_.is_predicate(r.head))
      throw ValidateError("rule head '" + r.head + "' is not a predicate");
    const auto& types = voc_.predicate_types.at(r.head);
    if (r.head_args.size() != types.size())
      throw ValidateError("rule head '" + r.head + "' has wrong arity");
    std::vector<std::pair<std::string, std::string>> head_vars;
    for (size_t i = 0; i < r.head_args.size(); ++i) {
      if (const auto* v = std::get_if<Variable>(&r.head_args[i].node)) {
        head_vars.emplace_back(v->name, types[i]);
      } else if (std::get_if<IntConst>(&r.head_args[i].node)) {
        if (!is_int_type(types[i]))
          throw ValidateError("integer head argument for non-integer type '" + types[i] + "'");
      } else {
        throw ValidateError("rule head arguments must be variables or integers");
      }
    }
    for (const auto& v : free_variables(r.body)) {
      bool ok = false;
      for (const auto& [n, t] : head_vars) ok = ok || n == v.name;
      if (!ok)
        throw ValidateError("variable '" + v.name + "' in rule body is not bound by the head of '" +
                            r.head + "'");
    }
    begin_formula(r.body, head_vars);
    infer_formula(r.body);
    finish_inference();
    for (size_t i = 0; i < head_vars.size(); ++i) env_.push_back(next_binder_++);
    DefRule out = r;
    for (size_t i = 0; i < out.head_args.size(); ++i)
      if (auto* v = std::get_if<Variable>(&out.head_args[i].node)) {
        const Binder& b = binders_[lookup(v->name)];
        v->name = b.final_name;
        v->type = b.type;
      }
    out.body = rewrite_formula(r.body);
    env_.clear();
    return out;
  }

 private:
  struct Binder {
    std::string name;          // source name
    std::string explicit_type; // annotation, if any
    std::set<std::string> inferred;
    std::string type;          // resolved
    std::string final_name;    // after uniquification
  };

  void check_member(const Value& v, const std::string& type, const std::string& sym) {
    bool ok;
    if (std::holds_alternative<long long>(v)) {
      // ints are not in elem_type_ (int ranges may overlap); check the domain
      auto it = s_.type_interp.find(type);
      ok = it != s_.type_interp.end() &&
           std::find(it->second.begin(), it->second.end(), v) != it->second.end();
    } else {
      auto it = elem_type_.find(v);
      ok = it != elem_type_.end() && it->second == type;
    }
    if (!ok)
      throw ValidateError("value '" + folasp::to_string(v) + "' in interpretation of '" + sym +
                          "' is not an element of type '" + type + "'");
  }

  bool is_int_type(const std::string& t) const { return int_types_.count(t) != 0; }

  // Every name occurring anywhere in the formula, for collision-free renames.
  void collect_names(const Formula& f) {
    std::visit(
        [&](const auto& n) {
          using N = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<N, PredAtom>) {
            for (const auto& a : n.args) collect_names(a);
          } else if constexpr (std::is_same_v<N, Comparison>) {
            collect_names(n.lhs);
            collect_names(n.rhs);
          } else if constexpr (std::is_same_v<N, BoolConst>) {
          } else if constexpr (std::is_same_v<N, Not>) {
            collect_names(*n.f);
          } else if constexpr (std::is_same_v<N, Quant>) {
            names_.insert(n.var.name);
            collect_names(*n.body);
          } else {
            collect_names(*n.lhs);
            collect_names(*n.rhs);
          }
        },
        f.node);
  }
  void collect_names(const Term& t) {
    std::visit(
        [&](const auto& n) {
          using N = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<N, Variable>) {
            names_.insert(n.name);
          } else if constexpr (std::is_same_v<N, FuncApp>) {
            for (const auto& a : n.args) collect_names(a);
          } else if constexpr (std::is_same_v<N, Cardinality>) {
            for (const auto& v : n.bound) names_.insert(v.name);
            collect_names(*n.body);
          }
        },
        t.node);
  }

  void begin_formula(const Formula& f,
                     const std::vector<std::pair<std::string, std::string>>& head_vars) {
    binders_.clear();
    env_.clear();
    names_.clear();
    used_.clear();
    collect_names(f);
    for (const auto& [n, t] : head_vars) {
      names_.insert(n);
      push_binder(Variable{n, t});  // head variables: type fixed by the head
      binders_.back().explicit_type = t;
    }
  }

  size_t push_binder(const Variable& v) {
    Binder b;
    b.name = v.name;
    b.explicit_type = v.type;
    b.final_name = v.name;
    if (!used_.insert(v.name).second) {
      int k = 2;
      std::string cand;
      do {
        cand = v.name + "_" + std::to_string(k++);
      } while (names_.count(cand) || used_.count(cand));
      b.final_name = cand;
      used_.insert(cand);
      names_.insert(cand);
    }
    binders_.push_back(std::move(b));
    env_.push_back(binders_.size() - 1);
    return binders_.size() - 1;
  }

  void pop_binders(size_t n) { env_.resize(env_.size() - n); }

  size_t lookup(const std::string& name) const {
    for (auto it = env_.rbegin(); it != env_.rend(); ++it)
      if (binders_[*it].name == name) return *it;
    throw ValidateError("unbound variable '" + name + "'");
  }

  // ---- pass A: gather type constraints from argument positions

  void infer_term(const Term& t, const std::string& pos_type) {
    std::visit(
        [&](const auto& n) {
          using N = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<N, Variable>) {
            if (!pos_type.empty()) binders_[lookup(n.name)].inferred.insert(pos_type);
            else lookup(n.name);  // must still be bound
          } else if constexpr (std::is_same_v<N, FuncApp>) {
            if (!voc_.is_function(n.function))
              throw ValidateError("'" + n.function + "' is not a function");
            const auto& args = voc_.function_arg_types.at(n.function);
            if (n.args.size() != args.size())
              throw ValidateError("function '" + n.function + "' applied with wrong arity");
            for (size_t i = 0; i < n.args.size(); ++i) infer_term(n.args[i], args[i]);
          } else if constexpr (std::is_same_v<N, Cardinality>) {
            size_t mark = n.bound.size();
            for (const auto& v : n.bound) push_binder(v);
            infer_formula(*n.body);
            pop_binders(mark);
          }
        },
        t.node);
  }

  void infer_formula(const Formula& f) {
    std::visit(
        [&](const auto& n) {
          using N = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<N, PredAtom>) {
            const auto it = voc_.predicate_types.find(n.predicate);
            if (it == voc_.predicate_types.end())
              throw ValidateError("'" + n.predicate + "' is not a predicate");
            if (n.args.size() != it->second.size())
              throw ValidateError("predicate '" + n.predicate + "' applied with wrong arity");
            for (size_t i = 0; i < n.args.size(); ++i) infer_term(n.args[i], it->second[i]);
          } else if constexpr (std::is_same_v<N, Comparison>) {
            infer_term(n.lhs, "");  // comparisons are not an inference source
            infer_term(n.rhs, "");
          } else if constexpr (std::is_same_v<N, BoolConst>) {
          } else if constexpr (std::is_same_v<N, Not>) {
            infer_formula(*n.f);
          } else if constexpr (std::is_same_v<N, Quant>) {
            push_binder(n.var);
            infer_formula(*n.body);
            pop_binders(1);
          } else {
            infer_formula(*n.lhs);
            infer_formula(*n.rhs);
          }
        },
        f.node);
  }

  void finish_inference() {
    for (auto& b : binders_) {
      if (!b.explicit_type.empty()) {
        b.type = b.explicit_type;
      } else if (b.inferred.size() == 1) {
        b.type = *b.inferred.begin();
      } else if (b.inferred.empty()) {
        throw ValidateError("cannot infer a type for variable '" + b.name + "'");
      } else {
        std::string opts;
        for (const auto& t : b.inferred) opts += (opts.empty() ? "" : ", ") + t;
        throw ValidateError("conflicting types for variable '" + b.name + "': " + opts);
      }
      if (!voc_.is_type(b.type))
        throw ValidateError("variable '" + b.name + "' annotated with undeclared type '" + b.type +
                            "'");
    }
    next_binder_ = 0;
    env_.clear();
  }

  // ---- pass B: check occurrences, fill annotations, rename binders

  // Kind of a term for comparison checking: a concrete type, or "int" for
  // integer-valued terms (integer literals, cardinalities).
  std::string term_kind(const Term& t) const {
    return std::visit(
        [&](const auto& n) -> std::string {
          using N = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<N, Variable>) return binders_[lookup(n.name)].type;
          else if constexpr (std::is_same_v<N, IntConst>) return "int";
          else if constexpr (std::is_same_v<N, ElemConst>) return elem_type_of(n.name);
          else if constexpr (std::is_same_v<N, FuncApp>)
            return voc_.function_result_type.at(n.function);
          else return "int";  // Cardinality
        },
        t.node);
  }

  std::string elem_type_of(const std::string& name) const {
    Value v{name};
    auto it = elem_type_.find(v);
    if (it == elem_type_.end())
      throw ValidateError("'" + name + "' is not an element of any type");
    return it->second;
  }

  bool int_kind(const std::string& kind) const { return kind == "int" || is_int_type(kind); }

  Term rewrite_term(const Term& t, const std::string& pos_type) {
    return std::visit(
        [&](const auto& n) -> Term {
          using N = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<N, Variable>) {
            const Binder& b = binders_[lookup(n.name)];
            if (!pos_type.empty() && b.type != pos_type)
              throw ValidateError("variable '" + n.name + "' of type '" + b.type +
                                  "' used where type '" + pos_type + "' is required");
            return Term{Variable{b.final_name, b.type}};
          } else if constexpr (std::is_same_v<N, IntConst>) {
            if (!pos_type.empty() && !is_int_type(pos_type))
              throw ValidateError("integer used where type '" + pos_type + "' is required");
            return t;
          } else if constexpr (std::is_same_v<N, ElemConst>) {
            std::string et = elem_type_of(n.name);
            if (!pos_type.empty() && et != pos_type)
              throw ValidateError("element '" + n.name + "' of type '" + et +
                                  "' used where type '" + pos_type + "' is required");
            return Term{ElemConst{n.name, et}};
          } else if constexpr (std::is_same_v<N, FuncApp>) {
            const auto& args = voc_.function_arg_types.at(n.function);
            const auto& res = voc_.function_result_type.at(n.function);
            if (!pos_type.empty() && res != pos_type)
              throw ValidateError("function '" + n.function + "' of result type '" + res +
                                  "' used where type '" + pos_type + "' is required");
            FuncApp out{n.function, {}};
            for (size_t i = 0; i < n.args.size(); ++i)
              out.args.push_back(rewrite_term(n.args[i], args[i]));
            return Term{std::move(out)};
          } else {  // Cardinality
            if (!pos_type.empty() && !is_int_type(pos_type))
              throw ValidateError("cardinality used where type '" + pos_type + "' is required");
            Cardinality out{{}, Box<Formula>(Formula{BoolConst{true}})};
            for (size_t i = 0; i < n.bound.size(); ++i) env_.push_back(next_binder_++);
            for (size_t i = 0; i < n.bound.size(); ++i) {
              const Binder& b = binders_[env_[env_.size() - n.bound.size() + i]];
              out.bound.push_back(Variable{b.final_name, b.type});
            }
            *out.body = rewrite_formula(*n.body);
            pop_binders(n.bound.size());
            return Term{std::move(out)};
          }
        },
        t.node);
  }

  Formula rewrite_formula(const Formula& f) {
    return std::visit(
        [&](const auto& n) -> Formula {
          using N = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<N, PredAtom>) {
            const auto& types = voc_.predicate_types.at(n.predicate);
            PredAtom out{n.predicate, {}};
            for (size_t i = 0; i < n.args.size(); ++i)
              out.args.push_back(rewrite_term(n.args[i], types[i]));
            return Formula{std::move(out)};
          } else if constexpr (std::is_same_v<N, Comparison>) {
            Comparison out{rewrite_term(n.lhs, ""), n.op, rewrite_term(n.rhs, "")};
            std::string lk = term_kind_final(out.lhs), rk = term_kind_final(out.rhs);
            bool ordering = n.op != CmpOp::Eq && n.op != CmpOp::Neq;
            if (int_kind(lk) && int_kind(rk)) return Formula{std::move(out)};
            if (lk != rk)
              throw ValidateError("comparison between type '" + lk + "' and type '" + rk + "'");
            if (ordering)
              throw ValidateError("ordering comparison on non-integer type '" + lk + "'");
            return Formula{std::move(out)};
          } else if constexpr (std::is_same_v<N, BoolConst>) {
            return f;
          } else if constexpr (std::is_same_v<N, Not>) {
            return mk_not(rewrite_formula(*n.f));
          } else if constexpr (std::is_same_v<N, Quant>) {
            env_.push_back(next_binder_++);
            const Binder& b = binders_[env_.back()];
            Formula body = rewrite_formula(*n.body);
            Variable v{b.final_name, b.type};
            pop_binders(1);
            return mk_quant(n.kind, std::move(v), std::move(body));
          } else {
            // pass B must visit binders in pass A's order: sequence explicitly
            Formula l = rewrite_formula(*n.lhs);
            Formula r = rewrite_formula(*n.rhs);
            if constexpr (std::is_same_v<N, And>) return mk_and(std::move(l), std::move(r));
            else if constexpr (std::is_same_v<N, Or>) return mk_or(std::move(l), std::move(r));
            else if constexpr (std::is_same_v<N, Implies>)
              return Formula{Implies{Box<Formula>(std::move(l)), Box<Formula>(std::move(r))}};
            else return Formula{Iff{Box<Formula>(std::move(l)), Box<Formula>(std::move(r))}};
          }
        },
        f.node);
  }

  // After rewrite the variable names are final ones; resolve against finals.
  std::string term_kind_final(const Term& t) const {
    return std::visit(
        [&](const auto& n) -> std::string {
          using N = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<N, Variable>) return n.type;
          else if constexpr (std::is_same_v<N, IntConst>) return "int";
          else if constexpr (std::is_same_v<N, ElemConst>) return n.type;
          else if constexpr (std::is_same_v<N, FuncApp>)
            return voc_.function_result_type.at(n.function);
          else return "int";
        },
        t.node);
  }

  const Vocabulary& voc_;
  const Structure& s_;
  std::map<Value, std::string> elem_type_;
  std::set<std::string> int_types_;
  std::vector<Binder> binders_;
  std::vector<size_t> env_;
  size_t next_binder_ = 0;  // pass B walks binders in the same order as pass A
  std::set<std::string> names_;
  std::set<std::string> used_;
};

}  // namespace detail

inline ModelExpansionProblem validate_problem(const ModelExpansionProblem& m) {
  detail::Validator v(m.vocabulary, m.structure);
  v.check_structure();
  ModelExpansionProblem out = m;
  for (auto& f : out.theory.sentences) {
    if (!free_variables(f).empty())
      throw ValidateError("sentence has free variables: " + to_string(f));
    f = v.check_sentence(f);
  }
  for (auto& d : out.theory.definitions)
    for (auto& r : d.rules) r = v.check_rule(r);
  return out;
}

}  // namespace folasp

#endif  // FOLASP_VALIDATE_HPP
