// SPDX-License-Identifier: MIT
//
// ASP-Core-2 program fragment: normal rules, choice rules, constraints, and
// #count aggregates in bodies.  Text emission is byte deterministic; the
// parser accepts exactly what emit produces plus whitespace and % comments.
#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "folasp/ast.hpp"  // CmpOp, Value

namespace folasp::asp {

struct Var {
  std::string name;  // starts uppercase
  bool operator==(const Var&) const = default;
  auto operator<=>(const Var&) const = default;
};
struct Sym {
  std::string name;  // starts lowercase
  bool operator==(const Sym&) const = default;
  auto operator<=>(const Sym&) const = default;
};
struct Int {
  long long value = 0;
  bool operator==(const Int&) const = default;
  auto operator<=>(const Int&) const = default;
};

struct ATerm {
  std::variant<Var, Sym, Int> node;
  bool operator==(const ATerm&) const = default;
  auto operator<=>(const ATerm&) const = default;
};

struct Atom {
  std::string pred;
  std::vector<ATerm> args;
  bool operator==(const Atom&) const = default;
  auto operator<=>(const Atom&) const = default;
};

struct Literal {
  bool negated = false;
  Atom atom;
  bool operator==(const Literal&) const = default;
  auto operator<=>(const Literal&) const = default;
};

struct Builtin {
  ATerm lhs;
  CmpOp op = CmpOp::Eq;
  ATerm rhs;
  bool operator==(const Builtin&) const = default;
  auto operator<=>(const Builtin&) const = default;
};

// One element; conditions hold literals and builtins only (no nesting).
struct AggregateElement {
  std::vector<ATerm> tuple;
  std::vector<std::variant<Literal, Builtin>> condition;
  bool operator==(const AggregateElement&) const = default;
  auto operator<=>(const AggregateElement&) const = default;
};

struct CountAggregate {
  std::vector<AggregateElement> elements;
  CmpOp op = CmpOp::Eq;
  ATerm bound;
  bool operator==(const CountAggregate&) const = default;
  auto operator<=>(const CountAggregate&) const = default;
};

using BodyItem = std::variant<Literal, Builtin, CountAggregate>;

struct Rule {
  bool choice = false;        // {head} :- body
  std::optional<Atom> head;   // nullopt: constraint
  std::vector<BodyItem> body;
  bool operator==(const Rule&) const = default;
  auto operator<=>(const Rule&) const = default;
};

struct Program {
  std::vector<Rule> rules;
  bool operator==(const Program&) const = default;
};

// --------------------------------------------------------------------- emit

inline const char* cmp_token(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "=";
    case CmpOp::Neq: return "!=";
    case CmpOp::Leq: return "<=";
    case CmpOp::Geq: return ">=";
    case CmpOp::Lt: return "<";
    case CmpOp::Gt: return ">";
  }
  return "=";
}

inline void emit(std::ostream& os, const ATerm& t) {
  std::visit([&](const auto& n) {
    using N = std::decay_t<decltype(n)>;
    if constexpr (std::is_same_v<N, Int>) os << n.value;
    else os << n.name;
  }, t.node);
}

inline void emit(std::ostream& os, const Atom& a) {
  os << a.pred;
  if (!a.args.empty()) {
    os << "(";
    for (size_t i = 0; i < a.args.size(); ++i) {
      if (i) os << ",";
      emit(os, a.args[i]);
    }
    os << ")";
  }
}

inline void emit(std::ostream& os, const Literal& l) {
  if (l.negated) os << "not ";
  emit(os, l.atom);
}

inline void emit(std::ostream& os, const Builtin& b) {
  emit(os, b.lhs);
  os << " " << cmp_token(b.op) << " ";
  emit(os, b.rhs);
}

inline void emit(std::ostream& os, const CountAggregate& c) {
  os << "#count{";
  for (size_t e = 0; e < c.elements.size(); ++e) {
    if (e) os << "; ";
    const AggregateElement& el = c.elements[e];
    for (size_t i = 0; i < el.tuple.size(); ++i) {
      if (i) os << ",";
      emit(os, el.tuple[i]);
    }
    os << " : ";
    for (size_t i = 0; i < el.condition.size(); ++i) {
      if (i) os << ", ";
      std::visit([&](const auto& n) { emit(os, n); }, el.condition[i]);
    }
  }
  os << "} " << cmp_token(c.op) << " ";
  emit(os, c.bound);
}

inline void emit(std::ostream& os, const Rule& r) {
  if (r.head) {
    if (r.choice) os << "{";
    emit(os, *r.head);
    if (r.choice) os << "}";
  }
  if (!r.body.empty() || !r.head) {
    os << (r.head ? " :- " : ":- ");
    for (size_t i = 0; i < r.body.size(); ++i) {
      if (i) os << ", ";
      std::visit([&](const auto& n) { emit(os, n); }, r.body[i]);
    }
  }
  os << ".";
}

inline void emit(std::ostream& os, const Program& p) {
  for (const auto& r : p.rules) {
    emit(os, r);
    os << "\n";
  }
}

inline std::string to_string(const ATerm& t) {
  std::ostringstream os;
  emit(os, t);
  return os.str();
}

inline std::string to_string(const Atom& a) {
  std::ostringstream os;
  emit(os, a);
  return os.str();
}

inline std::string to_string(const Rule& r) {
  std::ostringstream os;
  emit(os, r);
  return os.str();
}

inline std::string to_string(const Program& p) {
  std::ostringstream os;
  emit(os, p);
  return os.str();
}

// -------------------------------------------------------------------- parse

struct AspParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

class Parser {
 public:
  explicit Parser(std::string src) : src_(std::move(src)) {}

  Program parse() {
    Program p;
    skip();
    while (pos_ < src_.size()) {
      p.rules.push_back(rule());
      skip();
    }
    return p;
  }

 private:
  void skip() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '%') {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  bool eat(const std::string& tok) {
    skip();
    if (src_.compare(pos_, tok.size(), tok) == 0) {
      // keyword tokens must not run into identifier characters
      if (std::isalpha(static_cast<unsigned char>(tok[0]))) {
        size_t end = pos_ + tok.size();
        if (end < src_.size() &&
            (std::isalnum(static_cast<unsigned char>(src_[end])) || src_[end] == '_'))
          return false;
      }
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  void expect(const std::string& tok) {
    if (!eat(tok)) fail("expected '" + tok + "'");
  }

  [[noreturn]] void fail(const std::string& msg) {
    throw AspParseError(msg + " at offset " + std::to_string(pos_));
  }

  bool peek(char c) {
    skip();
    return pos_ < src_.size() && src_[pos_] == c;
  }

  std::string ident() {
    skip();
    size_t start = pos_;
    if (pos_ >= src_.size() ||
        !(std::isalpha(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      fail("expected identifier");
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    return src_.substr(start, pos_ - start);
  }

  ATerm term() {
    skip();
    if (pos_ < src_.size() &&
        (std::isdigit(static_cast<unsigned char>(src_[pos_])) ||
         (src_[pos_] == '-' && pos_ + 1 < src_.size() &&
          std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))))) {
      size_t start = pos_;
      if (src_[pos_] == '-') ++pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      return ATerm{Int{std::stoll(src_.substr(start, pos_ - start))}};
    }
    std::string id = ident();
    if (std::isupper(static_cast<unsigned char>(id[0]))) return ATerm{Var{id}};
    return ATerm{Sym{id}};
  }

  Atom atom() {
    Atom a;
    a.pred = ident();
    if (eat("(")) {
      while (true) {
        a.args.push_back(term());
        if (eat(")")) break;
        expect(",");
      }
    }
    return a;
  }

  std::optional<CmpOp> cmp_op() {
    for (auto [tok, op] : {std::pair<const char*, CmpOp>{"!=", CmpOp::Neq},
                           {"<=", CmpOp::Leq},
                           {">=", CmpOp::Geq},
                           {"<>", CmpOp::Neq},
                           {"=", CmpOp::Eq},
                           {"<", CmpOp::Lt},
                           {">", CmpOp::Gt}}) {
      if (eat(tok)) return op;
    }
    return std::nullopt;
  }

  std::variant<Literal, Builtin> literal_or_builtin() {
    if (eat("not")) return Literal{true, atom()};
    skip();
    if (pos_ < src_.size() &&
        (std::isupper(static_cast<unsigned char>(src_[pos_])) ||
         std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '-')) {
      ATerm l = term();
      auto op = cmp_op();
      if (!op) fail("expected comparison");
      return Builtin{l, *op, term()};
    }
    // lowercase: an atom, or a symbol on the left of a builtin
    size_t save = pos_;
    Atom a = atom();
    if (a.args.empty()) {
      if (auto op = cmp_op()) {
        (void)save;
        return Builtin{ATerm{Sym{a.pred}}, *op, term()};
      }
    }
    return Literal{false, std::move(a)};
  }

  BodyItem body_item() {
    if (eat("#count")) {
      expect("{");
      CountAggregate c;
      while (true) {
        AggregateElement el;
        if (!peek(':')) {
          while (true) {
            el.tuple.push_back(term());
            if (!eat(",")) break;
          }
        }
        expect(":");
        while (true) {
          el.condition.push_back(literal_or_builtin());
          if (!eat(",")) break;
        }
        c.elements.push_back(std::move(el));
        if (!eat(";")) break;
      }
      expect("}");
      auto op = cmp_op();
      if (!op) fail("expected comparison after aggregate");
      c.op = *op;
      c.bound = term();
      return c;
    }
    auto lb = literal_or_builtin();
    if (auto* l = std::get_if<Literal>(&lb)) return std::move(*l);
    return std::get<Builtin>(lb);
  }

  Rule rule() {
    Rule r;
    skip();
    if (eat(":-")) {
      r.head = std::nullopt;
    } else if (eat("{")) {
      r.choice = true;
      r.head = atom();
      expect("}");
      if (!eat(":-")) {
        expect(".");
        return r;
      }
    } else {
      r.head = atom();
      if (!eat(":-")) {
        expect(".");
        return r;
      }
    }
    while (true) {
      r.body.push_back(body_item());
      if (!eat(",")) break;
    }
    expect(".");
    return r;
  }

  std::string src_;
  size_t pos_ = 0;
};

}  // namespace detail

inline Program parse_program(const std::string& text) { return detail::Parser(text).parse(); }

// ------------------------------------------------------------------- safety

namespace detail {

inline void term_vars(const ATerm& t, std::set<std::string>& out) {
  if (const auto* v = std::get_if<Var>(&t.node)) out.insert(v->name);
}

inline void atom_vars(const Atom& a, std::set<std::string>& out) {
  for (const auto& t : a.args) term_vars(t, out);
}

}  // namespace detail

// ASP-Core-2 safety: every global variable occurs in a positive body literal
// outside aggregates; every aggregate-local variable occurs in a positive
// literal of its element's condition.
inline std::vector<std::string> check_safety(const Program& p) {
  std::vector<std::string> errors;
  for (const auto& r : p.rules) {
    std::set<std::string> global, bound;
    if (r.head) detail::atom_vars(*r.head, global);
    for (const auto& item : r.body) {
      if (const auto* l = std::get_if<Literal>(&item)) {
        detail::atom_vars(l->atom, global);
        if (!l->negated) detail::atom_vars(l->atom, bound);
      } else if (const auto* b = std::get_if<Builtin>(&item)) {
        detail::term_vars(b->lhs, global);
        detail::term_vars(b->rhs, global);
      } else {
        detail::term_vars(std::get<CountAggregate>(item).bound, global);
      }
    }
    for (const auto& v : global)
      if (!bound.count(v))
        errors.push_back("unsafe variable " + v + " in: " + to_string(r));

    for (const auto& item : r.body) {
      const auto* agg = std::get_if<CountAggregate>(&item);
      if (!agg) continue;
      for (const auto& el : agg->elements) {
        std::set<std::string> local, local_bound;
        for (const auto& t : el.tuple) detail::term_vars(t, local);
        for (const auto& c : el.condition) {
          if (const auto* l = std::get_if<Literal>(&c)) {
            detail::atom_vars(l->atom, local);
            if (!l->negated) detail::atom_vars(l->atom, local_bound);
          } else {
            const auto& b = std::get<Builtin>(c);
            detail::term_vars(b.lhs, local);
            detail::term_vars(b.rhs, local);
          }
        }
        for (const auto& v : local)
          if (!local_bound.count(v) && !bound.count(v))
            errors.push_back("unsafe aggregate variable " + v + " in: " + to_string(r));
      }
    }
  }
  return errors;
}

}  // namespace folasp::asp
