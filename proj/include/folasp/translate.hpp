// SPDX-License-Identifier: MIT
//
// Lowering of normalized model expansion problems to safe ASP-Core-2
// programs, and the inverse mapping from answer sets back to structures.
//
//   choice rules   one per uninterpreted predicate, guarded by its types
//   facts          type elements and interpreted relations
//   sentences      reified bottom-up: each non-literal subformula gets a
//                  fresh predicate delta_k(free vars) whose rules derive it
//                  exactly on its satisfying tuples; a universal block over
//                  domains of sizes d1..dm becomes #count{...} = d1*...*dm
//   definitions    rules derive a renamed copy of each defined predicate;
//                  equivalence constraints tie the copy to the original,
//                  which rejects candidates whose guess is not the fixpoint
#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "folasp/asp.hpp"
#include "folasp/ast.hpp"
#include "folasp/normalize.hpp"

namespace folasp {

class TranslateError : public Error {
 public:
  using Error::Error;
};

struct TranslateOptions {
  // Definitions normally derive a renamed copy tied back to the defined
  // predicate by equivalence constraints.  Turning this off emits the rules
  // on the defined predicate itself; that drops the constraint that the
  // guessed extension *is* the fixpoint and admits unfounded models.
  bool rename_defined = true;
};

// Which translation step produced a rule.
enum class Block { Choice, Fact, Sentence, Definition };

inline const char* block_name(Block b) {
  switch (b) {
    case Block::Choice: return "choice";
    case Block::Fact: return "fact";
    case Block::Sentence: return "sentence";
    case Block::Definition: return "definition";
  }
  return "?";
}

// One reification predicate: delta `name` holds for exactly the `args`
// tuples satisfying `subformula` (argument types sit in args[i].type).
struct DeltaInfo {
  std::string name;
  Formula subformula;
  std::vector<Variable> args;
};

struct Translation {
  asp::Program program;

  // Parallel to program.rules.
  std::vector<Block> block;
  std::vector<char> goal_constraint;  // the ":- not delta." of a sentence
  std::vector<int> sentence_index;    // source theory sentence, or -1

  std::vector<DeltaInfo> deltas;
  std::map<std::string, std::string> atom_pred;  // program pred -> source symbol
  std::map<std::string, Value> sym_value;        // program constant -> domain value

  int count(Block b) const {
    int n = 0;
    for (Block x : block) n += (x == b);
    return n;
  }
};

namespace detail {

// Source names mapped onto identifier-safe pools, injectively per pool.
// Predicates and types share a pool; constants and variables get their own.
class NameMap {
 public:
  std::string pred(const std::string& fo) { return assign(pred_, pred_taken_, fo, lower(fo)); }
  std::string elem(const std::string& fo) { return assign(elem_, elem_taken_, fo, lower(fo)); }
  std::string var_base(const std::string& fo) { return assign(var_, var_taken_, fo, upper(fo)); }

  // Fresh program-level predicate (reification and renamed definition heads).
  std::string aux(const std::string& base) {
    std::string n = unique(pred_taken_, base);
    pred_taken_.insert(n);
    return n;
  }

 private:
  static std::string strip(const std::string& s) {
    size_t i = 0;
    while (i < s.size() && !std::isalpha(static_cast<unsigned char>(s[i]))) ++i;
    std::string out;
    for (; i < s.size(); ++i) {
      char c = s[i];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') out.push_back(c);
    }
    return out;
  }
  static std::string lower(const std::string& s) {
    std::string t = strip(s);
    if (t.empty()) return "x";
    t[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(t[0])));
    return t;
  }
  static std::string upper(const std::string& s) {
    std::string t = strip(s);
    if (t.empty()) return "V";
    t[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(t[0])));
    return t;
  }
  static std::string unique(const std::set<std::string>& taken, const std::string& base) {
    if (!taken.count(base)) return base;
    for (int k = 2;; ++k) {
      std::string cand = base + "_" + std::to_string(k);
      if (!taken.count(cand)) return cand;
    }
  }
  std::string assign(std::map<std::string, std::string>& memo, std::set<std::string>& taken,
                     const std::string& fo, const std::string& base) {
    auto it = memo.find(fo);
    if (it != memo.end()) return it->second;
    std::string n = unique(taken, base);
    taken.insert(n);
    memo.emplace(fo, n);
    return n;
  }

  std::map<std::string, std::string> pred_, elem_, var_;
  std::set<std::string> pred_taken_{"not"}, elem_taken_{"not"}, var_taken_;
};

}  // namespace detail

class Translator {
 public:
  explicit Translator(NormalizedProblem np, TranslateOptions opts = {})
      : np_(std::move(np)), opts_(opts) {}

  Translation run() {
    const Vocabulary& voc = np_.problem.vocabulary;
    // Deterministic pools: types, then predicates, then domain elements.
    for (const auto& t : voc.types) {
      guard_preds_[t] = names_.pred(t);
      type_preds_.insert(guard_preds_[t]);
    }
    for (const auto& p : voc.predicates) {
      std::string n = names_.pred(p);
      out_.atom_pred[n] = p;
      std::vector<std::string> sig;
      for (const auto& t : voc.predicate_types.at(p)) sig.push_back(names_.pred(t));
      sig_[n] = std::move(sig);
    }
    for (const auto& t : voc.types)
      for (const auto& v : np_.problem.structure.type_interp.at(t)) aterm_value(v);

    choices();
    current_block_ = Block::Choice;
    for (const auto& e : np_.exactness) sentence(e, -1);
    facts();
    current_block_ = Block::Sentence;
    for (size_t i = 0; i < np_.problem.theory.sentences.size(); ++i)
      sentence(np_.problem.theory.sentences[i], static_cast<int>(i));
    definitions();
    return std::move(out_);
  }

 private:
  struct Binder {
    std::string fo;
    std::string type;
    std::string asp;
  };

  // ------------------------------------------------------------ environment

  const Binder* lookup(const std::string& fo) const {
    for (size_t i = env_.size(); i-- > 0;)
      if (env_[i].fo == fo) return &env_[i];
    return nullptr;
  }

  // Variables used anywhere in the rule under construction; a shadowing or
  // sibling binder with a clashing program name gets a suffixed copy.
  void push_binder(const Variable& v) {
    std::string base = names_.var_base(v.name);
    std::string n = base;
    for (int k = 2; rule_vars_.count(n); ++k) n = base + "_" + std::to_string(k);
    rule_vars_.insert(n);
    env_.push_back({v.name, v.type, n});
  }

  void begin_rule() {
    rule_vars_.clear();
    for (const auto& b : env_) rule_vars_.insert(b.asp);
  }

  asp::ATerm var_ref(const std::string& fo) const {
    const Binder* b = lookup(fo);
    if (!b) throw std::logic_error("unbound variable " + fo);
    return asp::ATerm{asp::Var{b->asp}};
  }

  // Free variables sorted outermost-first by their binder position.
  std::vector<Variable> env_order(std::vector<Variable> vars) const {
    std::vector<std::pair<size_t, Variable>> keyed;
    for (auto& v : vars) {
      size_t pos = env_.size();
      for (size_t i = env_.size(); i-- > 0;)
        if (env_[i].fo == v.name) {
          pos = i;
          break;
        }
      if (pos == env_.size()) throw std::logic_error("free variable not in scope: " + v.name);
      keyed.emplace_back(pos, std::move(v));
    }
    std::sort(keyed.begin(), keyed.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Variable> out;
    for (auto& [_, v] : keyed) out.push_back(std::move(v));
    return out;
  }

  // ------------------------------------------------------------ small parts

  asp::ATerm aterm_value(const Value& v) {
    if (const auto* i = std::get_if<long long>(&v)) return asp::ATerm{asp::Int{*i}};
    std::string n = names_.elem(std::get<std::string>(v));
    out_.sym_value.emplace(n, v);
    return asp::ATerm{asp::Sym{n}};
  }

  asp::ATerm simple_aterm(const Term& t) {
    if (const auto* v = std::get_if<Variable>(&t.node)) return var_ref(v->name);
    if (const auto* i = std::get_if<IntConst>(&t.node)) return asp::ATerm{asp::Int{i->value}};
    if (const auto* e = std::get_if<ElemConst>(&t.node)) return aterm_value(Value{e->name});
    throw std::logic_error("nested term survived normalization");
  }

  std::string mangled_pred(const std::string& fo) {
    auto it = active_rename_.find(fo);
    return it != active_rename_.end() ? it->second : names_.pred(fo);
  }

  asp::Atom atom(const PredAtom& a) {
    asp::Atom out{mangled_pred(a.predicate), {}};
    for (const auto& t : a.args) out.args.push_back(simple_aterm(t));
    return out;
  }

  asp::Literal guard(const Binder& b) const {
    return asp::Literal{false,
                        asp::Atom{guard_preds_.at(b.type), {asp::ATerm{asp::Var{b.asp}}}}};
  }

  void term_guard(const Term& t, std::vector<asp::BodyItem>& items) {
    if (const auto* v = std::get_if<Variable>(&t.node)) {
      const Binder* b = lookup(v->name);
      if (!b) throw std::logic_error("unbound variable " + v->name);
      items.push_back(guard(*b));
    }
  }

  long long domain_size(const std::string& type) const {
    auto it = np_.problem.structure.type_interp.find(type);
    if (it == np_.problem.structure.type_interp.end())
      throw TranslateError("type '" + type + "' has no domain");
    return static_cast<long long>(it->second.size());
  }

  void append(asp::Rule r) {
    out_.program.rules.push_back(std::move(r));
    out_.block.push_back(current_block_);
    out_.goal_constraint.push_back(0);
    out_.sentence_index.push_back(current_sentence_);
  }

  // -------------------------------------------------------- rule body tidy

  bool is_guard_item(const asp::BodyItem& it) const {
    const auto* l = std::get_if<asp::Literal>(&it);
    return l && !l->negated && l->atom.args.size() == 1 &&
           std::holds_alternative<asp::Var>(l->atom.args[0].node) &&
           type_preds_.count(l->atom.pred);
  }

  // Deduplicate, move type guards after the rest, and drop guards already
  // implied by a positive literal of known signature.  Never touches the
  // inside of aggregate elements: their conditions only see part of a model.
  void finish(std::vector<asp::BodyItem>& items) {
    std::vector<asp::BodyItem> lits, guards;
    for (auto& it : items) {
      if (is_guard_item(it))
        guards.push_back(std::move(it));
      else
        lits.push_back(std::move(it));
    }
    std::vector<asp::BodyItem> uniq;
    for (auto& it : lits) {
      bool dup = false;
      for (const auto& o : uniq) dup = dup || o == it;
      if (!dup) uniq.push_back(std::move(it));
    }
    std::vector<asp::BodyItem> kept;
    for (size_t i = 0; i < guards.size(); ++i) {
      bool later = false;
      for (size_t j = i + 1; j < guards.size() && !later; ++j) later = guards[j] == guards[i];
      if (later) continue;  // keep the last mention: reification args come last
      const auto& g = std::get<asp::Literal>(guards[i]);
      if (!justified(g, uniq)) kept.push_back(guards[i]);
    }
    uniq.insert(uniq.end(), kept.begin(), kept.end());
    items = std::move(uniq);
  }

  bool justified(const asp::Literal& g, const std::vector<asp::BodyItem>& items) const {
    const auto& v = std::get<asp::Var>(g.atom.args[0].node);
    for (const auto& it : items) {
      const auto* l = std::get_if<asp::Literal>(&it);
      if (!l || l->negated || type_preds_.count(l->atom.pred)) continue;
      auto sit = sig_.find(l->atom.pred);
      if (sit == sig_.end()) continue;
      for (size_t i = 0; i < l->atom.args.size(); ++i) {
        const auto* av = std::get_if<asp::Var>(&l->atom.args[i].node);
        if (av && av->name == v.name && sit->second[i] == g.atom.pred) return true;
      }
    }
    return false;
  }

  // ------------------------------------------------------------ delta pool

  int alloc_delta(const Formula& f) {
    DeltaInfo d;
    d.name = names_.aux("delta_" + std::to_string(++delta_counter_));
    d.subformula = f;
    for (const auto& v : env_order(free_variables(f))) {
      const Binder* b = lookup(v.name);
      d.args.push_back(Variable{v.name, b->type});
    }
    std::vector<std::string> sig;
    for (const auto& a : d.args) sig.push_back(names_.pred(a.type));
    sig_[d.name] = std::move(sig);
    out_.deltas.push_back(std::move(d));
    return static_cast<int>(out_.deltas.size()) - 1;
  }

  // Reference to a delta from the current scope.
  asp::Atom delta_atom(int d) const {
    asp::Atom a{out_.deltas[d].name, {}};
    for (const auto& v : out_.deltas[d].args) a.args.push_back(var_ref(v.name));
    return a;
  }

  // Fresh scope for emitting a delta's own rules: the environment holds
  // exactly its arguments.
  struct Scope {
    Translator& t;
    std::vector<Binder> env;
    std::set<std::string> rv;
    Scope(Translator& tr, int d) : t(tr), env(std::move(tr.env_)), rv(std::move(tr.rule_vars_)) {
      t.env_.clear();
      t.rule_vars_.clear();
      for (const auto& a : t.out_.deltas[d].args) t.push_binder(a);
    }
    ~Scope() {
      t.env_ = std::move(env);
      t.rule_vars_ = std::move(rv);
    }
  };

  // delta(args) :- alpha(f), guards(args).  Disjunctions instead get one
  // rule per branch on the same head, so the delta is their union.
  int reify(const Formula& f) {
    if (std::holds_alternative<Or>(f.node)) return disjunction(f);
    int d = alloc_delta(f);
    Scope scope(*this, d);
    asp::Atom head{out_.deltas[d].name, {}};
    for (const auto& b : env_) head.args.push_back(asp::ATerm{asp::Var{b.asp}});
    std::vector<asp::BodyItem> items = alpha3(f);
    for (const auto& b : env_) items.push_back(guard(b));
    finish(items);
    append(asp::Rule{false, std::move(head), std::move(items)});
    return d;
  }

  static void flatten_or(const Formula& f, std::vector<const Formula*>& out) {
    if (const auto* o = std::get_if<Or>(&f.node)) {
      flatten_or(*o->lhs, out);
      flatten_or(*o->rhs, out);
    } else {
      out.push_back(&f);
    }
  }

  int disjunction(const Formula& f) {
    std::vector<const Formula*> branches;
    flatten_or(f, branches);
    int d = alloc_delta(f);
    std::vector<asp::Rule> rules;
    {
      Scope scope(*this, d);
      asp::Atom head{out_.deltas[d].name, {}};
      for (const auto& b : env_) head.args.push_back(asp::ATerm{asp::Var{b.asp}});
      std::set<std::string> arg_names = rule_vars_;
      for (const Formula* br : branches) {
        rule_vars_ = arg_names;
        std::vector<asp::BodyItem> items = alpha3(*br);
        for (const auto& b : env_) items.push_back(guard(b));
        finish(items);
        rules.push_back(asp::Rule{false, head, std::move(items)});
      }
    }
    // Inner deltas emitted while translating the branches come first.
    for (auto& r : rules) append(std::move(r));
    return d;
  }

  // ------------------------------------------------------------- sentences

  void sentence(const Formula& f, int idx) {
    current_sentence_ = idx;
    env_.clear();
    if (!free_variables(f).empty()) throw TranslateError("sentence has a free variable");
    int d;
    if (std::holds_alternative<Or>(f.node)) {
      d = disjunction(f);
    } else {
      d = alloc_delta(f);
      begin_rule();
      std::vector<asp::BodyItem> items = alpha3(f);
      finish(items);
      append(asp::Rule{false, asp::Atom{out_.deltas[d].name, {}}, std::move(items)});
    }
    asp::Rule goal{false, std::nullopt,
                   {asp::Literal{true, asp::Atom{out_.deltas[d].name, {}}}}};
    append(std::move(goal));
    out_.goal_constraint.back() = 1;
  }

  // --------------------------------------------------------------- alpha
  // Conjunction of body items equivalent to f under the current environment.

  std::vector<asp::BodyItem> alpha3(const Formula& f) {
    return std::visit(
        [&](const auto& n) -> std::vector<asp::BodyItem> {
          using N = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<N, PredAtom>) {
            std::vector<asp::BodyItem> items{asp::Literal{false, atom(n)}};
            for (const auto& t : n.args) term_guard(t, items);
            return items;
          } else if constexpr (std::is_same_v<N, Comparison>) {
            if (std::holds_alternative<Cardinality>(n.lhs.node))
              return aggregate(std::get<Cardinality>(n.lhs.node), n.op, n.rhs);
            std::vector<asp::BodyItem> items{
                asp::Builtin{simple_aterm(n.lhs), n.op, simple_aterm(n.rhs)}};
            term_guard(n.lhs, items);
            term_guard(n.rhs, items);
            return items;
          } else if constexpr (std::is_same_v<N, BoolConst>) {
            if (n.value) return {};
            return {asp::Builtin{asp::ATerm{asp::Int{0}}, CmpOp::Eq, asp::ATerm{asp::Int{1}}}};
          } else if constexpr (std::is_same_v<N, Not>) {
            if (const auto* a = std::get_if<PredAtom>(&n.f->node)) {
              std::vector<asp::BodyItem> items{asp::Literal{true, atom(*a)}};
              for (const auto& t : a->args) term_guard(t, items);
              return items;
            }
            if (const auto* b = std::get_if<BoolConst>(&n.f->node))
              return alpha3(Formula{BoolConst{!b->value}});
            throw std::logic_error("negation not atomic after normalization");
          } else if constexpr (std::is_same_v<N, And>) {
            std::vector<asp::BodyItem> items = alpha3(*n.lhs);
            std::vector<asp::BodyItem> rhs = alpha3(*n.rhs);
            for (auto& it : rhs) items.push_back(std::move(it));
            return items;
          } else if constexpr (std::is_same_v<N, Or>) {
            int d = disjunction(f);
            std::vector<asp::BodyItem> items{asp::Literal{false, delta_atom(d)}};
            for (const auto& a : out_.deltas[d].args) items.push_back(guard(*lookup(a.name)));
            return items;
          } else if constexpr (std::is_same_v<N, Quant>) {
            if (n.kind == QuantKind::Exists) return exists(f);
            return forall(f);
          } else {
            throw std::logic_error("implication survived normalization");
          }
        },
        f.node);
  }

  std::vector<asp::BodyItem> exists(const Formula& f) {
    size_t mark = env_.size();
    const Formula* g = &f;
    while (const auto* q = std::get_if<Quant>(&g->node)) {
      if (q->kind != QuantKind::Exists) break;
      push_binder(q->var);
      g = &*q->body;
    }
    std::vector<asp::BodyItem> items = alpha3(*g);
    for (size_t i = mark; i < env_.size(); ++i) items.push_back(guard(env_[i]));
    env_.resize(mark);
    return items;
  }

  // A block of universals collapses to one exact count over the product of
  // the bound domains: every instance of the body must hold.
  std::vector<asp::BodyItem> forall(const Formula& f) {
    std::vector<Variable> outer = env_order(free_variables(f));
    size_t mark = env_.size();
    long long n = 1;
    const Formula* g = &f;
    while (const auto* q = std::get_if<Quant>(&g->node)) {
      if (q->kind != QuantKind::Forall) break;
      long long sz = domain_size(q->var.type);
      if (sz > 0 && n > (1LL << 40) / sz) throw TranslateError("universal block too large");
      n *= sz;
      push_binder(q->var);
      g = &*q->body;
    }
    asp::AggregateElement el;
    for (const auto& v : outer) el.tuple.push_back(var_ref(v.name));
    for (size_t i = mark; i < env_.size(); ++i)
      el.tuple.push_back(asp::ATerm{asp::Var{env_[i].asp}});
    element(*g, mark, el);
    env_.resize(mark);
    std::vector<asp::BodyItem> items{
        asp::CountAggregate{{std::move(el)}, CmpOp::Eq, asp::ATerm{asp::Int{n}}}};
    for (const auto& v : outer) items.push_back(guard(*lookup(v.name)));
    return items;
  }

  std::vector<asp::BodyItem> aggregate(const Cardinality& card, CmpOp op, const Term& rhs) {
    std::vector<Variable> outer;
    for (const auto& v : free_variables(*card.body)) {
      bool bound = false;
      for (const auto& b : card.bound) bound = bound || b.name == v.name;
      if (!bound) outer.push_back(v);
    }
    outer = env_order(std::move(outer));
    size_t mark = env_.size();
    for (const auto& b : card.bound) push_binder(b);
    asp::AggregateElement el;
    for (const auto& v : outer) el.tuple.push_back(var_ref(v.name));
    for (size_t i = mark; i < env_.size(); ++i)
      el.tuple.push_back(asp::ATerm{asp::Var{env_[i].asp}});
    element(*card.body, mark, el);
    env_.resize(mark);
    std::vector<asp::BodyItem> items{
        asp::CountAggregate{{std::move(el)}, op, simple_aterm(rhs)}};
    for (const auto& v : outer) items.push_back(guard(*lookup(v.name)));
    if (const auto* rv = std::get_if<Variable>(&rhs.node)) items.push_back(guard(*lookup(rv->name)));
    return items;
  }

  // Condition of the single aggregate element: the body when it is one
  // literal, otherwise a reference to its reification; then guards for the
  // block-bound variables (env_[mark:]).
  void element(const Formula& g, size_t mark, asp::AggregateElement& el) {
    auto plain = plain_condition(g);
    if (plain) {
      for (auto& c : *plain) el.condition.push_back(std::move(c));
    } else {
      int d = reify(g);
      el.condition.push_back(asp::Literal{false, delta_atom(d)});
    }
    for (size_t i = mark; i < env_.size(); ++i) {
      const asp::Literal l = guard(env_[i]);
      el.condition.push_back(l);
    }
  }

  using CondItem = std::variant<asp::Literal, asp::Builtin>;

  std::optional<std::vector<CondItem>> plain_condition(const Formula& g) {
    if (const auto* a = std::get_if<PredAtom>(&g.node))
      return std::vector<CondItem>{asp::Literal{false, atom(*a)}};
    if (const auto* c = std::get_if<Comparison>(&g.node)) {
      if (std::holds_alternative<Cardinality>(c->lhs.node) ||
          std::holds_alternative<Cardinality>(c->rhs.node))
        return std::nullopt;
      return std::vector<CondItem>{asp::Builtin{simple_aterm(c->lhs), c->op, simple_aterm(c->rhs)}};
    }
    if (const auto* b = std::get_if<BoolConst>(&g.node)) {
      if (b->value) return std::vector<CondItem>{};
      return std::vector<CondItem>{
          asp::Builtin{asp::ATerm{asp::Int{0}}, CmpOp::Eq, asp::ATerm{asp::Int{1}}}};
    }
    if (const auto* n = std::get_if<Not>(&g.node)) {
      if (const auto* a = std::get_if<PredAtom>(&n->f->node))
        return std::vector<CondItem>{asp::Literal{true, atom(*a)}};
      if (const auto* b = std::get_if<BoolConst>(&n->f->node))
        return plain_condition(Formula{BoolConst{!b->value}});
    }
    return std::nullopt;
  }

  // ------------------------------------------------------- choices / facts

  void choices() {
    current_block_ = Block::Choice;
    current_sentence_ = -1;
    const Vocabulary& voc = np_.problem.vocabulary;
    for (const auto& p : voc.predicates) {
      if (np_.problem.structure.interprets(p)) continue;
      asp::Rule r;
      r.choice = true;
      asp::Atom head{names_.pred(p), {}};
      const auto& sig = voc.predicate_types.at(p);
      for (size_t i = 0; i < sig.size(); ++i) {
        asp::ATerm v{asp::Var{"X" + std::to_string(i + 1)}};
        head.args.push_back(v);
        r.body.push_back(asp::Literal{false, asp::Atom{names_.pred(sig[i]), {v}}});
      }
      r.head = std::move(head);
      append(std::move(r));
    }
  }

  void facts() {
    current_block_ = Block::Fact;
    current_sentence_ = -1;
    const Vocabulary& voc = np_.problem.vocabulary;
    const Structure& s = np_.problem.structure;
    for (const auto& t : voc.types)
      for (const auto& v : s.type_interp.at(t))
        append(asp::Rule{false, asp::Atom{names_.pred(t), {aterm_value(v)}}, {}});
    for (const auto& p : voc.predicates) {
      auto it = s.pred_interp.find(p);
      if (it == s.pred_interp.end()) continue;
      for (const auto& row : it->second) {
        asp::Atom a{names_.pred(p), {}};
        for (const auto& v : row) a.args.push_back(aterm_value(v));
        append(asp::Rule{false, std::move(a), {}});
      }
    }
  }

  // ------------------------------------------------------------ definitions

  void definitions() {
    current_block_ = Block::Definition;
    current_sentence_ = -1;
    const Vocabulary& voc = np_.problem.vocabulary;
    int k = 0;
    for (const auto& def : np_.problem.theory.definitions) {
      ++k;
      std::map<std::string, std::string> renames;
      if (opts_.rename_defined) {
        for (const auto& p : def.defined()) {
          std::string base = names_.pred(p);
          std::string renamed = names_.aux(base + "_d" + std::to_string(k));
          renames[p] = renamed;
          sig_[renamed] = sig_.at(base);
        }
      }
      active_rename_ = renames;
      for (const auto& r : def.rules) def_rule(r, voc);
      active_rename_.clear();
      for (const auto& [p, renamed] : renames) {
        const auto& sig = voc.predicate_types.at(p);
        asp::Atom orig{names_.pred(p), {}}, copy{renamed, {}};
        for (size_t i = 0; i < sig.size(); ++i) {
          asp::ATerm v{asp::Var{"V" + std::to_string(i + 1)}};
          orig.args.push_back(v);
          copy.args.push_back(v);
        }
        append(asp::Rule{
            false, std::nullopt,
            {asp::Literal{false, orig}, asp::Literal{true, copy}}});
        append(asp::Rule{
            false, std::nullopt,
            {asp::Literal{true, std::move(orig)}, asp::Literal{false, std::move(copy)}}});
      }
    }
  }

  void def_rule(const DefRule& r, const Vocabulary& voc) {
    env_.clear();
    rule_vars_.clear();
    const auto& sig = voc.predicate_types.at(r.head);
    for (size_t i = 0; i < r.head_args.size(); ++i) {
      const auto* v = std::get_if<Variable>(&r.head_args[i].node);
      if (v && !lookup(v->name)) push_binder(Variable{v->name, sig[i]});
    }
    asp::Atom head{mangled_pred(r.head), {}};
    for (const auto& a : r.head_args) head.args.push_back(simple_aterm(a));
    size_t nhead = env_.size();
    std::vector<asp::BodyItem> items = alpha3(r.body);
    for (size_t i = 0; i < nhead; ++i) items.push_back(guard(env_[i]));
    finish(items);
    append(asp::Rule{false, std::move(head), std::move(items)});
  }

  // ---------------------------------------------------------------- state

  NormalizedProblem np_;
  TranslateOptions opts_;
  Translation out_;
  detail::NameMap names_;
  std::map<std::string, std::string> guard_preds_;  // type -> program pred
  std::vector<Binder> env_;
  std::set<std::string> rule_vars_;
  std::map<std::string, std::string> active_rename_;
  std::map<std::string, std::vector<std::string>> sig_;
  std::set<std::string> type_preds_;
  int delta_counter_ = 0;
  Block current_block_ = Block::Choice;
  int current_sentence_ = -1;
};

inline Translation translate(const NormalizedProblem& np, TranslateOptions opts = {}) {
  return Translator(np, opts).run();
}

// ------------------------------------------------------------- back-mapping

namespace detail {

inline std::pair<std::string, Tuple> parse_ground_atom(const std::string& s,
                                                       const Translation& t) {
  auto lp = s.find('(');
  if (lp == std::string::npos) return {s, {}};
  std::pair<std::string, Tuple> out{s.substr(0, lp), {}};
  size_t i = lp + 1;
  while (i < s.size() && s[i] != ')') {
    size_t j = i;
    while (j < s.size() && s[j] != ',' && s[j] != ')') ++j;
    std::string tok = s.substr(i, j - i);
    if (!tok.empty() &&
        (std::isdigit(static_cast<unsigned char>(tok[0])) || tok[0] == '-')) {
      out.second.push_back(Value{std::stoll(tok)});
    } else {
      auto it = t.sym_value.find(tok);
      out.second.push_back(it != t.sym_value.end() ? it->second : Value{tok});
    }
    i = (j < s.size() && s[j] == ',') ? j + 1 : j;
  }
  return out;
}

}  // namespace detail

// Expansion of `original`'s structure by one answer set of its translation.
// Atoms of auxiliary predicates are ignored; graph atoms of an eliminated
// function fold back into a function interpretation, which must come out
// total and single-valued.  Relation rows are sorted.
inline Structure to_structure(const Translation& t, const ModelExpansionProblem& original,
                              const std::set<std::string>& answer_set) {
  const Vocabulary& voc = original.vocabulary;
  const Structure& in = original.structure;
  Structure out = in;
  for (const auto& p : voc.predicates)
    if (!in.interprets(p)) out.pred_interp[p];
  std::map<std::string, std::map<Tuple, Value>> funcs;
  for (const auto& f : voc.functions)
    if (!in.interprets(f)) funcs[f];

  for (const auto& name : answer_set) {
    auto [pred, vals] = detail::parse_ground_atom(name, t);
    auto it = t.atom_pred.find(pred);
    if (it == t.atom_pred.end()) continue;  // reification or renamed copy
    const std::string& fo = it->second;
    if (in.interprets(fo)) continue;  // input facts echoed back
    if (voc.is_function(fo)) {
      Value v = vals.back();
      vals.pop_back();
      if (!funcs[fo].emplace(std::move(vals), std::move(v)).second)
        throw TranslateError("answer set assigns two values to '" + fo + "'");
    } else {
      out.pred_interp[fo].push_back(std::move(vals));
    }
  }

  for (auto& [f, m] : funcs) {
    long long total = 1;
    for (const auto& ty : voc.function_arg_types.at(f))
      total *= static_cast<long long>(in.type_interp.at(ty).size());
    if (static_cast<long long>(m.size()) != total)
      throw TranslateError("answer set leaves '" + f + "' partial");
    auto& rows = out.func_interp[f];
    for (auto& [args, v] : m) rows.emplace_back(args, v);
  }
  for (auto& [p, rows] : out.pred_interp) std::sort(rows.begin(), rows.end());
  for (auto& [f, rows] : out.func_interp) std::sort(rows.begin(), rows.end());
  return out;
}

}  // namespace folasp
