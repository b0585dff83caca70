// SPDX-License-Identifier: MIT
//
// Grounding and stable-model enumeration for the ASP fragment, at desk scale.
// Grounding instantiates rule variables over the program's constants, pruned
// by the extensions of fact-only predicates (type guards).  Aggregates are
// evaluated under the candidate model when a reduct is formed.
#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "folasp/asp.hpp"

namespace folasp {
namespace ground {

struct GroundError : Error {
  using Error::Error;
};

struct GLit {
  int atom;
  bool neg;
};

// One distinct candidate tuple of an aggregate; it counts when any
// alternative condition holds.
struct GAggElem {
  std::vector<std::vector<GLit>> alts;
};

struct GAgg {
  std::vector<GAggElem> elems;
  CmpOp op;
  long long bound;
};

struct GRule {
  bool choice = false;
  int head = -1;  // -1: constraint
  std::vector<GLit> body;
  std::vector<GAgg> aggs;
};

struct GroundProgram {
  std::vector<std::string> atom_names;
  std::map<std::string, int> atom_ids;
  std::vector<char> fact;  // per atom
  std::vector<GRule> rules;

  int intern(const std::string& name) {
    auto [it, fresh] = atom_ids.emplace(name, static_cast<int>(atom_names.size()));
    if (fresh) {
      atom_names.push_back(name);
      fact.push_back(false);
    }
    return it->second;
  }
};

using Model = std::vector<char>;  // per atom id

namespace detail {

using asp::ATerm;
using asp::Atom;
using asp::Builtin;
using asp::CountAggregate;
using asp::Int;
using asp::Literal;
using asp::Sym;
using asp::Var;

using Subst = std::map<std::string, ATerm>;

inline ATerm subst(const ATerm& t, const Subst& s) {
  if (const auto* v = std::get_if<Var>(&t.node)) {
    auto it = s.find(v->name);
    if (it == s.end()) throw GroundError("unbound variable '" + v->name + "' while grounding");
    return it->second;
  }
  return t;
}

inline Atom subst(const Atom& a, const Subst& s) {
  Atom out{a.pred, {}};
  for (const auto& t : a.args) out.args.push_back(subst(t, s));
  return out;
}

inline void collect_vars(const ATerm& t, std::set<std::string>& out) {
  if (const auto* v = std::get_if<Var>(&t.node)) out.insert(v->name);
}

inline bool eval_builtin(const Builtin& b, const Subst& s) {
  ATerm l = subst(b.lhs, s);
  ATerm r = subst(b.rhs, s);
  if (b.op == CmpOp::Eq) return l == r;
  if (b.op == CmpOp::Neq) return !(l == r);
  const auto* x = std::get_if<Int>(&l.node);
  const auto* y = std::get_if<Int>(&r.node);
  if (!x || !y) throw GroundError("ordering comparison on non-integer terms");
  switch (b.op) {
    case CmpOp::Leq: return x->value <= y->value;
    case CmpOp::Geq: return x->value >= y->value;
    case CmpOp::Lt: return x->value < y->value;
    case CmpOp::Gt: return x->value > y->value;
    default: return false;
  }
}

}  // namespace detail

inline GroundProgram ground(const asp::Program& p) {
  using namespace detail;
  GroundProgram gp;

  // predicates that can ever hold, and those fixed by facts alone
  std::set<std::string> head_preds;
  std::set<std::string> impure;  // head preds with a non-fact occurrence
  for (const auto& r : p.rules) {
    if (!r.head) continue;
    head_preds.insert(r.head->pred);
    bool is_fact_rule = !r.choice && r.body.empty();
    for (const auto& a : r.head->args)
      if (std::holds_alternative<Var>(a.node)) is_fact_rule = false;
    if (!is_fact_rule) impure.insert(r.head->pred);
  }

  // facts, and per-position value sets of fact-only predicates
  std::map<std::string, std::vector<std::set<ATerm>>> columns;
  std::map<std::string, std::set<std::vector<ATerm>>> fact_rows;
  for (const auto& r : p.rules) {
    if (!r.head || r.choice || !r.body.empty()) continue;
    bool grounded = true;
    for (const auto& a : r.head->args) grounded = grounded && !std::holds_alternative<Var>(a.node);
    if (!grounded) continue;
    int id = gp.intern(asp::to_string(*r.head));
    gp.fact[id] = true;
    if (!impure.count(r.head->pred)) {
      fact_rows[r.head->pred].insert(r.head->args);
      auto& cols = columns[r.head->pred];
      cols.resize(r.head->args.size());
      for (size_t i = 0; i < r.head->args.size(); ++i) cols[i].insert(r.head->args[i]);
    }
  }
  auto fact_only = [&](const std::string& pred) { return fact_rows.count(pred) != 0; };

  // the constant universe, in a deterministic order
  std::set<ATerm> consts;
  auto add_const = [&](const ATerm& t) {
    if (!std::holds_alternative<Var>(t.node)) consts.insert(t);
  };
  for (const auto& r : p.rules) {
    if (r.head)
      for (const auto& a : r.head->args) add_const(a);
    for (const auto& it : r.body) {
      if (const auto* l = std::get_if<Literal>(&it)) {
        for (const auto& a : l->atom.args) add_const(a);
      } else if (const auto* b = std::get_if<Builtin>(&it)) {
        add_const(b->lhs);
        add_const(b->rhs);
      } else {
        const auto& agg = std::get<CountAggregate>(it);
        add_const(agg.bound);
        for (const auto& e : agg.elements) {
          for (const auto& t : e.tuple) add_const(t);
          for (const auto& c : e.condition) {
            if (const auto* l = std::get_if<Literal>(&c))
              for (const auto& a : l->atom.args) add_const(a);
            else {
              add_const(std::get<Builtin>(c).lhs);
              add_const(std::get<Builtin>(c).rhs);
            }
          }
        }
      }
    }
  }
  std::vector<ATerm> universe(consts.begin(), consts.end());

  // candidate values for one variable, narrowed by fact-only literals
  auto candidates = [&](const std::string& var, const std::vector<const Literal*>& pos_lits) {
    std::vector<ATerm> out = universe;
    for (const auto* l : pos_lits) {
      if (!fact_only(l->atom.pred)) continue;
      for (size_t i = 0; i < l->atom.args.size(); ++i) {
        const auto* v = std::get_if<Var>(&l->atom.args[i].node);
        if (!v || v->name != var) continue;
        const auto& col = columns[l->atom.pred][i];
        std::vector<ATerm> next;
        for (const auto& c : out)
          if (col.count(c)) next.push_back(c);
        out = std::move(next);
      }
    }
    return out;
  };

  // resolve a ground literal: 0 false (drop instance), 1 true (drop literal),
  // 2 keep
  auto resolve = [&](const Literal& l, const Subst& s, Atom& out_atom) {
    out_atom = subst(l.atom, s);
    bool truth;
    if (fact_only(out_atom.pred)) {
      truth = fact_rows[out_atom.pred].count(out_atom.args) != 0;
    } else if (!head_preds.count(out_atom.pred)) {
      truth = false;  // never derivable
    } else {
      return 2;
    }
    if (l.negated) truth = !truth;
    return truth ? 1 : 0;
  };

  for (const auto& r : p.rules) {
    // global variables: head, body literals, builtins, aggregate bounds
    std::set<std::string> globals;
    std::vector<const Literal*> pos_lits;
    if (r.head)
      for (const auto& a : r.head->args) collect_vars(a, globals);
    for (const auto& it : r.body) {
      if (const auto* l = std::get_if<Literal>(&it)) {
        for (const auto& a : l->atom.args) collect_vars(a, globals);
        if (!l->negated) pos_lits.push_back(l);
      } else if (const auto* b = std::get_if<Builtin>(&it)) {
        collect_vars(b->lhs, globals);
        collect_vars(b->rhs, globals);
      } else {
        collect_vars(std::get<CountAggregate>(it).bound, globals);
      }
    }
    std::vector<std::string> gv(globals.begin(), globals.end());
    std::vector<std::vector<ATerm>> gc;
    for (const auto& v : gv) gc.push_back(candidates(v, pos_lits));

    std::vector<size_t> odo(gv.size(), 0);
    bool exhausted = false;
    for (const auto& c : gc) exhausted = exhausted || c.empty();
    while (!exhausted) {
      Subst s;
      for (size_t i = 0; i < gv.size(); ++i) s[gv[i]] = gc[i][odo[i]];

      GRule out;
      out.choice = r.choice;
      bool alive = true;
      for (const auto& it : r.body) {
        if (!alive) break;
        if (const auto* l = std::get_if<Literal>(&it)) {
          Atom ga;
          int v = resolve(*l, s, ga);
          if (v == 0) alive = false;
          else if (v == 2) out.body.push_back({gp.intern(asp::to_string(ga)), l->negated});
        } else if (const auto* b = std::get_if<Builtin>(&it)) {
          alive = eval_builtin(*b, s);
        } else {
          const auto& agg = std::get<CountAggregate>(it);
          ATerm bound = subst(agg.bound, s);
          const auto* bi = std::get_if<Int>(&bound.node);
          if (!bi) throw GroundError("aggregate bound is not an integer");
          GAgg ga;
          ga.op = agg.op;
          ga.bound = bi->value;
          std::map<std::string, size_t> tuple_ids;
          for (const auto& e : agg.elements) {
            std::set<std::string> evars;
            for (const auto& t : e.tuple) collect_vars(t, evars);
            std::vector<const Literal*> cond_pos;
            for (const auto& c : e.condition) {
              if (const auto* l = std::get_if<Literal>(&c)) {
                for (const auto& a : l->atom.args) collect_vars(a, evars);
                if (!l->negated) cond_pos.push_back(l);
              } else {
                collect_vars(std::get<Builtin>(c).lhs, evars);
                collect_vars(std::get<Builtin>(c).rhs, evars);
              }
            }
            std::vector<std::string> lv;
            for (const auto& v : evars)
              if (!globals.count(v)) lv.push_back(v);
            std::vector<std::vector<ATerm>> lc;
            for (const auto& v : lv) lc.push_back(candidates(v, cond_pos));
            bool lex = false;
            for (const auto& c : lc) lex = lex || c.empty();
            std::vector<size_t> lodo(lv.size(), 0);
            while (!lex) {
              Subst ls = s;
              for (size_t i = 0; i < lv.size(); ++i) ls[lv[i]] = lc[i][lodo[i]];
              bool keep = true;
              std::vector<GLit> cond;
              for (const auto& c : e.condition) {
                if (!keep) break;
                if (const auto* l = std::get_if<Literal>(&c)) {
                  Atom ga2;
                  int v = resolve(*l, ls, ga2);
                  if (v == 0) keep = false;
                  else if (v == 2) cond.push_back({gp.intern(asp::to_string(ga2)), l->negated});
                } else {
                  keep = eval_builtin(std::get<Builtin>(c), ls);
                }
              }
              if (keep) {
                std::string key;
                for (const auto& t : e.tuple) {
                  if (!key.empty()) key += ",";
                  key += asp::to_string(subst(t, ls));
                }
                auto [itid, fresh] = tuple_ids.emplace(key, ga.elems.size());
                if (fresh) ga.elems.emplace_back();
                ga.elems[itid->second].alts.push_back(std::move(cond));
              }
              // advance locals
              bool carried = false;
              for (size_t i = 0; i < lodo.size() && !carried; ++i) {
                lodo[i] = (lodo[i] + 1) % lc[i].size();
                carried = lodo[i] != 0;
              }
              if (!carried) break;
            }
          }
          out.aggs.push_back(std::move(ga));
        }
      }
      if (alive) {
        if (r.head) out.head = gp.intern(asp::to_string(subst(*r.head, s)));
        // facts are re-added once at the end; a rule that reduced to one is
        // redundant
        bool redundant = !out.choice && out.head >= 0 && out.body.empty() &&
                         out.aggs.empty() && gp.fact[out.head];
        if (!redundant) gp.rules.push_back(std::move(out));
      }

      // advance globals
      bool carried = false;
      for (size_t i = 0; i < odo.size() && !carried; ++i) {
        odo[i] = (odo[i] + 1) % gc[i].size();
        carried = odo[i] != 0;
      }
      if (!carried) break;
    }
  }

  for (int a = 0; a < static_cast<int>(gp.atom_names.size()); ++a)
    if (gp.fact[a]) gp.rules.push_back(GRule{false, a, {}, {}});
  return gp;
}

// ---------------------------------------------------------- evaluation

namespace detail {

// literal truth under a (derived, candidate) pair: positive literals read the
// first interpretation, negative the second
inline bool lit_holds(const GLit& l, const Model& pos_from, const Model& neg_from) {
  return l.neg ? !neg_from[l.atom] : pos_from[l.atom];
}

inline bool cmp_count(long long lo, long long hi, CmpOp op, long long b, bool certain) {
  switch (op) {
    case CmpOp::Eq: return certain ? (lo == hi && lo == b) : (lo <= b && b <= hi);
    case CmpOp::Neq: return certain ? (b < lo || b > hi) : !(lo == hi && lo == b);
    case CmpOp::Leq: return certain ? hi <= b : lo <= b;
    case CmpOp::Geq: return certain ? lo >= b : hi >= b;
    case CmpOp::Lt: return certain ? hi < b : lo < b;
    case CmpOp::Gt: return certain ? lo > b : hi > b;
  }
  return false;
}

// aggregate truth pair under (K, J); on K == J this is exact two-valued
inline std::pair<bool, bool> agg_pair(const GAgg& a, const Model& k, const Model& j) {
  long long n1 = 0, n2 = 0;
  for (const auto& e : a.elems) {
    bool cert = false, poss = false;
    for (const auto& alt : e.alts) {
      bool c = true, p = true;
      for (const auto& l : alt) {
        c = c && lit_holds(l, k, j);
        p = p && lit_holds(l, j, k);
      }
      cert = cert || c;
      poss = poss || p;
    }
    if (cert) ++n1;
    if (poss) ++n2;
  }
  long long lo = std::min(n1, n2), hi = std::max(n1, n2);
  return {cmp_count(lo, hi, a.op, a.bound, true), cmp_count(lo, hi, a.op, a.bound, false)};
}

inline bool body_true(const GRule& r, const Model& i) {
  for (const auto& l : r.body)
    if (!lit_holds(l, i, i)) return false;
  for (const auto& a : r.aggs)
    if (!agg_pair(a, i, i).first) return false;
  return true;
}

}  // namespace detail

// Stability check: I satisfies every constraint and equals the least model of
// its reduct.  Negative literals and aggregates are evaluated under I; choice
// rules support their head when the body holds and the head is in I.
inline bool check_model(const GroundProgram& gp, const Model& i) {
  using namespace detail;
  for (const auto& r : gp.rules)
    if (r.head < 0 && body_true(r, i)) return false;

  Model out(gp.atom_names.size(), false);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& r : gp.rules) {
      if (r.head < 0 || out[r.head]) continue;
      if (r.choice && !i[r.head]) continue;
      bool ok = true;
      for (const auto& l : r.body) ok = ok && (l.neg ? !i[l.atom] : out[l.atom]);
      for (const auto& a : r.aggs) ok = ok && agg_pair(a, i, i).first;
      if (ok) {
        out[r.head] = true;
        changed = true;
      }
    }
  }
  return out == i;
}

// --------------------------------------------------- model enumeration

// All stable models by trying every subset of the head atoms.  Only for tiny
// programs; the guided enumerator below is the normal path.
inline std::vector<Model> stable_models_exhaustive(const GroundProgram& gp, size_t limit = 0) {
  std::vector<int> free_atoms;
  std::set<int> heads;
  for (const auto& r : gp.rules)
    if (r.head >= 0) heads.insert(r.head);
  for (int a : heads)
    if (!gp.fact[a]) free_atoms.push_back(a);
  if (free_atoms.size() > 22)
    throw GroundError("exhaustive enumeration over " + std::to_string(free_atoms.size()) +
                      " atoms is not feasible");

  std::vector<Model> out;
  Model i(gp.atom_names.size(), false);
  for (size_t a = 0; a < i.size(); ++a) i[a] = gp.fact[a];
  while (true) {
    if (check_model(gp, i)) {
      out.push_back(i);
      if (limit && out.size() == limit) return out;
    }
    bool carried = false;
    for (size_t b = 0; b < free_atoms.size() && !carried; ++b) {
      i[free_atoms[b]] = !i[free_atoms[b]];
      carried = i[free_atoms[b]];
    }
    if (!carried) break;
  }
  return out;
}

namespace detail {

struct WfGround {
  Model lower, upper;
  bool total;
};

// Alternating fixpoint over the non-choice rules, with `fixed` atoms frozen
// and only `open` atoms derivable.  The upper side fires rules on possibly
// true aggregates so that the result brackets every stable model; that is all
// the enumerator needs from it.
inline WfGround wf_residual(const GroundProgram& gp, const Model& fixed_true,
                            const std::vector<char>& open) {
  size_t n = gp.atom_names.size();
  auto apply = [&](const Model& j, bool permissive) {
    Model k = fixed_true;
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& r : gp.rules) {
        if (r.choice || r.head < 0 || !open[r.head] || k[r.head]) continue;
        bool ok = true;
        for (const auto& l : r.body) ok = ok && lit_holds(l, k, j);
        for (const auto& a : r.aggs)
          ok = ok && (permissive ? agg_pair(a, j, k).second : agg_pair(a, k, j).first);
        if (ok) {
          k[r.head] = true;
          changed = true;
        }
      }
    }
    return k;
  };

  Model lower = fixed_true;
  Model upper = fixed_true;
  for (size_t a = 0; a < n; ++a) upper[a] = upper[a] || open[a];
  while (true) {
    Model nl = apply(upper, false);
    Model nu = apply(lower, true);
    if (nl == lower && nu == upper) break;
    lower = std::move(nl);
    upper = std::move(nu);
  }
  return {lower, upper, lower == upper};
}

}  // namespace detail

// All stable models, enumerated per choice-atom subset with the residual
// program solved by the well-founded fixpoint (branching over any leftover
// unknowns).  Falls back to the exhaustive search when choice rule bodies did
// not resolve to facts during grounding.
inline std::vector<Model> stable_models(const GroundProgram& gp, size_t limit = 0) {
  using namespace detail;
  std::set<int> choice_set;
  bool guided = true;
  for (const auto& r : gp.rules)
    if (r.choice) {
      guided = guided && r.body.empty() && r.aggs.empty();
      choice_set.insert(r.head);
    }
  if (!guided) return stable_models_exhaustive(gp, limit);

  std::vector<int> choice(choice_set.begin(), choice_set.end());
  std::vector<char> open(gp.atom_names.size(), false);
  for (const auto& r : gp.rules)
    if (!r.choice && r.head >= 0 && !gp.fact[r.head] && !choice_set.count(r.head))
      open[r.head] = true;

  std::vector<Model> out;
  Model base(gp.atom_names.size(), false);
  for (size_t a = 0; a < base.size(); ++a) base[a] = gp.fact[a];
  while (true) {
    WfGround wf = wf_residual(gp, base, open);
    if (wf.total) {
      if (check_model(gp, wf.lower)) {
        out.push_back(wf.lower);
        if (limit && out.size() == limit) return out;
      }
    } else {
      std::vector<int> unknown;
      for (size_t a = 0; a < open.size(); ++a)
        if (wf.upper[a] && !wf.lower[a]) unknown.push_back(static_cast<int>(a));
      if (unknown.size() > 20)
        throw GroundError("residual program leaves " + std::to_string(unknown.size()) +
                          " atoms undetermined");
      Model i = wf.lower;
      while (true) {
        if (check_model(gp, i)) {
          out.push_back(i);
          if (limit && out.size() == limit) return out;
        }
        bool c = false;
        for (size_t b = 0; b < unknown.size() && !c; ++b) {
          i[unknown[b]] = !i[unknown[b]];
          c = i[unknown[b]];
        }
        if (!c) break;
      }
    }
    bool carried = false;
    for (size_t b = 0; b < choice.size() && !carried; ++b) {
      base[choice[b]] = !base[choice[b]];
      carried = base[choice[b]];
    }
    if (!carried) break;
  }
  return out;
}

// Convenience: parse-level programs in, atom-name sets out, sorted.
inline std::vector<std::set<std::string>> answer_sets(const asp::Program& p, size_t limit = 0) {
  GroundProgram gp = ground(p);
  std::vector<std::set<std::string>> out;
  for (const auto& m : stable_models(gp, limit)) {
    std::set<std::string> s;
    for (size_t a = 0; a < m.size(); ++a)
      if (m[a]) s.insert(gp.atom_names[a]);
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace ground
}  // namespace folasp
