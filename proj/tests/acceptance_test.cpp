// Acceptance suite for the whole pipeline.  Each test covers one acceptance
// criterion and prints a single verdict line; the fuzz corpora are seeded so
// every run sees the same problems.
#include <gtest/gtest.h>

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "folasp/asp.hpp"
#include "folasp/ast.hpp"
#include "folasp/backend.hpp"
#include "folasp/ground.hpp"
#include "folasp/normalize.hpp"
#include "folasp/oracle.hpp"
#include "folasp/parse.hpp"
#include "folasp/print.hpp"
#include "folasp/translate.hpp"
#include "folasp/validate.hpp"

namespace {

using namespace folasp;

constexpr uint32_t kSentenceSeed = 0x5eed0003;
constexpr uint32_t kFuzzSeed = 0x5eed0005;

// ------------------------------------------------------------ verdict line

struct Criterion {
  int k;
  std::string desc;
  ~Criterion() {
    bool ok = !::testing::Test::HasFailure() && std::uncaught_exceptions() == 0;
    std::cout << "[criterion " << k << "] " << (ok ? "PASS" : "FAIL") << " - " << desc
              << std::endl;
  }
};

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double s() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

// ----------------------------------------------------------------- helpers

std::string sample_text(const std::string& name) {
  std::ifstream in(std::string(FOLASP_SAMPLE_DIR) + "/" + name);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

ModelExpansionProblem load_text(const std::string& text) {
  return validate_problem(parse_problem(text));
}

ModelExpansionProblem load_sample(const std::string& name) {
  return load_text(sample_text(name));
}

Value sv(const char* s) { return Value{std::string(s)}; }

std::string skey(const Vocabulary& voc, const Structure& s) {
  std::ostringstream os;
  print_structure_block(os, voc, canonical_structure(s));
  return os.str();
}

std::set<std::string> oracle_keys(const ModelExpansionProblem& m, size_t cap = 1000000) {
  std::set<std::string> out;
  for (const auto& s : solve_bruteforce(m, cap)) out.insert(skey(m.vocabulary, s));
  return out;
}

// translate, enumerate stable models, map back, and key the structures
std::set<std::string> pipeline_keys(const ModelExpansionProblem& m) {
  Translation t = translate(Normalizer(m).run());
  std::set<std::string> out;
  for (const auto& s : ground::answer_sets(t.program))
    out.insert(skey(m.vocabulary, to_structure(t, m, s)));
  return out;
}

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cmd(const std::string& cmd) {
  RunResult r;
  FILE* f = popen(cmd.c_str(), "r");
  if (!f) return r;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, f)) > 0) r.out.append(buf, n);
  int status = pclose(f);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

size_t count_occurrences(const std::string& s, const std::string& needle) {
  size_t n = 0;
  for (size_t pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos + 1)) ++n;
  return n;
}

// --------------------------------------------------------- problem writer
//
// Emits desk-scale problems in the input grammar: up to 3 types x 3 elements,
// up to 4 predicates of arity <= 2, at most one function, partial structures,
// up to 2 definitions (positive recursion through own heads, any polarity on
// everything else), sentences of depth <= 4 with cardinality comparisons.
// The candidate-space budget keeps both brute force and enumeration fast.

struct PredSig {
  std::string name;
  std::vector<std::string> sig;
};

class ProblemGen {
 public:
  explicit ProblemGen(std::mt19937& rng) : rng_(rng) {}

  std::string fuzz() {
    build(pick(1, 3), pick(1, 4), chance(50));
    for (const auto& p : preds_)
      if (chance(50)) interpret(p.name);
    if (func_ && chance(50)) interpret(func_->name);
    enforce_budget(8192.0);

    Flags fl{true, func_.has_value(), {}};
    std::vector<std::string> sentences;
    int nsent = one_of<int>({0, 1, 1, 2});
    for (int i = 0; i < nsent; ++i) {
      Env env;
      sentences.push_back(formula(pick(2, 4), env, fl) + ".");
    }

    std::vector<std::string> defines;
    std::set<std::string> defined_already;
    int ndefs = one_of<int>({0, 0, 1, 1, 2});
    for (int d = 0; d < ndefs; ++d) {
      std::vector<PredSig> cands;
      for (const auto& p : preds_)
        if (!defined_already.count(p.name)) cands.push_back(p);
      if (cands.empty()) break;
      int nheads = (cands.size() >= 2 && chance(20)) ? 2 : 1;
      std::vector<PredSig> heads;
      for (int h = 0; h < nheads; ++h) {
        int i = pick(0, static_cast<int>(cands.size()) - 1);
        heads.push_back(cands[i]);
        cands.erase(cands.begin() + i);
      }
      std::set<std::string> head_names;
      for (const auto& h : heads) {
        head_names.insert(h.name);
        defined_already.insert(h.name);
      }
      std::vector<std::string> rules;
      for (const auto& h : heads) rules.push_back(def_rule(h, heads, head_names));
      if (chance(30)) rules.push_back(def_rule(heads[0], heads, head_names));
      std::string block = "  define {\n";
      for (const auto& r : rules) block += "    " + r + "\n";
      block += "  }";
      defines.push_back(block);
    }

    return assemble(sentences, defines);
  }

  std::string sentence_only() {
    build(pick(1, 2), pick(2, 3), false);
    for (const auto& p : preds_) interpret(p.name);
    Flags fl{true, false, {}};
    Env env;
    return assemble({formula(pick(2, 4), env, fl) + "."}, {});
  }

 private:
  using Env = std::vector<std::pair<std::string, std::string>>;  // var -> type

  struct Flags {
    bool cardinality;
    bool funcs;
    std::set<std::string> exclude;  // predicates a leaf must not mention
  };

  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool chance(int pct) { return pick(1, 100) <= pct; }
  template <class T>
  T one_of(const std::vector<T>& v) {
    return v[pick(0, static_cast<int>(v.size()) - 1)];
  }

  void build(int ntypes, int npreds, bool with_func) {
    types_.clear();
    elems_.clear();
    preds_.clear();
    func_.reset();
    interp_.clear();
    var_n_ = 0;

    static const char* tnames[] = {"A", "B", "C"};
    static const char* eprefix[] = {"a", "b", "c"};
    for (int i = 0; i < ntypes; ++i) {
      std::string t = tnames[i];
      types_.push_back(t);
      int ne = pick(1, 3);
      for (int j = 1; j <= ne; ++j) elems_[t].push_back(eprefix[i] + std::to_string(j));
    }
    static const char* pnames[] = {"p", "q", "r", "s"};
    for (int i = 0; i < npreds; ++i) {
      PredSig p;
      p.name = pnames[i];
      int ar = pick(0, 2);
      for (int j = 0; j < ar; ++j) p.sig.push_back(one_of(types_));
      preds_.push_back(std::move(p));
    }
    if (with_func) {
      PredSig f;
      f.name = "f";
      if (chance(35)) f.sig.push_back(one_of(types_));  // otherwise a constant
      func_ = std::move(f);
      func_result_ = one_of(types_);
    }
  }

  std::vector<std::vector<std::string>> all_tuples(const std::vector<std::string>& sig) const {
    std::vector<std::vector<std::string>> out{{}};
    for (const auto& t : sig) {
      std::vector<std::vector<std::string>> next;
      for (const auto& partial : out)
        for (const auto& e : elems_.at(t)) {
          auto row = partial;
          row.push_back(e);
          next.push_back(std::move(row));
        }
      out = std::move(next);
    }
    return out;
  }

  void interpret(const std::string& name) {
    if (func_ && name == func_->name) {
      std::string rows;
      for (const auto& args : all_tuples(func_->sig)) {
        if (!rows.empty()) rows += "; ";
        std::string lhs;
        for (size_t i = 0; i < args.size(); ++i) lhs += (i ? ", " : "") + args[i];
        rows += lhs + " -> " + one_of(elems_.at(func_result_));
      }
      interp_[name] = name + " = {" + rows + "}";
      return;
    }
    for (const auto& p : preds_) {
      if (p.name != name) continue;
      if (p.sig.empty()) {
        interp_[name] = name + " = " + (chance(50) ? "true" : "false");
        return;
      }
      std::string rows;
      for (const auto& tup : all_tuples(p.sig)) {
        if (!chance(50)) continue;
        if (!rows.empty()) rows += "; ";
        for (size_t i = 0; i < tup.size(); ++i) rows += (i ? ", " : "") + tup[i];
      }
      interp_[name] = name + " = {" + rows + "}";
      return;
    }
  }

  // open candidate space measured in the relational (graph) coding, so it
  // bounds the post-normalization oracle as well
  double space() const {
    double s = 1;
    for (const auto& p : preds_)
      if (!interp_.count(p.name)) s *= std::pow(2.0, static_cast<double>(all_tuples(p.sig).size()));
    if (func_ && !interp_.count(func_->name))
      s *= std::pow(2.0, static_cast<double>(all_tuples(func_->sig).size() *
                                             elems_.at(func_result_).size()));
    return s;
  }

  void enforce_budget(double limit) {
    while (space() > limit) {
      std::vector<std::string> open;
      for (const auto& p : preds_)
        if (!interp_.count(p.name)) open.push_back(p.name);
      if (func_ && !interp_.count(func_->name)) open.push_back(func_->name);
      interpret(one_of(open));
    }
  }

  std::string fresh() { return "v" + std::to_string(++var_n_); }

  std::string term(const std::string& type, const Env& env, bool funcs) {
    std::vector<std::string> vars;
    for (const auto& [v, t] : env)
      if (t == type) vars.push_back(v);
    if (!vars.empty() && chance(65)) return one_of(vars);
    if (funcs && func_ && func_result_ == type && chance(30)) {
      if (func_->sig.empty()) return func_->name;
      std::string args;
      for (size_t i = 0; i < func_->sig.size(); ++i)
        args += (i ? ", " : "") + term(func_->sig[i], env, false);
      return func_->name + "(" + args + ")";
    }
    return one_of(elems_.at(type));
  }

  std::string pred_atom(const PredSig& p, const Env& env, bool funcs) {
    if (p.sig.empty()) return p.name;
    std::string args;
    for (size_t i = 0; i < p.sig.size(); ++i) args += (i ? ", " : "") + term(p.sig[i], env, funcs);
    return p.name + "(" + args + ")";
  }

  std::string cardinality(Env& env, const Flags& fl) {
    int nb = pick(1, 2);
    std::string decl;
    for (int i = 0; i < nb; ++i) {
      std::string v = fresh();
      std::string t = one_of(types_);
      decl += (i ? ", " : "") + v + "[" + t + "]";
      env.emplace_back(v, t);
    }
    Flags inner = fl;
    inner.cardinality = false;
    std::string body = formula(pick(0, 2), env, inner);
    for (int i = 0; i < nb; ++i) env.pop_back();
    std::string op = one_of<std::string>({"=", "~=", "=<", ">=", "<", ">"});
    std::string k = std::to_string(pick(0, 4));
    std::string agg = "#{" + decl + " : " + body + "}";
    return chance(25) ? k + " " + op + " " + agg : agg + " " + op + " " + k;
  }

  std::string leaf(Env& env, const Flags& fl) {
    std::vector<PredSig> avail;
    for (const auto& p : preds_)
      if (!fl.exclude.count(p.name)) avail.push_back(p);
    int r = pick(1, 100);
    if (r <= 6) return chance(50) ? "true" : "false";
    if (fl.cardinality && r <= 18) return cardinality(env, fl);
    if (r <= 40 || avail.empty()) {
      // ordering is integer-only, so symbolic terms get (in)equality
      std::string t = one_of(types_);
      std::string op = one_of<std::string>({"=", "=", "=", "~=", "~="});
      return term(t, env, fl.funcs) + " " + op + " " + term(t, env, fl.funcs);
    }
    return pred_atom(one_of(avail), env, fl.funcs);
  }

  std::string formula(int depth, Env& env, const Flags& fl) {
    if (depth <= 0 || chance(28)) return leaf(env, fl);
    int r = pick(1, 100);
    if (r <= 12) return "~(" + formula(depth - 1, env, fl) + ")";
    if (r <= 60) {
      const char* op = r <= 30 ? " & " : r <= 48 ? " | " : r <= 55 ? " => " : " <=> ";
      std::string lhs = formula(depth - 1, env, fl);
      std::string rhs = formula(depth - 1, env, fl);
      return "(" + lhs + op + rhs + ")";
    }
    std::string v = fresh();
    std::string t = one_of(types_);
    env.emplace_back(v, t);
    std::string body = formula(depth - 1, env, fl);
    env.pop_back();
    return std::string(chance(50) ? "(!" : "(?") + v + "[" + t + "]: " + body + ")";
  }

  std::string def_rule(const PredSig& head, const std::vector<PredSig>& heads,
                       const std::set<std::string>& head_names) {
    Env env;
    std::string head_text = head.name;
    if (!head.sig.empty()) {
      std::string args;
      for (size_t i = 0; i < head.sig.size(); ++i) {
        std::string v = fresh();
        env.emplace_back(v, head.sig[i]);
        args += (i ? ", " : "") + v;
      }
      head_text += "(" + args + ")";
    }
    Flags fl{false, func_.has_value(), head_names};
    std::string body = formula(pick(1, 3), env, fl);
    if (chance(50)) {
      // recursion stays positive: own heads appear only through this hook
      std::string rec = pred_atom(one_of(heads), env, false);
      body = "(" + body + (chance(50) ? " & " : " | ") + rec + ")";
    }
    return head_text + " <- " + body + ".";
  }

  std::string assemble(const std::vector<std::string>& sentences,
                       const std::vector<std::string>& defines) const {
    std::string out = "vocabulary {\n";
    for (const auto& t : types_) out += "  type " + t + "\n";
    for (const auto& p : preds_) {
      out += "  " + p.name;
      if (!p.sig.empty()) {
        out += "(";
        for (size_t i = 0; i < p.sig.size(); ++i) out += (i ? ", " : "") + p.sig[i];
        out += ")";
      }
      out += "\n";
    }
    if (func_) {
      out += "  " + func_->name + "(";
      for (size_t i = 0; i < func_->sig.size(); ++i) out += (i ? ", " : "") + func_->sig[i];
      out += ") : " + func_result_ + "\n";
    }
    out += "}\nstructure {\n";
    for (const auto& t : types_) {
      out += "  " + t + " = {";
      const auto& es = elems_.at(t);
      for (size_t i = 0; i < es.size(); ++i) out += (i ? ", " : "") + es[i];
      out += "}\n";
    }
    for (const auto& p : preds_)
      if (auto it = interp_.find(p.name); it != interp_.end()) out += "  " + it->second + "\n";
    if (func_)
      if (auto it = interp_.find(func_->name); it != interp_.end()) out += "  " + it->second + "\n";
    out += "}\ntheory {\n";
    for (const auto& s : sentences) out += "  " + s + "\n";
    for (const auto& d : defines) out += d + "\n";
    out += "}\n";
    return out;
  }

  std::mt19937& rng_;
  std::vector<std::string> types_;
  std::map<std::string, std::vector<std::string>> elems_;
  std::vector<PredSig> preds_;
  std::optional<PredSig> func_;
  std::string func_result_;
  std::map<std::string, std::string> interp_;
  int var_n_ = 0;
};

// ---------------------------------------------------------------- criteria

TEST(Acceptance, Criterion1GoldenGraphColoring) {
  Criterion c{1, "graph coloring translates to the 5/7/6/4 program and expands to both colorings"};
  Timer timer;
  auto m = load_sample("gc.fod");
  Translation t = translate(Normalizer(m).run());
  EXPECT_EQ(t.count(Block::Choice), 5);
  EXPECT_EQ(t.count(Block::Fact), 7);
  EXPECT_EQ(t.count(Block::Sentence), 6);
  EXPECT_EQ(t.count(Block::Definition), 4);
  EXPECT_EQ(t.program.rules.size(), 22u);

  auto sets = ground::answer_sets(t.program);
  ASSERT_EQ(sets.size(), 2u);
  std::set<std::string> keys;
  for (const auto& s : sets) keys.insert(skey(m.vocabulary, to_structure(t, m, s)));
  EXPECT_EQ(keys.size(), 2u);

  Structure expansion = m.structure;
  expansion.pred_interp["SymBorder"] = {{sv("be"), sv("lux")},
                                        {sv("be"), sv("nl")},
                                        {sv("lux"), sv("be")},
                                        {sv("nl"), sv("be")}};
  expansion.func_interp["ColorOf"] = {{{sv("be")}, sv("red")},
                                      {{sv("lux")}, sv("blue")},
                                      {{sv("nl")}, sv("blue")}};
  EXPECT_TRUE(keys.count(skey(m.vocabulary, expansion)));
  EXPECT_LT(timer.s(), 5.0);
}

TEST(Acceptance, Criterion2ChoiceRulesEnumerateEveryExpansion) {
  Criterion c{2, "empty theory: 32768 back-mapped answer sets equal the brute-force expansions"};
  Timer timer;
  auto m = load_sample("gc_relational.fod");
  Translation t = translate(Normalizer(m).run());
  EXPECT_EQ(t.count(Block::Sentence), 0);
  EXPECT_EQ(t.count(Block::Definition), 0);

  auto sets = ground::answer_sets(t.program);
  EXPECT_EQ(sets.size(), 32768u);
  std::set<std::string> keys;
  for (const auto& s : sets) keys.insert(skey(m.vocabulary, to_structure(t, m, s)));
  EXPECT_EQ(keys, oracle_keys(m, 40000));
  EXPECT_LT(timer.s(), 60.0);
}

TEST(Acceptance, Criterion3ReifiedExtensionsMatchDirectEvaluation) {
  Criterion c{3, "50 random sentences: one stable model whose delta extensions equal the "
                 "satisfying tuples"};
  Timer timer;
  std::mt19937 rng(kSentenceSeed);
  for (int iter = 0; iter < 50; ++iter) {
    ProblemGen gen(rng);
    std::string text = gen.sentence_only();
    NormalizedProblem norm = Normalizer(parse_problem(text)).run();
    Translation t = translate(norm);
    ASSERT_EQ(t.count(Block::Choice), 0) << text;
    ASSERT_EQ(t.count(Block::Definition), 0) << text;

    asp::Program rules;  // R_S + R_phi: everything except the goal constraints
    for (size_t i = 0; i < t.program.rules.size(); ++i)
      if (!t.goal_constraint[i]) rules.rules.push_back(t.program.rules[i]);
    auto sets = ground::answer_sets(rules);
    ASSERT_EQ(sets.size(), 1u) << text;
    const auto& model = sets[0];

    std::map<Value, std::string> vsym;
    for (const auto& [s, v] : t.sym_value) vsym.emplace(v, s);
    Evaluator ev(norm.problem.vocabulary, norm.problem.structure);

    for (const auto& d : t.deltas) {
      std::vector<std::vector<Value>> doms;
      for (const auto& a : d.args) doms.push_back(norm.problem.structure.type_interp.at(a.type));
      std::set<std::string> expected;
      std::vector<size_t> idx(doms.size(), 0);
      for (;;) {
        detail::Env env;
        asp::Atom atom{d.name, {}};
        for (size_t i = 0; i < doms.size(); ++i) {
          const Value& v = doms[i][idx[i]];
          env.push(d.args[i].name, v);
          if (const auto* n = std::get_if<long long>(&v))
            atom.args.push_back(asp::ATerm{asp::Int{*n}});
          else
            atom.args.push_back(asp::ATerm{asp::Sym{vsym.at(v)}});
        }
        if (ev.formula(d.subformula, env)) expected.insert(asp::to_string(atom));
        size_t i = 0;
        while (i < doms.size() && ++idx[i] == doms[i].size()) idx[i++] = 0;
        if (i == doms.size()) break;
      }

      std::set<std::string> actual;
      for (const auto& atom : model)
        if (atom == d.name || atom.rfind(d.name + "(", 0) == 0) actual.insert(atom);
      EXPECT_EQ(actual, expected) << "delta " << d.name << " in:\n" << text;
    }
  }
  EXPECT_LT(timer.s(), 120.0);
}

TEST(Acceptance, Criterion4DefinitionSemanticsAndRenaming) {
  Criterion c{4, "separate vs joint definitions and the unfounded-model regression"};
  Timer timer;

  // (a) mutually dependent definitions admit the all-false and all-true models
  auto two = load_sample("two_defs.fod");
  auto two_oracle = oracle_keys(two);
  EXPECT_EQ(two_oracle.size(), 2u);
  bool saw_empty = false, saw_full = false;
  for (const auto& s : solve_bruteforce(two)) {
    bool p = !s.pred_interp.at("p").empty();
    bool q = !s.pred_interp.at("q").empty();
    if (!p && !q) saw_empty = true;
    if (p && q) saw_full = true;
  }
  EXPECT_TRUE(saw_empty);
  EXPECT_TRUE(saw_full);
  EXPECT_EQ(pipeline_keys(two), two_oracle);

  // (b) the jointly defined variant has only the all-false model
  auto joint = load_text(
      "vocabulary {\n  p\n  q\n}\nstructure {\n}\ntheory {\n  define { p <- q. q <- p. }\n}\n");
  auto joint_oracle = oracle_keys(joint);
  ASSERT_EQ(joint_oracle.size(), 1u);
  EXPECT_TRUE(solve_bruteforce(joint)[0].pred_interp.at("p").empty());
  EXPECT_EQ(pipeline_keys(joint), joint_oracle);

  // (c) an interpreted-false defined atom: no models, but dropping the renamed
  // copy lets the definition leak an unfounded model
  auto ff = load_sample("fact_false.fod");
  EXPECT_TRUE(solve_bruteforce(ff).empty());
  NormalizedProblem norm = Normalizer(ff).run();
  EXPECT_TRUE(ground::answer_sets(translate(norm).program).empty());
  TranslateOptions naive;
  naive.rename_defined = false;
  auto spurious = ground::answer_sets(translate(norm, naive).program);
  ASSERT_EQ(spurious.size(), 1u);
  EXPECT_EQ(spurious[0], std::set<std::string>{"p"});

  EXPECT_LT(timer.s(), 5.0);
}

TEST(Acceptance, Criterion5FuzzedProblemsRoundTrip) {
  Criterion c{5, "200 random problems: translated stable models equal brute force"};
  Timer timer;
  std::mt19937 rng(kFuzzSeed);
  for (int iter = 0; iter < 200; ++iter) {
    ProblemGen gen(rng);
    std::string text = gen.fuzz();
    auto m = load_text(text);
    EXPECT_EQ(pipeline_keys(m), oracle_keys(m)) << "problem " << iter << ":\n" << text;
  }
  EXPECT_LT(timer.s(), 600.0);
}

TEST(Acceptance, Criterion6NormalizationPreservesSolutions) {
  Criterion c{6, "normalization preserves brute-force solutions modulo function graphs"};
  Timer timer;

  // key over the original signature; functions read from either coding
  auto graph_key = [](const Vocabulary& voc, const Structure& s) {
    std::ostringstream os;
    auto emit_rows = [&os](std::vector<Tuple> rows) {
      std::sort(rows.begin(), rows.end());
      os << "{";
      for (const auto& row : rows) {
        os << "(";
        for (size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << to_string(row[i]);
        os << ")";
      }
      os << "} ";
    };
    for (const auto& p : voc.predicates) {
      os << p << "=";
      auto it = s.pred_interp.find(p);
      emit_rows(it == s.pred_interp.end() ? std::vector<Tuple>{} : it->second);
    }
    for (const auto& f : voc.functions) {
      std::vector<Tuple> rows;
      if (auto it = s.func_interp.find(f); it != s.func_interp.end())
        for (const auto& [args, val] : it->second) {
          Tuple row = args;
          row.push_back(val);
          rows.push_back(std::move(row));
        }
      if (auto it = s.pred_interp.find(f); it != s.pred_interp.end())
        for (const auto& row : it->second) rows.push_back(row);
      os << f << "=";
      emit_rows(std::move(rows));
    }
    return os.str();
  };

  std::mt19937 rng(kFuzzSeed);
  for (int iter = 0; iter < 200; ++iter) {
    ProblemGen gen(rng);
    std::string text = gen.fuzz();
    auto m = load_text(text);
    auto before_structs = solve_bruteforce(m);
    NormalizedProblem norm = Normalizer(m).run();
    auto after_structs = solve_bruteforce(norm.as_problem());
    EXPECT_EQ(before_structs.size(), after_structs.size()) << "problem " << iter << ":\n" << text;

    std::set<std::string> before, after;
    for (const auto& s : before_structs) before.insert(graph_key(m.vocabulary, s));
    for (const auto& s : after_structs) after.insert(graph_key(m.vocabulary, s));
    EXPECT_EQ(before, after) << "problem " << iter << ":\n" << text;
  }
  EXPECT_LT(timer.s(), 600.0);
}

TEST(Acceptance, Criterion7WellFoundedEngine) {
  Criterion c{7, "well-founded computation: symmetric closure total, p <- ~p three-valued"};
  Timer timer;
  auto m = load_sample("gc.fod");
  WfResult wf = well_founded(m.vocabulary, m.structure, m.theory.definitions[0]);
  EXPECT_EQ(wf.status, WfStatus::Total);
  std::set<Tuple> closure{{sv("be"), sv("lux")},
                          {sv("be"), sv("nl")},
                          {sv("lux"), sv("be")},
                          {sv("nl"), sv("be")}};
  EXPECT_EQ(wf.lower.at("SymBorder"), closure);

  auto neg = load_text("vocabulary {\n  p\n}\nstructure {\n}\ntheory {\n  define { p <- ~p. }\n}\n");
  WfResult bad = well_founded(neg.vocabulary, neg.structure, neg.theory.definitions[0]);
  EXPECT_EQ(bad.status, WfStatus::ThreeValued);
  EXPECT_LT(timer.s(), 1.0);
}

TEST(Acceptance, Criterion8EveryEmittedProgramIsSafe) {
  Criterion c{8, "check_safety reports zero violations across all emitted programs"};
  auto program_of = [](const std::string& text, TranslateOptions opts = {}) {
    return translate(Normalizer(parse_problem(text)).run(), opts).program;
  };

  std::vector<std::pair<std::string, asp::Program>> programs;
  programs.emplace_back("gc.fod", program_of(sample_text("gc.fod")));
  programs.emplace_back("gc_relational.fod", program_of(sample_text("gc_relational.fod")));
  programs.emplace_back("two_defs.fod", program_of(sample_text("two_defs.fod")));
  programs.emplace_back("fact_false.fod", program_of(sample_text("fact_false.fod")));
  TranslateOptions naive;
  naive.rename_defined = false;
  programs.emplace_back("fact_false.fod (naive)", program_of(sample_text("fact_false.fod"), naive));
  programs.emplace_back(
      "joint defs",
      program_of("vocabulary {\n  p\n  q\n}\nstructure {\n}\ntheory {\n  define { p <- q. q <- p. }\n}\n"));

  std::mt19937 rng3(kSentenceSeed);
  for (int i = 0; i < 50; ++i) {
    ProblemGen gen(rng3);
    std::string text = gen.sentence_only();
    programs.emplace_back("sentence corpus #" + std::to_string(i), program_of(text));
  }
  std::mt19937 rng5(kFuzzSeed);
  for (int i = 0; i < 200; ++i) {
    ProblemGen gen(rng5);
    std::string text = gen.fuzz();
    programs.emplace_back("fuzz corpus #" + std::to_string(i), program_of(text));
  }

  for (const auto& [name, prog] : programs) {
    auto errs = asp::check_safety(prog);
    EXPECT_TRUE(errs.empty()) << name << ": " << (errs.empty() ? "" : errs[0]);
  }
}

TEST(Acceptance, Criterion9ExternalSolverSmokeTest) {
  // any stdin-fed solver works; default to this project's own asp subcommand
  // so the child-process path is exercised even without clingo installed
  std::string solver;
  if (const char* env = std::getenv("FOLASP_SOLVER"); env && *env)
    solver = env;
  else if (run_cmd("command -v clingo >/dev/null 2>&1 && echo yes").out == "yes\n")
    solver = "clingo";
  else
    solver = std::string(FOLASP_CLI_PATH) + " asp";

  Criterion c{9, "external solver (" + solver + ") reproduces the builtin structures"};
  Timer timer;
  std::string cli = std::string("\"") + FOLASP_CLI_PATH + "\"";
  std::string gc = std::string("\"") + FOLASP_SAMPLE_DIR + "/gc.fod\"";
  auto builtin = run_cmd(cli + " solve " + gc + " --builtin --models 0");
  auto external = run_cmd(cli + " solve " + gc + " --solver '" + solver + "' --models 0");
  EXPECT_EQ(builtin.exit_code, 0);
  EXPECT_EQ(external.exit_code, 0);
  EXPECT_EQ(count_occurrences(builtin.out, "structure {"), 2u);
  EXPECT_EQ(builtin.out, external.out);
  EXPECT_LT(timer.s(), 10.0);
}

}  // namespace
