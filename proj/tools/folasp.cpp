// Command-line front door: translate FO(.) model expansion problems to
// ASP-Core-2 text, solve them (built-in enumeration or an external solver fed
// on stdin), check candidate models, and compare the pipeline against the
// brute-force reference.  Stdout is deterministic for fixed inputs and flags.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
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

constexpr int exit_ok = 0;
constexpr int exit_no_solution = 10;
constexpr int exit_mismatch = 11;
constexpr int exit_input = 20;
constexpr int exit_solver = 30;

int usage(std::ostream& os, int code) {
  os << "usage: folasp <command> [options]\n"
        "\n"
        "commands:\n"
        "  translate IN [-o OUT] [--stats] [--dump-normalized]\n"
        "      emit the ASP-Core-2 program for problem IN; --stats appends\n"
        "      per-component statement counts and the ground-atom count as\n"
        "      comments; --dump-normalized prints the normalized problem\n"
        "      instead of the program\n"
        "  solve IN [--solver CMD | --builtin] [--models N]\n"
        "      print the expanded structures, one structure block per model;\n"
        "      N = 0 means all models (default); without --solver/--builtin\n"
        "      the FOLASP_SOLVER environment variable is consulted, then the\n"
        "      built-in enumerator\n"
        "  check IN MODEL\n"
        "      verdict on whether the structure in MODEL solves problem IN\n"
        "  compare IN [--cap K]\n"
        "      solve IN both by translation and by brute force and compare\n"
        "  asp [IN] [--models N]\n"
        "      solve an ASP-Core-2 program (file, or stdin when IN is absent\n"
        "      or '-') and print answer sets in the conventional text format\n"
        "\n"
        "exit codes: 0 ok/sat/equal, 10 no solution, 11 mismatch,\n"
        "            20 input error, 30 solver error\n";
  return code;
}

int fail_input(const std::string& msg) {
  std::cerr << "folasp: error: " << msg << "\n";
  return exit_input;
}

int fail_solver(const std::string& msg) {
  std::cerr << "folasp: solver error: " << msg << "\n";
  return exit_solver;
}

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ModelExpansionProblem load_problem(const std::string& path) {
  return validate_problem(parse_problem(read_input(path)));
}

long long parse_count(const std::string& s, const std::string& flag) {
  size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    throw Error(flag + " expects a number, got '" + s + "'");
  }
  if (used != s.size() || v < 0) throw Error(flag + " expects a nonnegative number, got '" + s + "'");
  return v;
}

std::string render_structure(const Vocabulary& voc, const Structure& s) {
  std::ostringstream os;
  print_structure_block(os, voc, s);
  return os.str();
}

// Back-mapped expansions for one problem, rendered, deduplicated, and in a
// deterministic order.  Answer sets that coincide after aux projection merge.
std::set<std::string> rendered_solutions(const Translation& t, const ModelExpansionProblem& m,
                                         const std::vector<std::set<std::string>>& sets) {
  std::set<std::string> out;
  for (const auto& s : sets) out.insert(render_structure(m.vocabulary, to_structure(t, m, s)));
  return out;
}

// ------------------------------------------------------------- subcommands

int cmd_translate(const std::vector<std::string>& args) {
  std::string in_path;
  std::string out_path;
  bool stats = false;
  bool dump_normalized = false;
  for (size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a == "--stats") {
      stats = true;
    } else if (a == "--dump-normalized") {
      dump_normalized = true;
    } else if (a == "-o") {
      if (++i == args.size()) return fail_input("-o expects a path");
      out_path = args[i];
    } else if (a.size() > 1 && a[0] == '-') {
      return fail_input("unknown option '" + a + "'");
    } else if (in_path.empty()) {
      in_path = a;
    } else {
      return fail_input("unexpected argument '" + a + "'");
    }
  }
  if (in_path.empty()) return fail_input("translate needs an input file");

  NormalizedProblem norm;
  try {
    norm = Normalizer(load_problem(in_path)).run();
  } catch (const Error& e) {
    return fail_input(e.what());
  }

  std::ostringstream body;
  if (dump_normalized) {
    print_problem(body, norm.as_problem());
  } else {
    Translation t;
    try {
      t = translate(norm);
    } catch (const Error& e) {
      return fail_input(e.what());
    }
    body << asp::to_string(t.program);
    if (stats) {
      for (Block b : {Block::Choice, Block::Fact, Block::Sentence, Block::Definition})
        body << "% " << block_name(b) << ": " << t.count(b) << "\n";
      body << "% statements: " << t.program.rules.size() << "\n";
      try {
        body << "% ground atoms: " << ground::ground(t.program).atom_names.size() << "\n";
      } catch (const Error& e) {
        body << "% ground atoms: not computed (" << e.what() << ")\n";
      }
    }
  }

  if (out_path.empty()) {
    std::cout << body.str();
  } else {
    std::ofstream out(out_path);
    if (!out) return fail_input("cannot write '" + out_path + "'");
    out << body.str();
  }
  return exit_ok;
}

int cmd_solve(const std::vector<std::string>& args) {
  std::string in_path;
  std::optional<std::string> solver;
  bool builtin = false;
  long long models = 0;
  for (size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a == "--builtin") {
      builtin = true;
    } else if (a == "--solver") {
      if (++i == args.size()) return fail_input("--solver expects a command");
      solver = args[i];
    } else if (a == "--models") {
      if (++i == args.size()) return fail_input("--models expects a number");
      try {
        models = parse_count(args[i], "--models");
      } catch (const Error& e) {
        return fail_input(e.what());
      }
    } else if (a.size() > 1 && a[0] == '-') {
      return fail_input("unknown option '" + a + "'");
    } else if (in_path.empty()) {
      in_path = a;
    } else {
      return fail_input("unexpected argument '" + a + "'");
    }
  }
  if (in_path.empty()) return fail_input("solve needs an input file");
  if (builtin && solver) return fail_input("--builtin and --solver are mutually exclusive");
  if (!builtin && !solver) {
    if (const char* env = std::getenv("FOLASP_SOLVER"); env && *env) solver = env;
  }

  ModelExpansionProblem m;
  Translation t;
  try {
    m = load_problem(in_path);
    t = translate(Normalizer(m).run());
  } catch (const Error& e) {
    return fail_input(e.what());
  }

  std::vector<std::set<std::string>> sets;
  if (solver) {
    auto r = backend::run_solver(t.program, *solver, models);
    if (r.status == backend::SolverStatus::Error) return fail_solver(r.error);
    sets = std::move(r.answer_sets);
  } else {
    try {
      sets = ground::answer_sets(t.program, models == 0 ? 0 : static_cast<size_t>(models));
    } catch (const Error& e) {
      return fail_solver(e.what());
    }
  }

  std::set<std::string> rendered;
  try {
    rendered = rendered_solutions(t, m, sets);
  } catch (const Error& e) {
    // the external solver produced atoms the translation cannot explain
    return fail_solver(e.what());
  }
  if (rendered.empty()) {
    std::cerr << "folasp: no models\n";
    return exit_no_solution;
  }
  size_t k = 0;
  for (const auto& txt : rendered) {
    if (k++) std::cout << "\n";
    std::cout << "// model " << k << "\n" << txt;
  }
  return exit_ok;
}

int cmd_check(const std::vector<std::string>& args) {
  std::vector<std::string> paths;
  for (const auto& a : args) {
    if (a.size() > 1 && a[0] == '-') return fail_input("unknown option '" + a + "'");
    paths.push_back(a);
  }
  if (paths.size() != 2) return fail_input("check needs a problem file and a model file");

  try {
    ModelExpansionProblem m = load_problem(paths[0]);
    Structure s = parse_structure(read_input(paths[1]), m.vocabulary);
    for (const auto& ty : m.vocabulary.types)
      if (!s.type_interp.count(ty)) throw Error("model does not interpret type '" + ty + "'");
    for (const auto& p : m.vocabulary.predicates)
      if (!s.pred_interp.count(p)) throw Error("model does not interpret '" + p + "'");
    for (const auto& f : m.vocabulary.functions)
      if (!s.func_interp.count(f)) throw Error("model does not interpret function '" + f + "'");
    CheckResult v = satisfies(m, s);
    if (v.ok) {
      std::cout << "MODEL\n";
      return exit_ok;
    }
    std::cout << "NOT A MODEL: " << v.reason << "\n";
    return exit_no_solution;
  } catch (const Error& e) {
    return fail_input(e.what());
  }
}

int cmd_compare(const std::vector<std::string>& args) {
  std::string in_path;
  size_t cap = 1000000;
  for (size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a == "--cap") {
      if (++i == args.size()) return fail_input("--cap expects a number");
      try {
        cap = static_cast<size_t>(parse_count(args[i], "--cap"));
      } catch (const Error& e) {
        return fail_input(e.what());
      }
    } else if (a.size() > 1 && a[0] == '-') {
      return fail_input("unknown option '" + a + "'");
    } else if (in_path.empty()) {
      in_path = a;
    } else {
      return fail_input("unexpected argument '" + a + "'");
    }
  }
  if (in_path.empty()) return fail_input("compare needs an input file");

  ModelExpansionProblem m;
  Translation t;
  try {
    m = load_problem(in_path);
    t = translate(Normalizer(m).run());
  } catch (const Error& e) {
    return fail_input(e.what());
  }

  std::set<std::string> oracle;
  std::set<std::string> translated;
  try {
    for (const auto& s : solve_bruteforce(m, cap)) oracle.insert(render_structure(m.vocabulary, s));
    translated = rendered_solutions(t, m, ground::answer_sets(t.program));
  } catch (const Error& e) {
    return fail_solver(e.what());
  }

  if (oracle == translated) {
    std::cout << "EQUAL: " << oracle.size() << " solution(s)\n";
    return exit_ok;
  }
  std::cout << "MISMATCH: brute force found " << oracle.size() << " solution(s), translation "
            << translated.size() << "\n";
  return exit_mismatch;
}

int cmd_asp(const std::vector<std::string>& args) {
  std::string in_path = "-";
  long long models = 0;
  for (size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a == "--models") {
      if (++i == args.size()) return fail_input("--models expects a number");
      try {
        models = parse_count(args[i], "--models");
      } catch (const Error& e) {
        return fail_input(e.what());
      }
    } else if (a.size() > 1 && a[0] == '-') {
      return fail_input("unknown option '" + a + "'");
    } else if (!a.empty() && a.find_first_not_of("0123456789") == std::string::npos) {
      models = parse_count(a, "model limit");  // clingo-style positional limit
    } else {
      in_path = a;
    }
  }

  asp::Program p;
  try {
    p = asp::parse_program(read_input(in_path));
  } catch (const Error& e) {
    return fail_input(e.what());
  } catch (const asp::AspParseError& e) {
    return fail_input(e.what());
  }

  std::vector<std::set<std::string>> sets;
  try {
    sets = ground::answer_sets(p, models == 0 ? 0 : static_cast<size_t>(models));
  } catch (const Error& e) {
    return fail_solver(e.what());
  }

  size_t k = 0;
  for (const auto& s : sets) {
    std::cout << "Answer: " << ++k << "\n";
    bool first = true;
    for (const auto& atom : s) {
      if (!first) std::cout << " ";
      std::cout << atom;
      first = false;
    }
    std::cout << "\n";
  }
  std::cout << (sets.empty() ? "UNSATISFIABLE" : "SATISFIABLE") << "\n";
  return sets.empty() ? exit_no_solution : exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  if (args.empty()) return usage(std::cerr, exit_input);
  const std::string& cmd = args[0];
  std::vector<std::string> rest(args.begin() + 1, args.end());
  if (cmd == "translate") return cmd_translate(rest);
  if (cmd == "solve") return cmd_solve(rest);
  if (cmd == "check") return cmd_check(rest);
  if (cmd == "compare") return cmd_compare(rest);
  if (cmd == "asp") return cmd_asp(rest);
  if (cmd == "--help" || cmd == "-h" || cmd == "help") return usage(std::cout, exit_ok);
  std::cerr << "folasp: unknown command '" << cmd << "'\n";
  return usage(std::cerr, exit_input);
}
