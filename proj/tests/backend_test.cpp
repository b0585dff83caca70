// Child-process solver bridge: output parsing and process lifecycle.
#include <gtest/gtest.h>

#include <chrono>
#include <fstream>
#include <sstream>

#include "folasp/backend.hpp"
#include "folasp/normalize.hpp"
#include "folasp/parse.hpp"
#include "folasp/translate.hpp"

namespace {

using namespace folasp;
using backend::parse_answer_sets;
using backend::run_solver;
using backend::SolverStatus;

std::string sample(const std::string& name) {
  std::ifstream in(std::string(FOLASP_SAMPLE_DIR) + "/" + name);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

asp::Program gc_program() {
  auto m = parse_problem(sample("gc.fod"));
  return translate(Normalizer(m).run()).program;
}

TEST(ParseAnswerSets, ReadsAtomsAndMarker) {
  auto r = parse_answer_sets("Answer: 1\ncolorOf(be,red) delta_1\nSATISFIABLE\n");
  EXPECT_EQ(r.status, SolverStatus::Sat);
  ASSERT_EQ(r.answer_sets.size(), 1u);
  EXPECT_EQ(r.answer_sets[0], (std::set<std::string>{"colorOf(be,red)", "delta_1"}));
}

TEST(ParseAnswerSets, UnsatisfiableHasNoSets) {
  auto r = parse_answer_sets("UNSATISFIABLE\n");
  EXPECT_EQ(r.status, SolverStatus::Unsat);
  EXPECT_TRUE(r.answer_sets.empty());
}

TEST(ParseAnswerSets, SkipsBannerAndFooterLines) {
  const char* raw =
      "clingo version 5.4.0\n"
      "Reading from stdin\n"
      "Solving...\n"
      "Answer: 1\n"
      "colorOf(be,red) colorOf(nl,blue)\n"
      "Answer: 2\n"
      "\n"
      "SATISFIABLE\n"
      "\n"
      "Models       : 2\n"
      "Time         : 0.004s\n";
  auto r = parse_answer_sets(raw);
  EXPECT_EQ(r.status, SolverStatus::Sat);
  ASSERT_EQ(r.answer_sets.size(), 2u);
  EXPECT_EQ(r.answer_sets[0].size(), 2u);
  EXPECT_TRUE(r.answer_sets[1].empty());
}

TEST(ParseAnswerSets, MalformedAtomIsRejected) {
  EXPECT_THROW(parse_answer_sets("Answer: 1\ncolorOf(be,\nSATISFIABLE\n"),
               backend::BackendError);
  EXPECT_THROW(parse_answer_sets("Answer: 1\np(X)\nSATISFIABLE\n"), backend::BackendError);
}

TEST(ParseAnswerSets, MissingMarkerIsRejected) {
  EXPECT_THROW(parse_answer_sets("Answer: 1\np q\n"), backend::BackendError);
  EXPECT_THROW(parse_answer_sets(""), backend::BackendError);
}

TEST(ParseAnswerSets, SatisfiableWithoutAnswersIsRejected) {
  EXPECT_THROW(parse_answer_sets("SATISFIABLE\n"), backend::BackendError);
}

TEST(ParseAnswerSets, AtomTokensRoundTrip) {
  auto r = parse_answer_sets("Answer: 1\np(a,3) q\nSATISFIABLE\n");
  EXPECT_EQ(r.answer_sets[0], (std::set<std::string>{"p(a,3)", "q"}));
}

TEST(WithModels, SubstitutesPlaceholderOrAppends) {
  EXPECT_EQ(backend::detail::with_models("clingo", 0), "clingo 0");
  EXPECT_EQ(backend::detail::with_models("solver -n {models}", 5), "solver -n 5");
  EXPECT_EQ(backend::detail::with_models("a {models} b {models}", 2), "a 2 b 2");
}

TEST(RunSolver, ParsesAFakeSolversOutput) {
  auto r = run_solver(gc_program(),
                      R"(cat >/dev/null; printf 'Answer: 1\ncolorOf(be,red) delta_1\nSATISFIABLE\n' # {models})");
  EXPECT_EQ(r.status, SolverStatus::Sat);
  ASSERT_EQ(r.answer_sets.size(), 1u);
  EXPECT_TRUE(r.answer_sets[0].count("colorOf(be,red)"));
  EXPECT_TRUE(r.error.empty());
}

TEST(RunSolver, ProgramReachesTheChildsStdin) {
  // the fake solver answers SAT only when it saw the 22-statement program
  auto r = run_solver(gc_program(),
                      R"(n=$(wc -l); if [ "$n" -ge 20 ]; then printf 'Answer: 1\nseen\nSATISFIABLE\n'; else echo UNSATISFIABLE; fi # {models})");
  EXPECT_EQ(r.status, SolverStatus::Sat);
  ASSERT_EQ(r.answer_sets.size(), 1u);
  EXPECT_TRUE(r.answer_sets[0].count("seen"));
}

TEST(RunSolver, PassesTheModelLimit) {
  auto r = run_solver(gc_program(),
                      R"(cat >/dev/null; if [ "{models}" = "7" ]; then echo UNSATISFIABLE; else printf 'Answer: 1\nwrong\nSATISFIABLE\n'; fi)",
                      7);
  EXPECT_EQ(r.status, SolverStatus::Unsat);
}

TEST(RunSolver, MissingExecutableIsAnError) {
  auto r = run_solver(gc_program(), "/nonexistent/solver");
  EXPECT_EQ(r.status, SolverStatus::Error);
  EXPECT_NE(r.error.find("cannot run"), std::string::npos);
}

TEST(RunSolver, NonzeroExitWithoutMarkerIsAnError) {
  auto r = run_solver(gc_program(), "cat >/dev/null; exit 3 # {models}");
  EXPECT_EQ(r.status, SolverStatus::Error);
  EXPECT_NE(r.error.find("status 3"), std::string::npos);
}

TEST(RunSolver, GarbageOutputIsAnError) {
  auto r = run_solver(gc_program(), "cat >/dev/null; echo hello # {models}");
  EXPECT_EQ(r.status, SolverStatus::Error);
  EXPECT_NE(r.error.find("marker"), std::string::npos);
  EXPECT_NE(r.raw_output.find("hello"), std::string::npos);
}

TEST(RunSolver, TimeoutKillsTheChild) {
  auto start = std::chrono::steady_clock::now();
  auto r = run_solver(gc_program(), "sleep 30 # {models}", 0, std::chrono::milliseconds(250));
  auto elapsed = std::chrono::steady_clock::now() - start;
  EXPECT_EQ(r.status, SolverStatus::Error);
  EXPECT_NE(r.error.find("timed out"), std::string::npos);
  EXPECT_LT(std::chrono::duration_cast<std::chrono::seconds>(elapsed).count(), 5);
}

TEST(RunSolver, SolverExitCodeIsIgnoredWhenOutputParses) {
  // clingo exits 10/30 on SAT; only the text matters
  auto r = run_solver(gc_program(), "cat >/dev/null; echo UNSATISFIABLE; exit 20 # {models}");
  EXPECT_EQ(r.status, SolverStatus::Unsat);
}

}  // namespace
