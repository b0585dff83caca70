// Bridge to an external answer-set solver: feed the program on stdin, parse
// the textual answer sets back.  Solver exit codes are not trusted; status
// comes from the SATISFIABLE/UNSATISFIABLE marker in the output.
// SPDX-License-Identifier: MIT
#ifndef FOLASP_BACKEND_HPP
#define FOLASP_BACKEND_HPP

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "folasp/asp.hpp"
#include "folasp/ast.hpp"

namespace folasp::backend {

struct BackendError : Error {
  using Error::Error;
};

enum class SolverStatus { Sat, Unsat, Error };

// raw_output keeps everything the child wrote (stdout and stderr merged) so
// failures stay diagnosable; error is empty unless status == Error.
struct SolverResult {
  SolverStatus status = SolverStatus::Error;
  std::vector<std::set<std::string>> answer_sets;
  std::string raw_output;
  std::string error;
};

namespace detail {

// A model-count argument for the child command: substituted for every
// "{models}" placeholder, or appended clingo-style when there is none.
inline std::string with_models(std::string command, long long max_models) {
  const std::string key = "{models}";
  const std::string n = std::to_string(max_models);
  bool found = false;
  size_t pos = 0;
  while ((pos = command.find(key, pos)) != std::string::npos) {
    command.replace(pos, key.size(), n);
    pos += n.size();
    found = true;
  }
  if (!found) command += " " + n;
  return command;
}

// One whitespace-delimited token must be a ground atom; reuses the program
// parser by reading it as a fact.  Returns the canonical spelling.
inline std::string parse_atom_token(const std::string& tok) {
  asp::Program p;
  try {
    p = asp::parse_program(tok + ".");
  } catch (const asp::AspParseError& e) {
    throw BackendError("malformed atom '" + tok + "': " + e.what());
  }
  if (p.rules.size() != 1) throw BackendError("malformed atom '" + tok + "'");
  const asp::Rule& r = p.rules[0];
  if (r.choice || !r.head || !r.body.empty())
    throw BackendError("malformed atom '" + tok + "'");
  for (const auto& a : r.head->args)
    if (std::holds_alternative<asp::Var>(a.node))
      throw BackendError("atom '" + tok + "' is not ground");
  return asp::to_string(*r.head);
}

}  // namespace detail

// Expected shape: each "Answer: k" header line is followed by one line of
// space-separated ground atoms (empty for the empty set), and a terminal
// SATISFIABLE or UNSATISFIABLE marker line.  Anything else (version banners,
// timing footers) is skipped.  Throws BackendError on malformed atoms or a
// missing marker.
inline SolverResult parse_answer_sets(const std::string& raw) {
  SolverResult res;
  res.raw_output = raw;

  std::vector<std::string> lines;
  {
    std::istringstream in(raw);
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      lines.push_back(std::move(line));
    }
  }

  bool marked = false;
  for (size_t i = 0; i < lines.size(); ++i) {
    const std::string& l = lines[i];
    if (l.rfind("Answer:", 0) == 0) {
      std::set<std::string> atoms;
      if (i + 1 < lines.size()) {
        ++i;
        std::istringstream toks(lines[i]);
        std::string tok;
        while (toks >> tok) atoms.insert(detail::parse_atom_token(tok));
      }
      res.answer_sets.push_back(std::move(atoms));
    } else if (l == "SATISFIABLE") {
      res.status = SolverStatus::Sat;
      marked = true;
      break;
    } else if (l == "UNSATISFIABLE") {
      res.status = SolverStatus::Unsat;
      marked = true;
      break;
    } else if (l == "UNKNOWN") {
      throw BackendError("solver reported UNKNOWN");
    }
  }
  if (!marked) throw BackendError("missing SATISFIABLE/UNSATISFIABLE marker in solver output");
  if (res.status == SolverStatus::Sat && res.answer_sets.empty())
    throw BackendError("SATISFIABLE but no answer sets in output");
  if (res.status == SolverStatus::Unsat && !res.answer_sets.empty())
    throw BackendError("UNSATISFIABLE yet answer sets were printed");
  return res;
}

// Runs `command` (a /bin/sh command line) with the emitted program on its
// stdin and parses the answer sets it prints.  max_models reaches the child
// via with_models; 0 means all models by clingo convention.  Process
// failures (missing executable, unexpected nonzero exit, timeout) come back
// as status Error rather than exceptions.
inline SolverResult run_solver(const asp::Program& p, const std::string& command,
                               long long max_models = 0,
                               std::chrono::milliseconds timeout = std::chrono::seconds(60)) {
  SolverResult res;
  const std::string cmd = detail::with_models(command, max_models);
  const std::string input = asp::to_string(p);

  int in_pipe[2] = {-1, -1};
  int out_pipe[2] = {-1, -1};
  if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0) {
    res.error = "pipe: " + std::string(std::strerror(errno));
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]})
      if (fd >= 0) close(fd);
    return res;
  }

  pid_t pid = fork();
  if (pid < 0) {
    res.error = "fork: " + std::string(std::strerror(errno));
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) close(fd);
    return res;
  }
  if (pid == 0) {
    // own process group so a timeout kill reaches the whole command
    setpgid(0, 0);
    dup2(in_pipe[0], 0);
    dup2(out_pipe[1], 1);
    dup2(out_pipe[1], 2);
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) close(fd);
    execl("/bin/sh", "sh", "-c", cmd.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  setpgid(pid, pid);  // may lose the race to the child's own call; either is fine
  close(in_pipe[0]);
  close(out_pipe[1]);
  fcntl(in_pipe[1], F_SETFL, O_NONBLOCK);
  fcntl(out_pipe[0], F_SETFL, O_NONBLOCK);

  // the child may die before reading its stdin; EPIPE must not kill us
  void (*old_pipe)(int) = signal(SIGPIPE, SIG_IGN);

  const auto deadline = std::chrono::steady_clock::now() + timeout;
  std::string raw;
  size_t written = 0;
  bool in_open = true;
  bool timed_out = false;

  for (;;) {
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) {
      timed_out = true;
      break;
    }
    pollfd fds[2];
    fds[0] = {out_pipe[0], POLLIN, 0};
    nfds_t n = 1;
    if (in_open) {
      fds[1] = {in_pipe[1], POLLOUT, 0};
      n = 2;
    }
    int rc = poll(fds, n, static_cast<int>(left.count()) + 1);
    if (rc == 0) {
      timed_out = true;
      break;
    }
    if (rc < 0) {
      if (errno == EINTR) continue;
      break;
    }
    if (in_open && (fds[1].revents & (POLLOUT | POLLERR | POLLHUP))) {
      ssize_t w = write(in_pipe[1], input.data() + written, input.size() - written);
      if (w > 0) written += static_cast<size_t>(w);
      if ((w < 0 && errno != EAGAIN && errno != EINTR) || written == input.size()) {
        close(in_pipe[1]);
        in_open = false;
      }
    }
    if (fds[0].revents & (POLLIN | POLLHUP)) {
      char buf[4096];
      ssize_t r = read(out_pipe[0], buf, sizeof buf);
      if (r > 0) {
        raw.append(buf, static_cast<size_t>(r));
      } else if (r == 0) {
        break;
      } else if (errno != EAGAIN && errno != EINTR) {
        break;
      }
    }
  }

  signal(SIGPIPE, old_pipe);
  if (in_open) close(in_pipe[1]);
  close(out_pipe[0]);

  int status = 0;
  if (timed_out) {
    kill(-pid, SIGKILL);
    kill(pid, SIGKILL);
  }
  while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }

  res.raw_output = raw;
  if (timed_out) {
    res.error = "solver timed out after " + std::to_string(timeout.count()) + "ms: " + cmd;
    return res;
  }
  try {
    return parse_answer_sets(raw);
  } catch (const BackendError& e) {
    int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    if (code == 126 || code == 127)
      res.error = "cannot run solver command: " + cmd;
    else if (code != 0)
      res.error = "solver exited with status " + std::to_string(code) + "; " + e.what();
    else
      res.error = e.what();
    return res;
  }
}

}  // namespace folasp::backend

#endif  // FOLASP_BACKEND_HPP
