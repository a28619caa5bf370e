#include "plts/smt.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <filesystem>

namespace plts {

std::string SExpr::str() const {
  if (items.empty()) return atom.empty() ? "()" : atom;
  std::string out = "(";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ' ';
    out += items[i].str();
  }
  return out + ")";
}

std::vector<SExpr> parse_sexprs(const std::string& text) {
  std::vector<SExpr> top;
  std::vector<SExpr> stack;
  std::size_t i = 0;
  auto emit = [&](SExpr e) {
    if (stack.empty()) {
      top.push_back(std::move(e));
    } else {
      stack.back().items.push_back(std::move(e));
    }
  };
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == ';') {
      while (i < text.size() && text[i] != '\n') ++i;
    } else if (c == '(') {
      stack.emplace_back();
      ++i;
    } else if (c == ')') {
      if (stack.empty()) throw SolverError("unbalanced ')' in solver output");
      SExpr e = std::move(stack.back());
      stack.pop_back();
      emit(std::move(e));
      ++i;
    } else if (c == '"') {
      std::size_t j = i + 1;
      while (j < text.size() && (text[j] != '"' || (j + 1 < text.size() && text[j + 1] == '"'))) {
        j += text[j] == '"' ? 2 : 1;
      }
      if (j >= text.size()) throw SolverError("unterminated string in solver output");
      emit(SExpr{text.substr(i, j + 1 - i), {}});
      i = j + 1;
    } else if (c == '|') {
      const auto j = text.find('|', i + 1);
      if (j == std::string::npos) throw SolverError("unterminated quoted symbol in solver output");
      emit(SExpr{text.substr(i, j + 1 - i), {}});
      i = j + 1;
    } else {
      std::size_t j = i;
      while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])) && text[j] != '(' &&
             text[j] != ')' && text[j] != ';') {
        ++j;
      }
      emit(SExpr{text.substr(i, j - i), {}});
      i = j;
    }
  }
  if (!stack.empty()) throw SolverError("unbalanced '(' in solver output");
  return top;
}

namespace {

struct TempFile {
  std::string path;
  int fd = -1;
  TempFile() {
    std::string dir = std::filesystem::temp_directory_path().string();
    std::string templ = dir + "/plts-XXXXXX.smt2";
    std::vector<char> buf(templ.begin(), templ.end());
    buf.push_back('\0');
    fd = mkstemps(buf.data(), 5);
    if (fd < 0) throw SolverError(std::string("cannot create temporary file: ") + std::strerror(errno));
    path = buf.data();
  }
  ~TempFile() {
    if (fd >= 0) close(fd);
    unlink(path.c_str());
  }
};

}  // namespace

SolveResult solve(const std::string& script, const std::string& command, std::chrono::milliseconds timeout) {
  const auto start = std::chrono::steady_clock::now();
  TempFile input;
  for (std::size_t done = 0; done < script.size();) {
    const auto n = write(input.fd, script.data() + done, script.size() - done);
    if (n < 0) throw SolverError(std::string("cannot write script: ") + std::strerror(errno));
    done += static_cast<std::size_t>(n);
  }
  lseek(input.fd, 0, SEEK_SET);

  int out_pipe[2], err_pipe[2];
  if (pipe(out_pipe) != 0 || pipe(err_pipe) != 0) throw SolverError("cannot create pipes");
  const pid_t pid = fork();
  if (pid < 0) throw SolverError("cannot fork solver process");
  if (pid == 0) {
    setpgid(0, 0);
    dup2(input.fd, 0);
    dup2(out_pipe[1], 1);
    dup2(err_pipe[1], 2);
    close(out_pipe[0]);
    close(err_pipe[0]);
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  setpgid(pid, pid);
  close(out_pipe[1]);
  close(err_pipe[1]);

  std::string out, err;
  bool timed_out = false;
  pollfd fds[2] = {{out_pipe[0], POLLIN, 0}, {err_pipe[0], POLLIN, 0}};
  int open_fds = 2;
  const auto deadline = start + timeout;
  char buf[65536];
  while (open_fds > 0) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) {
      timed_out = true;
      break;
    }
    const int ready = poll(fds, 2, static_cast<int>(std::min<long long>(left.count(), 1000)));
    if (ready < 0 && errno != EINTR) break;
    for (int k = 0; k < 2; ++k) {
      if (fds[k].fd < 0 || !(fds[k].revents & (POLLIN | POLLHUP | POLLERR))) continue;
      const auto n = read(fds[k].fd, buf, sizeof buf);
      if (n <= 0) {
        close(fds[k].fd);
        fds[k].fd = -1;
        --open_fds;
      } else {
        (k == 0 ? out : err).append(buf, static_cast<std::size_t>(n));
      }
    }
  }
  if (timed_out) kill(-pid, SIGKILL);
  for (auto& f : fds) {
    if (f.fd >= 0) close(f.fd);
  }
  int status = 0;
  while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }

  while (!err.empty() && std::isspace(static_cast<unsigned char>(err.back()))) err.pop_back();
  SolveResult res;
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (timed_out) {
    res.reason = "timeout";
    return res;
  }
  if (WIFEXITED(status) && WEXITSTATUS(status) == 127 && out.empty()) {
    throw SolverError("cannot launch solver '" + command + "': " + err);
  }
  const auto exprs = parse_sexprs(out);
  if (exprs.empty() || !exprs[0].is_atom()) {
    throw SolverError("solver gave no answer" + (err.empty() ? std::string() : ": " + err));
  }
  const auto& answer = exprs[0].atom;
  if (answer == "unsat") {
    res.status = SolveResult::Unsat;
  } else if (answer == "unknown") {
    res.reason = "solver returned unknown";
  } else if (answer == "sat") {
    res.status = SolveResult::Sat;
    for (std::size_t k = 1; k < exprs.size(); ++k) {
      const auto& e = exprs[k];
      if (!e.items.empty() && e.items[0].atom == "error") {
        throw SolverError("solver error: " + e.str());
      }
      for (const auto& pair : e.items) {
        if (pair.items.size() != 2) throw SolverError("malformed get-value answer: " + pair.str());
        res.values[pair.items[0].str()] = pair.items[1].str();
      }
    }
  } else {
    throw SolverError("unexpected solver answer: " + exprs[0].str());
  }
  return res;
}

}  // namespace plts
