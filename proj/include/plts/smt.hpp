#pragma once

#include <chrono>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace plts {

/// Solver could not be launched or answered with something unreadable.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolveResult {
  enum Status { Sat, Unsat, Unknown } status = Unknown;
  /// get-value answers keyed by the printed term, e.g. "(d_0 1 0)" -> "2".
  std::map<std::string, std::string> values;
  /// Solver's reason when Unknown (including "timeout").
  std::string reason;
  double seconds = 0;
};

/// Runs `command` through /bin/sh with the script on standard input. A
/// timeout kills the solver and yields Unknown with reason "timeout". Throws
/// SolverError on spawn failure or malformed output.
SolveResult solve(const std::string& script, const std::string& command, std::chrono::milliseconds timeout);

/// Minimal s-expression reader for solver output.
struct SExpr {
  std::string atom;  ///< empty for lists
  std::vector<SExpr> items;

  bool is_atom() const { return items.empty() && !atom.empty(); }
  std::string str() const;
};
/// Parses every top-level expression; throws SolverError on unbalanced input.
std::vector<SExpr> parse_sexprs(const std::string& text);

}  // namespace plts
