#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "plts/architecture.hpp"
#include "plts/word.hpp"

namespace plts {

/// Deterministic Moore machine. Input letters are bitmasks over `inputs`,
/// labels bitmasks over `outputs`. delta is dense: delta[s * letters() + i].
struct TransitionSystem {
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::size_t init = 0;
  std::vector<std::size_t> delta;
  std::vector<Letter> label;

  std::size_t states() const { return label.size(); }
  std::size_t letters() const { return std::size_t{1} << inputs.size(); }
  std::size_t next(std::size_t s, Letter i) const { return delta[s * letters() + i]; }

  /// Throws std::invalid_argument when delta is not total, a target is out of
  /// range, labels use undeclared outputs, or inputs and outputs overlap.
  void check() const;

  friend bool operator==(const TransitionSystem&, const TransitionSystem&) = default;
};

/// Label reached after reading the prefix from the initial state.
Letter run_output(const TransitionSystem& ts, const std::vector<Letter>& prefix);

/// Reads additional input propositions and ignores them.
TransitionSystem widen(const TransitionSystem& ts, const std::vector<std::string>& extra);

/// State (s1, s2) has index s1 * |S2| + s2. Inputs are ts1's followed by the
/// new ones of ts2.
TransitionSystem distributed_product(const TransitionSystem& ts1, const TransitionSystem& ts2);

std::vector<std::size_t> reachable_states(const TransitionSystem& ts);

/// Every reachable state keeps still on letters without sched.
bool respects_scheduling(const TransitionSystem& ts, const std::string& sched);

/// Word over inputs followed by outputs: position n carries the n-th input
/// letter together with the label of the state reached before reading it.
LassoWord trace(const TransitionSystem& ts, const LassoWord& input);

/// Canonical traces for every input lasso with |stem| <= max_stem and
/// 1 <= |loop| <= max_loop.
std::set<LassoWord> traces(const TransitionSystem& ts, std::size_t max_stem, std::size_t max_loop);

/// Global machine of an architecture: inputs are the environment outputs,
/// outputs all system outputs. Each process moves on the projection to its
/// inputs of the environment letter joined with the current labels of all
/// processes. Global state index is mixed radix with the first process least
/// significant.
TransitionSystem compose(const Architecture& a, const std::map<std::string, TransitionSystem>& locals);

std::string to_dot(const TransitionSystem& ts);

}  // namespace plts
