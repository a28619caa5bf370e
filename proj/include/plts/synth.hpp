#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "plts/architecture.hpp"
#include "plts/automata.hpp"
#include "plts/formula.hpp"
#include "plts/machine.hpp"
#include "plts/smt.hpp"

namespace plts {

/// One bound per system process, in architecture order.
using BoundFamily = std::vector<std::size_t>;

/// Every family with entries >= 1 and sum <= cap_total, by ascending sum and
/// lexicographically within a sum.
std::vector<BoundFamily> enumerate_bounds(std::size_t processes, std::size_t cap_total);

struct EncodeOptions {
  /// lambda# <= b * |rejecting|
  bool cap_counters = true;
  /// Counters only inside automaton components that contain a rejecting state.
  bool prune_counters = true;
  /// Upper limit on grounded transition implications; 0 means none.
  std::size_t max_implications = 0;
};

/// Thrown when an encoding would exceed EncodeOptions::max_implications.
class EncodingLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// SMT function names used by the encoding; shared with the decoder.
namespace smt_names {
std::string local_delta(std::size_t process);
std::string local_label(std::size_t process, std::size_t output);
}  // namespace smt_names

/// Declarations and constraints for the per-process transition and label
/// functions and the global transition function `delta` they induce. Local
/// states are 1..b_p; global states 1..b with the first process least
/// significant. When `scheduled` is set, every process whose inputs contain
/// sched_<name> keeps its state on letters without that bit. Visible letters
/// of a process are coded over its inputs in sorted order.
std::string encode_architectural(const Architecture& a, const BoundFamily& bounds, bool scheduled);

/// Annotation constraints for u over the global state space of a with the
/// given bounds, asserting the root and grounding both implication
/// families. u.x_count must be 1 or the product of the bounds.
std::string encode_annotation(const StateAwareUct& u, const Architecture& a, const BoundFamily& bounds,
                              const EncodeOptions& opt = {});

/// Complete script: logic, architectural part, annotation part, check-sat and
/// get-value over every local transition and label point.
std::string encode(const StateAwareUct& u, const Architecture& a, const BoundFamily& bounds, bool scheduled,
                   const EncodeOptions& opt = {});

/// Single implementation reading inputs and writing outputs with b states.
/// Throws std::invalid_argument if more than 16 inputs or 64 outputs.
std::string encode_global(const StateAwareUct& u, std::size_t b, const std::vector<std::string>& inputs,
                          const std::vector<std::string>& outputs, const EncodeOptions& opt = {});

struct Decoded {
  std::map<std::string, TransitionSystem> processes;
  /// Points the solver left undefined, set to local state 1 or false.
  std::size_t defaulted = 0;
};

/// Inverts the coding of encode_architectural.
Decoded decode_model(const std::map<std::string, std::string>& values, const Architecture& a,
                     const BoundFamily& bounds);

/// 2 * the longest r-block on the run of an input-free color process.
/// Throws std::invalid_argument when the color never changes on the cycle.
std::size_t realized_prompt_bound(const TransitionSystem& color);

struct SynthOptions {
  std::size_t cap_total = 6;
  std::string solver = "z3 -in";
  std::chrono::milliseconds timeout{std::chrono::minutes(10)};
  EncodeOptions encoding{true, true, 4'000'000};
  /// Color propositions; must be fresh.
  std::string r = "_r";
  std::string r2 = "_r2";
  /// Called with every script before solving (for --emit-smt).
  std::function<void(const BoundFamily&, const std::string&)> on_script;
};

struct Attempt {
  BoundFamily bounds;
  std::string outcome;  ///< "sat", "unsat", "unknown: <reason>"
  std::size_t automaton_states = 0;
  std::size_t script_bytes = 0;
  double seconds = 0;
};

struct SynthesisResult {
  enum Status { Realized, ExhaustedBounds, SolverFailure, InternalError } status = ExhaustedBounds;
  std::map<std::string, TransitionSystem> processes;  ///< system processes only
  std::optional<TransitionSystem> color;               ///< synchronous drivers
  std::optional<std::size_t> prompt_bound;
  std::map<std::string, std::size_t> valuation;  ///< PLTL driver
  std::vector<Attempt> attempts;
  std::string message;
};

std::string to_string(SynthesisResult::Status s);

/// Synchronous PROMPT-LTL synthesis through the color-extended architecture.
SynthesisResult synth_sync_prompt(const Architecture& a, const Formula& f, const SynthOptions& opt = {});
/// PLTL synthesis through the PROMPT-LTL reduction.
SynthesisResult synth_sync_pltl(const Architecture& a, const Formula& f, const SynthOptions& opt = {});
/// Assume-guarantee synthesis on the scheduled architecture; a is lifted
/// first unless it already is.
SynthesisResult synth_async_ag(const Architecture& a, const Formula& assumption, const Formula& guarantee,
                               const SynthOptions& opt = {});

}  // namespace plts
