#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "plts/formula.hpp"
#include "plts/graph.hpp"
#include "plts/machine.hpp"
#include "plts/word.hpp"

namespace plts {

/// Conjunction of literals over a proposition list.
struct Cube {
  Letter pos = 0;
  Letter neg = 0;

  bool matches(Letter l) const { return (l & pos) == pos && (l & neg) == 0; }
  bool consistent() const { return (pos & neg) == 0; }
  friend bool operator==(const Cube&, const Cube&) = default;
  friend auto operator<=>(const Cube&, const Cube&) = default;
};

/// Condition on the extra letter component (an implementation state or a
/// vertex id).
struct XCond {
  enum Kind { Any, Eq, Neq } kind = Any;
  std::size_t value = 0;

  bool matches(std::size_t x) const { return kind == Any || (kind == Eq) == (x == value); }
  friend bool operator==(const XCond&, const XCond&) = default;
  friend auto operator<=>(const XCond&, const XCond&) = default;
};

struct NbaEdge {
  Cube guard;
  XCond x;
  std::size_t target = 0;

  friend bool operator==(const NbaEdge&, const NbaEdge&) = default;
  friend auto operator<=>(const NbaEdge&, const NbaEdge&) = default;
};

/// Nondeterministic Buchi automaton over 2^props x {0..x_count-1}. Plain
/// word automata have x_count == 1 and only Any conditions.
struct Nba {
  std::vector<std::string> props;
  std::size_t x_count = 1;
  std::size_t init = 0;
  std::vector<std::vector<NbaEdge>> edges;
  std::vector<char> accepting;

  std::size_t states() const { return edges.size(); }
  std::size_t edge_count() const;
  std::vector<std::size_t> successors(std::size_t q, Letter l, std::size_t x = 0) const;
};

/// Tableau translation with transition-based generalized acceptance,
/// degeneralized by a level counter per strongly connected component. States that cannot reach an accepting
/// cycle are removed. `props` must contain every atom of f; defaults to the
/// sorted atoms. Throws std::invalid_argument for Fp, F<=x or G<=y.
Nba ltl_to_nba(const Formula& f, std::vector<std::string> props = {});

/// Quotient by direct-simulation equivalence, then drop edges whose target is
/// strictly simulated by another target on the same letter. Language is
/// unchanged. Automata with x_count != 1 or more than 10 props are returned
/// as they are.
Nba reduce(const Nba& n);

/// Lasso membership via the product of the word positions with the automaton.
/// The word must declare every proposition of the automaton; x is fixed to 0.
bool nba_accepts(const Nba& n, const LassoWord& w);
/// Same, for automata reading a vertex id along with each letter.
bool nba_accepts(const Nba& n, const LassoWord& w, const std::vector<std::size_t>& x_stem,
                 const std::vector<std::size_t>& x_loop);

/// Safety automaton for pumpable colored paths over vertices 0..vertices-1.
/// Colors are bit 0 = r and bit 1 = r'.
class PumpAutomaton {
 public:
  explicit PumpAutomaton(std::size_t vertices);

  static constexpr std::size_t initial = 0;
  std::size_t vertices() const { return v_; }
  std::size_t states() const { return 1 + 8 * v_ + 2; }

  std::size_t s(std::size_t v, unsigned colors) const { return 1 + 4 * v + colors; }
  std::size_t s1(std::size_t v, unsigned colors) const { return 1 + 4 * v_ + 4 * v + colors; }
  std::size_t s2(bool r2) const { return 1 + 8 * v_ + (r2 ? 1 : 0); }

  /// Successors on reading vertex v carrying colors.
  std::vector<std::size_t> successors(std::size_t state, std::size_t v, unsigned colors) const;
  std::string state_name(std::size_t state) const;

 private:
  std::size_t v_;
};

/// N_pump as an automaton over 2^{r,r'} x vertex ids; every state accepting.
Nba build_pump(std::size_t vertices, const std::string& r, const std::string& r2);

/// Product of a specification automaton with N_pump over vertices (x, q).
/// The spec must contain r and r' among its propositions; the result reads
/// implementation states 0..x_count-1. Vertex (x, q) has id q * x_count + x.
/// Only states reachable from the initial pair are kept.
Nba compose_spec_pump(const Nba& spec, std::size_t x_count, const std::string& r, const std::string& r2);

struct UctEdge {
  Cube out;  ///< over out_props
  Cube dir;  ///< over dir_props
  XCond x;
  std::size_t target = 0;

  friend bool operator==(const UctEdge&, const UctEdge&) = default;
  friend auto operator<=>(const UctEdge&, const UctEdge&) = default;
};

/// Universal co-Buchi tree automaton reading (output letter, implementation
/// state) and branching into directions over dir_props.
struct StateAwareUct {
  std::vector<std::string> out_props;
  std::vector<std::string> dir_props;
  std::size_t x_count = 1;
  std::size_t init = 0;
  std::vector<std::vector<UctEdge>> edges;
  std::vector<char> rejecting;

  std::size_t states() const { return edges.size(); }
  std::size_t rejecting_count() const;
};

/// Dual reading of n: universal branching, rejecting = accepting of n. Every
/// proposition of n must be in out_props or dir_props.
StateAwareUct dualize(const Nba& n, const std::vector<std::string>& dir_props,
                      const std::vector<std::string>& out_props);

struct RunGraph {
  struct Vertex {
    std::size_t q;
    std::size_t s;
  };
  std::vector<Vertex> vertices;  ///< vertices[0] is the root
  Adjacency succ;
};

/// Least graph containing (q0, s0) and closed under the automaton's
/// transitions. The system's inputs must be among the directions, its outputs
/// must cover out_props, and u.x_count must equal its state count.
RunGraph run_graph(const StateAwareUct& u, const TransitionSystem& ts);

/// lambda over Q x S; -1 is bottom.
struct Annotation {
  std::size_t q_count = 0;
  std::size_t s_count = 0;
  std::vector<long> value;

  long at(std::size_t q, std::size_t s) const { return value[q * s_count + s]; }
  long& at(std::size_t q, std::size_t s) { return value[q * s_count + s]; }
  long max() const;
};

/// Annotation counting rejecting vertices along longest run-graph paths, or
/// none when a cycle through a rejecting vertex is reachable.
std::optional<Annotation> check_acceptance(const StateAwareUct& u, const TransitionSystem& ts);
bool valid_annotation(const StateAwareUct& u, const TransitionSystem& ts, const Annotation& a);

std::string to_dot(const Nba& n);

}  // namespace plts
