#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "plts/automata.hpp"
#include "plts/formula.hpp"
#include "plts/graph.hpp"
#include "plts/machine.hpp"
#include "plts/word.hpp"

namespace plts {

/// Buchi graph whose vertices carry the two colors (bit 0 = r, bit 1 = r').
struct ColoredGraph {
  std::vector<unsigned> colors;
  Adjacency succ;
  std::size_t init = 0;
  /// One or two acceptance sets (generalized Buchi).
  std::vector<std::vector<char>> acceptance;

  std::size_t vertices() const { return colors.size(); }
  /// Throws std::invalid_argument when the shape is inconsistent.
  void check() const;
};

/// Colored graph of a system against a specification automaton: vertices
/// (s, R, q) reachable from (s0, {}, q0).
struct SystemGraph {
  struct Vertex {
    std::size_t s;
    unsigned colors;
    std::size_t q;
  };
  ColoredGraph graph;
  std::vector<Vertex> origin;
};

/// The spec reads l(s) u i u R on leaving (s, R, q); the successor's colors
/// are free. Every spec proposition must be a system proposition or a color.
SystemGraph build_colored_graph(const TransitionSystem& ts, const Nba& spec, const std::string& r,
                                const std::string& r2);

/// Pumpable accepting path through the product with N_pump over the graph's
/// vertices. The witness is a lasso of g.
std::optional<Lasso> pumpable_nonempty(const ColoredGraph& g);
/// Vertex count of the product explored by pumpable_nonempty.
std::size_t pump_product_size(const ColoredGraph& g);

/// Whether a vertex lasso is an accepting pumpable path, judged on the stem
/// and `unrollings` copies of the loop.
bool is_pumpable_accepting(const ColoredGraph& g, const Lasso& l, std::size_t unrollings = 2);

/// Exhaustive search over lassos with stem <= max_stem and loop <= max_loop
/// vertices; a returned witness has as few vertices as possible. Checks each
/// candidate at two and three unrollings and throws std::logic_error if they
/// disagree.
std::optional<Lasso> brute_force_pumpable(const ColoredGraph& g, std::size_t max_stem, std::size_t max_loop);

struct McResult {
  bool holds = false;
  /// On failure: a colored execution over inputs, outputs, r, r'.
  std::optional<LassoWord> witness;
  std::size_t spec_states = 0;
  std::size_t graph_vertices = 0;
};

struct McOptions {
  std::string r = "_r";
  std::string r2 = "_r2";
};

/// Assume-guarantee check: for every bound on the assumption some bound on
/// the guarantee holds on every execution of ts. Throws std::invalid_argument
/// when a color collides with a used proposition or a formula mentions a
/// proposition the system does not have.
McResult ag_model_check(const TransitionSystem& ts, const Formula& assumption, const Formula& guarantee,
                        const McOptions& opt = {});
McResult prompt_model_check(const TransitionSystem& ts, const Formula& f, const McOptions& opt = {});

std::string to_string(const Lasso& l);

}  // namespace plts
