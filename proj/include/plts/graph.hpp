#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace plts {

using Adjacency = std::vector<std::vector<std::size_t>>;

/// Strongly connected components (iterative Tarjan). comp[v] numbers
/// components in reverse topological order: edges go from higher or equal
/// component numbers to lower or equal ones.
struct Sccs {
  std::vector<std::size_t> comp;
  std::size_t count = 0;
  /// comp c has a cycle (more than one vertex or a self-loop)
  std::vector<char> nontrivial;
};
Sccs tarjan(const Adjacency& adj);

std::vector<char> reachable_from(const Adjacency& adj, std::size_t root);

/// Vertex path of the form stem . loop^omega; path[loop_start..] is the loop,
/// and the last vertex has an edge back to path[loop_start].
struct Lasso {
  std::vector<std::size_t> path;
  std::size_t loop_start = 0;
};

/// Generalized Buchi emptiness: a lasso from init whose loop meets every set.
/// With no sets any reachable cycle qualifies.
std::optional<Lasso> buchi_nonempty(const Adjacency& adj, std::size_t init,
                                    const std::vector<std::vector<char>>& acceptance);

}  // namespace plts
