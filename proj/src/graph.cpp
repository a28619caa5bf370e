#include "plts/graph.hpp"

#include <algorithm>
#include <deque>
#include <limits>

namespace plts {

Sccs tarjan(const Adjacency& adj) {
  const std::size_t n = adj.size();
  constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> index(n, none), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<std::size_t> stack;
  Sccs out;
  out.comp.assign(n, none);
  std::size_t counter = 0;

  struct Frame {
    std::size_t v;
    std::size_t next;
  };
  std::vector<Frame> call;
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != none) continue;
    call.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.next < adj[f.v].size()) {
        const std::size_t w = adj[f.v][f.next++];
        if (index[w] == none) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      const std::size_t v = f.v;
      call.pop_back();
      if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
      if (low[v] == index[v]) {
        std::size_t size = 0;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          out.comp[w] = out.count;
          ++size;
        } while (w != v);
        bool cyclic = size > 1;
        if (!cyclic) cyclic = std::find(adj[v].begin(), adj[v].end(), v) != adj[v].end();
        out.nontrivial.push_back(cyclic);
        ++out.count;
      }
    }
  }
  return out;
}

std::vector<char> reachable_from(const Adjacency& adj, std::size_t root) {
  std::vector<char> seen(adj.size(), 0);
  std::vector<std::size_t> stack{root};
  seen[root] = 1;
  while (!stack.empty()) {
    const auto v = stack.back();
    stack.pop_back();
    for (auto w : adj[v]) {
      if (!seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
    }
  }
  return seen;
}

namespace {

// Shortest path from `from` to any vertex satisfying `goal`, moving only
// through vertices allowed by `inside`. Returns the vertices after `from`.
template <class Goal, class Inside>
std::optional<std::vector<std::size_t>> bfs_path(const Adjacency& adj, std::size_t from, Goal goal, Inside inside) {
  std::vector<std::size_t> parent(adj.size(), std::numeric_limits<std::size_t>::max());
  std::deque<std::size_t> queue{from};
  std::vector<char> seen(adj.size(), 0);
  seen[from] = 1;
  while (!queue.empty()) {
    const auto v = queue.front();
    queue.pop_front();
    for (auto w : adj[v]) {
      if (!inside(w)) continue;
      if (goal(w)) {
        std::vector<std::size_t> path{w};
        for (auto u = v; u != from; u = parent[u]) path.push_back(u);
        std::reverse(path.begin(), path.end());
        return path;
      }
      if (!seen[w]) {
        seen[w] = 1;
        parent[w] = v;
        queue.push_back(w);
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<Lasso> buchi_nonempty(const Adjacency& adj, std::size_t init,
                                    const std::vector<std::vector<char>>& acceptance) {
  const auto reach = reachable_from(adj, init);
  const auto sccs = tarjan(adj);

  // first qualifying component in vertex order keeps witnesses deterministic
  std::size_t chosen = std::numeric_limits<std::size_t>::max();
  std::vector<std::vector<char>> hit(acceptance.size(), std::vector<char>(sccs.count, 0));
  for (std::size_t v = 0; v < adj.size(); ++v) {
    for (std::size_t k = 0; k < acceptance.size(); ++k) {
      if (acceptance[k][v]) hit[k][sccs.comp[v]] = 1;
    }
  }
  std::size_t anchor = 0;
  for (std::size_t v = 0; v < adj.size() && chosen == std::numeric_limits<std::size_t>::max(); ++v) {
    const auto c = sccs.comp[v];
    if (!reach[v] || !sccs.nontrivial[c]) continue;
    if (std::all_of(hit.begin(), hit.end(), [&](const auto& h) { return h[c] != 0; })) {
      chosen = c;
      anchor = v;
    }
  }
  if (chosen == std::numeric_limits<std::size_t>::max()) return std::nullopt;

  auto inside = [&](std::size_t w) { return sccs.comp[w] == chosen; };
  Lasso out;
  // stem: init to anchor
  out.path.push_back(init);
  if (init != anchor) {
    auto p = bfs_path(adj, init, [&](std::size_t w) { return w == anchor; }, [](std::size_t) { return true; });
    out.path.insert(out.path.end(), p->begin(), p->end());
    out.path.pop_back();
  } else {
    out.path.pop_back();
  }
  out.loop_start = out.path.size();
  // loop: anchor, then visit one vertex of every set, then back to anchor
  std::vector<std::size_t> loop{anchor};
  for (const auto& set : acceptance) {
    if (std::any_of(loop.begin(), loop.end(), [&](std::size_t v) { return set[v] != 0; })) continue;
    auto p = bfs_path(adj, loop.back(), [&](std::size_t w) { return set[w] != 0; }, inside);
    loop.insert(loop.end(), p->begin(), p->end());
  }
  auto back = bfs_path(adj, loop.back(), [&](std::size_t w) { return w == anchor; }, inside);
  loop.insert(loop.end(), back->begin(), back->end());
  loop.pop_back();  // anchor closes the loop
  out.path.insert(out.path.end(), loop.begin(), loop.end());
  return out;
}

}  // namespace plts
