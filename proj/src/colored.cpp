#include "plts/colored.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace plts {

void ColoredGraph::check() const {
  if (colors.empty()) throw std::invalid_argument("colored graph has no vertices");
  if (succ.size() != colors.size()) throw std::invalid_argument("adjacency does not match the vertex count");
  if (init >= colors.size()) throw std::invalid_argument("initial vertex out of range");
  if (acceptance.empty() || acceptance.size() > 2) throw std::invalid_argument("expected one or two acceptance sets");
  for (const auto& set : acceptance) {
    if (set.size() != colors.size()) throw std::invalid_argument("acceptance set does not match the vertex count");
  }
  for (const auto& out : succ) {
    for (auto w : out) {
      if (w >= colors.size()) throw std::invalid_argument("edge target out of range");
    }
  }
  for (auto c : colors) {
    if (c > 3) throw std::invalid_argument("color label outside {r, r'}");
  }
}

SystemGraph build_colored_graph(const TransitionSystem& ts, const Nba& spec, const std::string& r,
                                const std::string& r2) {
  ts.check();
  if (spec.x_count != 1) throw std::invalid_argument("specification automaton must not read states");
  // spec letter pieces
  Letter rbit = 0, r2bit = 0;
  std::vector<std::pair<std::size_t, Letter>> from_inputs, from_outputs;
  for (std::size_t k = 0; k < spec.props.size(); ++k) {
    const auto& p = spec.props[k];
    const Letter bit = Letter{1} << k;
    if (p == r) {
      rbit = bit;
    } else if (p == r2) {
      r2bit = bit;
    } else if (auto i = prop_index(ts.inputs, p)) {
      from_inputs.emplace_back(*i, bit);
    } else if (auto o = prop_index(ts.outputs, p)) {
      from_outputs.emplace_back(*o, bit);
    } else {
      throw std::invalid_argument("specification proposition '" + p + "' is not a system proposition or a color");
    }
  }
  auto translate = [](Letter l, const std::vector<std::pair<std::size_t, Letter>>& map) {
    Letter out = 0;
    for (const auto& [from, to] : map) {
      if ((l >> from) & 1U) out |= to;
    }
    return out;
  };
  std::vector<Letter> in_part(ts.letters()), out_part(ts.states());
  for (Letter i = 0; i < ts.letters(); ++i) in_part[i] = translate(i, from_inputs);
  for (std::size_t s = 0; s < ts.states(); ++s) out_part[s] = translate(ts.label[s], from_outputs);

  SystemGraph out;
  std::unordered_map<std::size_t, std::size_t> id;
  auto key = [&](std::size_t s, unsigned c, std::size_t q) { return (q * ts.states() + s) * 4 + c; };
  auto vertex = [&](std::size_t s, unsigned c, std::size_t q) {
    auto [it, fresh] = id.emplace(key(s, c, q), out.origin.size());
    if (fresh) out.origin.push_back({s, c, q});
    return it->second;
  };
  vertex(ts.init, 0, spec.init);
  std::vector<std::vector<std::size_t>> succ;
  for (std::size_t v = 0; v < out.origin.size(); ++v) {
    const auto [s, c, q] = out.origin[v];
    const Letter colors = ((c & 1U) ? rbit : 0) | ((c & 2U) ? r2bit : 0);
    std::vector<std::size_t> targets;
    for (Letter i = 0; i < ts.letters(); ++i) {
      const std::size_t s2 = ts.next(s, i);
      for (auto q2 : spec.successors(q, out_part[s] | in_part[i] | colors)) {
        for (unsigned c2 = 0; c2 < 4; ++c2) targets.push_back(vertex(s2, c2, q2));
      }
    }
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
    succ.push_back(std::move(targets));
  }
  out.graph.succ = std::move(succ);
  out.graph.init = 0;
  out.graph.acceptance.assign(1, std::vector<char>(out.origin.size(), 0));
  for (std::size_t v = 0; v < out.origin.size(); ++v) {
    out.graph.colors.push_back(out.origin[v].colors);
    out.graph.acceptance[0][v] = spec.accepting[out.origin[v].q];
  }
  return out;
}

namespace {

struct PumpProduct {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (vertex, pump state)
  Adjacency succ;
};

PumpProduct pump_product(const ColoredGraph& g) {
  g.check();
  const PumpAutomaton pump(g.vertices());
  PumpProduct out;
  std::unordered_map<std::size_t, std::size_t> id;
  auto node = [&](std::size_t v, std::size_t p) {
    auto [it, fresh] = id.emplace(v * pump.states() + p, out.pairs.size());
    if (fresh) out.pairs.emplace_back(v, p);
    return it->second;
  };
  node(g.init, PumpAutomaton::initial);
  for (std::size_t i = 0; i < out.pairs.size(); ++i) {
    const auto [v, p] = out.pairs[i];
    std::vector<std::size_t> targets;
    for (auto p2 : pump.successors(p, v, g.colors[v])) {
      for (auto w : g.succ[v]) targets.push_back(node(w, p2));
    }
    std::sort(targets.begin(), targets.end());
    out.succ.push_back(std::move(targets));
  }
  return out;
}

// Pattern inside the block [a, b): j < j' < j'' with equal vertices at j and
// j'' and a different r value at j'.
bool block_pumpable(const std::vector<std::size_t>& seq, const std::vector<unsigned>& colors, std::size_t a,
                    std::size_t b) {
  for (std::size_t j = a; j < b; ++j) {
    bool flipped = false;
    for (std::size_t k = j + 1; k < b; ++k) {
      if (flipped && seq[k] == seq[j]) return true;
      if ((colors[seq[k]] ^ colors[seq[j]]) & 1U) flipped = true;
    }
  }
  return false;
}

}  // namespace

std::optional<Lasso> pumpable_nonempty(const ColoredGraph& g) {
  const auto prod = pump_product(g);
  std::vector<std::vector<char>> acc;
  for (const auto& set : g.acceptance) {
    std::vector<char> lifted(prod.pairs.size());
    for (std::size_t i = 0; i < prod.pairs.size(); ++i) lifted[i] = set[prod.pairs[i].first];
    acc.push_back(std::move(lifted));
  }
  auto lasso = buchi_nonempty(prod.succ, 0, acc);
  if (!lasso) return std::nullopt;
  Lasso out;
  out.loop_start = lasso->loop_start;
  for (auto i : lasso->path) out.path.push_back(prod.pairs[i].first);
  return out;
}

std::size_t pump_product_size(const ColoredGraph& g) { return pump_product(g).pairs.size(); }

bool is_pumpable_accepting(const ColoredGraph& g, const Lasso& l, std::size_t unrollings) {
  const auto& p = l.path;
  if (p.empty() || l.loop_start >= p.size() || p[0] != g.init || unrollings < 2) return false;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const std::size_t next = k + 1 < p.size() ? p[k + 1] : p[l.loop_start];
    const auto& out = g.succ[p[k]];
    if (std::find(out.begin(), out.end(), next) == out.end()) return false;
  }
  for (const auto& set : g.acceptance) {
    if (std::none_of(p.begin() + l.loop_start, p.end(), [&](std::size_t v) { return set[v] != 0; })) return false;
  }

  std::vector<std::size_t> seq(p.begin(), p.begin() + l.loop_start);
  for (std::size_t u = 0; u < unrollings; ++u) seq.insert(seq.end(), p.begin() + l.loop_start, p.end());
  auto r2 = [&](std::size_t n) { return (g.colors[seq[n]] >> 1) & 1U; };
  // only blocks closed by a change point constrain the path; the open last
  // segment is either infinite or repeats an earlier block
  std::size_t start = 0;
  for (std::size_t n = 1; n < seq.size(); ++n) {
    if (r2(n) == r2(n - 1)) continue;
    if (!block_pumpable(seq, g.colors, start, n)) return false;
    start = n;
  }
  return true;
}

std::optional<Lasso> brute_force_pumpable(const ColoredGraph& g, std::size_t max_stem, std::size_t max_loop) {
  g.check();
  const std::size_t max_len = max_stem + max_loop;
  std::vector<std::size_t> path{g.init};
  std::optional<Lasso> found;
  auto consider = [&]() {
    const std::size_t n = path.size();
    const std::size_t lo = n > max_loop ? n - max_loop : 0;
    for (std::size_t s = lo; s < n && s <= max_stem; ++s) {
      const auto& out = g.succ[path.back()];
      if (std::find(out.begin(), out.end(), path[s]) == out.end()) continue;
      const Lasso l{path, s};
      const bool two = is_pumpable_accepting(g, l, 2);
      if (two != is_pumpable_accepting(g, l, 3)) {
        throw std::logic_error("pumpability differs between two and three unrollings for " + to_string(l));
      }
      if (two) {
        found = l;
        return;
      }
    }
  };
  // iterative deepening: the first witness found is a shortest one
  std::size_t target = 1;
  auto dfs = [&](auto&& self) -> void {
    if (path.size() == target) {
      consider();
      return;
    }
    for (auto w : g.succ[path.back()]) {
      path.push_back(w);
      self(self);
      path.pop_back();
      if (found) return;
    }
  };
  for (; target <= max_len && !found; ++target) dfs(dfs);
  return found;
}

McResult ag_model_check(const TransitionSystem& ts, const Formula& assumption, const Formula& guarantee,
                        const McOptions& opt) {
  ts.check();
  if (opt.r == opt.r2) throw std::invalid_argument("the two colors must differ");
  for (const auto* c : {&opt.r, &opt.r2}) {
    if (prop_index(ts.inputs, *c) || prop_index(ts.outputs, *c)) {
      throw std::invalid_argument("color '" + *c + "' collides with a system proposition");
    }
  }
  for (const auto* f : {&assumption, &guarantee}) {
    if (!is_prompt_ltl(*f)) throw std::invalid_argument("model checking expects PROMPT-LTL formulas");
    for (const auto& a : atoms(*f)) {
      if (a == opt.r || a == opt.r2) throw std::invalid_argument("color '" + a + "' collides with a formula atom");
      if (!prop_index(ts.inputs, a) && !prop_index(ts.outputs, a)) {
        throw std::invalid_argument("formula mentions '" + a + "', which the system neither reads nor writes");
      }
    }
  }
  const Formula f = Formula::conj(Formula::conj(alt_color(opt.r2), negate(rel_color(guarantee, opt.r2))),
                                  colorize(assumption, opt.r));
  const Nba spec = reduce(ltl_to_nba(f));
  const auto sg = build_colored_graph(ts, spec, opt.r, opt.r2);
  McResult out;
  out.spec_states = spec.states();
  out.graph_vertices = sg.graph.vertices();
  const auto lasso = pumpable_nonempty(sg.graph);
  out.holds = !lasso;
  if (!lasso) return out;

  // recover an input letter for every step
  const auto ri = *prop_index(spec.props, opt.r);
  const auto r2i = *prop_index(spec.props, opt.r2);
  const LetterMap in_map(ts.inputs, spec.props);
  const LetterMap out_map(ts.outputs, spec.props);
  LassoWord w;
  w.props = ts.inputs;
  w.props.insert(w.props.end(), ts.outputs.begin(), ts.outputs.end());
  w.props.push_back(opt.r);
  w.props.push_back(opt.r2);
  const auto& p = lasso->path;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const auto& a = sg.origin[p[k]];
    const auto& b = sg.origin[k + 1 < p.size() ? p[k + 1] : p[lasso->loop_start]];
    const Letter colors = ((a.colors & 1U) ? Letter{1} << ri : 0) | ((a.colors & 2U) ? Letter{1} << r2i : 0);
    Letter chosen = 0;
    for (Letter i = 0; i < ts.letters(); ++i) {
      if (ts.next(a.s, i) != b.s) continue;
      const auto qs = spec.successors(a.q, in_map(i) | out_map(ts.label[a.s]) | colors);
      if (std::binary_search(qs.begin(), qs.end(), b.q)) {
        chosen = i;
        break;
      }
    }
    const std::size_t shift = ts.inputs.size();
    const Letter letter = chosen | (ts.label[a.s] << shift) |
                          (Letter{a.colors} << (shift + ts.outputs.size()));
    (k < lasso->loop_start ? w.stem : w.loop).push_back(letter);
  }
  out.witness = w;
  return out;
}

McResult prompt_model_check(const TransitionSystem& ts, const Formula& f, const McOptions& opt) {
  return ag_model_check(ts, Formula::tt(), f, opt);
}

std::string to_string(const Lasso& l) {
  std::ostringstream os;
  for (std::size_t k = 0; k < l.path.size(); ++k) {
    if (k == l.loop_start) os << "( ";
    os << l.path[k] << ' ';
  }
  os << ")^w";
  return os.str();
}

}  // namespace plts
