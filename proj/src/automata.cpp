#include "plts/automata.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

namespace plts {

std::size_t Nba::edge_count() const {
  std::size_t n = 0;
  for (const auto& e : edges) n += e.size();
  return n;
}

std::vector<std::size_t> Nba::successors(std::size_t q, Letter l, std::size_t x) const {
  std::vector<std::size_t> out;
  for (const auto& e : edges[q]) {
    if (e.guard.matches(l) && e.x.matches(x)) out.push_back(e.target);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

// Keeps states that can reach a cycle through an accepting state and renumbers
// them in breadth-first order from the initial state. An empty language leaves
// a single rejecting state without edges.
Nba trim(const Nba& n) {
  Adjacency adj(n.states());
  for (std::size_t q = 0; q < n.states(); ++q) {
    for (const auto& e : n.edges[q]) adj[q].push_back(e.target);
  }
  const auto sccs = tarjan(adj);
  std::vector<char> good_comp(sccs.count, 0);
  for (std::size_t q = 0; q < n.states(); ++q) {
    if (n.accepting[q] && sccs.nontrivial[sccs.comp[q]]) good_comp[sccs.comp[q]] = 1;
  }
  // components are numbered in reverse topological order
  std::vector<std::vector<std::size_t>> members(sccs.count);
  for (std::size_t q = 0; q < n.states(); ++q) members[sccs.comp[q]].push_back(q);
  std::vector<char> live(sccs.count, 0);
  for (std::size_t c = 0; c < sccs.count; ++c) {
    live[c] = good_comp[c];
    for (auto q : members[c]) {
      for (auto t : adj[q]) {
        if (live[sccs.comp[t]]) live[c] = 1;
      }
    }
  }

  Nba out;
  out.props = n.props;
  out.x_count = n.x_count;
  if (!live[sccs.comp[n.init]]) {
    out.edges.resize(1);
    out.accepting.assign(1, 0);
    return out;
  }
  std::vector<std::size_t> id(n.states(), SIZE_MAX);
  std::deque<std::size_t> queue{n.init};
  std::vector<std::size_t> order;
  id[n.init] = 0;
  while (!queue.empty()) {
    auto q = queue.front();
    queue.pop_front();
    order.push_back(q);
    for (const auto& e : n.edges[q]) {
      if (live[sccs.comp[e.target]] && id[e.target] == SIZE_MAX) {
        id[e.target] = order.size() + queue.size();
        queue.push_back(e.target);
      }
    }
  }
  out.edges.resize(order.size());
  out.accepting.resize(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto q = order[i];
    out.accepting[i] = n.accepting[q];
    for (const auto& e : n.edges[q]) {
      if (live[sccs.comp[e.target]]) out.edges[i].push_back({e.guard, e.x, id[e.target]});
    }
    std::sort(out.edges[i].begin(), out.edges[i].end());
    out.edges[i].erase(std::unique(out.edges[i].begin(), out.edges[i].end()), out.edges[i].end());
  }
  return out;
}

struct Term {
  Cube cube;
  std::vector<int> next;        // sorted obligations for the successor
  std::uint64_t postponed = 0;  // untils whose right side was not fulfilled here

  friend bool operator==(const Term&, const Term&) = default;
};

class Tableau {
 public:
  Tableau(const Formula& f, const std::vector<std::string>& props) : props_(props) {
    for (const auto& g : subformulas(f)) {
      const int id = static_cast<int>(nodes_.size());
      index_.emplace(g, id);
      nodes_.push_back(g);
      until_bit_.push_back(-1);
      if (g.op() == Op::Until) {
        if (untils_ == 64) throw std::invalid_argument("formula has too many until operators");
        until_bit_.back() = untils_++;
      }
      atom_bit_.push_back(-1);
      if (g.op() == Op::Atom || g.op() == Op::NegAtom) {
        auto b = prop_index(props_, g.name());
        if (!b) throw std::invalid_argument("atom '" + g.name() + "' is not in the alphabet");
        atom_bit_.back() = static_cast<int>(*b);
      }
    }
    root_ = index_.at(f);
  }

  /// Initial obligations; a constant true obligation is dropped.
  std::vector<int> initial() const {
    if (nodes_[root_].op() == Op::True) return {};
    return {root_};
  }
  int untils() const { return untils_; }

  std::vector<Term> expand(const std::vector<int>& obligations) const {
    std::vector<Term> out;
    Term t;
    std::vector<char> done(nodes_.size(), 0);
    go(std::vector<int>(obligations.rbegin(), obligations.rend()), t, done, out);
    for (auto& term : out) {
      std::erase_if(term.next, [&](int id) { return nodes_[id].op() == Op::True; });
      std::sort(term.next.begin(), term.next.end());
      term.next.erase(std::unique(term.next.begin(), term.next.end()), term.next.end());
    }
    // drop duplicates and terms subsumed by a weaker one
    std::vector<Term> kept;
    for (std::size_t i = 0; i < out.size(); ++i) {
      bool redundant = false;
      for (std::size_t j = 0; j < out.size() && !redundant; ++j) {
        if (i == j) continue;
        if (subsumes(out[j], out[i]) && (!subsumes(out[i], out[j]) || j < i)) redundant = true;
      }
      if (!redundant) kept.push_back(out[i]);
    }
    return kept;
  }

 private:
  static bool subsumes(const Term& a, const Term& b) {
    return (a.cube.pos & ~b.cube.pos) == 0 && (a.cube.neg & ~b.cube.neg) == 0 &&
           (a.postponed & ~b.postponed) == 0 && std::includes(b.next.begin(), b.next.end(), a.next.begin(), a.next.end());
  }

  void go(std::vector<int> todo, Term t, std::vector<char> done, std::vector<Term>& out) const {
    while (!todo.empty()) {
      const int id = todo.back();
      todo.pop_back();
      if (done[id]) continue;
      done[id] = 1;
      const Formula& g = nodes_[id];
      switch (g.op()) {
        case Op::True:
          break;
        case Op::False:
          return;
        case Op::Atom:
          t.cube.pos |= Letter{1} << atom_bit_[id];
          if (!t.cube.consistent()) return;
          break;
        case Op::NegAtom:
          t.cube.neg |= Letter{1} << atom_bit_[id];
          if (!t.cube.consistent()) return;
          break;
        case Op::And:
          todo.push_back(index_.at(g.right()));
          todo.push_back(index_.at(g.left()));
          break;
        case Op::Or: {
          auto todo2 = todo;
          todo2.push_back(index_.at(g.right()));
          go(std::move(todo2), t, done, out);
          todo.push_back(index_.at(g.left()));
          break;
        }
        case Op::Next:
          t.next.push_back(index_.at(g.left()));
          break;
        case Op::Until: {
          // fulfil now, or hold the left side and postpone
          auto todo2 = todo;
          todo2.push_back(index_.at(g.left()));
          Term t2 = t;
          t2.next.push_back(id);
          t2.postponed |= std::uint64_t{1} << until_bit_[id];
          go(std::move(todo2), std::move(t2), done, out);
          todo.push_back(index_.at(g.right()));
          break;
        }
        case Op::Release: {
          auto todo2 = todo;
          todo2.push_back(index_.at(g.right()));
          Term t2 = t;
          t2.next.push_back(id);
          go(std::move(todo2), std::move(t2), done, out);
          todo.push_back(index_.at(g.right()));
          todo.push_back(index_.at(g.left()));
          break;
        }
        default:
          throw std::invalid_argument("parameterized operator in LTL translation");
      }
    }
    out.push_back(std::move(t));
  }

  std::vector<std::string> props_;
  std::vector<Formula> nodes_;
  std::unordered_map<Formula, int, FormulaHash> index_;
  std::vector<int> until_bit_;
  std::vector<int> atom_bit_;
  int untils_ = 0;
  int root_ = 0;
};

}  // namespace

Nba ltl_to_nba(const Formula& f, std::vector<std::string> props) {
  if (!is_ltl(f)) throw std::invalid_argument("ltl_to_nba expects a formula without parameterized operators");
  if (props.empty()) {
    auto a = atoms(f);
    props.assign(a.begin(), a.end());
  }
  if (props.size() > max_props) throw std::invalid_argument("too many propositions");
  const Tableau tab(f, props);
  const int m = tab.untils();

  // generalized automaton over obligation sets
  std::map<std::vector<int>, std::size_t> ids;
  std::vector<std::vector<int>> sets;
  std::vector<std::vector<Term>> terms;
  ids.emplace(tab.initial(), 0);
  sets.push_back(tab.initial());
  for (std::size_t i = 0; i < sets.size(); ++i) {
    terms.push_back(tab.expand(sets[i]));
    for (const auto& t : terms[i]) {
      if (ids.emplace(t.next, sets.size()).second) sets.push_back(t.next);
    }
  }

  // degeneralize per component: only untils postponed on some edge inside a
  // component matter for cycles there. Level j means the first j of them have
  // been served since the last accepting visit; entering a component resets.
  Adjacency adj(sets.size());
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (const auto& t : terms[i]) adj[i].push_back(ids.at(t.next));
  }
  const auto sccs = tarjan(adj);
  std::vector<std::vector<int>> relevant(sccs.count);
  {
    std::vector<std::uint64_t> mask(sccs.count, 0);
    for (std::size_t i = 0; i < sets.size(); ++i) {
      for (const auto& t : terms[i]) {
        if (sccs.comp[ids.at(t.next)] == sccs.comp[i]) mask[sccs.comp[i]] |= t.postponed;
      }
    }
    for (std::size_t c = 0; c < sccs.count; ++c) {
      for (int b = 0; b < m; ++b) {
        if ((mask[c] >> b) & 1U) relevant[c].push_back(b);
      }
    }
  }

  Nba raw;
  raw.props = props;
  std::map<std::pair<std::size_t, int>, std::size_t> deg;
  std::vector<std::pair<std::size_t, int>> todo;
  auto state = [&](std::size_t s, int level) {
    auto [it, fresh] = deg.emplace(std::make_pair(s, level), todo.size());
    if (fresh) todo.emplace_back(s, level);
    return it->second;
  };
  state(0, 0);
  for (std::size_t i = 0; i < todo.size(); ++i) {
    const auto [s, level] = todo[i];
    const auto& rel = relevant[sccs.comp[s]];
    const int top = static_cast<int>(rel.size());
    raw.edges.emplace_back();
    raw.accepting.push_back(level == top);
    for (const auto& t : terms[s]) {
      const std::size_t next = ids.at(t.next);
      int j = 0;
      if (sccs.comp[next] == sccs.comp[s]) {
        j = level == top ? 0 : level;
        while (j < top && !((t.postponed >> rel[j]) & 1U)) ++j;
      }
      const std::size_t target = state(next, j);
      raw.edges[i].push_back({t.cube, {}, target});
    }
  }
  return trim(raw);
}

namespace {

// Minimal-ish cube cover of a letter set: prime implicants by iterated
// merging, then a greedy cover.
std::vector<Cube> cover(const std::vector<char>& in, std::size_t bits) {
  const Letter full = bits == 0 ? 0 : (Letter{1} << bits) - 1;
  struct Imp {
    Letter value;
    Letter care;
  };
  std::vector<Imp> level;
  for (Letter l = 0; l < in.size(); ++l) {
    if (in[l]) level.push_back({l, full});
  }
  std::vector<Imp> primes;
  while (!level.empty()) {
    std::vector<char> merged(level.size(), 0);
    std::vector<Imp> next;
    for (std::size_t a = 0; a < level.size(); ++a) {
      for (std::size_t b = a + 1; b < level.size(); ++b) {
        if (level[a].care != level[b].care) continue;
        const Letter diff = level[a].value ^ level[b].value;
        if (diff == 0 || (diff & (diff - 1)) != 0) continue;
        merged[a] = merged[b] = 1;
        next.push_back({level[a].value & ~diff, level[a].care & ~diff});
      }
    }
    for (std::size_t a = 0; a < level.size(); ++a) {
      if (!merged[a]) primes.push_back(level[a]);
    }
    std::sort(next.begin(), next.end(), [](const Imp& x, const Imp& y) {
      return std::tie(x.care, x.value) < std::tie(y.care, y.value);
    });
    next.erase(std::unique(next.begin(), next.end(),
                           [](const Imp& x, const Imp& y) { return x.care == y.care && x.value == y.value; }),
               next.end());
    level = std::move(next);
  }
  std::vector<char> left = in;
  std::vector<Cube> out;
  while (true) {
    std::size_t best = primes.size(), best_count = 0;
    for (std::size_t k = 0; k < primes.size(); ++k) {
      std::size_t count = 0;
      for (Letter l = 0; l < left.size(); ++l) {
        if (left[l] && (l & primes[k].care) == primes[k].value) ++count;
      }
      if (count > best_count) {
        best = k;
        best_count = count;
      }
    }
    if (best == primes.size()) break;
    const auto& p = primes[best];
    for (Letter l = 0; l < left.size(); ++l) {
      if ((l & p.care) == p.value) left[l] = 0;
    }
    out.push_back({p.value, p.care & ~p.value});
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

Nba reduce(const Nba& n) {
  if (n.x_count != 1 || n.props.size() > 10) return n;
  const std::size_t q_count = n.states();
  const Letter letters = Letter{1} << n.props.size();
  // succ[q][l]: sorted targets
  std::vector<std::vector<std::vector<std::size_t>>> succ(q_count, std::vector<std::vector<std::size_t>>(letters));
  for (std::size_t q = 0; q < q_count; ++q) {
    for (Letter l = 0; l < letters; ++l) succ[q][l] = n.successors(q, l);
  }

  // greatest direct simulation: sim[p][q] means q simulates p
  std::vector<std::vector<char>> sim(q_count, std::vector<char>(q_count, 0));
  for (std::size_t p = 0; p < q_count; ++p) {
    for (std::size_t q = 0; q < q_count; ++q) sim[p][q] = !n.accepting[p] || n.accepting[q];
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t p = 0; p < q_count; ++p) {
      for (std::size_t q = 0; q < q_count; ++q) {
        if (!sim[p][q] || p == q) continue;
        bool ok = true;
        for (Letter l = 0; l < letters && ok; ++l) {
          for (auto t : succ[p][l]) {
            if (std::none_of(succ[q][l].begin(), succ[q][l].end(), [&](std::size_t u) { return sim[t][u] != 0; })) {
              ok = false;
              break;
            }
          }
        }
        if (!ok) {
          sim[p][q] = 0;
          changed = true;
        }
      }
    }
  }

  // quotient by mutual simulation, then drop edges to strictly simulated
  // siblings
  std::vector<std::size_t> cls(q_count);
  std::vector<std::size_t> rep;
  for (std::size_t q = 0; q < q_count; ++q) {
    cls[q] = rep.size();
    for (std::size_t c = 0; c < rep.size(); ++c) {
      if (sim[q][rep[c]] && sim[rep[c]][q]) {
        cls[q] = c;
        break;
      }
    }
    if (cls[q] == rep.size()) rep.push_back(q);
  }
  Nba out;
  out.props = n.props;
  out.init = cls[n.init];
  out.edges.resize(rep.size());
  out.accepting.resize(rep.size());
  for (std::size_t c = 0; c < rep.size(); ++c) {
    const auto q = rep[c];
    out.accepting[c] = n.accepting[q];
    std::map<std::size_t, std::vector<char>> by_target;
    for (Letter l = 0; l < letters; ++l) {
      std::vector<std::size_t> ts;
      for (auto t : succ[q][l]) ts.push_back(rep[cls[t]]);
      std::sort(ts.begin(), ts.end());
      ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
      for (auto t : ts) {
        const bool dominated = std::any_of(ts.begin(), ts.end(), [&](std::size_t u) { return u != t && sim[t][u] && !sim[u][t]; });
        if (dominated) continue;
        auto& set = by_target[cls[t]];
        set.resize(letters, 0);
        set[l] = 1;
      }
    }
    for (const auto& [t, set] : by_target) {
      for (const auto& cube : cover(set, n.props.size())) out.edges[c].push_back({cube, {}, t});
    }
  }
  return trim(out);
}

namespace {

bool accepts_product(const Nba& n, const LassoWord& w, const std::function<std::size_t(std::size_t)>& x_at) {
  const LetterMap map(w.props, n.props);
  for (const auto& p : n.props) {
    if (!prop_index(w.props, p)) throw std::invalid_argument("word does not declare '" + p + "'");
  }
  const std::size_t len = w.positions();
  const std::size_t q_count = n.states();
  Adjacency adj(len * q_count);
  std::vector<char> acc(len * q_count, 0);
  for (std::size_t pos = 0; pos < len; ++pos) {
    const Letter l = map(w.at(pos));
    const std::size_t x = x_at(pos);
    for (std::size_t q = 0; q < q_count; ++q) {
      const std::size_t v = pos * q_count + q;
      acc[v] = n.accepting[q];
      for (auto t : n.successors(q, l, x)) adj[v].push_back(w.succ(pos) * q_count + t);
    }
  }
  return buchi_nonempty(adj, n.init, {acc}).has_value();
}

}  // namespace

bool nba_accepts(const Nba& n, const LassoWord& w) {
  return accepts_product(n, w, [](std::size_t) { return std::size_t{0}; });
}

bool nba_accepts(const Nba& n, const LassoWord& w, const std::vector<std::size_t>& x_stem,
                 const std::vector<std::size_t>& x_loop) {
  if (x_stem.size() != w.stem.size() || x_loop.size() != w.loop.size()) {
    throw std::invalid_argument("vertex sequence does not match the word");
  }
  return accepts_product(n, w, [&](std::size_t pos) {
    return pos < x_stem.size() ? x_stem[pos] : x_loop[pos - x_stem.size()];
  });
}

// ---------------------------------------------------------------------------
// Pumpability

PumpAutomaton::PumpAutomaton(std::size_t vertices) : v_(vertices) {
  if (vertices == 0) throw std::invalid_argument("pump automaton needs at least one vertex");
}

std::vector<std::size_t> PumpAutomaton::successors(std::size_t state, std::size_t v2, unsigned c2) const {
  std::vector<std::size_t> out;
  auto same_r2 = [](unsigned a, unsigned b) { return ((a ^ b) & 2U) == 0; };
  if (state == initial) {
    out.push_back(s(v2, c2));
  } else if (state < 1 + 4 * v_) {
    const std::size_t v = (state - 1) / 4;
    const unsigned c = (state - 1) % 4;
    if (same_r2(c, c2)) {
      out.push_back(s(v, c));
      out.push_back(s(v2, c2));
      if ((c ^ c2) & 1U) out.push_back(s1(v, c2));
    }
  } else if (state < 1 + 8 * v_) {
    const std::size_t v = (state - 1 - 4 * v_) / 4;
    const unsigned y = (state - 1 - 4 * v_) % 4;
    if (same_r2(y, c2)) out.push_back(v2 != v ? s1(v, y) : s2((y & 2U) != 0));
  } else {
    const unsigned z = (state == s2(true)) ? 2U : 0U;
    out.push_back(same_r2(z, c2) ? state : s(v2, c2));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string PumpAutomaton::state_name(std::size_t state) const {
  auto colors = [](unsigned c) {
    std::string out = "{";
    if (c & 1U) out += "r";
    if (c & 2U) out += (c & 1U) ? ",r'" : "r'";
    return out + "}";
  };
  if (state == initial) return "s0";
  if (state < 1 + 4 * v_) return "s[" + std::to_string((state - 1) / 4) + "," + colors((state - 1) % 4) + "]";
  if (state < 1 + 8 * v_) {
    return "s'[" + std::to_string((state - 1 - 4 * v_) / 4) + "," + colors((state - 1 - 4 * v_) % 4) + "]";
  }
  return state == s2(true) ? "s''[{r'}]" : "s''[{}]";
}

Nba build_pump(std::size_t vertices, const std::string& r, const std::string& r2) {
  if (r == r2) throw std::invalid_argument("the two colors must differ");
  const PumpAutomaton pump(vertices);
  Nba out;
  out.props = {r, r2};
  out.x_count = vertices;
  out.edges.resize(pump.states());
  out.accepting.assign(pump.states(), 1);
  for (std::size_t q = 0; q < pump.states(); ++q) {
    for (std::size_t v = 0; v < vertices; ++v) {
      for (unsigned c = 0; c < 4; ++c) {
        const Cube guard{c, 3U & ~c};
        for (auto t : pump.successors(q, v, c)) out.edges[q].push_back({guard, {XCond::Eq, v}, t});
      }
    }
  }
  return out;
}

Nba compose_spec_pump(const Nba& spec, std::size_t x_count, const std::string& r, const std::string& r2) {
  if (spec.x_count != 1) throw std::invalid_argument("specification automaton must not read states");
  if (x_count == 0) throw std::invalid_argument("empty implementation state space");
  const auto ri = prop_index(spec.props, r);
  const auto r2i = prop_index(spec.props, r2);
  if (!ri || !r2i) throw std::invalid_argument("specification alphabet lacks the colors");
  const Letter rbit = Letter{1} << *ri;
  const Letter r2bit = Letter{1} << *r2i;
  const PumpAutomaton pump(x_count * spec.states());
  const std::size_t p_count = pump.states();

  Nba out;
  out.props = spec.props;
  out.x_count = x_count;
  std::unordered_map<std::size_t, std::size_t> ids;
  std::vector<std::size_t> pairs;
  auto state = [&](std::size_t q, std::size_t p) {
    const std::size_t key = q * p_count + p;
    auto [it, fresh] = ids.emplace(key, pairs.size());
    if (fresh) pairs.push_back(key);
    return it->second;
  };
  state(spec.init, PumpAutomaton::initial);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const std::size_t q = pairs[i] / p_count;
    const std::size_t p = pairs[i] % p_count;
    // (guard, target) -> implementation states allowing the move
    std::map<std::pair<Cube, std::size_t>, std::vector<std::size_t>> moves;
    for (const auto& e : spec.edges[q]) {
      for (unsigned c = 0; c < 4; ++c) {
        Cube g = e.guard;
        g.pos |= ((c & 1U) ? rbit : 0) | ((c & 2U) ? r2bit : 0);
        g.neg |= ((c & 1U) ? 0 : rbit) | ((c & 2U) ? 0 : r2bit);
        if (!g.consistent()) continue;
        for (std::size_t x = 0; x < x_count; ++x) {
          for (auto p2 : pump.successors(p, q * x_count + x, c)) {
            moves[{g, state(e.target, p2)}].push_back(x);
          }
        }
      }
    }
    out.edges.emplace_back();
    out.accepting.push_back(spec.accepting[q]);
    for (auto& [key, xs] : moves) {
      std::sort(xs.begin(), xs.end());
      xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
      const auto& [g, t] = key;
      if (xs.size() == x_count) {
        out.edges[i].push_back({g, {}, t});
      } else if (xs.size() + 1 == x_count && x_count > 2) {
        std::size_t missing = 0;
        while (missing < xs.size() && xs[missing] == missing) ++missing;
        out.edges[i].push_back({g, {XCond::Neq, missing}, t});
      } else {
        for (auto x : xs) out.edges[i].push_back({g, {XCond::Eq, x}, t});
      }
    }
  }
  return trim(out);
}

// ---------------------------------------------------------------------------
// Universal co-Buchi tree automata

std::size_t StateAwareUct::rejecting_count() const {
  return static_cast<std::size_t>(std::count(rejecting.begin(), rejecting.end(), 1));
}

StateAwareUct dualize(const Nba& n, const std::vector<std::string>& dir_props,
                      const std::vector<std::string>& out_props) {
  std::vector<int> out_bit(n.props.size(), -1), dir_bit(n.props.size(), -1);
  for (std::size_t i = 0; i < n.props.size(); ++i) {
    if (auto b = prop_index(out_props, n.props[i])) out_bit[i] = static_cast<int>(*b);
    if (auto b = prop_index(dir_props, n.props[i])) dir_bit[i] = static_cast<int>(*b);
    if ((out_bit[i] < 0) == (dir_bit[i] < 0)) {
      throw std::invalid_argument("proposition '" + n.props[i] + "' must be exactly one of output or direction");
    }
  }
  StateAwareUct u;
  u.out_props = out_props;
  u.dir_props = dir_props;
  u.x_count = n.x_count;
  u.init = n.init;
  u.rejecting = n.accepting;
  u.edges.resize(n.states());
  for (std::size_t q = 0; q < n.states(); ++q) {
    for (const auto& e : n.edges[q]) {
      UctEdge ue;
      ue.x = e.x;
      ue.target = e.target;
      for (std::size_t i = 0; i < n.props.size(); ++i) {
        const bool pos = (e.guard.pos >> i) & 1U;
        const bool neg = (e.guard.neg >> i) & 1U;
        if (!pos && !neg) continue;
        Cube& c = out_bit[i] >= 0 ? ue.out : ue.dir;
        const int b = out_bit[i] >= 0 ? out_bit[i] : dir_bit[i];
        (pos ? c.pos : c.neg) |= Letter{1} << b;
      }
      u.edges[q].push_back(ue);
    }
  }
  return u;
}

namespace {

struct SystemView {
  LetterMap label_to_out;    // system outputs -> u.out_props
  std::vector<Letter> dirs;  // per system input letter, its bits in dir_props
  Letter dir_mask_inputs;    // dir bits that are system inputs
};

SystemView view(const StateAwareUct& u, const TransitionSystem& ts) {
  if (u.x_count != 1 && u.x_count != ts.states()) {
    throw std::invalid_argument("automaton state space does not match the system");
  }
  for (const auto& o : u.out_props) {
    if (!prop_index(ts.outputs, o)) throw std::invalid_argument("system lacks output '" + o + "'");
  }
  SystemView v{LetterMap(ts.outputs, u.out_props), {}, 0};
  const LetterMap in(ts.inputs, u.dir_props);
  for (const auto& i : ts.inputs) {
    auto b = prop_index(u.dir_props, i);
    if (!b) throw std::invalid_argument("system input '" + i + "' is not a direction");
    v.dir_mask_inputs |= Letter{1} << *b;
  }
  for (Letter i = 0; i < ts.letters(); ++i) v.dirs.push_back(in(i));
  return v;
}

// Successor vertices (q', s') of (q, s); directions outside the system's
// inputs are unconstrained.
template <class Fn>
void for_each_successor(const StateAwareUct& u, const TransitionSystem& ts, const SystemView& v, std::size_t q,
                        std::size_t s, Fn fn) {
  const Letter out = v.label_to_out(ts.label[s]);
  for (const auto& e : u.edges[q]) {
    if (!e.out.matches(out) || !e.x.matches(u.x_count == 1 ? 0 : s)) continue;
    const Cube restricted{e.dir.pos & v.dir_mask_inputs, e.dir.neg & v.dir_mask_inputs};
    for (Letter i = 0; i < ts.letters(); ++i) {
      if (restricted.matches(v.dirs[i])) fn(e.target, ts.next(s, i));
    }
  }
}

}  // namespace

RunGraph run_graph(const StateAwareUct& u, const TransitionSystem& ts) {
  const auto v = view(u, ts);
  RunGraph g;
  std::vector<std::size_t> id(u.states() * ts.states(), SIZE_MAX);
  auto vertex = [&](std::size_t q, std::size_t s) {
    auto& slot = id[q * ts.states() + s];
    if (slot == SIZE_MAX) {
      slot = g.vertices.size();
      g.vertices.push_back({q, s});
      g.succ.emplace_back();
    }
    return slot;
  };
  vertex(u.init, ts.init);
  for (std::size_t i = 0; i < g.vertices.size(); ++i) {
    const auto [q, s] = g.vertices[i];
    for_each_successor(u, ts, v, q, s, [&](std::size_t q2, std::size_t s2) {
      const auto w = vertex(q2, s2);
      g.succ[i].push_back(w);
    });
    std::sort(g.succ[i].begin(), g.succ[i].end());
    g.succ[i].erase(std::unique(g.succ[i].begin(), g.succ[i].end()), g.succ[i].end());
  }
  return g;
}

long Annotation::max() const {
  long m = -1;
  for (auto x : value) m = std::max(m, x);
  return m;
}

std::optional<Annotation> check_acceptance(const StateAwareUct& u, const TransitionSystem& ts) {
  const auto g = run_graph(u, ts);
  const auto sccs = tarjan(g.succ);
  for (std::size_t i = 0; i < g.vertices.size(); ++i) {
    if (u.rejecting[g.vertices[i].q] && sccs.nontrivial[sccs.comp[i]]) return std::nullopt;
  }
  // longest rejecting count; components in topological order are numbered
  // from high to low
  std::vector<std::vector<std::size_t>> members(sccs.count);
  for (std::size_t i = 0; i < g.vertices.size(); ++i) members[sccs.comp[i]].push_back(i);
  std::vector<long> best(sccs.count, -1);
  best[sccs.comp[0]] = 0;
  Annotation a{u.states(), ts.states(), std::vector<long>(u.states() * ts.states(), -1)};
  for (std::size_t c = sccs.count; c-- > 0;) {
    if (best[c] < 0) continue;
    // a rejecting vertex is always alone in its component here
    long val = best[c];
    if (members[c].size() == 1 && u.rejecting[g.vertices[members[c][0]].q]) ++val;
    for (auto i : members[c]) {
      a.at(g.vertices[i].q, g.vertices[i].s) = val;
      for (auto j : g.succ[i]) {
        if (sccs.comp[j] != c) best[sccs.comp[j]] = std::max(best[sccs.comp[j]], val);
      }
    }
  }
  return a;
}

bool valid_annotation(const StateAwareUct& u, const TransitionSystem& ts, const Annotation& a) {
  if (a.q_count != u.states() || a.s_count != ts.states() || a.value.size() != a.q_count * a.s_count) return false;
  if (a.at(u.init, ts.init) < 0) return false;
  const auto v = view(u, ts);
  for (std::size_t q = 0; q < u.states(); ++q) {
    for (std::size_t s = 0; s < ts.states(); ++s) {
      const long here = a.at(q, s);
      if (here < 0) continue;
      bool ok = true;
      for_each_successor(u, ts, v, q, s, [&](std::size_t q2, std::size_t s2) {
        const long there = a.at(q2, s2);
        if (there < 0 || there < here || (u.rejecting[q2] && there == here)) ok = false;
      });
      if (!ok) return false;
    }
  }
  return true;
}

std::string to_dot(const Nba& n) {
  std::ostringstream os;
  os << "digraph nba {\n  init [shape=point];\n  init -> q" << n.init << ";\n";
  for (std::size_t q = 0; q < n.states(); ++q) {
    os << "  q" << q << " [shape=" << (n.accepting[q] ? "doublecircle" : "circle") << "];\n";
    for (const auto& e : n.edges[q]) {
      std::string label;
      for (std::size_t i = 0; i < n.props.size(); ++i) {
        if ((e.guard.pos >> i) & 1U) label += (label.empty() ? "" : "&") + n.props[i];
        if ((e.guard.neg >> i) & 1U) label += (label.empty() ? "!" : "&!") + n.props[i];
      }
      if (label.empty()) label = "true";
      if (e.x.kind == XCond::Eq) label += " x=" + std::to_string(e.x.value);
      if (e.x.kind == XCond::Neq) label += " x!=" + std::to_string(e.x.value);
      os << "  q" << q << " -> q" << e.target << " [label=\"" << label << "\"];\n";
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace plts
