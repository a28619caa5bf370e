#include <doctest.h>

#include "plts/colored.hpp"
#include "test_support.hpp"

using namespace plts;
using plts::testing::FormulaGen;
using plts::testing::random_colored_graph;
using plts::testing::random_ts;
using plts::testing::Rng;

namespace {

TransitionSystem emitter(bool on) {
  TransitionSystem ts;
  ts.outputs = {"a"};
  ts.label = {on ? Letter{1} : Letter{0}};
  ts.delta = {0};
  return ts;
}

TransitionSystem alternator() {
  TransitionSystem ts;
  ts.outputs = {"a"};
  ts.label = {1, 0};
  ts.delta = {1, 0};
  return ts;
}

// flips c whenever scheduled and keeps still otherwise
TransitionSystem sched_toggler() {
  TransitionSystem ts;
  ts.inputs = {"sched"};
  ts.outputs = {"c"};
  ts.label = {0, 1};
  ts.delta = {0, 1, 1, 0};
  return ts;
}

// Transitive closure oracle: a reachable vertex u on a cycle whose strongly
// connected part meets every set.
bool has_accepting_cycle(const Adjacency& adj, std::size_t init, const std::vector<std::vector<char>>& sets) {
  const std::size_t n = adj.size();
  std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));  // path of length >= 1
  for (std::size_t v = 0; v < n; ++v) {
    for (auto w : adj[v]) reach[v][w] = 1;
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (reach[i][k] && reach[k][j]) reach[i][j] = 1;
      }
    }
  }
  for (std::size_t u = 0; u < n; ++u) {
    if (!(u == init || reach[init][u]) || !reach[u][u]) continue;
    bool all = true;
    for (const auto& set : sets) {
      bool met = false;
      for (std::size_t w = 0; w < n; ++w) {
        if (set[w] && (w == u || (reach[u][w] && reach[w][u]))) met = true;
      }
      all = all && met;
    }
    if (all) return true;
  }
  return false;
}

bool is_lasso_of(const Adjacency& adj, std::size_t init, const Lasso& l, const std::vector<std::vector<char>>& sets) {
  if (l.path.empty() || l.path[0] != init || l.loop_start >= l.path.size()) return false;
  for (std::size_t k = 0; k < l.path.size(); ++k) {
    const auto next = k + 1 < l.path.size() ? l.path[k + 1] : l.path[l.loop_start];
    if (std::find(adj[l.path[k]].begin(), adj[l.path[k]].end(), next) == adj[l.path[k]].end()) return false;
  }
  for (const auto& set : sets) {
    bool met = false;
    for (std::size_t k = l.loop_start; k < l.path.size(); ++k) met = met || set[l.path[k]];
    if (!met) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("build_colored_graph") {
  const auto spec = ltl_to_nba(Formula::tt(), {"a", "_r", "_r2"});
  REQUIRE(spec.states() == 1);
  const auto sg = build_colored_graph(emitter(true), spec, "_r", "_r2");
  CHECK(sg.graph.vertices() <= 4);
  CHECK(sg.origin[sg.graph.init].s == 0);
  CHECK(sg.origin[sg.graph.init].colors == 0);

  Rng rng(31);
  FormulaGen gen;
  gen.atoms = {"i", "o", "_r", "_r2"};
  for (int round = 0; round < 40; ++round) {
    const auto ts = random_ts(rng, {"i"}, {"o"}, 3);
    const auto n = ltl_to_nba(gen(rng, 1 + static_cast<int>(rng() % 4)), {"i", "o", "_r", "_r2"});
    const auto g = build_colored_graph(ts, n, "_r", "_r2");
    CHECK_NOTHROW(g.graph.check());
    CHECK(g.graph.vertices() <= ts.states() * 4 * n.states());
    const auto& init = g.origin[g.graph.init];
    CHECK(init.s == ts.init);
    CHECK(init.colors == 0);
    CHECK(init.q == n.init);
    const auto reach = reachable_from(g.graph.succ, g.graph.init);
    for (std::size_t v = 0; v < g.graph.vertices(); ++v) {
      CHECK(reach[v]);
      CHECK(g.graph.colors[v] == g.origin[v].colors);
      for (auto w : g.graph.succ[v]) {
        const auto s = g.origin[v].s;
        CHECK((ts.next(s, 0) == g.origin[w].s || ts.next(s, 1) == g.origin[w].s));
      }
    }
  }
  CHECK_THROWS_AS(build_colored_graph(emitter(true), ltl_to_nba(parse("b"), {"a", "b", "_r", "_r2"}), "_r", "_r2"),
                  std::invalid_argument);
}

TEST_CASE("buchi_nonempty examples") {
  const Adjacency loop{{0}};
  const auto l = buchi_nonempty(loop, 0, {{1}, {1}});
  REQUIRE(l);
  CHECK(l->path.size() - l->loop_start == 1);

  // two sets never together in one component
  const Adjacency split{{1, 2}, {1}, {2}};
  CHECK_FALSE(buchi_nonempty(split, 0, {{0, 1, 0}, {0, 0, 1}}));
  CHECK(buchi_nonempty(split, 0, {{0, 1, 0}}));
  CHECK(buchi_nonempty(split, 0, {}));
  const Adjacency acyclic{{1}, {}};
  CHECK_FALSE(buchi_nonempty(acyclic, 0, {}));
}

TEST_CASE("buchi_nonempty against transitive closure") {
  Rng rng(32);
  for (int round = 0; round < 300; ++round) {
    const std::size_t n = 1 + rng() % 6;
    Adjacency adj(n);
    for (std::size_t v = 0; v < n; ++v) {
      for (std::size_t w = 0; w < n; ++w) {
        if (rng() % 4 == 0) adj[v].push_back(w);
      }
    }
    std::vector<std::vector<char>> sets(rng() % 3, std::vector<char>(n));
    for (auto& s : sets) {
      for (auto& x : s) x = rng() % 3 == 0;
    }
    const auto l = buchi_nonempty(adj, 0, sets);
    CHECK(l.has_value() == has_accepting_cycle(adj, 0, sets));
    if (l) CHECK(is_lasso_of(adj, 0, *l, sets));
  }
}

TEST_CASE("pumpability examples") {
  // v0 (r, r') <-> v1 ({}) : every r'-block is a single vertex
  ColoredGraph two;
  two.colors = {3, 0};
  two.succ = {{1}, {0}};
  two.acceptance = {{1, 1}};
  CHECK_FALSE(pumpable_nonempty(two));
  CHECK_FALSE(brute_force_pumpable(two, 4, 6));

  // 0 1 0 forms a pumpable r'-block before the r' change into the sink 2
  ColoredGraph three;
  three.colors = {0, 1, 2};
  three.succ = {{1, 2}, {0}, {2}};
  three.acceptance = {{0, 0, 1}};
  const auto w = pumpable_nonempty(three);
  REQUIRE(w);
  CHECK(is_pumpable_accepting(three, *w));
  const auto b = brute_force_pumpable(three, 4, 4);
  REQUIRE(b);
  CHECK(b->path == std::vector<std::size_t>{0, 1, 0, 2});
  CHECK(b->loop_start == 3);
  CHECK(to_string(*b) == "0 1 0 ( 2 )^w");

  // no r flip inside the first block
  auto flat = three;
  flat.colors = {0, 0, 2};
  CHECK_FALSE(pumpable_nonempty(flat));
  CHECK_FALSE(brute_force_pumpable(flat, 4, 4));
}

TEST_CASE("pumpable_nonempty agrees with the brute-force oracle") {
  Rng rng(33);
  for (int round = 0; round < 60; ++round) {
    const auto g = random_colored_graph(rng, 5, 3, round % 2 == 0);
    const auto p = pumpable_nonempty(g);
    const auto b = brute_force_pumpable(g, 4, 8);
    CHECK(p.has_value() == b.has_value());
    if (p) CHECK(is_pumpable_accepting(g, *p));
    if (b) CHECK(is_pumpable_accepting(g, *b, 4));
    CHECK(pump_product_size(g) <= g.vertices() * PumpAutomaton(g.vertices()).states());
    CHECK(pump_product_size(g) <= 11 * g.vertices() * g.vertices());
  }
}

TEST_CASE("model checking examples") {
  CHECK(ag_model_check(emitter(true), Formula::tt(), parse("G a")).holds);
  const auto never = prompt_model_check(emitter(false), parse("Fp a"));
  CHECK_FALSE(never.holds);
  CHECK(never.witness);

  CHECK(prompt_model_check(emitter(true), parse("G Fp a")).holds);
  CHECK_FALSE(prompt_model_check(alternator(), parse("G a")).holds);
  CHECK(prompt_model_check(alternator(), parse("G Fp a")).holds);
  const auto alt_trace = trace(alternator(), LassoWord{{}, {}, {0}});
  CHECK(evaluate(alt_trace, parse("G Fp a"), 1));
  CHECK_FALSE(evaluate(alt_trace, parse("G Fp a"), 0));
  CHECK_FALSE(prompt_model_check(alternator(), parse("F G a")).holds);

  const auto t = sched_toggler();
  CHECK(ag_model_check(t, parse("G Fp sched"), parse("G Fp c")).holds);
  CHECK(ag_model_check(t, parse("G Fp sched"), parse("G (Fp c & Fp !c)")).holds);
  CHECK_FALSE(ag_model_check(t, parse("G F sched"), parse("G Fp c")).holds);
  CHECK_FALSE(prompt_model_check(t, parse("G Fp c")).holds);
  // the bound on c follows the bound on sched
  for (const auto& tr : traces(t, 3, 3)) {
    for (std::size_t k = 1; k <= 4; ++k) {
      if (evaluate(tr, parse("G Fp sched"), k)) CHECK(evaluate(tr, parse("G Fp c"), 2 * k));
    }
  }

  CHECK_THROWS_AS(prompt_model_check(emitter(true), parse("G b")), std::invalid_argument);
  CHECK_THROWS_AS(prompt_model_check(emitter(true), parse("G a"), {"a", "_r2"}), std::invalid_argument);
  CHECK_THROWS_AS(prompt_model_check(emitter(true), parse("G a"), {"x", "x"}), std::invalid_argument);
}

TEST_CASE("failure witnesses are executions of the system") {
  Rng rng(34);
  FormulaGen gen;
  gen.atoms = {"i", "o"};
  gen.prompt = true;
  int failures = 0;
  for (int round = 0; round < 60; ++round) {
    const auto ts = random_ts(rng, {"i"}, {"o"}, 2);
    const auto res = prompt_model_check(ts, gen(rng, 1 + static_cast<int>(rng() % 4)));
    CHECK(res.holds != res.witness.has_value());
    if (!res.witness) continue;
    ++failures;
    const auto& w = *res.witness;
    std::vector<std::string> sys = ts.inputs;
    sys.insert(sys.end(), ts.outputs.begin(), ts.outputs.end());
    CHECK(canonical(project(w, sys)) == trace(ts, project(w, ts.inputs)));
    CHECK(prop_index(w.props, "_r"));
    CHECK(prop_index(w.props, "_r2"));
  }
  CHECK(failures > 0);
}

TEST_CASE("model checking matches bounded trace evaluation") {
  Rng rng(35);
  FormulaGen gen;
  gen.atoms = {"i", "o"};
  gen.prompt = true;
  for (int round = 0; round < 150; ++round) {
    const auto f = gen(rng, 1 + static_cast<int>(rng() % 4));
    const auto ts = random_ts(rng, {"i"}, {"o"}, 2);
    const auto res = prompt_model_check(ts, f);
    const std::size_t k0 = 2 * ts.states() * res.spec_states;
    bool all = true;
    for (const auto& t : traces(ts, 3, 3)) all = all && evaluate(t, f, k0);
    INFO(to_string(f));
    CHECK(res.holds == all);
  }
}
