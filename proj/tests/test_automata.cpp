#include <doctest.h>

#include <deque>
#include <map>

#include "plts/automata.hpp"
#include "plts/colored.hpp"
#include "test_support.hpp"

using namespace plts;
using plts::testing::for_each_lasso;
using plts::testing::FormulaGen;
using plts::testing::random_lasso;
using plts::testing::random_ts;
using plts::testing::rejecting_cycle;
using plts::testing::Rng;
using plts::testing::run_graph_closure;

namespace {

LassoWord word(std::vector<std::string> props, std::vector<std::set<std::string>> stem,
               std::vector<std::set<std::string>> loop) {
  return LassoWord::from_sets(std::move(props), stem, loop);
}

// Input-free machine producing exactly w.
TransitionSystem path_system(const LassoWord& w) {
  TransitionSystem ts;
  ts.outputs = w.props;
  for (std::size_t p = 0; p < w.positions(); ++p) {
    ts.label.push_back(w.at(p));
    ts.delta.push_back(w.succ(p));
  }
  return ts;
}

// Complete colored graph whose vertex colors are given.
ColoredGraph complete_graph(const std::vector<unsigned>& colors, std::size_t init) {
  ColoredGraph g;
  g.colors = colors;
  g.init = init;
  g.succ.assign(colors.size(), {});
  for (std::size_t v = 0; v < colors.size(); ++v) {
    for (std::size_t w = 0; w < colors.size(); ++w) g.succ[v].push_back(w);
  }
  g.acceptance = {std::vector<char>(colors.size(), 1)};
  return g;
}

// Vertex sequence read as a pump word over {r, r'}.
bool pump_accepts(const Nba& pump, const std::vector<unsigned>& colors, const Lasso& l) {
  LassoWord w;
  w.props = pump.props;
  std::vector<std::size_t> xs, xl;
  for (std::size_t k = 0; k < l.path.size(); ++k) {
    auto& letters = k < l.loop_start ? w.stem : w.loop;
    auto& ids = k < l.loop_start ? xs : xl;
    letters.push_back(colors[l.path[k]]);
    ids.push_back(l.path[k]);
  }
  return nba_accepts(pump, w, xs, xl);
}

StateAwareUct chain_uct(std::size_t length, const std::vector<std::size_t>& rejecting) {
  StateAwareUct u;
  u.edges.resize(length);
  u.rejecting.assign(length, 0);
  for (std::size_t q = 0; q + 1 < length; ++q) u.edges[q].push_back({{}, {}, {}, q + 1});
  u.edges[length - 1].push_back({{}, {}, {}, length - 1});
  for (auto q : rejecting) u.rejecting[q] = 1;
  return u;
}

}  // namespace

TEST_CASE("ltl_to_nba examples") {
  const auto fa = ltl_to_nba(parse("F a"));
  CHECK(fa.states() == 2);
  CHECK(nba_accepts(fa, word({"a"}, {}, {{"a"}})));
  CHECK_FALSE(nba_accepts(fa, word({"a"}, {}, {{}})));
  CHECK(nba_accepts(fa, word({"a"}, {{}, {}, {"a"}}, {{}})));

  const auto t = ltl_to_nba(Formula::tt());
  CHECK(t.states() == 1);
  CHECK(t.accepting[t.init]);

  const auto gf = ltl_to_nba(parse("G false"));
  CHECK(std::none_of(gf.accepting.begin(), gf.accepting.end(), [](char c) { return c != 0; }));
  for_each_lasso({"a"}, 1, 2, [&](const LassoWord& w) { CHECK_FALSE(nba_accepts(gf, w)); });

  CHECK_THROWS_AS(ltl_to_nba(parse("Fp a")), std::invalid_argument);
  CHECK_THROWS_AS(ltl_to_nba(parse("a"), {"b"}), std::invalid_argument);

  const auto wide = ltl_to_nba(parse("F a"), {"a", "z"});
  CHECK(wide.props == std::vector<std::string>{"a", "z"});
}

TEST_CASE("ltl_to_nba agrees with evaluate") {
  Rng rng(21);
  FormulaGen gen;
  for (int round = 0; round < 80; ++round) {
    const auto f = gen(rng, 1 + static_cast<int>(rng() % 5));
    const auto n = ltl_to_nba(f, {"a", "b"});
    const Evaluator eval(f);
    for_each_lasso({"a", "b"}, 2, 2, [&](const LassoWord& w) {
      INFO(to_string(f), " on ", to_string(w));
      CHECK(nba_accepts(n, w) == eval(w, {}));
    });
  }
}

TEST_CASE("reduce keeps the language") {
  Rng rng(22);
  FormulaGen gen;
  for (int round = 0; round < 80; ++round) {
    const auto f = gen(rng, 2 + static_cast<int>(rng() % 5));
    const auto n = ltl_to_nba(f, {"a", "b"});
    const auto m = reduce(n);
    CHECK(m.states() <= n.states());
    for_each_lasso({"a", "b"}, 2, 2, [&](const LassoWord& w) {
      INFO(to_string(f), " on ", to_string(w));
      CHECK(nba_accepts(m, w) == nba_accepts(n, w));
    });
  }
  const auto pump = build_pump(2, "r", "r2");
  CHECK(reduce(pump).states() == pump.states());
}

TEST_CASE("pump automaton shape") {
  const PumpAutomaton p(2);
  CHECK(p.states() == 19);
  CHECK(build_pump(2, "r", "r2").states() == 19);
  CHECK(p.s(0, 0) == 1);
  CHECK(p.s1(0, 0) == 9);
  CHECK(p.s2(false) == 17);
  CHECK(p.state_name(0) == "s0");
  CHECK_THROWS_AS(PumpAutomaton(0), std::invalid_argument);
  CHECK_THROWS_AS(build_pump(1, "r", "r"), std::invalid_argument);
}

TEST_CASE("pump automaton on hand examples") {
  const auto pump = build_pump(2, "r", "r2");
  const auto at = [](std::vector<std::size_t> xs) { return xs; };
  // one r'-block forever; vertex 0 repeats around an r flip
  LassoWord w{{"r", "r2"}, {}, {0, 1}};
  CHECK(nba_accepts(pump, w, {}, at({0, 0})));
  // r' blocks of length two visiting distinct vertices: no repetition inside a block
  LassoWord blocks{{"r", "r2"}, {}, {0, 1, 2, 3}};
  CHECK_FALSE(nba_accepts(pump, blocks, {}, at({0, 1, 0, 1})));
  // r' blocks of length three with the pattern v, flip, v
  LassoWord pattern{{"r", "r2"}, {}, {0, 1, 0, 2, 3, 2}};
  CHECK(nba_accepts(pump, pattern, {}, at({0, 1, 0, 0, 1, 0})));
  // same shape without the r flip
  LassoWord flat{{"r", "r2"}, {}, {0, 0, 0, 2, 2, 2}};
  CHECK_FALSE(nba_accepts(pump, flat, {}, at({0, 1, 0, 0, 1, 0})));
}

TEST_CASE("pump automaton matches the pumpability predicate") {
  // all vertex lassos over three vertices with stem + loop <= 6, for every coloring
  for (unsigned coloring = 0; coloring < 64; ++coloring) {
    const std::vector<unsigned> colors{coloring & 3U, (coloring >> 2) & 3U, (coloring >> 4) & 3U};
    const auto pump = build_pump(3, "r", "r2");
    std::vector<std::size_t> path;
    std::function<void()> rec = [&] {
      for (std::size_t s = 0; s < path.size(); ++s) {
        const Lasso l{path, s};
        const auto g = complete_graph(colors, path[0]);
        INFO("coloring ", coloring, " lasso ", to_string(l));
        CHECK(pump_accepts(pump, colors, l) == is_pumpable_accepting(g, l));
      }
      if (path.size() == 6) return;
      for (std::size_t v = 0; v < 3; ++v) {
        path.push_back(v);
        rec();
        path.pop_back();
      }
    };
    rec();
  }
}

TEST_CASE("compose_spec_pump") {
  const auto spec = ltl_to_nba(parse("G (a | !a)"), {"a", "_r", "_r2"});
  const auto pump_only = compose_spec_pump(ltl_to_nba(Formula::tt(), {"_r", "_r2"}), 2, "_r", "_r2");
  const auto pump = build_pump(2, "_r", "_r2");
  Rng rng(23);
  for (int round = 0; round < 300; ++round) {
    const auto w = random_lasso(rng, {"_r", "_r2"}, 3, 4);
    std::vector<std::size_t> xs, xl;
    for (std::size_t k = 0; k < w.stem.size(); ++k) xs.push_back(rng() % 2);
    for (std::size_t k = 0; k < w.loop.size(); ++k) xl.push_back(rng() % 2);
    // a one-state spec makes the product vertex the implementation state
    CHECK(nba_accepts(pump_only, w, xs, xl) == nba_accepts(pump, w, xs, xl));
  }

  const auto two = ltl_to_nba(parse("a U _r"), {"a", "_r", "_r2"});
  REQUIRE(two.states() == 2);
  const auto n = compose_spec_pump(two, 1, "_r", "_r2");
  CHECK(n.states() <= two.states() * PumpAutomaton(2).states());
  CHECK(n.props == two.props);
  CHECK(n.x_count == 1);

  FormulaGen gen;
  gen.atoms = {"a", "_r", "_r2"};
  for (int round = 0; round < 40; ++round) {
    const auto f = gen(rng, 1 + static_cast<int>(rng() % 4));
    const auto s = ltl_to_nba(f, {"a", "_r", "_r2"});
    const auto m = compose_spec_pump(s, 1, "_r", "_r2");
    for (int k = 0; k < 20; ++k) {
      const auto w = random_lasso(rng, s.props, 3, 3);
      if (nba_accepts(m, w)) CHECK(nba_accepts(s, w));
    }
  }
  CHECK_THROWS_AS(compose_spec_pump(ltl_to_nba(parse("a")), 1, "_r", "_r2"), std::invalid_argument);
  CHECK_THROWS_AS(compose_spec_pump(spec, 0, "_r", "_r2"), std::invalid_argument);
}

TEST_CASE("dualize examples") {
  TransitionSystem ts;
  ts.inputs = {"i"};
  ts.outputs = {"o"};
  ts.label = {0, 1};
  ts.delta = {0, 1, 1, 0};

  auto none = ltl_to_nba(parse("G (i | o)"), {"i", "o"});
  std::fill(none.accepting.begin(), none.accepting.end(), 0);
  const auto u = dualize(none, {"i"}, {"o"});
  CHECK(u.rejecting_count() == 0);
  CHECK(check_acceptance(u, ts));

  const auto all = dualize(ltl_to_nba(Formula::tt(), {"i", "o"}), {"i"}, {"o"});
  CHECK_FALSE(check_acceptance(all, ts));

  CHECK_THROWS_AS(dualize(none, {"i", "o"}, {"o"}), std::invalid_argument);
  CHECK_THROWS_AS(dualize(none, {}, {"o"}), std::invalid_argument);
}

TEST_CASE("dualized acceptance against traces") {
  Rng rng(24);
  FormulaGen gen;
  gen.atoms = {"i", "o"};
  for (int round = 0; round < 60; ++round) {
    const auto f = gen(rng, 1 + static_cast<int>(rng() % 4));
    const auto n = ltl_to_nba(f, {"i", "o"});
    const auto u = dualize(n, {"i"}, {"o"});
    const auto ts = random_ts(rng, {"i"}, {"o"}, 2);
    const bool accepted = check_acceptance(u, ts).has_value();
    bool some_trace = false;
    for (const auto& t : traces(ts, 3, 3)) {
      if (nba_accepts(n, t)) some_trace = true;
    }
    INFO(to_string(f));
    if (accepted) CHECK_FALSE(some_trace);
    // small run graphs have violating lassos within the trace bounds
    if (u.states() * ts.states() <= 3) CHECK(accepted == !some_trace);
  }
}

TEST_CASE("dual interpretation on single paths") {
  Rng rng(25);
  FormulaGen gen;
  for (int round = 0; round < 60; ++round) {
    const auto f = gen(rng, 1 + static_cast<int>(rng() % 5));
    const auto n = ltl_to_nba(f, {"a", "b"});
    const auto u = dualize(n, {}, {"a", "b"});
    for (int k = 0; k < 10; ++k) {
      const auto w = random_lasso(rng, {"a", "b"}, 3, 3);
      CHECK(nba_accepts(n, w) != check_acceptance(u, path_system(w)).has_value());
    }
  }
}

TEST_CASE("run_graph") {
  StateAwareUct loop = chain_uct(1, {});
  TransitionSystem one;
  one.label = {0};
  one.delta = {0};
  const auto g = run_graph(loop, one);
  REQUIRE(g.vertices.size() == 1);
  CHECK(g.succ[0] == std::vector<std::size_t>{0});

  Rng rng(26);
  FormulaGen gen;
  gen.atoms = {"i", "o"};
  for (int round = 0; round < 60; ++round) {
    const auto u = dualize(ltl_to_nba(gen(rng, 1 + static_cast<int>(rng() % 4)), {"i", "o"}), {"i"}, {"o"});
    const auto ts = random_ts(rng, {"i", "j"}, {"o", "p"}, 3);
    auto wider = u;
    wider.dir_props = {"i", "j"};
    const auto rg = run_graph(wider, ts);
    CHECK(rg.vertices.size() <= u.states() * ts.states());
    CHECK(rg.vertices[0].q == u.init);
    CHECK(rg.vertices[0].s == ts.init);
    const auto expect = run_graph_closure(wider, ts);
    REQUIRE(expect.size() == rg.vertices.size());
    for (std::size_t v = 0; v < rg.vertices.size(); ++v) {
      std::set<std::pair<std::size_t, std::size_t>> got;
      for (auto w : rg.succ[v]) got.insert({rg.vertices[w].q, rg.vertices[w].s});
      CHECK(got == expect.at({rg.vertices[v].q, rg.vertices[v].s}));
    }
  }
  auto bad = loop;
  bad.x_count = 3;
  CHECK_THROWS_AS(run_graph(bad, one), std::invalid_argument);
}

TEST_CASE("check_acceptance examples") {
  TransitionSystem one;
  one.label = {0};
  one.delta = {0};

  const auto clean = check_acceptance(chain_uct(3, {}), one);
  REQUIRE(clean);
  CHECK(clean->value == std::vector<long>{0, 0, 0});
  auto partial = chain_uct(3, {});
  partial.edges[0].clear();
  partial.edges[0].push_back({{}, {}, {}, 0});
  const auto lone = check_acceptance(partial, one);
  REQUIRE(lone);
  CHECK(lone->value == std::vector<long>{0, -1, -1});

  CHECK_FALSE(check_acceptance(chain_uct(2, {1}), one));

  const auto two = check_acceptance(chain_uct(4, {1, 2}), one);
  REQUIRE(two);
  CHECK(two->max() == 2);
  CHECK(two->value == std::vector<long>{0, 1, 2, 2});
  CHECK(valid_annotation(chain_uct(4, {1, 2}), one, *two));

  Annotation bottom{4, 1, std::vector<long>(4, -1)};
  CHECK_FALSE(valid_annotation(chain_uct(4, {1, 2}), one, bottom));
}

TEST_CASE("annotations match rejecting-cycle detection") {
  Rng rng(27);
  FormulaGen gen;
  gen.atoms = {"i", "o"};
  for (int round = 0; round < 120; ++round) {
    const auto f = gen(rng, 1 + static_cast<int>(rng() % 4));
    const auto u = dualize(ltl_to_nba(f, {"i", "o"}), {"i"}, {"o"});
    const auto ts = random_ts(rng, {"i"}, {"o"}, 3);
    const auto a = check_acceptance(u, ts);
    INFO(to_string(f));
    CHECK(a.has_value() == !rejecting_cycle(u, ts));
    if (!a) continue;
    CHECK(valid_annotation(u, ts, *a));
    CHECK(a->max() <= static_cast<long>(ts.states() * u.rejecting_count()));
    const auto rg = run_graph(u, ts);
    for (std::size_t v = 1; v < rg.vertices.size(); ++v) {
      auto worse = *a;
      --worse.at(rg.vertices[v].q, rg.vertices[v].s);
      CHECK_FALSE(valid_annotation(u, ts, worse));
    }
  }
}
