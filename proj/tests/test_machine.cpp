#include <doctest.h>

#include "plts/machine.hpp"
#include "test_support.hpp"

using namespace plts;
using plts::testing::random_ts;
using plts::testing::Rng;

namespace {

TransitionSystem constant(std::vector<std::string> inputs, std::string out, bool on) {
  TransitionSystem ts;
  ts.inputs = std::move(inputs);
  ts.outputs = {std::move(out)};
  ts.label = {on ? Letter{1} : Letter{0}};
  ts.delta.assign(ts.letters(), 0);
  return ts;
}

// flips its output on every letter
TransitionSystem toggler(std::vector<std::string> inputs) {
  TransitionSystem ts;
  ts.inputs = std::move(inputs);
  ts.outputs = {"y"};
  ts.label = {0, 1};
  for (std::size_t s = 0; s < 2; ++s) {
    for (Letter i = 0; i < ts.letters(); ++i) ts.delta.push_back(1 - s);
  }
  return ts;
}

void for_each_prefix(std::size_t letters, std::size_t max_len, const std::function<void(const std::vector<Letter>&)>& fn) {
  std::vector<Letter> w;
  std::function<void()> rec = [&] {
    fn(w);
    if (w.size() == max_len) return;
    for (Letter l = 0; l < letters; ++l) {
      w.push_back(l);
      rec();
      w.pop_back();
    }
  };
  rec();
}

// Independent simulation of the trace of an input lasso up to position n.
std::vector<Letter> simulate(const TransitionSystem& ts, const LassoWord& input, std::size_t n) {
  std::vector<Letter> out;
  std::size_t s = ts.init;
  for (std::size_t k = 0; k < n; ++k) {
    const Letter i = input.letter(k);
    out.push_back(i | (ts.label[s] << ts.inputs.size()));
    s = ts.next(s, i);
  }
  return out;
}

}  // namespace

TEST_CASE("run_output") {
  const auto one = constant({"x"}, "y", true);
  CHECK(run_output(one, {}) == 1);
  CHECK(run_output(one, {0, 1, 1, 0}) == 1);

  const auto t = toggler({"x"});
  for (std::size_t len = 0; len < 6; ++len) {
    CHECK(run_output(t, std::vector<Letter>(len, 1)) == (len % 2));
  }
  CHECK(run_output(t, {}) == t.label[t.init]);
}

TEST_CASE("check rejects malformed systems") {
  auto ts = toggler({"x"});
  CHECK_NOTHROW(ts.check());
  auto partial = ts;
  partial.delta.pop_back();
  CHECK_THROWS_AS(partial.check(), std::invalid_argument);
  auto wild = ts;
  wild.delta[0] = 7;
  CHECK_THROWS_AS(wild.check(), std::invalid_argument);
  auto label = ts;
  label.label[0] = 2;
  CHECK_THROWS_AS(label.check(), std::invalid_argument);
  auto overlap = ts;
  overlap.outputs = {"x"};
  CHECK_THROWS_AS(overlap.check(), std::invalid_argument);
}

TEST_CASE("widen") {
  const auto t = toggler({"x"});
  CHECK(widen(t, {}) == t);

  const auto one = widen(constant({}, "y", true), {"z"});
  CHECK(one.states() == 1);
  CHECK(one.inputs == std::vector<std::string>{"z"});
  CHECK(run_output(one, {0, 1, 0}) == 1);

  CHECK_THROWS_AS(widen(t, {"x"}), std::invalid_argument);

  Rng rng(3);
  for (int round = 0; round < 30; ++round) {
    const auto ts = random_ts(rng, {"x"}, {"y"}, 3);
    const auto w = widen(ts, {"z", "u"});
    for_each_prefix(w.letters(), 4, [&](const std::vector<Letter>& prefix) {
      std::vector<Letter> proj;
      for (Letter l : prefix) proj.push_back(l & 1U);
      CHECK(run_output(w, prefix) == run_output(ts, proj));
    });
  }
}

TEST_CASE("distributed_product") {
  const auto p = distributed_product(constant({}, "y", true), constant({}, "x", true));
  CHECK(p.states() == 1);
  CHECK(names_of(p.outputs, p.label[0]) == std::set<std::string>{"x", "y"});

  Rng rng(4);
  const auto a = random_ts(rng, {"a"}, {"y"}, 3);
  const auto b = random_ts(rng, {"b"}, {"x"}, 3);
  CHECK(distributed_product(a, b).states() == a.states() * b.states());
  CHECK_THROWS_AS(distributed_product(a, a), std::invalid_argument);

  // f emits y without inputs, g reads a and decides x
  TransitionSystem g;
  g.inputs = {"a"};
  g.outputs = {"x"};
  g.label = {0, 1};
  g.delta = {0, 1, 0, 1};
  const auto fg = distributed_product(constant({}, "y", true), g);
  CHECK(fg.inputs == std::vector<std::string>{"a"});
  const auto y = Letter{1} << *prop_index(fg.outputs, "y");
  const auto x = Letter{1} << *prop_index(fg.outputs, "x");
  CHECK(run_output(fg, {}) == y);
  CHECK(run_output(fg, {1}) == (y | x));
  CHECK(run_output(fg, {1, 0}) == y);
}

TEST_CASE("product commutes with the generated strategies") {
  Rng rng(5);
  for (int round = 0; round < 40; ++round) {
    const auto t1 = random_ts(rng, {"a"}, {"x"}, 3);
    const auto t2 = random_ts(rng, {"b", "a"}, {"y"}, 3);
    const auto p = distributed_product(t1, t2);
    // p reads a then b; t2 reads b then a
    for_each_prefix(p.letters(), 5, [&](const std::vector<Letter>& w) {
      std::vector<Letter> w1, w2;
      for (Letter l : w) {
        w1.push_back(l & 1U);
        w2.push_back(((l >> 1) & 1U) | ((l & 1U) << 1));
      }
      const Letter expect = run_output(t1, w1) | (run_output(t2, w2) << 1);
      CHECK(run_output(p, w) == expect);
    });
  }
}

TEST_CASE("respects_scheduling") {
  TransitionSystem lazy;
  lazy.inputs = {"sched"};
  lazy.outputs = {"y"};
  lazy.label = {0, 1};
  lazy.delta = {0, 1, 1, 0};
  CHECK(respects_scheduling(lazy, "sched"));
  CHECK_FALSE(respects_scheduling(toggler({"sched"}), "sched"));
  CHECK_THROWS_AS(respects_scheduling(lazy, "other"), std::invalid_argument);

  // unreachable states are exempt
  auto exempt = lazy;
  exempt.label.push_back(0);
  exempt.delta = {0, 1, 1, 0, 0, 0};
  CHECK(respects_scheduling(exempt, "sched"));
}

TEST_CASE("traces") {
  const auto one = constant({"i"}, "o", false);
  CHECK(traces(one, 0, 1).size() == 2);
  CHECK(traces(one, 1, 1).size() == 4);
  CHECK(traces(one, 1, 1) == traces(one, 1, 1));

  Rng rng(6);
  for (int round = 0; round < 20; ++round) {
    const auto ts = random_ts(rng, {"i"}, {"o", "p"}, 3);
    for (const auto& t : traces(ts, 2, 2)) {
      LassoWord input = project(t, ts.inputs);
      const std::size_t n = t.positions() + 2 * ts.states() * t.loop.size() + 4;
      const auto expect = simulate(ts, input, n);
      for (std::size_t k = 0; k < n; ++k) CHECK(t.letter(k) == expect[k]);
    }
  }
}

TEST_CASE("compose") {
  const Architecture a1{{"env", {}, {"a", "b"}}, {{"p1", {"a"}, {"c"}}, {"p2", {"b"}, {"d"}}}};
  TransitionSystem p1;
  p1.inputs = {"a"};
  p1.outputs = {"c"};
  p1.label = {0, 1};
  p1.delta = {0, 1, 0, 1};  // copies a
  auto p2 = toggler({"b"});
  p2.outputs = {"d"};
  const auto g = compose(a1, {{"p1", p1}, {"p2", p2}});
  CHECK(g.inputs == std::vector<std::string>{"a", "b"});
  CHECK(g.outputs == std::vector<std::string>{"c", "d"});
  CHECK(g.states() == 4);
  // first process least significant
  CHECK(g.label[1] == 1);
  CHECK(g.label[2] == 2);
  CHECK(run_output(g, {1}) == 3);
  CHECK(run_output(g, {1, 0}) == 0);

  // pipeline: p2 sees p1's current output
  const Architecture a2{{"env", {}, {"a"}}, {{"p1", {"a"}, {"b"}}, {"p2", {"b"}, {"c"}}}};
  TransitionSystem q1 = p1;
  q1.outputs = {"b"};
  TransitionSystem q2 = p1;
  q2.inputs = {"b"};
  q2.outputs = {"c"};
  const auto h = compose(a2, {{"p1", q1}, {"p2", q2}});
  CHECK(run_output(h, {1}) == 1);
  CHECK(run_output(h, {1, 0}) == 2);
  CHECK(run_output(h, {1, 1}) == 3);

  CHECK_THROWS_AS(compose(a2, {{"p1", q1}}), std::invalid_argument);
  CHECK_THROWS_AS(compose(a2, {{"p1", q1}, {"p2", p1}}), std::invalid_argument);
}
