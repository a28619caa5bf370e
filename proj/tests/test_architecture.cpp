#include <doctest.h>

#include <algorithm>
#include <deque>

#include "plts/architecture.hpp"
#include "test_support.hpp"

using namespace plts;
using plts::testing::random_architecture;
using plts::testing::Rng;

namespace {

Architecture a1() {
  return {{"env", {}, {"a", "b"}}, {{"p1", {"a"}, {"c"}}, {"p2", {"b"}, {"d"}}}};
}

Architecture a2() {
  return {{"env", {}, {"a"}}, {{"p1", {"a"}, {"b"}}, {"p2", {"b"}, {"c"}}}};
}

bool disjoint(const std::set<std::string>& x, const std::set<std::string>& y) {
  return std::none_of(x.begin(), x.end(), [&](const std::string& v) { return y.count(v) > 0; });
}

// Reads the fork definition literally: P' with V'-labeled edges is rooted in
// env, and q, q' in P' feed p, p' with information the other one lacks.
bool is_fork(const Architecture& a, const InformationFork& f) {
  auto outputs = [&](const std::string& q) { return a.process(q).outputs; };
  auto inputs = [&](const std::string& q) { return a.process(q).inputs; };
  auto label = [&](const std::string& q, const std::string& p) {
    std::set<std::string> l;
    for (const auto& v : outputs(q)) {
      if (inputs(p).count(v)) l.insert(v);
    }
    return l;
  };
  auto is_system = [&](const std::string& x) {
    return std::any_of(a.processes.begin(), a.processes.end(), [&](const Process& p) { return p.name == x; });
  };
  if (f.p == f.p2 || !is_system(f.p) || !is_system(f.p2)) return false;
  if (f.procs.count(f.p) || f.procs.count(f.p2) || !f.procs.count(a.env.name)) return false;
  if (!disjoint(f.vars, inputs(f.p)) || !disjoint(f.vars, inputs(f.p2))) return false;

  std::set<std::string> seen{a.env.name};
  std::deque<std::string> todo{a.env.name};
  while (!todo.empty()) {
    const auto q = todo.front();
    todo.pop_front();
    for (const auto& q2 : f.procs) {
      if (seen.count(q2)) continue;
      if (!disjoint(label(q, q2), f.vars)) {
        seen.insert(q2);
        todo.push_back(q2);
      }
    }
  }
  if (seen != f.procs) return false;

  auto feeds = [&](const std::string& target, const std::string& other) {
    for (const auto& q : f.procs) {
      const auto l = label(q, target);
      if (l.empty()) continue;
      if (std::any_of(l.begin(), l.end(), [&](const std::string& v) { return !inputs(other).count(v); })) return true;
    }
    return false;
  };
  return feeds(f.p, f.p2) && feeds(f.p2, f.p);
}

bool brute_force_has_fork(const Architecture& a) {
  const auto vars = a.propositions();
  const std::size_t n = a.processes.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      for (std::uint32_t pm = 0; pm < (1U << n); ++pm) {
        if (pm >> i & 1U || pm >> j & 1U) continue;
        InformationFork f{{a.env.name}, {}, a.processes[i].name, a.processes[j].name};
        for (std::size_t k = 0; k < n; ++k) {
          if (pm >> k & 1U) f.procs.insert(a.processes[k].name);
        }
        // rootedness only grows with V', so the largest admissible V' decides
        for (const auto& v : vars) {
          if (!a.processes[i].inputs.count(v) && !a.processes[j].inputs.count(v)) f.vars.insert(v);
        }
        if (is_fork(a, f)) return true;
      }
    }
  }
  return false;
}
}  // namespace

TEST_CASE("validate") {
  CHECK(violations(a1()).empty());
  CHECK_NOTHROW(validate(a2()));

  auto clash = a1();
  clash.processes[1].outputs = {"c"};
  CHECK_THROWS_AS(validate(clash), ArchitectureError);
  REQUIRE(violations(clash).size() == 1);
  CHECK(violations(clash)[0].find("outputs not disjoint") != std::string::npos);

  auto dangling = a1();
  dangling.processes[0].inputs.insert("x");
  REQUIRE(violations(dangling).size() == 1);
  CHECK(violations(dangling)[0].find("dangling input") != std::string::npos);

  auto env_reads = a1();
  env_reads.env.inputs = {"c"};
  CHECK_FALSE(violations(env_reads).empty());

  auto both = clash;
  both.processes[0].inputs.insert("x");
  CHECK(violations(both).size() == 2);
}

TEST_CASE("color_extend") {
  const auto ar = color_extend(a1(), "r");
  REQUIRE(ar.processes.size() == 3);
  const auto& pr = ar.processes.back();
  CHECK(pr.name == color_process("r"));
  CHECK(pr.inputs.empty());
  CHECK(pr.outputs == std::set<std::string>{"r"});
  CHECK_NOTHROW(validate(ar));

  const auto twice = color_extend(ar, "r2");
  CHECK(twice.processes.size() == 4);
  CHECK(twice.process(color_process("r2")).outputs == std::set<std::string>{"r2"});
  CHECK(twice.process(color_process("r")) == pr);

  CHECK_THROWS_AS(color_extend(a1(), "c"), std::invalid_argument);
  CHECK_THROWS_AS(color_extend(ar, "r"), std::invalid_argument);
}

TEST_CASE("async_lift") {
  const auto lifted = async_lift(a1());
  CHECK(lifted.env.outputs == std::set<std::string>{"a", "b", sched_prop("p1"), sched_prop("p2")});
  CHECK(lifted.process("p1").inputs == std::set<std::string>{"a", sched_prop("p1")});
  CHECK(lifted.process("p2").inputs == std::set<std::string>{"b", sched_prop("p2")});
  CHECK(sched_prop("p1") == "sched_p1");
  CHECK(is_async_lifted(lifted));
  CHECK_FALSE(is_async_lifted(a1()));
  CHECK_NOTHROW(validate(lifted));

  const Architecture one{{"env", {}, {"i"}}, {{"p", {"i"}, {"o"}}}};
  CHECK(async_lift(one).env.outputs.size() == 2);

  const Architecture taken{{"env", {}, {"sched_p"}}, {{"p", {}, {"o"}}}};
  CHECK_THROWS_AS(async_lift(taken), std::invalid_argument);
}

TEST_CASE("information forks of the examples") {
  const auto f = find_information_fork(a1());
  REQUIRE(f);
  CHECK(*f == InformationFork{{"env"}, {}, "p1", "p2"});
  CHECK(to_string(*f) == "({env}, {}, p1, p2)");
  CHECK_FALSE(is_weakly_ordered(a1()));

  CHECK_FALSE(find_information_fork(a2()));
  CHECK(is_weakly_ordered(a2()));

  const Architecture one{{"env", {}, {"i"}}, {{"p", {"i"}, {"o"}}}};
  CHECK(is_weakly_ordered(one));
}

TEST_CASE("edge labels") {
  CHECK(edge_label(a1(), "env", "p1") == std::set<std::string>{"a"});
  CHECK(edge_label(a1(), "p1", "p2").empty());
  CHECK(edge_label(a2(), "p1", "p2") == std::set<std::string>{"b"});
}

TEST_CASE("fork search agrees with the definition") {
  Rng rng(11);
  for (int round = 0; round < 150; ++round) {
    const auto a = random_architecture(rng, 4);
    REQUIRE(violations(a).empty());
    const auto f = find_information_fork(a);
    if (f) CHECK(is_fork(a, *f));
    CHECK(f.has_value() == brute_force_has_fork(a));
  }
}

TEST_CASE("fork existence is preserved by color_extend") {
  Rng rng(12);
  for (int round = 0; round < 100; ++round) {
    const auto a = random_architecture(rng, 5);
    const auto ar = color_extend(a, "r");
    CHECK(violations(ar).empty());
    CHECK(violations(async_lift(a)).empty());
    CHECK(find_information_fork(a).has_value() == find_information_fork(ar).has_value());
  }
}
