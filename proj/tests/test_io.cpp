#include <doctest.h>

#include <cstdio>

#include "plts/io.hpp"
#include "test_support.hpp"

using namespace plts;
using nlohmann::json;
using plts::testing::random_ts;
using plts::testing::Rng;

namespace {

json toggler_json() {
  return json::parse(R"({
    "inputs": ["go"], "outputs": ["y"],
    "states": [{"id": 7, "label": []}, {"id": 3, "label": ["y"]}],
    "init": 7,
    "delta": [{"from": 7, "on": [], "to": 7}, {"from": 7, "on": ["go"], "to": 3},
              {"from": 3, "on": [], "to": 3}, {"from": 3, "on": ["go"], "to": 7}]
  })");
}

}  // namespace

TEST_CASE("architecture json") {
  const auto j = json::parse(R"({"env": {"name": "env", "outputs": ["a", "b"]},
    "processes": [{"name": "p1", "inputs": ["a"], "outputs": ["c"]},
                  {"name": "p2", "inputs": ["b"], "outputs": ["d"]}]})");
  const auto a = architecture_from_json(j);
  CHECK(a.processes.size() == 2);
  CHECK(a.process("p2").inputs == std::set<std::string>{"b"});
  CHECK(architecture_from_json(to_json(a)) == a);
  CHECK(to_json(a) == j);

  auto missing = j;
  missing.erase("env");
  CHECK_THROWS_AS(architecture_from_json(missing), FormatError);
  auto twice = j;
  twice["processes"][0]["outputs"] = {"c", "c"};
  CHECK_THROWS_AS(architecture_from_json(twice), FormatError);
  auto number = j;
  number["processes"][0]["name"] = 4;
  CHECK_THROWS_AS(architecture_from_json(number), FormatError);
  auto dangling = j;
  dangling["processes"][0]["inputs"] = {"zz"};
  CHECK_THROWS_AS(architecture_from_json(dangling), ArchitectureError);
}

TEST_CASE("transition system json") {
  const auto ts = transition_system_from_json(toggler_json());
  CHECK(ts.states() == 2);
  CHECK(ts.init == 0);
  CHECK(ts.label == std::vector<Letter>{0, 1});
  CHECK(run_output(ts, {1, 0, 1}) == 0);
  CHECK(run_output(ts, {1, 0}) == 1);

  Rng rng(51);
  for (int round = 0; round < 40; ++round) {
    const auto t = random_ts(rng, {"i", "j"}, {"o", "p"}, 4);
    CHECK(transition_system_from_json(to_json(t)) == t);
    CHECK(transition_system_from_json(json::parse(to_json(t).dump())) == t);
  }

  auto partial = toggler_json();
  partial["delta"].erase(3);
  CHECK_THROWS_AS(transition_system_from_json(partial), FormatError);
  auto dup = toggler_json();
  dup["delta"].push_back({{"from", 7}, {"on", json::array()}, {"to", 3}});
  CHECK_THROWS_AS(transition_system_from_json(dup), FormatError);
  auto unknown = toggler_json();
  unknown["init"] = 5;
  CHECK_THROWS_AS(transition_system_from_json(unknown), FormatError);
  auto label = toggler_json();
  label["states"][0]["label"] = {"go"};
  CHECK_THROWS_AS(transition_system_from_json(label), FormatError);
  auto reads = toggler_json();
  reads["delta"][0]["on"] = {"y"};
  CHECK_THROWS_AS(transition_system_from_json(reads), FormatError);
  auto ids = toggler_json();
  ids["states"][1]["id"] = 7;
  CHECK_THROWS_AS(transition_system_from_json(ids), FormatError);
  auto empty = toggler_json();
  empty["states"] = json::array();
  CHECK_THROWS_AS(transition_system_from_json(empty), FormatError);
  auto overlap = toggler_json();
  overlap["outputs"] = {"go"};
  overlap["states"][1]["label"] = {"go"};
  CHECK_THROWS_AS(transition_system_from_json(overlap), FormatError);
}

TEST_CASE("lasso json and files") {
  const LassoWord w{{"a", "b"}, {0, 3}, {2}};
  const auto j = to_json(w);
  CHECK(j["stem"] == json::parse(R"([[], ["a", "b"]])"));
  CHECK(j["loop"] == json::parse(R"([["b"]])"));

  const std::string path = "io_test_tmp.json";
  write_json_file(path, j);
  CHECK(read_json_file(path) == j);
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_json_file("does/not/exist.json"), FormatError);
  {
    std::FILE* f = std::fopen(path.c_str(), "w");
    std::fputs("{ broken", f);
    std::fclose(f);
  }
  CHECK_THROWS_AS(read_json_file(path), FormatError);
  std::remove(path.c_str());
}
