#include "plts/io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

namespace plts {

using nlohmann::json;

namespace {

std::set<std::string> string_set(const json& j, const char* what) {
  if (!j.is_array()) throw FormatError(std::string(what) + " must be an array of strings");
  std::set<std::string> out;
  for (const auto& e : j) {
    if (!e.is_string()) throw FormatError(std::string(what) + " must be an array of strings");
    if (!out.insert(e.get<std::string>()).second) throw FormatError(std::string(what) + " repeats '" + e.get<std::string>() + "'");
  }
  return out;
}

const json& field(const json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) throw FormatError(std::string("missing field '") + name + "'");
  return j.at(name);
}

std::string string_field(const json& j, const char* name) {
  const auto& f = field(j, name);
  if (!f.is_string()) throw FormatError(std::string("field '") + name + "' must be a string");
  return f.get<std::string>();
}

long int_field(const json& j, const char* name) {
  const auto& f = field(j, name);
  if (!f.is_number_integer()) throw FormatError(std::string("field '") + name + "' must be an integer");
  return f.get<long>();
}

}  // namespace

Architecture architecture_from_json(const json& j) {
  Architecture a;
  const auto& env = field(j, "env");
  a.env.name = string_field(env, "name");
  a.env.outputs = string_set(field(env, "outputs"), "env.outputs");
  const auto& procs = field(j, "processes");
  if (!procs.is_array()) throw FormatError("processes must be an array");
  for (const auto& p : procs) {
    a.processes.push_back({string_field(p, "name"), string_set(field(p, "inputs"), "inputs"),
                           string_set(field(p, "outputs"), "outputs")});
  }
  validate(a);
  return a;
}

json to_json(const Architecture& a) {
  json procs = json::array();
  for (const auto& p : a.processes) procs.push_back({{"name", p.name}, {"inputs", p.inputs}, {"outputs", p.outputs}});
  return {{"env", {{"name", a.env.name}, {"outputs", a.env.outputs}}}, {"processes", procs}};
}

TransitionSystem transition_system_from_json(const json& j) {
  TransitionSystem ts;
  const auto ins = string_set(field(j, "inputs"), "inputs");
  const auto outs = string_set(field(j, "outputs"), "outputs");
  ts.inputs.assign(ins.begin(), ins.end());
  ts.outputs.assign(outs.begin(), outs.end());
  if (ts.inputs.size() > 20) throw FormatError("too many inputs");

  std::map<long, std::size_t> index;
  const auto& states = field(j, "states");
  if (!states.is_array() || states.empty()) throw FormatError("states must be a nonempty array");
  for (const auto& s : states) {
    const long id = int_field(s, "id");
    if (!index.emplace(id, ts.label.size()).second) throw FormatError("duplicate state id " + std::to_string(id));
    Letter l = 0;
    for (const auto& name : string_set(field(s, "label"), "label")) {
      auto b = prop_index(ts.outputs, name);
      if (!b) throw FormatError("label of state " + std::to_string(id) + " uses undeclared output '" + name + "'");
      l |= Letter{1} << *b;
    }
    ts.label.push_back(l);
  }
  auto state = [&](long id) {
    auto it = index.find(id);
    if (it == index.end()) throw FormatError("unknown state id " + std::to_string(id));
    return it->second;
  };
  ts.init = state(int_field(j, "init"));

  const std::size_t unset = SIZE_MAX;
  ts.delta.assign(ts.states() * ts.letters(), unset);
  const auto& delta = field(j, "delta");
  if (!delta.is_array()) throw FormatError("delta must be an array");
  for (const auto& e : delta) {
    const auto from = state(int_field(e, "from"));
    const auto to = state(int_field(e, "to"));
    Letter i = 0;
    for (const auto& name : string_set(field(e, "on"), "on")) {
      auto b = prop_index(ts.inputs, name);
      if (!b) throw FormatError("transition reads undeclared input '" + name + "'");
      i |= Letter{1} << *b;
    }
    auto& slot = ts.delta[from * ts.letters() + i];
    if (slot != unset) throw FormatError("duplicate transition from state " + std::to_string(int_field(e, "from")));
    slot = to;
  }
  if (std::find(ts.delta.begin(), ts.delta.end(), unset) != ts.delta.end()) {
    throw FormatError("transition function is not total");
  }
  try {
    ts.check();
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  return ts;
}

json to_json(const TransitionSystem& ts) {
  json states = json::array();
  for (std::size_t s = 0; s < ts.states(); ++s) {
    states.push_back({{"id", s}, {"label", names_of(ts.outputs, ts.label[s])}});
  }
  json delta = json::array();
  for (std::size_t s = 0; s < ts.states(); ++s) {
    for (Letter i = 0; i < ts.letters(); ++i) {
      delta.push_back({{"from", s}, {"on", names_of(ts.inputs, i)}, {"to", ts.next(s, i)}});
    }
  }
  return {{"inputs", ts.inputs}, {"outputs", ts.outputs}, {"states", states}, {"init", ts.init}, {"delta", delta}};
}

json to_json(const LassoWord& w) {
  json stem = json::array(), loop = json::array();
  for (auto l : w.stem) stem.push_back(names_of(w.props, l));
  for (auto l : w.loop) loop.push_back(names_of(w.props, l));
  return {{"props", w.props}, {"stem", stem}, {"loop", loop}};
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace plts
