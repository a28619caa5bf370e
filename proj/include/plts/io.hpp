#pragma once

#include <stdexcept>
#include <string>

#include "json.hpp"
#include "plts/architecture.hpp"
#include "plts/machine.hpp"
#include "plts/word.hpp"

namespace plts {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// { "env": {"name", "outputs"}, "processes": [{"name", "inputs", "outputs"}] }
Architecture architecture_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Architecture& a);

/// { "inputs", "outputs", "states": [{"id", "label"}], "init",
///   "delta": [{"from", "on", "to"}] } with exactly one delta entry per state
/// and input letter. State ids are mapped to indices in listed order.
TransitionSystem transition_system_from_json(const nlohmann::json& j);
nlohmann::json to_json(const TransitionSystem& ts);

/// { "props", "stem": [[str]], "loop": [[str]] }
nlohmann::json to_json(const LassoWord& w);

nlohmann::json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& j);

}  // namespace plts
