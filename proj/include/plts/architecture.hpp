#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace plts {

struct Process {
  std::string name;
  std::set<std::string> inputs;
  std::set<std::string> outputs;

  friend bool operator==(const Process&, const Process&) = default;
};

/// An environment process plus an ordered list of system processes.
struct Architecture {
  Process env;
  std::vector<Process> processes;

  /// env or system process by name; throws std::out_of_range
  const Process& process(const std::string& name) const;
  bool has_process(const std::string& name) const;
  std::set<std::string> system_outputs() const;
  std::set<std::string> propositions() const;

  friend bool operator==(const Architecture&, const Architecture&) = default;
};

class ArchitectureError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// One message per violated condition; empty when the architecture is valid.
std::vector<std::string> violations(const Architecture& a);
/// Throws ArchitectureError listing every violation.
void validate(const Architecture& a);

/// Name of the color process added by color_extend.
std::string color_process(const std::string& r);
/// Adds a process without inputs that outputs r.
Architecture color_extend(const Architecture& a, const std::string& r);

std::string sched_prop(const std::string& process);
/// Environment additionally emits sched_p for each system process p, which p reads.
Architecture async_lift(const Architecture& a);
bool is_async_lifted(const Architecture& a);

struct InformationFork {
  std::set<std::string> procs;  ///< P', always contains the environment
  std::set<std::string> vars;   ///< V'
  std::string p;
  std::string p2;

  friend bool operator==(const InformationFork&, const InformationFork&) = default;
};

/// Label of the edge from q to p: O_q & I_p.
std::set<std::string> edge_label(const Architecture& a, const std::string& q, const std::string& p);

/// Exhaustive search. Subsets P' are tried by size and then lexicographically;
/// the returned V' is minimal with respect to removal of single variables.
std::optional<InformationFork> find_information_fork(const Architecture& a);
bool is_weakly_ordered(const Architecture& a);

std::string to_string(const InformationFork& f);

}  // namespace plts
