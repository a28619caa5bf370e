#include "plts/architecture.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <regex>
#include <sstream>

namespace plts {

const Process& Architecture::process(const std::string& name) const {
  if (env.name == name) return env;
  for (const auto& p : processes) {
    if (p.name == name) return p;
  }
  throw std::out_of_range("no process named '" + name + "'");
}

bool Architecture::has_process(const std::string& name) const {
  if (env.name == name) return true;
  return std::any_of(processes.begin(), processes.end(), [&](const Process& p) { return p.name == name; });
}

std::set<std::string> Architecture::system_outputs() const {
  std::set<std::string> out;
  for (const auto& p : processes) out.insert(p.outputs.begin(), p.outputs.end());
  return out;
}

std::set<std::string> Architecture::propositions() const {
  std::set<std::string> out = env.outputs;
  for (const auto& p : processes) {
    out.insert(p.outputs.begin(), p.outputs.end());
    out.insert(p.inputs.begin(), p.inputs.end());
  }
  return out;
}

std::vector<std::string> violations(const Architecture& a) {
  static const std::regex ident("^[A-Za-z_][A-Za-z0-9_]*$");
  std::vector<std::string> out;
  if (!a.env.inputs.empty()) out.push_back("environment has inputs");

  std::vector<const Process*> all{&a.env};
  for (const auto& p : a.processes) all.push_back(&p);

  std::set<std::string> names;
  for (const auto* p : all) {
    if (!names.insert(p->name).second) out.push_back("duplicate process name '" + p->name + "'");
    for (const auto* props : {&p->inputs, &p->outputs}) {
      for (const auto& v : *props) {
        if (!std::regex_match(v, ident)) out.push_back("invalid proposition name '" + v + "'");
      }
    }
  }

  std::map<std::string, std::string> owner;
  for (const auto* p : all) {
    for (const auto& v : p->outputs) {
      auto [it, fresh] = owner.emplace(v, p->name);
      if (!fresh) out.push_back("outputs not disjoint: '" + v + "' of " + it->second + " and " + p->name);
    }
  }
  for (const auto& p : a.processes) {
    for (const auto& v : p.inputs) {
      auto it = owner.find(v);
      if (it == owner.end()) out.push_back("dangling input: '" + v + "' of " + p.name);
    }
  }
  return out;
}

void validate(const Architecture& a) {
  auto v = violations(a);
  if (v.empty()) return;
  std::string msg = "invalid architecture: ";
  for (std::size_t i = 0; i < v.size(); ++i) msg += (i ? "; " : "") + v[i];
  throw ArchitectureError(msg);
}

std::string color_process(const std::string& r) { return "p_" + r; }

Architecture color_extend(const Architecture& a, const std::string& r) {
  if (a.propositions().count(r)) throw ArchitectureError("color '" + r + "' is already used");
  if (a.has_process(color_process(r))) throw ArchitectureError("process '" + color_process(r) + "' exists");
  Architecture out = a;
  out.processes.push_back(Process{color_process(r), {}, {r}});
  return out;
}

std::string sched_prop(const std::string& process) { return "sched_" + process; }

Architecture async_lift(const Architecture& a) {
  Architecture out = a;
  const auto used = a.propositions();
  for (auto& p : out.processes) {
    const auto s = sched_prop(p.name);
    if (used.count(s)) throw ArchitectureError("scheduling proposition '" + s + "' is already used");
    out.env.outputs.insert(s);
    p.inputs.insert(s);
  }
  return out;
}

bool is_async_lifted(const Architecture& a) {
  return std::all_of(a.processes.begin(), a.processes.end(), [&](const Process& p) {
    const auto s = sched_prop(p.name);
    return a.env.outputs.count(s) && p.inputs.count(s);
  });
}

std::set<std::string> edge_label(const Architecture& a, const std::string& q, const std::string& p) {
  const auto& out = a.process(q).outputs;
  const auto& in = a.process(p).inputs;
  std::set<std::string> l;
  std::set_intersection(out.begin(), out.end(), in.begin(), in.end(), std::inserter(l, l.end()));
  return l;
}

namespace {

bool intersects(const std::set<std::string>& a, const std::set<std::string>& b) {
  return std::any_of(a.begin(), a.end(), [&](const std::string& x) { return b.count(x) > 0; });
}

bool subset(const std::set<std::string>& a, const std::set<std::string>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// Every member of procs reachable from env via procs-internal edges carrying a
// variable of vars.
bool rooted(const Architecture& a, const std::vector<std::string>& procs, const std::set<std::string>& vars) {
  std::set<std::string> seen{a.env.name};
  std::deque<std::string> queue{a.env.name};
  while (!queue.empty()) {
    auto q = queue.front();
    queue.pop_front();
    for (const auto& p : procs) {
      if (seen.count(p)) continue;
      if (intersects(edge_label(a, q, p), vars)) {
        seen.insert(p);
        queue.push_back(p);
      }
    }
  }
  return seen.size() == procs.size();
}

}  // namespace

std::optional<InformationFork> find_information_fork(const Architecture& a) {
  const std::size_t n = a.processes.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Process& p = a.processes[i];
      const Process& p2 = a.processes[j];
      std::vector<std::string> others;
      for (std::size_t k = 0; k < n; ++k) {
        if (k != i && k != j) others.push_back(a.processes[k].name);
      }
      std::sort(others.begin(), others.end());

      // subsets of the other system processes, by size then lexicographically
      std::vector<std::vector<std::string>> candidates;
      for (std::uint32_t mask = 0; mask < (1U << others.size()); ++mask) {
        std::vector<std::string> c;
        for (std::size_t k = 0; k < others.size(); ++k) {
          if (mask >> k & 1U) c.push_back(others[k]);
        }
        candidates.push_back(std::move(c));
      }
      std::stable_sort(candidates.begin(), candidates.end(), [](const auto& x, const auto& y) {
        return x.size() != y.size() ? x.size() < y.size() : x < y;
      });

      for (auto procs : candidates) {
        procs.insert(procs.begin(), a.env.name);

        auto witness = [&](const Process& target, const Process& other) {
          return std::any_of(procs.begin(), procs.end(), [&](const std::string& q) {
            auto l = edge_label(a, q, target.name);
            return !l.empty() && !subset(l, other.inputs);
          });
        };
        if (!witness(p, p2) || !witness(p2, p)) continue;

        std::set<std::string> vars;
        for (const auto& q : procs) {
          for (const auto& q2 : procs) {
            if (q == q2) continue;
            for (const auto& v : edge_label(a, q, q2)) {
              if (!p.inputs.count(v) && !p2.inputs.count(v)) vars.insert(v);
            }
          }
        }
        if (!rooted(a, procs, vars)) continue;
        for (auto it = vars.begin(); it != vars.end();) {
          auto smaller = vars;
          smaller.erase(*it);
          if (rooted(a, procs, smaller)) {
            it = vars.erase(it);
          } else {
            ++it;
          }
        }
        return InformationFork{{procs.begin(), procs.end()}, vars, p.name, p2.name};
      }
    }
  }
  return std::nullopt;
}

bool is_weakly_ordered(const Architecture& a) { return !find_information_fork(a).has_value(); }

std::string to_string(const InformationFork& f) {
  auto set = [](const std::set<std::string>& s) {
    std::string out = "{";
    for (const auto& x : s) out += (out.size() > 1 ? "," : "") + x;
    return out + "}";
  };
  return "(" + set(f.procs) + ", " + set(f.vars) + ", " + f.p + ", " + f.p2 + ")";
}

}  // namespace plts
