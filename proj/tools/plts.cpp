// Command-line front end: parse, rewrite, fork, mc, synth sync|async.
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "plts/colored.hpp"
#include "plts/formula.hpp"
#include "plts/io.hpp"
#include "plts/synth.hpp"

using namespace plts;
using nlohmann::json;

namespace {

enum Exit { Ok = 0, Fail = 1, Usage = 2, Environment = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// inline text wins over a file
Formula formula_arg(const std::string& inline_text, const std::string& file, const char* what) {
  if (!inline_text.empty()) return parse(inline_text);
  if (!file.empty()) return parse(read_text(file));
  throw UsageError(std::string("missing ") + what);
}

std::string bounds_text(const BoundFamily& b) {
  std::string out;
  for (std::size_t k = 0; k < b.size(); ++k) out += (k ? "," : "") + std::to_string(b[k]);
  return "(" + out + ")";
}

std::string emit_path(const std::string& path, const BoundFamily& b) {
  std::string tag = ".b";
  for (std::size_t k = 0; k < b.size(); ++k) tag += (k ? "-" : "") + std::to_string(b[k]);
  const auto dot = path.rfind('.');
  const auto slash = path.rfind('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path + tag;
  return path.substr(0, dot) + tag + path.substr(dot);
}

struct SynthArgs {
  std::string arch;
  std::string spec, spec_file, assume, assume_file;
  bool pltl = false;
  std::size_t cap = 6;
  std::string solver = "z3 -in";
  double timeout = 600;
  std::string out_dir = ".";
  std::string emit_smt;
  bool json = false;
  bool no_cap_counters = false;
  bool no_prune = false;
  std::size_t max_implications = 4'000'000;
};

int run_synth(const SynthArgs& s, bool async) {
  const auto start = std::chrono::steady_clock::now();
  const Architecture a = architecture_from_json(read_json_file(s.arch));
  SynthOptions opt;
  opt.cap_total = s.cap;
  opt.solver = s.solver;
  opt.timeout = std::chrono::milliseconds(static_cast<long long>(s.timeout * 1000));
  opt.encoding.cap_counters = !s.no_cap_counters;
  opt.encoding.prune_counters = !s.no_prune;
  opt.encoding.max_implications = s.max_implications;
  if (!s.emit_smt.empty()) {
    opt.on_script = [&](const BoundFamily& b, const std::string& script) {
      std::ofstream out(emit_path(s.emit_smt, b));
      if (!out) throw UsageError("cannot write " + emit_path(s.emit_smt, b));
      out << script;
    };
  }

  SynthesisResult r;
  if (async) {
    const Formula phi = s.assume.empty() && s.assume_file.empty() ? Formula::tt()
                                                                  : formula_arg(s.assume, s.assume_file, "--assume");
    r = synth_async_ag(a, phi, formula_arg(s.spec, s.spec_file, "--spec"), opt);
  } else if (s.pltl) {
    r = synth_sync_pltl(a, formula_arg(s.spec, s.spec_file, "--spec"), opt);
  } else {
    r = synth_sync_prompt(a, formula_arg(s.spec, s.spec_file, "--spec"), opt);
  }

  std::vector<std::string> written;
  if (r.status == SynthesisResult::Realized) {
    auto save = [&](const std::string& name, const TransitionSystem& ts) {
      const std::string path = s.out_dir + "/" + name + ".json";
      write_json_file(path, to_json(ts));
      written.push_back(path);
    };
    std::error_code ec;
    std::filesystem::create_directories(s.out_dir, ec);
    if (ec) throw UsageError("cannot create " + s.out_dir + ": " + ec.message());
    for (const auto& [name, ts] : r.processes) save(name, ts);
    if (r.color) save(color_process(opt.r), *r.color);
  }
  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (s.json) {
    json attempts = json::array(), times = json::array();
    for (const auto& at : r.attempts) {
      attempts.push_back({{"bounds", at.bounds},
                          {"outcome", at.outcome},
                          {"automaton_states", at.automaton_states},
                          {"script_bytes", at.script_bytes}});
      times.push_back(at.seconds);
    }
    json rep = {{"status", to_string(r.status)},
                {"bounds", attempts},
                {"realized_bound", r.prompt_bound ? json(*r.prompt_bound) : json(nullptr)},
                {"valuation", r.valuation},
                {"witness", nullptr},
                {"files", written},
                {"message", r.message},
                {"timings", {{"total_seconds", total}, {"attempt_seconds", times}}}};
    std::cout << rep.dump(2) << std::endl;
  } else {
    std::cout << "status: " << to_string(r.status) << "\n";
    for (const auto& at : r.attempts) {
      std::cout << "bounds " << bounds_text(at.bounds) << ": " << at.outcome << " (" << at.seconds << " s)\n";
    }
    if (r.prompt_bound) std::cout << "realized prompt bound: " << *r.prompt_bound << "\n";
    for (const auto& [x, v] : r.valuation) std::cout << "valuation " << x << " = " << v << "\n";
    for (const auto& f : written) std::cout << "wrote " << f << "\n";
    if (!r.message.empty()) std::cout << "note: " << r.message << "\n";
    std::cout << std::flush;
  }
  switch (r.status) {
    case SynthesisResult::Realized:
      return Ok;
    case SynthesisResult::ExhaustedBounds:
      return Fail;
    default:
      return Environment;
  }
}

}  // namespace

int main(int argc, char** argv) {
  std::cout << std::unitbuf;
  CLI::App app{"Realizability checking and synthesis for PROMPT-LTL and PLTL specifications"};
  app.require_subcommand(1);

  std::string formula_text, formula_file;
  auto* cmd_parse = app.add_subcommand("parse", "Print the normalized formula");
  cmd_parse->add_option("formula", formula_text, "Formula text");
  cmd_parse->add_option("--file", formula_file, "Read the formula from a file");

  std::string color;
  auto* cmd_rewrite = app.add_subcommand("rewrite", "Print the alternating-color rewrite c_r(formula)");
  cmd_rewrite->add_option("formula", formula_text, "Formula text");
  cmd_rewrite->add_option("--file", formula_file, "Read the formula from a file");
  cmd_rewrite->add_option("--color", color, "Fresh color proposition")->required();

  std::string arch_path;
  bool as_json = false;
  auto* cmd_fork = app.add_subcommand("fork", "Search an architecture for an information fork");
  cmd_fork->add_option("arch", arch_path, "Architecture JSON file")->required();
  cmd_fork->add_flag("--json", as_json, "Machine-readable report");

  std::string ts_path, assume, assume_file, spec, spec_file;
  auto* cmd_mc = app.add_subcommand("mc", "Assume-guarantee model checking of a transition system");
  cmd_mc->add_option("--ts", ts_path, "Transition system JSON file")->required();
  cmd_mc->add_option("--assume", assume, "Assumption (default true)");
  cmd_mc->add_option("--assume-file", assume_file, "Assumption file");
  cmd_mc->add_option("--spec", spec, "Guarantee");
  cmd_mc->add_option("--spec-file", spec_file, "Guarantee file");
  cmd_mc->add_flag("--json", as_json, "Machine-readable report");

  SynthArgs sa;
  auto* cmd_synth = app.add_subcommand("synth", "Bounded synthesis");
  cmd_synth->require_subcommand(1);
  auto add_common = [&](CLI::App* c) {
    c->add_option("--arch", sa.arch, "Architecture JSON file")->required();
    c->add_option("--spec", sa.spec, "Specification (guarantee for async)");
    c->add_option("--spec-file", sa.spec_file, "Specification file");
    c->add_option("--cap", sa.cap, "Largest total of the process bounds")->check(CLI::PositiveNumber);
    c->add_option("--solver", sa.solver, "SMT-LIB solver command reading standard input");
    c->add_option("--timeout", sa.timeout, "Overall time budget in seconds")->check(CLI::PositiveNumber);
    c->add_option("--out", sa.out_dir, "Directory for the synthesized transition systems");
    c->add_option("--emit-smt", sa.emit_smt, "Write every script, tagged with its bounds, next to this path");
    c->add_option("--max-implications", sa.max_implications, "Encoding size limit (0 = none)");
    c->add_flag("--no-cap-counters", sa.no_cap_counters, "Do not bound the annotation counters");
    c->add_flag("--no-prune", sa.no_prune, "Keep counters in every automaton state");
    c->add_flag("--json", sa.json, "Machine-readable report");
  };
  auto* cmd_sync = cmd_synth->add_subcommand("sync", "Synchronous PROMPT-LTL or PLTL synthesis");
  add_common(cmd_sync);
  cmd_sync->add_flag("--pltl", sa.pltl, "Treat the specification as PLTL");
  auto* cmd_async = cmd_synth->add_subcommand("async", "Asynchronous assume-guarantee synthesis");
  add_common(cmd_async);
  cmd_async->add_option("--assume", sa.assume, "Assumption (default true)");
  cmd_async->add_option("--assume-file", sa.assume_file, "Assumption file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? Ok : Usage;
  }

  try {
    if (*cmd_parse) {
      std::cout << to_string(formula_arg(formula_text, formula_file, "formula")) << "\n";
      return Ok;
    }
    if (*cmd_rewrite) {
      std::cout << to_string(colorize(formula_arg(formula_text, formula_file, "formula"), color)) << "\n";
      return Ok;
    }
    if (*cmd_fork) {
      const auto a = architecture_from_json(read_json_file(arch_path));
      const auto fork = find_information_fork(a);
      if (as_json) {
        json rep = {{"status", fork ? "fork" : "weakly_ordered"}};
        if (fork) {
          rep["fork"] = {{"procs", fork->procs}, {"vars", fork->vars}, {"p", fork->p}, {"p2", fork->p2}};
        }
        std::cout << rep.dump(2) << "\n";
      } else {
        std::cout << (fork ? "information fork " + to_string(*fork) : std::string("weakly ordered")) << "\n";
      }
      return Ok;
    }
    if (*cmd_mc) {
      const auto start = std::chrono::steady_clock::now();
      const auto ts = transition_system_from_json(read_json_file(ts_path));
      const Formula phi = assume.empty() && assume_file.empty() ? Formula::tt() : formula_arg(assume, assume_file, "--assume");
      const auto res = ag_model_check(ts, phi, formula_arg(spec, spec_file, "--spec"));
      const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      if (as_json) {
        json rep = {{"status", res.holds ? "PASS" : "FAIL"},
                    {"bounds", nullptr},
                    {"realized_bound", nullptr},
                    {"witness", res.witness ? to_json(*res.witness) : json(nullptr)},
                    {"timings", {{"total_seconds", total}}}};
        std::cout << rep.dump(2) << "\n";
      } else {
        std::cout << (res.holds ? "PASS" : "FAIL") << "\n";
        if (res.witness) std::cout << "witness " << to_string(*res.witness) << "\n";
      }
      return res.holds ? Ok : Fail;
    }
    if (*cmd_sync) return run_synth(sa, false);
    if (*cmd_async) return run_synth(sa, true);
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return Environment;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return Usage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return Usage;
  } catch (const FormatError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return Usage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return Usage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return Environment;
  }
  return Usage;
}
