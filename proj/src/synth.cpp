#include "plts/synth.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "plts/colored.hpp"

namespace plts {

std::vector<BoundFamily> enumerate_bounds(std::size_t processes, std::size_t cap_total) {
  std::vector<BoundFamily> out;
  if (processes == 0) return out;
  for (std::size_t sum = processes; sum <= cap_total; ++sum) {
    // lexicographic compositions of sum into `processes` positive parts
    BoundFamily f(processes, 1);
    f.back() = sum - (processes - 1);
    auto fill = [&](auto&& self, std::size_t k, std::size_t left) -> void {
      if (k + 1 == processes) {
        f[k] = left;
        out.push_back(f);
        return;
      }
      for (std::size_t v = 1; v + (processes - k - 1) <= left; ++v) {
        f[k] = v;
        self(self, k + 1, left - v);
      }
    };
    fill(fill, 0, sum);
  }
  return out;
}

namespace smt_names {
std::string local_delta(std::size_t process) { return "d_" + std::to_string(process); }
std::string local_label(std::size_t process, std::size_t output) {
  return "l_" + std::to_string(process) + "_" + std::to_string(output);
}
}  // namespace smt_names

namespace {

struct Layout {
  std::vector<std::string> inputs;  // environment outputs, sorted
  std::vector<std::vector<std::string>> proc_inputs;
  std::vector<std::vector<std::string>> proc_outputs;
  std::vector<std::size_t> bounds;
  std::vector<std::size_t> radix;
  std::size_t global = 1;
  std::map<std::string, std::pair<std::size_t, std::size_t>> owner;  // output -> (process, index)

  std::size_t local(std::size_t g, std::size_t k) const { return (g / radix[k]) % bounds[k]; }
};

constexpr std::size_t max_global_states = std::size_t{1} << 20;

Layout make_layout(const Architecture& a, const BoundFamily& bounds) {
  validate(a);
  if (bounds.size() != a.processes.size()) throw std::invalid_argument("bound family does not cover every process");
  Layout l;
  l.inputs.assign(a.env.outputs.begin(), a.env.outputs.end());
  if (l.inputs.size() > 16) throw std::invalid_argument("too many environment outputs for letter codes");
  for (std::size_t k = 0; k < a.processes.size(); ++k) {
    const auto& p = a.processes[k];
    if (bounds[k] == 0) throw std::invalid_argument("bounds must be positive");
    l.proc_inputs.emplace_back(p.inputs.begin(), p.inputs.end());
    l.proc_outputs.emplace_back(p.outputs.begin(), p.outputs.end());
    if (p.inputs.size() > 16) throw std::invalid_argument("process " + p.name + " has too many inputs");
    for (std::size_t j = 0; j < l.proc_outputs[k].size(); ++j) l.owner[l.proc_outputs[k][j]] = {k, j};
    l.bounds.push_back(bounds[k]);
    l.radix.push_back(l.global);
    l.global *= bounds[k];
    if (l.global > max_global_states) throw std::invalid_argument("global state space too large");
  }
  return l;
}

std::string label_term(const Layout& l, const std::string& prop, std::size_t g) {
  const auto [m, j] = l.owner.at(prop);
  return "(" + smt_names::local_label(m, j) + " " + std::to_string(l.local(g, m) + 1) + ")";
}

// Visible letter code of process k in global state g under environment
// letter i, as an SMT term.
std::string visible_term(const Layout& l, std::size_t k, std::size_t g, Letter i) {
  std::size_t constant = 0;
  std::vector<std::string> dynamic;
  for (std::size_t j = 0; j < l.proc_inputs[k].size(); ++j) {
    const auto& prop = l.proc_inputs[k][j];
    if (auto e = prop_index(l.inputs, prop)) {
      if ((i >> *e) & 1U) constant |= std::size_t{1} << j;
    } else {
      dynamic.push_back("(ite " + label_term(l, prop, g) + " " + std::to_string(std::size_t{1} << j) + " 0)");
    }
  }
  if (dynamic.empty()) return std::to_string(constant);
  std::string out = "(+ " + std::to_string(constant);
  for (const auto& d : dynamic) out += " " + d;
  return out + ")";
}

std::string sched_name_of(const Architecture& a, std::size_t k) { return sched_prop(a.processes[k].name); }

}  // namespace

std::string encode_architectural(const Architecture& a, const BoundFamily& bounds, bool scheduled) {
  const Layout l = make_layout(a, bounds);
  std::ostringstream os;
  for (std::size_t k = 0; k < a.processes.size(); ++k) {
    os << "; process " << a.processes[k].name << ": " << l.bounds[k] << " states\n";
    os << "(declare-fun " << smt_names::local_delta(k) << " (Int Int) Int)\n";
    for (std::size_t j = 0; j < l.proc_outputs[k].size(); ++j) {
      os << "(declare-fun " << smt_names::local_label(k, j) << " (Int) Bool)\n";
    }
  }
  os << "(declare-fun delta (Int Int) Int)\n";

  for (std::size_t k = 0; k < a.processes.size(); ++k) {
    const std::size_t letters = std::size_t{1} << l.proc_inputs[k].size();
    std::optional<std::size_t> sched_bit;
    if (scheduled) sched_bit = prop_index(l.proc_inputs[k], sched_name_of(a, k));
    for (std::size_t s = 1; s <= l.bounds[k]; ++s) {
      for (std::size_t v = 0; v < letters; ++v) {
        const std::string app = "(" + smt_names::local_delta(k) + " " + std::to_string(s) + " " + std::to_string(v) + ")";
        if (sched_bit && !((v >> *sched_bit) & 1U)) {
          os << "(assert (= " << app << " " << s << "))\n";
        } else {
          os << "(assert (<= 1 " << app << " " << l.bounds[k] << "))\n";
        }
      }
    }
  }

  // global transition function as the mixed-radix product of the locals
  const std::size_t in_letters = std::size_t{1} << l.inputs.size();
  long offset = 1;
  for (auto r : l.radix) offset -= static_cast<long>(r);
  for (std::size_t g = 0; g < l.global; ++g) {
    for (Letter i = 0; i < in_letters; ++i) {
      std::string sum;
      for (std::size_t k = 0; k < a.processes.size(); ++k) {
        const std::string app = "(" + smt_names::local_delta(k) + " " + std::to_string(l.local(g, k) + 1) + " " +
                                visible_term(l, k, g, i) + ")";
        sum += " " + (l.radix[k] == 1 ? app : "(* " + std::to_string(l.radix[k]) + " " + app + ")");
      }
      std::string rhs;
      if (a.processes.size() == 1) {
        rhs = sum.substr(1);
      } else {
        rhs = "(+" + (offset == 0 ? std::string() : " " + (offset < 0 ? "(- " + std::to_string(-offset) + ")"
                                                                      : std::to_string(offset))) +
              sum + ")";
      }
      os << "(assert (= (delta " << g + 1 << " " << i << ") " << rhs << "))\n";
    }
  }
  return os.str();
}

std::string encode_annotation(const StateAwareUct& u, const Architecture& a, const BoundFamily& bounds,
                              const EncodeOptions& opt) {
  const Layout l = make_layout(a, bounds);
  if (u.x_count != 1 && u.x_count != l.global) {
    throw std::invalid_argument("automaton state space does not match the bound family");
  }
  for (const auto& o : u.out_props) {
    if (!l.owner.count(o)) throw std::invalid_argument("automaton output '" + o + "' is not a process output");
  }
  // directions that are environment outputs
  std::vector<std::pair<std::size_t, std::size_t>> dir_from_input;  // (dir bit, input bit)
  Letter dir_mask = 0;
  for (std::size_t d = 0; d < u.dir_props.size(); ++d) {
    if (auto e = prop_index(l.inputs, u.dir_props[d])) {
      dir_from_input.emplace_back(d, *e);
      dir_mask |= Letter{1} << d;
    } else if (l.owner.count(u.dir_props[d])) {
      throw std::invalid_argument("direction '" + u.dir_props[d] + "' is a process output");
    }
  }
  const std::size_t in_letters = std::size_t{1} << l.inputs.size();
  std::vector<Letter> dir_of(in_letters, 0);
  for (Letter i = 0; i < in_letters; ++i) {
    for (const auto& [d, e] : dir_from_input) {
      if ((i >> e) & 1U) dir_of[i] |= Letter{1} << d;
    }
  }

  // counters are needed only where a cycle can pass a rejecting state
  Adjacency adj(u.states());
  for (std::size_t q = 0; q < u.states(); ++q) {
    for (const auto& e : u.edges[q]) adj[q].push_back(e.target);
  }
  const auto sccs = tarjan(adj);
  std::vector<char> comp_rejecting(sccs.count, 0);
  for (std::size_t q = 0; q < u.states(); ++q) {
    if (u.rejecting[q] && sccs.nontrivial[sccs.comp[q]]) comp_rejecting[sccs.comp[q]] = 1;
  }
  std::vector<char> counter(u.states(), 1);
  if (opt.prune_counters) {
    for (std::size_t q = 0; q < u.states(); ++q) counter[q] = comp_rejecting[sccs.comp[q]];
  }
  auto counted = [&](std::size_t q, std::size_t t) {
    return counter[q] && counter[t] && (!opt.prune_counters || sccs.comp[q] == sccs.comp[t]);
  };

  std::ostringstream os;
  auto lb = [](std::size_t q) { return "lb_" + std::to_string(q); };
  auto ln = [](std::size_t q) { return "ln_" + std::to_string(q); };
  for (std::size_t q = 0; q < u.states(); ++q) {
    os << "(declare-fun " << lb(q) << " (Int) Bool)\n";
    if (counter[q]) os << "(declare-fun " << ln(q) << " (Int) Int)\n";
  }
  os << "(assert (" << lb(u.init) << " 1))\n";
  const std::size_t cap = l.global * u.rejecting_count();
  for (std::size_t q = 0; q < u.states(); ++q) {
    if (!counter[q]) continue;
    for (std::size_t g = 1; g <= l.global; ++g) {
      if (opt.cap_counters) {
        os << "(assert (<= 0 (" << ln(q) << " " << g << ") " << cap << "))\n";
      } else {
        os << "(assert (<= 0 (" << ln(q) << " " << g << ")))\n";
      }
    }
  }

  std::vector<std::vector<std::string>> lits(l.global);
  for (std::size_t g = 0; g < l.global; ++g) {
    for (const auto& o : u.out_props) lits[g].push_back(label_term(l, o, g));
  }
  auto cube_term = [&](const Cube& c, std::size_t g) {
    std::vector<std::string> parts;
    for (std::size_t o = 0; o < u.out_props.size(); ++o) {
      if ((c.pos >> o) & 1U) parts.push_back(lits[g][o]);
      if ((c.neg >> o) & 1U) parts.push_back("(not " + lits[g][o] + ")");
    }
    if (parts.size() == 1) return parts[0];
    std::string out = "(and";
    for (const auto& p : parts) out += " " + p;
    return out + ")";
  };

  std::size_t implications = 0;
  for (std::size_t q = 0; q < u.states(); ++q) {
    for (std::size_t g = 0; g < l.global; ++g) {
      const std::size_t x = u.x_count == 1 ? 0 : g;
      std::map<std::pair<std::size_t, Letter>, std::vector<Cube>> groups;
      for (const auto& e : u.edges[q]) {
        if (!e.x.matches(x)) continue;
        const Cube dir{e.dir.pos & dir_mask, e.dir.neg & dir_mask};
        for (Letter i = 0; i < in_letters; ++i) {
          if (dir.matches(dir_of[i])) groups[{e.target, i}].push_back(e.out);
        }
      }
      if (groups.empty()) continue;
      implications += groups.size();
      if (opt.max_implications && implications > opt.max_implications) {
        throw EncodingLimit("encoding exceeds " + std::to_string(opt.max_implications) + " implications");
      }
      const std::string here = std::to_string(g + 1);
      os << "(assert (=> (" << lb(q) << " " << here << ") (and";
      for (auto& [key, cubes] : groups) {
        const auto [t, i] = key;
        const std::string next = "(delta " + here + " " + std::to_string(i) + ")";
        std::string concl = "(" + lb(t) + " " + next + ")";
        if (counted(q, t)) {
          concl = "(and " + concl + " (" + (u.rejecting[t] ? ">" : ">=") + " (" + ln(t) + " " + next + ") (" + ln(q) +
                  " " + here + ")))";
        }
        std::sort(cubes.begin(), cubes.end());
        cubes.erase(std::unique(cubes.begin(), cubes.end()), cubes.end());
        const bool always = std::any_of(cubes.begin(), cubes.end(), [](const Cube& c) { return c.pos == 0 && c.neg == 0; });
        if (always) {
          os << " " << concl;
        } else if (cubes.size() == 1) {
          os << " (=> " << cube_term(cubes[0], g) << " " << concl << ")";
        } else {
          os << " (=> (or";
          for (const auto& c : cubes) os << " " << cube_term(c, g);
          os << ") " << concl << ")";
        }
      }
      os << ")))\n";
    }
  }
  return os.str();
}

std::string encode(const StateAwareUct& u, const Architecture& a, const BoundFamily& bounds, bool scheduled,
                   const EncodeOptions& opt) {
  const Layout l = make_layout(a, bounds);
  std::ostringstream os;
  os << "; bounded synthesis, bounds";
  for (std::size_t k = 0; k < a.processes.size(); ++k) os << " " << a.processes[k].name << "=" << bounds[k];
  os << "; automaton states " << u.states() << ", rejecting " << u.rejecting_count() << "\n";
  os << "(set-option :produce-models true)\n(set-logic UFLIA)\n";
  os << encode_architectural(a, bounds, scheduled);
  os << encode_annotation(u, a, bounds, opt);
  os << "(check-sat)\n";
  for (std::size_t k = 0; k < a.processes.size(); ++k) {
    os << "(get-value (";
    const std::size_t letters = std::size_t{1} << l.proc_inputs[k].size();
    bool first = true;
    for (std::size_t s = 1; s <= l.bounds[k]; ++s) {
      for (std::size_t v = 0; v < letters; ++v) {
        os << (first ? "" : " ") << "(" << smt_names::local_delta(k) << " " << s << " " << v << ")";
        first = false;
      }
      for (std::size_t j = 0; j < l.proc_outputs[k].size(); ++j) {
        os << " (" << smt_names::local_label(k, j) << " " << s << ")";
      }
    }
    os << "))\n";
  }
  return os.str();
}

std::string encode_global(const StateAwareUct& u, std::size_t b, const std::vector<std::string>& inputs,
                          const std::vector<std::string>& outputs, const EncodeOptions& opt) {
  if (inputs.size() > 16) throw std::invalid_argument("too many inputs for letter codes");
  if (outputs.size() > max_props) throw std::invalid_argument("too many outputs");
  Architecture a;
  a.env = {"env", {}, {inputs.begin(), inputs.end()}};
  a.processes.push_back({"system", {inputs.begin(), inputs.end()}, {outputs.begin(), outputs.end()}});
  return encode(u, a, {b}, false, opt);
}

Decoded decode_model(const std::map<std::string, std::string>& values, const Architecture& a,
                     const BoundFamily& bounds) {
  const Layout l = make_layout(a, bounds);
  Decoded out;
  for (std::size_t k = 0; k < a.processes.size(); ++k) {
    TransitionSystem ts;
    ts.inputs = l.proc_inputs[k];
    ts.outputs = l.proc_outputs[k];
    ts.init = 0;
    ts.label.assign(l.bounds[k], 0);
    ts.delta.assign(l.bounds[k] * ts.letters(), 0);
    for (std::size_t s = 1; s <= l.bounds[k]; ++s) {
      for (std::size_t v = 0; v < ts.letters(); ++v) {
        const auto key = "(" + smt_names::local_delta(k) + " " + std::to_string(s) + " " + std::to_string(v) + ")";
        auto it = values.find(key);
        if (it == values.end()) {
          ++out.defaulted;
          continue;
        }
        std::size_t t = 0;
        try {
          t = std::stoul(it->second);
        } catch (const std::exception&) {
          throw SolverError("unreadable model value " + key + " = " + it->second);
        }
        if (t < 1 || t > l.bounds[k]) throw SolverError("model value out of range: " + key + " = " + it->second);
        ts.delta[(s - 1) * ts.letters() + v] = t - 1;
      }
      for (std::size_t j = 0; j < ts.outputs.size(); ++j) {
        const auto key = "(" + smt_names::local_label(k, j) + " " + std::to_string(s) + ")";
        auto it = values.find(key);
        if (it == values.end()) {
          ++out.defaulted;
          continue;
        }
        if (it->second == "true") {
          ts.label[s - 1] |= Letter{1} << j;
        } else if (it->second != "false") {
          throw SolverError("unreadable model value " + key + " = " + it->second);
        }
      }
    }
    ts.check();
    out.processes.emplace(a.processes[k].name, std::move(ts));
  }
  return out;
}

std::size_t realized_prompt_bound(const TransitionSystem& color) {
  color.check();
  if (!color.inputs.empty()) throw std::invalid_argument("color process must not read inputs");
  std::vector<std::size_t> order;
  std::vector<std::size_t> seen(color.states(), SIZE_MAX);
  std::size_t s = color.init;
  while (seen[s] == SIZE_MAX) {
    seen[s] = order.size();
    order.push_back(s);
    s = color.next(s, 0);
  }
  const std::size_t loop = seen[s];
  auto bit = [&](std::size_t st) { return color.label[st] != 0; };
  bool changes = false;
  for (std::size_t k = loop; k < order.size(); ++k) {
    const std::size_t next = k + 1 < order.size() ? order[k + 1] : order[loop];
    if (bit(order[k]) != bit(next)) changes = true;
  }
  if (!changes) throw std::invalid_argument("no color alternation on the cycle of the color process");
  // stem and three cycle copies contain every block completely
  std::vector<bool> seq;
  for (std::size_t k = 0; k < loop; ++k) seq.push_back(bit(order[k]));
  for (int u = 0; u < 3; ++u) {
    for (std::size_t k = loop; k < order.size(); ++k) seq.push_back(bit(order[k]));
  }
  std::size_t longest = 0, start = 0;
  for (std::size_t n = 1; n < seq.size(); ++n) {
    if (seq[n] != seq[n - 1]) {
      longest = std::max(longest, n - start);
      start = n;
    }
  }
  return 2 * longest;
}

std::string to_string(SynthesisResult::Status s) {
  switch (s) {
    case SynthesisResult::Realized:
      return "Realized";
    case SynthesisResult::ExhaustedBounds:
      return "ExhaustedBounds";
    case SynthesisResult::SolverFailure:
      return "SolverError";
    case SynthesisResult::InternalError:
      return "InternalError";
  }
  return "?";
}

namespace {

void check_fresh(const Architecture& a, const std::vector<const Formula*>& fs, const std::string& color) {
  if (a.propositions().count(color)) throw std::invalid_argument("color '" + color + "' is a proposition of the architecture");
  for (const auto* f : fs) {
    if (atoms(*f).count(color)) throw std::invalid_argument("color '" + color + "' occurs in the specification");
  }
}

void check_atoms(const Architecture& a, const Formula& f) {
  const auto props = a.propositions();
  for (const auto& at : atoms(f)) {
    if (!props.count(at)) throw std::invalid_argument("specification refers to '" + at + "', which no process outputs");
  }
}

// Shared loop over bound families: `build` encodes one family, `accept`
// decodes and verifies a Sat answer.
template <class Build, class Accept>
SynthesisResult bounded_search(const std::vector<BoundFamily>& families, const SynthOptions& opt, Build build,
                               Accept accept) {
  SynthesisResult res;
  const auto deadline = std::chrono::steady_clock::now() + opt.timeout;
  bool incomplete = false;
  for (const auto& fam : families) {
    Attempt at;
    at.bounds = fam;
    const auto t0 = std::chrono::steady_clock::now();
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - t0);
    if (left.count() <= 0) {
      at.outcome = "unknown: time budget exhausted";
      res.attempts.push_back(at);
      incomplete = true;
      break;
    }
    std::string script;
    try {
      script = build(fam, at);
    } catch (const EncodingLimit& e) {
      at.outcome = std::string("unknown: ") + e.what();
      at.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      res.attempts.push_back(at);
      incomplete = true;
      continue;
    }
    at.script_bytes = script.size();
    if (opt.on_script) opt.on_script(fam, script);
    SolveResult sr;
    try {
      sr = solve(script, opt.solver, left);
    } catch (const SolverError& e) {
      at.outcome = std::string("error: ") + e.what();
      res.attempts.push_back(at);
      res.status = SynthesisResult::SolverFailure;
      res.message = e.what();
      return res;
    }
    at.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (sr.status == SolveResult::Unsat) {
      at.outcome = "unsat";
      res.attempts.push_back(at);
      continue;
    }
    if (sr.status == SolveResult::Unknown) {
      at.outcome = "unknown: " + sr.reason;
      res.attempts.push_back(at);
      incomplete = true;
      continue;
    }
    at.outcome = "sat";
    res.attempts.push_back(at);
    accept(fam, sr, res);
    return res;
  }
  if (incomplete) {
    res.status = SynthesisResult::SolverFailure;
    res.message = "some bound families were not decided";
  } else {
    res.status = SynthesisResult::ExhaustedBounds;
  }
  return res;
}

}  // namespace

SynthesisResult synth_sync_prompt(const Architecture& a, const Formula& f, const SynthOptions& opt) {
  validate(a);
  if (!is_prompt_ltl(f)) throw std::invalid_argument("synchronous synthesis expects a PROMPT-LTL formula");
  check_atoms(a, f);
  check_fresh(a, {&f}, opt.r);
  const Architecture ar = color_extend(a, opt.r);
  const std::vector<std::string> inputs(a.env.outputs.begin(), a.env.outputs.end());
  const auto outs = ar.system_outputs();
  const std::vector<std::string> outputs(outs.begin(), outs.end());
  const Nba n = reduce(ltl_to_nba(negate(colorize(f, opt.r))));
  const StateAwareUct u = dualize(n, inputs, outputs);

  return bounded_search(
      enumerate_bounds(ar.processes.size(), opt.cap_total), opt,
      [&](const BoundFamily& fam, Attempt& at) {
        at.automaton_states = u.states();
        return encode(u, ar, fam, false, opt.encoding);
      },
      [&](const BoundFamily& fam, const SolveResult& sr, SynthesisResult& res) {
        try {
          auto dec = decode_model(sr.values, ar, fam);
          const auto global = compose(ar, dec.processes);
          if (!check_acceptance(u, global)) {
            res.status = SynthesisResult::InternalError;
            res.message = "decoded implementation is rejected by the automaton";
            return;
          }
          const std::string color_name = color_process(opt.r);
          res.color = dec.processes.at(color_name);
          dec.processes.erase(color_name);
          const auto product = compose(a, dec.processes);
          if (!prompt_model_check(product, f, {opt.r, opt.r2}).holds) {
            res.status = SynthesisResult::InternalError;
            res.message = "decoded implementation fails model checking";
            return;
          }
          res.processes = std::move(dec.processes);
          res.prompt_bound = realized_prompt_bound(*res.color);
          res.status = SynthesisResult::Realized;
          if (dec.defaulted) res.message = std::to_string(dec.defaulted) + " model points defaulted";
        } catch (const std::exception& e) {
          res.status = SynthesisResult::InternalError;
          res.message = e.what();
        }
      });
}

SynthesisResult synth_sync_pltl(const Architecture& a, const Formula& f, const SynthOptions& opt) {
  if (!is_well_formed(f)) throw std::invalid_argument("PLTL formula is not well-formed");
  auto res = synth_sync_prompt(a, pltl_to_prompt(f), opt);
  if (res.status == SynthesisResult::Realized) {
    const auto vars = var_sets(f);
    for (const auto& x : vars.f) res.valuation[x] = *res.prompt_bound;
    for (const auto& y : vars.g) res.valuation[y] = 0;
  }
  return res;
}

SynthesisResult synth_async_ag(const Architecture& a, const Formula& assumption, const Formula& guarantee,
                               const SynthOptions& opt) {
  const Architecture lifted = is_async_lifted(a) ? a : async_lift(a);
  validate(lifted);
  for (const auto* f : {&assumption, &guarantee}) {
    if (!is_prompt_ltl(*f)) throw std::invalid_argument("assume-guarantee synthesis expects PROMPT-LTL formulas");
    check_atoms(lifted, *f);
  }
  if (opt.r == opt.r2) throw std::invalid_argument("the two colors must differ");
  check_fresh(lifted, {&assumption, &guarantee}, opt.r);
  check_fresh(lifted, {&assumption, &guarantee}, opt.r2);

  const Formula spec_formula = Formula::conj(
      Formula::conj(alt_color(opt.r2), negate(rel_color(guarantee, opt.r2))), colorize(assumption, opt.r));
  const Nba spec = reduce(ltl_to_nba(spec_formula));
  std::vector<std::string> dirs(lifted.env.outputs.begin(), lifted.env.outputs.end());
  dirs.push_back(opt.r);
  dirs.push_back(opt.r2);
  const auto outs = lifted.system_outputs();
  const std::vector<std::string> outputs(outs.begin(), outs.end());
  std::optional<StateAwareUct> u;

  return bounded_search(
      enumerate_bounds(lifted.processes.size(), opt.cap_total), opt,
      [&](const BoundFamily& fam, Attempt& at) {
        std::size_t b = 1;
        for (auto x : fam) b *= x;
        u = dualize(compose_spec_pump(spec, b, opt.r, opt.r2), dirs, outputs);
        at.automaton_states = u->states();
        return encode(*u, lifted, fam, true, opt.encoding);
      },
      [&](const BoundFamily& fam, const SolveResult& sr, SynthesisResult& res) {
        try {
          auto dec = decode_model(sr.values, lifted, fam);
          for (const auto& p : lifted.processes) {
            if (!respects_scheduling(dec.processes.at(p.name), sched_prop(p.name))) {
              res.status = SynthesisResult::InternalError;
              res.message = "process " + p.name + " moves while unscheduled";
              return;
            }
          }
          const auto global = compose(lifted, dec.processes);
          if (!check_acceptance(*u, global)) {
            res.status = SynthesisResult::InternalError;
            res.message = "decoded implementation is rejected by the automaton";
            return;
          }
          if (!ag_model_check(global, assumption, guarantee, {opt.r, opt.r2}).holds) {
            res.status = SynthesisResult::InternalError;
            res.message = "decoded implementation fails assume-guarantee model checking";
            return;
          }
          res.processes = std::move(dec.processes);
          res.status = SynthesisResult::Realized;
          if (dec.defaulted) res.message = std::to_string(dec.defaulted) + " model points defaulted";
        } catch (const std::exception& e) {
          res.status = SynthesisResult::InternalError;
          res.message = e.what();
        }
      });
}

}  // namespace plts
