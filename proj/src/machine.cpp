#include "plts/machine.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <stdexcept>

namespace plts {

void TransitionSystem::check() const {
  if (inputs.size() > 20) throw std::invalid_argument("too many input propositions");
  if (outputs.size() > max_props) throw std::invalid_argument("too many output propositions");
  if (label.empty()) throw std::invalid_argument("transition system has no states");
  if (init >= states()) throw std::invalid_argument("initial state out of range");
  if (delta.size() != states() * letters()) throw std::invalid_argument("transition function is not total");
  for (auto t : delta) {
    if (t >= states()) throw std::invalid_argument("transition target out of range");
  }
  const Letter mask = outputs.size() == max_props ? ~Letter{0} : (Letter{1} << outputs.size()) - 1;
  for (auto l : label) {
    if (l & ~mask) throw std::invalid_argument("label uses an undeclared output");
  }
  for (const auto& i : inputs) {
    if (prop_index(outputs, i)) throw std::invalid_argument("'" + i + "' is both input and output");
  }
  std::set<std::string> seen;
  for (const auto* props : {&inputs, &outputs}) {
    for (const auto& p : *props) {
      if (!seen.insert(p).second) throw std::invalid_argument("duplicate proposition '" + p + "'");
    }
  }
}

Letter run_output(const TransitionSystem& ts, const std::vector<Letter>& prefix) {
  std::size_t s = ts.init;
  for (Letter i : prefix) s = ts.next(s, i);
  return ts.label[s];
}

TransitionSystem widen(const TransitionSystem& ts, const std::vector<std::string>& extra) {
  for (const auto& e : extra) {
    if (prop_index(ts.inputs, e)) throw std::invalid_argument("widening proposition '" + e + "' is already an input");
  }
  TransitionSystem out = ts;
  out.inputs.insert(out.inputs.end(), extra.begin(), extra.end());
  out.delta.assign(out.states() * out.letters(), 0);
  const Letter low = ts.letters() - 1;
  for (std::size_t s = 0; s < out.states(); ++s) {
    for (Letter i = 0; i < out.letters(); ++i) out.delta[s * out.letters() + i] = ts.next(s, i & low);
  }
  out.check();
  return out;
}

TransitionSystem distributed_product(const TransitionSystem& ts1, const TransitionSystem& ts2) {
  for (const auto& o : ts2.outputs) {
    if (prop_index(ts1.outputs, o)) throw std::invalid_argument("outputs overlap on '" + o + "'");
  }
  TransitionSystem out;
  out.inputs = ts1.inputs;
  for (const auto& i : ts2.inputs) {
    if (!prop_index(out.inputs, i)) out.inputs.push_back(i);
  }
  out.outputs = ts1.outputs;
  out.outputs.insert(out.outputs.end(), ts2.outputs.begin(), ts2.outputs.end());

  const LetterMap to1(out.inputs, ts1.inputs);
  const LetterMap to2(out.inputs, ts2.inputs);
  const std::size_t n2 = ts2.states();
  out.init = ts1.init * n2 + ts2.init;
  out.label.resize(ts1.states() * n2);
  out.delta.resize(out.label.size() * out.letters());
  for (std::size_t s1 = 0; s1 < ts1.states(); ++s1) {
    for (std::size_t s2 = 0; s2 < n2; ++s2) {
      const std::size_t s = s1 * n2 + s2;
      out.label[s] = ts1.label[s1] | (ts2.label[s2] << ts1.outputs.size());
      for (Letter i = 0; i < out.letters(); ++i) {
        out.delta[s * out.letters() + i] = ts1.next(s1, to1(i)) * n2 + ts2.next(s2, to2(i));
      }
    }
  }
  out.check();
  return out;
}

std::vector<std::size_t> reachable_states(const TransitionSystem& ts) {
  std::vector<char> seen(ts.states(), 0);
  std::deque<std::size_t> queue{ts.init};
  seen[ts.init] = 1;
  while (!queue.empty()) {
    const auto s = queue.front();
    queue.pop_front();
    for (Letter i = 0; i < ts.letters(); ++i) {
      const auto t = ts.next(s, i);
      if (!seen[t]) {
        seen[t] = 1;
        queue.push_back(t);
      }
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s < ts.states(); ++s) {
    if (seen[s]) out.push_back(s);
  }
  return out;
}

bool respects_scheduling(const TransitionSystem& ts, const std::string& sched) {
  const auto bit = prop_index(ts.inputs, sched);
  if (!bit) throw std::invalid_argument("'" + sched + "' is not an input");
  for (auto s : reachable_states(ts)) {
    for (Letter i = 0; i < ts.letters(); ++i) {
      if (!((i >> *bit) & 1U) && ts.next(s, i) != s) return false;
    }
  }
  return true;
}

LassoWord trace(const TransitionSystem& ts, const LassoWord& input) {
  input.check();
  const LetterMap in(input.props, ts.inputs);
  const std::size_t shift = ts.inputs.size();
  LassoWord out;
  out.props = ts.inputs;
  out.props.insert(out.props.end(), ts.outputs.begin(), ts.outputs.end());

  std::size_t s = ts.init;
  for (Letter l : input.stem) {
    const Letter i = in(l);
    out.stem.push_back(i | (ts.label[s] << shift));
    s = ts.next(s, i);
  }
  // unroll the input loop until the state at its start repeats
  std::vector<std::size_t> starts;
  std::vector<Letter> unrolled;
  while (std::find(starts.begin(), starts.end(), s) == starts.end()) {
    starts.push_back(s);
    for (Letter l : input.loop) {
      const Letter i = in(l);
      unrolled.push_back(i | (ts.label[s] << shift));
      s = ts.next(s, i);
    }
  }
  const std::size_t first = std::find(starts.begin(), starts.end(), s) - starts.begin();
  const std::size_t cut = first * input.loop.size();
  out.stem.insert(out.stem.end(), unrolled.begin(), unrolled.begin() + cut);
  out.loop.assign(unrolled.begin() + cut, unrolled.end());
  return canonical(out);
}

std::set<LassoWord> traces(const TransitionSystem& ts, std::size_t max_stem, std::size_t max_loop) {
  std::set<LassoWord> out;
  LassoWord input;
  input.props = ts.inputs;
  const Letter letters = ts.letters();
  // odometer over letter sequences of a fixed length
  auto sequences = [&](std::size_t len, auto&& fn) {
    std::vector<Letter> v(len, 0);
    while (true) {
      fn(v);
      std::size_t k = 0;
      while (k < len && ++v[k] == letters) v[k++] = 0;
      if (k == len) break;
    }
  };
  for (std::size_t s = 0; s <= max_stem; ++s) {
    for (std::size_t l = 1; l <= max_loop; ++l) {
      sequences(s, [&](const std::vector<Letter>& stem) {
        input.stem = stem;
        sequences(l, [&](const std::vector<Letter>& loop) {
          input.loop = loop;
          out.insert(trace(ts, input));
        });
      });
    }
  }
  return out;
}

TransitionSystem compose(const Architecture& a, const std::map<std::string, TransitionSystem>& locals) {
  validate(a);
  TransitionSystem out;
  out.inputs.assign(a.env.outputs.begin(), a.env.outputs.end());

  // global visible letter: env outputs, then each process's outputs in order
  std::vector<std::string> all = out.inputs;
  std::vector<const TransitionSystem*> ts;
  std::vector<std::size_t> radix;
  std::size_t total = 1;
  for (const auto& p : a.processes) {
    auto it = locals.find(p.name);
    if (it == locals.end()) throw std::invalid_argument("no implementation for process " + p.name);
    const auto& t = it->second;
    t.check();
    if (std::set<std::string>(t.inputs.begin(), t.inputs.end()) != p.inputs ||
        std::set<std::string>(t.outputs.begin(), t.outputs.end()) != p.outputs) {
      throw std::invalid_argument("implementation of " + p.name + " does not match its interface");
    }
    ts.push_back(&t);
    radix.push_back(total);
    total *= t.states();
    if (total > (std::size_t{1} << 24)) throw std::invalid_argument("global state space too large");
    out.outputs.insert(out.outputs.end(), t.outputs.begin(), t.outputs.end());
  }
  all.insert(all.end(), out.outputs.begin(), out.outputs.end());

  std::vector<LetterMap> visible;
  std::vector<LetterMap> own_labels;
  for (const auto* t : ts) {
    visible.emplace_back(all, t->inputs);
    own_labels.emplace_back(t->outputs, all);
  }
  const LetterMap outputs_part(all, out.outputs);

  out.label.resize(total);
  out.delta.resize(total * out.letters());
  std::vector<std::size_t> local(ts.size());
  for (std::size_t g = 0; g < total; ++g) {
    Letter labels = 0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
      local[k] = (g / radix[k]) % ts[k]->states();
      labels |= own_labels[k](ts[k]->label[local[k]]);
    }
    out.label[g] = outputs_part(labels);
    for (Letter i = 0; i < out.letters(); ++i) {
      const Letter seen = i | labels;
      std::size_t next = 0;
      for (std::size_t k = 0; k < ts.size(); ++k) next += ts[k]->next(local[k], visible[k](seen)) * radix[k];
      out.delta[g * out.letters() + i] = next;
    }
  }
  std::size_t init = 0;
  for (std::size_t k = 0; k < ts.size(); ++k) init += ts[k]->init * radix[k];
  out.init = init;
  out.check();
  return out;
}

std::string to_dot(const TransitionSystem& ts) {
  std::ostringstream os;
  os << "digraph ts {\n  init [shape=point];\n  init -> s" << ts.init << ";\n";
  for (std::size_t s = 0; s < ts.states(); ++s) {
    os << "  s" << s << " [label=\"" << s << "\\n" << letter_to_string(ts.outputs, ts.label[s]) << "\"];\n";
    for (Letter i = 0; i < ts.letters(); ++i) {
      os << "  s" << s << " -> s" << ts.next(s, i) << " [label=\"" << letter_to_string(ts.inputs, i) << "\"];\n";
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace plts
