#include "plts/word.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace plts {

LetterMap::LetterMap(const std::vector<std::string>& from, const std::vector<std::string>& to)
    : target_bit_(from.size(), -1) {
  for (std::size_t i = 0; i < from.size(); ++i) {
    if (auto j = prop_index(to, from[i])) target_bit_[i] = static_cast<int>(*j);
  }
}

Letter LetterMap::operator()(Letter l) const {
  Letter out = 0;
  for (std::size_t i = 0; i < target_bit_.size(); ++i) {
    if ((l >> i) & 1U && target_bit_[i] >= 0) out |= Letter{1} << target_bit_[i];
  }
  return out;
}

std::optional<std::size_t> prop_index(const std::vector<std::string>& props, const std::string& name) {
  auto it = std::find(props.begin(), props.end(), name);
  if (it == props.end()) return std::nullopt;
  return static_cast<std::size_t>(it - props.begin());
}

Letter letter_of(const std::vector<std::string>& props, const std::set<std::string>& names) {
  Letter l = 0;
  for (const auto& n : names) {
    auto i = prop_index(props, n);
    if (!i) throw std::invalid_argument("proposition '" + n + "' is not in the alphabet");
    l |= Letter{1} << *i;
  }
  return l;
}

std::set<std::string> names_of(const std::vector<std::string>& props, Letter l) {
  std::set<std::string> out;
  for (std::size_t i = 0; i < props.size(); ++i) {
    if ((l >> i) & 1U) out.insert(props[i]);
  }
  return out;
}

std::string letter_to_string(const std::vector<std::string>& props, Letter l) {
  std::string s = "{";
  bool first = true;
  for (const auto& n : names_of(props, l)) {
    if (!first) s += ",";
    s += n;
    first = false;
  }
  return s + "}";
}

LassoWord LassoWord::from_sets(std::vector<std::string> props,
                               const std::vector<std::set<std::string>>& stem,
                               const std::vector<std::set<std::string>>& loop) {
  LassoWord w;
  w.props = std::move(props);
  for (const auto& s : stem) w.stem.push_back(letter_of(w.props, s));
  for (const auto& s : loop) w.loop.push_back(letter_of(w.props, s));
  w.check();
  return w;
}

Letter LassoWord::letter(std::size_t n) const {
  if (n < stem.size()) return stem[n];
  return loop[(n - stem.size()) % loop.size()];
}

void LassoWord::check() const {
  if (loop.empty()) throw std::invalid_argument("lasso loop must be nonempty");
  if (props.size() > max_props) throw std::invalid_argument("too many propositions");
  const Letter mask = props.size() == max_props ? ~Letter{0} : (Letter{1} << props.size()) - 1;
  for (Letter l : stem) {
    if (l & ~mask) throw std::invalid_argument("letter uses an undeclared proposition");
  }
  for (Letter l : loop) {
    if (l & ~mask) throw std::invalid_argument("letter uses an undeclared proposition");
  }
}

LassoWord canonical(const LassoWord& w) {
  w.check();
  LassoWord out = w;
  // primitive loop
  const std::size_t n = out.loop.size();
  for (std::size_t p = 1; p <= n; ++p) {
    if (n % p != 0) continue;
    bool periodic = true;
    for (std::size_t i = p; i < n && periodic; ++i) periodic = out.loop[i] == out.loop[i - p];
    if (periodic) {
      out.loop.resize(p);
      break;
    }
  }
  // roll the loop back into the stem while possible
  while (!out.stem.empty() && out.stem.back() == out.loop.back()) {
    out.stem.pop_back();
    std::rotate(out.loop.rbegin(), out.loop.rbegin() + 1, out.loop.rend());
  }
  return out;
}

LassoWord project(const LassoWord& w, const std::vector<std::string>& props) {
  LetterMap map(w.props, props);
  LassoWord out;
  out.props = props;
  for (Letter l : w.stem) out.stem.push_back(map(l));
  for (Letter l : w.loop) out.loop.push_back(map(l));
  return out;
}

std::string to_string(const LassoWord& w) {
  std::ostringstream os;
  os << "stem:";
  for (Letter l : w.stem) os << ' ' << letter_to_string(w.props, l);
  os << " loop:";
  for (Letter l : w.loop) os << ' ' << letter_to_string(w.props, l);
  return os.str();
}

ColoringProperties coloring_properties(const LassoWord& w, const std::string& r) {
  w.check();
  auto idx = prop_index(w.props, r);
  if (!idx) throw std::invalid_argument("color '" + r + "' is not in the alphabet");
  auto color = [&](std::size_t n) { return ((w.letter(n) >> *idx) & 1U) != 0; };

  ColoringProperties out;
  for (std::size_t i = 0; i < w.loop.size() && !out.changes_infinitely; ++i) {
    out.changes_infinitely = color(w.stem.size() + i) != color(w.stem.size() + (i + 1) % w.loop.size());
  }
  if (!out.changes_infinitely) return out;

  // Every block of the infinite word shows up completely within stem plus two
  // loop unrollings: periodic blocks are shorter than one loop period.
  const std::size_t horizon = w.stem.size() + 2 * w.loop.size();
  std::size_t start = 0;
  for (std::size_t n = 1; n <= horizon; ++n) {
    if (color(n) != color(n - 1)) {
      const std::size_t len = n - start;
      out.bounded_for = std::max(out.bounded_for.value_or(0), len);
      out.spaced_for = std::min(out.spaced_for.value_or(len), len);
      start = n;
    }
  }
  return out;
}

}  // namespace plts
