#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace plts {

/// A letter is a set of propositions, stored as a bitmask over an ordered
/// proposition list (bit i <-> props[i]).
using Letter = std::uint64_t;

inline constexpr std::size_t max_props = 64;

/// Bit mapping that carries letters from one proposition list to another.
/// Propositions absent from the target list are dropped.
class LetterMap {
 public:
  LetterMap(const std::vector<std::string>& from, const std::vector<std::string>& to);

  Letter operator()(Letter l) const;

 private:
  std::vector<int> target_bit_;
};

std::optional<std::size_t> prop_index(const std::vector<std::string>& props, const std::string& name);

Letter letter_of(const std::vector<std::string>& props, const std::set<std::string>& names);
std::set<std::string> names_of(const std::vector<std::string>& props, Letter l);
std::string letter_to_string(const std::vector<std::string>& props, Letter l);

/// Ultimately periodic word stem . loop^omega over a declared proposition list.
struct LassoWord {
  std::vector<std::string> props;
  std::vector<Letter> stem;
  std::vector<Letter> loop;

  static LassoWord from_sets(std::vector<std::string> props,
                             const std::vector<std::set<std::string>>& stem,
                             const std::vector<std::set<std::string>>& loop);

  std::size_t positions() const { return stem.size() + loop.size(); }
  Letter at(std::size_t pos) const { return pos < stem.size() ? stem[pos] : loop[pos - stem.size()]; }
  std::size_t succ(std::size_t pos) const { return pos + 1 < positions() ? pos + 1 : stem.size(); }
  /// Letter at an arbitrary position of the infinite word.
  Letter letter(std::size_t n) const;

  /// Throws std::invalid_argument when the loop is empty or a letter uses
  /// bits beyond the proposition list.
  void check() const;

  friend bool operator==(const LassoWord&, const LassoWord&) = default;
  friend auto operator<=>(const LassoWord&, const LassoWord&) = default;
};

/// Shortest stem and primitive loop describing the same infinite word.
LassoWord canonical(const LassoWord& w);

/// Re-expresses a word over another proposition list; propositions not listed
/// there are dropped.
LassoWord project(const LassoWord& w, const std::vector<std::string>& props);

std::string to_string(const LassoWord& w);

/// Block structure of the r-coloring carried by a word.
struct ColoringProperties {
  std::optional<std::size_t> bounded_for;  ///< maximal r-block length, if colors change infinitely often
  std::optional<std::size_t> spaced_for;   ///< minimal r-block length, if colors change infinitely often
  bool changes_infinitely = false;
};

ColoringProperties coloring_properties(const LassoWord& w, const std::string& r);

}  // namespace plts
