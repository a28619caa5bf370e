#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "plts/word.hpp"

namespace plts {

enum class Op {
  True,
  False,
  Atom,
  NegAtom,
  And,
  Or,
  Next,
  Until,
  Release,
  PromptF,
  BoundedF,
  BoundedG,
};

/// Immutable formula in negation normal form. Copies share structure.
class Formula {
 public:
  static Formula tt();
  static Formula ff();
  static Formula atom(const std::string& name);
  static Formula neg_atom(const std::string& name);
  static Formula conj(Formula l, Formula r);
  static Formula disj(Formula l, Formula r);
  static Formula next(Formula f);
  static Formula until(Formula l, Formula r);
  static Formula release(Formula l, Formula r);
  static Formula prompt_f(Formula f);
  static Formula bounded_f(const std::string& var, Formula f);
  static Formula bounded_g(const std::string& var, Formula f);

  // sugar, expanded on construction
  static Formula eventually(Formula f) { return until(tt(), std::move(f)); }
  static Formula globally(Formula f) { return release(ff(), std::move(f)); }

  Op op() const { return node_->op; }
  /// Atom name for Atom/NegAtom, variable for BoundedF/BoundedG, empty otherwise.
  const std::string& name() const { return node_->name; }
  /// Operand of unary operators, left operand of binary ones.
  const Formula& left() const { return *node_->left; }
  const Formula& right() const { return *node_->right; }
  std::size_t hash() const { return node_->hash; }

  bool is_unary() const;
  bool is_binary() const;

  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator<(const Formula& a, const Formula& b);

 private:
  struct Node {
    Op op;
    std::string name;
    std::unique_ptr<Formula> left;
    std::unique_ptr<Formula> right;
    std::size_t hash;
  };
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Formula make(Op op, std::string name, const Formula* l, const Formula* r);

  std::shared_ptr<const Node> node_;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t pos)
      : std::runtime_error(what + " at offset " + std::to_string(pos)), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

/// Parses the concrete syntax into NNF. Throws ParseError.
Formula parse(const std::string& text);

/// Fully parenthesized concrete syntax; parse(to_string(f)) == f.
std::string to_string(const Formula& f);

/// NNF negation. Throws std::invalid_argument on Fp, F<=x or G<=y.
Formula negate(const Formula& f);

bool is_parameter_free(const Formula& f);  ///< no Fp, F<=x, G<=y
bool is_prompt_ltl(const Formula& f);      ///< no F<=x, G<=y
inline bool is_ltl(const Formula& f) { return is_parameter_free(f); }

/// Number of distinct subformulas.
std::size_t size(const Formula& f);
std::vector<Formula> subformulas(const Formula& f);  ///< distinct, children before parents
std::set<std::string> atoms(const Formula& f);

struct VarSets {
  std::set<std::string> f;  ///< variables of F<=x
  std::set<std::string> g;  ///< variables of G<=y
};
VarSets var_sets(const Formula& f);
bool is_well_formed(const Formula& f);

/// Bound k for Fp and a natural per PLTL variable.
struct Valuation {
  std::size_t k = 0;
  std::map<std::string, std::size_t> vars;
};

/// Exact evaluation on lasso words. Compiles the formula once so that it can be
/// evaluated on many words over the same proposition list.
class Evaluator {
 public:
  explicit Evaluator(const Formula& f);

  /// Truth at position 0. Throws std::invalid_argument on unknown atoms or
  /// unbound variables.
  bool operator()(const LassoWord& w, const Valuation& v) const;
  /// Truth at every position 0..|stem|+|loop|-1.
  std::vector<char> positions(const LassoWord& w, const Valuation& v) const;

 private:
  struct Step {
    Op op;
    std::string name;
    int left = -1;
    int right = -1;
  };
  std::vector<Step> steps_;
};

bool evaluate(const LassoWord& w, const Formula& f, const Valuation& v);
inline bool evaluate(const LassoWord& w, const Formula& f, std::size_t k) { return evaluate(w, f, Valuation{k, {}}); }

/// Replaces every Fp psi by "psi within at most one change of r".
/// Throws std::invalid_argument if r occurs in f or f is not PROMPT-LTL.
Formula rel_color(const Formula& f, const std::string& r);
/// GF r & GF !r
Formula alt_color(const std::string& r);
/// rel_color(f, r) & alt_color(r)
Formula colorize(const Formula& f, const std::string& r);
/// F<=x psi becomes Fp psi, G<=y psi becomes psi. Throws std::invalid_argument
/// if f is not well-formed.
Formula pltl_to_prompt(const Formula& f);

}  // namespace plts
