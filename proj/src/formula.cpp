#include "plts/formula.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <regex>
#include <unordered_map>
#include <unordered_set>

namespace plts {

namespace {

std::size_t fnv(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h);
}

std::size_t mix(std::size_t a, std::size_t b) { return a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2)); }

bool is_operator_chain(const std::string& id) {
  static const std::regex chain("^(X|G|Fp|F)+$");
  return std::regex_match(id, chain);
}

bool is_reserved(const std::string& id) {
  return id == "true" || id == "false" || id == "U" || id == "R" || is_operator_chain(id);
}

void check_name(const std::string& id, const char* what) {
  static const std::regex ident("^[A-Za-z_][A-Za-z0-9_]*$");
  if (!std::regex_match(id, ident) || is_reserved(id)) {
    throw std::invalid_argument(std::string("invalid ") + what + " name '" + id + "'");
  }
}

}  // namespace

Formula Formula::make(Op op, std::string name, const Formula* l, const Formula* r) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->hash = mix(static_cast<std::size_t>(op) + 1, fnv(name));
  n->name = std::move(name);
  if (l) {
    n->left = std::make_unique<Formula>(*l);
    n->hash = mix(n->hash, l->hash());
  }
  if (r) {
    n->right = std::make_unique<Formula>(*r);
    n->hash = mix(n->hash, r->hash());
  }
  return Formula(std::move(n));
}

Formula Formula::tt() {
  static const Formula t = make(Op::True, "", nullptr, nullptr);
  return t;
}
Formula Formula::ff() {
  static const Formula f = make(Op::False, "", nullptr, nullptr);
  return f;
}
Formula Formula::atom(const std::string& name) {
  check_name(name, "atom");
  return make(Op::Atom, name, nullptr, nullptr);
}
Formula Formula::neg_atom(const std::string& name) {
  check_name(name, "atom");
  return make(Op::NegAtom, name, nullptr, nullptr);
}
Formula Formula::conj(Formula l, Formula r) { return make(Op::And, "", &l, &r); }
Formula Formula::disj(Formula l, Formula r) { return make(Op::Or, "", &l, &r); }
Formula Formula::next(Formula f) { return make(Op::Next, "", &f, nullptr); }
Formula Formula::until(Formula l, Formula r) { return make(Op::Until, "", &l, &r); }
Formula Formula::release(Formula l, Formula r) { return make(Op::Release, "", &l, &r); }
Formula Formula::prompt_f(Formula f) { return make(Op::PromptF, "", &f, nullptr); }
Formula Formula::bounded_f(const std::string& var, Formula f) {
  check_name(var, "variable");
  return make(Op::BoundedF, var, &f, nullptr);
}
Formula Formula::bounded_g(const std::string& var, Formula f) {
  check_name(var, "variable");
  return make(Op::BoundedG, var, &f, nullptr);
}

bool Formula::is_unary() const {
  switch (op()) {
    case Op::Next:
    case Op::PromptF:
    case Op::BoundedF:
    case Op::BoundedG:
      return true;
    default:
      return false;
  }
}

bool Formula::is_binary() const {
  switch (op()) {
    case Op::And:
    case Op::Or:
    case Op::Until:
    case Op::Release:
      return true;
    default:
      return false;
  }
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.op() != b.op() || a.name() != b.name()) return false;
  if (a.is_unary() || a.is_binary()) {
    if (!(a.left() == b.left())) return false;
  }
  if (a.is_binary()) return a.right() == b.right();
  return true;
}

bool operator<(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return false;
  if (a.op() != b.op()) return a.op() < b.op();
  if (a.name() != b.name()) return a.name() < b.name();
  if (a.is_unary() || a.is_binary()) {
    if (a.left() < b.left()) return true;
    if (b.left() < a.left()) return false;
  }
  if (a.is_binary()) return a.right() < b.right();
  return false;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

enum class Tok { Ident, True, False, Not, And, Or, Implies, Until, Release, LParen, RParen, Unary, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
  // Unary: one operator, Op::Next / Until (for F) / Release (for G) / PromptF /
  // BoundedF / BoundedG; text holds the variable for the bounded forms.
  Op unary = Op::True;
};

std::vector<Token> lex(const std::string& s) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto ident_char = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < s.size() && ident_char(s[i])) ++i;
      std::string id = s.substr(start, i - start);
      if (id == "true") {
        out.push_back({Tok::True, id, start});
      } else if (id == "false") {
        out.push_back({Tok::False, id, start});
      } else if (id == "U") {
        out.push_back({Tok::Until, id, start});
      } else if (id == "R") {
        out.push_back({Tok::Release, id, start});
      } else if (is_operator_chain(id)) {
        std::size_t j = 0;
        while (j < id.size()) {
          Token t{Tok::Unary, "", start + j};
          if (id[j] == 'X') {
            t.unary = Op::Next;
            ++j;
          } else if (id[j] == 'G') {
            t.unary = Op::Release;
            ++j;
          } else if (id.compare(j, 2, "Fp") == 0) {
            t.unary = Op::PromptF;
            j += 2;
          } else {
            t.unary = Op::Until;
            ++j;
          }
          out.push_back(t);
        }
        // F<=x / G<=y binds to the last operator of the chain
        std::size_t k = i;
        while (k < s.size() && s[k] == ' ') ++k;
        Token& last = out.back();
        if ((last.unary == Op::Until || last.unary == Op::Release) && s.compare(k, 2, "<=") == 0) {
          k += 2;
          while (k < s.size() && std::isspace(static_cast<unsigned char>(s[k]))) ++k;
          const std::size_t vstart = k;
          if (k >= s.size() || !(std::isalpha(static_cast<unsigned char>(s[k])) || s[k] == '_')) {
            throw ParseError("expected variable after '<='", k);
          }
          while (k < s.size() && ident_char(s[k])) ++k;
          last.text = s.substr(vstart, k - vstart);
          if (is_reserved(last.text)) throw ParseError("reserved word used as variable", vstart);
          last.unary = last.unary == Op::Until ? Op::BoundedF : Op::BoundedG;
          i = k;
        }
      } else {
        out.push_back({Tok::Ident, id, start});
      }
      continue;
    }
    switch (c) {
      case '!':
        out.push_back({Tok::Not, "!", start});
        ++i;
        break;
      case '&':
        out.push_back({Tok::And, "&", start});
        ++i;
        break;
      case '|':
        out.push_back({Tok::Or, "|", start});
        ++i;
        break;
      case '(':
        out.push_back({Tok::LParen, "(", start});
        ++i;
        break;
      case ')':
        out.push_back({Tok::RParen, ")", start});
        ++i;
        break;
      case '-':
        if (s.compare(i, 2, "->") != 0) throw ParseError("unexpected character '-'", i);
        out.push_back({Tok::Implies, "->", start});
        i += 2;
        break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", i);
    }
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

// Syntax tree before normalization: may contain negation and implication.
struct Raw {
  enum Kind { Const, Atom, Not, And, Or, Implies, Unary, Until, Release } kind;
  bool value = false;
  Op unary = Op::True;
  std::string name;
  std::size_t pos = 0;
  std::unique_ptr<Raw> l, r;
};

class Parser {
 public:
  explicit Parser(const std::string& s) : toks_(lex(s)) {}

  std::unique_ptr<Raw> run() {
    auto f = implication();
    if (peek().kind != Tok::End) throw ParseError("unexpected '" + peek().text + "'", peek().pos);
    return f;
  }

 private:
  const Token& peek() const { return toks_[i_]; }
  const Token& take() { return toks_[i_++]; }

  static std::unique_ptr<Raw> node(Raw::Kind k, std::size_t pos, std::unique_ptr<Raw> l = nullptr,
                                   std::unique_ptr<Raw> r = nullptr) {
    auto n = std::make_unique<Raw>();
    n->kind = k;
    n->pos = pos;
    n->l = std::move(l);
    n->r = std::move(r);
    return n;
  }

  std::unique_ptr<Raw> implication() {
    auto l = disjunction();
    if (peek().kind == Tok::Implies) {
      const std::size_t pos = take().pos;
      return node(Raw::Implies, pos, std::move(l), implication());
    }
    return l;
  }

  std::unique_ptr<Raw> disjunction() {
    auto l = conjunction();
    while (peek().kind == Tok::Or) {
      const std::size_t pos = take().pos;
      l = node(Raw::Or, pos, std::move(l), conjunction());
    }
    return l;
  }

  std::unique_ptr<Raw> conjunction() {
    auto l = binary_temporal();
    while (peek().kind == Tok::And) {
      const std::size_t pos = take().pos;
      l = node(Raw::And, pos, std::move(l), binary_temporal());
    }
    return l;
  }

  std::unique_ptr<Raw> binary_temporal() {
    auto l = unary();
    if (peek().kind == Tok::Until || peek().kind == Tok::Release) {
      const Token& t = take();
      return node(t.kind == Tok::Until ? Raw::Until : Raw::Release, t.pos, std::move(l), binary_temporal());
    }
    return l;
  }

  std::unique_ptr<Raw> unary() {
    const Token& t = peek();
    if (t.kind == Tok::Not) {
      take();
      return node(Raw::Not, t.pos, unary());
    }
    if (t.kind == Tok::Unary) {
      take();
      auto n = node(Raw::Unary, t.pos, unary());
      n->unary = t.unary;
      n->name = t.text;
      return n;
    }
    return primary();
  }

  std::unique_ptr<Raw> primary() {
    const Token& t = take();
    switch (t.kind) {
      case Tok::Ident: {
        auto n = node(Raw::Atom, t.pos);
        n->name = t.text;
        return n;
      }
      case Tok::True:
      case Tok::False: {
        auto n = node(Raw::Const, t.pos);
        n->value = t.kind == Tok::True;
        return n;
      }
      case Tok::LParen: {
        auto f = implication();
        if (peek().kind != Tok::RParen) throw ParseError("expected ')'", peek().pos);
        take();
        return f;
      }
      case Tok::End:
        throw ParseError("unexpected end of input", t.pos);
      default:
        throw ParseError("unexpected '" + t.text + "'", t.pos);
    }
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

bool raw_has_parameter(const Raw& r) {
  if (r.kind == Raw::Unary && (r.unary == Op::PromptF || r.unary == Op::BoundedF || r.unary == Op::BoundedG)) {
    return true;
  }
  return (r.l && raw_has_parameter(*r.l)) || (r.r && raw_has_parameter(*r.r));
}

Formula normalize(const Raw& r, bool neg) {
  switch (r.kind) {
    case Raw::Const:
      return (r.value != neg) ? Formula::tt() : Formula::ff();
    case Raw::Atom:
      return neg ? Formula::neg_atom(r.name) : Formula::atom(r.name);
    case Raw::Not:
      return normalize(*r.l, !neg);
    case Raw::And:
    case Raw::Or: {
      auto l = normalize(*r.l, neg);
      auto rr = normalize(*r.r, neg);
      return (r.kind == Raw::And) != neg ? Formula::conj(l, rr) : Formula::disj(l, rr);
    }
    case Raw::Implies: {
      if (raw_has_parameter(*r.l)) throw ParseError("non-negatable antecedent", r.pos);
      auto a = normalize(*r.l, !neg);
      auto b = normalize(*r.r, neg);
      return neg ? Formula::conj(a, b) : Formula::disj(a, b);
    }
    case Raw::Until:
    case Raw::Release: {
      auto l = normalize(*r.l, neg);
      auto rr = normalize(*r.r, neg);
      return (r.kind == Raw::Until) != neg ? Formula::until(l, rr) : Formula::release(l, rr);
    }
    case Raw::Unary:
      switch (r.unary) {
        case Op::Next:
          return Formula::next(normalize(*r.l, neg));
        case Op::Until:  // F
          return neg ? Formula::globally(normalize(*r.l, true)) : Formula::eventually(normalize(*r.l, false));
        case Op::Release:  // G
          return neg ? Formula::eventually(normalize(*r.l, true)) : Formula::globally(normalize(*r.l, false));
        default:
          if (neg) throw ParseError("negation over parameterized operator", r.pos);
          if (r.unary == Op::PromptF) return Formula::prompt_f(normalize(*r.l, false));
          if (r.unary == Op::BoundedF) return Formula::bounded_f(r.name, normalize(*r.l, false));
          return Formula::bounded_g(r.name, normalize(*r.l, false));
      }
  }
  throw std::logic_error("unreachable");
}

}  // namespace

Formula parse(const std::string& text) {
  Parser p(text);
  auto raw = p.run();
  return normalize(*raw, false);
}

std::string to_string(const Formula& f) {
  switch (f.op()) {
    case Op::True:
      return "true";
    case Op::False:
      return "false";
    case Op::Atom:
      return f.name();
    case Op::NegAtom:
      return "!" + f.name();
    case Op::And:
      return "(" + to_string(f.left()) + " & " + to_string(f.right()) + ")";
    case Op::Or:
      return "(" + to_string(f.left()) + " | " + to_string(f.right()) + ")";
    case Op::Next:
      return "X " + to_string(f.left());
    case Op::Until:
      if (f.left().op() == Op::True) return "F " + to_string(f.right());
      return "(" + to_string(f.left()) + " U " + to_string(f.right()) + ")";
    case Op::Release:
      if (f.left().op() == Op::False) return "G " + to_string(f.right());
      return "(" + to_string(f.left()) + " R " + to_string(f.right()) + ")";
    case Op::PromptF:
      return "Fp " + to_string(f.left());
    case Op::BoundedF:
      return "F<=" + f.name() + " " + to_string(f.left());
    case Op::BoundedG:
      return "G<=" + f.name() + " " + to_string(f.left());
  }
  throw std::logic_error("unreachable");
}

Formula negate(const Formula& f) {
  switch (f.op()) {
    case Op::True:
      return Formula::ff();
    case Op::False:
      return Formula::tt();
    case Op::Atom:
      return Formula::neg_atom(f.name());
    case Op::NegAtom:
      return Formula::atom(f.name());
    case Op::And:
      return Formula::disj(negate(f.left()), negate(f.right()));
    case Op::Or:
      return Formula::conj(negate(f.left()), negate(f.right()));
    case Op::Next:
      return Formula::next(negate(f.left()));
    case Op::Until:
      return Formula::release(negate(f.left()), negate(f.right()));
    case Op::Release:
      return Formula::until(negate(f.left()), negate(f.right()));
    default:
      throw std::invalid_argument("negation over parameterized operator");
  }
}

namespace {

bool any_node(const Formula& f, const std::function<bool(Op)>& pred) {
  if (pred(f.op())) return true;
  if (f.is_unary() || f.is_binary()) {
    if (any_node(f.left(), pred)) return true;
  }
  return f.is_binary() && any_node(f.right(), pred);
}

}  // namespace

bool is_parameter_free(const Formula& f) {
  return !any_node(f, [](Op o) { return o == Op::PromptF || o == Op::BoundedF || o == Op::BoundedG; });
}

bool is_prompt_ltl(const Formula& f) {
  return !any_node(f, [](Op o) { return o == Op::BoundedF || o == Op::BoundedG; });
}

std::vector<Formula> subformulas(const Formula& f) {
  std::vector<Formula> out;
  std::unordered_set<Formula, FormulaHash> seen;
  std::function<void(const Formula&)> visit = [&](const Formula& g) {
    if (seen.count(g)) return;
    if (g.is_unary() || g.is_binary()) visit(g.left());
    if (g.is_binary()) visit(g.right());
    seen.insert(g);
    out.push_back(g);
  };
  visit(f);
  return out;
}

std::size_t size(const Formula& f) { return subformulas(f).size(); }

std::set<std::string> atoms(const Formula& f) {
  std::set<std::string> out;
  for (const auto& g : subformulas(f)) {
    if (g.op() == Op::Atom || g.op() == Op::NegAtom) out.insert(g.name());
  }
  return out;
}

VarSets var_sets(const Formula& f) {
  VarSets out;
  for (const auto& g : subformulas(f)) {
    if (g.op() == Op::BoundedF) out.f.insert(g.name());
    if (g.op() == Op::BoundedG) out.g.insert(g.name());
  }
  return out;
}

bool is_well_formed(const Formula& f) {
  auto v = var_sets(f);
  return std::none_of(v.f.begin(), v.f.end(), [&](const std::string& x) { return v.g.count(x) > 0; });
}

// ---------------------------------------------------------------------------
// Evaluation

Evaluator::Evaluator(const Formula& f) {
  auto subs = subformulas(f);
  std::unordered_map<Formula, int, FormulaHash> index;
  for (const auto& g : subs) {
    Step s{g.op(), g.name()};
    if (g.is_unary() || g.is_binary()) s.left = index.at(g.left());
    if (g.is_binary()) s.right = index.at(g.right());
    index.emplace(g, static_cast<int>(steps_.size()));
    steps_.push_back(std::move(s));
  }
}

std::vector<char> Evaluator::positions(const LassoWord& w, const Valuation& v) const {
  w.check();
  const std::size_t n = w.positions();
  std::vector<std::vector<char>> sat(steps_.size(), std::vector<char>(n, 0));

  auto scan = [&](const std::vector<char>& child, std::size_t bound, bool exists) {
    // every position reachable from i is visited within n steps
    const std::size_t steps = std::min(bound, n);
    std::vector<char> out(n);
    for (std::size_t i = 0; i < n; ++i) {
      bool found = !exists;
      std::size_t p = i;
      for (std::size_t j = 0; j <= steps; ++j) {
        if (static_cast<bool>(child[p]) == exists) {
          found = exists;
          break;
        }
        p = w.succ(p);
      }
      out[i] = found;
    }
    return out;
  };
  auto variable = [&](const std::string& x) {
    auto it = v.vars.find(x);
    if (it == v.vars.end()) throw std::invalid_argument("unbound variable '" + x + "'");
    return it->second;
  };

  for (std::size_t idx = 0; idx < steps_.size(); ++idx) {
    const Step& s = steps_[idx];
    auto& out = sat[idx];
    switch (s.op) {
      case Op::True:
        std::fill(out.begin(), out.end(), 1);
        break;
      case Op::False:
        break;
      case Op::Atom:
      case Op::NegAtom: {
        auto bit = prop_index(w.props, s.name);
        if (!bit) throw std::invalid_argument("unknown atom '" + s.name + "'");
        for (std::size_t i = 0; i < n; ++i) {
          const bool holds = (w.at(i) >> *bit) & 1U;
          out[i] = holds == (s.op == Op::Atom);
        }
        break;
      }
      case Op::And:
        for (std::size_t i = 0; i < n; ++i) out[i] = sat[s.left][i] && sat[s.right][i];
        break;
      case Op::Or:
        for (std::size_t i = 0; i < n; ++i) out[i] = sat[s.left][i] || sat[s.right][i];
        break;
      case Op::Next:
        for (std::size_t i = 0; i < n; ++i) out[i] = sat[s.left][w.succ(i)];
        break;
      case Op::Until:
      case Op::Release: {
        // least (U) or greatest (R) fixpoint by backward sweeps
        const bool until = s.op == Op::Until;
        const auto& a = sat[s.left];
        const auto& b = sat[s.right];
        std::fill(out.begin(), out.end(), until ? 0 : 1);
        bool changed = true;
        while (changed) {
          changed = false;
          for (std::size_t i = n; i-- > 0;) {
            const bool next = out[w.succ(i)];
            const char val = until ? (b[i] || (a[i] && next)) : (b[i] && (a[i] || next));
            if (val != out[i]) {
              out[i] = val;
              changed = true;
            }
          }
        }
        break;
      }
      case Op::PromptF:
        out = scan(sat[s.left], v.k, true);
        break;
      case Op::BoundedF:
        out = scan(sat[s.left], variable(s.name), true);
        break;
      case Op::BoundedG:
        out = scan(sat[s.left], variable(s.name), false);
        break;
    }
  }
  return sat.back();
}

bool Evaluator::operator()(const LassoWord& w, const Valuation& v) const { return positions(w, v)[0] != 0; }

bool evaluate(const LassoWord& w, const Formula& f, const Valuation& v) { return Evaluator(f)(w, v); }

// ---------------------------------------------------------------------------
// Rewrites

Formula alt_color(const std::string& r) {
  return Formula::conj(Formula::globally(Formula::eventually(Formula::atom(r))),
                       Formula::globally(Formula::eventually(Formula::neg_atom(r))));
}

Formula rel_color(const Formula& f, const std::string& r) {
  if (!is_prompt_ltl(f)) throw std::invalid_argument("rel_color expects a PROMPT-LTL formula");
  if (atoms(f).count(r)) throw std::invalid_argument("color '" + r + "' collides with an atom of the formula");
  const Formula pos = Formula::atom(r);
  const Formula neg = Formula::neg_atom(r);

  std::unordered_map<Formula, Formula, FormulaHash> memo;
  std::function<Formula(const Formula&)> go = [&](const Formula& g) -> Formula {
    if (auto it = memo.find(g); it != memo.end()) return it->second;
    Formula out = g;
    switch (g.op()) {
      case Op::And:
        out = Formula::conj(go(g.left()), go(g.right()));
        break;
      case Op::Or:
        out = Formula::disj(go(g.left()), go(g.right()));
        break;
      case Op::Until:
        out = Formula::until(go(g.left()), go(g.right()));
        break;
      case Op::Release:
        out = Formula::release(go(g.left()), go(g.right()));
        break;
      case Op::Next:
        out = Formula::next(go(g.left()));
        break;
      case Op::PromptF: {
        const Formula psi = go(g.left());
        // (r -> (r U (!r U psi))) & (!r -> (!r U (r U psi)))
        out = Formula::conj(Formula::disj(neg, Formula::until(pos, Formula::until(neg, psi))),
                            Formula::disj(pos, Formula::until(neg, Formula::until(pos, psi))));
        break;
      }
      default:
        break;
    }
    memo.emplace(g, out);
    return out;
  };
  return go(f);
}

Formula colorize(const Formula& f, const std::string& r) { return Formula::conj(rel_color(f, r), alt_color(r)); }

Formula pltl_to_prompt(const Formula& f) {
  if (!is_well_formed(f)) throw std::invalid_argument("formula is not well-formed");
  std::function<Formula(const Formula&)> go = [&](const Formula& g) -> Formula {
    switch (g.op()) {
      case Op::And:
        return Formula::conj(go(g.left()), go(g.right()));
      case Op::Or:
        return Formula::disj(go(g.left()), go(g.right()));
      case Op::Until:
        return Formula::until(go(g.left()), go(g.right()));
      case Op::Release:
        return Formula::release(go(g.left()), go(g.right()));
      case Op::Next:
        return Formula::next(go(g.left()));
      case Op::PromptF:
      case Op::BoundedF:
        return Formula::prompt_f(go(g.left()));
      case Op::BoundedG:
        return go(g.left());
      default:
        return g;
    }
  };
  return go(f);
}

}  // namespace plts
