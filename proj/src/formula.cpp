#include "epicomp/formula.hpp"

#include <cassert>

#include "epicomp/error.hpp"

namespace epicomp {

struct Formula::Node {
  Kind kind;
  Fact fact;
  AgentId observer;
  std::optional<Formula> lhs;
  std::optional<Formula> rhs;
};

Formula Formula::atom(Fact fact) {
  return Formula(std::make_shared<const Node>(Node{Kind::atom, std::move(fact), {}, std::nullopt, std::nullopt}));
}

Formula Formula::truth() {
  static const auto node = std::make_shared<const Node>(Node{Kind::truth, {}, {}, std::nullopt, std::nullopt});
  return Formula(node);
}

Formula Formula::falsity() {
  static const auto node = std::make_shared<const Node>(Node{Kind::falsity, {}, {}, std::nullopt, std::nullopt});
  return Formula(node);
}

Formula Formula::negation(Formula f) {
  return Formula(std::make_shared<const Node>(Node{Kind::negation, {}, {}, std::move(f), std::nullopt}));
}

Formula Formula::conjunction(Formula lhs, Formula rhs) {
  return Formula(std::make_shared<const Node>(Node{Kind::conjunction, {}, {}, std::move(lhs), std::move(rhs)}));
}

Formula Formula::disjunction(Formula lhs, Formula rhs) {
  return Formula(std::make_shared<const Node>(Node{Kind::disjunction, {}, {}, std::move(lhs), std::move(rhs)}));
}

Formula Formula::implication(Formula lhs, Formula rhs) {
  return Formula(std::make_shared<const Node>(Node{Kind::implication, {}, {}, std::move(lhs), std::move(rhs)}));
}

Formula Formula::equivalence(Formula lhs, Formula rhs) {
  return Formula(std::make_shared<const Node>(Node{Kind::equivalence, {}, {}, std::move(lhs), std::move(rhs)}));
}

Formula Formula::knows(AgentId observer, Formula f) {
  return Formula(std::make_shared<const Node>(Node{Kind::knows, {}, std::move(observer), std::move(f), std::nullopt}));
}

Formula Formula::possible(AgentId observer, Formula f) {
  return Formula(
      std::make_shared<const Node>(Node{Kind::possible, {}, std::move(observer), std::move(f), std::nullopt}));
}

Formula Formula::conjunction_of(const std::vector<Formula>& parts) {
  if (parts.empty()) return truth();
  Formula acc = parts.front();
  for (std::size_t k = 1; k < parts.size(); ++k) acc = conjunction(std::move(acc), parts[k]);
  return acc;
}

Formula Formula::disjunction_of(const std::vector<Formula>& parts) {
  if (parts.empty()) return falsity();
  Formula acc = parts.front();
  for (std::size_t k = 1; k < parts.size(); ++k) acc = disjunction(std::move(acc), parts[k]);
  return acc;
}

Formula::Kind Formula::kind() const { return node_->kind; }

const Fact& Formula::fact() const {
  assert(node_->kind == Kind::atom);
  return node_->fact;
}

const AgentId& Formula::observer() const {
  assert(node_->kind == Kind::knows || node_->kind == Kind::possible);
  return node_->observer;
}

const Formula& Formula::operand() const {
  assert(is_unary());
  return *node_->lhs;
}

const Formula& Formula::lhs() const {
  assert(is_binary());
  return *node_->lhs;
}

const Formula& Formula::rhs() const {
  assert(is_binary());
  return *node_->rhs;
}

bool Formula::is_binary() const {
  switch (node_->kind) {
    case Kind::conjunction:
    case Kind::disjunction:
    case Kind::implication:
    case Kind::equivalence: return true;
    default: return false;
  }
}

bool Formula::is_unary() const {
  return node_->kind == Kind::negation || node_->kind == Kind::knows || node_->kind == Kind::possible;
}

std::size_t Formula::size() const {
  std::size_t n = 1;
  if (node_->lhs) n += node_->lhs->size();
  if (node_->rhs) n += node_->rhs->size();
  return n;
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.kind != y.kind) return false;
  switch (x.kind) {
    case Formula::Kind::atom: return x.fact == y.fact;
    case Formula::Kind::truth:
    case Formula::Kind::falsity: return true;
    case Formula::Kind::knows:
    case Formula::Kind::possible: return x.observer == y.observer && *x.lhs == *y.lhs;
    case Formula::Kind::negation: return *x.lhs == *y.lhs;
    default: return *x.lhs == *y.lhs && *x.rhs == *y.rhs;
  }
}

RunSet eval_all(const InterpretedSystem& sys, const Formula& f) {
  const std::size_t n = sys.run_count();
  switch (f.kind()) {
    case Formula::Kind::atom: {
      const RunSet* ext = sys.extension(f.fact().agent, f.fact().action);
      return ext ? *ext : RunSet(n);
    }
    case Formula::Kind::truth: return RunSet::full(n);
    case Formula::Kind::falsity: return RunSet(n);
    case Formula::Kind::negation: return eval_all(sys, f.operand()).complement();
    case Formula::Kind::conjunction: return eval_all(sys, f.lhs()) & eval_all(sys, f.rhs());
    case Formula::Kind::disjunction: return eval_all(sys, f.lhs()) | eval_all(sys, f.rhs());
    case Formula::Kind::implication: return eval_all(sys, f.lhs()).complement() | eval_all(sys, f.rhs());
    case Formula::Kind::equivalence: {
      RunSet l = eval_all(sys, f.lhs());
      RunSet r = eval_all(sys, f.rhs());
      return (l & r) | (l.complement() & r.complement());
    }
    case Formula::Kind::knows: return sys.known_interior(f.observer(), eval_all(sys, f.operand()));
    case Formula::Kind::possible: return sys.possible_closure(f.observer(), eval_all(sys, f.operand()));
  }
  return RunSet(n);
}

bool eval(const InterpretedSystem& sys, std::size_t run, const Formula& f) { return eval_all(sys, f).test(run); }

bool eval(const InterpretedSystem& sys, std::string_view run_id, const Formula& f) {
  auto r = sys.run_index(run_id);
  if (!r) throw ValidationError("unknown run '" + std::string(run_id) + "'");
  return eval(sys, *r, f);
}

Verdict valid(const InterpretedSystem& sys, const Formula& f) {
  RunSet failing = eval_all(sys, f).complement();
  auto first = failing.first();
  if (!first) return Verdict{};
  return Verdict{false, sys.runs()[*first].id};
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

int precedence(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::equivalence: return 1;
    case Formula::Kind::implication: return 2;
    case Formula::Kind::disjunction: return 3;
    case Formula::Kind::conjunction: return 4;
    case Formula::Kind::negation:
    case Formula::Kind::knows:
    case Formula::Kind::possible: return 5;
    default: return 6;
  }
}

std::string_view binary_symbol(Formula::Kind kind) {
  switch (kind) {
    case Formula::Kind::conjunction: return " & ";
    case Formula::Kind::disjunction: return " | ";
    case Formula::Kind::implication: return " -> ";
    case Formula::Kind::equivalence: return " <-> ";
    default: return " ? ";
  }
}

void render_into(const Formula& f, std::string& out);

void render_child(const Formula& child, bool parens, std::string& out) {
  if (parens) out += '(';
  render_into(child, out);
  if (parens) out += ')';
}

void render_into(const Formula& f, std::string& out) {
  switch (f.kind()) {
    case Formula::Kind::atom: out += to_string(f.fact()); return;
    case Formula::Kind::truth: out += "true"; return;
    case Formula::Kind::falsity: out += "false"; return;
    case Formula::Kind::negation:
      out += '!';
      render_child(f.operand(), f.operand().is_binary(), out);
      return;
    case Formula::Kind::knows:
    case Formula::Kind::possible:
      out += f.kind() == Formula::Kind::knows ? "K[" : "P[";
      out += f.observer().name;
      out += "] ";
      render_child(f.operand(), f.operand().is_binary(), out);
      return;
    default: break;
  }
  const int p = precedence(f);
  const bool right_assoc = f.kind() == Formula::Kind::implication;
  const int pl = precedence(f.lhs());
  const int pr = precedence(f.rhs());
  render_child(f.lhs(), pl < p || (pl == p && right_assoc), out);
  out += binary_symbol(f.kind());
  render_child(f.rhs(), pr < p || (pr == p && !right_assoc), out);
}

}  // namespace

std::string render(const Formula& f) {
  std::string out;
  render_into(f, out);
  return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

bool is_name_start(char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; }
bool is_name_char(char c) { return is_name_start(c) || (c >= '0' && c <= '9'); }

class FormulaParser {
 public:
  explicit FormulaParser(std::string_view text) : text_(text) {}

  Formula parse() {
    Formula f = parse_equivalence();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, 0, pos_ + 1); }

  void skip_ws() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
                                   text_[pos_] == '\r'))
      ++pos_;
  }

  bool accept(std::string_view token) {
    skip_ws();
    if (text_.substr(pos_, token.size()) == token) {
      pos_ += token.size();
      return true;
    }
    return false;
  }

  void expect(std::string_view token) {
    if (!accept(token)) fail("expected '" + std::string(token) + "'");
  }

  std::string name() {
    skip_ws();
    if (pos_ >= text_.size() || !is_name_start(text_[pos_])) fail("expected name");
    std::size_t start = pos_;
    while (pos_ < text_.size() && is_name_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  std::optional<std::string> peek_name() {
    skip_ws();
    if (pos_ >= text_.size() || !is_name_start(text_[pos_])) return std::nullopt;
    std::size_t end = pos_;
    while (end < text_.size() && is_name_char(text_[end])) ++end;
    return std::string(text_.substr(pos_, end - pos_));
  }

  Formula parse_equivalence() {
    Formula f = parse_implication();
    while (accept("<->")) f = Formula::equivalence(std::move(f), parse_implication());
    return f;
  }

  Formula parse_implication() {
    Formula f = parse_disjunction();
    if (accept("->")) return Formula::implication(std::move(f), parse_implication());
    return f;
  }

  Formula parse_disjunction() {
    Formula f = parse_conjunction();
    while (accept("|")) f = Formula::disjunction(std::move(f), parse_conjunction());
    return f;
  }

  Formula parse_conjunction() {
    Formula f = parse_unary();
    while (accept("&")) f = Formula::conjunction(std::move(f), parse_unary());
    return f;
  }

  Formula parse_unary() {
    if (accept("!")) return Formula::negation(parse_unary());
    skip_ws();
    auto word = peek_name();
    if (word == "K" || word == "P") {
      const std::size_t save = pos_;
      pos_ += 1;
      if (accept("[")) {
        AgentId observer{name()};
        expect("]");
        Formula operand = parse_unary();
        return *word == "K" ? Formula::knows(std::move(observer), std::move(operand))
                            : Formula::possible(std::move(observer), std::move(operand));
      }
      pos_ = save;
    }
    return parse_primary();
  }

  Formula parse_primary() {
    if (accept("(")) {
      Formula f = parse_equivalence();
      expect(")");
      return f;
    }
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of formula");
    auto word = peek_name();
    if (!word) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    if (*word == "true") {
      pos_ += word->size();
      return Formula::truth();
    }
    if (*word == "false") {
      pos_ += word->size();
      return Formula::falsity();
    }
    if (*word == "theta") {
      pos_ += word->size();
      return parse_atom_body();
    }
    fail("unknown operator '" + *word + "'");
  }

  Formula parse_atom_body() {
    expect("(");
    std::string agent = name();
    expect(",");
    Action action{name(), {}};
    if (accept("(")) {
      action.param = name();
      expect(")");
    }
    expect(")");
    return Formula::atom(std::move(agent), std::move(action));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Formula parse_formula(std::string_view text) { return FormulaParser(text).parse(); }

}  // namespace epicomp
