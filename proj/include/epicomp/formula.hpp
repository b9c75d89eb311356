#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "epicomp/run_set.hpp"
#include "epicomp/system.hpp"

namespace epicomp {

/// Epistemic formula over theta-atoms. Immutable value with shared subtrees.
class Formula {
 public:
  enum class Kind : std::uint8_t {
    atom,
    truth,
    falsity,
    negation,
    conjunction,
    disjunction,
    implication,
    equivalence,
    knows,
    possible,
  };

  static Formula atom(Fact fact);
  static Formula atom(std::string agent, Action action) { return atom(Fact{{std::move(agent)}, std::move(action)}); }
  static Formula truth();
  static Formula falsity();
  static Formula negation(Formula f);
  static Formula conjunction(Formula lhs, Formula rhs);
  static Formula disjunction(Formula lhs, Formula rhs);
  static Formula implication(Formula lhs, Formula rhs);
  static Formula equivalence(Formula lhs, Formula rhs);
  static Formula knows(AgentId observer, Formula f);
  static Formula possible(AgentId observer, Formula f);

  /// Left-nested conjunction; `truth` when empty.
  static Formula conjunction_of(const std::vector<Formula>& parts);
  /// Left-nested disjunction; `falsity` when empty.
  static Formula disjunction_of(const std::vector<Formula>& parts);

  Kind kind() const;
  const Fact& fact() const;
  const AgentId& observer() const;
  /// Operand of a negation or modality.
  const Formula& operand() const;
  const Formula& lhs() const;
  const Formula& rhs() const;

  bool is_binary() const;
  bool is_unary() const;

  /// Number of nodes.
  std::size_t size() const;

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Result of a validity check; `counterexample` is the first run (in
/// declaration order) where the formula is false.
struct Verdict {
  bool holds = true;
  std::optional<std::string> counterexample;
};

/// The set of runs where `f` is true. Atoms naming undeclared agents or
/// actions are false everywhere. Throws EvaluationError when a modality names
/// an observer without a partition.
RunSet eval_all(const InterpretedSystem& sys, const Formula& f);

bool eval(const InterpretedSystem& sys, std::size_t run, const Formula& f);
bool eval(const InterpretedSystem& sys, std::string_view run_id, const Formula& f);

Verdict valid(const InterpretedSystem& sys, const Formula& f);

/// Canonical ASCII rendering; parse(render(f)) == f.
std::string render(const Formula& f);

/// Parses the ASCII grammar:
///   f := theta(name, name[(name)]) | true | false | !f | f & f | f | f
///      | f -> f | f <-> f | K[name] f | P[name] f | (f)
/// Precedence from tightest: unary (!, K, P), &, |, -> (right-assoc), <->.
/// Throws ParseError with a 1-based column.
Formula parse_formula(std::string_view text);

}  // namespace epicomp
