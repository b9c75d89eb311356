#pragma once

// Sequential and parallel composition of actions, the independence
// assumptions relating two phases, and the structural side conditions
// (exclusivity, exhaustiveness, causality) of the bulletin-board model.

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "epicomp/formula.hpp"
#include "epicomp/system.hpp"

namespace epicomp {

/// Registration (use) followed by posting (post), composed into submit:
///   theta(i, submit(c)) <-> OR_{k in I_P} theta(i, use(k)) & theta(k, post(c))
struct SequentialSchema {
  std::string first_family = "use";
  std::vector<std::string> first_params;  // I_P, the pseudonyms
  std::vector<AgentId> first_agents;      // I_R, the real names
  std::string second_family = "post";
  std::vector<std::string> second_params;  // C, the articles
  std::string derived_family = "submit";

  std::vector<AgentId> pseudonyms() const;
  Action first_action(const std::string& pseudonym) const { return {first_family, pseudonym}; }
  Action second_action(const std::string& article) const { return {second_family, article}; }
  Action derived_action(const std::string& article) const { return {derived_family, article}; }
  std::vector<Action> first_actions() const;
  std::vector<Action> second_actions() const;
  std::vector<Action> derived_actions() const;
};

/// theta(i, act_p(c)) <-> theta(i, act_a(c)) & theta(i, act_b(c))
struct ParallelSchema {
  std::string family_a = "act_a";
  std::string family_b = "act_b";
  std::string derived_family = "act_p";
  std::vector<std::string> params;
  /// Agents quantified over; resolve_schema fills in every agent that is not
  /// an observer when left empty.
  std::vector<AgentId> agents;

  std::vector<Action> actions_a() const;
  std::vector<Action> actions_b() const;
  std::vector<Action> derived_actions() const;
};

using Schema = std::variant<SequentialSchema, ParallelSchema>;

enum class IndependenceKind { basic, pairwise, disjunctive, pos_neg, neg_pos, parallel };

std::string_view to_string(IndependenceKind kind);
std::optional<IndependenceKind> parse_independence_kind(std::string_view text);

struct StructuralCondition {
  enum class Kind {
    exclusive_action,
    exclusive_agent,
    exhaustive_posting,
    exhaustive_registration,
    backward_causality,
    forward_causality,
  };
  Kind kind;
  Action action;        // exclusive_action
  AgentId agent;        // exclusive_agent
  std::string family;   // exclusive_agent

  static StructuralCondition exclusive_action_of(Action a) { return {Kind::exclusive_action, std::move(a), {}, {}}; }
  static StructuralCondition exclusive_agent_of(AgentId i, std::string family) {
    return {Kind::exclusive_agent, {}, std::move(i), std::move(family)};
  }
  static StructuralCondition of(Kind k) { return {k, {}, {}, {}}; }
};

std::string to_string(const StructuralCondition& cond);

/// Verdict of an independence or structural check. The counterexample is the
/// first failing instantiation in canonical enumeration order and the first
/// run (declaration order) where it fails.
struct ConditionReport {
  std::string condition;
  bool holds = true;
  std::optional<std::string> counterexample_run;
  std::optional<std::string> failing_instance;
};

struct IndependenceOptions {
  /// Longest disjunct list for IndependenceKind::disjunctive.
  std::size_t disjunct_bound = 2;
};

/// Throws ValidationError when the schema names undeclared agents/actions.
void validate_schema(const InterpretedSystem& sys, const Schema& schema);

/// Fills defaulted fields: I_R becomes the agents tagged `real` (or, absent
/// tags, every agent performing a first-family action); parallel agents
/// become every agent that is neither tagged nor partitioned as observer.
Schema resolve_schema(const InterpretedSystem& sys, Schema schema);

/// Partitions are carried over unchanged. Throws ValidationError when the
/// derived family is already declared.
InterpretedSystem derive_sequential(const InterpretedSystem& sys, const SequentialSchema& schema);
InterpretedSystem derive_parallel(const InterpretedSystem& sys, const ParallelSchema& schema);
InterpretedSystem derive(const InterpretedSystem& sys, const Schema& schema);

/// Drops every action (and fact) of one family.
InterpretedSystem erase_family(const InterpretedSystem& sys, std::string_view family);

/// Direct bitset evaluation of the quantified independence implication.
/// Throws ValidationError when `kind` does not match the schema flavour
/// (parallel needs a ParallelSchema, every other kind a SequentialSchema).
ConditionReport check_independence(const InterpretedSystem& sys, const AgentId& observer, const Schema& schema,
                                   IndependenceKind kind, const IndependenceOptions& options = {});

/// The same condition as one explicit conjunction of its instantiations.
Formula independence_formula(const InterpretedSystem& sys, const AgentId& observer, const Schema& schema,
                             IndependenceKind kind, const IndependenceOptions& options = {});

Formula structural_formula(const InterpretedSystem& sys, const SequentialSchema& schema,
                           const StructuralCondition& cond);
ConditionReport check_structural(const InterpretedSystem& sys, const SequentialSchema& schema,
                                 const StructuralCondition& cond);

/// `seq use:I_P={k1,k2} post:C={c1,c2} => submit [I_R={i1,i2}]` or
/// `par buy_timer + synthesize_gunpowder => give : C={c} [I={i1,i2}]`.
Schema parse_schema(std::string_view text);
std::string render(const Schema& schema);

}  // namespace epicomp
