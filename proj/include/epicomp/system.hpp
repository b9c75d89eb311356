#pragma once

// Finite interpreted systems: agents, (family, param) actions, runs carrying
// theta-facts, and one indistinguishability partition per observer. Time is
// not modelled; a fact's truth value is a property of the whole run.

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "epicomp/run_set.hpp"

namespace epicomp {

struct AgentId {
  std::string name;

  friend auto operator<=>(const AgentId&, const AgentId&) = default;
  friend bool operator==(const AgentId&, const AgentId&) = default;
};

/// Optional metadata; the evaluator never looks at it.
enum class AgentRole { unspecified, real_name, pseudonym, observer };

std::string_view to_string(AgentRole role);

struct Agent {
  AgentId id;
  AgentRole role = AgentRole::unspecified;

  friend bool operator==(const Agent&, const Agent&) = default;
};

/// An action such as use(k1) or post(c2). A parameterless action has an
/// empty param and prints as its bare family name.
struct Action {
  std::string family;
  std::string param;

  friend auto operator<=>(const Action&, const Action&) = default;
  friend bool operator==(const Action&, const Action&) = default;
};

std::string to_string(const Action& action);

/// theta(agent, action)
struct Fact {
  AgentId agent;
  Action action;

  friend auto operator<=>(const Fact&, const Fact&) = default;
  friend bool operator==(const Fact&, const Fact&) = default;
};

std::string to_string(const Fact& fact);

struct Run {
  std::string id;
  std::vector<Fact> facts;

  friend bool operator==(const Run&, const Run&) = default;
};

struct ObserverPartition {
  AgentId observer;
  std::vector<std::vector<std::string>> blocks;

  friend bool operator==(const ObserverPartition&, const ObserverPartition&) = default;
};

/// Unvalidated input to build_system.
struct SystemDeclaration {
  std::string name;
  std::vector<Agent> agents;
  std::vector<Action> actions;
  std::vector<Run> runs;
  std::vector<ObserverPartition> partitions;
};

class InterpretedSystem;

/// Validates a declaration. Throws ValidationError on an undeclared agent or
/// action, a duplicate agent/action/run id, a partition that does not cover
/// the runs exactly once, or an empty run set. Duplicate facts in a run are
/// merged; facts are stored in declaration order of (agent, action).
InterpretedSystem build_system(SystemDeclaration declaration);

/// Immutable after construction; all queries are const and thread-safe.
class InterpretedSystem {
 public:
  const std::string& name() const { return decl_.name; }
  std::span<const Agent> agents() const { return decl_.agents; }
  std::span<const Action> actions() const { return decl_.actions; }
  std::span<const Run> runs() const { return decl_.runs; }
  std::span<const ObserverPartition> partitions() const { return decl_.partitions; }

  std::size_t run_count() const { return decl_.runs.size(); }

  std::optional<std::size_t> agent_index(std::string_view name) const;
  std::optional<std::size_t> action_index(const Action& action) const;
  std::optional<std::size_t> run_index(std::string_view id) const;

  /// Agents carrying the given role tag, in declaration order.
  std::vector<AgentId> agents_with_role(AgentRole role) const;
  /// Declared actions of one family, in declaration order.
  std::vector<Action> actions_of_family(std::string_view family) const;

  bool has_observer(const AgentId& observer) const;
  /// Block index of every run for this observer. Throws EvaluationError if
  /// the observer has no partition.
  std::span<const std::size_t> block_of(const AgentId& observer) const;
  std::span<const RunSet> blocks(const AgentId& observer) const;

  /// The runs the observer cannot tell apart from `run`.
  const RunSet& kernel(const AgentId& observer, std::size_t run) const;
  std::vector<std::string> kernel(const AgentId& observer, std::string_view run_id) const;

  /// Union of the observer's blocks that meet `runs`: where P_j holds.
  RunSet possible_closure(const AgentId& observer, const RunSet& runs) const;
  /// Union of the observer's blocks contained in `runs`: where K_j holds.
  RunSet known_interior(const AgentId& observer, const RunSet& runs) const;

  /// Runs carrying theta(agent, action); nullptr for undeclared pairs.
  const RunSet* extension(const AgentId& agent, const Action& action) const;
  const RunSet& extension(std::size_t agent, std::size_t action) const {
    return extensions_[agent * decl_.actions.size() + action];
  }

  bool holds(std::size_t run, std::size_t agent, std::size_t action) const {
    return extension(agent, action).test(run);
  }
  bool holds(std::string_view run_id, const AgentId& agent, const Action& action) const;

  /// The normalised declaration this system was built from.
  const SystemDeclaration& declaration() const { return decl_; }

  friend bool operator==(const InterpretedSystem& a, const InterpretedSystem& b);

 private:
  friend InterpretedSystem build_system(SystemDeclaration declaration);
  InterpretedSystem() = default;

  struct ObserverIndex {
    std::vector<std::size_t> block_of;
    std::vector<RunSet> blocks;
  };

  const ObserverIndex& observer_index(const AgentId& observer) const;

  SystemDeclaration decl_;
  std::unordered_map<std::string, std::size_t> agent_ix_;
  std::map<Action, std::size_t> action_ix_;
  std::unordered_map<std::string, std::size_t> run_ix_;
  std::map<AgentId, ObserverIndex> observers_;
  std::vector<RunSet> extensions_;
};

/// Copy of `system` with one observer's partition replaced.
InterpretedSystem with_partition(const InterpretedSystem& system, const ObserverPartition& partition);

}  // namespace epicomp
