#pragma once

// The anonymity/privacy/onymity/identity taxonomy, compiled to formulas.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "epicomp/formula.hpp"
#include "epicomp/system.hpp"

namespace epicomp {

enum class PropertyKind {
  anonymous_up_to,
  minimally_anonymous,
  private_up_to,
  minimally_private,
  role_interchangeable,
  maximally_onymous,
  maximally_identified,
};

std::string_view to_string(PropertyKind kind);
/// Human name of the definition a kind instantiates, e.g. "anonymity up to I_A".
std::string_view definition_name(PropertyKind kind);

struct PropertySpec {
  PropertyKind kind = PropertyKind::minimally_anonymous;
  AgentId agent;
  Action action;
  AgentId observer;
  /// I_A, anonymous_up_to only.
  std::optional<std::vector<AgentId>> anonymity_set;
  /// A_I, private_up_to only.
  std::optional<std::vector<Action>> privacy_set;
  /// role_interchangeable only; all declared actions when absent.
  std::optional<std::vector<Action>> action_universe;

  static PropertySpec anonymous_up_to(AgentId i, Action a, std::vector<AgentId> set, AgentId j);
  static PropertySpec private_up_to(AgentId i, Action a, std::vector<Action> set, AgentId j);
  static PropertySpec simple(PropertyKind kind, AgentId i, Action a, AgentId j);
  static PropertySpec role_interchangeable(AgentId i, Action a, AgentId j,
                                           std::optional<std::vector<Action>> universe = std::nullopt);

  friend bool operator==(const PropertySpec&, const PropertySpec&) = default;
};

struct Counterexample {
  std::string run;
  /// The quantified element whose conjunct failed: an agent for
  /// anonymity, an action for privacy, "agent/action" for role
  /// interchangeability, empty for single-conjunct definitions.
  std::string element;
  /// Rendered failing conjunct.
  std::string conjunct;
};

struct PropertyReport {
  PropertySpec spec;
  bool holds = true;
  Formula witness_formula = Formula::truth();
  std::optional<Counterexample> counterexample;
};

/// theta(i, a) -> conjunction of the definition's conjuncts, expanded in
/// declaration order. Throws ValidationError when the spec lacks its set
/// field, carries a field its kind does not use, or a set names an
/// undeclared agent/action.
Formula compile_property(const InterpretedSystem& sys, const PropertySpec& spec);

PropertyReport check_property(const InterpretedSystem& sys, const PropertySpec& spec);

/// Parses the CLI surface syntax, e.g. `anon-upto(i1, use(k1), {i1,i2}, j)`,
/// `priv-upto(k1, post(c1), {post(c1),post(c2)}, j)`, `min-anon(i, a, j)`,
/// `min-priv`, `max-onym`, `max-ident`, `role-int(i, a, j)` or
/// `role-int(i, a, {a1,a2}, j)`.
PropertySpec parse_property(std::string_view text);

std::string render(const PropertySpec& spec);

}  // namespace epicomp
