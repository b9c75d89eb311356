#include "epicomp/properties.hpp"

#include <algorithm>
#include <utility>

#include "epicomp/error.hpp"
#include "surface_lexer.hpp"

namespace epicomp {

std::string_view to_string(PropertyKind kind) {
  switch (kind) {
    case PropertyKind::anonymous_up_to: return "anon-upto";
    case PropertyKind::minimally_anonymous: return "min-anon";
    case PropertyKind::private_up_to: return "priv-upto";
    case PropertyKind::minimally_private: return "min-priv";
    case PropertyKind::role_interchangeable: return "role-int";
    case PropertyKind::maximally_onymous: return "max-onym";
    case PropertyKind::maximally_identified: return "max-ident";
  }
  return "?";
}

std::string_view definition_name(PropertyKind kind) {
  switch (kind) {
    case PropertyKind::anonymous_up_to: return "anonymity up to I_A";
    case PropertyKind::minimally_anonymous: return "minimal anonymity";
    case PropertyKind::private_up_to: return "privacy up to A_I";
    case PropertyKind::minimally_private: return "minimal privacy";
    case PropertyKind::role_interchangeable: return "role interchangeability";
    case PropertyKind::maximally_onymous: return "maximal onymity";
    case PropertyKind::maximally_identified: return "maximal identity";
  }
  return "?";
}

PropertySpec PropertySpec::anonymous_up_to(AgentId i, Action a, std::vector<AgentId> set, AgentId j) {
  PropertySpec s = simple(PropertyKind::anonymous_up_to, std::move(i), std::move(a), std::move(j));
  s.anonymity_set = std::move(set);
  return s;
}

PropertySpec PropertySpec::private_up_to(AgentId i, Action a, std::vector<Action> set, AgentId j) {
  PropertySpec s = simple(PropertyKind::private_up_to, std::move(i), std::move(a), std::move(j));
  s.privacy_set = std::move(set);
  return s;
}

PropertySpec PropertySpec::simple(PropertyKind kind, AgentId i, Action a, AgentId j) {
  PropertySpec s;
  s.kind = kind;
  s.agent = std::move(i);
  s.action = std::move(a);
  s.observer = std::move(j);
  return s;
}

PropertySpec PropertySpec::role_interchangeable(AgentId i, Action a, AgentId j,
                                                std::optional<std::vector<Action>> universe) {
  PropertySpec s = simple(PropertyKind::role_interchangeable, std::move(i), std::move(a), std::move(j));
  s.action_universe = std::move(universe);
  return s;
}

namespace {

struct Expansion {
  Formula antecedent;
  std::vector<std::pair<std::string, Formula>> conjuncts;

  Formula formula() const {
    std::vector<Formula> parts;
    parts.reserve(conjuncts.size());
    for (const auto& [label, f] : conjuncts) parts.push_back(f);
    return Formula::implication(antecedent, Formula::conjunction_of(parts));
  }
};

void require_agent(const InterpretedSystem& sys, const AgentId& a) {
  if (!sys.agent_index(a.name)) throw ValidationError("property references undeclared agent '" + a.name + "'");
}

void require_action(const InterpretedSystem& sys, const Action& a) {
  if (!sys.action_index(a))
    throw ValidationError("property references undeclared action '" + to_string(a) + "'");
}

void validate(const InterpretedSystem& sys, const PropertySpec& spec) {
  require_agent(sys, spec.agent);
  require_action(sys, spec.action);
  require_agent(sys, spec.observer);

  const bool wants_anon = spec.kind == PropertyKind::anonymous_up_to;
  const bool wants_priv = spec.kind == PropertyKind::private_up_to;
  const bool wants_universe = spec.kind == PropertyKind::role_interchangeable;
  if (wants_anon != spec.anonymity_set.has_value())
    throw ValidationError(wants_anon ? "anon-upto needs an anonymity set" : "anonymity set given for " +
                                                                                std::string(to_string(spec.kind)));
  if (wants_priv != spec.privacy_set.has_value())
    throw ValidationError(wants_priv ? "priv-upto needs a privacy set" : "privacy set given for " +
                                                                             std::string(to_string(spec.kind)));
  if (!wants_universe && spec.action_universe)
    throw ValidationError("action universe given for " + std::string(to_string(spec.kind)));

  if (spec.anonymity_set)
    for (const auto& a : *spec.anonymity_set) require_agent(sys, a);
  if (spec.privacy_set)
    for (const auto& a : *spec.privacy_set) require_action(sys, a);
  if (spec.action_universe)
    for (const auto& a : *spec.action_universe) require_action(sys, a);
}

Expansion expand(const InterpretedSystem& sys, const PropertySpec& spec) {
  validate(sys, spec);
  const AgentId& i = spec.agent;
  const Action& a = spec.action;
  const AgentId& j = spec.observer;
  Expansion e{Formula::atom(Fact{i, a}), {}};

  switch (spec.kind) {
    case PropertyKind::anonymous_up_to:
      for (const auto& other : *spec.anonymity_set)
        e.conjuncts.emplace_back(other.name, Formula::possible(j, Formula::atom(Fact{other, a})));
      break;
    case PropertyKind::private_up_to:
      for (const auto& other : *spec.privacy_set)
        e.conjuncts.emplace_back(to_string(other), Formula::possible(j, Formula::atom(Fact{i, other})));
      break;
    case PropertyKind::minimally_anonymous:
    case PropertyKind::minimally_private:
      e.conjuncts.emplace_back("", Formula::possible(j, Formula::negation(e.antecedent)));
      break;
    case PropertyKind::maximally_onymous:
    case PropertyKind::maximally_identified:
      e.conjuncts.emplace_back("", Formula::knows(j, e.antecedent));
      break;
    case PropertyKind::role_interchangeable: {
      std::vector<Action> universe =
          spec.action_universe ? *spec.action_universe
                               : std::vector<Action>(sys.actions().begin(), sys.actions().end());
      for (const auto& agent : sys.agents()) {
        if (agent.id == j) continue;
        for (const auto& other : universe) {
          Formula swapped = Formula::conjunction(Formula::atom(Fact{agent.id, a}), Formula::atom(Fact{i, other}));
          e.conjuncts.emplace_back(agent.id.name + "/" + to_string(other),
                                   Formula::implication(Formula::atom(Fact{agent.id, other}),
                                                        Formula::possible(j, std::move(swapped))));
        }
      }
      break;
    }
  }
  return e;
}

}  // namespace

Formula compile_property(const InterpretedSystem& sys, const PropertySpec& spec) { return expand(sys, spec).formula(); }

PropertyReport check_property(const InterpretedSystem& sys, const PropertySpec& spec) {
  Expansion e = expand(sys, spec);
  PropertyReport report{spec, true, e.formula(), std::nullopt};
  Verdict v = valid(sys, report.witness_formula);
  report.holds = v.holds;
  if (!v.holds) {
    const std::size_t run = *sys.run_index(*v.counterexample);
    for (const auto& [label, conjunct] : e.conjuncts) {
      if (!eval(sys, run, conjunct)) {
        report.counterexample = Counterexample{*v.counterexample, label, render(conjunct)};
        break;
      }
    }
  }
  return report;
}

PropertySpec parse_property(std::string_view text) {
  detail::SurfaceLexer lex(text);
  const std::string keyword = lex.name(true);
  PropertyKind kind{};
  bool found = false;
  for (auto k : {PropertyKind::anonymous_up_to, PropertyKind::minimally_anonymous, PropertyKind::private_up_to,
                 PropertyKind::minimally_private, PropertyKind::role_interchangeable,
                 PropertyKind::maximally_onymous, PropertyKind::maximally_identified}) {
    if (to_string(k) == keyword) {
      kind = k;
      found = true;
    }
  }
  if (!found) throw ParseError("unknown property '" + keyword + "'", 0, 1);

  lex.expect("(");
  PropertySpec spec;
  spec.kind = kind;
  spec.agent = AgentId{lex.name()};
  lex.expect(",");
  spec.action = lex.action();
  lex.expect(",");
  if (kind == PropertyKind::anonymous_up_to) {
    std::vector<AgentId> set;
    for (auto& n : lex.name_set()) set.push_back(AgentId{std::move(n)});
    spec.anonymity_set = std::move(set);
    lex.expect(",");
  } else if (kind == PropertyKind::private_up_to) {
    std::vector<Action> set;
    lex.braced_list([&] { set.push_back(lex.action()); });
    spec.privacy_set = std::move(set);
    lex.expect(",");
  } else if (kind == PropertyKind::role_interchangeable && lex.peek("{")) {
    std::vector<Action> set;
    lex.braced_list([&] { set.push_back(lex.action()); });
    spec.action_universe = std::move(set);
    lex.expect(",");
  }
  spec.observer = AgentId{lex.name()};
  lex.expect(")");
  if (!lex.at_end()) lex.fail("trailing input");
  return spec;
}

std::string render(const PropertySpec& spec) {
  std::string out(to_string(spec.kind));
  out += "(" + spec.agent.name + ", " + to_string(spec.action) + ", ";
  auto join_agents = [](const std::vector<AgentId>& v) {
    std::string s = "{";
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + v[k].name;
    return s + "}";
  };
  auto join_actions = [](const std::vector<Action>& v) {
    std::string s = "{";
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + to_string(v[k]);
    return s + "}";
  };
  if (spec.anonymity_set) out += join_agents(*spec.anonymity_set) + ", ";
  if (spec.privacy_set) out += join_actions(*spec.privacy_set) + ", ";
  if (spec.action_universe) out += join_actions(*spec.action_universe) + ", ";
  out += spec.observer.name + ")";
  return out;
}

}  // namespace epicomp
