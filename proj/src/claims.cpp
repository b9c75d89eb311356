#include "epicomp/claims.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <random>

#include "epicomp/error.hpp"
#include "epicomp/properties.hpp"

namespace epicomp {

namespace {

constexpr std::array kClaims{
    ClaimId::c3_1, ClaimId::c3_2, ClaimId::c3_3, ClaimId::c3_4, ClaimId::c3_5, ClaimId::c4_1,
    ClaimId::c4_2, ClaimId::ca_1, ClaimId::ca_2, ClaimId::ca_3, ClaimId::ca_4, ClaimId::ca_5,
    ClaimId::ca_6, ClaimId::ca_7, ClaimId::cb_1, ClaimId::cb_2, ClaimId::l3_1, ClaimId::l3_2,
    ClaimId::la_1, ClaimId::la_2, ClaimId::la_3, ClaimId::appc_eq,
};

enum class Cond {
  // sequential, on the source system
  independence,
  pairwise_independence,
  disjunctive_independence,
  posneg_independence,
  negpos_independence,
  use_anonymity,
  use_max_onymity,
  use_min_anonymity,
  use_role_int,
  post_privacy,
  post_max_identity,
  post_min_privacy,
  post_role_int,
  exhaustive_posting,
  exhaustive_registration,
  post_exclusivity,
  agent_exclusivity,
  backward_causality,
  reformulation,
  // sequential, on the derived system
  submit_anonymity,
  submit_privacy,
  submit_max_onymity,
  submit_min_privacy,
  submit_min_anonymity,
  submit_role_int,
  // parallel
  par_independence,
  a_privacy,
  b_privacy,
  a_anonymity,
  b_anonymity,
  a_or_b_min_privacy,
  a_max_identity,
  b_max_identity,
  p_privacy,
  p_anonymity,
  p_min_privacy,
  p_max_identity,
};

std::string_view cond_name(Cond c) {
  switch (c) {
    case Cond::independence: return "independence";
    case Cond::pairwise_independence: return "pairwise-independence";
    case Cond::disjunctive_independence: return "disjunctive-independence";
    case Cond::posneg_independence: return "posneg-independence";
    case Cond::negpos_independence: return "negpos-independence";
    case Cond::use_anonymity: return "use-anonymity";
    case Cond::use_max_onymity: return "use-maximal-onymity";
    case Cond::use_min_anonymity: return "use-minimal-anonymity";
    case Cond::use_role_int: return "use-role-interchangeability";
    case Cond::post_privacy: return "post-privacy";
    case Cond::post_max_identity: return "post-maximal-identity";
    case Cond::post_min_privacy: return "post-minimal-privacy";
    case Cond::post_role_int: return "post-role-interchangeability";
    case Cond::exhaustive_posting: return "exhaustive-posting";
    case Cond::exhaustive_registration: return "exhaustive-registration";
    case Cond::post_exclusivity: return "post-exclusivity";
    case Cond::agent_exclusivity: return "agent-exclusivity";
    case Cond::backward_causality: return "backward-causality";
    case Cond::reformulation: return "independence-reformulation";
    case Cond::submit_anonymity: return "submit-anonymity";
    case Cond::submit_privacy: return "submit-privacy";
    case Cond::submit_max_onymity: return "submit-maximal-onymity";
    case Cond::submit_min_privacy: return "submit-minimal-privacy";
    case Cond::submit_min_anonymity: return "submit-minimal-anonymity";
    case Cond::submit_role_int: return "submit-role-interchangeability";
    case Cond::par_independence: return "independence";
    case Cond::a_privacy: return "a-privacy";
    case Cond::b_privacy: return "b-privacy";
    case Cond::a_anonymity: return "a-anonymity";
    case Cond::b_anonymity: return "b-anonymity";
    case Cond::a_or_b_min_privacy: return "a-or-b-minimal-privacy";
    case Cond::a_max_identity: return "a-maximal-identity";
    case Cond::b_max_identity: return "b-maximal-identity";
    case Cond::p_privacy: return "p-privacy";
    case Cond::p_anonymity: return "p-anonymity";
    case Cond::p_min_privacy: return "p-minimal-privacy";
    case Cond::p_max_identity: return "p-maximal-identity";
  }
  return "?";
}

struct ClaimShape {
  std::vector<Cond> hypotheses;
  std::vector<Cond> conclusion;
};

ClaimShape shape(ClaimId id) {
  using C = Cond;
  switch (id) {
    case ClaimId::c3_1: return {{C::use_anonymity, C::post_privacy}, {C::submit_anonymity, C::submit_privacy}};
    case ClaimId::c3_2: return {{C::independence, C::post_privacy}, {C::submit_privacy}};
    case ClaimId::c3_3: return {{C::independence, C::use_anonymity}, {C::submit_anonymity}};
    case ClaimId::c3_4: return {{C::use_max_onymity, C::post_privacy}, {C::submit_privacy}};
    case ClaimId::c3_5: return {{C::use_anonymity, C::post_max_identity}, {C::submit_anonymity}};
    case ClaimId::c4_1: return {{C::par_independence, C::a_privacy, C::b_privacy}, {C::p_privacy}};
    case ClaimId::c4_2: return {{C::par_independence, C::a_anonymity, C::b_anonymity}, {C::p_anonymity}};
    case ClaimId::ca_1: return {{C::pairwise_independence, C::post_role_int}, {C::submit_role_int}};
    case ClaimId::ca_2: return {{C::pairwise_independence, C::use_role_int}, {C::submit_role_int}};
    case ClaimId::ca_3:
      return {{C::independence, C::exhaustive_posting, C::post_exclusivity, C::agent_exclusivity,
               C::post_min_privacy},
              {C::submit_min_privacy}};
    case ClaimId::ca_4:
      return {{C::independence, C::exhaustive_registration, C::agent_exclusivity, C::post_exclusivity,
               C::use_min_anonymity},
              {C::submit_min_anonymity}};
    case ClaimId::ca_5:
      return {{C::exhaustive_posting, C::agent_exclusivity, C::post_exclusivity, C::use_max_onymity,
               C::post_min_privacy},
              {C::submit_min_privacy}};
    case ClaimId::ca_6:
      return {{C::exhaustive_registration, C::post_exclusivity, C::agent_exclusivity, C::use_min_anonymity,
               C::post_max_identity},
              {C::submit_min_anonymity}};
    case ClaimId::ca_7: return {{C::use_max_onymity, C::post_max_identity}, {C::submit_max_onymity}};
    case ClaimId::cb_1: return {{C::a_or_b_min_privacy}, {C::p_min_privacy}};
    case ClaimId::cb_2: return {{C::a_max_identity, C::b_max_identity}, {C::p_max_identity}};
    case ClaimId::l3_1: return {{C::use_max_onymity}, {C::independence}};
    case ClaimId::l3_2: return {{C::post_max_identity}, {C::independence}};
    case ClaimId::la_1: return {{C::independence}, {C::disjunctive_independence}};
    case ClaimId::la_2:
      return {{C::independence, C::exhaustive_posting, C::post_exclusivity}, {C::posneg_independence}};
    case ClaimId::la_3:
      return {{C::independence, C::exhaustive_registration, C::agent_exclusivity}, {C::negpos_independence}};
    case ClaimId::appc_eq: return {{C::backward_causality}, {C::reformulation}};
  }
  return {};
}

// ---------------------------------------------------------------------------
// Per-system condition evaluation with memoisation.

struct Subject {
  std::size_t agent;
  std::size_t action;
};

class Evaluator {
 public:
  Evaluator(const InterpretedSystem& sys, const ClaimContext& ctx, bool details)
      : sys_(sys), ctx_(ctx), schema_(resolve_schema(sys, ctx.schema)), details_(details) {
    if (!sys_.has_observer(ctx_.observer))
      throw ValidationError("observer '" + ctx_.observer.name + "' has no partition");
  }

  bool sequential() const { return std::holds_alternative<SequentialSchema>(schema_); }

  const ConditionResult& get(Cond c) {
    auto it = cache_.find(c);
    if (it == cache_.end()) it = cache_.emplace(c, compute(c)).first;
    return it->second;
  }

 private:
  const SequentialSchema& seq() const { return std::get<SequentialSchema>(schema_); }
  const ParallelSchema& par() const { return std::get<ParallelSchema>(schema_); }

  const InterpretedSystem& derived() {
    if (!derived_) derived_ = derive(sys_, schema_);
    return *derived_;
  }

  // Bitset route for one property instance; mirrors compile_property.
  static bool holds(const InterpretedSystem& s, const PropertySpec& spec) {
    const std::size_t i = *s.agent_index(spec.agent.name);
    const std::size_t a = *s.action_index(spec.action);
    const RunSet& ext = s.extension(i, a);
    if (ext.none()) return true;
    const AgentId& j = spec.observer;
    auto ext_of = [&](const AgentId& x, const Action& y) -> const RunSet& {
      return s.extension(*s.agent_index(x.name), *s.action_index(y));
    };
    switch (spec.kind) {
      case PropertyKind::anonymous_up_to:
        for (const auto& other : *spec.anonymity_set)
          if (!ext.is_subset_of(s.possible_closure(j, ext_of(other, spec.action)))) return false;
        return true;
      case PropertyKind::private_up_to:
        for (const auto& other : *spec.privacy_set)
          if (!ext.is_subset_of(s.possible_closure(j, ext_of(spec.agent, other)))) return false;
        return true;
      case PropertyKind::minimally_anonymous:
      case PropertyKind::minimally_private:
        return ext.is_subset_of(s.possible_closure(j, ext.complement()));
      case PropertyKind::maximally_onymous:
      case PropertyKind::maximally_identified:
        return ext.is_subset_of(s.known_interior(j, ext));
      case PropertyKind::role_interchangeable:
        for (const auto& agent : s.agents()) {
          if (agent.id == j) continue;
          for (const auto& other : *spec.action_universe) {
            const RunSet both = ext & ext_of(agent.id, other);
            if (both.none()) continue;
            if (!both.is_subset_of(s.possible_closure(j, ext_of(agent.id, spec.action) & ext_of(spec.agent, other))))
              return false;
          }
        }
        return true;
    }
    return true;
  }

  ConditionResult failure(Cond c, const InterpretedSystem& s, const PropertySpec& spec) const {
    ConditionResult r{std::string(cond_name(c)), false, render(spec)};
    if (details_) {
      const PropertyReport rep = check_property(s, spec);
      if (rep.counterexample) {
        r.detail += " fails at " + rep.counterexample->run;
        if (!rep.counterexample->element.empty()) r.detail += " (" + rep.counterexample->element + ")";
      }
    }
    return r;
  }

  template <class Make>
  ConditionResult every(Cond c, const InterpretedSystem& s, const std::vector<AgentId>& agents,
                        const std::vector<Action>& actions, Make make) const {
    for (const auto& i : agents)
      for (const auto& a : actions) {
        PropertySpec spec = make(i, a);
        if (!holds(s, spec)) return failure(c, s, spec);
      }
    return {std::string(cond_name(c)), true, {}};
  }

  static std::vector<AgentId> ids(const std::vector<std::string>& names) {
    std::vector<AgentId> out;
    for (const auto& n : names) out.push_back({n});
    return out;
  }

  ConditionResult from_report(Cond c, const ConditionReport& rep) const {
    ConditionResult r{std::string(cond_name(c)), rep.holds, {}};
    if (!rep.holds) {
      r.detail = rep.failing_instance.value_or(rep.condition);
      if (rep.counterexample_run) r.detail += " fails at " + *rep.counterexample_run;
    }
    return r;
  }

  ConditionResult independence(Cond c, IndependenceKind kind) const {
    return from_report(c, check_independence(sys_, ctx_.observer, schema_, kind, ctx_.independence));
  }

  ConditionResult structural(Cond c, const std::vector<StructuralCondition>& conds) const {
    for (const auto& sc : conds) {
      ConditionReport rep = check_structural(sys_, seq(), sc);
      if (!rep.holds) {
        ConditionResult r{std::string(cond_name(c)), false, to_string(sc)};
        if (rep.counterexample_run) r.detail += " fails at " + *rep.counterexample_run;
        return r;
      }
    }
    return {std::string(cond_name(c)), true, {}};
  }

  // theta(i', use(k')) & theta(k', post(c)) ->
  //   AND_{i,k} (P[j] theta(i, use(k)) -> P[j] (theta(i, use(k)) & theta(k', post(c))))
  ConditionResult reformulation() const {
    const auto& s = seq();
    const AgentId& j = ctx_.observer;
    auto ext = [&](const AgentId& x, const Action& y) -> const RunSet& {
      return sys_.extension(*sys_.agent_index(x.name), *sys_.action_index(y));
    };
    bool reformulated = true;
    std::string where;
    for (const auto& k2 : s.pseudonyms())
      for (const auto& c : s.second_params) {
        const RunSet& posted = ext(k2, s.second_action(c));
        RunSet ante(sys_.run_count());
        for (const auto& i2 : s.first_agents) ante |= ext(i2, s.first_action(k2.name)) & posted;
        if (ante.none()) continue;
        for (const auto& i : s.first_agents)
          for (const auto& k : s.first_params) {
            const RunSet& used = ext(i, s.first_action(k));
            const RunSet bad = ante & sys_.possible_closure(j, used) & sys_.possible_closure(j, used & posted).complement();
            if (bad.any() && reformulated) {
              reformulated = false;
              where = "instance i=" + i.name + " k=" + k + " k'=" + k2.name + " c=" + c;
            }
          }
      }
    const bool basic = check_independence(sys_, j, schema_, IndependenceKind::basic).holds;
    ConditionResult r{std::string(cond_name(Cond::reformulation)), basic == reformulated, {}};
    r.detail = std::string("independence ") + (basic ? "holds" : "fails") + ", reformulation " +
               (reformulated ? "holds" : "fails") + (where.empty() ? "" : " (" + where + ")");
    return r;
  }

  ConditionResult compute(Cond c) {
    const AgentId& j = ctx_.observer;
    using PK = PropertyKind;
    auto simple = [&](PK kind) {
      return [kind, &j](const AgentId& i, const Action& a) { return PropertySpec::simple(kind, i, a, j); };
    };
    if (sequential()) {
      const auto& s = seq();
      const auto pseudonyms = s.pseudonyms();
      const auto uses = s.first_actions();
      const auto posts = s.second_actions();
      switch (c) {
        case Cond::independence: return independence(c, IndependenceKind::basic);
        case Cond::pairwise_independence: return independence(c, IndependenceKind::pairwise);
        case Cond::disjunctive_independence: return independence(c, IndependenceKind::disjunctive);
        case Cond::posneg_independence: return independence(c, IndependenceKind::pos_neg);
        case Cond::negpos_independence: return independence(c, IndependenceKind::neg_pos);
        case Cond::use_anonymity:
          return every(c, sys_, s.first_agents, uses, [&](const AgentId& i, const Action& a) {
            return PropertySpec::anonymous_up_to(i, a, s.first_agents, j);
          });
        case Cond::use_max_onymity: return every(c, sys_, s.first_agents, uses, simple(PK::maximally_onymous));
        case Cond::use_min_anonymity: return every(c, sys_, s.first_agents, uses, simple(PK::minimally_anonymous));
        case Cond::use_role_int:
          return every(c, sys_, s.first_agents, uses, [&](const AgentId& i, const Action& a) {
            return PropertySpec::role_interchangeable(i, a, j, uses);
          });
        case Cond::post_privacy:
          return every(c, sys_, pseudonyms, posts,
                       [&](const AgentId& k, const Action& a) { return PropertySpec::private_up_to(k, a, posts, j); });
        case Cond::post_max_identity: return every(c, sys_, pseudonyms, posts, simple(PK::maximally_identified));
        case Cond::post_min_privacy: return every(c, sys_, pseudonyms, posts, simple(PK::minimally_private));
        case Cond::post_role_int:
          return every(c, sys_, pseudonyms, posts, [&](const AgentId& k, const Action& a) {
            return PropertySpec::role_interchangeable(k, a, j, posts);
          });
        case Cond::exhaustive_posting:
          return structural(c, {StructuralCondition::of(StructuralCondition::Kind::exhaustive_posting)});
        case Cond::exhaustive_registration:
          return structural(c, {StructuralCondition::of(StructuralCondition::Kind::exhaustive_registration)});
        case Cond::post_exclusivity: {
          std::vector<StructuralCondition> conds;
          for (const auto& a : posts) conds.push_back(StructuralCondition::exclusive_action_of(a));
          return structural(c, conds);
        }
        case Cond::agent_exclusivity: {
          std::vector<StructuralCondition> conds;
          for (const auto& i : s.first_agents) conds.push_back(StructuralCondition::exclusive_agent_of(i, s.first_family));
          return structural(c, conds);
        }
        case Cond::backward_causality:
          return structural(c, {StructuralCondition::of(StructuralCondition::Kind::backward_causality)});
        case Cond::reformulation: return reformulation();
        case Cond::submit_anonymity:
          return every(c, derived(), s.first_agents, s.derived_actions(), [&](const AgentId& i, const Action& a) {
            return PropertySpec::anonymous_up_to(i, a, s.first_agents, j);
          });
        case Cond::submit_privacy: {
          const auto submits = s.derived_actions();
          return every(c, derived(), s.first_agents, submits, [&](const AgentId& i, const Action& a) {
            return PropertySpec::private_up_to(i, a, submits, j);
          });
        }
        case Cond::submit_max_onymity:
          return every(c, derived(), s.first_agents, s.derived_actions(), simple(PK::maximally_onymous));
        case Cond::submit_min_privacy:
          return every(c, derived(), s.first_agents, s.derived_actions(), simple(PK::minimally_private));
        case Cond::submit_min_anonymity:
          return every(c, derived(), s.first_agents, s.derived_actions(), simple(PK::minimally_anonymous));
        case Cond::submit_role_int: {
          const auto submits = s.derived_actions();
          return every(c, derived(), s.first_agents, submits, [&](const AgentId& i, const Action& a) {
            return PropertySpec::role_interchangeable(i, a, j, submits);
          });
        }
        default: break;
      }
    } else {
      const auto& p = par();
      const auto as = p.actions_a();
      const auto bs = p.actions_b();
      const auto ps = p.derived_actions();
      const auto set_a = ctx_.anonymity_a.value_or(p.agents);
      const auto set_b = ctx_.anonymity_b.value_or(p.agents);
      auto anon = [&](const std::vector<AgentId>& set) {
        return [&j, set](const AgentId& i, const Action& a) { return PropertySpec::anonymous_up_to(i, a, set, j); };
      };
      auto priv = [&j](const std::vector<Action>& set) {
        return [&j, set](const AgentId& i, const Action& a) { return PropertySpec::private_up_to(i, a, set, j); };
      };
      switch (c) {
        case Cond::par_independence: return independence(c, IndependenceKind::parallel);
        case Cond::a_privacy: return every(c, sys_, p.agents, as, priv(as));
        case Cond::b_privacy: return every(c, sys_, p.agents, bs, priv(bs));
        case Cond::a_anonymity: return every(c, sys_, p.agents, as, anon(set_a));
        case Cond::b_anonymity: return every(c, sys_, p.agents, bs, anon(set_b));
        case Cond::a_or_b_min_privacy:
          for (const auto& i : p.agents)
            for (std::size_t k = 0; k < p.params.size(); ++k) {
              const auto sa = PropertySpec::simple(PK::minimally_private, i, as[k], j);
              const auto sb = PropertySpec::simple(PK::minimally_private, i, bs[k], j);
              if (!holds(sys_, sa) && !holds(sys_, sb)) {
                ConditionResult r = failure(c, sys_, sa);
                r.detail = "neither " + render(sa) + " nor " + render(sb);
                return r;
              }
            }
          return {std::string(cond_name(c)), true, {}};
        case Cond::a_max_identity: return every(c, sys_, p.agents, as, simple(PK::maximally_identified));
        case Cond::b_max_identity: return every(c, sys_, p.agents, bs, simple(PK::maximally_identified));
        case Cond::p_privacy: return every(c, derived(), p.agents, ps, priv(ps));
        case Cond::p_anonymity: {
          std::vector<AgentId> both;
          for (const auto& i : set_a)
            if (std::find(set_b.begin(), set_b.end(), i) != set_b.end()) both.push_back(i);
          return every(c, derived(), p.agents, ps, anon(both));
        }
        case Cond::p_min_privacy: return every(c, derived(), p.agents, ps, simple(PK::minimally_private));
        case Cond::p_max_identity: return every(c, derived(), p.agents, ps, simple(PK::maximally_identified));
        default: break;
      }
    }
    throw ValidationError("condition '" + std::string(cond_name(c)) + "' does not match the schema");
  }

  const InterpretedSystem& sys_;
  const ClaimContext& ctx_;
  Schema schema_;
  bool details_;
  std::optional<InterpretedSystem> derived_;
  std::map<Cond, ConditionResult> cache_;
};

ClaimReport run_claim(ClaimId id, Evaluator& ev, const std::string& system, const ClaimOptions& options) {
  const bool wants_seq = flavor(id) == Flavor::sequential;
  if (wants_seq != ev.sequential())
    throw ValidationError("claim " + std::string(to_string(id)) + " needs a " +
                          std::string(to_string(flavor(id))) + " schema");
  const ClaimShape sh = shape(id);
  for (const auto& d : options.dropped) {
    if (std::none_of(sh.hypotheses.begin(), sh.hypotheses.end(), [&](Cond c) { return cond_name(c) == d; }))
      throw ValidationError("claim " + std::string(to_string(id)) + " has no hypothesis '" + d + "'");
  }

  ClaimReport rep;
  rep.claim = id;
  rep.system = system;
  for (Cond c : sh.hypotheses) {
    if (std::find(options.dropped.begin(), options.dropped.end(), cond_name(c)) != options.dropped.end()) continue;
    if (options.lazy && !rep.hypotheses_hold) break;
    rep.hypotheses.push_back(ev.get(c));
    rep.hypotheses_hold = rep.hypotheses_hold && rep.hypotheses.back().holds;
  }

  if (options.lazy && !rep.hypotheses_hold) {
    rep.conclusion_evaluated = false;
    rep.verdict = ClaimVerdict::vacuous;
    return rep;
  }

  if (id == ClaimId::c3_1) {
    // Items (3) and (4) assert that the submit properties fail.
    for (Cond c : sh.conclusion) {
      ConditionResult r = ev.get(c);
      r.name = c == Cond::submit_anonymity ? "some-submit-not-anonymous" : "some-submit-not-private";
      r.holds = !r.holds;
      rep.conclusion.push_back(std::move(r));
    }
  } else {
    for (Cond c : sh.conclusion) rep.conclusion.push_back(ev.get(c));
  }
  rep.conclusion_holds =
      std::all_of(rep.conclusion.begin(), rep.conclusion.end(), [](const ConditionResult& r) { return r.holds; });

  if (!rep.hypotheses_hold)
    rep.verdict = ClaimVerdict::vacuous;
  else if (rep.conclusion_holds)
    rep.verdict = ClaimVerdict::confirmed;
  else
    rep.verdict = id == ClaimId::c3_1 ? ClaimVerdict::vacuous : ClaimVerdict::refuted;
  return rep;
}

}  // namespace

std::span<const ClaimId> all_claims() { return kClaims; }

std::string_view to_string(ClaimId id) {
  switch (id) {
    case ClaimId::c3_1: return "C3.1";
    case ClaimId::c3_2: return "C3.2";
    case ClaimId::c3_3: return "C3.3";
    case ClaimId::c3_4: return "C3.4";
    case ClaimId::c3_5: return "C3.5";
    case ClaimId::c4_1: return "C4.1";
    case ClaimId::c4_2: return "C4.2";
    case ClaimId::ca_1: return "CA.1";
    case ClaimId::ca_2: return "CA.2";
    case ClaimId::ca_3: return "CA.3";
    case ClaimId::ca_4: return "CA.4";
    case ClaimId::ca_5: return "CA.5";
    case ClaimId::ca_6: return "CA.6";
    case ClaimId::ca_7: return "CA.7";
    case ClaimId::cb_1: return "CB.1";
    case ClaimId::cb_2: return "CB.2";
    case ClaimId::l3_1: return "L3.1";
    case ClaimId::l3_2: return "L3.2";
    case ClaimId::la_1: return "LA.1";
    case ClaimId::la_2: return "LA.2";
    case ClaimId::la_3: return "LA.3";
    case ClaimId::appc_eq: return "APPC-EQ";
  }
  return "?";
}

std::optional<ClaimId> parse_claim_id(std::string_view text) {
  for (ClaimId id : kClaims)
    if (to_string(id) == text) return id;
  return std::nullopt;
}

Flavor flavor(ClaimId id) {
  switch (id) {
    case ClaimId::c4_1:
    case ClaimId::c4_2:
    case ClaimId::cb_1:
    case ClaimId::cb_2: return Flavor::parallel;
    default: return Flavor::sequential;
  }
}

std::string_view statement(ClaimId id) {
  switch (id) {
    case ClaimId::c3_1:
      return "some system has anonymous use and private post, yet submit is neither anonymous nor private";
    case ClaimId::c3_2: return "independence and private post give private submit";
    case ClaimId::c3_3: return "independence and anonymous use give anonymous submit";
    case ClaimId::c3_4: return "maximally onymous use and private post give private submit";
    case ClaimId::c3_5: return "anonymous use and maximally identified post give anonymous submit";
    case ClaimId::c4_1: return "parallel independence and private components give a private composite";
    case ClaimId::c4_2: return "parallel independence and anonymous components give a composite anonymous up to I_a and I_b";
    case ClaimId::ca_1: return "pairwise independence and role-interchangeable post give role-interchangeable submit";
    case ClaimId::ca_2: return "pairwise independence and role-interchangeable use give role-interchangeable submit";
    case ClaimId::ca_3:
      return "independence, exhaustive exclusive posting, exclusive agents and minimally private post give minimally private submit";
    case ClaimId::ca_4:
      return "independence, exhaustive registration, exclusivity and minimally anonymous use give minimally anonymous submit";
    case ClaimId::ca_5:
      return "exhaustive exclusive posting, exclusive agents, maximally onymous use and minimally private post give minimally private submit";
    case ClaimId::ca_6:
      return "exhaustive registration, exclusivity, minimally anonymous use and maximally identified post give minimally anonymous submit";
    case ClaimId::ca_7: return "maximally onymous use and maximally identified post give maximally onymous submit";
    case ClaimId::cb_1: return "a minimally private component gives a minimally private composite";
    case ClaimId::cb_2: return "maximally identified components give a maximally identified composite";
    case ClaimId::l3_1: return "maximally onymous use implies independence";
    case ClaimId::l3_2: return "maximally identified post implies independence";
    case ClaimId::la_1: return "independence extends to disjunctions";
    case ClaimId::la_2: return "independence with exhaustive exclusive posting gives the positive-negative form";
    case ClaimId::la_3: return "independence with exhaustive registration and exclusive agents gives the negative-positive form";
    case ClaimId::appc_eq: return "under backward causality independence matches its per-posting reformulation";
  }
  return "?";
}

std::vector<std::string> hypothesis_names(ClaimId id) {
  std::vector<std::string> out;
  for (Cond c : shape(id).hypotheses) out.emplace_back(cond_name(c));
  return out;
}

std::string conclusion_name(ClaimId id) {
  if (id == ClaimId::c3_1) return "submit-neither-anonymous-nor-private";
  return std::string(cond_name(shape(id).conclusion.front()));
}

std::string_view to_string(ClaimVerdict v) {
  switch (v) {
    case ClaimVerdict::confirmed: return "confirmed";
    case ClaimVerdict::vacuous: return "vacuous";
    case ClaimVerdict::refuted: return "REFUTED";
  }
  return "?";
}

ClaimReport check_claim(ClaimId id, const InterpretedSystem& sys, const ClaimContext& ctx,
                        const ClaimOptions& options) {
  Evaluator ev(sys, ctx, true);
  return run_claim(id, ev, sys.name(), options);
}

std::vector<ClaimReport> check_claims(std::span<const ClaimId> ids, const InterpretedSystem& sys,
                                      const ClaimContext& ctx, const ClaimOptions& options) {
  Evaluator ev(sys, ctx, true);
  std::vector<ClaimReport> out;
  for (ClaimId id : ids) out.push_back(run_claim(id, ev, sys.name(), options));
  return out;
}

ClaimContext paper_context(std::string_view name) {
  ClaimContext ctx;
  ctx.schema = paper_schema(name);
  return ctx;
}

// ---------------------------------------------------------------------------
// Sweeps

namespace {

void tally(SweepStats& s, ClaimVerdict v, bool exhaustive) {
  ++s.systems;
  ++(exhaustive ? s.exhaustive_systems : s.random_systems);
  switch (v) {
    case ClaimVerdict::confirmed: ++s.confirmed; break;
    case ClaimVerdict::vacuous: ++s.vacuous; break;
    case ClaimVerdict::refuted: ++s.refuted; break;
  }
}

std::vector<AgentId> random_subset(const std::vector<AgentId>& agents, std::mt19937_64& rng) {
  std::vector<AgentId> out;
  while (out.empty())
    for (const auto& a : agents)
      if (rng() & 1U) out.push_back(a);
  return out;
}

}  // namespace

FalsifyResult falsify(ClaimId id, const GenConfig& cfg, const ClaimOptions& options) {
  validate(cfg);
  GenConfig gen = cfg;
  gen.flavor = flavor(id);
  ClaimOptions opts = options;
  opts.lazy = true;

  FalsifyResult result;
  result.claim = id;
  auto visit = [&](const InterpretedSystem& sys, bool exhaustive) {
    ClaimContext ctx;
    ctx.schema = generated_schema(sys, gen.flavor);
    Evaluator ev(sys, ctx, false);
    ClaimReport rep = run_claim(id, ev, sys.name(), opts);
    tally(result.stats, rep.verdict, exhaustive);
    if (rep.verdict != ClaimVerdict::refuted) return true;
    result.counterexample = sys;
    result.report = check_claim(id, sys, ctx, {options.dropped, false});
    return false;
  };
  if (gen.exhaustive) {
    enumerate_small_systems(gen, [&](const InterpretedSystem& sys) { return visit(sys, true); });
    if (result.counterexample) return result;
  }
  for (std::uint64_t n = 0; n < gen.budget; ++n)
    if (!visit(random_system(gen, n), false)) break;
  return result;
}

InterpretedSystem sweep_sample(const SweepConfig& cfg, Flavor fl, std::uint64_t index) {
  GenConfig gen;
  gen.flavor = fl;
  gen.real_agents = gen.pseudonyms = gen.articles = cfg.max_entities;
  gen.max_runs = cfg.max_runs;
  gen.vary_sizes = true;
  gen.seed = cfg.seed;
  gen.policy = index % 2 == 0 ? PartitionPolicy::single_block : PartitionPolicy::random_partition;
  return random_system(gen, index);
}

std::vector<SweepEntry> sweep(std::span<const ClaimId> ids, const SweepConfig& cfg) {
  std::vector<SweepEntry> entries;
  for (ClaimId id : ids) entries.push_back({id, {}, std::nullopt});
  const ClaimOptions lazy{{}, true};

  auto visit = [&](const InterpretedSystem& sys, Flavor fl, bool exhaustive, std::mt19937_64* rng) {
    ClaimContext ctx;
    ctx.schema = generated_schema(sys, fl);
    if (fl == Flavor::parallel && rng) {
      const auto& agents = std::get<ParallelSchema>(ctx.schema).agents;
      ctx.anonymity_a = random_subset(agents, *rng);
      ctx.anonymity_b = random_subset(agents, *rng);
    }
    Evaluator ev(sys, ctx, false);
    for (auto& e : entries) {
      if (flavor(e.claim) != fl) continue;
      const ClaimReport rep = run_claim(e.claim, ev, sys.name(), lazy);
      tally(e.stats, rep.verdict, exhaustive);
      if (rep.verdict == ClaimVerdict::refuted && !e.first_refutation) e.first_refutation = sys;
    }
  };

  for (Flavor fl : {Flavor::sequential, Flavor::parallel}) {
    if (std::none_of(entries.begin(), entries.end(), [&](const SweepEntry& e) { return flavor(e.claim) == fl; }))
      continue;
    if (cfg.exhaustive) {
      GenConfig sizes;
      sizes.flavor = fl;
      enumerate_small_systems(sizes, [&](const InterpretedSystem& sys) {
        visit(sys, fl, true, nullptr);
        return true;
      });
    }
    std::mt19937_64 rng(cfg.seed ^ 0x5eedULL);
    for (std::uint64_t n = 0; n < cfg.random_samples; ++n) visit(sweep_sample(cfg, fl, n), fl, false, &rng);
  }
  return entries;
}

}  // namespace epicomp
