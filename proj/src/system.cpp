#include "epicomp/system.hpp"

#include <algorithm>
#include <set>

#include "epicomp/error.hpp"

namespace epicomp {

std::string_view to_string(AgentRole role) {
  switch (role) {
    case AgentRole::real_name: return "real";
    case AgentRole::pseudonym: return "pseudo";
    case AgentRole::observer: return "observer";
    case AgentRole::unspecified: break;
  }
  return "";
}

std::string to_string(const Action& action) {
  if (action.param.empty()) return action.family;
  return action.family + "(" + action.param + ")";
}

std::string to_string(const Fact& fact) {
  return "theta(" + fact.agent.name + ", " + to_string(fact.action) + ")";
}

InterpretedSystem build_system(SystemDeclaration declaration) {
  InterpretedSystem sys;
  auto& decl = sys.decl_;
  decl = std::move(declaration);

  for (std::size_t a = 0; a < decl.agents.size(); ++a) {
    const auto& name = decl.agents[a].id.name;
    if (name.empty()) throw ValidationError("agent with empty name");
    if (!sys.agent_ix_.emplace(name, a).second) throw ValidationError("duplicate agent '" + name + "'");
  }
  for (std::size_t a = 0; a < decl.actions.size(); ++a) {
    if (decl.actions[a].family.empty()) throw ValidationError("action with empty family");
    if (!sys.action_ix_.emplace(decl.actions[a], a).second)
      throw ValidationError("duplicate action '" + to_string(decl.actions[a]) + "'");
  }
  if (decl.runs.empty()) throw ValidationError("system has no runs");

  const std::size_t n_runs = decl.runs.size();
  const std::size_t n_actions = decl.actions.size();
  sys.extensions_.assign(decl.agents.size() * n_actions, RunSet(n_runs));

  for (std::size_t r = 0; r < n_runs; ++r) {
    auto& run = decl.runs[r];
    if (run.id.empty()) throw ValidationError("run with empty id");
    if (!sys.run_ix_.emplace(run.id, r).second) throw ValidationError("duplicate run id '" + run.id + "'");

    std::set<std::pair<std::size_t, std::size_t>> keyed;
    for (const auto& fact : run.facts) {
      auto ai = sys.agent_ix_.find(fact.agent.name);
      if (ai == sys.agent_ix_.end())
        throw ValidationError("undeclared agent '" + fact.agent.name + "' in run " + run.id);
      auto ci = sys.action_ix_.find(fact.action);
      if (ci == sys.action_ix_.end())
        throw ValidationError("undeclared action '" + to_string(fact.action) + "' in run " + run.id);
      keyed.emplace(ai->second, ci->second);
    }
    run.facts.clear();
    for (auto [a, c] : keyed) {
      run.facts.push_back(Fact{decl.agents[a].id, decl.actions[c]});
      sys.extensions_[a * n_actions + c].set(r);
    }
  }

  std::set<std::string> seen_observers;
  for (auto& part : decl.partitions) {
    if (!sys.agent_ix_.contains(part.observer.name))
      throw ValidationError("partition for undeclared observer '" + part.observer.name + "'");
    if (!seen_observers.insert(part.observer.name).second)
      throw ValidationError("observer '" + part.observer.name + "' has two partitions");

    InterpretedSystem::ObserverIndex index;
    index.block_of.assign(n_runs, n_runs);
    std::vector<std::vector<std::size_t>> blocks;
    for (const auto& block : part.blocks) {
      if (block.empty()) throw ValidationError("empty block in partition of " + part.observer.name);
      std::vector<std::size_t> members;
      for (const auto& id : block) {
        auto it = sys.run_ix_.find(id);
        if (it == sys.run_ix_.end())
          throw ValidationError("partition of " + part.observer.name + " names unknown run '" + id + "'");
        members.push_back(it->second);
      }
      std::sort(members.begin(), members.end());
      blocks.push_back(std::move(members));
    }
    std::sort(blocks.begin(), blocks.end());
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      RunSet set(n_runs);
      for (auto r : blocks[b]) {
        if (index.block_of[r] != n_runs)
          throw ValidationError("run '" + decl.runs[r].id + "' appears twice in partition of " +
                                part.observer.name);
        index.block_of[r] = b;
        set.set(r);
      }
      index.blocks.push_back(std::move(set));
    }
    if (std::find(index.block_of.begin(), index.block_of.end(), n_runs) != index.block_of.end())
      throw ValidationError("partition does not cover runs (observer " + part.observer.name + ")");

    part.blocks.clear();
    for (const auto& members : blocks) {
      std::vector<std::string> ids;
      for (auto r : members) ids.push_back(decl.runs[r].id);
      part.blocks.push_back(std::move(ids));
    }
    sys.observers_.emplace(part.observer, std::move(index));
  }
  std::sort(decl.partitions.begin(), decl.partitions.end(), [&](const auto& x, const auto& y) {
    return sys.agent_ix_.at(x.observer.name) < sys.agent_ix_.at(y.observer.name);
  });
  return sys;
}

std::optional<std::size_t> InterpretedSystem::agent_index(std::string_view name) const {
  auto it = agent_ix_.find(std::string(name));
  if (it == agent_ix_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> InterpretedSystem::action_index(const Action& action) const {
  auto it = action_ix_.find(action);
  if (it == action_ix_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> InterpretedSystem::run_index(std::string_view id) const {
  auto it = run_ix_.find(std::string(id));
  if (it == run_ix_.end()) return std::nullopt;
  return it->second;
}

std::vector<AgentId> InterpretedSystem::agents_with_role(AgentRole role) const {
  std::vector<AgentId> out;
  for (const auto& a : decl_.agents)
    if (a.role == role) out.push_back(a.id);
  return out;
}

std::vector<Action> InterpretedSystem::actions_of_family(std::string_view family) const {
  std::vector<Action> out;
  for (const auto& a : decl_.actions)
    if (a.family == family) out.push_back(a);
  return out;
}

bool InterpretedSystem::has_observer(const AgentId& observer) const { return observers_.contains(observer); }

const InterpretedSystem::ObserverIndex& InterpretedSystem::observer_index(const AgentId& observer) const {
  auto it = observers_.find(observer);
  if (it == observers_.end()) throw EvaluationError("observer '" + observer.name + "' has no partition");
  return it->second;
}

std::span<const std::size_t> InterpretedSystem::block_of(const AgentId& observer) const {
  return observer_index(observer).block_of;
}

std::span<const RunSet> InterpretedSystem::blocks(const AgentId& observer) const {
  return observer_index(observer).blocks;
}

const RunSet& InterpretedSystem::kernel(const AgentId& observer, std::size_t run) const {
  const auto& index = observer_index(observer);
  return index.blocks[index.block_of.at(run)];
}

std::vector<std::string> InterpretedSystem::kernel(const AgentId& observer, std::string_view run_id) const {
  auto r = run_index(run_id);
  if (!r) throw ValidationError("unknown run '" + std::string(run_id) + "'");
  std::vector<std::string> ids;
  kernel(observer, *r).for_each([&](std::size_t k) { ids.push_back(decl_.runs[k].id); });
  return ids;
}

RunSet InterpretedSystem::possible_closure(const AgentId& observer, const RunSet& runs) const {
  RunSet out(run_count());
  for (const auto& block : observer_index(observer).blocks)
    if (block.intersects(runs)) out |= block;
  return out;
}

RunSet InterpretedSystem::known_interior(const AgentId& observer, const RunSet& runs) const {
  RunSet out(run_count());
  for (const auto& block : observer_index(observer).blocks)
    if (block.is_subset_of(runs)) out |= block;
  return out;
}

const RunSet* InterpretedSystem::extension(const AgentId& agent, const Action& action) const {
  auto a = agent_index(agent.name);
  auto c = action_index(action);
  if (!a || !c) return nullptr;
  return &extension(*a, *c);
}

bool InterpretedSystem::holds(std::string_view run_id, const AgentId& agent, const Action& action) const {
  auto r = run_index(run_id);
  if (!r) throw ValidationError("unknown run '" + std::string(run_id) + "'");
  const RunSet* ext = extension(agent, action);
  return ext != nullptr && ext->test(*r);
}

bool operator==(const InterpretedSystem& a, const InterpretedSystem& b) {
  return a.decl_.name == b.decl_.name && a.decl_.agents == b.decl_.agents && a.decl_.actions == b.decl_.actions &&
         a.decl_.runs == b.decl_.runs && a.decl_.partitions == b.decl_.partitions;
}

InterpretedSystem with_partition(const InterpretedSystem& system, const ObserverPartition& partition) {
  SystemDeclaration decl = system.declaration();
  auto it = std::find_if(decl.partitions.begin(), decl.partitions.end(),
                         [&](const auto& p) { return p.observer == partition.observer; });
  if (it == decl.partitions.end())
    decl.partitions.push_back(partition);
  else
    *it = partition;
  return build_system(std::move(decl));
}

}  // namespace epicomp
