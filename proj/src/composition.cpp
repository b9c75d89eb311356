#include "epicomp/composition.hpp"

#include <algorithm>
#include <set>

#include <boost/container/small_vector.hpp>

#include "epicomp/error.hpp"
#include "surface_lexer.hpp"

namespace epicomp {

std::vector<AgentId> SequentialSchema::pseudonyms() const {
  std::vector<AgentId> out;
  for (const auto& k : first_params) out.push_back(AgentId{k});
  return out;
}

std::vector<Action> SequentialSchema::first_actions() const {
  std::vector<Action> out;
  for (const auto& k : first_params) out.push_back(first_action(k));
  return out;
}

std::vector<Action> SequentialSchema::second_actions() const {
  std::vector<Action> out;
  for (const auto& c : second_params) out.push_back(second_action(c));
  return out;
}

std::vector<Action> SequentialSchema::derived_actions() const {
  std::vector<Action> out;
  for (const auto& c : second_params) out.push_back(derived_action(c));
  return out;
}

std::vector<Action> ParallelSchema::actions_a() const {
  std::vector<Action> out;
  for (const auto& c : params) out.push_back({family_a, c});
  return out;
}

std::vector<Action> ParallelSchema::actions_b() const {
  std::vector<Action> out;
  for (const auto& c : params) out.push_back({family_b, c});
  return out;
}

std::vector<Action> ParallelSchema::derived_actions() const {
  std::vector<Action> out;
  for (const auto& c : params) out.push_back({derived_family, c});
  return out;
}

std::string_view to_string(IndependenceKind kind) {
  switch (kind) {
    case IndependenceKind::basic: return "basic";
    case IndependenceKind::pairwise: return "pairwise";
    case IndependenceKind::disjunctive: return "disjunctive";
    case IndependenceKind::pos_neg: return "posneg";
    case IndependenceKind::neg_pos: return "negpos";
    case IndependenceKind::parallel: return "parallel";
  }
  return "?";
}

std::optional<IndependenceKind> parse_independence_kind(std::string_view text) {
  for (auto k : {IndependenceKind::basic, IndependenceKind::pairwise, IndependenceKind::disjunctive,
                 IndependenceKind::pos_neg, IndependenceKind::neg_pos, IndependenceKind::parallel})
    if (to_string(k) == text) return k;
  return std::nullopt;
}

std::string to_string(const StructuralCondition& cond) {
  using K = StructuralCondition::Kind;
  switch (cond.kind) {
    case K::exclusive_action: return "exclusive action " + to_string(cond.action);
    case K::exclusive_agent: return "exclusive agent " + cond.agent.name + " w.r.t. " + cond.family;
    case K::exhaustive_posting: return "exhaustive posting";
    case K::exhaustive_registration: return "exhaustive registration";
    case K::backward_causality: return "backward causality";
    case K::forward_causality: return "forward causality";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Schema validation and defaults

namespace {

void require_agent(const InterpretedSystem& sys, const AgentId& a, const char* what) {
  if (!sys.agent_index(a.name))
    throw ValidationError(std::string("schema ") + what + " names undeclared agent '" + a.name + "'");
}

void require_action(const InterpretedSystem& sys, const Action& a) {
  if (!sys.action_index(a)) throw ValidationError("schema names undeclared action '" + to_string(a) + "'");
}

bool is_observer(const InterpretedSystem& sys, const Agent& agent) {
  return agent.role == AgentRole::observer || sys.has_observer(agent.id);
}

}  // namespace

void validate_schema(const InterpretedSystem& sys, const Schema& schema) {
  if (const auto* seq = std::get_if<SequentialSchema>(&schema)) {
    for (const auto& i : seq->first_agents) require_agent(sys, i, "I_R");
    for (const auto& k : seq->pseudonyms()) require_agent(sys, k, "I_P");
    for (const auto& a : seq->first_actions()) require_action(sys, a);
    for (const auto& a : seq->second_actions()) require_action(sys, a);
  } else {
    const auto& par = std::get<ParallelSchema>(schema);
    for (const auto& i : par.agents) require_agent(sys, i, "agent set");
    for (const auto& a : par.actions_a()) require_action(sys, a);
    for (const auto& a : par.actions_b()) require_action(sys, a);
  }
}

Schema resolve_schema(const InterpretedSystem& sys, Schema schema) {
  if (auto* seq = std::get_if<SequentialSchema>(&schema)) {
    if (seq->first_agents.empty()) {
      seq->first_agents = sys.agents_with_role(AgentRole::real_name);
      if (seq->first_agents.empty()) {
        for (const auto& agent : sys.agents()) {
          bool performs = false;
          for (const auto& a : seq->first_actions()) {
            const RunSet* ext = sys.extension(agent.id, a);
            performs = performs || (ext && ext->any());
          }
          if (performs) seq->first_agents.push_back(agent.id);
        }
      }
    }
  } else {
    auto& par = std::get<ParallelSchema>(schema);
    if (par.agents.empty())
      for (const auto& agent : sys.agents())
        if (!is_observer(sys, agent)) par.agents.push_back(agent.id);
  }
  validate_schema(sys, schema);
  return schema;
}

// ---------------------------------------------------------------------------
// Derivation

namespace {

void require_fresh(const InterpretedSystem& sys, const std::string& family) {
  if (!sys.actions_of_family(family).empty())
    throw ValidationError("derived family '" + family + "' already present");
}

}  // namespace

InterpretedSystem derive_sequential(const InterpretedSystem& sys, const SequentialSchema& raw) {
  const SequentialSchema schema = std::get<SequentialSchema>(resolve_schema(sys, raw));
  require_fresh(sys, schema.derived_family);

  SystemDeclaration decl = sys.declaration();
  for (const auto& c : schema.second_params) decl.actions.push_back(schema.derived_action(c));

  std::vector<std::size_t> first_ix, second_ix, pseudo_ix, real_ix;
  for (const auto& k : schema.first_params) {
    first_ix.push_back(*sys.action_index(schema.first_action(k)));
    pseudo_ix.push_back(*sys.agent_index(k));
  }
  for (const auto& c : schema.second_params) second_ix.push_back(*sys.action_index(schema.second_action(c)));
  for (const auto& i : schema.first_agents) real_ix.push_back(*sys.agent_index(i.name));

  for (std::size_t r = 0; r < sys.run_count(); ++r) {
    for (std::size_t ii = 0; ii < real_ix.size(); ++ii) {
      for (std::size_t cc = 0; cc < second_ix.size(); ++cc) {
        bool submits = false;
        for (std::size_t kk = 0; kk < pseudo_ix.size() && !submits; ++kk)
          submits = sys.holds(r, real_ix[ii], first_ix[kk]) && sys.holds(r, pseudo_ix[kk], second_ix[cc]);
        if (submits)
          decl.runs[r].facts.push_back(Fact{schema.first_agents[ii], schema.derived_action(schema.second_params[cc])});
      }
    }
  }
  return build_system(std::move(decl));
}

InterpretedSystem derive_parallel(const InterpretedSystem& sys, const ParallelSchema& schema) {
  validate_schema(sys, schema);
  require_fresh(sys, schema.derived_family);

  SystemDeclaration decl = sys.declaration();
  for (const auto& a : schema.derived_actions()) decl.actions.push_back(a);
  const auto as = schema.actions_a();
  const auto bs = schema.actions_b();
  const auto ps = schema.derived_actions();

  for (std::size_t r = 0; r < sys.run_count(); ++r)
    for (const auto& agent : sys.agents())
      for (std::size_t c = 0; c < ps.size(); ++c)
        if (sys.extension(agent.id, as[c])->test(r) && sys.extension(agent.id, bs[c])->test(r))
          decl.runs[r].facts.push_back(Fact{agent.id, ps[c]});
  return build_system(std::move(decl));
}

InterpretedSystem derive(const InterpretedSystem& sys, const Schema& schema) {
  if (const auto* seq = std::get_if<SequentialSchema>(&schema)) return derive_sequential(sys, *seq);
  return derive_parallel(sys, std::get<ParallelSchema>(schema));
}

InterpretedSystem erase_family(const InterpretedSystem& sys, std::string_view family) {
  SystemDeclaration decl = sys.declaration();
  std::erase_if(decl.actions, [&](const Action& a) { return a.family == family; });
  for (auto& run : decl.runs)
    std::erase_if(run.facts, [&](const Fact& f) { return f.action.family == family; });
  return build_system(std::move(decl));
}

// ---------------------------------------------------------------------------
// Independence

namespace {

struct Literal {
  std::size_t agent;
  std::size_t action;
  bool positive = true;
};

using LiteralList = boost::container::small_vector<Literal, 4>;

/// Instantiations of an independence condition: every left list paired with
/// every right list (product), or left[n] with right[n] (zip).
struct InstanceSpace {
  std::vector<LiteralList> left;
  std::vector<LiteralList> right;
  bool disjunctive = false;
  bool zipped = false;
};

std::vector<std::vector<std::size_t>> combinations_up_to(std::size_t n, std::size_t bound) {
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t len = 1; len <= std::min(bound, n); ++len) {
    std::vector<std::size_t> idx(len);
    for (std::size_t k = 0; k < len; ++k) idx[k] = k;
    while (true) {
      out.push_back(idx);
      std::size_t pos = len;
      while (pos > 0 && idx[pos - 1] == n - len + pos - 1) --pos;
      if (pos == 0) break;
      ++idx[pos - 1];
      for (std::size_t k = pos; k < len; ++k) idx[k] = idx[k - 1] + 1;
    }
  }
  return out;
}

InstanceSpace instance_space(const InterpretedSystem& sys, const Schema& raw, IndependenceKind kind,
                             const IndependenceOptions& options) {
  const bool parallel_kind = kind == IndependenceKind::parallel;
  if (parallel_kind != std::holds_alternative<ParallelSchema>(raw))
    throw ValidationError("independence kind '" + std::string(to_string(kind)) + "' does not match the schema");
  const Schema schema = resolve_schema(sys, raw);

  InstanceSpace space;
  if (parallel_kind) {
    const auto& par = std::get<ParallelSchema>(schema);
    space.zipped = true;
    const auto as = par.actions_a();
    const auto bs = par.actions_b();
    for (const auto& i : par.agents) {
      const std::size_t ai = *sys.agent_index(i.name);
      for (std::size_t c = 0; c < as.size(); ++c) {
        space.left.push_back({Literal{ai, *sys.action_index(as[c])}});
        space.right.push_back({Literal{ai, *sys.action_index(bs[c])}});
      }
    }
    return space;
  }

  const auto& seq = std::get<SequentialSchema>(schema);
  std::vector<Literal> uses, posts;
  for (const auto& i : seq.first_agents)
    for (const auto& k : seq.first_params)
      uses.push_back(Literal{*sys.agent_index(i.name), *sys.action_index(seq.first_action(k))});
  for (const auto& k : seq.first_params)
    for (const auto& c : seq.second_params)
      posts.push_back(Literal{*sys.agent_index(k), *sys.action_index(seq.second_action(c))});

  const std::size_t n_real = seq.first_agents.size();
  const std::size_t n_pseudo = seq.first_params.size();
  const std::size_t n_art = seq.second_params.size();
  auto use_at = [&](std::size_t i, std::size_t k) { return uses[i * n_pseudo + k]; };
  auto post_at = [&](std::size_t k, std::size_t c) { return posts[k * n_art + c]; };

  switch (kind) {
    case IndependenceKind::basic:
    case IndependenceKind::pos_neg:
    case IndependenceKind::neg_pos:
      for (auto u : uses) {
        u.positive = kind != IndependenceKind::neg_pos;
        space.left.push_back({u});
      }
      for (auto p : posts) {
        p.positive = kind != IndependenceKind::pos_neg;
        space.right.push_back({p});
      }
      break;
    case IndependenceKind::pairwise:
      for (std::size_t i0 = 0; i0 < n_real; ++i0)
        for (std::size_t i1 = 0; i1 < n_real; ++i1)
          for (std::size_t k0 = 0; k0 < n_pseudo; ++k0)
            for (std::size_t k1 = 0; k1 < n_pseudo; ++k1) space.left.push_back({use_at(i0, k0), use_at(i1, k1)});
      for (std::size_t k0 = 0; k0 < n_pseudo; ++k0)
        for (std::size_t k1 = 0; k1 < n_pseudo; ++k1)
          for (std::size_t c0 = 0; c0 < n_art; ++c0)
            for (std::size_t c1 = 0; c1 < n_art; ++c1) space.right.push_back({post_at(k0, c0), post_at(k1, c1)});
      break;
    case IndependenceKind::disjunctive:
      space.disjunctive = true;
      for (const auto& combo : combinations_up_to(uses.size(), options.disjunct_bound)) {
        LiteralList list;
        for (auto x : combo) list.push_back(uses[x]);
        space.left.push_back(std::move(list));
      }
      for (const auto& combo : combinations_up_to(posts.size(), options.disjunct_bound)) {
        LiteralList list;
        for (auto x : combo) list.push_back(posts[x]);
        space.right.push_back(std::move(list));
      }
      break;
    case IndependenceKind::parallel: break;
  }
  return space;
}

RunSet side_runs(const InterpretedSystem& sys, const LiteralList& list, bool disjunctive) {
  RunSet acc = disjunctive ? RunSet(sys.run_count()) : RunSet::full(sys.run_count());
  for (const auto& lit : list) {
    const RunSet& ext = sys.extension(lit.agent, lit.action);
    RunSet term = lit.positive ? ext : ext.complement();
    if (disjunctive)
      acc |= term;
    else
      acc &= term;
  }
  return acc;
}

Formula side_formula(const InterpretedSystem& sys, const LiteralList& list, bool disjunctive) {
  std::vector<Formula> parts;
  for (const auto& lit : list) {
    Formula atom = Formula::atom(Fact{sys.agents()[lit.agent].id, sys.actions()[lit.action]});
    parts.push_back(lit.positive ? atom : Formula::negation(atom));
  }
  return disjunctive ? Formula::disjunction_of(parts) : Formula::conjunction_of(parts);
}

/// (P_j L & P_j R) -> P_j (L & R)
Formula instance_formula(const AgentId& observer, const Formula& left, const Formula& right) {
  return Formula::implication(Formula::conjunction(Formula::possible(observer, left), Formula::possible(observer, right)),
                              Formula::possible(observer, Formula::conjunction(left, right)));
}

std::string condition_name(IndependenceKind kind) { return std::string(to_string(kind)) + " independence"; }

}  // namespace

ConditionReport check_independence(const InterpretedSystem& sys, const AgentId& observer, const Schema& schema,
                                   IndependenceKind kind, const IndependenceOptions& options) {
  const InstanceSpace space = instance_space(sys, schema, kind, options);
  ConditionReport report{condition_name(kind), true, std::nullopt, std::nullopt};

  std::vector<RunSet> left_runs, right_runs, left_closure, right_closure;
  for (const auto& l : space.left) {
    left_runs.push_back(side_runs(sys, l, space.disjunctive));
    left_closure.push_back(sys.possible_closure(observer, left_runs.back()));
  }
  for (const auto& r : space.right) {
    right_runs.push_back(side_runs(sys, r, space.disjunctive));
    right_closure.push_back(sys.possible_closure(observer, right_runs.back()));
  }

  auto try_pair = [&](std::size_t l, std::size_t r) {
    RunSet both_possible = left_closure[l] & right_closure[r];
    if (both_possible.none()) return false;
    RunSet joint = sys.possible_closure(observer, left_runs[l] & right_runs[r]);
    RunSet failing = both_possible & joint.complement();
    auto run = failing.first();
    if (!run) return false;
    report.holds = false;
    report.counterexample_run = sys.runs()[*run].id;
    report.failing_instance = render(instance_formula(observer, side_formula(sys, space.left[l], space.disjunctive),
                                                      side_formula(sys, space.right[r], space.disjunctive)));
    return true;
  };

  if (space.zipped) {
    for (std::size_t n = 0; n < space.left.size(); ++n)
      if (try_pair(n, n)) return report;
  } else {
    for (std::size_t l = 0; l < space.left.size(); ++l)
      for (std::size_t r = 0; r < space.right.size(); ++r)
        if (try_pair(l, r)) return report;
  }
  return report;
}

Formula independence_formula(const InterpretedSystem& sys, const AgentId& observer, const Schema& schema,
                             IndependenceKind kind, const IndependenceOptions& options) {
  const InstanceSpace space = instance_space(sys, schema, kind, options);
  std::vector<Formula> left, right, parts;
  for (const auto& l : space.left) left.push_back(side_formula(sys, l, space.disjunctive));
  for (const auto& r : space.right) right.push_back(side_formula(sys, r, space.disjunctive));
  if (space.zipped) {
    for (std::size_t n = 0; n < left.size(); ++n) parts.push_back(instance_formula(observer, left[n], right[n]));
  } else {
    for (const auto& l : left)
      for (const auto& r : right) parts.push_back(instance_formula(observer, l, r));
  }
  return Formula::conjunction_of(parts);
}

// ---------------------------------------------------------------------------
// Structural conditions

namespace {

std::vector<Formula> structural_conjuncts(const InterpretedSystem& sys, const SequentialSchema& raw,
                                          const StructuralCondition& cond) {
  using K = StructuralCondition::Kind;
  const SequentialSchema schema = std::get<SequentialSchema>(resolve_schema(sys, raw));
  auto theta = [](const AgentId& i, const Action& a) { return Formula::atom(Fact{i, a}); };
  std::vector<Formula> out;

  switch (cond.kind) {
    case K::exclusive_action: {
      std::vector<AgentId> performers;
      if (cond.action.family == schema.first_family)
        performers = schema.first_agents;
      else if (cond.action.family == schema.second_family)
        performers = schema.pseudonyms();
      else
        for (const auto& a : sys.agents()) performers.push_back(a.id);
      for (std::size_t p = 0; p < performers.size(); ++p)
        for (std::size_t q = p + 1; q < performers.size(); ++q)
          out.push_back(Formula::negation(
              Formula::conjunction(theta(performers[p], cond.action), theta(performers[q], cond.action))));
      break;
    }
    case K::exclusive_agent: {
      std::vector<Action> options;
      if (cond.family == schema.first_family)
        options = schema.first_actions();
      else if (cond.family == schema.second_family)
        options = schema.second_actions();
      else
        options = sys.actions_of_family(cond.family);
      for (std::size_t p = 0; p < options.size(); ++p)
        for (std::size_t q = p + 1; q < options.size(); ++q)
          out.push_back(
              Formula::negation(Formula::conjunction(theta(cond.agent, options[p]), theta(cond.agent, options[q]))));
      break;
    }
    case K::exhaustive_posting:
      for (const auto& c : schema.second_params) {
        std::vector<Formula> any;
        for (const auto& k : schema.pseudonyms()) any.push_back(theta(k, schema.second_action(c)));
        out.push_back(Formula::disjunction_of(any));
      }
      break;
    case K::exhaustive_registration:
      for (const auto& i : schema.first_agents) {
        std::vector<Formula> any;
        for (const auto& k : schema.first_params) any.push_back(theta(i, schema.first_action(k)));
        out.push_back(Formula::disjunction_of(any));
      }
      break;
    case K::backward_causality:
      for (const auto& k : schema.pseudonyms()) {
        std::vector<Formula> users;
        for (const auto& i : schema.first_agents) users.push_back(theta(i, schema.first_action(k.name)));
        for (const auto& c : schema.second_params)
          out.push_back(Formula::implication(theta(k, schema.second_action(c)), Formula::disjunction_of(users)));
      }
      break;
    case K::forward_causality:
      for (const auto& i : schema.first_agents)
        for (const auto& k : schema.pseudonyms()) {
          std::vector<Formula> posts;
          for (const auto& c : schema.second_params) posts.push_back(theta(k, schema.second_action(c)));
          out.push_back(Formula::implication(theta(i, schema.first_action(k.name)), Formula::disjunction_of(posts)));
        }
      break;
  }
  return out;
}

}  // namespace

Formula structural_formula(const InterpretedSystem& sys, const SequentialSchema& schema,
                           const StructuralCondition& cond) {
  return Formula::conjunction_of(structural_conjuncts(sys, schema, cond));
}

ConditionReport check_structural(const InterpretedSystem& sys, const SequentialSchema& schema,
                                 const StructuralCondition& cond) {
  const auto conjuncts = structural_conjuncts(sys, schema, cond);
  ConditionReport report{to_string(cond), true, std::nullopt, std::nullopt};
  Verdict v = valid(sys, Formula::conjunction_of(conjuncts));
  if (v.holds) return report;
  report.holds = false;
  report.counterexample_run = v.counterexample;
  const std::size_t run = *sys.run_index(*v.counterexample);
  for (const auto& c : conjuncts) {
    if (!eval(sys, run, c)) {
      report.failing_instance = render(c);
      break;
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Surface syntax

Schema parse_schema(std::string_view text) {
  detail::SurfaceLexer lex(text);
  const std::string head = lex.name();
  if (head == "seq") {
    SequentialSchema s;
    s.first_family = lex.name();
    lex.expect(":");
    lex.name();  // I_P label
    lex.expect("=");
    s.first_params = lex.name_set();
    s.second_family = lex.name();
    lex.expect(":");
    lex.name();  // C label
    lex.expect("=");
    s.second_params = lex.name_set();
    lex.expect("=>");
    s.derived_family = lex.name();
    if (!lex.at_end()) {
      lex.name();  // I_R label
      lex.expect("=");
      for (auto& n : lex.name_set()) s.first_agents.push_back(AgentId{std::move(n)});
    }
    if (!lex.at_end()) lex.fail("trailing input");
    return s;
  }
  if (head == "par") {
    ParallelSchema p;
    p.family_a = lex.name();
    lex.expect("+");
    p.family_b = lex.name();
    lex.expect("=>");
    p.derived_family = lex.name();
    lex.expect(":");
    lex.name();  // C label
    lex.expect("=");
    p.params = lex.name_set();
    if (!lex.at_end()) {
      lex.name();  // I label
      lex.expect("=");
      for (auto& n : lex.name_set()) p.agents.push_back(AgentId{std::move(n)});
    }
    if (!lex.at_end()) lex.fail("trailing input");
    return p;
  }
  throw ParseError("schema must start with 'seq' or 'par'", 0, 1);
}

std::string render(const Schema& schema) {
  auto join = [](const auto& items, auto&& name_of) {
    std::string s = "{";
    for (std::size_t k = 0; k < items.size(); ++k) s += (k ? "," : "") + name_of(items[k]);
    return s + "}";
  };
  auto str = [](const std::string& x) { return x; };
  auto agent = [](const AgentId& x) { return x.name; };
  if (const auto* seq = std::get_if<SequentialSchema>(&schema)) {
    std::string out = "seq " + seq->first_family + ":I_P=" + join(seq->first_params, str) + " " +
                      seq->second_family + ":C=" + join(seq->second_params, str) + " => " + seq->derived_family;
    if (!seq->first_agents.empty()) out += " I_R=" + join(seq->first_agents, agent);
    return out;
  }
  const auto& par = std::get<ParallelSchema>(schema);
  std::string out = "par " + par.family_a + " + " + par.family_b + " => " + par.derived_family +
                    " : C=" + join(par.params, str);
  if (!par.agents.empty()) out += " I=" + join(par.agents, agent);
  return out;
}

}  // namespace epicomp
