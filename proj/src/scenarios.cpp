#include "epicomp/scenarios.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <map>
#include <mutex>
#include <numeric>
#include <random>

#include "epicomp/error.hpp"

namespace epicomp {

std::string_view to_string(Flavor flavor) { return flavor == Flavor::sequential ? "sequential" : "parallel"; }

namespace {

Fact fact(const std::string& agent, const std::string& family, const std::string& param) {
  return Fact{AgentId{agent}, Action{family, param}};
}

Fact use(int i, int k) { return fact("i" + std::to_string(i), "use", "k" + std::to_string(k)); }
Fact post(int k, int c) { return fact("k" + std::to_string(k), "post", "c" + std::to_string(c)); }

SystemDeclaration bulletin_board_frame(std::string name) {
  SystemDeclaration d;
  d.name = std::move(name);
  d.agents = {{{"i1"}, AgentRole::real_name},
              {{"i2"}, AgentRole::real_name},
              {{"k1"}, AgentRole::pseudonym},
              {{"k2"}, AgentRole::pseudonym},
              {{"j"}, AgentRole::observer}};
  d.actions = {{"use", "k1"}, {"use", "k2"}, {"post", "c1"}, {"post", "c2"}};
  return d;
}

InterpretedSystem single_block(SystemDeclaration d) {
  ObserverPartition p{default_observer(), {{}}};
  for (const auto& r : d.runs) p.blocks[0].push_back(r.id);
  d.partitions = {std::move(p)};
  return build_system(std::move(d));
}

Run r1() { return {"r1", {use(1, 1), post(1, 1), use(2, 2), post(2, 2)}}; }
Run r2() { return {"r2", {use(1, 2), post(2, 1), use(2, 1), post(1, 2)}}; }
Run r3() { return {"r3", {use(1, 1), post(1, 2), use(2, 2), post(2, 1)}}; }
Run r4() { return {"r4", {use(1, 2), post(2, 2), use(2, 1), post(1, 1)}}; }
Run r5() { return {"r5", {use(1, 1), use(1, 2), post(1, 1), post(2, 2)}}; }
Run r6() { return {"r6", {use(1, 1), use(1, 2), post(1, 2), post(2, 1)}}; }

// 2x2x2 universe as an 8-bit mask: bits 0-3 are use(i,k) at 2(i-1)+(k-1),
// bits 4-7 are post(k,c) at 4+2(k-1)+(c-1).
constexpr int use_bit(int i, int k) { return 2 * (i - 1) + (k - 1); }
constexpr int post_bit(int k, int c) { return 4 + 2 * (k - 1) + (c - 1); }

std::uint8_t encode(const Run& run) {
  std::uint8_t m = 0;
  for (int i = 1; i <= 2; ++i)
    for (int k = 1; k <= 2; ++k) {
      if (std::find(run.facts.begin(), run.facts.end(), use(i, k)) != run.facts.end()) m |= 1U << use_bit(i, k);
      if (std::find(run.facts.begin(), run.facts.end(), post(i, k)) != run.facts.end()) m |= 1U << post_bit(i, k);
    }
  return m;
}

Run decode(std::uint8_t m, std::string id) {
  Run run{std::move(id), {}};
  for (int i = 1; i <= 2; ++i)
    for (int k = 1; k <= 2; ++k)
      if (m >> use_bit(i, k) & 1U) run.facts.push_back(use(i, k));
  for (int k = 1; k <= 2; ++k)
    for (int c = 1; c <= 2; ++c)
      if (m >> post_bit(k, c) & 1U) run.facts.push_back(post(k, c));
  return run;
}

/// Single-block checks on mask vectors. P_j S holds iff some run contains S.
struct MaskSystem {
  std::vector<std::uint8_t> runs;

  bool possible(unsigned s) const {
    return std::any_of(runs.begin(), runs.end(), [&](std::uint8_t r) { return (r & s) == s; });
  }

  bool basic_independence() const {
    for (int u = 0; u < 4; ++u)
      for (int p = 4; p < 8; ++p)
        if (possible(1U << u) && possible(1U << p) && !possible((1U << u) | (1U << p))) return false;
    return true;
  }

  bool pairwise_independence() const {
    std::vector<unsigned> uses, posts;
    for (unsigned s = 1; s < 16; ++s)
      if (std::popcount(s) <= 2) {
        uses.push_back(s);
        posts.push_back(s << 4);
      }
    for (unsigned s : uses)
      for (unsigned t : posts)
        if (possible(s) && possible(t) && !possible(s | t)) return false;
    return true;
  }

  /// Role interchangeability of every fact in a 2x2 block of bits starting
  /// at `base`, with bit base + 2*(x-1) + (y-1) meaning theta(x, act(y)).
  bool role_interchangeable(const std::vector<std::uint8_t>& view, int base) const {
    auto bit = [&](int x, int y) { return 1U << (base + 2 * x + y); };
    for (std::uint8_t r : view)
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
          for (int x2 = 0; x2 < 2; ++x2)
            for (int y2 = 0; y2 < 2; ++y2) {
              if (!(r & bit(x, y)) || !(r & bit(x2, y2))) continue;
              const unsigned want = bit(x2, y) | bit(x, y2);
              if (std::none_of(view.begin(), view.end(), [&](std::uint8_t o) { return (o & want) == want; }))
                return false;
            }
    return true;
  }

  /// submit(i,c) bits in the 4-bit layout 2(i-1)+(c-1).
  std::vector<std::uint8_t> submits() const {
    std::vector<std::uint8_t> out;
    for (std::uint8_t r : runs) {
      std::uint8_t s = 0;
      for (int i = 1; i <= 2; ++i)
        for (int c = 1; c <= 2; ++c)
          for (int k = 1; k <= 2; ++k)
            if ((r >> use_bit(i, k) & 1U) && (r >> post_bit(k, c) & 1U)) s |= 1U << (2 * (i - 1) + (c - 1));
      out.push_back(s);
    }
    return out;
  }

  bool matches_search() const {
    return basic_independence() && role_interchangeable(runs, 0) && role_interchangeable(runs, 4) &&
           !pairwise_independence() && !role_interchangeable(submits(), 0);
  }
};

bool posts_every_article(std::uint8_t m) {
  return (m >> post_bit(1, 1) & 1U || m >> post_bit(2, 1) & 1U) &&
         (m >> post_bit(1, 2) & 1U || m >> post_bit(2, 2) & 1U);
}

InterpretedSystem reconstructed(const std::string& name, std::vector<Run> fixed, std::size_t free_runs,
                                const std::vector<Run>& excluded, const std::vector<std::string>& ids) {
  auto found = reconstruct_runs(fixed, free_runs, excluded, ids);
  if (!found) throw Error("run reconstruction for " + name + " found no completion");
  SystemDeclaration d = bulletin_board_frame(name);
  d.runs = std::move(fixed);
  for (auto& r : found->runs) d.runs.push_back(std::move(r));
  return single_block(std::move(d));
}

InterpretedSystem bomb_system(std::string name, const std::vector<std::vector<Fact>>& runs) {
  const ParallelSchema schema = bomb_schema();
  SystemDeclaration d;
  d.name = std::move(name);
  d.agents = {{{"i1"}, AgentRole::unspecified}, {{"i2"}, AgentRole::unspecified}, {{"j"}, AgentRole::observer}};
  d.actions = {{schema.family_a, "c"}, {schema.family_b, "c"}};
  for (std::size_t r = 0; r < runs.size(); ++r) d.runs.push_back({"r" + std::to_string(r + 1), runs[r]});
  return single_block(std::move(d));
}

InterpretedSystem bomb_dependent() {
  // First system, in enumeration order, whose two components are anonymous
  // up to {i1,i2} while the combined action is not.
  const ParallelSchema schema = bomb_schema();
  GenConfig sizes;
  sizes.flavor = Flavor::parallel;
  sizes.real_agents = 2;
  sizes.articles = 1;
  std::optional<SystemDeclaration> hit;
  const std::vector<AgentId> everyone{{"i1"}, {"i2"}};
  enumerate_small_systems(sizes, [&](const InterpretedSystem& sys) {
    const ParallelSchema generic = std::get<ParallelSchema>(generated_schema(sys, Flavor::parallel));
    const InterpretedSystem derived = derive_parallel(sys, generic);
    auto anonymous = [&](const std::string& family) {
      for (const auto& i : everyone) {
        const RunSet& ext = *derived.extension(i, Action{family, "c1"});
        for (const auto& other : everyone) {
          RunSet poss = derived.possible_closure(default_observer(), *derived.extension(other, Action{family, "c1"}));
          if (!ext.is_subset_of(poss)) return false;
        }
      }
      return true;
    };
    if (anonymous(generic.family_a) && anonymous(generic.family_b) && !anonymous(generic.derived_family)) {
      SystemDeclaration d = sys.declaration();
      hit = std::move(d);
      return false;
    }
    return true;
  });
  if (!hit) throw Error("no dependent bomb system in the small universe");
  std::vector<std::vector<Fact>> runs;
  for (const auto& run : hit->runs) {
    std::vector<Fact> facts;
    for (const auto& f : run.facts)
      facts.push_back(Fact{f.agent, Action{f.action.family == "act_a" ? schema.family_a : schema.family_b, "c"}});
    runs.push_back(std::move(facts));
  }
  return bomb_system("bomb-dependent", runs);
}

}  // namespace

SequentialSchema bulletin_board_schema() {
  SequentialSchema s;
  s.first_params = {"k1", "k2"};
  s.first_agents = {{"i1"}, {"i2"}};
  s.second_params = {"c1", "c2"};
  return s;
}

ParallelSchema bomb_schema() {
  ParallelSchema s;
  s.family_a = "buy_timer";
  s.family_b = "synthesize_gunpowder";
  s.derived_family = "give";
  s.params = {"c"};
  s.agents = {{"i1"}, {"i2"}};
  return s;
}

std::vector<std::string> paper_system_names() {
  return {"s12", "s1234", "s56", "s125678", "s129-12", "bomb-independent", "bomb-dependent"};
}

Schema paper_schema(std::string_view name) {
  const auto names = paper_system_names();
  if (std::find(names.begin(), names.end(), name) == names.end())
    throw ValidationError("unknown system '" + std::string(name) + "'");
  if (name.starts_with("bomb")) return bomb_schema();
  return bulletin_board_schema();
}

std::optional<RunSearchResult> reconstruct_runs(const std::vector<Run>& fixed, std::size_t free_runs,
                                                const std::vector<Run>& excluded, const std::vector<std::string>& ids,
                                                std::uint64_t budget) {
  if (ids.size() != free_runs) throw ValidationError("reconstruction needs one id per free run");
  std::vector<std::uint8_t> taken;
  for (const auto& r : fixed) taken.push_back(encode(r));
  for (const auto& r : excluded) taken.push_back(encode(r));

  std::vector<std::uint8_t> candidates;
  for (unsigned m = 0; m < 256; ++m)
    if (posts_every_article(static_cast<std::uint8_t>(m)) &&
        std::find(taken.begin(), taken.end(), static_cast<std::uint8_t>(m)) == taken.end())
      candidates.push_back(static_cast<std::uint8_t>(m));
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](std::uint8_t a, std::uint8_t b) { return std::popcount(a) < std::popcount(b); });
  if (candidates.size() < free_runs) return std::nullopt;

  MaskSystem sys;
  for (const auto& r : fixed) sys.runs.push_back(encode(r));
  const std::size_t base = sys.runs.size();
  sys.runs.resize(base + free_runs);

  std::vector<std::size_t> pick(free_runs);
  std::iota(pick.begin(), pick.end(), 0);
  std::uint64_t examined = 0;
  while (examined < budget) {
    for (std::size_t k = 0; k < free_runs; ++k) sys.runs[base + k] = candidates[pick[k]];
    ++examined;
    if (sys.matches_search()) {
      RunSearchResult out{{}, examined};
      for (std::size_t k = 0; k < free_runs; ++k) out.runs.push_back(decode(candidates[pick[k]], ids[k]));
      return out;
    }
    // next combination in lexicographic order
    std::size_t k = free_runs;
    while (k > 0 && pick[k - 1] == candidates.size() - free_runs + k - 1) --k;
    if (k == 0) break;
    ++pick[k - 1];
    for (std::size_t m = k; m < free_runs; ++m) pick[m] = pick[m - 1] + 1;
  }
  return std::nullopt;
}

InterpretedSystem paper_system(std::string_view name) {
  static std::mutex mutex;
  static std::map<std::string, InterpretedSystem, std::less<>> cache;
  std::lock_guard lock(mutex);
  if (auto it = cache.find(name); it != cache.end()) return it->second;

  auto make = [&]() -> InterpretedSystem {
    if (name == "s12") {
      auto d = bulletin_board_frame("s12");
      d.runs = {r1(), r2()};
      return single_block(std::move(d));
    }
    if (name == "s1234") {
      auto d = bulletin_board_frame("s1234");
      d.runs = {r1(), r2(), r3(), r4()};
      return single_block(std::move(d));
    }
    if (name == "s56") {
      auto d = bulletin_board_frame("s56");
      d.runs = {r5(), r6()};
      return single_block(std::move(d));
    }
    if (name == "s125678") return reconstructed("s125678", {r1(), r2(), r5(), r6()}, 2, {}, {"r7", "r8"});
    if (name == "s129-12")
      return reconstructed("s129-12", {r1(), r2()}, 4, {r3(), r4(), r5(), r6()}, {"r9", "r10", "r11", "r12"});
    if (name == "bomb-independent") {
      const auto s = bomb_schema();
      auto a = [&](const char* i) { return fact(i, s.family_a, "c"); };
      auto b = [&](const char* i) { return fact(i, s.family_b, "c"); };
      return bomb_system("bomb-independent",
                         {{a("i1"), b("i1")}, {a("i1"), b("i2")}, {a("i2"), b("i1")}, {a("i2"), b("i2")}});
    }
    if (name == "bomb-dependent") return bomb_dependent();
    throw ValidationError("unknown system '" + std::string(name) + "'");
  };
  InterpretedSystem sys = make();
  cache.emplace(std::string(name), sys);
  return sys;
}

// ---------------------------------------------------------------------------
// Generation

void validate(const GenConfig& cfg) {
  if (cfg.real_agents == 0 || cfg.articles == 0 || cfg.max_runs == 0 ||
      (cfg.flavor == Flavor::sequential && cfg.pseudonyms == 0))
    throw ValidationError("generator counts must be at least 1");
}

namespace {

struct Sizes {
  std::size_t agents, pseudonyms, articles;
};

SystemDeclaration generated_frame(Flavor flavor, const Sizes& n) {
  SystemDeclaration d;
  d.name = "generated";
  for (std::size_t i = 1; i <= n.agents; ++i) d.agents.push_back({{"i" + std::to_string(i)}, AgentRole::real_name});
  if (flavor == Flavor::sequential) {
    for (std::size_t k = 1; k <= n.pseudonyms; ++k)
      d.agents.push_back({{"k" + std::to_string(k)}, AgentRole::pseudonym});
    for (std::size_t k = 1; k <= n.pseudonyms; ++k) d.actions.push_back({"use", "k" + std::to_string(k)});
    for (std::size_t c = 1; c <= n.articles; ++c) d.actions.push_back({"post", "c" + std::to_string(c)});
  } else {
    for (std::size_t c = 1; c <= n.articles; ++c) d.actions.push_back({"act_a", "c" + std::to_string(c)});
    for (std::size_t c = 1; c <= n.articles; ++c) d.actions.push_back({"act_b", "c" + std::to_string(c)});
  }
  d.agents.push_back({default_observer(), AgentRole::observer});
  return d;
}

/// Every fact a generated run may carry, in a fixed order.
std::vector<Fact> fact_universe(Flavor flavor, const Sizes& n) {
  std::vector<Fact> out;
  auto s = [](char p, std::size_t x) { return std::string(1, p) + std::to_string(x); };
  if (flavor == Flavor::sequential) {
    for (std::size_t i = 1; i <= n.agents; ++i)
      for (std::size_t k = 1; k <= n.pseudonyms; ++k) out.push_back(fact(s('i', i), "use", s('k', k)));
    for (std::size_t k = 1; k <= n.pseudonyms; ++k)
      for (std::size_t c = 1; c <= n.articles; ++c) out.push_back(fact(s('k', k), "post", s('c', c)));
  } else {
    for (std::size_t i = 1; i <= n.agents; ++i)
      for (std::size_t c = 1; c <= n.articles; ++c) {
        out.push_back(fact(s('i', i), "act_a", s('c', c)));
        out.push_back(fact(s('i', i), "act_b", s('c', c)));
      }
  }
  return out;
}

std::vector<Fact> facts_of(const std::vector<Fact>& universe, std::uint64_t mask) {
  std::vector<Fact> out;
  for (std::size_t b = 0; b < universe.size(); ++b)
    if (mask >> b & 1U) out.push_back(universe[b]);
  return out;
}

std::uint64_t below(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }

}  // namespace

InterpretedSystem random_system(const GenConfig& cfg) { return random_system(cfg, 0); }

InterpretedSystem random_system(const GenConfig& cfg, std::uint64_t index) {
  validate(cfg);
  std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 rng(seq);
  auto count = [&](std::size_t n) { return cfg.vary_sizes ? 1 + below(rng, n) : n; };
  Sizes n{count(cfg.real_agents), cfg.flavor == Flavor::sequential ? count(cfg.pseudonyms) : 0, count(cfg.articles)};
  const std::size_t runs = 1 + below(rng, cfg.max_runs);

  SystemDeclaration d = generated_frame(cfg.flavor, n);
  const auto universe = fact_universe(cfg.flavor, n);
  for (std::size_t r = 0; r < runs; ++r) {
    Run run{"r" + std::to_string(r + 1), {}};
    for (const auto& f : universe)
      if (rng() & 1U) run.facts.push_back(f);
    d.runs.push_back(std::move(run));
  }

  PartitionPolicy policy = cfg.policy;
  if (policy == PartitionPolicy::mixed)
    policy = (rng() & 1U) ? PartitionPolicy::random_partition : PartitionPolicy::single_block;
  ObserverPartition p{default_observer(), {}};
  if (policy == PartitionPolicy::single_block) {
    p.blocks.emplace_back();
    for (const auto& r : d.runs) p.blocks[0].push_back(r.id);
  } else if (policy == PartitionPolicy::discrete) {
    for (const auto& r : d.runs) p.blocks.push_back({r.id});
  } else {
    std::vector<std::size_t> label(runs);
    for (auto& l : label) l = below(rng, runs);
    std::map<std::size_t, std::size_t> block_of_label;
    for (std::size_t r = 0; r < runs; ++r) {
      auto [it, fresh] = block_of_label.try_emplace(label[r], p.blocks.size());
      if (fresh) p.blocks.emplace_back();
      p.blocks[it->second].push_back(d.runs[r].id);
    }
  }
  d.partitions = {std::move(p)};
  return build_system(std::move(d));
}

Schema generated_schema(const InterpretedSystem& sys, Flavor flavor) {
  if (flavor == Flavor::sequential) {
    SequentialSchema s;
    for (const auto& k : sys.agents_with_role(AgentRole::pseudonym)) s.first_params.push_back(k.name);
    s.first_agents = sys.agents_with_role(AgentRole::real_name);
    for (const auto& a : sys.actions_of_family(s.second_family)) s.second_params.push_back(a.param);
    return s;
  }
  ParallelSchema s;
  for (const auto& a : sys.actions_of_family(s.family_a)) s.params.push_back(a.param);
  return resolve_schema(sys, s);
}

std::uint64_t enumerate_small_systems(const GenConfig& sizes,
                                      const std::function<bool(const InterpretedSystem&)>& visit) {
  validate(sizes);
  const Sizes n{sizes.real_agents, sizes.flavor == Flavor::sequential ? sizes.pseudonyms : 0, sizes.articles};
  const auto universe = fact_universe(sizes.flavor, n);
  if (universe.size() > 20) throw ValidationError("fact universe too large to enumerate");
  const std::uint64_t types = std::uint64_t{1} << universe.size();
  const SystemDeclaration frame = generated_frame(sizes.flavor, n);

  std::uint64_t visited = 0;
  auto emit = [&](std::initializer_list<std::uint64_t> masks) {
    SystemDeclaration d = frame;
    std::size_t id = 1;
    for (auto m : masks) d.runs.push_back({"r" + std::to_string(id++), facts_of(universe, m)});
    ObserverPartition p{default_observer(), {{}}};
    for (const auto& r : d.runs) p.blocks[0].push_back(r.id);
    d.partitions = {std::move(p)};
    ++visited;
    return visit(build_system(std::move(d)));
  };
  for (std::uint64_t a = 0; a < types; ++a)
    if (!emit({a})) return visited;
  for (std::uint64_t a = 0; a < types; ++a)
    for (std::uint64_t b = a + 1; b < types; ++b)
      if (!emit({a, b})) return visited;
  return visited;
}

// ---------------------------------------------------------------------------
// Mixers

std::vector<Permutation> all_permutations(std::size_t n) {
  std::vector<Permutation> out;
  Permutation p(n);
  std::iota(p.begin(), p.end(), 0);
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

Permutation inverse(const Permutation& p) {
  Permutation q(p.size());
  for (std::size_t x = 0; x < p.size(); ++x) q.at(p[x]) = x;
  return q;
}

namespace {

void require_permutation(const Permutation& p, std::size_t n) {
  if (p.size() != n) throw ValidationError("mixer permutations range over different message sets");
  std::vector<bool> seen(n, false);
  for (auto x : p) {
    if (x >= n || seen[x]) throw ValidationError("mixer mapping is not a permutation");
    seen[x] = true;
  }
}

}  // namespace

SequentialSchema mixer_schema(std::size_t n) {
  SequentialSchema s;
  for (std::size_t x = 1; x <= n; ++x) {
    s.first_params.push_back("k" + std::to_string(x));
    s.first_agents.push_back({"m" + std::to_string(x)});
    s.second_params.push_back("c" + std::to_string(x));
  }
  return s;
}

InterpretedSystem mixer_chain(const std::vector<Permutation>& first, const SecondMixer& second,
                              PartitionPolicy observation) {
  if (first.empty()) throw ValidationError("first mixer has no permutations");
  if (!second.inverse_of_first && second.family.empty()) throw ValidationError("second mixer has no permutations");
  const std::size_t n = first.front().size();
  if (n == 0) throw ValidationError("mixer chain needs at least one message");
  for (const auto& p : first) require_permutation(p, n);
  for (const auto& p : second.family) require_permutation(p, n);

  const SequentialSchema schema = mixer_schema(n);
  SystemDeclaration d;
  d.name = "mixer-chain";
  for (const auto& m : schema.first_agents) d.agents.push_back({m, AgentRole::real_name});
  for (const auto& k : schema.first_params) d.agents.push_back({{k}, AgentRole::pseudonym});
  d.agents.push_back({default_observer(), AgentRole::observer});
  for (const auto& a : schema.first_actions()) d.actions.push_back(a);
  for (const auto& a : schema.second_actions()) d.actions.push_back(a);

  auto add_run = [&](const Permutation& p1, const Permutation& p2) {
    Run run{"r" + std::to_string(d.runs.size() + 1), {}};
    for (std::size_t x = 0; x < n; ++x)
      run.facts.push_back(Fact{schema.first_agents[x], schema.first_action(schema.first_params[p1[x]])});
    for (std::size_t y = 0; y < n; ++y)
      run.facts.push_back(Fact{{schema.first_params[y]}, schema.second_action(schema.second_params[p2[y]])});
    d.runs.push_back(std::move(run));
  };
  for (const auto& p1 : first) {
    if (second.inverse_of_first)
      add_run(p1, inverse(p1));
    else
      for (const auto& p2 : second.family) add_run(p1, p2);
  }

  ObserverPartition p{default_observer(), {}};
  if (observation == PartitionPolicy::discrete) {
    for (const auto& r : d.runs) p.blocks.push_back({r.id});
  } else {
    p.blocks.emplace_back();
    for (const auto& r : d.runs) p.blocks[0].push_back(r.id);
  }
  d.partitions = {std::move(p)};
  return build_system(std::move(d));
}

}  // namespace epicomp
