#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "epicomp/composition.hpp"
#include "epicomp/error.hpp"
#include "epicomp/properties.hpp"
#include "epicomp/scenarios.hpp"
#include "support.hpp"

using namespace epicomp;

namespace {

const AgentId j{"j"};

Fact fact(const char* agent, const char* family, const char* param) { return {{agent}, {family, param}}; }

bool has(const InterpretedSystem& sys, const char* run, const Fact& f) { return sys.holds(run, f.agent, f.action); }

InterpretedSystem bomb_runs(std::vector<Run> runs) {
  SystemDeclaration d;
  d.name = "bomb";
  d.agents = {{{"i"}}, {{"j"}, AgentRole::observer}};
  d.actions = {{"buy_timer", "c"}, {"synthesize_gunpowder", "c"}};
  std::vector<std::string> ids;
  for (const auto& r : runs) ids.push_back(r.id);
  d.runs = std::move(runs);
  d.partitions = {{{"j"}, {ids}}};
  return build_system(d);
}

ParallelSchema one_agent_bomb() {
  ParallelSchema p = bomb_schema();
  p.agents = {{"i"}};
  return p;
}

// Basic independence read straight off the definition, quantifying over
// i, k, k', c with the naive kernel.
bool naive_basic(const InterpretedSystem& sys, const SequentialSchema& s) {
  for (const auto& run : sys.runs()) {
    const auto kernel = testing::naive_kernel(sys, j, run.id);
    auto possible = [&](auto&& pred) {
      for (const auto& r : kernel)
        if (pred(r)) return true;
      return false;
    };
    for (const auto& i : s.first_agents)
      for (const auto& k : s.first_params)
        for (const auto& k2 : s.first_params)
          for (const auto& c : s.second_params) {
            const Fact u{i, s.first_action(k)};
            const Fact p{{k2}, s.second_action(c)};
            auto hu = [&](const std::string& r) { return testing::naive_holds(sys, r, u); };
            auto hp = [&](const std::string& r) { return testing::naive_holds(sys, r, p); };
            if (possible(hu) && possible(hp) && !possible([&](const std::string& r) { return hu(r) && hp(r); }))
              return false;
          }
  }
  return true;
}

SequentialSchema seq_schema(const InterpretedSystem& sys) {
  return std::get<SequentialSchema>(resolve_schema(sys, generated_schema(sys, Flavor::sequential)));
}

bool all_hold(const InterpretedSystem& sys, const SequentialSchema& s, PropertyKind kind, bool first_phase) {
  if (first_phase) {
    for (const auto& i : s.first_agents)
      for (const auto& a : s.first_actions())
        if (!check_property(sys, PropertySpec::simple(kind, i, a, j)).holds) return false;
  } else {
    for (const auto& k : s.pseudonyms())
      for (const auto& a : s.second_actions())
        if (!check_property(sys, PropertySpec::simple(kind, k, a, j)).holds) return false;
  }
  return true;
}

bool structural(const InterpretedSystem& sys, const SequentialSchema& s, StructuralCondition::Kind k) {
  return check_structural(sys, s, StructuralCondition::of(k)).holds;
}

}  // namespace

TEST_CASE("sequential derivation on s12") {
  const auto d = derive_sequential(paper_system("s12"), bulletin_board_schema());
  for (const char* r : {"r1", "r2"}) {
    CHECK(has(d, r, fact("i1", "submit", "c1")));
    CHECK(has(d, r, fact("i2", "submit", "c2")));
    CHECK_FALSE(has(d, r, fact("i1", "submit", "c2")));
    CHECK_FALSE(has(d, r, fact("i2", "submit", "c1")));
  }
  CHECK(d.partitions()[0] == paper_system("s12").partitions()[0]);
}

TEST_CASE("sequential derivation on s56") {
  const auto d = derive_sequential(paper_system("s56"), bulletin_board_schema());
  for (const char* r : {"r5", "r6"}) {
    CHECK(has(d, r, fact("i1", "submit", "c1")));
    CHECK(has(d, r, fact("i1", "submit", "c2")));
    CHECK_FALSE(has(d, r, fact("i2", "submit", "c1")));
  }
}

TEST_CASE("registration without posting submits nothing") {
  SystemDeclaration decl;
  decl.name = "lonely";
  decl.agents = {{{"i1"}}, {{"i2"}}, {{"k1"}}, {{"k2"}}, {{"j"}}};
  decl.actions = {{"use", "k1"}, {"use", "k2"}, {"post", "c1"}, {"post", "c2"}};
  decl.runs = {{"r", {fact("i1", "use", "k1")}}};
  decl.partitions = {{{"j"}, {{"r"}}}};
  const auto d = derive_sequential(build_system(decl), bulletin_board_schema());
  for (const char* c : {"c1", "c2"})
    for (const char* i : {"i1", "i2"}) CHECK_FALSE(has(d, "r", fact(i, "submit", c)));
}

TEST_CASE("parallel derivation") {
  const auto sys = bomb_runs({{"both", {fact("i", "buy_timer", "c"), fact("i", "synthesize_gunpowder", "c")}},
                              {"half", {fact("i", "buy_timer", "c")}},
                              {"none", {}}});
  const auto d = derive_parallel(sys, one_agent_bomb());
  CHECK(has(d, "both", fact("i", "give", "c")));
  CHECK_FALSE(has(d, "half", fact("i", "give", "c")));
  CHECK_FALSE(has(d, "none", fact("i", "give", "c")));
}

TEST_CASE("deriving twice is rejected") {
  const auto d = derive_sequential(paper_system("s12"), bulletin_board_schema());
  CHECK_THROWS_AS(derive_sequential(d, bulletin_board_schema()), ValidationError);
  const auto sys = bomb_runs({{"r", {}}});
  CHECK_THROWS_AS(derive_parallel(derive_parallel(sys, one_agent_bomb()), one_agent_bomb()), ValidationError);
}

TEST_CASE("schema naming undeclared entities") {
  auto s = bulletin_board_schema();
  s.first_params.push_back("k9");
  CHECK_THROWS_AS(derive_sequential(paper_system("s12"), s), ValidationError);
  CHECK_THROWS_AS(validate_schema(paper_system("s12"), s), ValidationError);
}

TEST_CASE("derivation leaves old atoms alone") {
  for (std::uint64_t n = 0; n < 200; ++n) {
    const auto sys = testing::sample_system(51, n);
    const auto d = derive(sys, generated_schema(sys, Flavor::sequential));
    testing::FormulaGen gen(n, testing::all_facts(sys), {j});
    for (int k = 0; k < 10; ++k) {
      const Formula f = gen(4);
      CHECK(eval_all(sys, f) == eval_all(d, f));
    }
  }
  for (std::uint64_t n = 0; n < 200; ++n) {
    const auto sys = testing::sample_system(52, n, Flavor::parallel);
    const auto d = derive(sys, generated_schema(sys, Flavor::parallel));
    testing::FormulaGen gen(n, testing::all_facts(sys), {j});
    for (int k = 0; k < 10; ++k) {
      const Formula f = gen(4);
      CHECK(eval_all(sys, f) == eval_all(d, f));
    }
  }
}

TEST_CASE("erase and re-derive gives the same system") {
  for (std::uint64_t n = 0; n < 200; ++n) {
    const auto sys = testing::sample_system(53, n);
    const auto schema = generated_schema(sys, Flavor::sequential);
    const auto d = derive(sys, schema);
    CHECK(erase_family(d, "submit") == sys);
    CHECK(derive(erase_family(d, "submit"), schema) == d);
  }
}

TEST_CASE("independence on the bulletin-board systems") {
  const Schema s = bulletin_board_schema();
  const auto s12 = check_independence(paper_system("s12"), j, s, IndependenceKind::basic);
  CHECK_FALSE(s12.holds);
  CHECK(s12.condition == "basic independence");
  CHECK(s12.counterexample_run == "r1");
  CHECK(s12.failing_instance ==
        "P[j] theta(i1, use(k1)) & P[j] theta(k1, post(c2)) -> P[j] (theta(i1, use(k1)) & theta(k1, post(c2)))");

  const auto s1234 = paper_system("s1234");
  CHECK(check_independence(s1234, j, s, IndependenceKind::basic).holds);
  CHECK(check_independence(s1234, j, s, IndependenceKind::pairwise).holds);
  CHECK_FALSE(check_independence(paper_system("s125678"), j, s, IndependenceKind::pairwise).holds);
  CHECK_FALSE(check_independence(paper_system("s129-12"), j, s, IndependenceKind::pairwise).holds);
}

TEST_CASE("independence kind must match the schema") {
  const auto s12 = paper_system("s12");
  CHECK_THROWS_AS(check_independence(s12, j, bulletin_board_schema(), IndependenceKind::parallel), ValidationError);
  CHECK_THROWS_AS(check_independence(s12, j, bomb_schema(), IndependenceKind::basic), ValidationError);
  CHECK(parse_independence_kind("posneg") == IndependenceKind::pos_neg);
  CHECK_FALSE(parse_independence_kind("strong"));
}

TEST_CASE("parallel independence on the bomb systems") {
  CHECK(check_independence(paper_system("bomb-independent"), j, bomb_schema(), IndependenceKind::parallel).holds);
  CHECK_FALSE(check_independence(paper_system("bomb-dependent"), j, bomb_schema(), IndependenceKind::parallel).holds);
}

TEST_CASE("bitset and formula routes agree on independence") {
  const IndependenceKind kinds[] = {IndependenceKind::basic, IndependenceKind::pairwise, IndependenceKind::disjunctive,
                                    IndependenceKind::pos_neg, IndependenceKind::neg_pos};
  for (std::uint64_t n = 0; n < 150; ++n) {
    const auto sys = testing::sample_system(54, n, Flavor::sequential, 3);
    const auto schema = generated_schema(sys, Flavor::sequential);
    for (auto kind : kinds) {
      const auto report = check_independence(sys, j, schema, kind);
      const Formula f = independence_formula(sys, j, schema, kind);
      REQUIRE(report.holds == valid(sys, f).holds);
      CHECK(report.holds == testing::naive_valid(sys, f));
      if (!report.holds) CHECK(!eval(sys, *report.counterexample_run, f));
    }
    CHECK(check_independence(sys, j, schema, IndependenceKind::basic).holds == naive_basic(sys, seq_schema(sys)));
  }
  for (std::uint64_t n = 0; n < 150; ++n) {
    const auto sys = testing::sample_system(55, n, Flavor::parallel);
    const auto schema = generated_schema(sys, Flavor::parallel);
    CHECK(check_independence(sys, j, schema, IndependenceKind::parallel).holds ==
          testing::naive_valid(sys, independence_formula(sys, j, schema, IndependenceKind::parallel)));
  }
}

TEST_CASE("structural conditions on the bulletin-board systems") {
  using K = StructuralCondition::Kind;
  const auto s = bulletin_board_schema();
  CHECK(structural(paper_system("s12"), s, K::exhaustive_posting));
  CHECK(structural(paper_system("s12"), s, K::exhaustive_registration));
  CHECK(structural(paper_system("s12"), s, K::backward_causality));
  CHECK(structural(paper_system("s12"), s, K::forward_causality));

  const auto r = check_structural(paper_system("s56"), s, StructuralCondition::exclusive_agent_of({"i1"}, "use"));
  CHECK_FALSE(r.holds);
  CHECK(r.counterexample_run == "r5");
  CHECK(r.failing_instance == "!(theta(i1, use(k1)) & theta(i1, use(k2)))");
  CHECK(check_structural(paper_system("s56"), s, StructuralCondition::exclusive_action_of({"post", "c1"})).holds);
  CHECK_FALSE(structural(paper_system("s56"), s, K::exhaustive_registration));

  SystemDeclaration decl;
  decl.name = "silent";
  decl.agents = {{{"i1"}}, {{"i2"}}, {{"k1"}}, {{"k2"}}, {{"j"}}};
  decl.actions = {{"use", "k1"}, {"use", "k2"}, {"post", "c1"}, {"post", "c2"}};
  decl.runs = {{"r", {fact("i1", "use", "k2")}}};
  decl.partitions = {{{"j"}, {{"r"}}}};
  auto silent_schema = s;
  CHECK(structural(build_system(decl), silent_schema, K::backward_causality));
  CHECK_FALSE(structural(build_system(decl), silent_schema, K::forward_causality));
  CHECK_FALSE(structural(build_system(decl), silent_schema, K::exhaustive_posting));
}

TEST_CASE("onymous registration gives independence") {
  for (std::uint64_t n = 0; n < 3000; ++n) {
    const auto sys = testing::sample_system(56, n);
    const auto s = seq_schema(sys);
    const bool basic = check_independence(sys, j, s, IndependenceKind::basic).holds;
    if (all_hold(sys, s, PropertyKind::maximally_onymous, true)) CHECK(basic);
    if (all_hold(sys, s, PropertyKind::maximally_identified, false)) CHECK(basic);
  }
}

TEST_CASE("basic independence gives the derived forms") {
  using K = StructuralCondition::Kind;
  std::uint64_t posneg = 0, negpos = 0;
  for (std::uint64_t n = 0; n < 3000; ++n) {
    const auto sys = testing::sample_system(57, n);
    const auto s = seq_schema(sys);
    if (!check_independence(sys, j, s, IndependenceKind::basic).holds) continue;
    CHECK(check_independence(sys, j, s, IndependenceKind::disjunctive).holds);

    bool posts_exclusive = structural(sys, s, K::exhaustive_posting);
    for (const auto& a : s.second_actions())
      posts_exclusive = posts_exclusive && check_structural(sys, s, StructuralCondition::exclusive_action_of(a)).holds;
    if (posts_exclusive) {
      ++posneg;
      CHECK(check_independence(sys, j, s, IndependenceKind::pos_neg).holds);
    }

    bool agents_exclusive = structural(sys, s, K::exhaustive_registration);
    for (const auto& i : s.first_agents)
      agents_exclusive =
          agents_exclusive && check_structural(sys, s, StructuralCondition::exclusive_agent_of(i, s.first_family)).holds;
    if (agents_exclusive) {
      ++negpos;
      CHECK(check_independence(sys, j, s, IndependenceKind::neg_pos).holds);
    }
  }
  CHECK(posneg > 0);
  CHECK(negpos > 0);
}

TEST_CASE("parse and render schemas") {
  const Schema seq = parse_schema("seq use:I_P={k1,k2} post:C={c1,c2} => submit");
  REQUIRE(std::holds_alternative<SequentialSchema>(seq));
  const auto& s = std::get<SequentialSchema>(seq);
  CHECK(s.first_params == std::vector<std::string>{"k1", "k2"});
  CHECK(s.second_params == std::vector<std::string>{"c1", "c2"});
  CHECK(s.first_agents.empty());
  CHECK(render(seq) == "seq use:I_P={k1,k2} post:C={c1,c2} => submit");

  const Schema par = parse_schema("par buy_timer + synthesize_gunpowder => give : C={c}");
  REQUIRE(std::holds_alternative<ParallelSchema>(par));
  CHECK(std::get<ParallelSchema>(par).family_b == "synthesize_gunpowder");

  CHECK(render(Schema{bulletin_board_schema()}) == "seq use:I_P={k1,k2} post:C={c1,c2} => submit I_R={i1,i2}");
  CHECK(render(Schema{bomb_schema()}) == "par buy_timer + synthesize_gunpowder => give : C={c} I={i1,i2}");
  CHECK(render(parse_schema(render(Schema{bomb_schema()}))) == render(Schema{bomb_schema()}));
  CHECK_THROWS_AS(parse_schema("mix a + b => c : C={x}"), ParseError);
  CHECK_THROWS_AS(parse_schema("seq use:I_P={k1} post:C={c1} submit"), ParseError);
}

TEST_CASE("resolve_schema defaults") {
  SequentialSchema s = bulletin_board_schema();
  s.first_agents.clear();
  const auto resolved = std::get<SequentialSchema>(resolve_schema(paper_system("s12"), s));
  CHECK(resolved.first_agents == std::vector<AgentId>{{"i1"}, {"i2"}});

  ParallelSchema p = bomb_schema();
  p.agents.clear();
  const auto rp = std::get<ParallelSchema>(resolve_schema(paper_system("bomb-dependent"), p));
  CHECK(rp.agents == std::vector<AgentId>{{"i1"}, {"i2"}});
}
