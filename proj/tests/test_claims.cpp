#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "epicomp/claims.hpp"
#include "epicomp/error.hpp"
#include "epicomp/properties.hpp"
#include "support.hpp"

using namespace epicomp;

namespace {

const AgentId j{"j"};

const ConditionResult* find(const std::vector<ConditionResult>& v, std::string_view name) {
  for (const auto& c : v)
    if (c.name == name) return &c;
  return nullptr;
}

bool hyp(const ClaimReport& r, std::string_view name) {
  const auto* c = find(r.hypotheses, name);
  REQUIRE(c != nullptr);
  return c->holds;
}

ClaimContext context_for(const InterpretedSystem& sys, Flavor f) {
  ClaimContext ctx;
  ctx.schema = generated_schema(sys, f);
  return ctx;
}

// The same quantification as a claim condition, through check_property.
bool every_spec(const InterpretedSystem& sys, const std::vector<AgentId>& agents, const std::vector<Action>& acts,
                const std::function<PropertySpec(const AgentId&, const Action&)>& make) {
  for (const auto& i : agents)
    for (const auto& a : acts)
      if (!check_property(sys, make(i, a)).holds) return false;
  return true;
}

}  // namespace

TEST_CASE("claim registry") {
  CHECK(all_claims().size() == 22);
  for (auto id : all_claims()) {
    CHECK(parse_claim_id(to_string(id)) == id);
    CHECK_FALSE(statement(id).empty());
    CHECK_FALSE(conclusion_name(id).empty());
  }
  CHECK(to_string(ClaimId::appc_eq) == "APPC-EQ");
  CHECK_FALSE(parse_claim_id("C9.9"));
  CHECK(flavor(ClaimId::c4_2) == Flavor::parallel);
  CHECK(flavor(ClaimId::cb_1) == Flavor::parallel);
  CHECK(flavor(ClaimId::la_3) == Flavor::sequential);
  CHECK(hypothesis_names(ClaimId::c3_2) == std::vector<std::string>{"independence", "post-privacy"});
  CHECK(hypothesis_names(ClaimId::ca_3) == std::vector<std::string>{"independence", "exhaustive-posting",
                                                                    "post-exclusivity", "agent-exclusivity",
                                                                    "post-minimal-privacy"});
  CHECK(to_string(ClaimVerdict::refuted) == "REFUTED");
}

TEST_CASE("C3.1 on s12") {
  const auto r = check_claim(ClaimId::c3_1, paper_system("s12"), paper_context("s12"));
  CHECK(r.verdict == ClaimVerdict::confirmed);
  CHECK(r.hypotheses.size() == 2);
  REQUIRE(r.conclusion.size() == 2);
  CHECK(r.conclusion[0].name == "some-submit-not-anonymous");
  CHECK(r.conclusion[0].detail == "anon-upto(i1, submit(c1), {i1,i2}, j) fails at r1 (i2)");
  CHECK(r.conclusion[1].name == "some-submit-not-private");

  // on a system where submit stays private the witness is missing
  CHECK(check_claim(ClaimId::c3_1, paper_system("s1234"), paper_context("s1234")).verdict == ClaimVerdict::vacuous);
}

TEST_CASE("claims on the bulletin-board systems") {
  const auto s1234 = paper_system("s1234");
  const auto ctx = paper_context("s1234");
  for (auto id : {ClaimId::c3_2, ClaimId::c3_3, ClaimId::ca_1, ClaimId::ca_2, ClaimId::ca_3, ClaimId::ca_4,
                  ClaimId::la_1, ClaimId::la_2, ClaimId::la_3, ClaimId::appc_eq})
    CHECK(check_claim(id, s1234, ctx).verdict == ClaimVerdict::confirmed);

  const auto s12 = check_claim(ClaimId::c3_2, paper_system("s12"), paper_context("s12"));
  CHECK(s12.verdict == ClaimVerdict::vacuous);
  CHECK_FALSE(hyp(s12, "independence"));
  CHECK_FALSE(s12.conclusion_holds);

  for (const char* name : {"s125678", "s129-12"}) {
    const auto r = check_claim(ClaimId::ca_1, paper_system(name), paper_context(name));
    CHECK(r.verdict == ClaimVerdict::vacuous);
    CHECK_FALSE(hyp(r, "pairwise-independence"));
    CHECK(hyp(r, "post-role-interchangeability"));
    CHECK_FALSE(r.conclusion_holds);
  }
}

TEST_CASE("s56 needs agent exclusivity") {
  const auto r = check_claim(ClaimId::ca_3, paper_system("s56"), paper_context("s56"));
  CHECK(r.verdict == ClaimVerdict::vacuous);
  for (const auto& h : r.hypotheses) CHECK(h.holds == (h.name != "agent-exclusivity"));
  CHECK_FALSE(r.conclusion_holds);

  const auto dropped = check_claim(ClaimId::ca_3, paper_system("s56"), paper_context("s56"), {{"agent-exclusivity"}});
  CHECK(dropped.verdict == ClaimVerdict::refuted);
}

TEST_CASE("s56 submit is never minimally private") {
  const auto s56 = paper_system("s56");
  const auto sch = bulletin_board_schema();
  CHECK(every_spec(s56, sch.first_agents, sch.first_actions(), [](const AgentId& i, const Action& a) {
    return PropertySpec::simple(PropertyKind::maximally_onymous, i, a, j);
  }));
  CHECK(every_spec(s56, sch.pseudonyms(), sch.second_actions(), [](const AgentId& i, const Action& a) {
    return PropertySpec::simple(PropertyKind::minimally_private, i, a, j);
  }));
  const auto d = derive_sequential(s56, sch);
  std::size_t performed = 0;
  for (const auto& i : sch.first_agents)
    for (const auto& a : sch.derived_actions()) {
      if (d.extension(i, a)->none()) continue;
      ++performed;
      CHECK_FALSE(check_property(d, PropertySpec::simple(PropertyKind::minimally_private, i, a, j)).holds);
    }
  CHECK(performed == 2);
}

TEST_CASE("bomb claims") {
  const auto dep = check_claim(ClaimId::c4_2, paper_system("bomb-dependent"), paper_context("bomb-dependent"));
  CHECK(dep.verdict == ClaimVerdict::vacuous);
  CHECK_FALSE(hyp(dep, "independence"));
  CHECK(hyp(dep, "a-anonymity"));
  CHECK(hyp(dep, "b-anonymity"));
  CHECK_FALSE(dep.conclusion_holds);

  const auto ind = paper_system("bomb-independent");
  for (auto id : {ClaimId::c4_1, ClaimId::c4_2, ClaimId::cb_1})
    CHECK(check_claim(id, ind, paper_context("bomb-independent")).verdict == ClaimVerdict::confirmed);
}

TEST_CASE("constant facts across the block make CA.7 hold") {
  for (std::uint64_t n = 0; n < 300; ++n) {
    auto sys = testing::sample_system(71, n);
    SystemDeclaration d = sys.declaration();
    for (auto& r : d.runs) r.facts = d.runs.front().facts;
    d.partitions = {{j, {{}}}};
    for (const auto& r : d.runs) d.partitions[0].blocks[0].push_back(r.id);
    const auto same = build_system(d);
    CHECK(check_claim(ClaimId::ca_7, same, context_for(same, Flavor::sequential)).verdict == ClaimVerdict::confirmed);
  }
}

TEST_CASE("special-case hypotheses imply the general ones") {
  GenConfig sizes;
  std::uint64_t c34 = 0, c35 = 0, ca5 = 0;
  const ClaimId ids[] = {ClaimId::c3_2, ClaimId::c3_3, ClaimId::c3_4, ClaimId::c3_5, ClaimId::ca_3, ClaimId::ca_5};
  enumerate_small_systems(sizes, [&](const InterpretedSystem& sys) {
    const auto rs = check_claims(ids, sys, context_for(sys, Flavor::sequential));
    if (rs[2].hypotheses_hold) {
      ++c34;
      REQUIRE(rs[0].hypotheses_hold);
    }
    if (rs[3].hypotheses_hold) {
      ++c35;
      REQUIRE(rs[1].hypotheses_hold);
    }
    if (rs[5].hypotheses_hold) {
      ++ca5;
      REQUIRE(rs[4].hypotheses_hold);
    }
    return true;
  });
  CHECK(c34 > 0);
  CHECK(c35 > 0);
  CHECK(ca5 > 0);
}

TEST_CASE("CB.1 does not care which component is first") {
  for (std::uint64_t n = 0; n < 2000; ++n) {
    const auto sys = testing::sample_system(72, n, Flavor::parallel);
    auto ctx = context_for(sys, Flavor::parallel);
    auto swapped = ctx;
    auto& p = std::get<ParallelSchema>(swapped.schema);
    std::swap(p.family_a, p.family_b);
    const auto a = check_claim(ClaimId::cb_1, sys, ctx);
    const auto b = check_claim(ClaimId::cb_1, sys, swapped);
    CHECK(a.verdict == b.verdict);
    CHECK(a.verdict != ClaimVerdict::refuted);
  }
}

TEST_CASE("claim errors") {
  const auto s12 = paper_system("s12");
  CHECK_THROWS_AS(check_claim(ClaimId::c4_1, s12, paper_context("s12")), ValidationError);
  CHECK_THROWS_AS(check_claim(ClaimId::c3_2, paper_system("bomb-dependent"), paper_context("s12")), ValidationError);
  try {
    check_claim(ClaimId::c3_2, s12, paper_context("s12"), {{"pairwise-independence"}});
    FAIL("expected a ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()) == "claim C3.2 has no hypothesis 'pairwise-independence'");
  }
  ClaimContext ctx = paper_context("s12");
  ctx.observer = {"nobody"};
  CHECK_THROWS_AS(check_claim(ClaimId::c3_2, s12, ctx), ValidationError);
  CHECK_THROWS_AS(paper_context("s99"), ValidationError);
}

TEST_CASE("lazy evaluation skips the conclusion") {
  const auto r = check_claim(ClaimId::c3_2, paper_system("s12"), paper_context("s12"), {{}, true});
  CHECK(r.verdict == ClaimVerdict::vacuous);
  CHECK_FALSE(r.conclusion_evaluated);
  CHECK(r.hypotheses.size() == 1);
}

TEST_CASE("claim conditions agree with check_property") {
  for (std::uint64_t n = 0; n < 400; ++n) {
    const auto sys = testing::sample_system(73, n);
    const auto ctx = context_for(sys, Flavor::sequential);
    const auto s = std::get<SequentialSchema>(resolve_schema(sys, ctx.schema));
    const auto d = derive_sequential(sys, s);
    const auto uses = s.first_actions(), posts = s.second_actions(), submits = s.derived_actions();
    const auto simple = [](PropertyKind k) {
      return [k](const AgentId& i, const Action& a) { return PropertySpec::simple(k, i, a, j); };
    };

    const ClaimId ids[] = {ClaimId::c3_3, ClaimId::c3_2, ClaimId::ca_7, ClaimId::ca_1, ClaimId::ca_2,
                           ClaimId::ca_3, ClaimId::ca_4};
    const auto rs = check_claims(ids, sys, ctx);
    CHECK(hyp(rs[0], "use-anonymity") == every_spec(sys, s.first_agents, uses, [&](const AgentId& i, const Action& a) {
            return PropertySpec::anonymous_up_to(i, a, s.first_agents, j);
          }));
    CHECK(rs[0].conclusion_holds == every_spec(d, s.first_agents, submits, [&](const AgentId& i, const Action& a) {
            return PropertySpec::anonymous_up_to(i, a, s.first_agents, j);
          }));
    CHECK(hyp(rs[1], "post-privacy") == every_spec(sys, s.pseudonyms(), posts, [&](const AgentId& i, const Action& a) {
            return PropertySpec::private_up_to(i, a, posts, j);
          }));
    CHECK(rs[1].conclusion_holds == every_spec(d, s.first_agents, submits, [&](const AgentId& i, const Action& a) {
            return PropertySpec::private_up_to(i, a, submits, j);
          }));
    CHECK(hyp(rs[2], "use-maximal-onymity") == every_spec(sys, s.first_agents, uses, simple(PropertyKind::maximally_onymous)));
    CHECK(hyp(rs[2], "post-maximal-identity") ==
          every_spec(sys, s.pseudonyms(), posts, simple(PropertyKind::maximally_identified)));
    CHECK(rs[2].conclusion_holds == every_spec(d, s.first_agents, submits, simple(PropertyKind::maximally_onymous)));
    CHECK(hyp(rs[3], "post-role-interchangeability") ==
          every_spec(sys, s.pseudonyms(), posts, [&](const AgentId& i, const Action& a) {
            return PropertySpec::role_interchangeable(i, a, j, posts);
          }));
    CHECK(hyp(rs[4], "use-role-interchangeability") ==
          every_spec(sys, s.first_agents, uses, [&](const AgentId& i, const Action& a) {
            return PropertySpec::role_interchangeable(i, a, j, uses);
          }));
    CHECK(rs[3].conclusion_holds == every_spec(d, s.first_agents, submits, [&](const AgentId& i, const Action& a) {
            return PropertySpec::role_interchangeable(i, a, j, submits);
          }));
    CHECK(hyp(rs[5], "post-minimal-privacy") ==
          every_spec(sys, s.pseudonyms(), posts, simple(PropertyKind::minimally_private)));
    CHECK(rs[5].conclusion_holds == every_spec(d, s.first_agents, submits, simple(PropertyKind::minimally_private)));
    CHECK(hyp(rs[6], "use-minimal-anonymity") ==
          every_spec(sys, s.first_agents, uses, simple(PropertyKind::minimally_anonymous)));
  }
}

TEST_CASE("no refutations on generated systems") {
  std::vector<ClaimId> seq_ids, par_ids;
  for (auto id : all_claims()) (flavor(id) == Flavor::sequential ? seq_ids : par_ids).push_back(id);
  for (std::uint64_t n = 0; n < 2000; ++n) {
    const auto seq = testing::sample_system(74, n);
    for (const auto& r : check_claims(seq_ids, seq, context_for(seq, Flavor::sequential)))
      if (r.claim != ClaimId::c3_1) CHECK(r.verdict != ClaimVerdict::refuted);
    const auto par = testing::sample_system(75, n, Flavor::parallel);
    for (const auto& r : check_claims(par_ids, par, context_for(par, Flavor::parallel)))
      CHECK(r.verdict != ClaimVerdict::refuted);
  }
}

TEST_CASE("small sweep") {
  SweepConfig cfg;
  cfg.random_samples = 500;
  cfg.exhaustive = false;
  const ClaimId ids[] = {ClaimId::c3_2, ClaimId::c4_2};
  const auto entries = sweep(ids, cfg);
  REQUIRE(entries.size() == 2);
  for (const auto& e : entries) {
    CHECK(e.stats.systems == 500);
    CHECK(e.stats.random_systems == 500);
    CHECK(e.stats.refuted == 0);
    CHECK(e.stats.confirmed + e.stats.vacuous == e.stats.systems);
    CHECK_FALSE(e.first_refutation);
  }
  CHECK(sweep(ids, cfg)[0].stats.confirmed == entries[0].stats.confirmed);
}

TEST_CASE("falsify finds the s12-style witness when independence is dropped") {
  GenConfig cfg;
  cfg.exhaustive = false;
  cfg.seed = 1;
  const auto r = falsify(ClaimId::c3_2, cfg, {{"independence"}});
  REQUIRE(r.counterexample);
  REQUIRE(r.report);
  CHECK(r.report->verdict == ClaimVerdict::refuted);
  CHECK(r.stats.systems <= cfg.budget);

  cfg.budget = 300;
  const auto none = falsify(ClaimId::c3_2, cfg);
  CHECK_FALSE(none.counterexample);
  CHECK(none.stats.systems == 300);
}
