#pragma once

// Compositionality claims and lemmas as executable theorems: per-system
// checks, sweeps over generated systems, and counterexample search with
// hypotheses removed.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "epicomp/composition.hpp"
#include "epicomp/scenarios.hpp"
#include "epicomp/system.hpp"

namespace epicomp {

enum class ClaimId {
  c3_1, c3_2, c3_3, c3_4, c3_5,
  c4_1, c4_2,
  ca_1, ca_2, ca_3, ca_4, ca_5, ca_6, ca_7,
  cb_1, cb_2,
  l3_1, l3_2,
  la_1, la_2, la_3,
  appc_eq,
};

std::span<const ClaimId> all_claims();
/// C3.1, ..., APPC-EQ
std::string_view to_string(ClaimId id);
std::optional<ClaimId> parse_claim_id(std::string_view text);
Flavor flavor(ClaimId id);
/// One-line statement in plain words.
std::string_view statement(ClaimId id);
/// Hypothesis names accepted by ClaimOptions::dropped, in report order.
std::vector<std::string> hypothesis_names(ClaimId id);
std::string conclusion_name(ClaimId id);

struct ClaimContext {
  AgentId observer = default_observer();
  Schema schema;
  /// Anonymity sets I_a and I_b of the parallel anonymity claim; every
  /// schema agent when absent.
  std::optional<std::vector<AgentId>> anonymity_a;
  std::optional<std::vector<AgentId>> anonymity_b;
  IndependenceOptions independence;
};

enum class ClaimVerdict { confirmed, vacuous, refuted };
std::string_view to_string(ClaimVerdict v);

struct ConditionResult {
  std::string name;
  bool holds = true;
  /// First failing instance, e.g. "anon-upto(i1, submit(c1), {i1,i2}, j) fails at r1 (i2)".
  std::string detail;
};

struct ClaimReport {
  ClaimId claim{};
  std::string system;
  std::vector<ConditionResult> hypotheses;
  bool hypotheses_hold = true;
  /// For C3.1 this lists the four items; otherwise one entry.
  std::vector<ConditionResult> conclusion;
  bool conclusion_holds = true;
  /// False when lazy evaluation stopped at a failing hypothesis.
  bool conclusion_evaluated = true;
  ClaimVerdict verdict = ClaimVerdict::vacuous;
};

struct ClaimOptions {
  std::vector<std::string> dropped;
  /// Skip the conclusion once a hypothesis fails.
  bool lazy = false;
};

/// Throws ValidationError on a claim/schema flavour mismatch or an unknown
/// dropped hypothesis name.
ClaimReport check_claim(ClaimId id, const InterpretedSystem& sys, const ClaimContext& ctx,
                        const ClaimOptions& options = {});

/// Checks several claims on one system, sharing condition evaluations.
std::vector<ClaimReport> check_claims(std::span<const ClaimId> ids, const InterpretedSystem& sys,
                                      const ClaimContext& ctx, const ClaimOptions& options = {});

/// Context for a named system (observer j, its schema).
ClaimContext paper_context(std::string_view name);

struct SweepStats {
  std::uint64_t systems = 0;
  std::uint64_t exhaustive_systems = 0;
  std::uint64_t random_systems = 0;
  std::uint64_t confirmed = 0;
  std::uint64_t vacuous = 0;
  std::uint64_t refuted = 0;
  double vacuity_rate() const { return systems ? static_cast<double>(vacuous) / static_cast<double>(systems) : 0.0; }
};

struct FalsifyResult {
  ClaimId claim{};
  std::optional<InterpretedSystem> counterexample;
  std::optional<ClaimReport> report;
  /// Systems examined up to and including the counterexample.
  SweepStats stats;
};

/// Enumerates the small universe (when cfg.exhaustive) and then draws
/// cfg.budget samples, stopping at the first system where the remaining
/// hypotheses hold and the conclusion fails.
FalsifyResult falsify(ClaimId id, const GenConfig& cfg, const ClaimOptions& options = {});

struct SweepConfig {
  std::uint64_t seed = 1;
  std::uint64_t random_samples = 100'000;
  std::size_t max_runs = 4;
  std::size_t max_entities = 3;
  bool exhaustive = true;
};

struct SweepEntry {
  ClaimId claim{};
  SweepStats stats;
  std::optional<InterpretedSystem> first_refutation;
};

/// The `index`-th random system of a sweep; even indices use one observer
/// block, odd ones a random partition.
InterpretedSystem sweep_sample(const SweepConfig& cfg, Flavor fl, std::uint64_t index);

/// Runs every claim in `ids` over the exhaustive 2x2x2 universe and
/// cfg.random_samples random systems (sizes in 1..max_entities, both
/// partition policies).
std::vector<SweepEntry> sweep(std::span<const ClaimId> ids, const SweepConfig& cfg);

}  // namespace epicomp
