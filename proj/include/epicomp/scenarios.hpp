#pragma once

// Concrete systems: the bulletin-board and time-bomb examples, seeded random
// systems, exhaustive small-universe enumeration and chains of two mixers.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "epicomp/composition.hpp"
#include "epicomp/system.hpp"

namespace epicomp {

enum class Flavor { sequential, parallel };

std::string_view to_string(Flavor flavor);

// ---------------------------------------------------------------------------
// Named systems

/// s12, s1234, s56, s125678, s129-12, bomb-independent, bomb-dependent.
std::vector<std::string> paper_system_names();

/// Throws ValidationError for an unknown name and Error when a run
/// reconstruction search comes back empty.
InterpretedSystem paper_system(std::string_view name);

/// seq use:I_P={k1,k2} post:C={c1,c2} => submit I_R={i1,i2}
SequentialSchema bulletin_board_schema();
/// par buy_timer + synthesize_gunpowder => give : C={c} I={i1,i2}
ParallelSchema bomb_schema();
/// Schema matching a named system; ValidationError for an unknown name.
Schema paper_schema(std::string_view name);

inline AgentId default_observer() { return AgentId{"j"}; }

/// Searches, in canonical order, for `free_runs` extra runs over the
/// 2x2x2 bulletin-board fact universe such that `fixed` plus the new runs
/// (one observer block) has basic independence, role-interchangeable use
/// and post pairs, fails pairwise independence, and has some submit pair
/// that is not role interchangeable. Candidates post every article, differ
/// from `fixed` and `excluded`, and are ordered by (fact count, bit pattern).
struct RunSearchResult {
  std::vector<Run> runs;
  std::uint64_t examined = 0;
};
std::optional<RunSearchResult> reconstruct_runs(const std::vector<Run>& fixed, std::size_t free_runs,
                                                const std::vector<Run>& excluded, const std::vector<std::string>& ids,
                                                std::uint64_t budget = 100'000'000);

// ---------------------------------------------------------------------------
// Generated systems

enum class PartitionPolicy { single_block, random_partition, mixed, discrete };

struct GenConfig {
  Flavor flavor = Flavor::sequential;
  /// |I_R| (sequential) or the number of agents (parallel).
  std::size_t real_agents = 2;
  /// |I_P|; unused for parallel systems.
  std::size_t pseudonyms = 2;
  /// |C|
  std::size_t articles = 2;
  std::size_t max_runs = 4;
  PartitionPolicy policy = PartitionPolicy::single_block;
  std::uint64_t seed = 0;
  /// Samples drawn by falsify.
  std::size_t budget = 10'000;
  /// Draw each count uniformly from [1, count] instead of using it exactly.
  bool vary_sizes = false;
  /// Enumerate the small universe exhaustively before sampling.
  bool exhaustive = true;
};

/// Throws ValidationError when a count is zero.
void validate(const GenConfig& cfg);

/// One sample; deterministic in (cfg, cfg.seed). Agents are i1.. (real),
/// k1.. (pseudo) and the observer j; parallel systems use families act_a,
/// act_b over params c1...
InterpretedSystem random_system(const GenConfig& cfg);

/// The `index`-th sample of a seeded stream.
InterpretedSystem random_system(const GenConfig& cfg, std::uint64_t index);

/// Schema for systems produced by random_system / enumerate_small_systems.
Schema generated_schema(const InterpretedSystem& sys, Flavor flavor);

/// Every system of at most two distinct runs over the full fact universe of
/// the given sizes, one observer block, in canonical order (singletons by
/// bit pattern, then pairs lexicographically). The callback returns false
/// to stop early.
std::uint64_t enumerate_small_systems(const GenConfig& sizes,
                                      const std::function<bool(const InterpretedSystem&)>& visit);

// ---------------------------------------------------------------------------
// Mixer chains

using Permutation = std::vector<std::size_t>;

std::vector<Permutation> all_permutations(std::size_t n);
Permutation inverse(const Permutation& p);

/// Second mixer of a chain: a permutation family, or the inverse of
/// whatever the first mixer did in the same run.
struct SecondMixer {
  std::vector<Permutation> family;
  bool inverse_of_first = false;
};

/// Runs pair every first-mixer permutation with every admissible second
/// one. theta(m_x, use(k_y)) says the first mixer turned incoming m_x into
/// intermediate k_y; theta(k_y, post(c_z)) says the second turned k_y into
/// outgoing c_z. Throws ValidationError on mismatched message domains.
InterpretedSystem mixer_chain(const std::vector<Permutation>& first, const SecondMixer& second,
                              PartitionPolicy observation = PartitionPolicy::single_block);

/// Schema of a mixer chain over n messages.
SequentialSchema mixer_schema(std::size_t n);

}  // namespace epicomp
