#pragma once

// Test-only helpers: a naive evaluator over run-id sets that shares no code
// with the bitset evaluator, and seeded generators for formulas and systems.

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "epicomp/formula.hpp"
#include "epicomp/scenarios.hpp"
#include "epicomp/system.hpp"

namespace testing {

using namespace epicomp;

inline std::set<std::string> naive_kernel(const InterpretedSystem& sys, const AgentId& j, const std::string& run) {
  for (const auto& p : sys.declaration().partitions) {
    if (p.observer != j) continue;
    for (const auto& b : p.blocks)
      if (std::find(b.begin(), b.end(), run) != b.end()) return {b.begin(), b.end()};
  }
  return {};
}

inline bool naive_holds(const InterpretedSystem& sys, const std::string& run, const Fact& f) {
  for (const auto& r : sys.declaration().runs)
    if (r.id == run) return std::find(r.facts.begin(), r.facts.end(), f) != r.facts.end();
  return false;
}

inline bool naive_eval(const InterpretedSystem& sys, const std::string& run, const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::atom: return naive_holds(sys, run, f.fact());
    case K::truth: return true;
    case K::falsity: return false;
    case K::negation: return !naive_eval(sys, run, f.operand());
    case K::conjunction: return naive_eval(sys, run, f.lhs()) && naive_eval(sys, run, f.rhs());
    case K::disjunction: return naive_eval(sys, run, f.lhs()) || naive_eval(sys, run, f.rhs());
    case K::implication: return !naive_eval(sys, run, f.lhs()) || naive_eval(sys, run, f.rhs());
    case K::equivalence: return naive_eval(sys, run, f.lhs()) == naive_eval(sys, run, f.rhs());
    case K::knows:
      for (const auto& r : naive_kernel(sys, f.observer(), run))
        if (!naive_eval(sys, r, f.operand())) return false;
      return true;
    case K::possible:
      for (const auto& r : naive_kernel(sys, f.observer(), run))
        if (naive_eval(sys, r, f.operand())) return true;
      return false;
  }
  return false;
}

inline bool naive_valid(const InterpretedSystem& sys, const Formula& f) {
  for (const auto& r : sys.declaration().runs)
    if (!naive_eval(sys, r.id, f)) return false;
  return true;
}

/// Every (agent, action) pair declared in the system.
inline std::vector<Fact> all_facts(const InterpretedSystem& sys) {
  std::vector<Fact> out;
  for (const auto& a : sys.agents())
    for (const auto& act : sys.actions()) out.push_back({a.id, act});
  return out;
}

class FormulaGen {
 public:
  FormulaGen(std::uint64_t seed, std::vector<Fact> atoms, std::vector<AgentId> observers)
      : rng_(seed), atoms_(std::move(atoms)), observers_(std::move(observers)) {}

  Formula operator()(int depth) {
    const int pick = static_cast<int>(rng_() % (depth <= 0 ? 3 : 11));
    switch (pick) {
      case 0:
      case 1: return Formula::atom(atoms_[rng_() % atoms_.size()]);
      case 2: return rng_() % 2 ? Formula::truth() : Formula::falsity();
      case 3: return Formula::negation((*this)(depth - 1));
      case 4: return Formula::conjunction((*this)(depth - 1), (*this)(depth - 1));
      case 5: return Formula::disjunction((*this)(depth - 1), (*this)(depth - 1));
      case 6: return Formula::implication((*this)(depth - 1), (*this)(depth - 1));
      case 7: return Formula::equivalence((*this)(depth - 1), (*this)(depth - 1));
      case 8:
      case 9: return Formula::knows(observer(), (*this)(depth - 1));
      default: return Formula::possible(observer(), (*this)(depth - 1));
    }
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  AgentId observer() { return observers_[rng_() % observers_.size()]; }

  std::mt19937_64 rng_;
  std::vector<Fact> atoms_;
  std::vector<AgentId> observers_;
};

/// Seeded sequential systems of mixed size and partition policy.
inline InterpretedSystem sample_system(std::uint64_t seed, std::uint64_t index,
                                       Flavor flavor = Flavor::sequential, std::size_t max_runs = 4) {
  GenConfig cfg;
  cfg.flavor = flavor;
  cfg.real_agents = cfg.pseudonyms = cfg.articles = 3;
  cfg.vary_sizes = true;
  cfg.max_runs = max_runs;
  cfg.policy = PartitionPolicy::mixed;
  cfg.seed = seed;
  return random_system(cfg, index);
}

/// Merges two blocks of j's partition (the first two, when present).
inline InterpretedSystem merge_first_blocks(const InterpretedSystem& sys, const AgentId& j) {
  ObserverPartition p;
  for (const auto& q : sys.partitions())
    if (q.observer == j) p = q;
  if (p.blocks.size() >= 2) {
    p.blocks[0].insert(p.blocks[0].end(), p.blocks[1].begin(), p.blocks[1].end());
    p.blocks.erase(p.blocks.begin() + 1);
  }
  return with_partition(sys, p);
}

}  // namespace testing
