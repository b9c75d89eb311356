#pragma once

// Text and JSON forms of an interpreted system, plus a DOT view of the
// observer partitions.
//
//   # comment
//   system s12
//   agents: i1:real i2:real k1:pseudo k2:pseudo j:observer
//   actions: use(k1) use(k2) post(c1) post(c2)
//   run r1: i1:use(k1) k1:post(c1) i2:use(k2) k2:post(c2)
//   run r2: i1:use(k2) k2:post(c1) i2:use(k1) k1:post(c2)
//   indist j: {r1 r2}

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "epicomp/system.hpp"

namespace epicomp {

/// Throws ParseError (1-based line and column) on syntax errors, undeclared
/// agents/actions in runs and duplicate run ids; other declaration problems
/// surface as ValidationError from build_system.
InterpretedSystem parse_system(std::string_view text);
std::string serialize(const InterpretedSystem& sys);

InterpretedSystem parse_system_json(std::string_view text);
std::string to_json(const InterpretedSystem& sys);

/// Picks the JSON reader for a .json extension. Throws Error when the file
/// cannot be read.
InterpretedSystem load_system(const std::filesystem::path& path);
void save_system(const InterpretedSystem& sys, const std::filesystem::path& path);

/// One cluster per block; every observer unless one is named.
std::string to_dot(const InterpretedSystem& sys, const std::optional<AgentId>& observer = std::nullopt);

}  // namespace epicomp
