#pragma once

#include <string>
#include <vector>

namespace epicomp {

/// 0: everything checked holds; 1: some check fails or a claim is REFUTED;
/// 2: usage or input error.
struct CliResult {
  int status = 0;
  std::string out;
  std::string err;
};

/// Runs one command line (without the program name).
CliResult execute(const std::vector<std::string>& args);

}  // namespace epicomp
