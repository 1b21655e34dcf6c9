#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace shoga {

struct ClaimResult {
  std::string name;
  bool pass = false;
  double max_residual = 0.0;
  std::string detail;
};

struct VerifyOptions {
  int max_n = 6;            // largest player count for the random batteries
  std::uint64_t seed = 7;   // base seed; recorded so witnesses reproduce
};

// Runs the full golden battery: the three worked example tables, the axiom
// suites for the associated-game map and its rescaling, the uniqueness basis
// cases, value consistency, the quotient link, the transform round-trips,
// and the Poisson-solver bridges. Every claim returns its worst residual.
std::vector<ClaimResult> verify_paper(const VerifyOptions& options);

}  // namespace shoga
