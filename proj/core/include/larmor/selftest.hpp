#pragma once

#include <cstdint>
#include <string>
#include <vector>

// Fast invariant suite behind the CLI `selftest` subcommand: unitarity,
// closed-form equivalence, high-energy limit recovery and quadrature
// convergence, on a deterministic seeded sample.

namespace larmor {

struct SelftestCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

std::vector<SelftestCheck> run_selftest(std::uint64_t seed = 20260808);

}  // namespace larmor
