#pragma once

#include <string>

#include "larmor/constants.hpp"

// Optional JSON overrides for the baked-in constants:
//
//   {
//     "particle": { "mass_kg": 1.675e-27, "moment_J_per_T": -9.66e-27,
//                   "label": "neutron" },
//     "hbar_J_s": 1.054571817e-34
//   }
//
// Every key is optional; absent keys keep the CODATA defaults.

namespace larmor {

struct RuntimeConfig {
  ParticleSpec particle = neutron();
  Constants constants{};
};

// Throws DomainError naming the offending key on malformed input.
RuntimeConfig load_config(const std::string& path);

}  // namespace larmor
