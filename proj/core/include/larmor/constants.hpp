#pragma once

#include <cmath>
#include <string>

// Physical constants in SI units (CODATA 2018). The default values are baked
// in; particle data and hbar can be overridden at runtime through the JSON
// config (config.hpp) so the detection-probability tables can be re-derived
// under alternative constants.

namespace larmor {

namespace codata {
inline constexpr double hbar = 1.054571817e-34;            // J s
inline constexpr double electron_volt = 1.602176634e-19;   // J
inline constexpr double neutron_mass = 1.67492749804e-27;  // kg
// Neutron magnetic moment, sign carried (moment anti-parallel to spin).
inline constexpr double neutron_moment = -9.6623651e-27;   // J/T
}  // namespace codata

struct Constants {
  double hbar = codata::hbar;
  double electron_volt = codata::electron_volt;
};

// Probe particle. The dynamics only ever uses |magnetic_moment|; the channel
// assignment is fixed: spin-up sees the well (-mu B), spin-down the barrier
// (+mu B).
struct ParticleSpec {
  std::string label;
  double mass = 0.0;             // kg, > 0
  double magnetic_moment = 0.0;  // J/T, != 0, sign carried

  double moment_magnitude() const { return std::fabs(magnetic_moment); }
};

ParticleSpec neutron();

// Throws DomainError naming the offending field.
void validate(const ParticleSpec& particle);

}  // namespace larmor
