#pragma once

#include "larmor/constants.hpp"

// Beam kinematics: exact conversions among the velocity, kinetic-energy and
// wavenumber views of the incident plane wave, and the split into the two
// spin-channel wavenumbers inside the field region.
//
// All functions are pure and thread-safe.

namespace larmor {

// The three views are constructed mutually consistent:
//   E = 1/2 m v^2,  k = sqrt(2 m E)/hbar = m v / hbar,  v = hbar k / m.
struct Beam {
  double v = 0.0;  // m/s
  double E = 0.0;  // J
  double k = 0.0;  // 1/m
};

Beam beam_from_velocity(const ParticleSpec& particle, double v,
                        const Constants& c = {});
Beam beam_from_energy(const ParticleSpec& particle, double E,
                      const Constants& c = {});
Beam beam_from_wavenumber(const ParticleSpec& particle, double k,
                          const Constants& c = {});

inline double joule_to_ev(double E, const Constants& c = {}) {
  return E / c.electron_volt;
}
inline double ev_to_joule(double E_ev, const Constants& c = {}) {
  return E_ev * c.electron_volt;
}

// Interior wavenumbers for the two decoupled channels at field strength B:
//   barrier (spin-down): k1 = sqrt(2m(E - muB))/hbar
//   well    (spin-up)  : k2 = sqrt(2m(E + muB))/hbar
// dk_* hold k_chan - k computed from the exact identity
//   k_chan^2 - k^2 = +-2 m muB / hbar^2,
// free of the cancellation that direct subtraction suffers at muB << E.
struct ChannelWavenumbers {
  double k = 0.0;
  double k_barrier = 0.0;
  double k_well = 0.0;
  double dk_barrier = 0.0;  // k_barrier - k  (<= 0)
  double dk_well = 0.0;     // k_well - k     (>= 0)
};

// Throws EvanescentError (carrying kappa) when E <= mu B.
ChannelWavenumbers channel_wavenumbers(const Beam& beam,
                                       const ParticleSpec& particle,
                                       double B_tesla, const Constants& c = {});

// Barrier channel closes for k below this: k_cut = sqrt(2 m muB)/hbar.
double evanescent_cutoff_k(const ParticleSpec& particle, double B_tesla,
                           const Constants& c = {});

}  // namespace larmor
