#pragma once

#include "larmor/constants.hpp"
#include "larmor/scattering.hpp"
#include "larmor/units.hpp"

// Spin rotation of the transmitted beam: the textbook precession baseline,
// the exact transmitted spinor built from the two channel amplitudes, the
// Stern-Gerlach detection probabilities behind an analyzer at angle theta,
// the high-energy limit phases, and inversion of the baseline formula to
// calibrate the rotator width.

namespace larmor {

// Wraps into (-pi, pi].
double wrap_phase(double angle);

// Textbook treatment: omega = muB/hbar, tau = a/v, phi = 2 omega tau.
// phi is reported unreduced; callers wrap when comparing phases.
struct StandardPrecession {
  double omega = 0.0;  // rad/s
  double tau = 0.0;    // s
  double phi = 0.0;    // rad
};

StandardPrecession standard_phase(const ParticleSpec& particle,
                                  const FieldRegion& field, const Beam& beam,
                                  const Constants& c = {});

// Post-selected transmitted spin state (a e^{i phi1}, b e^{i phi2})/sqrt(2):
// a, b are the channel transmission moduli, phi1/phi2 the full-quadrant
// arguments in (-pi, pi].
struct TransmittedSpinor {
  double amp_up = 1.0;      // a = |t_well|
  double amp_down = 1.0;    // b = |t_barrier|
  double phase_up = 0.0;    // phi1
  double phase_down = 0.0;  // phi2

  // (a^2 + b^2)/2: the transmitted flux fraction of the incident +x state.
  double transmitted_weight() const {
    return 0.5 * (amp_up * amp_up + amp_down * amp_down);
  }
};

TransmittedSpinor modified_spinor(const ParticleSpec& particle,
                                  const FieldRegion& field, const Beam& beam,
                                  EvanescentPolicy policy = EvanescentPolicy::Error,
                                  const Constants& c = {});

// Stern-Gerlach analyzer orientation in the x-y plane, stored wrapped.
struct AnalyzerSetting {
  double theta = 0.0;  // rad, in (-pi, pi]
  AnalyzerSetting() = default;
  explicit AnalyzerSetting(double t) : theta(wrap_phase(t)) {}
};

// cos^2((theta - phi)/2)
double detection_probability_standard(double phi, double theta);

// Raw mode: |<up_theta|chi'>|^2 = (a^2 + b^2 + 2ab cos(phi1 - phi2 + theta))/4,
// the joint probability of being transmitted and detected along theta.
// Normalized mode divides by transmitted_weight so that
// p(theta) + p(theta + pi) = 1. Throws DegenerateSpinorError if the weight
// vanishes in normalized mode.
double detection_probability_modified(const TransmittedSpinor& spinor,
                                      double theta, bool normalized = false);

// High-energy limit of the spinor phases: ((k2 - k) a, (k1 - k) a).
// Callers compare against modified_spinor phases mod 2 pi. The overload
// taking ChannelWavenumbers uses the cancellation-free dk fields.
struct LimitPhases {
  double phi_up = 0.0;    // (k2 - k) a
  double phi_down = 0.0;  // (k1 - k) a
};
LimitPhases high_energy_limit_phases(double k, double k1, double k2, double a);
LimitPhases high_energy_limit_phases(const ChannelWavenumbers& kn, double a);

// Inverts cos^2((theta - phi(a))/2) = target_p with phi(a) = 2 muB a/(hbar v):
// returns the branch-th smallest a > 0 (branch 0 = smallest). Throws
// DomainError for target_p outside [0, 1] or invalid inputs.
double calibrate_width(const ParticleSpec& particle, double B_tesla, double v,
                       double theta, double target_p, unsigned branch = 0,
                       const Constants& c = {});

// Default rotator width used by the CLI when none is given: the smallest
// width consistent with both reference probability anchors
//   cos^2(phi/2) = 0.40725   at B = 2 T,     v = 2000 m/s
//   cos^2(phi/2) = 0.949661  at B = 0.001 T, v = 10 m/s
// that also exhibits the full low-velocity departure of the exact treatment
// (the anchor fit alone is branch-degenerate). Frozen output of the
// calibration fit; not an independently measured value.
inline constexpr double default_rotator_width = 3.181825098139236e-04;  // m

}  // namespace larmor
