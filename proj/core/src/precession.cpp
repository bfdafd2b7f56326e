#include "larmor/precession.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "larmor/errors.hpp"

namespace larmor {

double wrap_phase(double angle) {
  double w = std::remainder(angle, 2.0 * std::numbers::pi);
  if (w <= -std::numbers::pi) w += 2.0 * std::numbers::pi;
  return w;
}

StandardPrecession standard_phase(const ParticleSpec& particle,
                                  const FieldRegion& field, const Beam& beam,
                                  const Constants& c) {
  validate(particle);
  validate(field);
  if (!std::isfinite(beam.v) || beam.v <= 0.0)
    throw DomainError("beam velocity must be positive and finite");
  StandardPrecession out;
  out.omega = particle.moment_magnitude() * field.B_tesla / c.hbar;
  out.tau = field.width / beam.v;
  out.phi = 2.0 * out.omega * out.tau;
  return out;
}

TransmittedSpinor modified_spinor(const ParticleSpec& particle,
                                  const FieldRegion& field, const Beam& beam,
                                  EvanescentPolicy policy, const Constants& c) {
  const ChannelAmplitudes well =
      scatter_channel(beam, particle, field, ChannelKind::Well, policy, c);
  const ChannelAmplitudes barrier =
      scatter_channel(beam, particle, field, ChannelKind::Barrier, policy, c);
  TransmittedSpinor spinor;
  spinor.amp_up = std::abs(well.t);
  spinor.amp_down = std::abs(barrier.t);
  spinor.phase_up = wrap_phase(std::arg(well.t));
  spinor.phase_down = wrap_phase(std::arg(barrier.t));
  return spinor;
}

double detection_probability_standard(double phi, double theta) {
  const double half = 0.5 * (theta - phi);
  const double cc = std::cos(half);
  return cc * cc;
}

double detection_probability_modified(const TransmittedSpinor& spinor,
                                      double theta, bool normalized) {
  const double a = spinor.amp_up, b = spinor.amp_down;
  const double raw =
      0.25 * (a * a + b * b +
              2.0 * a * b * std::cos(spinor.phase_up - spinor.phase_down + theta));
  if (!normalized) return raw;
  const double weight = spinor.transmitted_weight();
  if (weight == 0.0)
    throw DegenerateSpinorError(
        "cannot normalize: transmitted spinor has zero weight (a = b = 0)");
  return raw / weight;
}

LimitPhases high_energy_limit_phases(double k, double k1, double k2, double a) {
  return LimitPhases{(k2 - k) * a, (k1 - k) * a};
}

LimitPhases high_energy_limit_phases(const ChannelWavenumbers& kn, double a) {
  return LimitPhases{kn.dk_well * a, kn.dk_barrier * a};
}

double calibrate_width(const ParticleSpec& particle, double B_tesla, double v,
                       double theta, double target_p, unsigned branch,
                       const Constants& c) {
  validate(particle);
  if (!std::isfinite(target_p) || target_p < 0.0 || target_p > 1.0) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "target_p must lie in [0, 1] (got %.6g)",
                  target_p);
    throw DomainError(buf);
  }
  if (!std::isfinite(B_tesla) || B_tesla <= 0.0)
    throw DomainError("B must be positive and finite for calibration");
  if (!std::isfinite(v) || v <= 0.0)
    throw DomainError("v must be positive and finite");
  if (!std::isfinite(theta)) throw DomainError("theta must be finite");

  // cos^2((theta - phi)/2) = p  <=>  phi = theta -+ 2 alpha (mod 4 pi),
  // alpha = arccos(sqrt(p)) in [0, pi/2]. Collect the positive phi ladder in
  // increasing order; with period 2 pi in each family it suffices to seed the
  // two wrapped family anchors and step by 2 pi.
  const double pi = std::numbers::pi;
  const double alpha = std::acos(std::sqrt(target_p));
  double base_lo = std::fmod(theta - 2.0 * alpha, 2.0 * pi);
  double base_hi = std::fmod(theta + 2.0 * alpha, 2.0 * pi);
  while (base_lo <= 0.0) base_lo += 2.0 * pi;
  while (base_hi <= 0.0) base_hi += 2.0 * pi;
  double lo = base_lo, hi = base_hi;
  const bool same_family = base_lo == base_hi;  // alpha = 0 or pi/2 (mod pi)
  double phi = 0.0;
  for (unsigned i = 0;; ++i) {
    double next;
    if (same_family) {
      next = lo;
      lo += 2.0 * pi;
    } else if (lo <= hi) {
      next = lo;
      lo += 2.0 * pi;
    } else {
      next = hi;
      hi += 2.0 * pi;
    }
    if (i == branch) {
      phi = next;
      break;
    }
  }
  return phi * c.hbar * v / (2.0 * particle.moment_magnitude() * B_tesla);
}

}  // namespace larmor
