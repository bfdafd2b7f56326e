#include "larmor/units.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "larmor/errors.hpp"

namespace larmor {

namespace {

std::string describe(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

void require_positive_finite(double x, const char* name) {
  if (!std::isfinite(x) || x <= 0.0)
    throw DomainError(std::string(name) + " must be positive and finite (got " +
                      describe(x) + ")");
}

}  // namespace

ParticleSpec neutron() {
  return ParticleSpec{"neutron", codata::neutron_mass, codata::neutron_moment};
}

void validate(const ParticleSpec& particle) {
  if (!std::isfinite(particle.mass) || particle.mass <= 0.0)
    throw DomainError("particle.mass_kg must be positive and finite (got " +
                      describe(particle.mass) + ")");
  if (!std::isfinite(particle.magnetic_moment) || particle.magnetic_moment == 0.0)
    throw DomainError("particle.moment_J_per_T must be nonzero and finite (got " +
                      describe(particle.magnetic_moment) + ")");
}

Beam beam_from_velocity(const ParticleSpec& particle, double v,
                        const Constants& c) {
  validate(particle);
  require_positive_finite(v, "v");
  Beam beam;
  beam.v = v;
  beam.E = 0.5 * particle.mass * v * v;
  beam.k = particle.mass * v / c.hbar;
  return beam;
}

Beam beam_from_energy(const ParticleSpec& particle, double E,
                      const Constants& c) {
  validate(particle);
  require_positive_finite(E, "E");
  return beam_from_velocity(particle, std::sqrt(2.0 * E / particle.mass), c);
}

Beam beam_from_wavenumber(const ParticleSpec& particle, double k,
                          const Constants& c) {
  validate(particle);
  require_positive_finite(k, "k");
  return beam_from_velocity(particle, c.hbar * k / particle.mass, c);
}

ChannelWavenumbers channel_wavenumbers(const Beam& beam,
                                       const ParticleSpec& particle,
                                       double B_tesla, const Constants& c) {
  validate(particle);
  if (!std::isfinite(B_tesla) || B_tesla < 0.0)
    throw DomainError("B must be non-negative and finite (got " +
                      describe(B_tesla) + ")");
  require_positive_finite(beam.E, "beam.E");

  const double muB = particle.moment_magnitude() * B_tesla;
  const double m = particle.mass;
  if (beam.E <= muB) {
    const double kappa = std::sqrt(2.0 * m * (muB - beam.E)) / c.hbar;
    throw EvanescentError(
        "barrier channel is evanescent: E = " + describe(beam.E) +
            " J <= muB = " + describe(muB) + " J (kappa = " + describe(kappa) +
            " 1/m)",
        kappa);
  }

  ChannelWavenumbers kn;
  kn.k = beam.k;
  kn.k_barrier = std::sqrt(2.0 * m * (beam.E - muB)) / c.hbar;
  kn.k_well = std::sqrt(2.0 * m * (beam.E + muB)) / c.hbar;
  // k_chan^2 - k^2 = -+2 m muB / hbar^2 exactly; dividing by k_chan + k gives
  // the difference without cancellation.
  const double q = 2.0 * m * muB / (c.hbar * c.hbar);
  kn.dk_barrier = -q / (kn.k_barrier + kn.k);
  kn.dk_well = q / (kn.k_well + kn.k);
  return kn;
}

double evanescent_cutoff_k(const ParticleSpec& particle, double B_tesla,
                           const Constants& c) {
  validate(particle);
  if (!std::isfinite(B_tesla) || B_tesla < 0.0)
    throw DomainError("B must be non-negative and finite (got " +
                      describe(B_tesla) + ")");
  return std::sqrt(2.0 * particle.mass * particle.moment_magnitude() * B_tesla) /
         c.hbar;
}

}  // namespace larmor
