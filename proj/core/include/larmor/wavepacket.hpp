#pragma once

#include <complex>
#include <span>
#include <vector>

#include "larmor/constants.hpp"
#include "larmor/precession.hpp"
#include "larmor/scattering.hpp"

// Gaussian wave-packet generalization: the spin rotation is applied per
// spectral component (stationary treatment, no time-domain propagation), and
// the +x-projected spectral densities of the standard and exact treatments
// are tabulated and integrated by composite Simpson quadrature.
//
// Per-k evaluations are independent; build_density_table can fan them out
// over threads.

namespace larmor {

// g(k) = (2 delta^2/pi)^{1/4} exp(-delta^2 (k-k0)^2) exp(i k x0),
// normalized so that the integral of |g|^2 over k is 1.
struct GaussianPacket {
  double x0 = 0.0;     // m, initial peak position
  double k0 = 0.0;     // 1/m, peak wavenumber, > 0
  double delta = 0.0;  // m, position-space width, > 0

  // Spectral standard deviation of |g|^2.
  double sigma_k() const { return 1.0 / (2.0 * delta); }
};

void validate(const GaussianPacket& packet);

// delta chosen so sigma_k = sigma_rel * k0.
GaussianPacket packet_from_relative_width(double k0, double sigma_rel,
                                          double x0 = 0.0);

std::complex<double> spectral_amplitude(const GaussianPacket& packet, double k);
double spectral_density(const GaussianPacket& packet, double k);  // |g(k)|^2

// Uniform grid, odd point count for Simpson.
struct KGrid {
  double k_min = 0.0;
  double k_max = 0.0;
  int n_points = 0;

  double step() const { return (k_max - k_min) / (n_points - 1); }
  double at(int i) const { return k_min + i * step(); }
};

void validate(const KGrid& grid);

// k0 +- 6 sigma_k, 2001 points: captures all but ~2e-9 of the spectral mass.
KGrid default_grid(const GaussianPacket& packet, int n_points = 2001);

// Integrand of the +x-projected spin distribution, theta = 0:
//   standard: |g|^2 cos^2(phi(k)/2),  phi(k) = 2 muB a m/(hbar^2 k)
//   modified: |g|^2 |a(k) e^{i phi1} + b(k) e^{i phi2}|^2 / 4
// The modified density throws EvanescentError naming k when the barrier
// channel is closed at that k, unless continuation is requested.
double spin_x_density_standard(const GaussianPacket& packet,
                               const ParticleSpec& particle,
                               const FieldRegion& field, double k,
                               const Constants& c = {});
double spin_x_density_modified(const GaussianPacket& packet,
                               const ParticleSpec& particle,
                               const FieldRegion& field, double k,
                               EvanescentPolicy policy = EvanescentPolicy::Error,
                               const Constants& c = {});

struct SpinDensityRow {
  double k = 0.0;
  double g2 = 0.0;          // |g(k)|^2
  double p_std = 0.0;       // cos^2(phi(k)/2)
  double p_mod_raw = 0.0;   // |a e^{i phi1} + b e^{i phi2}|^2 / 4
  double p_mod_norm = 0.0;  // raw / transmitted weight
  double density_std = 0.0;
  double density_mod = 0.0;  // g2 * p_mod_raw
};

struct SpinDensityTable {
  KGrid grid;
  std::vector<SpinDensityRow> rows;
  bool truncated = false;  // grid was clipped to propagating k
  double k_cutoff = 0.0;   // cutoff used when truncated
};

enum class EvanescentGridPolicy {
  Fail,      // throw, naming the offending k (default)
  Truncate,  // clip the grid to propagating k and flag the table
};

// threads = 0 picks hardware_concurrency; rows come back in grid order
// regardless of the thread count.
SpinDensityTable build_density_table(const GaussianPacket& packet,
                                     const ParticleSpec& particle,
                                     const FieldRegion& field, const KGrid& grid,
                                     EvanescentGridPolicy policy = EvanescentGridPolicy::Fail,
                                     unsigned threads = 0,
                                     const Constants& c = {});

// Composite Simpson integral plus a Richardson error estimate from the
// half-resolution subgrid, |S_h - S_2h|/15 (0 when the subgrid is not
// Simpson-compatible).
struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

QuadratureResult integrate_density(const KGrid& grid,
                                   std::span<const double> samples);

// sqrt of the Simpson integral of (f - g)^2 over the grid.
double l2_distance(const KGrid& grid, std::span<const double> f,
                   std::span<const double> g);

}  // namespace larmor
