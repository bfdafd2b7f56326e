#include "larmor/wavepacket.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <thread>

#include "larmor/errors.hpp"

namespace larmor {

namespace {

std::string describe(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

// Chunked parallel map; per-k evaluations are pure so any split is safe.
template <typename F>
void parallel_for(int n, unsigned threads, F&& body) {
  unsigned want = threads ? threads : std::thread::hardware_concurrency();
  if (want <= 1 || n < 256) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  want = std::min<unsigned>(want, static_cast<unsigned>(n));
  std::vector<std::thread> pool;
  pool.reserve(want);
  const int chunk = (n + static_cast<int>(want) - 1) / static_cast<int>(want);
  for (unsigned t = 0; t < want; ++t) {
    const int lo = static_cast<int>(t) * chunk;
    const int hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body] {
      for (int i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

double simpson(std::span<const double> f, double h) {
  const int n = static_cast<int>(f.size());
  double odd = 0.0, even = 0.0;
  for (int i = 1; i < n - 1; i += 2) odd += f[i];
  for (int i = 2; i < n - 1; i += 2) even += f[i];
  return h / 3.0 * (f.front() + f.back() + 4.0 * odd + 2.0 * even);
}

}  // namespace

void validate(const GaussianPacket& packet) {
  if (!std::isfinite(packet.k0) || packet.k0 <= 0.0)
    throw DomainError("packet.k0 must be positive and finite (got " +
                      describe(packet.k0) + ")");
  if (!std::isfinite(packet.delta) || packet.delta <= 0.0)
    throw DomainError("packet.delta must be positive and finite (got " +
                      describe(packet.delta) + ")");
  if (!std::isfinite(packet.x0))
    throw DomainError("packet.x0 must be finite");
}

GaussianPacket packet_from_relative_width(double k0, double sigma_rel,
                                          double x0) {
  if (!std::isfinite(sigma_rel) || sigma_rel <= 0.0)
    throw DomainError("sigma_rel must be positive and finite (got " +
                      describe(sigma_rel) + ")");
  GaussianPacket packet;
  packet.x0 = x0;
  packet.k0 = k0;
  packet.delta = 1.0 / (2.0 * sigma_rel * k0);
  validate(packet);
  return packet;
}

std::complex<double> spectral_amplitude(const GaussianPacket& packet, double k) {
  const double d2 = packet.delta * packet.delta;
  const double dk = k - packet.k0;
  const double mag = std::pow(2.0 * d2 / std::numbers::pi, 0.25) *
                     std::exp(-d2 * dk * dk);
  return std::polar(mag, k * packet.x0);
}

double spectral_density(const GaussianPacket& packet, double k) {
  const double d2 = packet.delta * packet.delta;
  const double dk = k - packet.k0;
  return std::sqrt(2.0 * d2 / std::numbers::pi) * std::exp(-2.0 * d2 * dk * dk);
}

void validate(const KGrid& grid) {
  if (!(grid.n_points >= 3) || grid.n_points % 2 == 0)
    throw DomainError("grid.n_points must be odd and >= 3 (got " +
                      std::to_string(grid.n_points) + ")");
  if (!std::isfinite(grid.k_min) || !std::isfinite(grid.k_max) ||
      grid.k_min <= 0.0 || grid.k_max <= grid.k_min)
    throw DomainError("grid requires 0 < k_min < k_max (got k_min = " +
                      describe(grid.k_min) + ", k_max = " + describe(grid.k_max) +
                      ")");
}

KGrid default_grid(const GaussianPacket& packet, int n_points) {
  validate(packet);
  const double sk = packet.sigma_k();
  KGrid grid{packet.k0 - 6.0 * sk, packet.k0 + 6.0 * sk, n_points};
  if (grid.k_min <= 0.0)
    throw DomainError(
        "default grid reaches k <= 0; packet is spectrally too wide (sigma_k/k0 = " +
        describe(sk / packet.k0) + " >= 1/6)");
  validate(grid);
  return grid;
}

double spin_x_density_standard(const GaussianPacket& packet,
                               const ParticleSpec& particle,
                               const FieldRegion& field, double k,
                               const Constants& c) {
  // phi(k) = 2 muB a m / (hbar^2 k): each spectral component precesses with
  // its own transit time, not the packet's peak velocity.
  const double phi = 2.0 * particle.moment_magnitude() * field.B_tesla *
                     field.width * particle.mass / (c.hbar * c.hbar * k);
  return spectral_density(packet, k) * detection_probability_standard(phi, 0.0);
}

double spin_x_density_modified(const GaussianPacket& packet,
                               const ParticleSpec& particle,
                               const FieldRegion& field, double k,
                               EvanescentPolicy policy, const Constants& c) {
  const Beam beam = beam_from_wavenumber(particle, k, c);
  try {
    const ChannelAmplitudes well =
        scatter_channel(beam, particle, field, ChannelKind::Well, policy, c);
    const ChannelAmplitudes barrier =
        scatter_channel(beam, particle, field, ChannelKind::Barrier, policy, c);
    return spectral_density(packet, k) * 0.25 * std::norm(well.t + barrier.t);
  } catch (const EvanescentError& err) {
    throw EvanescentError("grid point k = " + describe(k) +
                              " 1/m is evanescent: " + err.what(),
                          err.kappa);
  }
}

SpinDensityTable build_density_table(const GaussianPacket& packet,
                                     const ParticleSpec& particle,
                                     const FieldRegion& field, const KGrid& grid,
                                     EvanescentGridPolicy policy,
                                     unsigned threads, const Constants& c) {
  validate(packet);
  validate(particle);
  validate(field);
  validate(grid);

  KGrid use = grid;
  SpinDensityTable table;
  const double k_cut = evanescent_cutoff_k(particle, field.B_tesla, c);
  if (grid.k_min <= k_cut) {
    if (policy == EvanescentGridPolicy::Fail)
      throw EvanescentError(
          "grid point k = " + describe(grid.k_min) +
              " 1/m is evanescent (barrier channel closes below k = " +
              describe(k_cut) + " 1/m); truncate or raise k_min",
          0.0);
    // Clip to propagating k, keeping the ceiling and an odd point count.
    const double lift = std::max(k_cut * (1.0 + 1e-12), k_cut + 1e-300);
    if (lift >= grid.k_max)
      throw DomainError("entire grid is evanescent at B = " +
                        describe(field.B_tesla) + " T");
    use.k_min = lift;
    use.n_points = grid.n_points | 1;
    table.truncated = true;
    table.k_cutoff = k_cut;
  }

  table.grid = use;
  table.rows.assign(static_cast<size_t>(use.n_points), SpinDensityRow{});
  const double mu = particle.moment_magnitude();
  const double phase_scale = 2.0 * mu * field.B_tesla * field.width *
                             particle.mass / (c.hbar * c.hbar);

  parallel_for(use.n_points, threads, [&](int i) {
    const double k = use.at(i);
    const Beam beam = beam_from_wavenumber(particle, k, c);
    const ChannelAmplitudes well = scatter_channel(
        beam, particle, field, ChannelKind::Well, EvanescentPolicy::Error, c);
    const ChannelAmplitudes barrier = scatter_channel(
        beam, particle, field, ChannelKind::Barrier, EvanescentPolicy::Error, c);
    SpinDensityRow& row = table.rows[static_cast<size_t>(i)];
    row.k = k;
    row.g2 = spectral_density(packet, k);
    row.p_std = detection_probability_standard(phase_scale / k, 0.0);
    row.p_mod_raw = 0.25 * std::norm(well.t + barrier.t);
    const double weight =
        0.5 * (std::norm(well.t) + std::norm(barrier.t));
    row.p_mod_norm = row.p_mod_raw / weight;
    row.density_std = row.g2 * row.p_std;
    row.density_mod = row.g2 * row.p_mod_raw;
  });
  return table;
}

QuadratureResult integrate_density(const KGrid& grid,
                                   std::span<const double> samples) {
  validate(grid);
  if (static_cast<int>(samples.size()) != grid.n_points)
    throw DomainError("sample count " + std::to_string(samples.size()) +
                      " does not match grid.n_points = " +
                      std::to_string(grid.n_points));
  QuadratureResult out;
  out.value = simpson(samples, grid.step());
  // Richardson: compare against the half-resolution subgrid when that
  // subgrid is itself Simpson-compatible (n = 4j + 1).
  if ((grid.n_points - 1) % 4 == 0) {
    std::vector<double> coarse;
    coarse.reserve(static_cast<size_t>(grid.n_points / 2) + 1);
    for (int i = 0; i < grid.n_points; i += 2) coarse.push_back(samples[i]);
    const double s2h = simpson(coarse, 2.0 * grid.step());
    out.error_estimate = std::fabs(out.value - s2h) / 15.0;
  }
  return out;
}

double l2_distance(const KGrid& grid, std::span<const double> f,
                   std::span<const double> g) {
  if (f.size() != g.size())
    throw DomainError("l2_distance: sample lengths differ");
  std::vector<double> diff2(f.size());
  for (size_t i = 0; i < f.size(); ++i) {
    const double d = f[i] - g[i];
    diff2[i] = d * d;
  }
  return std::sqrt(integrate_density(grid, diff2).value);
}

}  // namespace larmor
