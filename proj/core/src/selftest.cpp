#include "larmor/selftest.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include "larmor/precession.hpp"
#include "larmor/scattering.hpp"
#include "larmor/units.hpp"
#include "larmor/wavepacket.hpp"

namespace larmor {

namespace {

struct Draw {
  Beam beam;
  double B;
  double a;
};

// Log-uniform v in [1, 1e4] m/s, B in [1e-4, 5] T, a in [1e-6, 1e-2] m,
// resampled until the barrier channel propagates.
Draw propagating_draw(std::mt19937_64& rng, const ParticleSpec& particle) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (;;) {
    const double v = std::exp(std::log(1.0) + u(rng) * std::log(1e4));
    const double B = std::exp(std::log(1e-4) + u(rng) * std::log(5.0 / 1e-4));
    const double a = std::exp(std::log(1e-6) + u(rng) * std::log(1e4));
    const Beam beam = beam_from_velocity(particle, v);
    if (beam.E > particle.moment_magnitude() * B) return {beam, B, a};
  }
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

}  // namespace

std::vector<SelftestCheck> run_selftest(std::uint64_t seed) {
  std::vector<SelftestCheck> report;
  const ParticleSpec particle = neutron();
  std::mt19937_64 rng(seed);

  {  // unitarity |t|^2 + |r|^2 = 1 on propagating channels
    double worst = 0.0;
    for (int i = 0; i < 2000; ++i) {
      const Draw d = propagating_draw(rng, particle);
      const FieldRegion field{d.B, d.a};
      for (ChannelKind which : {ChannelKind::Barrier, ChannelKind::Well}) {
        const ChannelAmplitudes amp =
            scatter_channel(d.beam, particle, field, which);
        worst = std::max(worst,
                         std::fabs(std::norm(amp.t) + std::norm(amp.r) - 1.0));
      }
    }
    report.push_back({"unitarity", worst < 1e-12,
                      "max ||t|^2+|r|^2 - 1| = " + fmt(worst)});
  }

  {  // closed-form Re/Im vs complex evaluation
    double worst = 0.0;
    for (int i = 0; i < 2000; ++i) {
      const Draw d = propagating_draw(rng, particle);
      const ChannelWavenumbers kn =
          channel_wavenumbers(d.beam, particle, d.B);
      for (double kc : {kn.k_barrier, kn.k_well}) {
        const std::complex<double> t = transmission_amplitude(kn.k, kc, d.a);
        if (std::abs(t) <= 1e-6) continue;
        const ComplexParts parts =
            transmission_re_im_closed_form(kn.k, kc, d.a);
        const double err = std::hypot(parts.re - t.real(), parts.im - t.imag()) /
                           std::abs(t);
        worst = std::max(worst, err);
      }
    }
    report.push_back({"closed-form equivalence", worst < 1e-10,
                      "max rel deviation = " + fmt(worst)});
  }

  {  // high-energy limit recovery at the default width
    const FieldRegion field{2.0, default_rotator_width};
    double prev_phase = 0.0, prev_mod = 0.0;
    bool ok = true;
    std::string detail;
    for (int decade = 0; decade < 3; ++decade) {
      const double v = 200.0 * std::pow(10.0, decade);
      const Beam beam = beam_from_velocity(particle, v);
      const ChannelWavenumbers kn = channel_wavenumbers(beam, particle, 2.0);
      const TransmittedSpinor spinor = modified_spinor(particle, field, beam);
      const LimitPhases limit = high_energy_limit_phases(kn, field.width);
      const double phase_err =
          std::max(std::fabs(wrap_phase(spinor.phase_up - limit.phi_up)),
                   std::fabs(wrap_phase(spinor.phase_down - limit.phi_down)));
      const double mod_err = std::max(std::fabs(spinor.amp_up - 1.0),
                                      std::fabs(spinor.amp_down - 1.0));
      if (decade > 0 &&
          (phase_err > 0.1 * prev_phase || mod_err > 0.1 * prev_mod))
        ok = false;
      detail += (decade ? " " : "") + std::string("v=") + fmt(v) + ":" +
                fmt(phase_err) + "/" + fmt(mod_err);
      prev_phase = phase_err;
      prev_mod = mod_err;
    }
    report.push_back({"limit recovery", ok, detail});
  }

  {  // quadrature: packet norm and Simpson order
    const Beam beam = beam_from_velocity(particle, 10.0);
    const GaussianPacket packet = packet_from_relative_width(beam.k, 0.05);
    const KGrid grid = default_grid(packet);
    std::vector<double> g2(static_cast<size_t>(grid.n_points));
    for (int i = 0; i < grid.n_points; ++i)
      g2[static_cast<size_t>(i)] = spectral_density(packet, grid.at(i));
    const double norm = integrate_density(grid, g2).value;

    auto expo = [](const KGrid& g) {
      std::vector<double> f(static_cast<size_t>(g.n_points));
      for (int i = 0; i < g.n_points; ++i)
        f[static_cast<size_t>(i)] = std::exp(g.at(i));
      return f;
    };
    const double exact = std::exp(2.0) - std::exp(1.0);
    const KGrid coarse{1.0, 2.0, 9};
    const KGrid fine{1.0, 2.0, 17};
    const double err_coarse =
        std::fabs(integrate_density(coarse, expo(coarse)).value - exact);
    const double err_fine =
        std::fabs(integrate_density(fine, expo(fine)).value - exact);
    const bool ok =
        std::fabs(norm - 1.0) < 1e-6 && err_coarse >= 8.0 * err_fine;
    report.push_back({"quadrature", ok,
                      "packet norm deviation = " + fmt(norm - 1.0) +
                          ", Simpson halving gain = " +
                          fmt(err_coarse / err_fine)});
  }

  return report;
}

}  // namespace larmor
