#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <tuple>

#include "larmor/errors.hpp"
#include "larmor/scattering.hpp"
#include "larmor/units.hpp"
#include "oracle/transfer_matrix.hpp"

using namespace larmor;
using cplx = std::complex<double>;

namespace {

struct RandomDraw {
  Beam beam;
  double B;
  double a;
};

// v in [1, 1e4] m/s, B in [1e-4, 5] T, a in [1e-6, 1e-2] m, log-uniform,
// conditioned on a propagating barrier channel.
RandomDraw propagating_draw(std::mt19937_64& rng, const ParticleSpec& particle) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (;;) {
    const double v = std::exp(u(rng) * std::log(1e4));
    const double B = std::exp(std::log(1e-4) + u(rng) * std::log(5.0 / 1e-4));
    const double a = std::exp(std::log(1e-6) + u(rng) * std::log(1e4));
    const Beam beam = beam_from_velocity(particle, v);
    if (beam.E > particle.moment_magnitude() * B) return {beam, B, a};
  }
}

}  // namespace

TEST_CASE("zero mismatch transmits exactly") {
  const double k = 3.7e8, a = 1.2e-4;
  CHECK(transmission_amplitude(k, k, a) == cplx(1.0, 0.0));
  CHECK(reflection_amplitude(k, k, a) == cplx(0.0, 0.0));
  const ComplexParts parts = transmission_re_im_closed_form(k, k, a);
  CHECK(parts.re == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::fabs(parts.im) < 1e-14);
}

TEST_CASE("transmission resonance at k_chan a = n pi") {
  const double k = 2.0e8;
  for (int n = 1; n <= 5; ++n) {
    const double k_chan = 1.4e8;
    const double a = n * std::numbers::pi / k_chan;
    const cplx t = transmission_amplitude(k, k_chan, a);
    const cplx r = reflection_amplitude(k, k_chan, a);
    CHECK(std::abs(t) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(r) < 1e-12);
    const ComplexParts parts = transmission_re_im_closed_form(k, k_chan, a);
    CHECK(parts.re * parts.re + parts.im * parts.im ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("rejects bad amplitude inputs") {
  CHECK_THROWS_AS(transmission_amplitude(0.0, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(transmission_amplitude(1.0, -1.0, 1.0), DomainError);
  CHECK_THROWS_AS(transmission_amplitude(1.0, 1.0, std::nan("")), DomainError);
  CHECK_THROWS_AS(reflection_amplitude(1.0, std::nan(""), 1.0), DomainError);
}

TEST_CASE("unitarity over the random propagating box") {
  const ParticleSpec n = neutron();
  std::mt19937_64 rng(1001);
  double worst = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const RandomDraw d = propagating_draw(rng, n);
    const FieldRegion field{d.B, d.a};
    for (ChannelKind which : {ChannelKind::Barrier, ChannelKind::Well}) {
      const ChannelAmplitudes amp = scatter_channel(d.beam, n, field, which);
      CHECK(std::abs(amp.t) <= 1.0 + 1e-12);
      CHECK(std::abs(amp.r) <= 1.0 + 1e-12);
      worst = std::max(worst,
                       std::fabs(std::norm(amp.t) + std::norm(amp.r) - 1.0));
    }
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("closed-form Re/Im match the complex evaluation") {
  const ParticleSpec n = neutron();
  std::mt19937_64 rng(1002);
  double worst = 0.0;
  int checked = 0;
  while (checked < 1000) {
    const RandomDraw d = propagating_draw(rng, n);
    const ChannelWavenumbers kn = channel_wavenumbers(d.beam, n, d.B);
    for (double kc : {kn.k_barrier, kn.k_well}) {
      const cplx t = transmission_amplitude(kn.k, kc, d.a);
      if (std::abs(t) <= 1e-6) continue;
      const ComplexParts parts = transmission_re_im_closed_form(kn.k, kc, d.a);
      worst = std::max(worst, std::hypot(parts.re - t.real(),
                                         parts.im - t.imag()) /
                                  std::abs(t));
      ++checked;
    }
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("stable and direct assemblies agree within the angle rounding") {
  // scatter_channel assembles arg(t) from the exact wavenumber split and so
  // avoids reducing k a mod 2 pi; the direct route forms the rounded double
  // products. They may differ by the representation error of those angles,
  // about (k a + k_c a) * eps, and no more.
  const ParticleSpec n = neutron();
  std::mt19937_64 rng(1004);
  for (int i = 0; i < 500; ++i) {
    const RandomDraw d = propagating_draw(rng, n);
    const FieldRegion field{d.B, d.a};
    const ChannelWavenumbers kn = channel_wavenumbers(d.beam, n, d.B);
    const ChannelAmplitudes stable =
        scatter_channel(d.beam, n, field, ChannelKind::Well);
    const cplx direct = transmission_amplitude(kn.k, kn.k_well, d.a);
    const double envelope =
        8.0 * 2.22e-16 * (kn.k * d.a + kn.k_well * d.a) + 1e-14;
    CHECK(std::abs(stable.t - direct) <= envelope);
  }
}

TEST_CASE("transfer-matrix oracle agrees with the amplitude operations") {
  const ParticleSpec n = neutron();
  std::mt19937_64 rng(1003);
  double worst = 0.0;
  for (int i = 0; i < 500; ++i) {
    const RandomDraw d = propagating_draw(rng, n);
    const ChannelWavenumbers kn = channel_wavenumbers(d.beam, n, d.B);
    for (double kc : {kn.k_barrier, kn.k_well}) {
      const oracle::Amplitudes ref = oracle::rectangular_region(kn.k, kc, d.a);
      const cplx t = transmission_amplitude(kn.k, kc, d.a);
      const cplx r = reflection_amplitude(kn.k, kc, d.a);
      worst = std::max(worst, std::abs(t - ref.t) /
                                  std::max(std::abs(ref.t), 1e-2));
      worst = std::max(worst, std::abs(r - ref.r) /
                                  std::max(std::abs(ref.r), 1e-2));
    }
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("reference point: v = 10 m/s, B = 2 T, a = 2.47e-5 m") {
  const ParticleSpec n = neutron();
  const Beam beam = beam_from_velocity(n, 10.0);
  const FieldRegion field{2.0, 2.47e-5};
  const ChannelAmplitudes barrier =
      scatter_channel(beam, n, field, ChannelKind::Barrier);
  const ChannelAmplitudes well =
      scatter_channel(beam, n, field, ChannelKind::Well);

  CHECK(std::norm(barrier.t) > 0.0);
  CHECK(std::norm(barrier.t) < 1.0);
  // oracle-computed fixtures; the well/barrier ordering depends on the
  // sin^2(k_c a) weights, so the values are pinned rather than an inequality
  // (at this width the barrier transmits more; at the calibrated default
  // width the ordering is reversed, see the precession fixtures)
  CHECK(std::norm(barrier.t) == doctest::Approx(0.993221721908).epsilon(1e-9));
  CHECK(std::norm(well.t) == doctest::Approx(0.992130168711).epsilon(1e-9));

  const ChannelWavenumbers kn = channel_wavenumbers(beam, n, field.B_tesla);
  const oracle::Amplitudes ref_b =
      oracle::rectangular_region(kn.k, kn.k_barrier, field.width);
  const oracle::Amplitudes ref_w =
      oracle::rectangular_region(kn.k, kn.k_well, field.width);
  CHECK(std::abs(barrier.t - ref_b.t) / std::abs(ref_b.t) < 1e-10);
  CHECK(std::abs(well.t - ref_w.t) / std::abs(ref_w.t) < 1e-10);
}

TEST_CASE("zero field scatters trivially in both channels") {
  const ParticleSpec n = neutron();
  const Beam beam = beam_from_velocity(n, 123.0);
  const FieldRegion field{0.0, 3.3e-4};
  for (ChannelKind which : {ChannelKind::Barrier, ChannelKind::Well}) {
    const ChannelAmplitudes amp = scatter_channel(beam, n, field, which);
    CHECK(amp.t == cplx(1.0, 0.0));
    CHECK(amp.r == cplx(0.0, 0.0));
    CHECK_FALSE(amp.evanescent);
  }
}

TEST_CASE("well channel propagates at any field") {
  const ParticleSpec n = neutron();
  const Beam beam = beam_from_velocity(n, 5.0);
  for (double B : {1.0, 10.0, 100.0}) {
    const FieldRegion field{B, 1e-4};
    const ChannelAmplitudes well =
        scatter_channel(beam, n, field, ChannelKind::Well);
    CHECK_FALSE(well.evanescent);
    CHECK(well.channel_k > beam.k);
    CHECK(std::norm(well.t) + std::norm(well.r) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("small-field continuity: modulus deficit shrinks as B^2") {
  const ParticleSpec n = neutron();
  const Beam beam = beam_from_velocity(n, 50.0);
  double prev_deficit = 1.0;
  double prev_refl = 1.0;
  for (double B : {1e-2, 1e-3, 1e-4, 1e-5}) {
    const FieldRegion field{B, 2.47e-5};
    const ChannelAmplitudes amp =
        scatter_channel(beam, n, field, ChannelKind::Barrier);
    const double deficit = std::fabs(std::abs(amp.t) - 1.0);
    const double refl = std::abs(amp.r);
    CHECK(deficit < prev_deficit);
    CHECK(refl < prev_refl);
    // B down 10x => |,|t|-1| down ~100x; allow generous slack
    if (prev_deficit < 1.0) CHECK(deficit < prev_deficit / 20.0);
    prev_deficit = deficit;
    prev_refl = refl;
  }
}

TEST_CASE("evanescent channel: default errors, opt-in continues") {
  const ParticleSpec n = neutron();
  const Beam beam = beam_from_velocity(n, 4.0);  // E = 1.34e-26 J
  const FieldRegion field{2.0, 1e-5};            // muB = 1.93e-26 J > E
  CHECK_THROWS_AS(scatter_channel(beam, n, field, ChannelKind::Barrier),
                  EvanescentError);

  const ChannelAmplitudes amp =
      scatter_channel(beam, n, field, ChannelKind::Barrier,
                      EvanescentPolicy::AnalyticContinuation);
  CHECK(amp.evanescent);
  CHECK(amp.kappa > 0.0);
  CHECK(std::abs(amp.t) > 0.0);
  CHECK(std::abs(amp.t) < 1.0);
  // real potential: flux is still conserved through the tunneling region
  CHECK(std::norm(amp.t) + std::norm(amp.r) ==
        doctest::Approx(1.0).epsilon(1e-12));
  // matches the oracle run with an imaginary interior wavenumber
  const oracle::Amplitudes ref =
      oracle::rectangular_region(beam.k, cplx(0.0, amp.kappa), field.width);
  CHECK(std::abs(amp.t - ref.t) < 1e-12);
  CHECK(std::abs(amp.r - ref.r) < 1e-12);

  // the well channel still works under the same policy
  const ChannelAmplitudes well =
      scatter_channel(beam, n, field, ChannelKind::Well,
                      EvanescentPolicy::AnalyticContinuation);
  CHECK_FALSE(well.evanescent);
}

TEST_CASE("evanescent limit is two-sided continuous in |t|^2") {
  const ParticleSpec n = neutron();
  const double B = 2.0;
  const double a = 1e-5;
  // crossover velocity where E = muB
  const double v_star = std::sqrt(2.0 * n.moment_magnitude() * B / n.mass);
  const double eps = 1e-8;
  const Beam above = beam_from_velocity(n, v_star * (1.0 + eps));
  const Beam below = beam_from_velocity(n, v_star * (1.0 - eps));
  const FieldRegion field{B, a};
  const ChannelAmplitudes amp_above =
      scatter_channel(above, n, field, ChannelKind::Barrier);
  const ChannelAmplitudes amp_below =
      scatter_channel(below, n, field, ChannelKind::Barrier,
                      EvanescentPolicy::AnalyticContinuation);
  CHECK(std::fabs(std::norm(amp_above.t) - std::norm(amp_below.t)) < 1e-6);
}

TEST_CASE("threshold E = muB continues through the finite limit") {
  // kappa = 0 is a removable 0/0 of the raw continuation formula
  const double k = 1.6e8, a = 2.47e-5;
  const ChannelAmplitudes amp = detail::evanescent_amplitudes(k, 0.0, a);
  CHECK(std::isfinite(amp.t.real()));
  CHECK(std::isfinite(amp.t.imag()));
  CHECK(std::norm(amp.t) + std::norm(amp.r) ==
        doctest::Approx(1.0).epsilon(1e-12));
  const double ka_half = 0.5 * k * a;
  CHECK(std::norm(amp.t) ==
        doctest::Approx(1.0 / (1.0 + ka_half * ka_half)).epsilon(1e-12));
  // one ulp above threshold lands next to the limit
  const ChannelAmplitudes near = detail::evanescent_amplitudes(k, 1e-2, a);
  CHECK(std::abs(near.t - amp.t) < 1e-6);
}

TEST_CASE("deep tunneling suppresses transmission") {
  const ParticleSpec n = neutron();
  const Beam beam = beam_from_velocity(n, 1.0);
  const FieldRegion field{5.0, 1e-3};
  const ChannelAmplitudes amp =
      scatter_channel(beam, n, field, ChannelKind::Barrier,
                      EvanescentPolicy::AnalyticContinuation);
  CHECK(std::abs(amp.t) < 1e-30);
  CHECK(std::abs(amp.r) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("field validation") {
  CHECK_THROWS_AS(validate(FieldRegion{-1.0, 1e-5}), DomainError);
  CHECK_THROWS_AS(validate(FieldRegion{1.0, 0.0}), DomainError);
  CHECK_NOTHROW(validate(FieldRegion{0.0, 1e-5}));
}
