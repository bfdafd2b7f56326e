#include "larmor/scattering.hpp"

#include <cassert>
#include <cmath>
#include <cstdio>
#include <string>

#include "larmor/errors.hpp"

namespace larmor {

namespace {

void require_finite_positive(double x, const char* name) {
  if (!std::isfinite(x) || x <= 0.0) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s must be positive and finite (got %.6g)",
                  name, x);
    throw DomainError(buf);
  }
}

}  // namespace

void validate(const FieldRegion& field) {
  if (!std::isfinite(field.B_tesla) || field.B_tesla < 0.0) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "B must be non-negative and finite (got %.6g)",
                  field.B_tesla);
    throw DomainError(buf);
  }
  require_finite_positive(field.width, "width");
}

namespace detail {

// Plain evaluation of the textbook fractions, forming e^{ika}, e^{i k_c a}
// and e^{2 i k_c a} from the rounded double products. This is the route the
// closed-form expressions and the transfer-matrix oracle are compared
// against: all three reduce the large angles k a, k_c a identically, so they
// agree to machine precision even when k a wraps through 1e9 radians.
ChannelAmplitudes direct_amplitudes(double k, double k_chan, double a) {
  ChannelAmplitudes out;
  out.channel_k = k_chan;
  if (k_chan == k) {  // zero mismatch: free propagation of the stripped wave
    out.t = 1.0;
    out.r = 0.0;
    return out;
  }
  const std::complex<double> phase =
      std::polar(1.0, -(k * a)) * std::polar(1.0, k_chan * a);
  const std::complex<double> e2 = std::polar(1.0, 2.0 * k_chan * a);
  const double sum = k + k_chan;
  const double dif = k - k_chan;
  const std::complex<double> D = sum * sum - dif * dif * e2;
  out.t = 4.0 * k * k_chan * phase / D;
  out.r = (k * k - k_chan * k_chan) * (1.0 - e2) / D;
  return out;
}

ChannelAmplitudes propagating_amplitudes(double k, double k_chan, double dk,
                                         double a) {
  // Denominator in factored complex form:
  //   D = (k + k_c)^2 - (k - k_c)^2 e^{2 i k_c a}
  // The expanded quartic |D|^2 cancels catastrophically at small mismatch;
  // here the mismatch enters only through dk.
  const double sum = k + k_chan;
  const double Q = dk * dk;  // (k - k_c)^2
  const double s1 = std::sin(k_chan * a);
  const double s2 = std::sin(2.0 * k_chan * a);
  // Re D = (k+k_c)^2 - (k-k_c)^2 cos(2 k_c a) rearranged through
  // 1 - cos(2x) = 2 sin^2(x) so nothing cancels at small mismatch or near
  // resonance; Re D >= 4 k k_c > 0, so D never vanishes.
  const double reD = 4.0 * k * k_chan + 2.0 * Q * s1 * s1;
  const double imD = -Q * s2;
  assert(reD > 0.0);

  // |t|^2 = 1 / (1 + g^2) with g = (k^2 - k_c^2) sin(k_c a) / (2 k k_c):
  // exact rearrangement of (4 k k_c)^2 / |D|^2, accurate to an ulp near 1.
  const double g = (sum * dk * s1) / (2.0 * k * k_chan);
  const double modulus = 1.0 / std::sqrt(1.0 + g * g);
  // arg(t) = (k_c - k) a - arg(D): no large-angle wrap enters the signal path.
  const double phase = dk * a - std::atan2(imD, reD);

  ChannelAmplitudes out;
  out.t = std::polar(modulus, phase);
  const std::complex<double> D(reD, imD);
  const double ksq_diff = -sum * dk;  // k^2 - k_c^2
  out.r = std::complex<double>(ksq_diff * (2.0 * s1 * s1), -ksq_diff * s2) / D;
  out.channel_k = k_chan;
  return out;
}

ChannelAmplitudes evanescent_amplitudes(double k, double kappa, double a) {
  ChannelAmplitudes out;
  out.kappa = kappa;
  out.evanescent = true;
  if (kappa == 0.0) {
    // E = muB exactly: the raw fraction is 0/0 there, but both the
    // propagating and evanescent branches share the finite limit
    //   t -> e^{-ika} / (1 - i k a / 2),  r -> (-i k a / 2) / (1 - i k a / 2)
    const std::complex<double> denom(1.0, -0.5 * k * a);
    out.t = std::polar(1.0, -(k * a)) / denom;
    out.r = std::complex<double>(0.0, -0.5 * k * a) / denom;
    return out;
  }
  // Analytic continuation k_c = i kappa; e^{i k_c a} = e^{-kappa a} decays,
  // so nothing overflows.
  const std::complex<double> kc(0.0, kappa);
  const double decay = std::exp(-kappa * a);
  const double decay2 = decay * decay;  // e^{2 i k_c a}
  const std::complex<double> D =
      (k + kc) * (k + kc) - (k - kc) * (k - kc) * decay2;
  out.t = 4.0 * k * kc * std::polar(1.0, -(k * a)) * decay / D;
  out.r = (k * k - kc * kc) * (1.0 - decay2) / D;
  return out;
}

}  // namespace detail

std::complex<double> transmission_amplitude(double k, double k_chan, double a) {
  require_finite_positive(k, "k");
  require_finite_positive(k_chan, "k_chan");
  require_finite_positive(a, "a");
  return detail::direct_amplitudes(k, k_chan, a).t;
}

std::complex<double> reflection_amplitude(double k, double k_chan, double a) {
  require_finite_positive(k, "k");
  require_finite_positive(k_chan, "k_chan");
  require_finite_positive(a, "a");
  return detail::direct_amplitudes(k, k_chan, a).r;
}

ComplexParts transmission_re_im_closed_form(double k, double k_chan, double a) {
  require_finite_positive(k, "k");
  require_finite_positive(k_chan, "k_chan");
  require_finite_positive(a, "a");
  const double sum = k + k_chan;
  const double dif = k - k_chan;
  const double D = sum * sum * sum * sum + dif * dif * dif * dif -
                   2.0 * sum * sum * dif * dif * std::cos(2.0 * k_chan * a);
  const double ska = std::sin(k * a), cka = std::cos(k * a);
  const double sca = std::sin(k_chan * a), cca = std::cos(k_chan * a);
  const double cross = 8.0 * k * k_chan * (k * k + k_chan * k_chan);
  const double square = 16.0 * k * k * k_chan * k_chan;
  ComplexParts out;
  out.re = (cross * ska * sca + square * cka * cca) / D;
  out.im = (cross * cka * sca - square * ska * cca) / D;
  return out;
}

ChannelAmplitudes scatter_channel(const Beam& beam, const ParticleSpec& particle,
                                  const FieldRegion& field, ChannelKind which,
                                  EvanescentPolicy policy, const Constants& c) {
  validate(field);
  try {
    const ChannelWavenumbers kn =
        channel_wavenumbers(beam, particle, field.B_tesla, c);
    if (which == ChannelKind::Well)
      return detail::propagating_amplitudes(kn.k, kn.k_well, kn.dk_well,
                                            field.width);
    return detail::propagating_amplitudes(kn.k, kn.k_barrier, kn.dk_barrier,
                                          field.width);
  } catch (const EvanescentError& err) {
    if (which == ChannelKind::Barrier &&
        policy == EvanescentPolicy::AnalyticContinuation)
      return detail::evanescent_amplitudes(beam.k, err.kappa, field.width);
    if (which == ChannelKind::Well) {
      // The well channel propagates for every B >= 0; only the barrier
      // wavenumber is undefined here.
      const double muB = particle.moment_magnitude() * field.B_tesla;
      const double k2 =
          std::sqrt(2.0 * particle.mass * (beam.E + muB)) / c.hbar;
      const double q = 2.0 * particle.mass * muB / (c.hbar * c.hbar);
      return detail::propagating_amplitudes(beam.k, k2, q / (k2 + beam.k),
                                            field.width);
    }
    throw;
  }
}

}  // namespace larmor
