#pragma once

#include <complex>

#include "larmor/constants.hpp"
#include "larmor/units.hpp"

// Exact complex transmission and reflection amplitudes of a plane wave on a
// rectangular well or barrier of width a. Amplitudes are reported with the
// incident normalization A = 1 and the free plane-wave factor e^{+-ikx}
// stripped, i.e. t is the coefficient of e^{ikx} for x > a and r the
// coefficient of e^{-ikx} for x < 0:
//
//   t = 4 k k_c e^{-ika} e^{i k_c a} / [(k+k_c)^2 - (k-k_c)^2 e^{2 i k_c a}]
//   r = (k^2 - k_c^2)(1 - e^{2 i k_c a}) / [(k+k_c)^2 - (k-k_c)^2 e^{2 i k_c a}]
//
// The implementation evaluates the factored complex denominator (never the
// expanded quartic) and assembles arg(t) as (k_c - k) a - arg(denominator),
// so phases stay accurate even when k a wraps through millions of radians.

namespace larmor {

struct FieldRegion {
  double B_tesla = 0.0;  // >= 0
  double width = 0.0;    // m, > 0 (written a in the amplitude formulas)
};

void validate(const FieldRegion& field);

// Barrier: spin-down channel, potential +muB, interior wavenumber k1.
// Well:    spin-up channel,   potential -muB, interior wavenumber k2.
enum class ChannelKind { Barrier, Well };

enum class EvanescentPolicy {
  Error,                 // throw EvanescentError when E <= muB (default)
  AnalyticContinuation,  // continue with k1 = i kappa (tunneling amplitudes)
};

struct ChannelAmplitudes {
  std::complex<double> t;
  std::complex<double> r;
  double channel_k = 0.0;  // interior wavenumber when propagating, else 0
  double kappa = 0.0;      // interior decay constant when evanescent, else 0
  bool evanescent = false;
};

// Free-standing amplitude evaluators for a propagating interior channel.
std::complex<double> transmission_amplitude(double k, double k_chan, double a);
std::complex<double> reflection_amplitude(double k, double k_chan, double a);

// The explicit algebraic Re/Im forms with the expanded quartic denominator
//   D = (k+k_c)^4 + (k-k_c)^4 - 2 (k+k_c)^2 (k-k_c)^2 cos(2 k_c a),
// kept verbatim as an internal cross-check of the complex evaluation.
struct ComplexParts {
  double re = 0.0;
  double im = 0.0;
};
ComplexParts transmission_re_im_closed_form(double k, double k_chan, double a);

// Full channel solve: wires channel_wavenumbers into the amplitude evaluator
// for the requested channel. Propagates EvanescentError unless the caller
// opts into analytic continuation.
ChannelAmplitudes scatter_channel(const Beam& beam, const ParticleSpec& particle,
                                  const FieldRegion& field, ChannelKind which,
                                  EvanescentPolicy policy = EvanescentPolicy::Error,
                                  const Constants& c = {});

namespace detail {
// Plain evaluation from the rounded products k a, k_c a (the route compared
// against the closed forms and external references).
ChannelAmplitudes direct_amplitudes(double k, double k_chan, double a);
// Propagating-channel core with a caller-supplied exact dk = k_chan - k;
// keeps phases and moduli accurate at large k a (used by scatter_channel).
ChannelAmplitudes propagating_amplitudes(double k, double k_chan, double dk,
                                         double a);
// Evanescent interior, k_chan = i kappa.
ChannelAmplitudes evanescent_amplitudes(double k, double kappa, double a);
}  // namespace detail

}  // namespace larmor
