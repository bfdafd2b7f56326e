#pragma once

// Independent transfer-matrix reference for the rectangular-region scattering
// problem. Deliberately kept separate from the library implementation: the
// four matching conditions at x = 0 and x = a are assembled as a dense
// complex 4x4 system and solved by Gaussian elimination, so no factored or
// closed-form expression is shared with the production path.
//
// Incident wave e^{ikx} from the left, interior wavenumber k_c (complex to
// cover evanescent interiors, k_c = i*kappa), exterior k on both sides.
// Unknowns: r (reflected), C, D (interior right/left movers), t (transmitted
// coefficient of e^{ikx} for x > a).

#include <array>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <stdexcept>

namespace oracle {

using cplx = std::complex<double>;

struct Amplitudes {
  cplx t;
  cplx r;
};

namespace detail {

// Solves M x = rhs (4x4, complex) with partial pivoting.
inline std::array<cplx, 4> solve4(std::array<std::array<cplx, 4>, 4> M,
                                  std::array<cplx, 4> rhs) {
  for (int col = 0; col < 4; ++col) {
    int pivot = col;
    for (int row = col + 1; row < 4; ++row)
      if (std::abs(M[row][col]) > std::abs(M[pivot][col])) pivot = row;
    if (std::abs(M[pivot][col]) == 0.0)
      throw std::runtime_error("transfer-matrix system is singular");
    std::swap(M[col], M[pivot]);
    std::swap(rhs[col], rhs[pivot]);
    for (int row = col + 1; row < 4; ++row) {
      const cplx f = M[row][col] / M[col][col];
      for (int j = col; j < 4; ++j) M[row][j] -= f * M[col][j];
      rhs[row] -= f * rhs[col];
    }
  }
  std::array<cplx, 4> x{};
  for (int row = 3; row >= 0; --row) {
    cplx acc = rhs[row];
    for (int j = row + 1; j < 4; ++j) acc -= M[row][j] * x[j];
    x[row] = acc / M[row][row];
  }
  return x;
}

}  // namespace detail

// Transmission/reflection amplitudes for a region [0, a] of interior
// wavenumber k_c embedded in a medium of wavenumber k.
inline Amplitudes rectangular_region(double k, cplx k_c, double a) {
  const cplx I(0.0, 1.0);
  const cplx ep = std::exp(I * k_c * a);    // e^{+i k_c a}
  const cplx em = std::exp(-I * k_c * a);   // e^{-i k_c a}
  const cplx ek = std::exp(I * k * a);      // e^{+i k a}

  // unknown vector: [r, C, D, t]
  std::array<std::array<cplx, 4>, 4> M{};
  std::array<cplx, 4> rhs{};
  // psi continuous at 0:        1 + r = C + D
  M[0] = {cplx(1), cplx(-1), cplx(-1), cplx(0)};
  rhs[0] = cplx(-1);
  // psi' continuous at 0:       ik(1 - r) = i k_c (C - D)
  M[1] = {cplx(k), k_c, -k_c, cplx(0)};
  rhs[1] = cplx(k);
  // psi continuous at a:        C ep + D em = t ek
  M[2] = {cplx(0), ep, em, -ek};
  rhs[2] = cplx(0);
  // psi' continuous at a:       k_c (C ep - D em) = k t ek
  M[3] = {cplx(0), k_c * ep, -k_c * em, -cplx(k) * ek};
  rhs[3] = cplx(0);

  const auto x = detail::solve4(M, rhs);
  return Amplitudes{x[3], x[0]};
}

inline Amplitudes rectangular_region(double k, double k_c, double a) {
  return rectangular_region(k, cplx(k_c, 0.0), a);
}

}  // namespace oracle
