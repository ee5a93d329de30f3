// SPDX-License-Identifier: Apache-2.0
//
// Compressed discrete affine Fourier transform (DAFT) modulation.
//
// The modulation matrix is A = L(c2) * F_alpha * L(c1) with
//   L(c)          = diag(exp(-i 2 pi c n^2))
//   F_alpha(m, n) = exp(-i 2 pi alpha m n / N) / sqrt(N)
// so that A(m, n) = exp(-i 2 pi (c1 n^2 + c2 m^2 + alpha m n / N)) / sqrt(N).
// The transmitter sends A^H x and the receiver projects with A. alpha = 1
// gives ordinary (orthogonal) AFDM; alpha = 1 with c1 = c2 = 0 gives OFDM.

#pragma once

#include <cstddef>

#include "afdm/linalg.hpp"

namespace afdm {

struct ModulationParams {
  int N = 32;
  double alpha = 1.0;
  double c1 = 0.0;
  double c2 = 0.0;
  int cpp_len = 0;

  /// Throws std::invalid_argument unless N >= 2, 0 < alpha <= 1 and
  /// 0 <= cpp_len < N.
  void validate() const;

  friend bool operator==(const ModulationParams&, const ModulationParams&) = default;
};

/// c1 = (2 ceil(nu_max) + 1) / (2N): chirp rate that separates every
/// delay-Doppler path for a maximum normalized Doppler nu_max.
double default_c1(int N, double nu_max);
/// c2 = 1 / (2 N pi).
double default_c2(int N);

/// Immutable (A, A^H) pair for one parameter set.
class ModMatrix {
 public:
  ModMatrix(ModulationParams params, CMatrix a);

  const ModulationParams& params() const noexcept { return params_; }
  int size() const noexcept { return params_.N; }
  const CMatrix& A() const noexcept { return a_; }
  const CMatrix& A_h() const noexcept { return a_h_; }

 private:
  ModulationParams params_;
  CMatrix a_;
  CMatrix a_h_;
};

/// exp(-i 2 pi c t) with t reduced modulo 1 before scaling, so that large
/// chirp arguments keep full phase accuracy.
cplx unit_phasor(double c, double t);

CMatrix build_chirp_matrix(int N, double c);
CMatrix build_fractional_dft(int N, double alpha);
ModMatrix build_mod_matrix(const ModulationParams& params);

/// s = A^H x.
CVector modulate(const ModMatrix& mod, const CVector& x);
/// y = A r.
CVector demodulate(const ModMatrix& mod, const CVector& r);

/// Prepends the chirp-periodic prefix:
///   s[n] = s[N + n] exp(-i 2 pi c1 (N^2 + 2 N n)),  n = -L, ..., -1.
CVector add_cpp(const ModulationParams& params, const CVector& s);
/// Drops the first cpp_len samples.
CVector remove_cpp(const ModulationParams& params, const CVector& s_cpp);

/// Oversampled SEFDM symbol, Q = rho N samples:
///   X[k] = Q^{-1/2} sum_n s_n exp(i 2 pi alpha k n / Q).
/// Used as an independent reference for the critically sampled waveform.
CVector build_sefdm_reference(int N, double alpha, int rho, const CVector& s);

/// A A^H. Diagonal is one; off-diagonals are the inter-carrier
/// leakage introduced by alpha < 1.
CMatrix correlation_matrix(const ModMatrix& mod);

}  // namespace afdm
