// SPDX-License-Identifier: Apache-2.0

#include "afdm/waveform.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace afdm {

void ModulationParams::validate() const {
  if (N < 2) throw std::invalid_argument("ModulationParams: N must be >= 2, got " + std::to_string(N));
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("ModulationParams: alpha must lie in (0, 1], got " + std::to_string(alpha));
  if (cpp_len < 0 || cpp_len >= N)
    throw std::invalid_argument("ModulationParams: cpp_len must lie in [0, N), got " + std::to_string(cpp_len));
  if (!std::isfinite(c1) || !std::isfinite(c2)) throw std::invalid_argument("ModulationParams: non-finite chirp rate");
}

double default_c1(int N, double nu_max) { return (2.0 * std::ceil(std::abs(nu_max)) + 1.0) / (2.0 * N); }

double default_c2(int N) { return 1.0 / (2.0 * N * std::numbers::pi); }

ModMatrix::ModMatrix(ModulationParams params, CMatrix a)
    : params_(params), a_(std::move(a)), a_h_(a_.adjoint()) {
  if (a_.rows() != params_.N || a_.cols() != params_.N) throw DimensionError("ModMatrix: A must be N x N");
}

cplx unit_phasor(double c, double t) {
  const double turns = std::fmod(c * t, 1.0);
  return std::polar(1.0, -2.0 * std::numbers::pi * turns);
}

CMatrix build_chirp_matrix(int N, double c) {
  if (N < 2) throw std::invalid_argument("build_chirp_matrix: N must be >= 2");
  CMatrix lam = CMatrix::Zero(N, N);
  for (int n = 0; n < N; ++n) lam(n, n) = unit_phasor(c, static_cast<double>(n) * n);
  return lam;
}

CMatrix build_fractional_dft(int N, double alpha) {
  if (N < 2) throw std::invalid_argument("build_fractional_dft: N must be >= 2");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("build_fractional_dft: alpha must lie in (0, 1]");
  const double scale = 1.0 / std::sqrt(static_cast<double>(N));
  CMatrix f(N, N);
  for (int m = 0; m < N; ++m)
    for (int n = 0; n < N; ++n) f(m, n) = scale * unit_phasor(alpha / N, static_cast<double>(m) * n);
  return f;
}

ModMatrix build_mod_matrix(const ModulationParams& params) {
  params.validate();
  const int N = params.N;
  CMatrix a = build_fractional_dft(N, params.alpha);
  // Diagonal scalings applied in place: rows by L(c2), columns by L(c1).
  for (int m = 0; m < N; ++m) a.row(m) *= unit_phasor(params.c2, static_cast<double>(m) * m);
  for (int n = 0; n < N; ++n) a.col(n) *= unit_phasor(params.c1, static_cast<double>(n) * n);
  return ModMatrix(params, std::move(a));
}

CVector modulate(const ModMatrix& mod, const CVector& x) {
  if (x.size() != mod.size())
    throw DimensionError("modulate: expected " + std::to_string(mod.size()) + " symbols, got " + std::to_string(x.size()));
  return mod.A_h() * x;
}

CVector demodulate(const ModMatrix& mod, const CVector& r) {
  if (r.size() != mod.size())
    throw DimensionError("demodulate: expected " + std::to_string(mod.size()) + " samples, got " + std::to_string(r.size()));
  return mod.A() * r;
}

CVector add_cpp(const ModulationParams& params, const CVector& s) {
  const int N = params.N;
  const int L = params.cpp_len;
  if (s.size() != N) throw DimensionError("add_cpp: expected " + std::to_string(N) + " samples");
  CVector out(N + L);
  for (int n = -L; n < 0; ++n) {
    const double t = static_cast<double>(N) * N + 2.0 * N * n;
    out(n + L) = s(N + n) * unit_phasor(params.c1, t);
  }
  out.tail(N) = s;
  return out;
}

CVector remove_cpp(const ModulationParams& params, const CVector& s_cpp) {
  if (s_cpp.size() != params.N + params.cpp_len)
    throw DimensionError("remove_cpp: expected " + std::to_string(params.N + params.cpp_len) + " samples, got " +
                         std::to_string(s_cpp.size()));
  return s_cpp.tail(params.N);
}

CVector build_sefdm_reference(int N, double alpha, int rho, const CVector& s) {
  if (rho < 1) throw std::invalid_argument("build_sefdm_reference: rho must be >= 1");
  if (s.size() != N) throw DimensionError("build_sefdm_reference: expected " + std::to_string(N) + " symbols");
  const int Q = rho * N;
  const double scale = 1.0 / std::sqrt(static_cast<double>(Q));
  CVector out = CVector::Zero(Q);
  for (int k = 0; k < Q; ++k) {
    cplx acc{0.0, 0.0};
    // unit_phasor carries a negative exponent; -alpha/Q flips it.
    for (int n = 0; n < N; ++n) acc += s(n) * unit_phasor(-alpha / Q, static_cast<double>(k) * n);
    out(k) = scale * acc;
  }
  return out;
}

CMatrix correlation_matrix(const ModMatrix& mod) { return mod.A() * mod.A_h(); }

}  // namespace afdm
