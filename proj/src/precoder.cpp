// SPDX-License-Identifier: Apache-2.0

#include "afdm/precoder.hpp"

#include <stdexcept>

namespace afdm {

std::string_view to_string(PrecoderKind kind) {
  switch (kind) {
    case PrecoderKind::None: return "none";
    case PrecoderKind::ZF: return "zf";
    case PrecoderKind::MMSE: return "mmse";
  }
  return "?";
}

Precoder no_precoder(int N) { return {PrecoderKind::None, CMatrix::Identity(N, N), 0.0}; }

namespace {

// (H H^H + reg I)^{-1} is Hermitian, so P^H = (H H^H + reg I)^{-1} H.
CMatrix regularized_right_inverse(const CMatrix& H, double reg, std::string_view name) {
  if (H.rows() != H.cols()) throw DimensionError("precoder: H must be square");
  CMatrix gram = H * H.adjoint();
  gram.diagonal().array() += reg;
  return solve_hermitian_system(gram, H, name).adjoint();
}

}  // namespace

Precoder build_zf(const CMatrix& H) {
  return {PrecoderKind::ZF, regularized_right_inverse(H, 0.0, "H*H^H"), 0.0};
}

Precoder build_mmse(const CMatrix& H, double sigma2) {
  if (!(sigma2 >= 0.0)) throw std::invalid_argument("build_mmse: sigma2 must be >= 0");
  return {PrecoderKind::MMSE, regularized_right_inverse(H, sigma2, "H*H^H + sigma2*I"), sigma2};
}

CVector apply_precoder(const Precoder& pre, const ModMatrix& mod, const CVector& x, PrecoderPlacement placement) {
  if (x.size() != mod.size()) throw DimensionError("apply_precoder: symbol vector length mismatch");
  if (pre.kind == PrecoderKind::None) return modulate(mod, x);
  if (pre.P.rows() != mod.size() || pre.P.cols() != mod.size()) throw DimensionError("apply_precoder: P must be N x N");
  if (placement == PrecoderPlacement::DaftDomain) return mod.A_h() * (pre.P * x);
  return pre.P * modulate(mod, x);
}

double transmit_energy_per_sample(const Precoder& pre, const ModMatrix& mod, PrecoderPlacement placement) {
  const double n = static_cast<double>(mod.size());
  if (pre.kind == PrecoderKind::None) return mod.A_h().squaredNorm() / n;
  if (placement == PrecoderPlacement::DaftDomain) return (mod.A_h() * pre.P).squaredNorm() / n;
  return (pre.P * mod.A_h()).squaredNorm() / n;
}

}  // namespace afdm
