// SPDX-License-Identifier: Apache-2.0
//
// Transmit-side linear precoding against the time-domain channel H.

#pragma once

#include <string_view>

#include "afdm/linalg.hpp"
#include "afdm/waveform.hpp"

namespace afdm {

enum class PrecoderKind { None, ZF, MMSE };

/// Where P sits in the transmit chain. TimeDomain sends P A^H x, which is
/// the model the receiver assumes; DaftDomain sends A^H P x.
enum class PrecoderPlacement { TimeDomain, DaftDomain };

struct Precoder {
  PrecoderKind kind = PrecoderKind::None;
  CMatrix P;
  double sigma2_used = 0.0;
};

std::string_view to_string(PrecoderKind kind);

/// Identity precoder of size N.
Precoder no_precoder(int N);

/// P = H^H (H H^H)^{-1}. Throws SingularMatrixError when H H^H is singular
/// or too ill-conditioned to factor; there is no silent pseudo-inverse fallback.
Precoder build_zf(const CMatrix& H);

/// P = H^H (H H^H + sigma2 I)^{-1}.
Precoder build_mmse(const CMatrix& H, double sigma2);

CVector apply_precoder(const Precoder& pre, const ModMatrix& mod, const CVector& x,
                       PrecoderPlacement placement = PrecoderPlacement::TimeDomain);

/// Mean energy per transmitted sample for i.i.d. unit-energy symbols,
/// ||P A^H||_F^2 / N (or ||A^H P||_F^2 / N for DaftDomain placement).
double transmit_energy_per_sample(const Precoder& pre, const ModMatrix& mod,
                                  PrecoderPlacement placement = PrecoderPlacement::TimeDomain);

}  // namespace afdm
