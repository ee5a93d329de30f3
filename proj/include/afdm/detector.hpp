// SPDX-License-Identifier: Apache-2.0
//
// Receiver chain: MMSE equalization against the time-domain channel,
// projection into the compressed DAFT domain, and iterative cancellation of
// the inter-carrier interference that alpha < 1 leaves behind.

#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "afdm/linalg.hpp"
#include "afdm/waveform.hpp"

namespace afdm {

using Bits = std::vector<std::uint8_t>;

enum class ConstellationKind { QAM4, QAM16 };

/// Square Gray-coded QAM with unit average energy. Symbols live on the odd
/// integer grid {±1} or {±1, ±3} scaled by `scale`.
class Constellation {
 public:
  explicit Constellation(ConstellationKind kind);

  /// "qpsk", "4qam", "16qam". Anything else throws std::invalid_argument.
  static Constellation from_name(std::string_view name);

  ConstellationKind kind() const noexcept { return kind_; }
  int bits_per_symbol() const noexcept { return bits_per_symbol_; }
  int levels_per_axis() const noexcept { return levels_; }
  /// Grid-to-normalized factor: 1/sqrt(2) for 4QAM, 1/sqrt(10) for 16QAM.
  double scale() const noexcept { return scale_; }
  /// points()[label] is the symbol for the integer bit label (MSB first).
  const std::vector<cplx>& points() const noexcept { return points_; }
  std::string_view name() const noexcept;

  /// Grid level for a Gray-coded axis label and the inverse lookup.
  int axis_level(unsigned axis_label) const;
  unsigned axis_label(int level) const;
  /// Nearest grid level on one axis.
  int slice_axis(double grid_value) const;

 private:
  ConstellationKind kind_;
  int bits_per_symbol_;
  int levels_;
  double scale_;
  std::vector<cplx> points_;
};

enum class DetectionMode { MMSEOnly, Iterative, MLOracle };

struct DetectorConfig {
  DetectionMode mode = DetectionMode::Iterative;
  int n_iter = 20;
  double r1 = 0.5;  // QPSK clipping threshold, grid units
  double T1 = 2.0;  // 16-QAM outer threshold, grid units
  double T2 = 0.5;  // 16-QAM inner threshold, grid units

  void validate() const;
};

struct DetectionResult {
  CVector symbols;
  Bits hard_bits;
  int iterations_run = 0;
  /// ||I(k) - I(k-1)|| for k = 1..n_iter, with I(0) = 0.
  std::vector<double> residual_interference_norm;
};

Bits bits_from_string(std::string_view s);

/// Throws std::invalid_argument if bits.size() is not a multiple of
/// bits_per_symbol or a bit is not 0/1.
CVector map_bits(std::span<const std::uint8_t> bits, const Constellation& constellation);

/// Nearest-point slicing and Gray delabeling.
Bits demap_symbols(const CVector& symbols, const Constellation& constellation);

/// Nearest constellation points (normalized scale).
CVector hard_decide(const CVector& symbols, const Constellation& constellation);

/// (H^H H + sigma2 I)^{-1} H^H r.
CVector mmse_equalize(const CMatrix& H, double sigma2, const CVector& r);

/// y_eq = A r_eq.
CVector to_detection_domain(const ModMatrix& mod, const CVector& r_eq);

/// A A^H with its diagonal set to zero.
CMatrix interference_matrix(const ModMatrix& mod);
CMatrix interference_matrix(const CMatrix& correlation);

/// Per-component clipping on the integer grid, applied to real and imaginary
/// parts independently.
///   4QAM:  +1 above r1, -1 below -r1, unchanged otherwise.
///   16QAM: +3 above T1, +1 on (T2, T1], -1 on [-T1, -T2), -3 below -T1,
///          unchanged on [-T2, T2].
cplx soft_clip_grid(cplx r, const Constellation& constellation, const DetectorConfig& config);

/// soft_clip_grid applied to a normalized-scale value; result is normalized.
cplx soft_clip(cplx r, const Constellation& constellation, const DetectorConfig& config);

/// Iterative interference cancellation:
///   x(0) = y_eq
///   x(k) = soft_clip(y_eq - C0 x(k-1)),  k = 1..n_iter
/// with C0 the zero-diagonal correlation matrix.
DetectionResult iterative_detect(const CVector& y_eq, const CMatrix& interference, const DetectorConfig& config,
                                 const Constellation& constellation);
DetectionResult iterative_detect(const CVector& y_eq, const ModMatrix& mod, const DetectorConfig& config,
                                 const Constellation& constellation);

/// Largest number of hypotheses ml_oracle will enumerate.
inline constexpr std::uint64_t kMaxMlHypotheses = 65536;

/// Exhaustive argmin over constellation vectors x of ||y - G x||.
CVector ml_oracle(const CVector& y, const CMatrix& G, const Constellation& constellation);

/// Dispatches on config.mode. `correlation` is A A^H; the ML oracle uses it
/// as the effective matrix.
DetectionResult detect(const CVector& y_eq, const CMatrix& correlation, const DetectorConfig& config,
                       const Constellation& constellation);

}  // namespace afdm
