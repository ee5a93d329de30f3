// SPDX-License-Identifier: Apache-2.0
//
// Linear time-varying multipath channel with integer delays and fractional
// normalized Doppler. Doppler is a per-sample phase ramp exp(i 2 pi nu n / N)
// referenced to the post-prefix sample index n in [0, N); prefix samples
// continue the same ramp at negative n.

#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "afdm/linalg.hpp"
#include "afdm/rng.hpp"
#include "afdm/waveform.hpp"

namespace afdm {

struct ChannelPath {
  cplx gain{1.0, 0.0};
  int delay = 0;
  double doppler = 0.0;  // cycles per block

  friend bool operator==(const ChannelPath&, const ChannelPath&) = default;
};

struct ChannelRealization {
  std::vector<ChannelPath> paths;
  CMatrix H;  // N x N, after prefix removal
  std::uint64_t seed = 0;
};

/// Noise level for a given SNR, taken as Es/N0 per transmitted sample.
struct NoiseSpec {
  double snr_db = 0.0;
  double sigma2 = 0.0;
};

/// sigma2 = es * 10^(-snr_db / 10).
NoiseSpec noise_for_snr(double snr_db, double es = 1.0);
/// Noise-free NoiseSpec (sigma2 = 0).
NoiseSpec noiseless();

/// Jakes Doppler for angle of arrival theta.
inline double jakes_doppler(double nu_max, double theta) { return nu_max * std::cos(theta); }

/// Draws num_paths paths: path 0 at delay 0, the rest uniform over
/// {0..max_delay}; Doppler nu_max cos(theta) with theta ~ U[-pi, pi]; gains
/// i.i.d. CN(0, 1/num_paths).
std::vector<ChannelPath> draw_paths(int num_paths, int max_delay, double nu_max, Engine& engine);

/// draw_paths seeded from `seed`, plus the equivalent matrix for `params`.
ChannelRealization draw_channel(int num_paths, int max_delay, double nu_max, std::uint64_t seed,
                                const ModulationParams& params);

/// H[n, (n - l) mod N] += h exp(i 2 pi nu n / N) phi(n), where phi(n) is the
/// prefix phase exp(-i 2 pi c1 (N^2 + 2N (n - l))) when n < l and 1 otherwise.
/// Throws std::invalid_argument if any delay exceeds cpp_len.
CMatrix build_channel_matrix(const std::vector<ChannelPath>& paths, const ModulationParams& params);

/// Tapped delay line over a prefixed frame; output has the input's length.
/// Samples before the start of the frame are taken as zero.
CVector apply_channel_time_domain(const std::vector<ChannelPath>& paths, const ModulationParams& params,
                                  const CVector& s_cpp);

/// Adds i.i.d. CN(0, sigma2) noise.
CVector add_awgn(const CVector& r, const NoiseSpec& noise, Engine& engine);
CVector add_awgn(const CVector& r, const NoiseSpec& noise, std::uint64_t seed);

/// A H A^H.
CMatrix effective_channel(const ModMatrix& mod, const CMatrix& H);

}  // namespace afdm
