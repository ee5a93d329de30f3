// SPDX-License-Identifier: Apache-2.0

#include "afdm/channel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace afdm {

NoiseSpec noise_for_snr(double snr_db, double es) {
  if (!(es >= 0.0)) throw std::invalid_argument("noise_for_snr: negative symbol energy");
  return {snr_db, es * std::pow(10.0, -snr_db / 10.0)};
}

NoiseSpec noiseless() { return {std::numeric_limits<double>::infinity(), 0.0}; }

std::vector<ChannelPath> draw_paths(int num_paths, int max_delay, double nu_max, Engine& engine) {
  if (num_paths < 1) throw std::invalid_argument("draw_paths: num_paths must be >= 1");
  if (max_delay < 0) throw std::invalid_argument("draw_paths: max_delay must be >= 0");
  std::uniform_int_distribution<int> delay_dist(0, max_delay);
  std::uniform_real_distribution<double> angle_dist(-std::numbers::pi, std::numbers::pi);
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5 / num_paths));

  std::vector<ChannelPath> paths(static_cast<size_t>(num_paths));
  for (int i = 0; i < num_paths; ++i) {
    auto& p = paths[static_cast<size_t>(i)];
    p.delay = i == 0 ? 0 : delay_dist(engine);
    p.doppler = jakes_doppler(nu_max, angle_dist(engine));
    const double re = gauss(engine);
    const double im = gauss(engine);
    p.gain = {re, im};
  }
  return paths;
}

ChannelRealization draw_channel(int num_paths, int max_delay, double nu_max, std::uint64_t seed,
                                const ModulationParams& params) {
  if (max_delay > params.cpp_len)
    throw std::invalid_argument("draw_channel: max_delay " + std::to_string(max_delay) + " exceeds cpp_len " +
                                std::to_string(params.cpp_len));
  Engine engine(seed);
  ChannelRealization out;
  out.paths = draw_paths(num_paths, max_delay, nu_max, engine);
  out.H = build_channel_matrix(out.paths, params);
  out.seed = seed;
  return out;
}

namespace {

cplx doppler_phasor(double nu, int n, int N) {
  // unit_phasor uses a negative exponent.
  return unit_phasor(-nu / N, static_cast<double>(n));
}

}  // namespace

CMatrix build_channel_matrix(const std::vector<ChannelPath>& paths, const ModulationParams& params) {
  params.validate();
  const int N = params.N;
  CMatrix H = CMatrix::Zero(N, N);
  for (const auto& p : paths) {
    if (p.delay < 0 || p.delay > params.cpp_len)
      throw std::invalid_argument("build_channel_matrix: delay " + std::to_string(p.delay) + " outside [0, " +
                                  std::to_string(params.cpp_len) + "]");
    for (int n = 0; n < N; ++n) {
      const int src = n - p.delay;
      cplx tap = p.gain * doppler_phasor(p.doppler, n, N);
      if (src < 0) tap *= unit_phasor(params.c1, static_cast<double>(N) * N + 2.0 * N * src);
      H(n, (src + N) % N) += tap;
    }
  }
  return H;
}

CVector apply_channel_time_domain(const std::vector<ChannelPath>& paths, const ModulationParams& params,
                                  const CVector& s_cpp) {
  const int N = params.N;
  const int L = params.cpp_len;
  if (s_cpp.size() != N + L) throw DimensionError("apply_channel_time_domain: expected N + cpp_len samples");
  CVector out = CVector::Zero(s_cpp.size());
  for (const auto& p : paths) {
    for (Eigen::Index j = p.delay; j < s_cpp.size(); ++j) {
      const int n = static_cast<int>(j) - L;
      out(j) += p.gain * doppler_phasor(p.doppler, n, N) * s_cpp(j - p.delay);
    }
  }
  return out;
}

CVector add_awgn(const CVector& r, const NoiseSpec& noise, Engine& engine) {
  if (!(noise.sigma2 >= 0.0)) throw std::invalid_argument("add_awgn: sigma2 must be >= 0");
  if (noise.sigma2 == 0.0) return r;
  std::normal_distribution<double> gauss(0.0, std::sqrt(noise.sigma2 / 2.0));
  CVector out = r;
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    const double re = gauss(engine);
    const double im = gauss(engine);
    out(i) += cplx(re, im);
  }
  return out;
}

CVector add_awgn(const CVector& r, const NoiseSpec& noise, std::uint64_t seed) {
  Engine engine(seed);
  return add_awgn(r, noise, engine);
}

CMatrix effective_channel(const ModMatrix& mod, const CMatrix& H) {
  if (H.rows() != mod.size() || H.cols() != mod.size()) throw DimensionError("effective_channel: H must be N x N");
  return mod.A() * H * mod.A_h();
}

}  // namespace afdm
