// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <thread>

#include "afdm/harness.hpp"
#include "afdm/rng.hpp"

namespace afdm {

namespace {

// Frames per stopping-rule check. Fixed so that the stopping point does not
// depend on the thread count.
constexpr std::uint64_t kBatchFrames = 256;
constexpr int kMaxChannelRedraws = 64;

void parallel_for(std::uint64_t count, int threads, const std::function<void(std::uint64_t)>& body) {
  const auto workers = static_cast<std::uint64_t>(std::max(1, threads));
  if (workers == 1 || count <= 1) {
    for (std::uint64_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<size_t>(std::min(workers, count)));
    for (std::uint64_t w = 0; w < std::min(workers, count); ++w) {
      pool.emplace_back([&] {
        for (std::uint64_t i = next++; i < count && !failed; i = next++) {
          try {
            body(i);
          } catch (...) {
            if (!failed.exchange(true)) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

std::uint64_t point_key(double snr_db) {
  if (snr_db == 0.0) snr_db = 0.0;  // fold -0 onto +0
  return std::bit_cast<std::uint64_t>(snr_db);
}

struct PointSetup {
  const ExperimentConfig& config;
  Scheme scheme;
  ModulationParams params;
  ModMatrix mod;
  CMatrix interference;
  Constellation constellation;
  DetectorConfig detector;
  PrecoderKind precoder;
  double es_n0_db;
  double noise_ratio;  // N0 / Es
  std::uint64_t key;
};

PrecoderKind precoder_for(Scheme s) {
  switch (s) {
    case Scheme::NOAFDM_ZFpre: return PrecoderKind::ZF;
    case Scheme::NOAFDM_MMSEpre:
    case Scheme::NOAFDM_MMSEpre_ID: return PrecoderKind::MMSE;
    default: return PrecoderKind::None;
  }
}

bool uses_iterative_detection(Scheme s) { return s == Scheme::NOAFDM_ID || s == Scheme::NOAFDM_MMSEpre_ID; }

struct FrameOutcome {
  std::uint64_t errors = 0;
  std::uint64_t singular_events = 0;
};

FrameOutcome run_frame(const PointSetup& p, std::uint64_t frame) {
  const auto& cfg = p.config;
  const int N = p.params.N;
  FrameOutcome out;

  Engine data_rng = make_engine(cfg.seed, {p.key, frame, static_cast<std::uint64_t>(Stream::Data)});
  std::uniform_int_distribution<int> coin(0, 1);
  Bits bits(static_cast<size_t>(N * p.constellation.bits_per_symbol()));
  for (auto& b : bits) b = static_cast<std::uint8_t>(coin(data_rng));
  const CVector x = map_bits(bits, p.constellation);

  for (int attempt = 0;; ++attempt) {
    const auto a = static_cast<std::uint64_t>(attempt);
    Engine channel_rng = make_engine(cfg.seed, {p.key, frame, static_cast<std::uint64_t>(Stream::Channel), a});
    Engine noise_rng = make_engine(cfg.seed, {p.key, frame, static_cast<std::uint64_t>(Stream::Noise), a});
    const auto paths = draw_paths(cfg.num_paths, cfg.max_delay, cfg.nu_max, channel_rng);
    const CMatrix H = build_channel_matrix(paths, p.params);
    try {
      Precoder pre = no_precoder(N);
      if (p.precoder == PrecoderKind::ZF) pre = build_zf(H);
      if (p.precoder == PrecoderKind::MMSE) pre = build_mmse(H, p.noise_ratio);

      CVector s = apply_precoder(pre, p.mod, x, cfg.precoder_placement);
      double es = transmit_energy_per_sample(pre, p.mod, cfg.precoder_placement);
      double tx_gain = 1.0;
      if (cfg.normalize_tx_power && pre.kind != PrecoderKind::None) {
        tx_gain = 1.0 / std::sqrt(es);
        s *= tx_gain;
        es = 1.0;
      }
      if (cfg.snr_reference == SnrReference::PrePrecoding) es = transmit_energy_per_sample(no_precoder(N), p.mod);
      const NoiseSpec noise{p.es_n0_db, es * p.noise_ratio};

      const CVector received = add_awgn(apply_channel_time_domain(paths, p.params, add_cpp(p.params, s)), noise,
                                        noise_rng);
      const CVector r = remove_cpp(p.params, received);

      CVector y_eq;
      if (pre.kind == PrecoderKind::None) {
        y_eq = to_detection_domain(p.mod, mmse_equalize(H, noise.sigma2, r));
      } else {
        y_eq = to_detection_domain(p.mod, r) / tx_gain;
      }

      Bits decided;
      if (uses_iterative_detection(p.scheme)) {
        decided = iterative_detect(y_eq, p.interference, p.detector, p.constellation).hard_bits;
      } else {
        decided = demap_symbols(y_eq, p.constellation);
      }
      for (size_t i = 0; i < bits.size(); ++i) out.errors += decided[i] != bits[i];
      return out;
    } catch (const SingularMatrixError&) {
      ++out.singular_events;
      if (attempt + 1 >= kMaxChannelRedraws) throw;
    }
  }
}

}  // namespace

double BerRecord::std_error() const {
  if (frames < 2 || bits_sent == 0) return 0.0;
  const double F = static_cast<double>(frames);
  const double bits_per_frame = static_cast<double>(bits_sent) / F;
  const double mean = static_cast<double>(bit_errors) / F;
  const double var = std::max(0.0, (static_cast<double>(frame_error_sumsq) - F * mean * mean) / (F - 1.0));
  return std::sqrt(var / F) / bits_per_frame;
}

bool same_csv_fields(const BerRecord& a, const BerRecord& b) {
  return a.scheme == b.scheme && a.alpha == b.alpha && a.snr_db == b.snr_db && a.bits_sent == b.bits_sent &&
         a.bit_errors == b.bit_errors && a.ber == b.ber && a.frames == b.frames && a.seed == b.seed;
}

bool lower_by_std_errors(const BerRecord& lower, const BerRecord& higher, double k) {
  const double se = std::hypot(lower.std_error(), higher.std_error());
  return lower.ber + k * se <= higher.ber;
}

BerRecord run_point(const ExperimentConfig& config, Scheme scheme, double alpha, double snr_db, int threads) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();

  const ModulationParams params = scheme_params(config, scheme, alpha);
  const ModMatrix mod = build_mod_matrix(params);
  const Constellation constellation = Constellation::from_name(config.modulation);
  const double es_n0_db = config.snr_axis == SnrAxis::EbN0
                              ? snr_db + 10.0 * std::log10(static_cast<double>(constellation.bits_per_symbol()))
                              : snr_db;
  const PointSetup setup{config,
                         scheme,
                         params,
                         mod,
                         interference_matrix(mod),
                         constellation,
                         DetectorConfig{DetectionMode::Iterative, config.n_iter, config.r1, config.T1, config.T2},
                         precoder_for(scheme),
                         es_n0_db,
                         std::pow(10.0, -es_n0_db / 10.0),
                         point_key(snr_db)};

  const auto bits_per_frame = static_cast<std::uint64_t>(params.N * constellation.bits_per_symbol());
  BerRecord rec;
  rec.scheme = scheme;
  rec.alpha = params.alpha;
  rec.snr_db = snr_db;
  rec.seed = config.seed;

  std::vector<FrameOutcome> batch;
  while (true) {
    const std::uint64_t begin = rec.frames;
    const std::uint64_t end = std::min(begin + kBatchFrames, config.max_frames);
    batch.assign(static_cast<size_t>(end - begin), FrameOutcome{});
    parallel_for(end - begin, threads, [&](std::uint64_t i) { batch[static_cast<size_t>(i)] = run_frame(setup, begin + i); });
    for (const auto& f : batch) {
      rec.bit_errors += f.errors;
      rec.frame_error_sumsq += f.errors * f.errors;
      rec.singular_events += f.singular_events;
    }
    rec.frames = end;
    rec.bits_sent = rec.frames * bits_per_frame;
    const bool enough = rec.bits_sent >= config.min_bits && rec.bit_errors >= config.min_errors;
    if (enough || rec.frames >= config.max_frames) break;
  }
  rec.ber = static_cast<double>(rec.bit_errors) / static_cast<double>(rec.bits_sent);
  rec.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

BerRecord ofdm_baseline_run(const ExperimentConfig& config, double snr_db, int threads) {
  return run_point(config, Scheme::OFDM_MMSE, 1.0, snr_db, threads);
}

std::vector<BerRecord> run_sweep(const ExperimentConfig& config, int threads) {
  config.validate();
  struct Point {
    Scheme scheme;
    double alpha;
    double snr;
  };
  std::vector<Point> points;
  for (Scheme s : config.schemes) {
    const std::vector<double> alphas = is_orthogonal(s) ? std::vector<double>{1.0} : config.alphas;
    for (double a : alphas)
      for (double snr : config.snr_db) points.push_back({s, a, snr});
  }
  std::vector<BerRecord> records(points.size());
  parallel_for(points.size(), threads, [&](std::uint64_t i) {
    const auto& p = points[static_cast<size_t>(i)];
    records[static_cast<size_t>(i)] = run_point(config, p.scheme, p.alpha, p.snr, 1);
  });
  return records;
}

}  // namespace afdm
