// SPDX-License-Identifier: Apache-2.0
//
// Monte-Carlo BER engine.
//
// Every random draw is keyed by (seed, point key, frame index, stream), where
// the point key depends only on the SNR value. Schemes and compression
// factors evaluated at the same SNR therefore see the same bits, channels and
// noise shapes, and results do not depend on thread count or scheduling.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "afdm/channel.hpp"
#include "afdm/detector.hpp"
#include "afdm/precoder.hpp"
#include "afdm/waveform.hpp"

namespace afdm {

enum class Scheme {
  OFDM_MMSE,
  AFDM_MMSE,
  NOAFDM_MMSE,
  NOAFDM_ID,
  NOAFDM_ZFpre,
  NOAFDM_MMSEpre,
  NOAFDM_MMSEpre_ID,
};

std::string_view to_string(Scheme scheme);
Scheme scheme_from_string(std::string_view name);

/// Whether the scheme ignores the requested alpha and runs orthogonally.
bool is_orthogonal(Scheme scheme);

/// Energy that the SNR refers to: the signal actually put on the channel
/// (after precoding), or the unprecoded modulated signal.
enum class SnrReference { PostPrecoding, PrePrecoding };
/// Label of the SNR axis. Eb/N0 values are converted to Es/N0 internally.
enum class SnrAxis { EsN0, EbN0 };

struct ExperimentConfig {
  int N = 32;
  std::vector<double> alphas{0.8, 0.85, 0.9};
  std::vector<double> snr_db{0, 2, 4, 6, 8, 10, 12, 14, 16};
  std::string modulation = "4qam";
  std::vector<Scheme> schemes{Scheme::NOAFDM_MMSE, Scheme::NOAFDM_ID};
  int n_iter = 20;
  int num_paths = 3;
  int max_delay = 2;
  double nu_max = 2.0;
  std::uint64_t min_bits = 200000;
  std::uint64_t min_errors = 100;
  std::uint64_t max_frames = 200000;
  std::uint64_t seed = 1;

  // Waveform overrides; unset means the defaults derived from N and nu_max.
  std::optional<double> c1;
  std::optional<double> c2;
  std::optional<int> cpp_len;

  double r1 = 0.5;
  double T1 = 2.0;
  double T2 = 0.5;

  SnrReference snr_reference = SnrReference::PostPrecoding;
  SnrAxis snr_axis = SnrAxis::EsN0;
  bool normalize_tx_power = false;
  PrecoderPlacement precoder_placement = PrecoderPlacement::TimeDomain;

  void validate() const;
  int effective_cpp_len() const { return cpp_len.value_or(max_delay); }

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

void to_json(nlohmann::json& j, const ExperimentConfig& c);
/// Missing keys keep their defaults; unknown keys are rejected.
void from_json(const nlohmann::json& j, ExperimentConfig& c);

ExperimentConfig load_config(const std::filesystem::path& path);

/// FNV-1a over the canonical JSON form, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

/// Normalized maximum Doppler: speed * fc / c divided by the subcarrier
/// spacing.
double max_normalized_doppler(double speed_kmh, double carrier_hz, double subcarrier_spacing_hz);

/// N = 32, 4 GHz carrier, 1 kHz spacing, 540 km/h, delay spread 2 samples,
/// 3 paths, 4QAM, 20 detector iterations.
ExperimentConfig table1_config();

/// Named presets "fig2", "fig3", "fig4".
ExperimentConfig figure_config(std::string_view name);

/// Modulation parameters a scheme runs with under `config`.
ModulationParams scheme_params(const ExperimentConfig& config, Scheme scheme, double alpha);

struct SpectralEfficiency {
  double bits_per_hz_no_prefix = 0.0;
  double bits_per_hz_with_prefix = 0.0;
  /// Gain over the orthogonal waveform with identical framing: (1 - a) / a.
  double gain_percent = 0.0;
  /// Gain over a prefix-free orthogonal waveform.
  double gain_percent_vs_prefix_free = 0.0;
};

SpectralEfficiency spectral_efficiency(double alpha, int bits_per_symbol, int N, int cpp_len);

struct BerRecord {
  Scheme scheme = Scheme::NOAFDM_ID;
  double alpha = 1.0;
  double snr_db = 0.0;
  std::uint64_t bits_sent = 0;
  std::uint64_t bit_errors = 0;
  double ber = 0.0;
  std::uint64_t frames = 0;
  double wall_time_s = 0.0;
  std::uint64_t seed = 0;

  // Diagnostics that live in the manifest only.
  std::uint64_t frame_error_sumsq = 0;
  std::uint64_t singular_events = 0;

  /// Standard error of the BER estimate, treating frames as independent
  /// clusters of correlated bit errors.
  double std_error() const;
};

/// Equality on the fields persisted to CSV.
bool same_csv_fields(const BerRecord& a, const BerRecord& b);

/// True when lower.ber + k * sqrt(se_l^2 + se_h^2) <= higher.ber.
bool lower_by_std_errors(const BerRecord& lower, const BerRecord& higher, double k = 2.0);

/// One Monte-Carlo point. Frames are processed in fixed-size batches; the
/// stopping rule (min_bits and min_errors, or max_frames) is checked between
/// batches, so the result is the same for any thread count.
BerRecord run_point(const ExperimentConfig& config, Scheme scheme, double alpha, double snr_db, int threads = 1);

/// OFDM_MMSE at the given SNR.
BerRecord ofdm_baseline_run(const ExperimentConfig& config, double snr_db, int threads = 1);

/// Cartesian product schemes x alphas x snr_db. Orthogonal schemes run once
/// per SNR at alpha = 1. Records come back in scheme, alpha, snr order.
std::vector<BerRecord> run_sweep(const ExperimentConfig& config, int threads = 1);

struct RunManifest {
  std::string config_hash;
  std::string code_version;
  std::string timestamp;
  nlohmann::json config;
  std::vector<BerRecord> records;
};

RunManifest make_manifest(const ExperimentConfig& config, std::vector<BerRecord> records);

std::string code_version();

inline constexpr std::string_view kCsvHeader = "scheme,alpha,snr_db,bits,errors,ber,frames,seed";

std::string format_csv(const std::vector<BerRecord>& records);
std::vector<BerRecord> parse_csv(std::string_view text);

/// Writes the CSV to `path` and the manifest to `path` + ".manifest.json".
/// I/O failures raise std::runtime_error naming the path.
void write_results(const std::vector<BerRecord>& records, const std::filesystem::path& path,
                   const RunManifest& manifest);
void write_results(const std::vector<BerRecord>& records, const std::filesystem::path& path);
std::vector<BerRecord> read_results(const std::filesystem::path& path);

std::filesystem::path manifest_path(const std::filesystem::path& csv_path);

}  // namespace afdm
