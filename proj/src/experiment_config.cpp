// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <stdexcept>

#include "afdm/harness.hpp"

namespace afdm {

namespace {

struct SchemeName {
  Scheme scheme;
  std::string_view name;
};

constexpr SchemeName kSchemeNames[] = {
    {Scheme::OFDM_MMSE, "OFDM_MMSE"},           {Scheme::AFDM_MMSE, "AFDM_MMSE"},
    {Scheme::NOAFDM_MMSE, "NOAFDM_MMSE"},       {Scheme::NOAFDM_ID, "NOAFDM_ID"},
    {Scheme::NOAFDM_ZFpre, "NOAFDM_ZFpre"},     {Scheme::NOAFDM_MMSEpre, "NOAFDM_MMSEpre"},
    {Scheme::NOAFDM_MMSEpre_ID, "NOAFDM_MMSEpre_ID"},
};

template <typename Enum>
struct EnumName {
  Enum value;
  const char* name;
};

constexpr EnumName<SnrReference> kSnrReferenceNames[] = {{SnrReference::PostPrecoding, "post_precoding"},
                                                         {SnrReference::PrePrecoding, "pre_precoding"}};
constexpr EnumName<SnrAxis> kSnrAxisNames[] = {{SnrAxis::EsN0, "es_n0"}, {SnrAxis::EbN0, "eb_n0"}};
constexpr EnumName<PrecoderPlacement> kPlacementNames[] = {{PrecoderPlacement::TimeDomain, "time_domain"},
                                                           {PrecoderPlacement::DaftDomain, "daft_domain"}};

template <typename Enum, size_t K>
const char* enum_name(const EnumName<Enum> (&table)[K], Enum v) {
  for (const auto& e : table)
    if (e.value == v) return e.name;
  return "?";
}

template <typename Enum, size_t K>
Enum enum_value(const EnumName<Enum> (&table)[K], const std::string& s, const char* what) {
  for (const auto& e : table)
    if (s == e.name) return e.value;
  throw std::invalid_argument(std::string("unknown ") + what + " '" + s + "'");
}

}  // namespace

std::string_view to_string(Scheme scheme) {
  for (const auto& s : kSchemeNames)
    if (s.scheme == scheme) return s.name;
  return "?";
}

Scheme scheme_from_string(std::string_view name) {
  for (const auto& s : kSchemeNames)
    if (s.name == name) return s.scheme;
  throw std::invalid_argument("unknown scheme '" + std::string(name) + "'");
}

bool is_orthogonal(Scheme scheme) { return scheme == Scheme::OFDM_MMSE || scheme == Scheme::AFDM_MMSE; }

void ExperimentConfig::validate() const {
  if (N < 2) throw std::invalid_argument("config: N must be >= 2");
  for (double a : alphas)
    if (!(a > 0.0 && a <= 1.0)) throw std::invalid_argument("config: every alpha must lie in (0, 1]");
  for (double s : snr_db)
    if (std::isnan(s)) throw std::invalid_argument("config: SNR values must not be NaN");
  Constellation::from_name(modulation);
  if (n_iter < 1) throw std::invalid_argument("config: n_iter must be >= 1");
  if (num_paths < 1) throw std::invalid_argument("config: num_paths must be >= 1");
  if (max_delay < 0) throw std::invalid_argument("config: max_delay must be >= 0");
  if (!(nu_max >= 0.0)) throw std::invalid_argument("config: nu_max must be >= 0");
  if (min_bits < 10000) throw std::invalid_argument("config: min_bits must be >= 1e4");
  if (max_frames < 1) throw std::invalid_argument("config: max_frames must be >= 1");
  const int L = effective_cpp_len();
  if (L < max_delay) throw std::invalid_argument("config: cpp_len must cover max_delay");
  if (L >= N) throw std::invalid_argument("config: cpp_len must be < N");
  DetectorConfig{DetectionMode::Iterative, n_iter, r1, T1, T2}.validate();
}

void to_json(nlohmann::json& j, const ExperimentConfig& c) {
  std::vector<std::string> schemes;
  for (Scheme s : c.schemes) schemes.emplace_back(to_string(s));
  j = nlohmann::json{{"N", c.N},
                     {"alpha", c.alphas},
                     {"snr_db", c.snr_db},
                     {"modulation", c.modulation},
                     {"scheme", schemes},
                     {"n_iter", c.n_iter},
                     {"num_paths", c.num_paths},
                     {"max_delay", c.max_delay},
                     {"nu_max", c.nu_max},
                     {"min_bits", c.min_bits},
                     {"min_errors", c.min_errors},
                     {"max_frames", c.max_frames},
                     {"seed", c.seed},
                     {"r1", c.r1},
                     {"T1", c.T1},
                     {"T2", c.T2},
                     {"snr_reference", enum_name(kSnrReferenceNames, c.snr_reference)},
                     {"snr_axis", enum_name(kSnrAxisNames, c.snr_axis)},
                     {"normalize_tx_power", c.normalize_tx_power},
                     {"precoder_placement", enum_name(kPlacementNames, c.precoder_placement)}};
  if (c.c1) j["c1"] = *c.c1;
  if (c.c2) j["c2"] = *c.c2;
  if (c.cpp_len) j["cpp_len"] = *c.cpp_len;
}

void from_json(const nlohmann::json& j, ExperimentConfig& c) {
  static const std::set<std::string> known{
      "N",     "alpha",   "snr_db", "modulation", "scheme",        "n_iter",   "num_paths",          "max_delay",
      "nu_max", "min_bits", "min_errors", "max_frames", "seed",    "c1",       "c2",                 "cpp_len",
      "r1",    "T1",      "T2",     "snr_reference", "snr_axis", "normalize_tx_power", "precoder_placement"};
  if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");
  for (const auto& [key, _] : j.items())
    if (!known.contains(key)) throw std::invalid_argument("config: unknown key '" + key + "'");

  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) j.at(key).get_to(field);
  };
  auto list = [&](const char* key, std::vector<double>& field) {
    if (!j.contains(key)) return;
    const auto& v = j.at(key);
    field = v.is_array() ? v.get<std::vector<double>>() : std::vector<double>{v.get<double>()};
  };
  get("N", c.N);
  list("alpha", c.alphas);
  list("snr_db", c.snr_db);
  get("modulation", c.modulation);
  if (j.contains("scheme")) {
    const auto& v = j.at("scheme");
    std::vector<std::string> names =
        v.is_array() ? v.get<std::vector<std::string>>() : std::vector<std::string>{v.get<std::string>()};
    c.schemes.clear();
    for (const auto& n : names) c.schemes.push_back(scheme_from_string(n));
  }
  get("n_iter", c.n_iter);
  get("num_paths", c.num_paths);
  get("max_delay", c.max_delay);
  get("nu_max", c.nu_max);
  get("min_bits", c.min_bits);
  get("min_errors", c.min_errors);
  get("max_frames", c.max_frames);
  get("seed", c.seed);
  if (j.contains("c1")) c.c1 = j.at("c1").get<double>();
  if (j.contains("c2")) c.c2 = j.at("c2").get<double>();
  if (j.contains("cpp_len")) c.cpp_len = j.at("cpp_len").get<int>();
  get("r1", c.r1);
  get("T1", c.T1);
  get("T2", c.T2);
  if (j.contains("snr_reference"))
    c.snr_reference = enum_value(kSnrReferenceNames, j.at("snr_reference").get<std::string>(), "snr_reference");
  if (j.contains("snr_axis")) c.snr_axis = enum_value(kSnrAxisNames, j.at("snr_axis").get<std::string>(), "snr_axis");
  get("normalize_tx_power", c.normalize_tx_power);
  if (j.contains("precoder_placement"))
    c.precoder_placement =
        enum_value(kPlacementNames, j.at("precoder_placement").get<std::string>(), "precoder_placement");
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config '" + path.string() + "'");
  ExperimentConfig c;
  try {
    from_json(nlohmann::json::parse(in, nullptr, true, /*ignore_comments=*/true), c);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("config '" + path.string() + "': " + e.what());
  }
  c.validate();
  return c;
}

std::string config_hash(const ExperimentConfig& config) {
  const std::string canonical = nlohmann::json(config).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

double max_normalized_doppler(double speed_kmh, double carrier_hz, double subcarrier_spacing_hz) {
  constexpr double kSpeedOfLight = 3.0e8;
  const double doppler_hz = speed_kmh / 3.6 * carrier_hz / kSpeedOfLight;
  return doppler_hz / subcarrier_spacing_hz;
}

ExperimentConfig table1_config() {
  ExperimentConfig c;
  c.N = 32;
  c.nu_max = max_normalized_doppler(540.0, 4.0e9, 1.0e3);
  c.max_delay = 2;
  c.num_paths = 3;
  c.modulation = "4qam";
  c.n_iter = 20;
  return c;
}

ExperimentConfig figure_config(std::string_view name) {
  ExperimentConfig c = table1_config();
  if (name == "fig2") {
    c.schemes = {Scheme::OFDM_MMSE, Scheme::AFDM_MMSE, Scheme::NOAFDM_ID};
    c.alphas = {0.85, 0.9};
    c.snr_db = {0, 2, 4, 6, 8, 10, 12, 14, 16, 18, 20};
  } else if (name == "fig3") {
    c.schemes = {Scheme::AFDM_MMSE, Scheme::NOAFDM_MMSE, Scheme::NOAFDM_ID};
    c.alphas = {0.8, 0.85, 0.9};
    c.snr_db = {0, 2, 4, 6, 8, 10, 12, 14, 16};
  } else if (name == "fig4") {
    c.schemes = {Scheme::NOAFDM_MMSE, Scheme::NOAFDM_ZFpre, Scheme::NOAFDM_MMSEpre};
    c.alphas = {0.8, 0.85, 0.9};
    c.snr_db = {0, 2, 4, 6, 8, 10, 12, 14, 16};
  } else {
    throw std::invalid_argument("unknown figure preset '" + std::string(name) + "' (expected fig2, fig3 or fig4)");
  }
  return c;
}

ModulationParams scheme_params(const ExperimentConfig& config, Scheme scheme, double alpha) {
  ModulationParams p;
  p.N = config.N;
  p.cpp_len = config.effective_cpp_len();
  if (scheme == Scheme::OFDM_MMSE) {
    p.alpha = 1.0;
    p.c1 = 0.0;
    p.c2 = 0.0;
    return p;
  }
  p.alpha = is_orthogonal(scheme) ? 1.0 : alpha;
  p.c1 = config.c1.value_or(default_c1(config.N, config.nu_max));
  p.c2 = config.c2.value_or(default_c2(config.N));
  return p;
}

SpectralEfficiency spectral_efficiency(double alpha, int bits_per_symbol, int N, int cpp_len) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("spectral_efficiency: alpha must lie in (0, 1]");
  SpectralEfficiency se;
  const double framing = static_cast<double>(N) / (N + cpp_len);
  se.bits_per_hz_no_prefix = bits_per_symbol / alpha;
  se.bits_per_hz_with_prefix = bits_per_symbol * framing / alpha;
  se.gain_percent = (1.0 - alpha) / alpha * 100.0;
  se.gain_percent_vs_prefix_free = (framing / alpha - 1.0) * 100.0;
  return se;
}

}  // namespace afdm
