// SPDX-License-Identifier: Apache-2.0

#include <charconv>
#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "afdm/harness.hpp"

#ifndef AFDM_CODE_VERSION
#define AFDM_CODE_VERSION "unknown"
#endif

namespace afdm {

namespace {

std::string shortest(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw std::runtime_error("float formatting failed");
  return std::string(buf, end);
}

template <typename T>
T parse_field(std::string_view s, std::string_view what, size_t line) {
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw std::runtime_error("csv line " + std::to_string(line) + ": bad " + std::string(what) + " '" +
                             std::string(s) + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  size_t pos = 0;
  while (true) {
    const size_t next = line.find(sep, pos);
    out.push_back(line.substr(pos, next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

nlohmann::json record_json(const BerRecord& r) {
  return {{"scheme", to_string(r.scheme)}, {"alpha", r.alpha},
          {"snr_db", r.snr_db},            {"bits", r.bits_sent},
          {"errors", r.bit_errors},        {"ber", r.ber},
          {"std_error", r.std_error()},    {"frames", r.frames},
          {"wall_time_s", r.wall_time_s},  {"seed", r.seed},
          {"singular_events", r.singular_events}};
}

}  // namespace

std::string code_version() { return AFDM_CODE_VERSION; }

RunManifest make_manifest(const ExperimentConfig& config, std::vector<BerRecord> records) {
  RunManifest m;
  m.config_hash = config_hash(config);
  m.code_version = code_version();
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  m.timestamp = buf;
  m.config = config;
  m.records = std::move(records);
  return m;
}

std::string format_csv(const std::vector<BerRecord>& records) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : records) {
    out += to_string(r.scheme);
    out += ',' + shortest(r.alpha);
    out += ',' + shortest(r.snr_db);
    out += ',' + std::to_string(r.bits_sent);
    out += ',' + std::to_string(r.bit_errors);
    out += ',' + shortest(r.ber);
    out += ',' + std::to_string(r.frames);
    out += ',' + std::to_string(r.seed);
    out += '\n';
  }
  return out;
}

std::vector<BerRecord> parse_csv(std::string_view text) {
  std::vector<BerRecord> out;
  size_t line_no = 0;
  bool header_seen = false;
  for (auto line : split(text, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != kCsvHeader) throw std::runtime_error("csv: unexpected header '" + std::string(line) + "'");
      header_seen = true;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 8) throw std::runtime_error("csv line " + std::to_string(line_no) + ": expected 8 fields");
    BerRecord r;
    r.scheme = scheme_from_string(f[0]);
    r.alpha = parse_field<double>(f[1], "alpha", line_no);
    r.snr_db = parse_field<double>(f[2], "snr_db", line_no);
    r.bits_sent = parse_field<std::uint64_t>(f[3], "bits", line_no);
    r.bit_errors = parse_field<std::uint64_t>(f[4], "errors", line_no);
    r.ber = parse_field<double>(f[5], "ber", line_no);
    r.frames = parse_field<std::uint64_t>(f[6], "frames", line_no);
    r.seed = parse_field<std::uint64_t>(f[7], "seed", line_no);
    out.push_back(r);
  }
  if (!header_seen) throw std::runtime_error("csv: missing header");
  return out;
}

std::filesystem::path manifest_path(const std::filesystem::path& csv_path) {
  return std::filesystem::path(csv_path.string() + ".manifest.json");
}

void write_results(const std::vector<BerRecord>& records, const std::filesystem::path& path,
                   const RunManifest& manifest) {
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << format_csv(records);
    if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
  }
  nlohmann::json j{{"config_hash", manifest.config_hash},
                   {"code_version", manifest.code_version},
                   {"timestamp", manifest.timestamp},
                   {"config", manifest.config},
                   {"records", nlohmann::json::array()}};
  double total_wall = 0.0;
  for (const auto& r : manifest.records) {
    j["records"].push_back(record_json(r));
    total_wall += r.wall_time_s;
  }
  j["total_wall_time_s"] = total_wall;
  if (manifest.config.is_object() && manifest.config.contains("alpha")) {
    ExperimentConfig cfg;
    from_json(manifest.config, cfg);
    const int bps = Constellation::from_name(cfg.modulation).bits_per_symbol();
    auto& se = j["spectral_efficiency"] = nlohmann::json::array();
    for (double a : cfg.alphas) {
      const auto s = spectral_efficiency(a, bps, cfg.N, cfg.effective_cpp_len());
      se.push_back({{"alpha", a},
                    {"bits_per_hz_no_prefix", s.bits_per_hz_no_prefix},
                    {"bits_per_hz_with_prefix", s.bits_per_hz_with_prefix},
                    {"gain_percent", s.gain_percent},
                    {"gain_percent_vs_prefix_free", s.gain_percent_vs_prefix_free}});
    }
  }
  const auto mpath = manifest_path(path);
  std::ofstream out(mpath);
  if (!out) throw std::runtime_error("cannot open '" + mpath.string() + "' for writing");
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write to '" + mpath.string() + "' failed");
}

void write_results(const std::vector<BerRecord>& records, const std::filesystem::path& path) {
  RunManifest m;
  m.code_version = code_version();
  m.records = records;
  write_results(records, path, m);
}

std::vector<BerRecord> read_results(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_csv(ss.str());
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

}  // namespace afdm
