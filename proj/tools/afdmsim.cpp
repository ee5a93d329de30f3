// SPDX-License-Identifier: Apache-2.0
//
// afdmsim: command-line front end for the non-orthogonal AFDM BER harness.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "afdm/harness.hpp"

namespace {

struct CommonOptions {
  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  int threads = 1;
};

void add_common(CLI::App* cmd, CommonOptions& opt, bool with_config) {
  if (with_config) cmd->add_option("--config", opt.config_path, "Experiment config (JSON key-value document)");
  cmd->add_option("--out", opt.out_path, "CSV output path; a .manifest.json sidecar is written next to it");
  cmd->add_option("--seed", opt.seed, "Root seed (overrides config)");
  cmd->add_option("--threads", opt.threads, "Worker threads")->check(CLI::PositiveNumber);
}

afdm::ExperimentConfig base_config(const CommonOptions& opt) {
  afdm::ExperimentConfig cfg = opt.config_path.empty() ? afdm::table1_config() : afdm::load_config(opt.config_path);
  if (opt.seed) cfg.seed = *opt.seed;
  cfg.validate();
  return cfg;
}

void emit(const afdm::ExperimentConfig& cfg, const std::vector<afdm::BerRecord>& records, const CommonOptions& opt) {
  std::cout << afdm::format_csv(records);
  for (const auto& r : records) {
    std::cerr << afdm::to_string(r.scheme) << " alpha=" << r.alpha << " snr=" << r.snr_db << " dB (Es/N0"
              << (cfg.snr_axis == afdm::SnrAxis::EbN0 ? " from Eb/N0 axis" : "") << "): ber=" << r.ber
              << " +/- " << r.std_error() << " frames=" << r.frames << " time=" << r.wall_time_s << "s";
    if (r.singular_events) std::cerr << " singular_redraws=" << r.singular_events;
    if (r.alpha < 1.0) std::cerr << " se_gain=" << afdm::spectral_efficiency(r.alpha, 1, cfg.N, 0).gain_percent << "%";
    std::cerr << '\n';
  }
  if (!opt.out_path.empty()) {
    afdm::write_results(records, opt.out_path, afdm::make_manifest(cfg, records));
    std::cerr << "wrote " << opt.out_path << " and " << afdm::manifest_path(opt.out_path).string() << '\n';
  }
}

nlohmann::json matrix_json(const afdm::CMatrix& m) {
  nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    std::vector<double> rr, ii;
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ii.push_back(m(r, c).imag());
    }
    re.push_back(rr);
    im.push_back(ii);
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"re", re}, {"im", im}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Non-orthogonal AFDM link-level BER simulator"};
  app.require_subcommand(1);

  CommonOptions sim_opt;
  std::string scheme_name = "NOAFDM_ID";
  double alpha = 0.9;
  double snr = 14.0;
  auto* simulate = app.add_subcommand("simulate", "Run one (scheme, alpha, SNR) point");
  add_common(simulate, sim_opt, true);
  simulate->add_option("--scheme", scheme_name, "OFDM_MMSE, AFDM_MMSE, NOAFDM_MMSE, NOAFDM_ID, NOAFDM_ZFpre, "
                                                "NOAFDM_MMSEpre, NOAFDM_MMSEpre_ID");
  simulate->add_option("--alpha", alpha, "Compression factor in (0, 1]");
  simulate->add_option("--snr", snr, "SNR in dB ('inf' for noiseless)");

  CommonOptions sweep_opt;
  auto* sweep = app.add_subcommand("sweep", "Run every scheme x alpha x SNR point of a config file");
  add_common(sweep, sweep_opt, true);
  sweep->get_option("--config")->required();

  CommonOptions mat_opt;
  double mat_alpha = 0.85;
  auto* matrices = app.add_subcommand("matrices", "Dump the modulation and correlation matrices as JSON");
  matrices->add_option("--config", mat_opt.config_path, "Experiment config");
  matrices->add_option("--alpha", mat_alpha, "Compression factor in (0, 1]");
  matrices->add_option("--out", mat_opt.out_path, "Output path (stdout if omitted)");

  CommonOptions fig_opt;
  std::string figure_name;
  auto* figure = app.add_subcommand("figure", "Run a canned sweep: fig2, fig3 or fig4");
  figure->add_option("name", figure_name, "fig2 | fig3 | fig4")->required();
  add_common(figure, fig_opt, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      const auto cfg = base_config(sim_opt);
      const auto rec = afdm::run_point(cfg, afdm::scheme_from_string(scheme_name), alpha, snr, sim_opt.threads);
      emit(cfg, {rec}, sim_opt);
    } else if (sweep->parsed()) {
      const auto cfg = base_config(sweep_opt);
      emit(cfg, afdm::run_sweep(cfg, sweep_opt.threads), sweep_opt);
    } else if (matrices->parsed()) {
      const auto cfg = base_config(mat_opt);
      const auto params = afdm::scheme_params(cfg, afdm::Scheme::NOAFDM_ID, mat_alpha);
      const auto mod = afdm::build_mod_matrix(params);
      nlohmann::json j{{"N", params.N},
                       {"alpha", params.alpha},
                       {"c1", params.c1},
                       {"c2", params.c2},
                       {"cpp_len", params.cpp_len},
                       {"A", matrix_json(mod.A())},
                       {"correlation", matrix_json(afdm::correlation_matrix(mod))}};
      if (mat_opt.out_path.empty()) {
        std::cout << j.dump(2) << '\n';
      } else {
        std::ofstream out(mat_opt.out_path);
        if (!out) throw std::runtime_error("cannot open '" + mat_opt.out_path + "' for writing");
        out << j.dump(2) << '\n';
      }
    } else if (figure->parsed()) {
      auto cfg = afdm::figure_config(figure_name);
      if (fig_opt.seed) cfg.seed = *fig_opt.seed;
      emit(cfg, afdm::run_sweep(cfg, fig_opt.threads), fig_opt);
    }
  } catch (const std::exception& e) {
    std::cerr << "afdmsim: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
