// SPDX-License-Identifier: Apache-2.0

#include "afdm/detector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace afdm {

namespace {

constexpr int kQam4Levels[2] = {+1, -1};
constexpr int kQam16Levels[4] = {+3, +1, -3, -1};  // labels 00, 01, 10, 11

}  // namespace

Constellation::Constellation(ConstellationKind kind) : kind_(kind) {
  switch (kind) {
    case ConstellationKind::QAM4:
      bits_per_symbol_ = 2;
      levels_ = 2;
      scale_ = 1.0 / std::sqrt(2.0);
      break;
    case ConstellationKind::QAM16:
      bits_per_symbol_ = 4;
      levels_ = 4;
      scale_ = 1.0 / std::sqrt(10.0);
      break;
  }
  const int axis_bits = bits_per_symbol_ / 2;
  const unsigned count = 1u << bits_per_symbol_;
  points_.reserve(count);
  for (unsigned label = 0; label < count; ++label) {
    const unsigned i_label = label >> axis_bits;
    const unsigned q_label = label & ((1u << axis_bits) - 1u);
    points_.emplace_back(scale_ * axis_level(i_label), scale_ * axis_level(q_label));
  }
}

Constellation Constellation::from_name(std::string_view name) {
  if (name == "qpsk" || name == "4qam" || name == "QPSK" || name == "4QAM") return Constellation(ConstellationKind::QAM4);
  if (name == "16qam" || name == "16QAM") return Constellation(ConstellationKind::QAM16);
  throw std::invalid_argument("unsupported constellation '" + std::string(name) + "'");
}

std::string_view Constellation::name() const noexcept { return kind_ == ConstellationKind::QAM4 ? "4qam" : "16qam"; }

int Constellation::axis_level(unsigned axis_label) const {
  if (axis_label >= static_cast<unsigned>(levels_)) throw std::out_of_range("axis_level: label out of range");
  return levels_ == 2 ? kQam4Levels[axis_label] : kQam16Levels[axis_label];
}

unsigned Constellation::axis_label(int level) const {
  for (unsigned l = 0; l < static_cast<unsigned>(levels_); ++l)
    if (axis_level(l) == level) return l;
  throw std::out_of_range("axis_label: level not on grid");
}

int Constellation::slice_axis(double v) const {
  // Odd-integer grid: level = 2k + 1 with k clamped to the constellation.
  const double half = levels_ / 2;
  const double k = std::clamp(std::round((v - 1.0) / 2.0), -half, half - 1.0);
  return 2 * static_cast<int>(k) + 1;
}

void DetectorConfig::validate() const {
  if (n_iter < 1) throw std::invalid_argument("DetectorConfig: n_iter must be >= 1");
  if (!(r1 >= 0.0 && r1 <= 1.0)) throw std::invalid_argument("DetectorConfig: r1 must lie in [0, 1]");
  if (!(T2 >= 0.0 && T2 <= T1)) throw std::invalid_argument("DetectorConfig: need 0 <= T2 <= T1");
}

Bits bits_from_string(std::string_view s) {
  Bits out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '0' || c == '1') out.push_back(static_cast<std::uint8_t>(c - '0'));
    else if (c != ' ' && c != '_') throw std::invalid_argument("bits_from_string: unexpected character");
  }
  return out;
}

CVector map_bits(std::span<const std::uint8_t> bits, const Constellation& constellation) {
  const auto k = static_cast<size_t>(constellation.bits_per_symbol());
  if (bits.size() % k != 0)
    throw std::invalid_argument("map_bits: " + std::to_string(bits.size()) + " bits is not a multiple of " +
                                std::to_string(k));
  CVector out(static_cast<Eigen::Index>(bits.size() / k));
  for (Eigen::Index s = 0; s < out.size(); ++s) {
    unsigned label = 0;
    for (size_t b = 0; b < k; ++b) {
      const auto bit = bits[static_cast<size_t>(s) * k + b];
      if (bit > 1) throw std::invalid_argument("map_bits: bit values must be 0 or 1");
      label = (label << 1) | bit;
    }
    out(s) = constellation.points()[label];
  }
  return out;
}

Bits demap_symbols(const CVector& symbols, const Constellation& constellation) {
  const int k = constellation.bits_per_symbol();
  const int axis_bits = k / 2;
  Bits out;
  out.reserve(static_cast<size_t>(symbols.size() * k));
  for (Eigen::Index s = 0; s < symbols.size(); ++s) {
    const cplx g = symbols(s) / constellation.scale();
    const unsigned label = (constellation.axis_label(constellation.slice_axis(g.real())) << axis_bits) |
                           constellation.axis_label(constellation.slice_axis(g.imag()));
    for (int b = k - 1; b >= 0; --b) out.push_back(static_cast<std::uint8_t>((label >> b) & 1u));
  }
  return out;
}

CVector hard_decide(const CVector& symbols, const Constellation& constellation) {
  CVector out(symbols.size());
  const double sc = constellation.scale();
  for (Eigen::Index s = 0; s < symbols.size(); ++s) {
    const cplx g = symbols(s) / sc;
    out(s) = sc * cplx(constellation.slice_axis(g.real()), constellation.slice_axis(g.imag()));
  }
  return out;
}

CVector mmse_equalize(const CMatrix& H, double sigma2, const CVector& r) {
  if (H.rows() != H.cols() || r.size() != H.rows()) throw DimensionError("mmse_equalize: dimension mismatch");
  if (!(sigma2 >= 0.0)) throw std::invalid_argument("mmse_equalize: sigma2 must be >= 0");
  CMatrix gram = H.adjoint() * H;
  gram.diagonal().array() += sigma2;
  return solve_hermitian_system(gram, CVector(H.adjoint() * r), "H^H*H + sigma2*I");
}

CVector to_detection_domain(const ModMatrix& mod, const CVector& r_eq) {
  if (r_eq.size() != mod.size()) throw DimensionError("to_detection_domain: length mismatch");
  return mod.A() * r_eq;
}

CMatrix interference_matrix(const CMatrix& correlation) {
  CMatrix c0 = correlation;
  c0.diagonal().setZero();
  return c0;
}

CMatrix interference_matrix(const ModMatrix& mod) { return interference_matrix(correlation_matrix(mod)); }

namespace {

double clip_qam4(double v, double r1) {
  if (v > r1) return 1.0;
  if (v < -r1) return -1.0;
  return v;
}

double clip_qam16(double v, double t1, double t2) {
  if (v > t1) return 3.0;
  if (v > t2) return 1.0;
  if (v < -t1) return -3.0;
  if (v < -t2) return -1.0;
  return v;
}

}  // namespace

cplx soft_clip_grid(cplx r, const Constellation& constellation, const DetectorConfig& config) {
  if (constellation.kind() == ConstellationKind::QAM4)
    return {clip_qam4(r.real(), config.r1), clip_qam4(r.imag(), config.r1)};
  return {clip_qam16(r.real(), config.T1, config.T2), clip_qam16(r.imag(), config.T1, config.T2)};
}

cplx soft_clip(cplx r, const Constellation& constellation, const DetectorConfig& config) {
  const double sc = constellation.scale();
  return sc * soft_clip_grid(r / sc, constellation, config);
}

DetectionResult iterative_detect(const CVector& y_eq, const CMatrix& interference, const DetectorConfig& config,
                                 const Constellation& constellation) {
  config.validate();
  if (interference.rows() != y_eq.size() || interference.cols() != y_eq.size())
    throw DimensionError("iterative_detect: interference matrix does not match y_eq");

  DetectionResult out;
  out.residual_interference_norm.reserve(static_cast<size_t>(config.n_iter));
  CVector x = y_eq;
  CVector prev_interference = CVector::Zero(y_eq.size());
  CVector interference_k(y_eq.size());
  for (int k = 1; k <= config.n_iter; ++k) {
    interference_k.noalias() = interference * x;
    out.residual_interference_norm.push_back((interference_k - prev_interference).norm());
    prev_interference = interference_k;
    const CVector r = y_eq - interference_k;
    for (Eigen::Index n = 0; n < r.size(); ++n) x(n) = soft_clip(r(n), constellation, config);
  }
  out.iterations_run = config.n_iter;
  out.symbols = std::move(x);
  out.hard_bits = demap_symbols(out.symbols, constellation);
  return out;
}

DetectionResult iterative_detect(const CVector& y_eq, const ModMatrix& mod, const DetectorConfig& config,
                                 const Constellation& constellation) {
  return iterative_detect(y_eq, interference_matrix(mod), config, constellation);
}

CVector ml_oracle(const CVector& y, const CMatrix& G, const Constellation& constellation) {
  if (G.rows() != y.size() || G.cols() < 1) throw DimensionError("ml_oracle: G does not match y");
  const auto& pts = constellation.points();
  const auto M = static_cast<std::uint64_t>(pts.size());
  const auto N = static_cast<int>(G.cols());
  std::uint64_t hypotheses = 1;
  for (int i = 0; i < N; ++i) {
    hypotheses *= M;
    if (hypotheses > kMaxMlHypotheses)
      throw std::invalid_argument("ml_oracle: search space of " + std::to_string(M) + "^" + std::to_string(N) +
                                  " exceeds " + std::to_string(kMaxMlHypotheses) + " hypotheses");
  }

  std::vector<unsigned> digits(static_cast<size_t>(N), 0);
  CVector x(N);
  for (int i = 0; i < N; ++i) x(i) = pts[0];
  CVector best = x;
  double best_cost = std::numeric_limits<double>::infinity();
  for (std::uint64_t h = 0; h < hypotheses; ++h) {
    const double cost = (y - G * x).squaredNorm();
    if (cost < best_cost) {
      best_cost = cost;
      best = x;
    }
    // Odometer increment.
    for (int i = 0; i < N; ++i) {
      auto& d = digits[static_cast<size_t>(i)];
      d = (d + 1) % static_cast<unsigned>(M);
      x(i) = pts[d];
      if (d != 0) break;
    }
  }
  return best;
}

DetectionResult detect(const CVector& y_eq, const CMatrix& correlation, const DetectorConfig& config,
                       const Constellation& constellation) {
  switch (config.mode) {
    case DetectionMode::Iterative:
      return iterative_detect(y_eq, interference_matrix(correlation), config, constellation);
    case DetectionMode::MLOracle: {
      DetectionResult out;
      out.symbols = ml_oracle(y_eq, correlation, constellation);
      out.hard_bits = demap_symbols(out.symbols, constellation);
      return out;
    }
    case DetectionMode::MMSEOnly:
      break;
  }
  DetectionResult out;
  out.symbols = y_eq;
  out.hard_bits = demap_symbols(y_eq, constellation);
  return out;
}

}  // namespace afdm
