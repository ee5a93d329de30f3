// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "afdm/channel.hpp"
#include "afdm/precoder.hpp"
#include "test_support.hpp"

using namespace afdm;
using afdm::testing::random_matrix;
using afdm::testing::random_vector;
using afdm::testing::rel_err;

namespace {

ModulationParams table_params(double alpha) { return {32, alpha, default_c1(32, 2.0), default_c2(32), 2}; }

// MMSE precoder rebuilt from the SVD H = U S V^H: P = V diag(s / (s^2 + sigma2)) U^H.
CMatrix mmse_by_svd(const CMatrix& H, double sigma2) {
  Eigen::JacobiSVD<CMatrix> svd(H, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd s = svd.singularValues();
  const Eigen::VectorXd g = s.array() / (s.array().square() + sigma2);
  return svd.matrixV() * g.cast<cplx>().asDiagonal() * svd.matrixU().adjoint();
}

}  // namespace

TEST_CASE("zero-forcing precoder") {
  SUBCASE("identity and scaled identity") {
    CHECK((build_zf(CMatrix::Identity(6, 6)).P - CMatrix::Identity(6, 6)).norm() < 1e-14);
    CHECK((build_zf(2.0 * CMatrix::Identity(6, 6)).P - 0.5 * CMatrix::Identity(6, 6)).norm() < 1e-14);
  }
  SUBCASE("right inverse of random channels") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto ch = draw_channel(3, 2, 2.0, seed, table_params(0.85));
      const Precoder zf = build_zf(ch.H);
      CHECK(zf.kind == PrecoderKind::ZF);
      CHECK((ch.H * zf.P - CMatrix::Identity(32, 32)).norm() <= 1e-8);
      CHECK(rel_err(zf.P, pseudo_inverse(ch.H)) <= 1e-8);
    }
  }
  SUBCASE("singular channel is reported") {
    CMatrix H = random_matrix(4, 4, 1);
    H.row(3) = H.row(0);
    CHECK_THROWS_AS(build_zf(H), SingularMatrixError);
    CHECK_THROWS_AS(build_zf(CMatrix::Zero(4, 4)), SingularMatrixError);
    try {
      build_zf(H);
    } catch (const SingularMatrixError& e) {
      CHECK(e.matrix_name() == "H*H^H");
    }
  }
  CHECK_THROWS_AS(build_zf(CMatrix::Identity(3, 4)), DimensionError);
}

TEST_CASE("MMSE precoder") {
  SUBCASE("identity channel") {
    const Precoder p = build_mmse(CMatrix::Identity(5, 5), 1.0);
    CHECK((p.P - 0.5 * CMatrix::Identity(5, 5)).norm() < 1e-14);
    CHECK(p.sigma2_used == 1.0);
  }
  SUBCASE("vanishing regularizer recovers zero forcing") {
    const CMatrix H = random_matrix(8, 8, 2);
    CHECK(rel_err(build_mmse(H, 0.0).P, build_zf(H).P) <= 1e-7);
    CHECK(rel_err(build_mmse(H, 1e-12).P, build_zf(H).P) <= 1e-7);
  }
  SUBCASE("matches the SVD form") {
    for (double sigma2 : {1e-3, 0.1, 1.0, 10.0}) {
      const CMatrix H = random_matrix(16, 16, 3);
      CHECK(rel_err(build_mmse(H, sigma2).P, mmse_by_svd(H, sigma2)) <= 1e-10);
    }
  }
  SUBCASE("defining equation") {
    const CMatrix H = random_matrix(12, 12, 4);
    const double sigma2 = 0.3;
    const CMatrix P = build_mmse(H, sigma2).P;
    CMatrix gram = H * H.adjoint();
    gram.diagonal().array() += sigma2;
    CHECK((P * gram - H.adjoint()).norm() <= 1e-10 * H.norm());
  }
  SUBCASE("shrinks every singular value relative to zero forcing") {
    const auto ch = draw_channel(3, 2, 2.0, 5, table_params(0.9));
    Eigen::JacobiSVD<CMatrix> zf(build_zf(ch.H).P);
    Eigen::JacobiSVD<CMatrix> mmse(build_mmse(ch.H, 0.05).P);
    // s / (s^2 + sigma2) <= 1 / s pointwise, so the sorted spectra compare elementwise.
    CHECK((mmse.singularValues().array() <= zf.singularValues().array() + 1e-12).all());
  }
  CHECK_THROWS(build_mmse(CMatrix::Identity(2, 2), -1.0));
}

TEST_CASE("apply_precoder") {
  const auto p = table_params(0.85);
  const ModMatrix mod = build_mod_matrix(p);
  const CVector x = random_vector(32, 6);

  SUBCASE("no precoder equals plain modulation") {
    CHECK(apply_precoder(no_precoder(32), mod, x) == modulate(mod, x));
    CHECK(no_precoder(32).kind == PrecoderKind::None);
  }
  SUBCASE("placements") {
    const Precoder pre{PrecoderKind::MMSE, random_matrix(32, 32, 7), 0.1};
    CHECK((apply_precoder(pre, mod, x) - pre.P * mod.A_h() * x).norm() <= 1e-10 * x.norm());
    CHECK((apply_precoder(pre, mod, x, PrecoderPlacement::DaftDomain) - mod.A_h() * pre.P * x).norm() <=
          1e-10 * x.norm() * pre.P.norm());
  }
  SUBCASE("zero-forcing over the channel leaves only the waveform correlation") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto ch = draw_channel(3, 2, 2.0, seed, p);
      const Precoder zf = build_zf(ch.H);
      const CVector r = ch.H * apply_precoder(zf, mod, x);
      const CVector y = demodulate(mod, r);
      CHECK((y - correlation_matrix(mod) * x).norm() <= 1e-8 * x.norm());
    }
  }
  SUBCASE("orthogonal waveform over a zero-forced channel is transparent") {
    const auto po = table_params(1.0);
    const ModMatrix m1 = build_mod_matrix(po);
    const auto ch = draw_channel(3, 2, 2.0, 8, po);
    const CVector y = demodulate(m1, ch.H * apply_precoder(build_zf(ch.H), m1, x));
    CHECK((y - x).norm() <= 1e-8 * x.norm());
  }
  CHECK_THROWS_AS(apply_precoder(no_precoder(32), mod, CVector::Zero(31)), DimensionError);
  CHECK_THROWS_AS(apply_precoder(build_zf(CMatrix::Identity(4, 4)), mod, x), DimensionError);
}

TEST_CASE("transmit_energy_per_sample") {
  const ModMatrix unit = build_mod_matrix(table_params(1.0));
  CHECK(transmit_energy_per_sample(no_precoder(32), unit) == doctest::Approx(1.0).epsilon(1e-12));

  const ModMatrix mod = build_mod_matrix(table_params(0.8));
  CHECK(transmit_energy_per_sample(no_precoder(32), mod) == doctest::Approx(1.0).epsilon(1e-12));

  const Precoder half{PrecoderKind::ZF, 0.5 * CMatrix::Identity(32, 32), 0.0};
  CHECK(transmit_energy_per_sample(half, mod) == doctest::Approx(0.25).epsilon(1e-12));

  // Empirical check against the average energy of random unit-power symbols.
  const auto ch = draw_channel(3, 2, 2.0, 9, table_params(0.8));
  const Precoder zf = build_zf(ch.H);
  Engine engine(10);
  std::normal_distribution<double> g(0.0, std::sqrt(0.5));
  double acc = 0.0;
  const int trials = 4000;
  for (int t = 0; t < trials; ++t) {
    CVector x(32);
    for (auto& v : x) v = cplx(g(engine), g(engine));
    acc += apply_precoder(zf, mod, x).squaredNorm() / 32.0;
  }
  CHECK(acc / trials == doctest::Approx(transmit_energy_per_sample(zf, mod)).epsilon(0.05));
}

TEST_CASE("to_string") {
  CHECK(to_string(PrecoderKind::None) == "none");
  CHECK(to_string(PrecoderKind::ZF) == "zf");
  CHECK(to_string(PrecoderKind::MMSE) == "mmse");
}
