// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "afdm/waveform.hpp"
#include "test_support.hpp"

using namespace afdm;
using afdm::testing::random_vector;
using afdm::testing::rel_err;

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI{0.0, 1.0};

// Direct double sum for the transmit waveform:
//   s[n] = N^{-1/2} sum_m x[m] exp(+i 2 pi (c1 n^2 + c2 m^2 + alpha n m / N)).
CVector transmit_by_sum(const ModulationParams& p, const CVector& x) {
  const int N = p.N;
  CVector s = CVector::Zero(N);
  for (int n = 0; n < N; ++n)
    for (int m = 0; m < N; ++m)
      s(n) += x(m) * std::exp(2.0 * kPi * kI * (p.c1 * n * n + p.c2 * m * m + p.alpha * n * m / N));
  return s / std::sqrt(static_cast<double>(N));
}

// Direct sum for the receiver projection (conjugate kernel).
CVector receive_by_sum(const ModulationParams& p, const CVector& r) {
  const int N = p.N;
  CVector y = CVector::Zero(N);
  for (int m = 0; m < N; ++m)
    for (int n = 0; n < N; ++n)
      y(m) += r(n) * std::exp(-2.0 * kPi * kI * (p.c1 * n * n + p.c2 * m * m + p.alpha * n * m / N));
  return y / std::sqrt(static_cast<double>(N));
}

// Closed form of (A A^H)(m, k) via the finite geometric series.
cplx correlation_closed_form(const ModulationParams& p, int m, int k) {
  const int N = p.N;
  const int d = m - k;
  const cplx chirp = std::exp(-2.0 * kPi * kI * p.c2 * static_cast<double>(m * m - k * k));
  if (d == 0) return chirp;
  const cplx z = std::exp(-2.0 * kPi * kI * p.alpha * static_cast<double>(d) / static_cast<double>(N));
  const cplx series = (1.0 - std::pow(z, N)) / (1.0 - z);
  return chirp * series / static_cast<double>(N);
}

ModulationParams params(int N, double alpha, double c1, double c2, int L = 0) {
  return ModulationParams{N, alpha, c1, c2, L};
}

}  // namespace

TEST_CASE("ModulationParams validation") {
  CHECK_NOTHROW(params(32, 1.0, 0.1, 0.0, 2).validate());
  CHECK_THROWS(params(1, 1.0, 0, 0).validate());
  CHECK_THROWS(params(8, 0.0, 0, 0).validate());
  CHECK_THROWS(params(8, 1.01, 0, 0).validate());
  CHECK_THROWS(params(8, 0.9, 0, 0, 8).validate());
  CHECK_THROWS(params(8, 0.9, 0, 0, -1).validate());
}

TEST_CASE("default chirp rates") {
  CHECK(default_c1(32, 2.0) == doctest::Approx(5.0 / 64.0).epsilon(1e-15));
  CHECK(default_c1(32, 1.3) == doctest::Approx(5.0 / 64.0).epsilon(1e-15));
  CHECK(default_c2(32) == doctest::Approx(1.0 / (64.0 * kPi)).epsilon(1e-15));
}

TEST_CASE("build_chirp_matrix") {
  CHECK(build_chirp_matrix(5, 0.0) == CMatrix::Identity(5, 5));

  const CMatrix lam = build_chirp_matrix(2, 0.25);
  CHECK(std::abs(lam(0, 0) - cplx(1, 0)) < 1e-15);
  CHECK(std::abs(lam(1, 1) - cplx(0, -1)) < 1e-15);
  CHECK(lam(0, 1) == cplx(0, 0));

  const CMatrix big = build_chirp_matrix(16, 0.137);
  CHECK((big * big.adjoint() - CMatrix::Identity(16, 16)).norm() < 1e-14);
}

TEST_CASE("build_fractional_dft") {
  const CMatrix f2 = build_fractional_dft(2, 1.0);
  const double h = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(f2(0, 0) - h) < 1e-15);
  CHECK(std::abs(f2(0, 1) - h) < 1e-15);
  CHECK(std::abs(f2(1, 0) - h) < 1e-15);
  CHECK(std::abs(f2(1, 1) + h) < 1e-15);

  for (int N : {4, 8, 32}) {
    const CMatrix f = build_fractional_dft(N, 1.0);
    CHECK((f * f.adjoint() - CMatrix::Identity(N, N)).norm() <= 1e-12);
  }

  const CMatrix f4 = build_fractional_dft(4, 0.5);
  CHECK(std::abs(f4(1, 1) - 0.5 * std::exp(-kI * kPi / 4.0)) < 1e-15);

  CHECK_THROWS(build_fractional_dft(4, 0.0));
  CHECK_THROWS(build_fractional_dft(4, 1.5));
}

TEST_CASE("build_mod_matrix") {
  SUBCASE("degenerates to the DFT") {
    const ModMatrix mod = build_mod_matrix(params(8, 1.0, 0.0, 0.0));
    CHECK((mod.A() - build_fractional_dft(8, 1.0)).norm() < 1e-14);
  }
  SUBCASE("unitary at alpha = 1 for any chirp rates") {
    for (double c1 : {0.0, 5.0 / 64.0, 0.31}) {
      for (double c2 : {0.0, default_c2(32), 0.77}) {
        const ModMatrix mod = build_mod_matrix(params(32, 1.0, c1, c2));
        CHECK((mod.A() * mod.A_h() - CMatrix::Identity(32, 32)).norm() <= 1e-10);
      }
    }
  }
  SUBCASE("entry magnitudes and unit rows") {
    const ModMatrix mod = build_mod_matrix(params(4, 0.8, 0.2, 0.05));
    CHECK((mod.A().cwiseAbs().array() - 0.5).abs().maxCoeff() <= 1e-12);
    for (double alpha : {0.8, 0.85, 0.9}) {
      const ModMatrix m = build_mod_matrix(params(32, alpha, default_c1(32, 2.0), default_c2(32)));
      CHECK((m.A().cwiseAbs().array() - 1.0 / std::sqrt(32.0)).abs().maxCoeff() <= 1e-12);
      CHECK(((m.A() * m.A_h()).diagonal().array() - 1.0).abs().maxCoeff() <= 1e-12);
    }
  }
  SUBCASE("matches the three-factor product") {
    const auto p = params(16, 0.85, 0.09, 0.013);
    const CMatrix product = build_chirp_matrix(16, p.c2) * build_fractional_dft(16, p.alpha) * build_chirp_matrix(16, p.c1);
    CHECK((build_mod_matrix(p).A() - product).norm() <= 1e-12);
  }
  SUBCASE("adjoint is stored") {
    const ModMatrix mod = build_mod_matrix(params(8, 0.9, 0.1, 0.2));
    CHECK(mod.A_h() == mod.A().adjoint());
  }
}

TEST_CASE("modulate and demodulate against direct sums") {
  for (int N : {2, 4, 8, 16}) {
    for (double alpha : {0.8, 0.9, 1.0}) {
      const auto p = params(N, alpha, default_c1(N, 2.0), default_c2(N));
      const ModMatrix mod = build_mod_matrix(p);
      const CVector x = random_vector(N, static_cast<std::uint64_t>(N * 100 + alpha * 10));
      CHECK((modulate(mod, x) - transmit_by_sum(p, x)).norm() <= 1e-10 * x.norm());
      CHECK((demodulate(mod, x) - receive_by_sum(p, x)).norm() <= 1e-10 * x.norm());
    }
  }

  SUBCASE("unit vector picks out a conjugated row") {
    const ModMatrix mod = build_mod_matrix(params(8, 0.9, 0.1, 0.03));
    CVector e0 = CVector::Zero(8);
    e0(0) = 1.0;
    CHECK((modulate(mod, e0) - mod.A().row(0).adjoint()).norm() < 1e-15);
  }

  SUBCASE("orthogonal round trip and Parseval") {
    const ModMatrix mod = build_mod_matrix(params(32, 1.0, 5.0 / 64.0, default_c2(32)));
    const CVector x = random_vector(32, 4);
    const CVector s = modulate(mod, x);
    CHECK((demodulate(mod, s) - x).norm() <= 1e-10 * x.norm());
    CHECK(s.squaredNorm() == doctest::Approx(x.squaredNorm()).epsilon(1e-12));
  }

  SUBCASE("compressed energy is ||A^H x||^2") {
    const ModMatrix mod = build_mod_matrix(params(16, 0.8, 0.1, 0.0));
    const CVector x = random_vector(16, 5);
    const CMatrix gram = mod.A() * mod.A_h();
    const double expected = (x.adjoint() * gram * x)(0, 0).real();
    CHECK(modulate(mod, x).squaredNorm() == doctest::Approx(expected).epsilon(1e-12));
  }

  SUBCASE("zero input") {
    const ModMatrix mod = build_mod_matrix(params(8, 0.8, 0.1, 0.0));
    CHECK(demodulate(mod, CVector::Zero(8)).norm() == 0.0);
  }

  SUBCASE("length mismatch") {
    const ModMatrix mod = build_mod_matrix(params(8, 0.8, 0.1, 0.0));
    CHECK_THROWS_AS(modulate(mod, CVector::Zero(7)), DimensionError);
    CHECK_THROWS_AS(demodulate(mod, CVector::Zero(9)), DimensionError);
  }
}

TEST_CASE("chirp-periodic prefix") {
  const CVector s = random_vector(8, 11);

  SUBCASE("c1 = 0 gives a cyclic prefix") {
    const auto p = params(8, 1.0, 0.0, 0.0, 3);
    const CVector out = add_cpp(p, s);
    REQUIRE(out.size() == 11);
    for (int l = 1; l <= 3; ++l) CHECK(out(3 - l) == s(8 - l));
    CHECK(out.tail(8) == s);
  }

  SUBCASE("empty prefix") {
    const auto p = params(8, 1.0, 0.3, 0.0, 0);
    CHECK(add_cpp(p, s) == s);
    CHECK(remove_cpp(p, s) == s);
  }

  SUBCASE("prefix phase follows the chirp-periodic rule") {
    for (double c1 : {1.0 / 16.0, 0.1, 0.237}) {
      const auto p = params(8, 1.0, c1, 0.0, 2);
      const CVector out = add_cpp(p, s);
      for (int n = -2; n <= -1; ++n) {
        const cplx want = s(8 + n) * std::exp(-2.0 * kPi * kI * c1 * (64.0 + 16.0 * n));
        CHECK(std::abs(out(n + 2) - want) < 1e-12);
      }
    }
  }

  SUBCASE("the prefix continues the chirped signal") {
    // For the modulated waveform, the extension s[n] for n < 0 equals the
    // transmit sum evaluated at negative n; that is the property the CPP
    // formula guarantees for integer 2 N c1.
    const int N = 8;
    const auto p = params(N, 1.0, 3.0 / 16.0, 0.02, 3);
    const ModMatrix mod = build_mod_matrix(p);
    const CVector x = random_vector(N, 12);
    const CVector framed = add_cpp(p, modulate(mod, x));
    for (int n = -3; n < 0; ++n) {
      cplx direct{0, 0};
      for (int m = 0; m < N; ++m)
        direct += x(m) * std::exp(2.0 * kPi * kI * (p.c1 * n * n + p.c2 * m * m + static_cast<double>(n * m) / N));
      direct /= std::sqrt(static_cast<double>(N));
      CHECK(std::abs(framed(n + 3) - direct) < 1e-12);
    }
  }

  SUBCASE("remove_cpp") {
    const auto p = params(8, 1.0, 0.1, 0.0, 2);
    CHECK(remove_cpp(p, add_cpp(p, s)) == s);
    const CVector ten = random_vector(10, 13);
    CHECK(remove_cpp(p, ten) == ten.tail(8));
    CHECK_THROWS_AS(remove_cpp(p, s), DimensionError);
    CHECK_THROWS_AS(add_cpp(p, ten), DimensionError);
  }
}

TEST_CASE("oversampled SEFDM reference") {
  SUBCASE("alpha = 1, rho = 1 is the unitary inverse DFT") {
    const CVector s = random_vector(8, 21);
    const CVector ref = build_sefdm_reference(8, 1.0, 1, s);
    CHECK((ref - build_fractional_dft(8, 1.0).adjoint() * s).norm() <= 1e-12 * s.norm());
  }
  SUBCASE("zeros") { CHECK(build_sefdm_reference(4, 0.8, 2, CVector::Zero(4)).norm() == 0.0); }
  SUBCASE("direct summation, N = 4, rho = 2, alpha = 0.8") {
    const CVector s = random_vector(4, 22);
    const CVector ref = build_sefdm_reference(4, 0.8, 2, s);
    REQUIRE(ref.size() == 8);
    for (int k = 0; k < 8; ++k) {
      cplx acc{0, 0};
      for (int n = 0; n < 4; ++n) acc += s(n) * std::exp(2.0 * kPi * kI * 0.8 * static_cast<double>(k * n) / 8.0);
      CHECK(std::abs(ref(k) - acc / std::sqrt(8.0)) < 1e-12);
    }
  }
  SUBCASE("critically sampled compressed waveform without chirps is SEFDM") {
    for (double alpha : {0.8, 0.85, 0.9}) {
      const ModMatrix mod = build_mod_matrix(params(16, alpha, 0.0, 0.0));
      const CVector x = random_vector(16, 23);
      CHECK((modulate(mod, x) - build_sefdm_reference(16, alpha, 1, x)).norm() <= 1e-10 * x.norm());
    }
  }
  SUBCASE("oversampling decimates back to the critically sampled symbol") {
    const CVector x = random_vector(8, 24);
    const CVector fine = build_sefdm_reference(8, 0.85, 4, x);
    const CVector coarse = build_sefdm_reference(8, 0.85, 1, x);
    for (int k = 0; k < 8; ++k) CHECK(std::abs(fine(4 * k) * 2.0 - coarse(k)) < 1e-12);
  }
  CHECK_THROWS(build_sefdm_reference(4, 0.8, 0, CVector::Zero(4)));
  CHECK_THROWS_AS(build_sefdm_reference(4, 0.8, 1, CVector::Zero(3)), DimensionError);
}

TEST_CASE("correlation_matrix") {
  SUBCASE("identity at alpha = 1") {
    const ModMatrix mod = build_mod_matrix(params(32, 1.0, 5.0 / 64.0, default_c2(32)));
    CHECK((correlation_matrix(mod) - CMatrix::Identity(32, 32)).norm() <= 1e-10);
  }
  SUBCASE("matches the geometric-series closed form") {
    for (int N : {4, 8, 16, 32}) {
      for (double alpha : {0.5, 0.8, 0.85, 0.9, 0.97}) {
        const auto p = params(N, alpha, 0.11, default_c2(N));
        const CMatrix c = correlation_matrix(build_mod_matrix(p));
        double worst = 0.0;
        for (int m = 0; m < N; ++m)
          for (int k = 0; k < N; ++k) worst = std::max(worst, std::abs(c(m, k) - correlation_closed_form(p, m, k)));
        CHECK(worst <= 1e-10);
      }
    }
  }
  SUBCASE("Dirichlet magnitude, N = 8, alpha = 0.8, entry (0, 1)") {
    const CMatrix c = correlation_matrix(build_mod_matrix(params(8, 0.8, 0.0, 0.0)));
    const double want = std::abs(std::sin(kPi * 0.8) / (8.0 * std::sin(kPi * 0.8 / 8.0)));
    CHECK(std::abs(c(0, 1)) == doctest::Approx(want).epsilon(1e-12));
  }
  SUBCASE("independent of c1") {
    const CMatrix a = correlation_matrix(build_mod_matrix(params(16, 0.85, 0.0, 0.02)));
    const CMatrix b = correlation_matrix(build_mod_matrix(params(16, 0.85, 0.3, 0.02)));
    CHECK((a - b).norm() <= 1e-12);
  }
  SUBCASE("adjacent-carrier leakage grows as alpha shrinks") {
    const int N = 32;
    double prev_total = 0.0;
    std::vector<double> prev_adjacent(N - 1, 0.0);
    for (int step = 0; step <= 50; ++step) {
      const double alpha = 1.0 - 0.01 * step;
      const CMatrix c = correlation_matrix(build_mod_matrix(params(N, alpha, 0.1, default_c2(N))));
      const double total = (c - CMatrix::Identity(N, N)).squaredNorm();
      if (step > 0) CHECK(total > prev_total);
      prev_total = total;
      for (int m = 0; m + 1 < N; ++m) {
        const double mag = std::abs(c(m, m + 1));
        if (step > 0) CHECK(mag > prev_adjacent[static_cast<size_t>(m)]);
        prev_adjacent[static_cast<size_t>(m)] = mag;
      }
    }
  }
}
