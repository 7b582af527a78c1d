#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "pntap/error.hpp"
#include "pntap/pnt_ap.hpp"
#include "pntap/siegel.hpp"

using namespace pntap;

namespace {

const ArithmeticTables& tables() {
  static const ArithmeticTables t = build_tables(1000000);
  return t;
}

} // namespace

TEST_CASE("psi in residue classes") {
  auto r = psi_ap(10, 3, 1, tables());
  CHECK(r.psi == doctest::Approx(std::log(2.0) + std::log(7.0)).epsilon(1e-15));
  CHECK(r.main == doctest::Approx(5.0));
  CHECK(r.error == doctest::Approx(r.psi - 5.0));
  CHECK(r.normalized == doctest::Approx(std::abs(r.error) * 2 / 10));

  CHECK(psi_ap(12345.5, 1, 1, tables()).psi == doctest::Approx(chebyshev_psi(12345.5, tables())).epsilon(1e-14));

  for (std::uint64_t q : {4u, 7u, 12u}) {
    for (std::uint64_t a = 1; a < q; ++a) {
      if (std::gcd(a, q) != 1) continue;
      long double oracle_psi = 0;
      for (std::uint64_t n = a; n <= 3000; n += q) oracle_psi += oracle::mangoldt(n);
      CHECK(psi_ap(3000, q, a, tables()).psi == doctest::Approx(static_cast<double>(oracle_psi)).epsilon(1e-13));
    }
  }
  CHECK_THROWS_AS(psi_ap(100, 6, 3, tables()), DomainError);
  CHECK_THROWS_AS(psi_ap(2e6, 3, 1, tables()), RangeError);
  CHECK(psi_ap(1, 3, 1, tables()).psi == 0);
}

TEST_CASE("reconciliation with psi") {
  for (std::uint64_t q = 1; q <= 50; ++q) {
    for (double x : {1e3, 1e5, 1e6}) {
      auto r = reconcile(x, q, tables());
      REQUIRE(r.relative <= 1e-9);
    }
  }
  auto r = reconcile(1000, 6, tables());
  double expected_dividing = 0;
  for (std::uint64_t pk = 2; pk <= 1000; pk *= 2) expected_dividing += std::log(2.0);
  for (std::uint64_t pk = 3; pk <= 1000; pk *= 3) expected_dividing += std::log(3.0);
  CHECK(r.dividing == doctest::Approx(expected_dividing).epsilon(1e-14));
}

TEST_CASE("orthogonality decomposition") {
  auto c = orthogonality_decomposition(100, 3, 1, tables());
  CHECK(c.ok());
  CHECK(c.bound == doctest::Approx(4 * std::log(3.0) / 2 + 1));
  CHECK(orthogonality_decomposition(100.5, 1, 1, tables()).residual <= 1 + 1e-9);
  for (std::uint64_t a : {1u, 5u, 7u, 11u}) {
    auto r = orthogonality_decomposition(1e5, 12, a, tables());
    CHECK(r.ok());
    CHECK(r.residual <= 1e-6);
  }
  CHECK_THROWS_AS(orthogonality_decomposition(100, 12, 2, tables()), DomainError);
}

TEST_CASE("Lambda_chi sums") {
  auto trivial = build_group(1)->principal();
  double psi = chebyshev_psi(5000, tables());
  CHECK(lambda_chi_sum(trivial, 5000, tables()).real() == doctest::Approx(psi - 5000).epsilon(1e-12));

  auto chi = build_group(7)->character(1);
  CHECK(std::abs(lambda_chi_sum(chi, 1.5, tables())) == 0);
  CHECK(std::abs(lambda_chi_sum(chi, 2, tables()) - chi(2) * std::log(2.0)) < 1e-15);

  for (unsigned k : {1u, 3u, 6u}) {
    auto s = smoothed_lambda_chi_sum(trivial, 1e4, k, 1, tables());
    CHECK(std::abs(s.direct - s.abel) <= 1e-7 * std::abs(s.direct));
  }
  auto s = smoothed_lambda_chi_sum(chi, 20000.5, 4, 1, tables());
  CHECK(std::abs(s.direct - s.abel) <= 1e-7 * std::abs(s.direct));
  long double oracle_sum = 0;
  for (std::uint64_t n = 2; n <= 200; ++n)
    oracle_sum += (oracle::mangoldt(n) - 1) * std::log(static_cast<long double>(n)) * std::log(200.0L / n);
  auto s2 = smoothed_lambda_chi_sum(trivial, 200, 2, 1, tables());
  CHECK(s2.direct.real() == doctest::Approx(static_cast<double>(oracle_sum)).epsilon(1e-12));
  CHECK_THROWS_AS(smoothed_lambda_chi_sum(chi, 100, 13, 1, tables()), DomainError);
  CHECK_THROWS_AS(smoothed_lambda_chi_sum(chi, 100, 0, 1, tables()), DomainError);
}

TEST_CASE("profiles and M(chi)") {
  auto chi3 = real_primitive_characters(3)[0];
  auto p = lambda_chi_profile(chi3, {1e4, 1e5, 1e6}, {1, 2}, tables());
  CHECK(p.M == doctest::Approx(std::numbers::pi / (3 * std::sqrt(3.0)) * 1.5).epsilon(1e-7));
  REQUIRE(p.points.size() == 3);
  CHECK(p.points[0].normalized > p.points[1].normalized);
  CHECK(p.points[1].normalized > p.points[2].normalized);
  CHECK(p.smoothed.size() == 6);

  auto complex_chi = build_group(7)->character(1);
  CHECK(m_chi(complex_chi, tables()) == 1);
  CHECK(m_chi(build_group(7)->principal(), tables()) == 1);
}

TEST_CASE("eta(q)") {
  CHECK_FALSE(eta_q(1, tables()).has_value());
  CHECK_FALSE(eta_q(2, tables()).has_value());
  auto e3 = eta_q(3, tables());
  REQUIRE(e3.has_value());
  CHECK(*e3 == doctest::Approx(std::numbers::pi / (3 * std::sqrt(3.0)) * 1.5 / std::log(9.0)).epsilon(1e-7));

  double expected8 = INFINITY;
  for (auto& chi : build_group(8)->real_characters()) {
    if (chi.is_principal()) continue;
    expected8 = std::min(expected8, l1_real_character(chi, tables()).Lq / std::log(24.0));
  }
  CHECK(*eta_q(8, tables()) == expected8);
  for (std::uint64_t q = 3; q <= 500; ++q) {
    auto e = eta_q(q, tables(), 1e-6);
    REQUIRE(e.has_value());
    REQUIRE(*e > 0);
  }
}

TEST_CASE("error profile") {
  auto profile = theorem_error_profile({3, 4, 5, 7, 12}, {1e4, 1e5, 1e6}, tables());
  CHECK(profile.rows.size() == (2 + 2 + 4 + 6 + 4) * 3);
  CHECK(profile.max_normalized.size() == 15);
  for (const auto& row : profile.rows) {
    CHECK_FALSE(row.degenerate);
    CHECK(std::isfinite(row.fitted_cA));
  }
  auto tiny = theorem_error_profile({12}, {10}, tables());
  CHECK(tiny.rows[0].degenerate);
  CHECK(std::isnan(tiny.rows[0].fitted_cA));
}

TEST_CASE("psi sweep") {
  auto s = psi_sweep(1e4, 1e6, tables());
  CHECK(s.max_relative <= 0.05);
  CHECK(s.argmax >= 1e4);
  // Brute-force check on a small range.
  auto small = psi_sweep(10, 100, tables());
  double worst = 0;
  for (std::uint64_t n = 10; n < 100; ++n) {
    double v = chebyshev_psi(static_cast<double>(n), tables());
    worst = std::max({worst, std::abs(v - n) / n, std::abs(v - (n + 1)) / (n + 1)});
  }
  CHECK(small.max_relative == doctest::Approx(worst).epsilon(1e-12));
}
