#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "pntap/error.hpp"
#include "pntap/parallel.hpp"
#include "pntap/sieve_weights.hpp"

using namespace pntap;

namespace {

const ArithmeticTables& tables() {
  static const ArithmeticTables t = build_tables(810000);
  return t;
}

// Truncated inclusion-exclusion sum_{j <= depth} (-1)^j C(w, j), w = #{p <= y : p | n}.
int bonferroni(std::uint64_t n, double y, unsigned depth) {
  unsigned w = 0;
  for (auto& [p, e] : oracle::trial_factor(n))
    if (static_cast<double>(p) <= y) ++w;
  long long sum = 0, binom = 1;
  for (unsigned j = 0; j <= depth && j <= w; ++j) {
    sum += j % 2 ? -binom : binom;
    binom = binom * (w - j) / (j + 1);
  }
  return static_cast<int>(sum);
}

} // namespace

TEST_CASE("y = 2, u = 2") {
  auto w = build_weights(2, 2, tables());
  CHECK(w.D == 4);
  CHECK(w.m == 1);
  REQUIRE(w.lambda_plus.size() == 2);
  CHECK(w.lambda_plus[0].d == 1);
  CHECK(w.lambda_plus[0].value == 1);
  CHECK(w.lambda_plus[1].d == 2);
  CHECK(w.lambda_plus[1].value == -1);
  auto plus = convolve_with_one(w, +1, 1000);
  for (std::uint64_t n = 1; n <= 1000; ++n) REQUIRE(plus[n] == (n % 2 ? 1 : 0));
  CHECK(plus[1] == 1);
  CHECK(convolve_with_one(w, -1, 10)[1] == 1);
}

TEST_CASE("support and parity") {
  for (double y : {5.0, 10.0, 30.0}) {
    for (double u : {2.0, 3.0, 4.0, 5.5}) {
      auto w = build_weights(y, u, tables());
      CHECK(w.m == std::max(1u, static_cast<unsigned>(u / 2)));
      for (int sign : {+1, -1}) {
        unsigned depth = sign > 0 ? 2 * w.m : 2 * w.m - 1;
        std::uint64_t prev = 0;
        for (const auto& t : w.terms(sign)) {
          REQUIRE(t.d > prev);
          prev = t.d;
          REQUIRE(static_cast<double>(t.d) <= w.D);
          auto f = oracle::trial_factor(t.d);
          REQUIRE(f.size() <= depth);
          for (auto& [p, e] : f) {
            REQUIRE(e == 1);
            REQUIRE(static_cast<double>(p) <= y);
          }
          REQUIRE(t.value == oracle::mobius(t.d));
          REQUIRE(w.weight(sign, t.d) == t.value);
        }
        CHECK(w.weight(sign, 49 * 2) == 0);
      }
    }
  }
}

TEST_CASE("convolution matches truncated inclusion-exclusion") {
  auto w = build_weights(10, 3, tables());
  auto plus = convolve_with_one(w, +1, 20000);
  auto minus = convolve_with_one(w, -1, 20000);
  for (std::uint64_t n = 1; n <= 20000; ++n) {
    REQUIRE(plus[n] == bonferroni(n, 10, 2));
    REQUIRE(minus[n] == bonferroni(n, 10, 1));
  }
}

TEST_CASE("sandwich for every configuration") {
  for (double y : {5.0, 10.0, 30.0}) {
    for (double u : {2.0, 3.0, 4.0}) {
      auto w = build_weights(y, u, tables());
      auto r = sandwich_check(w, 100000, tables());
      CAPTURE(y);
      CAPTURE(u);
      CHECK(r.ok());
      CHECK(r.max_plus >= 1);
      CHECK(r.min_minus <= 0);
    }
  }
  // Sifted count for y = 10: integers coprime to 210.
  auto r = sandwich_check(build_weights(10, 3, tables()), 100000, tables());
  std::uint64_t coprime = 0;
  for (std::uint64_t n = 1; n <= 100000; ++n) coprime += std::gcd(n, std::uint64_t{210}) == 1;
  CHECK(r.sifted == coprime);
}

TEST_CASE("parallel convolution is deterministic") {
  auto w = build_weights(30, 4, tables());
  set_thread_count(1);
  auto a = convolve_with_one(w, +1, 300000);
  set_thread_count(4);
  auto b = convolve_with_one(w, +1, 300000);
  set_thread_count(1);
  CHECK(a == b);
}

TEST_CASE("mean values") {
  auto w = build_weights(10, 4, tables());
  auto zero = mean_value(w, [](std::uint64_t) { return 0.0; }, +1);
  CHECK(zero.sum == 1);
  CHECK(zero.product == 1);
  CHECK(zero.ratio == 1);

  // With the full family (depth >= pi(y)) the sum equals the product exactly.
  auto full = mean_value(w, [](std::uint64_t) { return 1.0; }, +1);
  CHECK(w.plus_depth >= 4);
  CHECK(full.product == doctest::Approx(48.0 / 210.0).epsilon(1e-14));
  CHECK(full.deviation < 1e-14);

  auto lower = mean_value(w, [](std::uint64_t) { return 1.0; }, -1);
  CHECK(lower.sum <= lower.product);
  CHECK(full.e_minus_u == doctest::Approx(std::exp(-4.0)));

  auto w30 = build_weights(30, 3, tables());
  auto hp = mean_value(w30, [](std::uint64_t p) { return 1.0 / static_cast<double>(p); }, +1);
  CHECK(std::isfinite(hp.ratio));
  CHECK(hp.ratio >= 1);
  auto hm = mean_value(w30, [](std::uint64_t p) { return 1.0 / static_cast<double>(p); }, -1);
  CHECK(hm.ratio <= 1);

  // Deviation shrinks as u grows with y fixed.
  double prev = INFINITY;
  for (double u : {2.0, 4.0, 6.0}) {
    auto wu = build_weights(30, u, tables());
    double dev = mean_value(wu, [](std::uint64_t) { return 1.0; }, +1).deviation;
    CHECK(dev < prev);
    prev = dev;
  }
}

TEST_CASE("parameter errors") {
  CHECK_THROWS_AS(build_weights(10, 1.9, tables()), DomainError);
  CHECK_THROWS_AS(build_weights(1.5, 3, tables()), DomainError);
  CHECK_THROWS_AS(build_weights(1e6, 2, tables()), RangeError);
  CHECK_THROWS_AS(build_weights(1000, 7, tables()), RangeError);
  auto w = build_weights(10, 2, tables());
  CHECK_THROWS_AS(mean_value(w, [](std::uint64_t) { return 1.5; }, +1), DomainError);
  CHECK_THROWS_AS(mean_value(w, [](std::uint64_t) { return -0.1; }, +1), DomainError);
}
