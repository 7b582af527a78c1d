#include <cmath>
#include <tuple>
#include <vector>

#include "doctest.h"
#include "pntap/error.hpp"
#include "pntap/expsums.hpp"
#include "pntap/parallel.hpp"

using namespace pntap;
using cd = std::complex<double>;

namespace {

const ArithmeticTables& tables() {
  static const ArithmeticTables t = build_tables(300000);
  return t;
}

} // namespace

TEST_CASE("dyadic sum golden value") {
  auto r = dyadic_exp_sum({100, 0, 1e4});
  // Golden value: mpmath, 30 digits.
  CHECK(std::abs(r.value - cd(2.35140403999401929963, -2.00256299232789507892)) < 1e-9);
  CHECK(r.ceiling == doctest::Approx(99.9982778635896390).epsilon(1e-13));
  CHECK(std::abs(r.value) <= r.ceiling);
  CHECK_FALSE(r.phase_warning);
}

TEST_CASE("Lemma nit ceiling on the sampled grid") {
  // The ceiling with implied constant 1 fails at exactly one sample: the two
  // terms 3.5^{100i}, 4.5^{100i} are nearly in phase since 100 log(9/7) ~ 8 pi.
  // mpmath: |S| = 1.99999957853896727, ceiling = 1.99999953021347618.
  std::vector<std::tuple<double, std::uint64_t, double>> violations;
  for (double t : {1e1, 1e2, 1e3, 1e4, 1e5, 1e6}) {
    for (std::uint64_t N = 2; static_cast<double>(N) <= std::min(t * t, 1e6); N *= 2) {
      for (double u : {0.0, 0.5, 1.0}) {
        auto r = dyadic_exp_sum({N, u, t});
        REQUIRE(std::abs(r.value) <= static_cast<double>(N) * (1 + 1e-12));
        if (std::abs(r.value) > r.ceiling) violations.emplace_back(t, N, u);
      }
    }
  }
  REQUIRE(violations.size() == 1);
  CHECK(violations[0] == std::make_tuple(1e2, std::uint64_t{2}, 0.5));
  auto r = dyadic_exp_sum({2, 0.5, 100});
  CHECK(std::abs(r.value) == doctest::Approx(1.99999957853896727).epsilon(1e-13));
  CHECK(r.ceiling == doctest::Approx(1.99999953021347618).epsilon(1e-13));
}

TEST_CASE("dyadic hypotheses") {
  CHECK_THROWS_AS(dyadic_exp_sum({1, 0, 100}), DomainError);
  CHECK_THROWS_AS(dyadic_exp_sum({101, 0, 10}), DomainError);
  CHECK_THROWS_AS(dyadic_exp_sum({10, 1.5, 100}), DomainError);
  CHECK_THROWS_AS(dyadic_exp_sum({10, -0.1, 100}), DomainError);
  CHECK_NOTHROW(dyadic_exp_sum({100, 1, 10}));
  CHECK(phase_precision_warning(1e6, 1e12));
  CHECK_FALSE(phase_precision_warning(1e6, 1e6));
}

TEST_CASE("prefix sums") {
  CHECK(prefix_exp_sum(1000, 0, 0) == cd(1000, 0));
  CHECK(prefix_exp_sum(1000, 0.5, 0) == cd(999, 0));
  CHECK(prefix_exp_sum(1000, 1, 0) == cd(999, 0));
  auto one = prefix_exp_sum(1, 0, 3.0);
  CHECK(std::abs(one - std::polar(1.0, 3.0 * std::log(1.0))) < 1e-15);
  CHECK(prefix_exp_sum(2, 0.5, 3.0) == std::polar(1.0, 3.0 * std::log(1.5)));

  auto direct = prefix_exp_sum(10000, 0.5, 100);
  CHECK(std::abs(direct - cd(-54.0404092191166268594, 83.7692423800243869382)) < 1e-10);
  auto dyadic = prefix_exp_sum_dyadic(10000, 0.5, 100);
  CHECK(std::abs(direct - dyadic) <= 1e-8 * 10000);

  for (double t : {0.5, 7.0, 1e3, 1e5}) {
    for (std::uint64_t N : {17u, 1000u, 123457u}) {
      for (double u : {0.0, 0.25, 1.0}) {
        auto a = prefix_exp_sum(N, u, t), b = prefix_exp_sum_dyadic(N, u, t);
        REQUIRE(std::abs(a - b) <= 1e-8 * static_cast<double>(N));
      }
    }
  }
}

TEST_CASE("conjugation symmetry") {
  for (double t : {3.0, 1e2, 1e4}) {
    auto a = block_exp_sum(1000, 5000, 0.3, t), b = block_exp_sum(1000, 5000, 0.3, -t);
    CHECK(std::abs(a - std::conj(b)) <= 1e-12 * std::max(1.0, std::abs(a)));
    auto chi = build_group(7)->character(2);
    auto s = sifted_character_sum(chi, t, 1e5, 5, tables());
    auto c = sifted_character_sum(chi.conjugate(), -t, 1e5, 5, tables());
    CHECK(std::abs(s.value - std::conj(c.value)) <= 1e-10 * std::max(1.0, std::abs(s.value)));
  }
}

TEST_CASE("block sums do not depend on thread count") {
  set_thread_count(1);
  auto a = block_exp_sum(0, 1000000, 0.5, 12345.0);
  set_thread_count(3);
  auto b = block_exp_sum(0, 1000000, 0.5, 12345.0);
  set_thread_count(1);
  CHECK(a == b);
}

TEST_CASE("sifted character sums") {
  auto principal1 = build_group(1)->principal();
  auto odd = sifted_character_sum(principal1, 0, 1e5, 2, tables());
  CHECK(odd.value == cd(50000, 0));
  CHECK(odd.main_term.real() == doctest::Approx(50000.0));
  CHECK(odd.discrepancy <= 1);

  auto g5 = build_group(5);
  auto chi = g5->real_characters()[1];
  auto r = sifted_character_sum(chi, 0, 1e5, 2, tables());
  CHECK(r.main_term == cd(0, 0));
  CHECK(std::abs(r.value) < 1e-3 * 1e5);
  // chi mod 5 over odd n: values repeat with period 10 and sum to zero.
  CHECK(std::abs(r.value) <= 2);

  auto lone = sifted_character_sum(chi, 0, 1000, 2000, tables());
  CHECK(lone.value == cd(1, 0));

  for (std::uint64_t q : {1u, 4u, 15u, 30u, 77u}) {
    auto p = build_group(q)->principal();
    for (double y : {2.0, 3.0, 10.0, 50.0}) {
      auto s = sifted_character_sum(p, 0, 2e5, y, tables());
      REQUIRE(s.value.imag() == 0.0);
      REQUIRE(s.value.real() == static_cast<double>(sifted_count(q, 2e5, y, tables())));
    }
  }

  auto big_t = sifted_character_sum(g5->character(1), 1e3, 2e5, 7, tables());
  CHECK(big_t.secondary_shape > 0);
  CHECK(std::isfinite(big_t.ratio));
  CHECK_FALSE(big_t.hypothesis);
  CHECK_THROWS_AS(sifted_character_sum(chi, 0, 1e6, 2, tables()), RangeError);
  CHECK_THROWS_AS(sifted_character_sum(chi, 0, 1e3, 1.5, tables()), DomainError);
}
