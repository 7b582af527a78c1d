#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "pntap/dirichlet_series.hpp"
#include "pntap/error.hpp"

using namespace pntap;
using cd = std::complex<double>;

namespace {

const ArithmeticTables& tables() {
  static const ArithmeticTables t = build_tables(2000000);
  return t;
}

SeriesOptions tol(double e) {
  SeriesOptions o;
  o.tolerance = e;
  return o;
}

SeriesOptions fixed(std::uint64_t n) {
  SeriesOptions o;
  o.cutoff = n;
  return o;
}

// (F'/F)^{(m)} from F' = G F differentiated m times.
std::vector<cd> quotient_rule(const std::vector<cd>& F) {
  std::vector<cd> G;
  for (std::size_t m = 0; m + 1 < F.size(); ++m) {
    cd acc = F[m + 1];
    double binom = 1;
    for (std::size_t i = 0; i < m; ++i) {
      acc -= binom * G[i] * F[m - i];
      binom = binom * static_cast<double>(m - i) / static_cast<double>(i + 1);
    }
    G.push_back(acc / F[0]);
  }
  return G;
}

} // namespace

TEST_CASE("V_t") {
  CHECK(vt(0) == doctest::Approx(1.62285406531380897).epsilon(1e-14));
  CHECK(vt(0) >= 1.5);
  CHECK(vt(1) < 3);
  CHECK(vt(0.3) == vt(-0.3));
  CHECK(vt(1e6) > vt(1e5));
  double prev = vt(0);
  for (double t = 0.01; t < 1e6; t *= 1.5) {
    REQUIRE(vt(t) > prev);
    prev = vt(t);
  }
}

TEST_CASE("zeta(2) and 1/zeta(2)") {
  SeriesContext one(MultiplicativeFunction::one(), 1.5, tables(), tol(1e-12));
  auto z = evaluate_series(one, {2, 0}, 0);
  CHECK(z.certificate <= 1e-12);
  CHECK(std::abs(z.value - 1.64493406684822643647) <= z.certificate + 1e-13);
  auto zp = evaluate_series(one, {2, 0}, 1);
  CHECK(std::abs(zp.value - (-0.937548254315843753702)) <= zp.certificate + 1e-13);
  auto zpp = evaluate_series(one, {2, 0}, 2);
  CHECK(std::abs(zpp.value - 1.98928023429890102342) <= zpp.certificate + 1e-12);

  SeriesContext mu(MultiplicativeFunction::mobius(), 1.5, tables(), tol(1e-6));
  auto m = evaluate_series(mu, {2, 0}, 0);
  CHECK(m.certificate <= 1e-6);
  CHECK(std::abs(m.value - 0.607927101854026628663) <= m.certificate);

  SeriesContext mu2(MultiplicativeFunction::mobius(), 2, tables(), tol(1e-6));
  auto m2 = evaluate_series(mu2, {2, 0}, 0);
  CHECK(std::abs(m2.value - 0.810569469138702171551) <= m2.certificate);
}

TEST_CASE("character L-values") {
  auto g = build_group(5);
  SeriesContext real(MultiplicativeFunction::character(g->real_characters()[1]), 1.5, tables(), tol(1e-11));
  auto v = evaluate_series(real, {1.5, 0}, 0);
  CHECK(std::abs(v.value - 0.587662839285828606977) <= v.certificate + 1e-13);

  SeriesContext cplx(MultiplicativeFunction::character(g->character(1)), 1.5, tables(), tol(1e-11));
  auto c = evaluate_series(cplx, {1.5, 2}, 0);
  CHECK(std::abs(c.value - cd(1.25168886617011801561, 0.219132724525897224669)) <= c.certificate + 1e-13);
  auto c2 = evaluate_series(cplx, {1.5, 2}, 2);
  CHECK(std::abs(c2.value - cd(0.0421532563667027653312, 0.228608598420738096615)) <= c2.certificate + 1e-12);

  // Conditionally convergent at s = 1: L_y(1, chi) = L(1, chi) prod_{p <= y} (1 - chi(p)/p).
  auto l1 = sifted_l_at_one(g->real_characters()[1], 10, tables(), 1e-8);
  CHECK(std::abs(l1.value.real() - 0.983791865060580660319) <= l1.certificate + 1e-12);
  CHECK(l1.certificate <= 1e-5);
}

TEST_CASE("only n = 1 survives a large sifting bound") {
  SeriesOptions o = fixed(1000);
  SeriesContext ctx(MultiplicativeFunction::random(3), 5000, tables(), o);
  auto v = evaluate_series(ctx, {1.7, 3}, 0);
  CHECK(v.value == cd(1, 0));
}

TEST_CASE("errors") {
  SeriesContext ctx(MultiplicativeFunction::mobius(), 1.5, tables(), tol(1e-12));
  CHECK_THROWS_AS(evaluate_series(ctx, {1.0, 0}, 0), DomainError);
  CHECK_THROWS_AS(evaluate_series(ctx, {2, 0}, 9), DomainError);
  try {
    evaluate_series(ctx, {1.05, 0}, 0);
    FAIL("expected nonconvergence");
  } catch (const NonconvergenceError& e) {
    CHECK(e.best_certificate() > 1e-12);
    CHECK(std::isfinite(e.best_certificate()));
  }
  CHECK_THROWS_AS(SeriesContext(MultiplicativeFunction::one(), 1.2, tables()), DomainError);
}

TEST_CASE("derivatives agree with finite differences") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> sig(1.3, 3.0), tt(-10, 10);
  const double h = 1e-4;
  for (int trial = 0; trial < 12; ++trial) {
    auto f = trial % 2 ? MultiplicativeFunction::random(trial) : MultiplicativeFunction::parse("chi7_2");
    SeriesContext ctx(f, 2, tables(), fixed(100000));
    ComplexPoint s{sig(rng), tt(rng)};
    for (unsigned k = 1; k <= 4; ++k) {
      auto hi = evaluate_series(ctx, {s.sigma + h, s.t}, k - 1).value;
      auto lo = evaluate_series(ctx, {s.sigma - h, s.t}, k - 1).value;
      auto fd = (hi - lo) / (2 * h);
      auto direct = evaluate_series(ctx, s, k).value;
      REQUIRE(std::abs(fd - direct) <= 1e-5 * std::abs(direct));
    }
  }
}

TEST_CASE("tail certificates are honest") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> sig(1.2, 2.5), tt(-20, 20);
  const char* names[] = {"one", "mu", "chi12_3", "chi7_1", "rand77", "mu*nit2"};
  for (const char* name : names) {
    auto f = MultiplicativeFunction::parse(name);
    for (double y : {1.5, 2.0, 7.0}) {
      for (int trial = 0; trial < 3; ++trial) {
        ComplexPoint s{sig(rng), tt(rng)};
        for (unsigned k : {0u, 2u}) {
          for (std::uint64_t N : {1000u, 20000u}) {
            auto a = evaluate_series(SeriesContext(f, y, tables(), fixed(N)), s, k);
            auto b = evaluate_series(SeriesContext(f, y, tables(), fixed(2 * N)), s, k);
            REQUIRE(std::abs(a.value - b.value) <= a.certificate);
          }
        }
      }
    }
  }
}

TEST_CASE("adaptive result is within its certificate of a deep reference") {
  for (const char* name : {"one", "chi5_1", "chi8_3", "chi15_0"}) {
    auto f = MultiplicativeFunction::parse(name);
    for (double y : {1.5, 3.0}) {
      ComplexPoint s{1.2, 4};
      auto a = evaluate_series(SeriesContext(f, y, tables(), tol(1e-4)), s, 1);
      auto ref = evaluate_series(SeriesContext(f, y, tables(), fixed(2000000)), s, 1);
      REQUIRE(std::abs(a.value - ref.value) <= a.certificate + ref.certificate);
    }
  }
}

TEST_CASE("factored character series agrees with direct sifted summation") {
  for (const char* name : {"chi5_1", "chi12_3", "chi7_0", "one"}) {
    auto f = MultiplicativeFunction::parse(name);
    for (double y : {2.0, 7.0, 20.0}) {
      for (ComplexPoint s : {ComplexPoint{1.3, 0.5}, ComplexPoint{2, -6}}) {
        for (unsigned k : {0u, 1u, 3u}) {
          SeriesOptions direct = fixed(2000000);
          direct.factor_characters = false;
          auto a = evaluate_series(SeriesContext(f, y, tables(), tol(1e-9)), s, k);
          auto b = evaluate_series(SeriesContext(f, y, tables(), direct), s, k);
          REQUIRE(std::abs(a.value - b.value) <= a.certificate + b.certificate);
          REQUIRE(a.certificate <= 1e-9);
        }
      }
    }
  }
}

TEST_CASE("Euler product agrees with the series") {
  for (const char* name : {"mu", "one", "chi7_1", "rand4", "mu*nit3"}) {
    auto f = MultiplicativeFunction::parse(name);
    for (double y : {2.0, 11.0}) {
      for (ComplexPoint s : {ComplexPoint{2, 0}, ComplexPoint{2.5, -3}, ComplexPoint{3, 7}}) {
        double cert = 0;
        double e = log_abs_euler_product(f, y, s, tables(), &cert);
        auto v = evaluate_series(SeriesContext(f, y, tables(), tol(1e-6)), s, 0);
        REQUIRE(std::abs(e - std::log(std::abs(v.value))) <= cert + 2 * v.certificate / std::abs(v.value) + 1e-10);
      }
    }
  }
}

TEST_CASE("partition identity") {
  CHECK(ordered_partition_count(1) == 1);
  CHECK(ordered_partition_count(3) == 4);
  CHECK(ordered_partition_count(20) == 524288);
  for (unsigned k = 1; k <= 20; ++k) {
    REQUIRE(ordered_partition_count(k) == (std::uint64_t{1} << (k - 1)));
    REQUIRE(oracle::compositions(k) == (std::uint64_t{1} << (k - 1)));
  }
  CHECK(ordered_partition_count(62) == (std::uint64_t{1} << 61));
  CHECK_THROWS_AS(ordered_partition_count(63), OverflowError);
  CHECK_THROWS_AS(ordered_partition_count(0), DomainError);

  // 5 = 1 + 2 + 2 in three orders.
  CHECK(composition_multiplicity({1, 2, 0, 0, 0}) == 3);
  std::uint64_t count = 0;
  for (const auto& a : partition_tuples(5)) {
    unsigned weight = 0;
    for (unsigned j = 0; j < a.size(); ++j) weight += (j + 1) * a[j];
    REQUIRE(weight == 5);
    ++count;
  }
  CHECK(count == 7);
}

TEST_CASE("faa_log_derivative profiles") {
  const cd F(0.7, -0.4);
  for (unsigned k = 1; k <= 8; ++k) {
    auto b = make_bundle(std::vector<cd>(k + 1, F));
    auto r = faa_log_derivative(b);
    CHECK(std::abs(r.value - (k == 1 ? cd(1) : cd(0))) < 1e-10);
  }
  for (unsigned k = 1; k <= 8; ++k) {
    std::vector<cd> v;
    double fact = 1;
    for (unsigned j = 0; j <= k; ++j) {
      if (j) fact *= j;
      v.push_back(fact);
    }
    auto r = faa_log_derivative(make_bundle(v));
    double expect = 1;
    for (unsigned j = 2; j < k; ++j) expect *= j;
    CHECK(r.value.real() == doctest::Approx(expect).epsilon(1e-12));
    CHECK(std::abs(r.value) <= r.bound);
  }
  CHECK_THROWS_AS(faa_log_derivative(make_bundle({cd(1e-13), cd(1), cd(2)})), ZeroDenominatorError);
  CHECK_THROWS_AS(faa_log_derivative(make_bundle({cd(1)})), DomainError);
}

TEST_CASE("faa_log_derivative against the quotient rule on series bundles") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> sig(1.1, 2.5), tt(-20, 20);
  for (const char* name : {"one", "chi5_1", "chi12_3", "rand9", "mu*nit1"}) {
    auto f = MultiplicativeFunction::parse(name);
    SeriesContext ctx(f, 2, tables(), fixed(50000));
    for (int trial = 0; trial < 8; ++trial) {
      ComplexPoint s{sig(rng), tt(rng)};
      auto bundle = evaluate_bundle(ctx, s, 5);
      auto G = quotient_rule(bundle.values);
      for (unsigned k = 1; k <= 5; ++k) {
        std::vector<cd> sub(bundle.values.begin(), bundle.values.begin() + k + 1);
        auto r = faa_log_derivative(make_bundle(sub));
        REQUIRE(std::abs(r.value - G[k - 1]) <= 1e-8 * std::max(1.0, std::abs(G[k - 1])));
        REQUIRE(std::abs(r.value) <= r.bound);
      }
    }
  }
}

TEST_CASE("l1 residuals") {
  auto one = MultiplicativeFunction::one();
  auto r0 = l1_residual(one, 1e4, {1e4}, {0}, tables());
  REQUIRE(r0.rows.size() == 1);
  CHECK(r0.rows[0].prime_sum == 0.0);
  CHECK(std::isfinite(r0.rows[0].residual));

  auto mu = l1_residual(MultiplicativeFunction::mobius(), 2, {1e4}, {0}, tables());
  CHECK(mu.sup_certified <= 3);

  auto chi = MultiplicativeFunction::character(build_group(5)->real_characters()[1]);
  auto rc = l1_residual(chi, 2, {1e5}, {0, 1, 5}, tables());
  CHECK(rc.rows.size() == 3);
  CHECK(rc.sup_certified <= 3);

  std::vector<double> xs{1e2, 1e3, 1e4, 1e5, 1e6};
  std::vector<double> ts{0, 0.1, -0.1, 1, -1, 5, -5, 20, -20};
  for (const char* name : {"mu", "one", "chi7_1", "rand5", "mu*nit2"}) {
    auto r = l1_residual(MultiplicativeFunction::parse(name), 2, xs, ts, tables());
    CHECK(r.sup_certified <= 3);
    std::vector<double> fine_x, fine_t{0, 0.05, -0.05, 0.1, 0.5, 1, 3, 5, 10, 20, -20};
    for (double e = 2; e <= 6; e += 0.5) fine_x.push_back(std::pow(10.0, e));
    auto fine = l1_residual(MultiplicativeFunction::parse(name), 2, fine_x, fine_t, tables());
    CHECK(fine.sup <= 2 * std::max(r.sup, 0.05));
  }
}

TEST_CASE("lchil monitors") {
  auto principal = build_group(1)->principal();
  MonitorGrid single{{1.5}, {0}};
  MonitorOptions o;
  o.y = 1.5;
  auto p = monitor_lchil1(principal, single, o, tables());
  REQUIRE(p.rows.size() == 1);
  // zeta(1.5) - 1/(0.5) = 2.612375348685488 - 2
  CHECK(p.rows[0].lhs == doctest::Approx(0.612375348685488343).epsilon(1e-8));

  auto g5 = build_group(5);
  MonitorGrid point{{1.01}, {0.5}};
  for (std::uint64_t i = 1; i < 4; ++i) {
    auto r = monitor_lchil2(g5->character(i), point, MonitorOptions{}, tables());
    REQUIRE(r.rows.size() == 1);
    CHECK(r.rows[0].lhs > 0.1);
    CHECK(r.rows[0].lhs < 10);
    CHECK(r.rows[0].certificate < 1e-3);
  }

  auto chi3 = build_group(3)->real_characters()[1];
  MonitorGrid near_one{MonitorGrid::coarse().sigmas, {0, 0.1, -0.1}};
  auto siegel = monitor_lchil2(chi3, near_one, MonitorOptions{}, tables());
  REQUIRE(!siegel.rows.empty());
  for (const auto& row : siegel.rows)
    if (row.rhs != 1) CHECK(row.ratio >= 0.5);

  for (auto chi : {g5->character(1), g5->character(2), principal}) {
    for (unsigned k : {0u, 1u, 2u}) {
      MonitorOptions mo;
      mo.k = k;
      auto coarse = monitor_lchil1(chi, MonitorGrid::coarse(), mo, tables());
      auto fine = monitor_lchil1(chi, MonitorGrid::refined(), mo, tables());
      CHECK(coarse.finite);
      CHECK(fine.sup_ratio <= 2 * coarse.sup_ratio);
      if (k >= 1) {
        auto c3 = monitor_lchil3(chi, MonitorGrid::coarse(), mo, tables());
        auto f3 = monitor_lchil3(chi, MonitorGrid::refined(), mo, tables());
        CHECK(c3.finite);
        CHECK(f3.sup_ratio <= 2 * c3.sup_ratio);
      }
    }
  }
}
