#include "pntap/expsums.hpp"

#include <cmath>

#include "pntap/dirichlet_series.hpp"
#include "pntap/error.hpp"
#include "pntap/parallel.hpp"

namespace pntap {

namespace {

constexpr std::uint64_t kBlock = std::uint64_t{1} << 16;

} // namespace

std::complex<double> block_exp_sum(std::uint64_t lo, std::uint64_t hi, double u, double t) {
  return block_sum<std::complex<double>>(lo, hi, kBlock, [&](std::uint64_t a, std::uint64_t b) {
    compensated_sum<std::complex<double>> s;
    for (std::uint64_t n = a + 1; n <= b; ++n) s += std::polar(1.0, t * std::log(static_cast<double>(n) + u));
    return s.get();
  });
}

double nit_ceiling(double N, double t) {
  const double lt = std::log(std::abs(t));
  const double lN = std::log(N);
  return N * std::exp(-lN * lN * lN / (66852 * lt * lt));
}

bool phase_precision_warning(double n_max, double t) {
  const double l = std::log(n_max);
  const double ulp = std::nextafter(l, INFINITY) - l;
  return std::abs(t) * ulp > 1e-6;
}

ExpSumResult dyadic_exp_sum(const ExpSumQuery& q) {
  if (!(q.u >= 0 && q.u <= 1)) throw DomainError("dyadic_exp_sum needs 0 <= u <= 1");
  if (q.N < 2 || !(static_cast<double>(q.N) <= q.t * q.t)) throw DomainError("dyadic_exp_sum needs 2 <= N <= t^2");
  ExpSumResult r;
  r.value = block_exp_sum(q.N, 2 * q.N, q.u, q.t);
  r.ceiling = nit_ceiling(static_cast<double>(q.N), q.t);
  r.phase_warning = phase_precision_warning(2.0 * static_cast<double>(q.N) + q.u, q.t);
  return r;
}

std::complex<double> prefix_exp_sum(std::uint64_t N, double u, double t) {
  if (N < 1) throw DomainError("prefix_exp_sum needs N >= 1");
  const auto M = static_cast<std::uint64_t>(std::floor(static_cast<double>(N) - u));
  compensated_sum<std::complex<double>> s;
  for (std::uint64_t n = 1; n <= M; ++n) s += std::polar(1.0, t * std::log(static_cast<double>(n) + u));
  return s.get();
}

std::complex<double> prefix_exp_sum_dyadic(std::uint64_t N, double u, double t) {
  if (N < 1) throw DomainError("prefix_exp_sum needs N >= 1");
  std::uint64_t hi = static_cast<std::uint64_t>(std::floor(static_cast<double>(N) - u));
  compensated_sum<std::complex<double>> s;
  while (hi > 0) {
    std::uint64_t lo = hi / 2;
    s += block_exp_sum(lo, hi, u, t);
    hi = lo;
  }
  return s.get();
}

std::uint64_t sifted_count(std::uint64_t q, double x, double y, const ArithmeticTables& tables) {
  if (x > static_cast<double>(tables.limit())) throw RangeError("x beyond table limit");
  const auto X = static_cast<std::uint64_t>(std::floor(x));
  std::uint64_t count = 0;
  for (std::uint64_t n = 1; n <= X; ++n)
    if (tables.is_sifted(n, y) && gcd_u64(n, q) == 1) ++count;
  return count;
}

SiftedCharacterSum sifted_character_sum(const DirichletCharacter& chi, double t, double x, double y,
                                        const ArithmeticTables& tables) {
  if (!(y >= 2)) throw DomainError("sifted_character_sum needs y >= 2");
  if (x > static_cast<double>(tables.limit())) throw RangeError("x beyond table limit");
  const std::uint64_t q = chi.modulus();
  const auto X = static_cast<std::uint64_t>(std::max(0.0, std::floor(x)));
  const auto values = chi.value_table();
  SiftedCharacterSum r;
  r.value = block_sum<std::complex<double>>(0, X, kBlock, [&](std::uint64_t a, std::uint64_t b) {
    compensated_sum<std::complex<double>> s;
    for (std::uint64_t n = a + 1; n <= b; ++n) {
      if (!tables.is_sifted(n, y)) continue;
      const auto c = values[n % q];
      if (c == 0.0) continue;
      s += t == 0 ? c : c * std::polar(1.0, t * std::log(static_cast<double>(n)));
    }
    return s.get();
  });
  if (chi.is_principal()) {
    double rho = static_cast<double>(euler_phi(q)) / static_cast<double>(q);
    for (std::uint32_t p : tables.primes_in(1, y))
      if (q % p) rho *= 1 - 1.0 / p;
    const std::complex<double> s1(1, t);
    r.main_term = rho * std::polar(x, t * std::log(x)) / s1;
  }
  r.discrepancy = std::abs(r.value - r.main_term);
  const double lx = std::log(x), ly = std::log(y);
  r.error_shape = (std::exp(lx * (1 - 1 / (30 * ly))) + std::exp(lx * (1 - 1 / (100 * std::log(vt(t)))))) / ly;
  r.ratio = r.discrepancy / r.error_shape;
  if (std::abs(t) > 1) {
    const double lt = std::log(std::abs(t));
    r.secondary_shape = x * std::exp(-lx * lx * lx / (185000 * lt * lt));
  }
  const double qd = static_cast<double>(q);
  r.hypothesis = x >= y && lx >= std::max(4 * std::log(qd), 100 * std::log(vt(t)));
  return r;
}

} // namespace pntap
