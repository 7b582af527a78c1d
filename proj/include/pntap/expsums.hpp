#pragma once

#include <complex>
#include <cstdint>

#include "pntap/arith.hpp"
#include "pntap/characters.hpp"

namespace pntap {

struct ExpSumQuery {
  std::uint64_t N = 2;
  double u = 0;
  double t = 0;
};

struct ExpSumResult {
  std::complex<double> value;
  // N exp(-(log N)^3 / (66852 (log|t|)^2))
  double ceiling = 0;
  // |t| ulp(log n) exceeded 1e-6 radians somewhere in the range.
  bool phase_warning = false;
};

// sum_{lo < n <= hi} (n + u)^{it}, with (n+u)^{it} = e^{it log(n+u)}.
std::complex<double> block_exp_sum(std::uint64_t lo, std::uint64_t hi, double u, double t);

// sum_{N < n <= 2N} (n + u)^{it}. Throws DomainError unless 2 <= N <= t^2 and 0 <= u <= 1.
ExpSumResult dyadic_exp_sum(const ExpSumQuery& q);

double nit_ceiling(double N, double t);
bool phase_precision_warning(double n_max, double t);

// sum_{n <= N - u} (n + u)^{it}, summed directly in increasing n.
std::complex<double> prefix_exp_sum(std::uint64_t N, double u, double t);
// The same sum recombined from dyadic blocks (M/2^{j+1}, M/2^j], M = floor(N - u).
std::complex<double> prefix_exp_sum_dyadic(std::uint64_t N, double u, double t);

struct SiftedCharacterSum {
  std::complex<double> value;      // sum_{n <= x, P^-(n) > y} chi(n) n^{it}
  std::complex<double> main_term;  // delta phi(q)/q x^{1+it}/(1+it) prod_{p <= y, p !| q} (1 - 1/p)
  double discrepancy = 0;          // |value - main_term|
  double error_shape = 0;          // (x^{1-1/(30 log y)} + x^{1-1/(100 log V_t)}) / log y
  double ratio = 0;                // discrepancy / error_shape
  double secondary_shape = 0;      // x exp(-(log x)^3 / (185000 (log|t|)^2)), 0 when |t| <= 1
  bool hypothesis = false;         // x >= y >= 2 and x >= max(q^4, V_t^100)
};

SiftedCharacterSum sifted_character_sum(const DirichletCharacter& chi, double t, double x, double y,
                                        const ArithmeticTables& tables);

// #{n <= x : P^-(n) > y, gcd(n, q) = 1}
std::uint64_t sifted_count(std::uint64_t q, double x, double y, const ArithmeticTables& tables);

} // namespace pntap
