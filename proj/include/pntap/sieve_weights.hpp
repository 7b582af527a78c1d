#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "pntap/arith.hpp"

namespace pntap {

struct SieveTerm {
  std::uint64_t d = 1;
  int value = 1; // mu(d)
};

/// Brun-truncated sieve weights of level D = y^u for sifting by primes <= y.
///
/// lambda^+(d) = mu(d) on squarefree y-smooth d <= D with omega(d) <= plus_depth,
/// lambda^-(d) = mu(d) with omega(d) <= minus_depth, where the depths are 2m
/// and 2m - 1 with m = max(1, floor(u/2)). Since 2m <= u every such d is at
/// most y^{2m} <= D, so the level cut never removes a term.
struct SieveWeights {
  double y = 2;
  double u = 2;
  double D = 4;
  unsigned m = 1;
  unsigned plus_depth = 2;
  unsigned minus_depth = 1;
  std::vector<std::uint64_t> primes; // primes <= y
  std::vector<SieveTerm> lambda_plus;  // sorted by d
  std::vector<SieveTerm> lambda_minus; // sorted by d

  const std::vector<SieveTerm>& terms(int sign) const { return sign > 0 ? lambda_plus : lambda_minus; }
  // lambda^{sign}(d), 0 off the support.
  int weight(int sign, std::uint64_t d) const;
};

// Throws DomainError unless y >= 2 and u >= 2, RangeError when y exceeds the table,
// CapacityError when a support would exceed 2^24 terms.
SieveWeights build_weights(double y, double u, const ArithmeticTables& tables);

// (lambda^{sign} * 1)(n) for n = 0..nmax (entry 0 unused).
std::vector<int> convolve_with_one(const SieveWeights& w, int sign, std::uint64_t nmax);

struct SandwichReport {
  std::uint64_t nmax = 0;
  std::uint64_t sifted = 0;     // #{n <= nmax : P^-(n) > y}
  std::uint64_t violations = 0; // n failing lambda^- * 1 <= [P^-(n) > y] <= lambda^+ * 1, or equality on sifted n
  std::optional<std::uint64_t> first_violation;
  int min_minus = 0;
  int max_plus = 0;
  bool ok() const { return violations == 0; }
};

SandwichReport sandwich_check(const SieveWeights& w, std::uint64_t nmax, const ArithmeticTables& tables);

struct SieveMeanValue {
  double sum = 0;       // sum_d lambda(d) g(d) / d
  double product = 0;   // prod_{p <= y} (1 - g(p)/p)
  double ratio = 0;     // sum / product
  double deviation = 0; // |ratio - 1|
  double e_minus_u = 0; // e^{-u}
  double fitted_c = 0;  // deviation / e^{-u}
};

// g is evaluated at primes <= y and extended multiplicatively to squarefree d.
// Throws DomainError if some g(p) lies outside [0, 1].
SieveMeanValue mean_value(const SieveWeights& w, const std::function<double(std::uint64_t)>& g, int sign);

} // namespace pntap
