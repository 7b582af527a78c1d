#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "pntap/error.hpp"

namespace pntap {

// P^-(1) = infinity is stored as this sentinel, so "P^-(n) > y" holds for n = 1.
inline constexpr std::uint32_t kInfinitePrime = std::numeric_limits<std::uint32_t>::max();

// A prime power p^k. Used both for factorizations and for the symbolic value
// of the von Mangoldt function, Lambda(p^k) = log p.
struct PrimePower {
  std::uint64_t p = 0;
  unsigned k = 0;
  bool operator==(const PrimePower&) const = default;
};

struct Factorization {
  std::uint64_t n = 1;
  std::vector<PrimePower> factors; // primes strictly increasing
};

// Trial-division factorization for integers not covered by a table.
Factorization factorize(std::uint64_t n);

struct TableOptions {
  std::uint64_t segment_size = std::uint64_t{1} << 20;
  std::uint64_t memory_budget = std::uint64_t{4} << 30; // bytes
};

/// Sieved arithmetic functions on [1, limit].
///
/// Per-n storage is P^-(n), P^+(n), mu(n), phi(n) and the exponent k when n is
/// a prime power p^k (zero otherwise); the prime p of a prime power is P^-(n),
/// so Lambda(n) stays symbolic until log p is needed. Immutable after
/// construction and safe to share between threads.
class ArithmeticTables {
public:
  ArithmeticTables() = default;

  std::uint64_t limit() const { return limit_; }

  int mobius(std::uint64_t n) const { return mobius_[check(n)]; }
  std::uint32_t totient(std::uint64_t n) const { return totient_[check(n)]; }
  // kInfinitePrime for n = 1.
  std::uint32_t smallest_prime_factor(std::uint64_t n) const { return spf_[check(n)]; }
  // 1 for n = 1.
  std::uint32_t greatest_prime_factor(std::uint64_t n) const { return gpf_[check(n)]; }

  std::optional<PrimePower> mangoldt(std::uint64_t n) const {
    unsigned k = prime_power_exponent_[check(n)];
    if (k == 0) return std::nullopt;
    return PrimePower{spf_[n], k};
  }
  double mangoldt_value(std::uint64_t n) const;

  bool is_prime(std::uint64_t n) const { return prime_power_exponent_[check(n)] == 1 && spf_[n] == n; }
  // P^-(n) > y
  bool is_sifted(std::uint64_t n, double y) const {
    std::uint32_t p = spf_[check(n)];
    return p == kInfinitePrime || static_cast<double>(p) > y;
  }

  // All primes <= limit in increasing order.
  std::span<const std::uint32_t> primes() const { return primes_; }
  // Primes in (lo, hi], clipped to the table.
  std::span<const std::uint32_t> primes_in(double lo, double hi) const;

  Factorization factorize(std::uint64_t n) const;

  void save(const std::filesystem::path& path) const;
  static ArithmeticTables load(const std::filesystem::path& path);

  static constexpr std::uint64_t bytes_per_entry = 14;

private:
  friend ArithmeticTables build_tables(std::uint64_t, const TableOptions&);

  std::uint64_t check(std::uint64_t n) const {
    if (n == 0 || n > limit_) throw RangeError("argument outside arithmetic table range");
    return n;
  }
  void collect_primes();

  std::uint64_t limit_ = 0;
  std::vector<std::uint32_t> spf_;
  std::vector<std::uint32_t> gpf_;
  std::vector<std::uint32_t> totient_;
  std::vector<std::int8_t> mobius_;
  std::vector<std::uint8_t> prime_power_exponent_;
  std::vector<std::uint32_t> primes_;
};

// Segmented sieve of Eratosthenes recording the full factor structure.
// Throws CapacityError when the tables would exceed the memory budget or
// when limit does not fit the 32-bit per-entry storage.
ArithmeticTables build_tables(std::uint64_t limit, const TableOptions& options = {});

// Either loads a cached table of at least `limit` entries from `cache`, or
// builds one and writes it there. An empty path disables caching.
ArithmeticTables load_or_build_tables(std::uint64_t limit, const std::filesystem::path& cache,
                                      const TableOptions& options = {});

// r-fold divisor function prod C(e_i + r - 1, r - 1). Throws OverflowError if
// the value does not fit 64 bits.
std::uint64_t tau_r(std::uint64_t n, unsigned r);
std::uint64_t tau_r(const Factorization& f, unsigned r);
// Same quantity in binary64; saturates to +inf instead of throwing.
double tau_r_approx(std::uint64_t n, unsigned r);

// psi(x) = sum_{p^k <= x} log p.
double chebyshev_psi(double x, const ArithmeticTables& tables);
// theta(u) = sum_{p <= u} log p.
double theta_sum(double u, const ArithmeticTables& tables);

// (f*g)(n) = sum_{ab=n} f(a) g(b). Arrays are indexed by n, so element 0 is
// ignored and the result has the same length as the inputs.
template <typename T>
std::vector<T> dirichlet_convolve(std::span<const T> f, std::span<const T> g) {
  if (f.size() != g.size()) throw DomainError("dirichlet_convolve: arrays differ in length");
  std::vector<T> h(f.size(), T{});
  const std::size_t n_max = f.size() == 0 ? 0 : f.size() - 1;
  for (std::size_t a = 1; a <= n_max; ++a) {
    if (f[a] == T{}) continue;
    for (std::size_t b = 1, n = a; n <= n_max; ++b, n += a) h[n] += f[a] * g[b];
  }
  return h;
}

template <typename T>
std::vector<T> dirichlet_convolve(const std::vector<T>& f, const std::vector<T>& g) {
  return dirichlet_convolve(std::span<const T>(f), std::span<const T>(g));
}

} // namespace pntap
