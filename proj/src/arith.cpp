#include "pntap/arith.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "pntap/kahan.hpp"
#include "pntap/parallel.hpp"

namespace pntap {

Factorization factorize(std::uint64_t n) {
  if (n == 0) throw DomainError("factorize: n must be positive");
  Factorization f{n, {}};
  auto take = [&](std::uint64_t p) {
    unsigned k = 0;
    while (n % p == 0) {
      n /= p;
      ++k;
    }
    if (k) f.factors.push_back({p, k});
  };
  take(2);
  take(3);
  for (std::uint64_t p = 5; p * p <= n; p += 6) {
    take(p);
    take(p + 2);
  }
  if (n > 1) f.factors.push_back({n, 1});
  return f;
}

double ArithmeticTables::mangoldt_value(std::uint64_t n) const {
  return prime_power_exponent_[check(n)] ? std::log(static_cast<double>(spf_[n])) : 0.0;
}

std::span<const std::uint32_t> ArithmeticTables::primes_in(double lo, double hi) const {
  auto first = std::upper_bound(primes_.begin(), primes_.end(), lo,
                                [](double v, std::uint32_t p) { return v < p; });
  auto last = std::upper_bound(primes_.begin(), primes_.end(), hi,
                               [](double v, std::uint32_t p) { return v < p; });
  if (last < first) last = first;
  return {first, last};
}

Factorization ArithmeticTables::factorize(std::uint64_t n) const {
  check(n);
  Factorization f{n, {}};
  while (n > 1) {
    std::uint32_t p = spf_[n];
    unsigned k = 0;
    while (n % p == 0) {
      n /= p;
      ++k;
    }
    f.factors.push_back({p, k});
  }
  return f;
}

void ArithmeticTables::collect_primes() {
  primes_.clear();
  for (std::uint64_t n = 2; n <= limit_; ++n)
    if (prime_power_exponent_[n] == 1 && spf_[n] == n) primes_.push_back(static_cast<std::uint32_t>(n));
}

namespace {

std::vector<std::uint32_t> simple_primes(std::uint64_t bound) {
  std::vector<bool> composite(bound + 1, false);
  std::vector<std::uint32_t> out;
  for (std::uint64_t i = 2; i <= bound; ++i) {
    if (composite[i]) continue;
    out.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= bound; j += i) composite[j] = true;
  }
  return out;
}

} // namespace

ArithmeticTables build_tables(std::uint64_t limit, const TableOptions& options) {
  if (limit < 1) throw DomainError("build_tables: limit must be at least 1");
  if (limit >= kInfinitePrime) throw CapacityError("build_tables: limit exceeds 32-bit entry storage");
  if (limit > options.memory_budget / ArithmeticTables::bytes_per_entry)
    throw CapacityError("build_tables: tables exceed the configured memory budget");
  if (options.segment_size == 0) throw DomainError("build_tables: segment size must be positive");

  ArithmeticTables t;
  t.limit_ = limit;
  t.spf_.assign(limit + 1, 0);
  t.gpf_.assign(limit + 1, 1);
  t.totient_.assign(limit + 1, 1);
  t.mobius_.assign(limit + 1, 1);
  t.prime_power_exponent_.assign(limit + 1, 0);
  t.spf_[0] = 0;
  t.spf_[1] = kInfinitePrime;
  t.totient_[0] = 0;
  t.mobius_[0] = 0;

  std::uint64_t root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(limit)));
  while (root * root > limit) --root;
  while ((root + 1) * (root + 1) <= limit) ++root;
  const auto base = simple_primes(root);

  const std::uint64_t seg = options.segment_size;
  const std::uint64_t segments = (limit + seg) / seg; // covers [0, limit]
  parallel_for(segments, [&](std::size_t s) {
    const std::uint64_t lo = std::max<std::uint64_t>(2, s * seg);
    const std::uint64_t hi = std::min<std::uint64_t>(limit + 1, (s + 1) * seg);
    if (lo >= hi) return;
    std::vector<std::uint32_t> rest(hi - lo);
    std::vector<std::uint8_t> distinct(hi - lo, 0);
    for (std::uint64_t n = lo; n < hi; ++n) rest[n - lo] = static_cast<std::uint32_t>(n);

    for (std::uint32_t p : base) {
      if (std::uint64_t{p} * p >= hi) break;
      for (std::uint64_t m = (lo + p - 1) / p * p; m < hi; m += p) {
        std::uint32_t& r = rest[m - lo];
        r /= p;
        unsigned e = 1;
        std::uint32_t pe = 1; // p^(e-1)
        while (r % p == 0) {
          r /= p;
          ++e;
          pe *= p;
        }
        if (t.spf_[m] == 0) t.spf_[m] = p;
        t.gpf_[m] = p;
        t.mobius_[m] = e > 1 ? 0 : static_cast<std::int8_t>(-t.mobius_[m]);
        t.totient_[m] *= pe * (p - 1);
        ++distinct[m - lo];
        t.prime_power_exponent_[m] = static_cast<std::uint8_t>(e);
      }
    }
    // What remains is 1 or a single prime exceeding sqrt(n).
    for (std::uint64_t n = lo; n < hi; ++n) {
      std::uint32_t r = rest[n - lo];
      if (r > 1) {
        if (t.spf_[n] == 0) t.spf_[n] = r;
        t.gpf_[n] = r;
        t.mobius_[n] = static_cast<std::int8_t>(-t.mobius_[n]);
        t.totient_[n] *= r - 1;
        ++distinct[n - lo];
        t.prime_power_exponent_[n] = 1;
      }
      if (distinct[n - lo] != 1) t.prime_power_exponent_[n] = 0;
    }
  });
  t.collect_primes();
  return t;
}

namespace {

constexpr char kMagic[8] = {'P', 'N', 'T', 'A', 'P', '1', 0, 0};
constexpr std::uint32_t kCacheVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "table cache is written in host order and assumes a little-endian host");

template <typename T>
void write_array(std::ofstream& out, const std::vector<T>& v) {
  out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(T)));
}

template <typename T>
void read_array(std::ifstream& in, std::vector<T>& v, std::uint64_t count) {
  v.resize(count);
  in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(count * sizeof(T)));
  if (!in) throw CacheError("table cache truncated");
}

} // namespace

void ArithmeticTables::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CacheError("cannot open table cache for writing: " + path.string());
  out.write(kMagic, sizeof kMagic);
  out.write(reinterpret_cast<const char*>(&kCacheVersion), sizeof kCacheVersion);
  std::uint32_t entry_bytes = bytes_per_entry;
  out.write(reinterpret_cast<const char*>(&entry_bytes), sizeof entry_bytes);
  out.write(reinterpret_cast<const char*>(&limit_), sizeof limit_);
  write_array(out, spf_);
  write_array(out, gpf_);
  write_array(out, totient_);
  write_array(out, mobius_);
  write_array(out, prime_power_exponent_);
  if (!out) throw CacheError("failed writing table cache: " + path.string());
}

ArithmeticTables ArithmeticTables::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CacheError("cannot open table cache: " + path.string());
  char magic[sizeof kMagic];
  std::uint32_t version = 0, entry_bytes = 0;
  std::uint64_t limit = 0;
  in.read(magic, sizeof magic);
  in.read(reinterpret_cast<char*>(&version), sizeof version);
  in.read(reinterpret_cast<char*>(&entry_bytes), sizeof entry_bytes);
  in.read(reinterpret_cast<char*>(&limit), sizeof limit);
  if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0) throw CacheError("not a PNTAP1 table cache");
  if (version != kCacheVersion || entry_bytes != bytes_per_entry)
    throw CacheError("unsupported table cache version");
  if (limit == 0 || limit >= kInfinitePrime) throw CacheError("corrupt table cache header");

  ArithmeticTables t;
  t.limit_ = limit;
  read_array(in, t.spf_, limit + 1);
  read_array(in, t.gpf_, limit + 1);
  read_array(in, t.totient_, limit + 1);
  read_array(in, t.mobius_, limit + 1);
  read_array(in, t.prime_power_exponent_, limit + 1);
  if (in.peek() != std::char_traits<char>::eof()) throw CacheError("trailing data in table cache");
  t.collect_primes();
  return t;
}

ArithmeticTables load_or_build_tables(std::uint64_t limit, const std::filesystem::path& cache,
                                      const TableOptions& options) {
  if (!cache.empty() && std::filesystem::exists(cache)) {
    auto t = ArithmeticTables::load(cache);
    if (t.limit() == limit) return t;
  }
  auto t = build_tables(limit, options);
  if (!cache.empty()) t.save(cache);
  return t;
}

std::uint64_t tau_r(const Factorization& f, unsigned r) {
  if (r == 0) throw DomainError("tau_r: r must be at least 1");
  unsigned __int128 total = 1;
  for (const auto& [p, e] : f.factors) {
    // C(e + r - 1, e), built incrementally so each step stays integral.
    unsigned __int128 c = 1;
    for (unsigned i = 1; i <= e; ++i) {
      c = c * (r - 1 + i) / i;
      if (c > std::numeric_limits<std::uint64_t>::max()) throw OverflowError("tau_r: value exceeds 64 bits");
    }
    total *= c;
    if (total > std::numeric_limits<std::uint64_t>::max()) throw OverflowError("tau_r: value exceeds 64 bits");
  }
  return static_cast<std::uint64_t>(total);
}

std::uint64_t tau_r(std::uint64_t n, unsigned r) { return tau_r(factorize(n), r); }

double tau_r_approx(std::uint64_t n, unsigned r) {
  if (r == 0) throw DomainError("tau_r: r must be at least 1");
  double total = 1.0;
  for (const auto& [p, e] : factorize(n).factors) {
    double c = 1.0;
    for (unsigned i = 1; i <= e; ++i) c = c * (r - 1.0 + i) / i;
    total *= c;
  }
  return total;
}

double chebyshev_psi(double x, const ArithmeticTables& tables) {
  if (x > static_cast<double>(tables.limit())) throw RangeError("chebyshev_psi: x beyond table limit");
  if (x < 2) return 0.0;
  const auto top = static_cast<std::uint64_t>(std::floor(x));
  compensated_sum<double> sum;
  for (std::uint32_t p : tables.primes_in(1, x)) {
    unsigned k = 0;
    for (std::uint64_t pk = p; pk <= top; pk *= p) ++k;
    sum += k * std::log(static_cast<double>(p));
  }
  return sum.get();
}

double theta_sum(double u, const ArithmeticTables& tables) {
  if (u > static_cast<double>(tables.limit())) throw RangeError("theta_sum: u beyond table limit");
  compensated_sum<double> sum;
  for (std::uint32_t p : tables.primes_in(1, u)) sum += std::log(static_cast<double>(p));
  return sum.get();
}

} // namespace pntap
