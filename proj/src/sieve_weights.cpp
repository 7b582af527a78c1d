#include "pntap/sieve_weights.hpp"

#include <algorithm>
#include <cmath>

#include "pntap/error.hpp"
#include "pntap/parallel.hpp"

namespace pntap {

namespace {

constexpr std::uint64_t kBlock = std::uint64_t{1} << 16;
constexpr std::size_t kMaxSupport = std::size_t{1} << 24;

void enumerate(const std::vector<std::uint64_t>& primes, std::size_t start, std::uint64_t d, int mu, unsigned depth,
               std::uint64_t level, std::vector<SieveTerm>& out) {
  if (out.size() >= kMaxSupport) throw CapacityError("sieve weight support too large");
  out.push_back({d, mu});
  if (depth == 0) return;
  for (std::size_t i = start; i < primes.size(); ++i) {
    if (d > level / primes[i]) break;
    enumerate(primes, i + 1, d * primes[i], -mu, depth - 1, level, out);
  }
}

std::vector<SieveTerm> family(const std::vector<std::uint64_t>& primes, unsigned depth, std::uint64_t level) {
  std::vector<SieveTerm> out;
  enumerate(primes, 0, 1, 1, depth, level, out);
  std::sort(out.begin(), out.end(), [](const SieveTerm& a, const SieveTerm& b) { return a.d < b.d; });
  return out;
}

} // namespace

int SieveWeights::weight(int sign, std::uint64_t d) const {
  const auto& t = terms(sign);
  auto it = std::lower_bound(t.begin(), t.end(), d, [](const SieveTerm& a, std::uint64_t v) { return a.d < v; });
  return it != t.end() && it->d == d ? it->value : 0;
}

SieveWeights build_weights(double y, double u, const ArithmeticTables& tables) {
  if (!(y >= 2)) throw DomainError("sieve weights need y >= 2");
  if (!(u >= 2)) throw DomainError("sieve weights need u >= 2");
  SieveWeights w;
  w.y = y;
  w.u = u;
  w.D = std::pow(y, u);
  if (!(y <= static_cast<double>(tables.limit()))) throw RangeError("sifting limit y beyond table limit");
  if (!(w.D < 0x1p63)) throw RangeError("sieve level y^u does not fit 64 bits");
  auto level = static_cast<std::uint64_t>(std::floor(w.D * (1 + 1e-12)));
  for (auto p : tables.primes_in(1, y)) w.primes.push_back(p);

  w.m = std::max(1u, static_cast<unsigned>(std::floor(u / 2)));
  w.plus_depth = 2 * w.m;
  w.minus_depth = 2 * w.m - 1;

  w.lambda_plus = family(w.primes, w.plus_depth, level);
  w.lambda_minus = family(w.primes, w.minus_depth, level);
  return w;
}

std::vector<int> convolve_with_one(const SieveWeights& w, int sign, std::uint64_t nmax) {
  std::vector<int> out(nmax + 1, 0);
  const auto& terms = w.terms(sign);
  std::uint64_t blocks = (nmax + kBlock - 1) / kBlock;
  parallel_for(blocks, [&](std::size_t b) {
    std::uint64_t lo = 1 + b * kBlock, hi = std::min(nmax, lo + kBlock - 1);
    for (const auto& t : terms) {
      if (t.d > hi) break;
      for (std::uint64_t n = (lo + t.d - 1) / t.d * t.d; n <= hi; n += t.d) out[n] += t.value;
    }
  });
  return out;
}

SandwichReport sandwich_check(const SieveWeights& w, std::uint64_t nmax, const ArithmeticTables& tables) {
  if (nmax > tables.limit()) throw RangeError("sandwich check beyond table limit");
  auto plus = convolve_with_one(w, +1, nmax);
  auto minus = convolve_with_one(w, -1, nmax);
  SandwichReport r;
  r.nmax = nmax;
  for (std::uint64_t n = 1; n <= nmax; ++n) {
    int sifted = tables.is_sifted(n, w.y) ? 1 : 0;
    r.sifted += sifted;
    r.min_minus = std::min(r.min_minus, minus[n]);
    r.max_plus = std::max(r.max_plus, plus[n]);
    bool bad = minus[n] > sifted || plus[n] < sifted || (sifted && (minus[n] != 1 || plus[n] != 1));
    if (bad) {
      ++r.violations;
      if (!r.first_violation) r.first_violation = n;
    }
  }
  return r;
}

SieveMeanValue mean_value(const SieveWeights& w, const std::function<double(std::uint64_t)>& g, int sign) {
  std::vector<double> gp;
  SieveMeanValue r;
  r.product = 1;
  for (auto p : w.primes) {
    double v = g(p);
    if (!(v >= 0 && v <= 1)) throw DomainError("sieve density g(p) outside [0, 1]");
    gp.push_back(v);
    r.product *= 1 - v / static_cast<double>(p);
  }
  compensated_sum<double> s;
  for (const auto& t : w.terms(sign)) {
    double term = t.value;
    std::uint64_t d = t.d;
    for (std::size_t i = 0; i < w.primes.size() && d > 1; ++i) {
      if (d % w.primes[i] == 0) {
        term *= gp[i] / static_cast<double>(w.primes[i]);
        d /= w.primes[i];
      }
    }
    s += term;
  }
  r.sum = s.get();
  r.ratio = r.sum / r.product;
  r.deviation = std::abs(r.ratio - 1);
  r.e_minus_u = std::exp(-w.u);
  r.fitted_c = r.deviation / r.e_minus_u;
  return r;
}

} // namespace pntap
