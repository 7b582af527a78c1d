#include "pntap/dirichlet_series.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "pntap/error.hpp"
#include "pntap/kahan.hpp"
#include "pntap/parallel.hpp"

namespace pntap {

namespace {

constexpr unsigned kMaxOrder = 8;
constexpr std::uint64_t kBlock = std::uint64_t{1} << 16;
constexpr double kInf = std::numeric_limits<double>::infinity();

// int_N^inf (log u)^m u^{-z} du for Re z > 1, via v = log u and m integrations by parts.
template <typename Z>
Z tail_integral(unsigned m, double log_n, Z z) {
  const Z w = z - 1.0;
  // sum_{i=0}^m m!/(m-i)! L^{m-i} w^{-(i+1)}
  Z sum = 0;
  Z term = 1.0 / w;
  double falling = 1;
  for (unsigned i = 0; i <= m; ++i) {
    sum += falling * std::pow(log_n, static_cast<double>(m - i)) * term;
    falling *= static_cast<double>(m - i);
    term /= w;
  }
  return std::exp(-w * log_n) * sum;
}

double real_tail_integral(unsigned m, double log_n, double z) {
  if (!(z > 1)) return kInf;
  return tail_integral<double>(m, log_n, z);
}

// max_{u >= N} (log u)^m u^{-sigma}
double max_term(unsigned m, double log_n, double sigma) {
  double v = std::max(log_n, static_cast<double>(m) / sigma);
  return std::exp(m * std::log(v) - sigma * v);
}

double factorial(unsigned n) {
  double f = 1;
  for (unsigned i = 2; i <= n; ++i) f *= i;
  return f;
}

using Sums = std::vector<compensated_sum<std::complex<double>>>;

// Adds sum_{lo < n <= hi} (-log n)^j a(n) n^{-s} to acc[j] for j = 0..k.
void accumulate(const SeriesContext& ctx, std::complex<double> s, unsigned k, std::uint64_t lo, std::uint64_t hi,
                Sums& acc) {
  if (hi <= lo) return;
  const std::uint64_t blocks = (hi - lo + kBlock - 1) / kBlock;
  std::vector<std::vector<std::complex<double>>> partial(blocks);
  parallel_for(blocks, [&](std::size_t b) {
    const std::uint64_t first = lo + b * kBlock + 1;
    const std::uint64_t last = std::min(hi, lo + (b + 1) * kBlock);
    Sums local(k + 1);
    for (std::uint64_t n = first; n <= last; ++n) {
      auto c = ctx.coefficient(n);
      if (c == 0.0) continue;
      const double L = std::log(static_cast<double>(n));
      std::complex<double> term = c * std::polar(std::exp(-s.real() * L), -s.imag() * L);
      for (unsigned j = 0; j <= k; ++j) {
        local[j] += term;
        term *= -L;
      }
    }
    partial[b].resize(k + 1);
    for (unsigned j = 0; j <= k; ++j) partial[b][j] = local[j].get();
  });
  for (const auto& p : partial)
    for (unsigned j = 0; j <= k; ++j) acc[j] += p[j];
}

struct Tail {
  std::complex<double> main;
  double certificate;
};

Tail tail_estimate(const SeriesContext& ctx, std::complex<double> s, unsigned j, std::uint64_t N) {
  const double L = std::log(static_cast<double>(N));
  const double sigma = s.real();
  double crude = sigma > 1 ? real_tail_integral(j, L, sigma) + max_term(j, L, sigma) : kInf;
  if (!ctx.has_character_tail()) return {0.0, crude};
  if (ctx.periodic_remainder()) {
    // Second-order partial summation: T = rho int g + (c - E(N)) g(N) - int_N^inf Q g''
    // with Q(u) = int_N^u (E - c) bounded.
    const double as = std::abs(s), as1 = std::abs(s + 1.0);
    double curvature = as * as1 * real_tail_integral(j, L, sigma + 2);
    if (j >= 1) curvature += j * (2 * as + 1) * real_tail_integral(j - 1, L, sigma + 2);
    if (j >= 2) curvature += j * (j - 1.0) * real_tail_integral(j - 2, L, sigma + 2);
    double second = ctx.remainder_integral_bound() * curvature;
    if (second <= crude) {
      std::complex<double> gN = std::pow(-L, static_cast<double>(j)) * std::polar(std::exp(-sigma * L), -s.imag() * L);
      std::complex<double> main = (ctx.remainder_mean() - ctx.remainder_at(N)) * gN;
      if (ctx.main_density() > 0) {
        auto m = ctx.main_density() * tail_integral<std::complex<double>>(j, L, s);
        main += j % 2 ? -m : m;
      }
      return {main, second};
    }
    return {0.0, crude};
  }
  // Partial summation against A(u) = rho u + E(u), |E| <= B.
  double edge = std::exp(j * std::log(L) - sigma * L);
  double slope = std::abs(s) * real_tail_integral(j, L, sigma + 1);
  if (j > 0) slope += j * real_tail_integral(j - 1, L, sigma + 1);
  double character = ctx.partial_sum_bound() * (edge + slope);
  if (character <= crude) {
    std::complex<double> main = 0;
    if (ctx.main_density() > 0) {
      main = ctx.main_density() * tail_integral<std::complex<double>>(j, L, s);
      if (j % 2) main = -main;
    }
    return {main, character};
  }
  return {0.0, crude};
}

void check_point(const SeriesContext& ctx, ComplexPoint s, unsigned k) {
  if (k > kMaxOrder) throw DomainError("derivative order above 8");
  if (!std::isfinite(s.sigma) || !std::isfinite(s.t)) throw DomainError("non-finite s");
  bool ok = s.sigma > 1 || (s.sigma == 1 && ctx.has_character_tail() && ctx.main_density() == 0);
  if (!ok) throw DomainError("series evaluation needs sigma > 1");
}

DerivativeBundle evaluate(const SeriesContext& ctx, ComplexPoint point, unsigned k);

// Jets (value and first k derivatives) multiply by the Leibniz rule.
std::vector<std::complex<double>> leibniz(const std::vector<std::complex<double>>& u,
                                          const std::vector<std::complex<double>>& v) {
  std::vector<std::complex<double>> w(u.size(), 0.0);
  for (std::size_t m = 0; m < u.size(); ++m) {
    double binom = 1;
    for (std::size_t i = 0; i <= m; ++i) {
      w[m] += binom * u[i] * v[m - i];
      binom = binom * static_cast<double>(m - i) / static_cast<double>(i + 1);
    }
  }
  return w;
}

DerivativeBundle evaluate_factored(const SeriesContext& ctx, ComplexPoint point, unsigned k) {
  const auto& chi = *ctx.character();
  const std::uint64_t q = chi.modulus();
  std::vector<std::complex<double>> e(k + 1, 0.0), factor(k + 1);
  e[0] = 1;
  for (std::uint32_t p : ctx.tables().primes_in(1, ctx.y())) {
    if (q % p == 0) continue;
    const double lp = std::log(static_cast<double>(p));
    const auto c = chi(p) * std::polar(std::exp(-point.sigma * lp), -point.t * lp);
    factor[0] = 1.0 - c;
    std::complex<double> d = -c;
    for (unsigned j = 1; j <= k; ++j) {
      d *= -lp;
      factor[j] = d;
    }
    e = leibniz(e, factor);
  }
  // cert_m <= sum_j C(m, j) |e_{m-j}| cert_j(L)
  std::vector<double> weight(k + 1, 0.0);
  for (unsigned m = 0; m <= k; ++m) {
    double binom = 1;
    for (unsigned j = 0; j <= m; ++j) {
      weight[m] += binom * std::abs(e[m - j]);
      binom = binom * (m - j) / (j + 1);
    }
  }
  SeriesOptions o = ctx.options();
  o.tolerance /= std::max(1.0, *std::max_element(weight.begin(), weight.end()));
  SeriesContext full(ctx.function(), 1.5, ctx.tables(), o);
  auto L = evaluate(full, point, k);
  DerivativeBundle out;
  out.k = k;
  out.cutoff = L.cutoff;
  out.values = leibniz(e, L.values);
  out.certificates.assign(k + 1, 0.0);
  for (unsigned m = 0; m <= k; ++m) {
    double binom = 1;
    for (unsigned j = 0; j <= m; ++j) {
      out.certificates[m] += binom * std::abs(e[m - j]) * L.certificates[j];
      binom = binom * (m - j) / (j + 1);
    }
  }
  out.M = make_bundle(out.values).M;
  return out;
}

DerivativeBundle evaluate(const SeriesContext& ctx, ComplexPoint point, unsigned k) {
  check_point(ctx, point, k);
  if (ctx.factored()) return evaluate_factored(ctx, point, k);
  const auto s = point.s();
  const auto& opt = ctx.options();
  Sums acc(k + 1);
  std::uint64_t N = opt.cutoff ? std::min(*opt.cutoff, ctx.max_cutoff())
                               : std::min(std::max<std::uint64_t>(opt.initial_cutoff, 1), ctx.max_cutoff());
  if (opt.cutoff && *opt.cutoff > ctx.max_cutoff()) throw RangeError("cutoff beyond table limit");
  accumulate(ctx, s, k, 0, N, acc);
  std::vector<Tail> tails(k + 1);
  auto worst = [&] {
    double w = 0;
    for (unsigned j = 0; j <= k; ++j) {
      tails[j] = tail_estimate(ctx, s, j, N);
      w = std::max(w, tails[j].certificate);
    }
    return w;
  };
  double cert = worst();
  if (!opt.cutoff) {
    while (!(cert <= opt.tolerance) && N < ctx.max_cutoff()) {
      std::uint64_t next = std::min(2 * N, ctx.max_cutoff());
      accumulate(ctx, s, k, N, next, acc);
      N = next;
      cert = worst();
    }
    if (!(cert <= opt.tolerance) && !opt.allow_partial)
      throw NonconvergenceError("series tolerance not reachable within the table limit", cert);
  }
  DerivativeBundle out;
  out.k = k;
  out.cutoff = N;
  for (unsigned j = 0; j <= k; ++j) {
    out.values.push_back(acc[j].get() + tails[j].main);
    out.certificates.push_back(tails[j].certificate);
  }
  out.M = make_bundle(out.values).M;
  return out;
}

template <typename Fn>
void for_each_partition_tuple(unsigned k, Fn&& fn) {
  std::vector<unsigned> a(k + 1, 0); // a[j], j = 1..k
  std::function<void(unsigned, unsigned)> rec = [&](unsigned j, unsigned remaining) {
    if (j == 0) {
      if (remaining == 0) fn(a);
      return;
    }
    for (unsigned c = 0; c * j <= remaining; ++c) {
      a[j] = c;
      rec(j - 1, remaining - c * j);
    }
    a[j] = 0;
  };
  rec(k, k);
}

unsigned __int128 binomial128(unsigned n, unsigned r) {
  unsigned __int128 c = 1;
  for (unsigned i = 0; i < r; ++i) c = c * (n - i) / (i + 1);
  return c;
}

std::uint64_t multiplicity(std::span<const unsigned> a) {
  unsigned __int128 m = 1;
  unsigned total = 0;
  for (unsigned c : a) {
    total += c;
    m *= binomial128(total, c);
    if (m > std::numeric_limits<std::uint64_t>::max()) throw OverflowError("composition multiplicity overflow");
  }
  return static_cast<std::uint64_t>(m);
}

} // namespace

double vt(double t) {
  if (!std::isfinite(t)) throw DomainError("vt needs finite t");
  double l = std::log(3 + std::abs(t));
  return std::exp(std::cbrt(l * l) * std::cbrt(std::log(l)));
}

SeriesContext::SeriesContext(MultiplicativeFunction f, double y, const ArithmeticTables& tables, SeriesOptions options)
    : f_(std::move(f)), y_(y), tables_(&tables), options_(options) {
  if (!(y >= 1.5)) throw DomainError("sifting bound y must be at least 3/2");
  max_cutoff_ = options_.max_cutoff ? std::min(options_.max_cutoff, tables.limit()) : tables.limit();
  if (f_.character()) {
    character_ = f_.character();
    const std::uint64_t q = character_->modulus();
    character_table_.reserve(q);
    for (std::uint64_t r = 0; r < q; ++r) character_table_.push_back(character_->value(r).to_complex());
    unsigned primes = 0;
    double rho = 1;
    for (const auto& [p, e] : factorize(q).factors) {
      rho *= 1 - 1.0 / static_cast<double>(p);
      ++primes;
    }
    if (y_ > static_cast<double>(tables.limit())) throw RangeError("sifting bound beyond table limit");
    for (std::uint32_t p : tables.primes_in(1, y_)) {
      if (q % p == 0) continue;
      rho *= 1 - 1.0 / p;
      ++primes;
    }
    if (character_->is_principal()) {
      density_ = rho;
      partial_bound_ = std::ldexp(1.0, static_cast<int>(primes));
    } else {
      compensated_sum<std::complex<double>> run;
      double worst = 0;
      for (std::uint64_t n = 1; n <= q; ++n) {
        run += character_table_[n % q];
        worst = std::max(worst, std::abs(run.get()));
      }
      const unsigned sieve_primes = primes - static_cast<unsigned>(factorize(q).factors.size());
      partial_bound_ = worst * std::ldexp(1.0, static_cast<int>(sieve_primes));
    }
    if (periodic_remainder()) {
      // E(m) = A(m) - rho m for m = 0..q-1; on [m, m+1) E(u) = E(m) - rho (u - m).
      remainder_.resize(q);
      compensated_sum<std::complex<double>> A;
      for (std::uint64_t m = 0; m < q; ++m) {
        if (m > 0) A += character_table_[m];
        remainder_[m] = A.get() - density_ * static_cast<double>(m);
      }
      compensated_sum<std::complex<double>> mean;
      for (std::uint64_t m = 0; m < q; ++m) mean += remainder_[m] - density_ / 2;
      remainder_mean_ = mean.get() / static_cast<double>(q);
      // I(v) = int_0^v (E - c) is q-periodic; |int_N^u (E - c)| <= 2 max |I|.
      std::complex<double> I = 0;
      double worst_I = 0;
      for (std::uint64_t m = 0; m < q; ++m) {
        const auto d = remainder_[m] - remainder_mean_;
        if (density_ > 0) {
          double tau = d.real() / density_;
          if (tau > 0 && tau < 1) worst_I = std::max(worst_I, std::abs(I + d * tau - density_ * tau * tau / 2));
        }
        I += d - density_ / 2;
        worst_I = std::max(worst_I, std::abs(I));
      }
      remainder_integral_bound_ = 2 * worst_I + 1e-12 * static_cast<double>(q);
    }
  }
}

std::complex<double> SeriesContext::coefficient(std::uint64_t n) const {
  if (n > 1 && !(y_ < 2) && !tables_->is_sifted(n, y_)) return 0.0;
  if (character_) return character_table_[n % character_->modulus()];
  return f_(n, *tables_);
}

SeriesValue evaluate_series(const SeriesContext& ctx, ComplexPoint s, unsigned k) {
  auto b = evaluate(ctx, s, k);
  return {b.values[k], b.certificates[k], b.cutoff};
}

DerivativeBundle evaluate_bundle(const SeriesContext& ctx, ComplexPoint s, unsigned k) { return evaluate(ctx, s, k); }

DerivativeBundle make_bundle(std::vector<std::complex<double>> values) {
  if (values.empty()) throw DomainError("empty derivative bundle");
  DerivativeBundle b;
  b.k = static_cast<unsigned>(values.size() - 1);
  b.M = 1;
  for (unsigned j = 1; j <= b.k; ++j)
    b.M = std::max(b.M, std::pow(std::abs(values[j]) / factorial(j), 1.0 / j));
  b.values = std::move(values);
  b.certificates.assign(b.values.size(), 0.0);
  return b;
}

LogDerivative faa_log_derivative(const DerivativeBundle& bundle, double zero_floor) {
  const unsigned k = bundle.k;
  if (k == 0 || bundle.values.size() != k + 1) throw DomainError("faa_log_derivative needs F^{(j)} for j = 0..k, k >= 1");
  const auto F = bundle.values[0];
  const double absF = std::abs(F);
  if (!(absF >= zero_floor)) throw ZeroDenominatorError("|F(s)| below the zero floor");
  std::vector<std::complex<double>> ratio(k + 1);
  for (unsigned j = 1; j <= k; ++j) ratio[j] = -bundle.values[j] / (factorial(j) * F);
  compensated_sum<std::complex<double>> sum;
  for_each_partition_tuple(k, [&](const std::vector<unsigned>& a) {
    unsigned parts = 0;
    double denom = 1;
    std::complex<double> prod = 1;
    for (unsigned j = 1; j <= k; ++j) {
      parts += a[j];
      denom *= factorial(a[j]);
      for (unsigned c = 0; c < a[j]; ++c) prod *= ratio[j];
    }
    sum += factorial(parts - 1) / denom * prod;
  });
  LogDerivative out;
  out.value = -factorial(k) * sum.get();
  out.bound = factorial(k) / 2 * std::pow(2 * bundle.M / std::min(absF, 1.0), static_cast<double>(k));
  return out;
}

std::vector<std::complex<double>> log_derivative_recursion(const std::vector<std::complex<double>>& F) {
  if (F.empty() || F[0] == 0.0) throw ZeroDenominatorError("log derivative of a vanishing function");
  std::vector<std::complex<double>> G;
  for (std::size_t m = 0; m + 1 < F.size(); ++m) {
    std::complex<double> acc = F[m + 1];
    double binom = 1;
    for (std::size_t i = 0; i < m; ++i) {
      acc -= binom * G[i] * F[m - i];
      binom = binom * static_cast<double>(m - i) / static_cast<double>(i + 1);
    }
    G.push_back(acc / F[0]);
  }
  return G;
}

std::uint64_t composition_multiplicity(const std::vector<unsigned>& a) { return multiplicity(a); }

std::vector<std::vector<unsigned>> partition_tuples(unsigned k) {
  if (k == 0 || k > 30) throw DomainError("partition_tuples needs 1 <= k <= 30");
  std::vector<std::vector<unsigned>> out;
  for_each_partition_tuple(k, [&](const std::vector<unsigned>& a) { out.emplace_back(a.begin() + 1, a.end()); });
  return out;
}

std::uint64_t ordered_partition_count(unsigned k) {
  if (k == 0) throw DomainError("ordered_partition_count needs k >= 1");
  if (k > 62) throw OverflowError("ordered_partition_count is limited to k <= 62");
  unsigned __int128 total = 0;
  for_each_partition_tuple(k, [&](const std::vector<unsigned>& a) {
    total += multiplicity(std::span<const unsigned>(a).subspan(1));
  });
  if (total != (static_cast<unsigned __int128>(1) << (k - 1)))
    throw std::logic_error("ordered partition count differs from 2^{k-1}");
  return static_cast<std::uint64_t>(total);
}

namespace {

// f(p^k) for y < p <= limit, for every k with p^{-k sigma_min} >= 1e-20.
class EulerFactors {
public:
  EulerFactors(const MultiplicativeFunction& f, double y, double sigma_min, const ArithmeticTables& tables)
      : limit_(static_cast<double>(tables.limit())) {
    auto primes = tables.primes_in(y, limit_);
    log_p_.reserve(primes.size());
    offsets_.reserve(primes.size() + 1);
    offsets_.push_back(0);
    for (std::uint32_t p : primes) {
      const double lp = std::log(static_cast<double>(p));
      log_p_.push_back(lp);
      for (unsigned k = 1; std::exp(-sigma_min * k * lp) >= 1e-20; ++k) coeffs_.push_back(f.at_prime_power(p, k));
      offsets_.push_back(coeffs_.size());
    }
  }

  double log_abs(ComplexPoint point, double* certificate) const {
    const double sigma = point.sigma;
    double total = block_sum<double>(0, log_p_.size(), 4096, [&](std::uint64_t lo, std::uint64_t hi) {
      compensated_sum<double> acc;
      for (std::uint64_t i = lo; i < hi; ++i) {
        const double lp = log_p_[i];
        const auto w = std::polar(std::exp(-sigma * lp), -point.t * lp);
        std::complex<double> z = 0, wk = w;
        for (std::size_t c = offsets_[i]; c < offsets_[i + 1]; ++c) {
          z += coeffs_[c] * wk;
          wk *= w;
        }
        acc += 0.5 * std::log1p(2 * z.real() + std::norm(z));
      }
      return acc.get();
    });
    if (certificate) {
      const double P = limit_;
      const double e1 = -std::expint(-(sigma - 1) * std::log(P));
      *certificate = 1.25506 * sigma * e1 * (1 + 1 / (P - 1)) + 4 / P;
    }
    return total;
  }

private:
  double limit_;
  std::vector<double> log_p_;
  std::vector<std::size_t> offsets_;
  std::vector<std::complex<double>> coeffs_;
};

} // namespace

double log_abs_euler_product(const MultiplicativeFunction& f, double y, ComplexPoint point,
                             const ArithmeticTables& tables, double* certificate) {
  if (!(point.sigma > 1)) throw DomainError("Euler product needs sigma > 1");
  return EulerFactors(f, y, point.sigma, tables).log_abs(point, certificate);
}

L1Report l1_residual(const MultiplicativeFunction& f, double y, const std::vector<double>& x_grid,
                     const std::vector<double>& t_grid, const ArithmeticTables& tables) {
  if (!(y >= 2)) throw DomainError("l1_residual needs y >= 2");
  L1Report report;
  report.rows.resize(x_grid.size() * t_grid.size());
  for (double x : x_grid) {
    if (!(x >= 2)) throw DomainError("l1_residual needs x >= 2");
    if (x > static_cast<double>(tables.limit())) throw RangeError("x beyond table limit");
  }
  if (report.rows.empty()) return report;
  const double x_max = *std::max_element(x_grid.begin(), x_grid.end());
  const EulerFactors factors(f, y, 1 + 1 / std::log(x_max), tables);
  parallel_for(report.rows.size(), [&](std::size_t i) {
    auto& row = report.rows[i];
    row.x = x_grid[i / t_grid.size()];
    row.t = t_grid[i % t_grid.size()];
    row.sigma = 1 + 1 / std::log(row.x);
    row.log_abs_L = factors.log_abs({row.sigma, row.t}, &row.certificate);
    compensated_sum<double> ps;
    if (row.x > y)
      for (std::uint32_t p : tables.primes_in(y, row.x))
        ps += (f.at_prime(p) * std::polar(1.0, -row.t * std::log(static_cast<double>(p)))).real() / p;
    row.prime_sum = ps.get();
    row.residual = std::abs(row.log_abs_L - row.prime_sum);
  });
  for (const auto& r : report.rows) {
    report.sup = std::max(report.sup, r.residual);
    report.sup_certified = std::max(report.sup_certified, r.residual + r.certificate);
  }
  return report;
}

MonitorGrid MonitorGrid::coarse() {
  MonitorGrid g;
  for (int e = 2; e <= 6; ++e) g.sigmas.push_back(1 + 1 / (e * std::log(10.0)));
  for (double s : {1.01, 1.1, 1.5}) g.sigmas.push_back(s);
  g.ts = {0, 0.1, -0.1, 1, -1, 5, -5, 20, -20};
  return g;
}

MonitorGrid MonitorGrid::refined() {
  MonitorGrid g;
  for (int h = 4; h <= 12; ++h) g.sigmas.push_back(1 + 1 / (0.5 * h * std::log(10.0)));
  for (double s : {1.01, 1.05, 1.1, 1.25, 1.5}) g.sigmas.push_back(s);
  g.ts = {0, 0.05, -0.05, 0.1, -0.1, 0.5, -0.5, 1, -1, 3, -3, 5, -5, 10, -10, 20, -20};
  return g;
}

namespace {

SeriesOptions monitor_series_options(const MonitorOptions& options) {
  SeriesOptions so;
  so.tolerance = options.tolerance;
  so.allow_partial = true;
  return so;
}

double sieve_product(const DirichletCharacter& chi, double y, const ArithmeticTables& tables) {
  double rho = 1;
  const std::uint64_t q = chi.modulus();
  for (const auto& [p, e] : factorize(q).factors) rho *= 1 - 1.0 / static_cast<double>(p);
  for (std::uint32_t p : tables.primes_in(1, y))
    if (q % p) rho *= 1 - 1.0 / p;
  return rho;
}

template <typename RowFn>
MonitorReport run_monitor(std::string name, const MonitorGrid& grid, RowFn&& row_fn) {
  MonitorReport report;
  report.name = std::move(name);
  std::vector<std::optional<MonitorRow>> rows(grid.sigmas.size() * grid.ts.size());
  parallel_for(rows.size(), [&](std::size_t i) {
    rows[i] = row_fn(grid.sigmas[i / grid.ts.size()], grid.ts[i % grid.ts.size()]);
  });
  report.sup_ratio = 0;
  report.min_ratio = kInf;
  for (auto& r : rows) {
    if (!r) continue;
    if (!std::isfinite(r->ratio)) report.finite = false;
    report.sup_ratio = std::max(report.sup_ratio, r->ratio);
    report.min_ratio = std::min(report.min_ratio, r->ratio);
    report.rows.push_back(*r);
  }
  if (report.rows.empty()) report.min_ratio = 0;
  return report;
}

} // namespace

MonitorReport monitor_lchil1(const DirichletCharacter& chi, const MonitorGrid& grid, const MonitorOptions& options,
                             const ArithmeticTables& tables) {
  const auto f = MultiplicativeFunction::character(chi);
  const auto so = monitor_series_options(options);
  const double q = static_cast<double>(chi.modulus());
  const unsigned k = options.k;
  return run_monitor("lchil1", grid, [&](double sigma, double t) -> std::optional<MonitorRow> {
    MonitorRow row{sigma, t, options.y > 0 ? options.y : q * vt(t)};
    SeriesContext ctx(f, row.y, tables, so);
    auto v = evaluate_series(ctx, {sigma, t}, k);
    std::complex<double> pole = 0;
    if (chi.is_principal()) {
      pole = factorial(k) * sieve_product(chi, row.y, tables) / std::pow(std::complex<double>(sigma - 1, t), k + 1);
      if (k % 2) pole = -pole;
    }
    row.lhs = std::abs(v.value - pole);
    row.rhs = factorial(k) * std::pow(std::log(row.y * q * vt(t)), k + 1.0) / std::log(row.y);
    row.ratio = row.lhs / row.rhs;
    row.certificate = v.certificate;
    return row;
  });
}

MonitorReport monitor_lchil2(const DirichletCharacter& chi, const MonitorGrid& grid, const MonitorOptions& options,
                             const ArithmeticTables& tables) {
  const auto f = MultiplicativeFunction::character(chi);
  const auto so = monitor_series_options(options);
  const double q = static_cast<double>(chi.modulus());
  const bool real_nonprincipal = chi.is_real() && !chi.is_principal();
  return run_monitor("lchil2", grid, [&](double sigma, double t) -> std::optional<MonitorRow> {
    MonitorRow row{sigma, t, options.y > 0 ? options.y : q * vt(t)};
    const double ly = std::log(row.y);
    const bool bounded_clause = std::abs(t) >= options.epsilon / ly || !chi.is_real();
    const bool siegel_clause = real_nonprincipal && std::abs(t) <= 1 / ly;
    if (!bounded_clause && !siegel_clause) return std::nullopt;
    SeriesContext ctx(f, row.y, tables, so);
    auto v = evaluate_series(ctx, {sigma, t}, 0);
    row.lhs = std::abs(v.value);
    row.certificate = v.certificate;
    row.rhs = 1;
    if (!bounded_clause) row.rhs = sifted_l_at_one(chi, row.y, tables, options.tolerance).value.real();
    row.ratio = row.lhs / row.rhs;
    return row;
  });
}

MonitorReport monitor_lchil3(const DirichletCharacter& chi, const MonitorGrid& grid, const MonitorOptions& options,
                             const ArithmeticTables& tables) {
  if (options.k == 0) throw DomainError("lchil3 monitor needs k >= 1");
  const auto f = MultiplicativeFunction::character(chi);
  const auto so = monitor_series_options(options);
  const double q = static_cast<double>(chi.modulus());
  const unsigned k = options.k;
  const int delta = chi.delta();
  return run_monitor("lchil3", grid, [&](double sigma, double t) -> std::optional<MonitorRow> {
    MonitorRow row{sigma, t, q * vt(t)};
    SeriesContext full(f, 1.5, tables, so);
    auto bundle = evaluate_bundle(full, {sigma, t}, k);
    auto ld = faa_log_derivative(bundle);
    std::complex<double> pole = 0;
    if (delta) {
      pole = factorial(k - 1) / std::pow(std::complex<double>(sigma - 1, t), static_cast<double>(k));
      if ((k - 1) % 2) pole = -pole;
    }
    row.lhs = std::abs(ld.value + pole);
    double denom = 1;
    if (!delta) {
      SeriesContext sifted(f, row.y, tables, so);
      denom = std::abs(evaluate_series(sifted, {sigma, t}, 0).value);
    }
    row.rhs = std::pow(k * std::log(q * vt(t)) / denom, static_cast<double>(k));
    row.ratio = row.lhs / row.rhs;
    row.certificate = *std::max_element(bundle.certificates.begin(), bundle.certificates.end());
    return row;
  });
}

SeriesValue sifted_l_at_one(const DirichletCharacter& chi, double y, const ArithmeticTables& tables,
                            double tolerance) {
  if (chi.is_principal()) throw DomainError("L_y(1, chi) diverges for principal chi");
  SeriesOptions so;
  so.tolerance = tolerance;
  so.allow_partial = true;
  SeriesContext ctx(MultiplicativeFunction::character(chi), y, tables, so);
  return evaluate_series(ctx, {1.0, 0.0}, 0);
}

} // namespace pntap
