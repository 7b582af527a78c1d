#include "pntap/siegel.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "pntap/dirichlet_series.hpp"
#include "pntap/error.hpp"
#include "pntap/kahan.hpp"
#include "pntap/parallel.hpp"

namespace pntap {

namespace {

constexpr double kEtaMax = 1.0 / 20;
constexpr std::uint64_t kQuadratureEnd = std::uint64_t{1} << 14;

// 5-point Gauss-Legendre rule on [0, 1].
struct Gauss5 {
  std::array<double, 5> nodes;
  std::array<double, 5> weights;
  Gauss5() {
    const double a = std::sqrt(5 - 2 * std::sqrt(10.0 / 7)) / 3, b = std::sqrt(5 + 2 * std::sqrt(10.0 / 7)) / 3;
    const double wa = (322 + 13 * std::sqrt(70.0)) / 900, wb = (322 - 13 * std::sqrt(70.0)) / 900;
    const std::array<double, 5> x{-b, -a, 0, a, b};
    const std::array<double, 5> w{wb, wa, 128.0 / 225, wa, wb};
    for (int i = 0; i < 5; ++i) {
      nodes[i] = (x[i] + 1) / 2;
      weights[i] = w[i] / 2;
    }
  }
};

// int_1^U {u} h(u) du + int_U^oo h / 2 - h(U) / 12, the last two terms being
// the Euler-Maclaurin tail of the periodic part.
template <typename H>
double fractional_part_integral(H&& h, double tail_integral) {
  static const Gauss5 rule;
  compensated_sum<double> total;
  for (std::uint64_t n = 1; n < kQuadratureEnd; ++n) {
    const std::uint64_t pieces = std::max<std::uint64_t>(1, 64 / n);
    const double width = 1.0 / static_cast<double>(pieces);
    double interval = 0;
    for (std::uint64_t j = 0; j < pieces; ++j) {
      for (int i = 0; i < 5; ++i) {
        double v = (static_cast<double>(j) + rule.nodes[i]) * width;
        interval += rule.weights[i] * width * v * h(static_cast<double>(n) + v);
      }
    }
    total += interval;
  }
  const double U = static_cast<double>(kQuadratureEnd);
  total += tail_integral / 2 - h(U) / 12;
  return total.get();
}

// (e^z - 1) / z and (z e^z - e^z + 1) / z^2, accurate near z = 0.
double expm1_over(double z) { return z == 0 ? 1 : std::expm1(z) / z; }

double log_kernel(double z) {
  if (std::abs(z) > 0.5) return (z * std::exp(z) - std::expm1(z)) / (z * z);
  double term = 1, sum = 0;
  for (int n = 2; n < 40; ++n) {
    term = n == 2 ? 0.5 : term * z / n;
    sum += term * (n - 1);
  }
  return sum;
}

std::vector<int> real_table(const DirichletCharacter& chi) { return chi.real_value_table(); }

// sum_{n <= y} chi(n) from a periodic prefix table.
struct PrefixSums {
  std::uint64_t q = 1;
  std::vector<std::int64_t> prefix; // prefix[r] = sum_{1 <= n <= r} chi(n), r < q
  std::int64_t period = 0;
  explicit PrefixSums(const std::vector<int>& table) : q(table.size()), prefix(table.size(), 0) {
    std::int64_t s = 0;
    for (std::uint64_t r = 1; r < q; ++r) {
      s += table[r];
      prefix[r] = s;
    }
    period = s + table[0];
  }
  std::int64_t operator()(std::uint64_t y) const {
    return static_cast<std::int64_t>(y / q) * period + prefix[y % q];
  }
};

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

void require_real_nonprincipal(const DirichletCharacter& chi) {
  if (!chi.is_real() || chi.is_principal()) throw DomainError("need a real non-principal character");
}

} // namespace

EtaConstants eta_constants(double eta) {
  if (!(eta >= 0 && eta <= kEtaMax)) throw DomainError("eta must lie in [0, 1/20]");
  const double U = static_cast<double>(kQuadratureEnd);
  const double Ua = std::pow(U, eta - 1);
  double i1 = fractional_part_integral([eta](double u) { return std::pow(u, eta - 2); }, Ua / (1 - eta));
  double i2 = fractional_part_integral(
      [eta](double u) { return (1 - (1 - eta) * std::log(u)) * std::pow(u, eta - 2); }, -Ua * std::log(U));
  EtaConstants c;
  c.eta = eta;
  c.gamma_eta = 1 - (1 - eta) * i1;
  c.gamma_eta_prime = i2;
  // Next Euler-Maclaurin term, about |h'(U)| / 100, plus quadrature rounding.
  c.error_bound = 0.01 * 3 * (1 + std::log(U)) * std::pow(U, eta - 3) + 1e-13;
  return c;
}

double eta_power_term(double B, double eta) {
  double L = std::log(B);
  return L * expm1_over(eta * L);
}

double eta_log_power_term(double B, double eta) {
  double L = std::log(B);
  return L * L * log_kernel(eta * L);
}

PartialSumResiduals partial_sum_identity_check(double eta, std::uint64_t B) {
  if (B < 2) throw DomainError("partial sum check needs B >= 2");
  auto c = eta_constants(eta);
  compensated_sum<double> inv, lg;
  for (std::uint64_t b = 1; b <= B; ++b) {
    double bd = static_cast<double>(b);
    double w = std::pow(bd, eta - 1);
    inv += w;
    lg += w * std::log(bd);
  }
  const double Bd = static_cast<double>(B);
  PartialSumResiduals r;
  r.eta = eta;
  r.B = B;
  r.residual_inverse = std::abs(inv.get() - eta_power_term(Bd, eta) - c.gamma_eta);
  r.residual_log = std::abs(lg.get() - eta_log_power_term(Bd, eta) - c.gamma_eta_prime);
  r.bound = 10 * std::pow(Bd, eta - 1) * (1 + std::log(Bd));
  return r;
}

double g_first_form(double a, double x, const EtaConstants& c) {
  const double X = x / a;
  return std::log(a) * (eta_power_term(X, c.eta) + c.gamma_eta) + eta_log_power_term(X, c.eta) + c.gamma_eta_prime;
}

double g_second_form(double a, double x, const EtaConstants& c) {
  if (!(c.eta > 0)) throw DomainError("second closed form of g needs eta > 0");
  const double eta = c.eta, Xe = std::pow(x / a, eta);
  return std::log(x) * Xe / eta + std::log(a) * (c.gamma_eta - 1 / eta) - (Xe - 1) / (eta * eta) + c.gamma_eta_prime;
}

double g_direct(std::uint64_t a, double x, double eta) {
  const auto bmax = static_cast<std::uint64_t>(std::floor(x / static_cast<double>(a)));
  compensated_sum<double> s;
  for (std::uint64_t b = 1; b <= bmax; ++b) {
    double bd = static_cast<double>(b);
    s += std::log(static_cast<double>(a) * bd) * std::pow(bd, eta - 1);
  }
  return s.get();
}

std::vector<DirichletCharacter> real_primitive_characters(std::uint64_t q) {
  std::vector<DirichletCharacter> out;
  if (q < 3) return out;
  for (auto& chi : build_group(q)->real_characters())
    if (!chi.is_principal() && chi.is_primitive()) out.push_back(chi);
  return out;
}

std::vector<std::int64_t> convolution_triple(const DirichletCharacter& chi1, const DirichletCharacter& chi2,
                                             std::uint64_t nmax) {
  auto t1 = real_table(chi1), t2 = real_table(chi2);
  std::vector<std::int64_t> a(nmax + 1, 0), b(nmax + 1, 0), c(nmax + 1, 0);
  for (std::uint64_t n = 1; n <= nmax; ++n) {
    a[n] = t1[n % t1.size()];
    b[n] = t2[n % t2.size()];
    c[n] = a[n] * b[n];
  }
  return dirichlet_convolve(dirichlet_convolve(a, b), c);
}

ConvolutionSums convolution_partial_sums(const DirichletCharacter& chi1, const DirichletCharacter& chi2, double x,
                                         const ArithmeticTables& tables) {
  require_real_nonprincipal(chi1);
  require_real_nonprincipal(chi2);
  ConvolutionSums r;
  r.x = x;
  r.q = std::max(chi1.modulus(), chi2.modulus());
  const double q = static_cast<double>(r.q);
  if (x > static_cast<double>(tables.limit())) throw RangeError("convolution sums beyond table limit");
  if (x < 1) return r;
  const auto N = static_cast<std::uint64_t>(std::floor(x));

  auto t1 = real_table(chi1), t2 = real_table(chi2);
  const std::uint64_t q1 = t1.size(), q2 = t2.size();
  PrefixSums C1(t1), C2(t2);
  std::vector<int> t12(q1 * q2 / gcd_u64(q1, q2));
  for (std::uint64_t n = 0; n < t12.size(); ++n) t12[n] = t1[n % q1] * t2[n % q2];
  PrefixSums C12(t12);

  const std::uint64_t s = isqrt(N);
  std::int64_t pair = 0;
  for (std::uint64_t a = 1; a <= s; ++a) pair += t1[a % q1] * C2(N / a) + t2[a % q2] * C1(N / a);
  pair -= C1(s) * C2(s);
  r.pair_sum = pair;

  std::vector<std::int64_t> a(N + 1, 0), b(N + 1, 0);
  for (std::uint64_t n = 1; n <= N; ++n) {
    a[n] = t1[n % q1];
    b[n] = t2[n % q2];
  }
  auto h = dirichlet_convolve(a, b);
  std::int64_t triple = 0;
  for (std::uint64_t k = 1; k <= N; ++k)
    if (h[k]) triple += h[k] * C12(N / k);
  r.triple_sum = triple;

  const double lx = std::log(x);
  r.pair_bound = 2 * q * std::sqrt(x);
  r.triple_asserted = std::log(x) >= 10 * std::log(q);
  r.triple_bound = std::pow(x, 0.8) * lx;
  double shape = std::pow(q, 4.0 / 3) * std::pow(x, 2.0 / 3) * lx;
  r.fitted_c = shape > 0 ? std::abs(static_cast<double>(triple)) / shape : 0;
  return r;
}

Zerol1Check zerol1_hypothesis_check(const DirichletCharacter& chi1, const DirichletCharacter& chi2, std::uint64_t nmax,
                                    const ArithmeticTables& tables) {
  require_real_nonprincipal(chi1);
  require_real_nonprincipal(chi2);
  if (nmax > tables.limit()) throw RangeError("zerol1 check beyond table limit");
  Zerol1Check r;
  r.q1 = chi1.modulus();
  r.q2 = chi2.modulus();
  r.nmax = nmax;
  auto f = convolution_triple(chi1, chi2, nmax);
  std::vector<std::int64_t> one(nmax + 1, 1);
  auto g = dirichlet_convolve(one, f);
  for (std::uint64_t n = 1; n <= nmax; ++n) {
    if (g[n] < 0 || static_cast<std::uint64_t>(g[n]) > tau_r(tables.factorize(n), 4)) {
      r.pass = false;
      r.counterexample = n;
      break;
    }
  }
  return r;
}

RealLValue l1_real_character(const DirichletCharacter& chi, const ArithmeticTables& tables, double tolerance) {
  require_real_nonprincipal(chi);
  const std::uint64_t q = chi.modulus();
  if (q > tables.limit()) throw RangeError("modulus beyond table limit");
  auto v = sifted_l_at_one(chi, 1.5, tables, tolerance);
  if (!(v.certificate <= tolerance))
    throw NonconvergenceError("L(1, chi) tolerance out of reach within the table", v.certificate);
  RealLValue r;
  r.L = v.value.real();
  r.certificate = v.certificate;
  r.cutoff = v.cutoff;
  double factor = 1;
  for (auto p : tables.primes_in(1, static_cast<double>(q))) factor *= 1 - chi.value(p).as_int() / static_cast<double>(p);
  r.Lq = r.L * factor;
  return r;
}

SiegelScan siegel_scan(std::uint64_t qmax, double tolerance, const ArithmeticTables& tables) {
  SiegelScan scan;
  scan.qmax = qmax;
  std::vector<DirichletCharacter> chars;
  for (std::uint64_t q = 3; q <= qmax; ++q)
    for (auto& chi : real_primitive_characters(q)) chars.push_back(chi);
  scan.rows.resize(chars.size());
  parallel_for(chars.size(), [&](std::size_t i) {
    const auto& chi = chars[i];
    auto v = l1_real_character(chi, tables, tolerance);
    auto& row = scan.rows[i];
    const double q = static_cast<double>(chi.modulus());
    row.conductor = chi.modulus();
    row.index = chi.index();
    row.even = chi.value(chi.modulus() - 1).as_int() == 1;
    row.L = v.L;
    row.certificate = v.certificate;
    row.sqrt_q_L = std::sqrt(q) * v.L;
    row.q_eps_01_L = std::pow(q, 0.1) * v.L;
    row.q_eps_05_L = std::pow(q, 0.5) * v.L;
  });
  scan.min_sqrt_q_L = INFINITY;
  scan.min_q_eps_01_L = INFINITY;
  for (const auto& row : scan.rows) {
    if (!(row.L - row.certificate > 0)) scan.all_positive = false;
    if (row.sqrt_q_L < scan.min_sqrt_q_L) {
      scan.min_sqrt_q_L = row.sqrt_q_L;
      scan.argmin_conductor = row.conductor;
    }
    scan.min_q_eps_01_L = std::min(scan.min_q_eps_01_L, row.q_eps_01_L);
  }
  return scan;
}

} // namespace pntap
