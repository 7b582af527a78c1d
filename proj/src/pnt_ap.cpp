#include "pntap/pnt_ap.hpp"

#include <cmath>
#include <limits>

#include "pntap/error.hpp"
#include "pntap/kahan.hpp"
#include "pntap/siegel.hpp"

namespace pntap {

namespace {

std::uint64_t floor_checked(double x, const ArithmeticTables& tables) {
  if (!(x >= 0)) throw DomainError("x must be nonnegative");
  if (x > static_cast<double>(tables.limit())) throw RangeError("x beyond table limit");
  return static_cast<std::uint64_t>(std::floor(x));
}

double log_weight(double n, double y, unsigned k) {
  double l = std::log(n);
  return (k == 1 ? 1.0 : std::pow(l, static_cast<double>(k - 1))) * std::log(y / n);
}

} // namespace

double ResidueBins::coprime_total() const {
  compensated_sum<double> s;
  for (std::uint64_t r = 0; r < q; ++r)
    if (gcd_u64(r, q) == 1) s += bins[r];
  return s.get();
}

ResidueBins residue_bins(double x, std::uint64_t q, const ArithmeticTables& tables) {
  if (q == 0) throw DomainError("modulus must be positive");
  const std::uint64_t N = floor_checked(x, tables);
  ResidueBins r;
  r.x = x;
  r.q = q;
  std::vector<compensated_sum<double>> acc(q);
  compensated_sum<double> dividing;
  for (auto p : tables.primes_in(1, static_cast<double>(N))) {
    const double lp = std::log(static_cast<double>(p));
    const bool divides = q % p == 0;
    for (std::uint64_t pk = p; pk <= N; pk *= p) {
      acc[pk % q] += lp;
      if (divides) dividing += lp;
      if (pk > N / p) break;
    }
  }
  r.bins.resize(q);
  for (std::uint64_t i = 0; i < q; ++i) r.bins[i] = acc[i].get();
  r.dividing = dividing.get();
  return r;
}

PsiAPResult psi_ap(const ResidueBins& bins, std::uint64_t a) {
  if (gcd_u64(a % bins.q, bins.q) != 1) throw DomainError("psi(x; q, a) needs gcd(a, q) = 1");
  PsiAPResult r;
  r.x = bins.x;
  r.q = bins.q;
  r.a = a;
  const double phi = static_cast<double>(euler_phi(bins.q));
  r.psi = bins.bins[a % bins.q];
  r.main = bins.x / phi;
  r.error = r.psi - r.main;
  r.normalized = bins.x > 0 ? std::abs(r.error) * phi / bins.x : 0;
  return r;
}

PsiAPResult psi_ap(double x, std::uint64_t q, std::uint64_t a, const ArithmeticTables& tables) {
  if (q == 0 || gcd_u64(a % q, q) != 1) throw DomainError("psi(x; q, a) needs gcd(a, q) = 1");
  return psi_ap(residue_bins(x, q, tables), a);
}

Reconciliation reconcile(double x, std::uint64_t q, const ArithmeticTables& tables) {
  auto bins = residue_bins(x, q, tables);
  Reconciliation r;
  r.classes = bins.coprime_total();
  r.dividing = bins.dividing;
  r.psi = chebyshev_psi(x, tables);
  r.relative = std::abs(r.classes + r.dividing - r.psi) / std::max(r.psi, 1.0);
  return r;
}

OrthogonalityCheck orthogonality_decomposition(double x, std::uint64_t q, std::uint64_t a,
                                               const ArithmeticTables& tables) {
  if (q == 0 || gcd_u64(a % q, q) != 1) throw DomainError("orthogonality check needs gcd(a, q) = 1");
  auto bins = residue_bins(x, q, tables);
  auto group = build_group(q);
  const double phi = static_cast<double>(group->size());
  const double floor_x = std::floor(x);
  compensated_sum<std::complex<double>> total;
  for (const auto& chi : group->characters()) {
    compensated_sum<std::complex<double>> s;
    for (std::uint64_t r = 0; r < q; ++r)
      if (bins.bins[r] != 0) s += chi(r) * bins.bins[r];
    total += std::conj(chi(a)) * (s.get() - static_cast<double>(chi.delta()) * floor_x);
  }
  OrthogonalityCheck c;
  c.psi = psi_ap(bins, a).psi;
  c.reconstructed = total.get().real() / phi + x / phi;
  c.residual = std::abs(c.reconstructed - c.psi);
  c.bound = bins.dividing / phi + 1;
  return c;
}

std::complex<double> lambda_chi_sum(const DirichletCharacter& chi, double x, const ArithmeticTables& tables) {
  auto bins = residue_bins(x, chi.modulus(), tables);
  compensated_sum<std::complex<double>> s;
  for (std::uint64_t r = 0; r < bins.q; ++r)
    if (bins.bins[r] != 0) s += chi(r) * bins.bins[r];
  return s.get() - static_cast<double>(chi.delta()) * std::floor(x);
}

SmoothedSum smoothed_lambda_chi_sum(const DirichletCharacter& chi, double y, unsigned k, double M,
                                    const ArithmeticTables& tables) {
  if (k == 0 || k > 12) throw DomainError("smoothed sums need 1 <= k <= 12");
  if (!(M > 0)) throw DomainError("M(chi) must be positive");
  const std::uint64_t N = floor_checked(y, tables);
  const auto table = chi.value_table();
  const std::uint64_t q = chi.modulus();
  const double delta = chi.delta();
  auto a = [&](std::uint64_t n) {
    return table[n % q] * tables.mangoldt_value(n) - delta;
  };

  compensated_sum<std::complex<double>> direct, abel, A;
  for (std::uint64_t n = 1; n <= N; ++n) direct += a(n) * log_weight(static_cast<double>(n), y, k);

  // sum_{n <= N} a(n) w(n) = A(N) w(N) - sum_{n < N} A(n) (w(n + 1) - w(n))
  for (std::uint64_t n = 1; n < N; ++n) {
    A += a(n);
    const double dn = static_cast<double>(n);
    abel += -A.get() * (log_weight(dn + 1, y, k) - log_weight(dn, y, k));
  }
  if (N >= 1) {
    A += a(N);
    abel += A.get() * log_weight(static_cast<double>(N), y, k);
  }

  SmoothedSum s;
  s.y = y;
  s.k = k;
  s.direct = direct.get();
  s.abel = abel.get();
  s.shape = y * std::pow(k * std::log(3.0 * static_cast<double>(q)) / M, static_cast<double>(k));
  s.ratio = std::abs(s.direct) / s.shape;
  return s;
}

double m_chi(const DirichletCharacter& chi, const ArithmeticTables& tables, double tolerance) {
  if (!chi.is_real() || chi.is_principal()) return 1;
  return l1_real_character(chi, tables, tolerance).Lq;
}

CharacterSumProfile lambda_chi_profile(const DirichletCharacter& chi, const std::vector<double>& x_grid,
                                       const std::vector<unsigned>& k_set, const ArithmeticTables& tables) {
  CharacterSumProfile p;
  p.label = chi.label();
  p.M = m_chi(chi, tables);
  for (double x : x_grid) {
    ProfilePoint pt;
    pt.x = x;
    pt.sum = lambda_chi_sum(chi, x, tables);
    pt.normalized = x > 0 ? std::abs(pt.sum) / x : 0;
    p.points.push_back(pt);
  }
  for (double y : x_grid)
    for (unsigned k : k_set) p.smoothed.push_back(smoothed_lambda_chi_sum(chi, y, k, p.M, tables));
  return p;
}

std::optional<double> eta_q(std::uint64_t q, const ArithmeticTables& tables, double tolerance) {
  if (q == 0) throw DomainError("modulus must be positive");
  std::optional<double> best;
  for (const auto& chi : build_group(q)->real_characters()) {
    if (chi.is_principal()) continue;
    double v = l1_real_character(chi, tables, tolerance).Lq / std::log(3.0 * static_cast<double>(q));
    if (!best || v < *best) best = v;
  }
  return best;
}

ErrorProfile theorem_error_profile(const std::vector<std::uint64_t>& q_set, const std::vector<double>& x_grid,
                                   const ArithmeticTables& tables) {
  ErrorProfile profile;
  for (auto q : q_set) {
    std::size_t first = profile.rows.size();
    std::vector<std::pair<double, double>> fit; // (regressor, log max normalized)
    for (double x : x_grid) {
      auto bins = residue_bins(x, q, tables);
      double worst = 0;
      for (std::uint64_t a = 1; a <= q; ++a) {
        if (gcd_u64(a, q) != 1) continue;
        ErrorProfileRow row;
        row.result = psi_ap(bins, a);
        row.degenerate = x <= static_cast<double>(q);
        worst = std::max(worst, row.result.normalized);
        profile.rows.push_back(row);
      }
      profile.max_normalized.emplace_back(q, x, worst);
      if (x > static_cast<double>(q) && x > 16 && worst > 0) {
        double lx = std::log(x);
        fit.emplace_back(-std::pow(lx, 0.6) * std::pow(std::log(lx), -0.2), std::log(worst));
      }
    }
    double cA = std::numeric_limits<double>::quiet_NaN();
    if (fit.size() >= 2) {
      double mx = 0, my = 0;
      for (auto [u, v] : fit) {
        mx += u;
        my += v;
      }
      mx /= fit.size();
      my /= fit.size();
      double sxy = 0, sxx = 0;
      for (auto [u, v] : fit) {
        sxy += (u - mx) * (v - my);
        sxx += (u - mx) * (u - mx);
      }
      if (sxx > 0) cA = sxy / sxx;
    }
    for (std::size_t i = first; i < profile.rows.size(); ++i) profile.rows[i].fitted_cA = cA;
  }
  return profile;
}

PsiSweep psi_sweep(double lo, double hi, const ArithmeticTables& tables) {
  if (!(lo >= 1 && hi >= lo)) throw DomainError("psi sweep needs 1 <= lo <= hi");
  const std::uint64_t N = floor_checked(hi, tables);
  PsiSweep s;
  compensated_sum<double> psi;
  auto consider = [&](double x, double value) {
    double rel = std::abs(value - x) / x;
    if (rel > s.max_relative) {
      s.max_relative = rel;
      s.argmax = x;
    }
  };
  for (std::uint64_t n = 1; n <= N; ++n) {
    if (tables.mangoldt(n)) psi += tables.mangoldt_value(n);
    const double a = std::max(static_cast<double>(n), lo), b = std::min(static_cast<double>(n + 1), hi);
    if (b < a || static_cast<double>(n + 1) <= lo) continue;
    const double v = psi.get();
    consider(a, v);
    consider(b, v);
  }
  return s;
}

} // namespace pntap
