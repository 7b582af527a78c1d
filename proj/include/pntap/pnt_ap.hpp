#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "pntap/arith.hpp"
#include "pntap/characters.hpp"

namespace pntap {

struct PsiAPResult {
  double x = 0;
  std::uint64_t q = 1;
  std::uint64_t a = 1;
  double psi = 0;        // sum_{n <= x, n = a mod q} Lambda(n)
  double main = 0;       // x / phi(q)
  double error = 0;      // psi - main
  double normalized = 0; // |error| phi(q) / x
};

/// Lambda summed over each residue class mod q, in one pass over the prime powers <= x.
struct ResidueBins {
  double x = 0;
  std::uint64_t q = 1;
  std::vector<double> bins; // bins[r] = sum_{n <= x, n = r mod q} Lambda(n)
  double dividing = 0;      // sum_{p | q, p^k <= x} log p
  double coprime_total() const;
};

// Throws RangeError when x exceeds the table.
ResidueBins residue_bins(double x, std::uint64_t q, const ArithmeticTables& tables);

PsiAPResult psi_ap(const ResidueBins& bins, std::uint64_t a);
// Throws DomainError unless gcd(a, q) = 1, RangeError when x exceeds the table.
PsiAPResult psi_ap(double x, std::uint64_t q, std::uint64_t a, const ArithmeticTables& tables);

struct Reconciliation {
  double classes = 0;  // sum over coprime a of psi(x; q, a)
  double dividing = 0; // prime powers of primes dividing q
  double psi = 0;      // chebyshev_psi(x)
  double relative = 0; // |classes + dividing - psi| / max(psi, 1)
};

Reconciliation reconcile(double x, std::uint64_t q, const ArithmeticTables& tables);

struct OrthogonalityCheck {
  double psi = 0;
  double reconstructed = 0; // (1/phi(q)) sum_chi conj(chi(a)) sum_{n <= x} Lambda_chi(n) + x/phi(q)
  double residual = 0;
  double bound = 0;         // (sum_{p | q, p^k <= x} log p) / phi(q) + 1
  bool ok() const { return residual <= bound; }
};

OrthogonalityCheck orthogonality_decomposition(double x, std::uint64_t q, std::uint64_t a,
                                               const ArithmeticTables& tables);

// sum_{n <= x} Lambda_chi(n) with Lambda_chi(n) = chi(n) Lambda(n) - delta(chi).
std::complex<double> lambda_chi_sum(const DirichletCharacter& chi, double x, const ArithmeticTables& tables);

struct SmoothedSum {
  double y = 0;
  unsigned k = 1;
  std::complex<double> direct; // sum_{n <= y} Lambda_chi(n) (log n)^{k-1} log(y/n)
  std::complex<double> abel;   // the same by summation by parts against sum Lambda_chi
  double shape = 0;            // y (k log(3q) / M(chi))^k
  double ratio = 0;            // |direct| / shape
};

SmoothedSum smoothed_lambda_chi_sum(const DirichletCharacter& chi, double y, unsigned k, double M,
                                    const ArithmeticTables& tables);

struct ProfilePoint {
  double x = 0;
  std::complex<double> sum;     // sum_{n <= x} Lambda_chi(n)
  double normalized = 0;        // |sum| / x
};

struct CharacterSumProfile {
  std::string label;
  double M = 1;
  std::vector<ProfilePoint> points;
  std::vector<SmoothedSum> smoothed;
};

// M(chi) = L_q(1, chi) for real non-principal chi, 1 otherwise.
double m_chi(const DirichletCharacter& chi, const ArithmeticTables& tables, double tolerance = 1e-8);

// Throws DomainError for k = 0 or k > 12.
CharacterSumProfile lambda_chi_profile(const DirichletCharacter& chi, const std::vector<double>& x_grid,
                                       const std::vector<unsigned>& k_set, const ArithmeticTables& tables);

// min over real non-principal chi mod q of L_q(1, chi) / log(3q); empty for q in {1, 2}.
std::optional<double> eta_q(std::uint64_t q, const ArithmeticTables& tables, double tolerance = 1e-8);

struct ErrorProfileRow {
  PsiAPResult result;
  double fitted_cA = 0;
  bool degenerate = false; // x <= q
};

struct ErrorProfile {
  std::vector<ErrorProfileRow> rows; // ordered by (q, x, a)
  // max_a normalized error for each (q, x), in q-major order.
  std::vector<std::tuple<std::uint64_t, double, double>> max_normalized;
};

// fitted_cA is the least-squares slope of log(max_a normalized error) against
// -(log x)^{3/5} (log log x)^{-1/5}, per q.
ErrorProfile theorem_error_profile(const std::vector<std::uint64_t>& q_set, const std::vector<double>& x_grid,
                                   const ArithmeticTables& tables);

struct PsiSweep {
  double max_relative = 0; // sup over real x in [lo, hi] of |psi(x) - x| / x
  double argmax = 0;
};

PsiSweep psi_sweep(double lo, double hi, const ArithmeticTables& tables);

} // namespace pntap
