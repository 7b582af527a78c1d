#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "pntap/arith.hpp"
#include "pntap/characters.hpp"

namespace pntap {

// gamma_eta = 1 - (1 - eta) int_1^oo {u} u^{eta-2} du
// gamma'_eta = int_1^oo {u} (1 - (1 - eta) log u) u^{eta-2} du
struct EtaConstants {
  double eta = 0;
  double gamma_eta = 0;
  double gamma_eta_prime = 0;
  double error_bound = 0;
};

// Throws DomainError unless 0 <= eta <= 1/20.
EtaConstants eta_constants(double eta);

// (B^eta - 1) / eta, and log B at eta = 0.
double eta_power_term(double B, double eta);
// B^eta log B / eta - (B^eta - 1) / eta^2, and (log B)^2 / 2 at eta = 0.
double eta_log_power_term(double B, double eta);

struct PartialSumResiduals {
  double eta = 0;
  std::uint64_t B = 0;
  double residual_inverse = 0; // |sum_{b <= B} b^{eta-1} - (B^eta - 1)/eta - gamma_eta|
  double residual_log = 0;     // |sum_{b <= B} log b / b^{1-eta} - B^eta log B/eta + (B^eta - 1)/eta^2 - gamma'_eta|
  double bound = 0;            // 10 B^{eta-1} (1 + log B)
  bool ok() const { return residual_inverse <= bound && residual_log <= bound; }
};

PartialSumResiduals partial_sum_identity_check(double eta, std::uint64_t B);

// g_x(a) = sum_{b <= x/a} log(ab) / b^{1-eta} without its error term, in the
// two closed forms. The second form needs eta > 0.
double g_first_form(double a, double x, const EtaConstants& c);
double g_second_form(double a, double x, const EtaConstants& c);
// Direct evaluation of the sum.
double g_direct(std::uint64_t a, double x, double eta);

// Real primitive non-principal characters of conductor exactly q, in index order.
std::vector<DirichletCharacter> real_primitive_characters(std::uint64_t q);

struct ConvolutionSums {
  double x = 0;
  std::uint64_t q = 0;               // max(q1, q2)
  std::int64_t pair_sum = 0;         // sum_{n <= x} (chi1 * chi2)(n)
  std::int64_t triple_sum = 0;       // sum_{n <= x} f(n), f = chi1 * chi2 * chi1 chi2
  double pair_bound = 0;             // 2 q sqrt(x)
  bool triple_asserted = false;      // x >= q^10
  double triple_bound = 0;           // x^{4/5} log x
  double fitted_c = 0;               // |triple_sum| / (q^{4/3} x^{2/3} log x)
  bool ok() const {
    return std::abs(static_cast<double>(pair_sum)) <= pair_bound &&
           (!triple_asserted || std::abs(static_cast<double>(triple_sum)) <= triple_bound);
  }
};

// Exact partial sums by the hyperbola method. Throws RangeError beyond the table limit.
ConvolutionSums convolution_partial_sums(const DirichletCharacter& chi1, const DirichletCharacter& chi2, double x,
                                         const ArithmeticTables& tables);

// f(0..nmax) for f = chi1 * chi2 * chi1 chi2 (entry 0 unused).
std::vector<std::int64_t> convolution_triple(const DirichletCharacter& chi1, const DirichletCharacter& chi2,
                                             std::uint64_t nmax);

struct Zerol1Check {
  std::uint64_t q1 = 0;
  std::uint64_t q2 = 0;
  std::uint64_t nmax = 0;
  bool pass = true;
  std::optional<std::uint64_t> counterexample; // first n with (1*f)(n) < 0 or > tau_4(n)
};

// 0 <= (1 * f)(n) <= tau_4(n) for n <= nmax, in integer arithmetic.
Zerol1Check zerol1_hypothesis_check(const DirichletCharacter& chi1, const DirichletCharacter& chi2, std::uint64_t nmax,
                                    const ArithmeticTables& tables);

struct RealLValue {
  double L = 0;           // L(1, chi)
  double Lq = 0;          // L(1, chi) prod_{p <= q} (1 - chi(p)/p)
  double certificate = 0; // bound on |error| of L
  std::uint64_t cutoff = 0;
};

// Throws DomainError unless chi is real and non-principal, NonconvergenceError
// when the tolerance needs a cutoff beyond the table.
RealLValue l1_real_character(const DirichletCharacter& chi, const ArithmeticTables& tables, double tolerance = 1e-8);

struct SiegelRow {
  std::uint64_t conductor = 0;
  std::uint64_t index = 0;
  bool even = true;
  double L = 0;
  double certificate = 0;
  double sqrt_q_L = 0;
  double q_eps_01_L = 0; // q^{0.1} L(1, chi)
  double q_eps_05_L = 0; // q^{0.5} L(1, chi)
};

struct SiegelScan {
  std::uint64_t qmax = 0;
  std::vector<SiegelRow> rows;
  bool all_positive = true; // L - certificate > 0 everywhere
  double min_sqrt_q_L = 0;
  std::uint64_t argmin_conductor = 0;
  double min_q_eps_01_L = 0;
};

// All real primitive non-principal characters with conductor <= qmax, ordered
// by (conductor, index).
SiegelScan siegel_scan(std::uint64_t qmax, double tolerance, const ArithmeticTables& tables);

} // namespace pntap
