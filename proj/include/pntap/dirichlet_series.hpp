#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pntap/arith.hpp"
#include "pntap/characters.hpp"
#include "pntap/multfunc.hpp"

namespace pntap {

// V_t = exp((log(3+|t|))^{2/3} (log log(3+|t|))^{1/3})
double vt(double t);

struct ComplexPoint {
  double sigma = 2;
  double t = 0;
  std::complex<double> s() const { return {sigma, t}; }
};

struct SeriesOptions {
  double tolerance = 1e-10;
  // Sum exactly up to this cutoff instead of choosing one adaptively.
  std::optional<std::uint64_t> cutoff;
  // Largest adaptive cutoff; 0 means the table limit.
  std::uint64_t max_cutoff = 0;
  std::uint64_t initial_cutoff = 4096;
  // Return the best value found instead of throwing when the tolerance is
  // out of reach.
  bool allow_partial = false;
  // For a character f and y >= 2, evaluate L_y(s, chi) as
  // L(s, chi) prod_{p <= y} (1 - chi(p) p^{-s}) instead of summing over sifted n.
  bool factor_characters = true;
};

/// Evaluation state for L_y(s, f) = sum_{P^-(n) > y} f(n) n^{-s}.
///
/// When f is a Dirichlet character the tail beyond the cutoff is handled by
/// partial summation against the bounded (or, for principal characters,
/// linear) partial sums of the sifted character; otherwise the tail is
/// bounded by the absolute series sum_{n > N} (log n)^k n^{-sigma}.
class SeriesContext {
public:
  SeriesContext(MultiplicativeFunction f, double y, const ArithmeticTables& tables, SeriesOptions options = {});

  const MultiplicativeFunction& function() const { return f_; }
  double y() const { return y_; }
  const ArithmeticTables& tables() const { return *tables_; }
  const SeriesOptions& options() const { return options_; }
  std::uint64_t max_cutoff() const { return max_cutoff_; }

  // Coefficient of n^{-s}: f(n) if P^-(n) > y, else 0.
  std::complex<double> coefficient(std::uint64_t n) const;

  bool has_character_tail() const { return character_.has_value(); }
  const std::optional<DirichletCharacter>& character() const { return character_; }
  bool factored() const { return character_ && options_.factor_characters && y_ >= 2; }
  // Density prod_{p <= y or p | q} (1 - 1/p) of the sifted principal character; 0 otherwise.
  double main_density() const { return density_; }
  // Bound on |sum_{n <= u} a(n) - density * u| for all u.
  double partial_sum_bound() const { return partial_bound_; }

  // Without sifting, E(u) = A(u) - density * u is periodic mod q. These give
  // E at integers, its mean c over a period, and a bound on |int_N^u (E - c)|.
  bool periodic_remainder() const { return character_ && y_ < 2; }
  std::complex<double> remainder_at(std::uint64_t n) const { return remainder_[n % remainder_.size()]; }
  std::complex<double> remainder_mean() const { return remainder_mean_; }
  double remainder_integral_bound() const { return remainder_integral_bound_; }

private:
  MultiplicativeFunction f_;
  double y_;
  const ArithmeticTables* tables_;
  SeriesOptions options_;
  std::uint64_t max_cutoff_;
  std::optional<DirichletCharacter> character_;
  std::vector<std::complex<double>> character_table_;
  double density_ = 0;
  double partial_bound_ = 0;
  std::vector<std::complex<double>> remainder_;
  std::complex<double> remainder_mean_ = 0;
  double remainder_integral_bound_ = 0;
};

struct SeriesValue {
  std::complex<double> value;
  double certificate = 0;
  std::uint64_t cutoff = 0;
};

// sum_{P^-(n) > y} (-log n)^k f(n) n^{-s}, the k-th derivative of L_y(s, f).
// Throws DomainError unless sigma > 1 (sigma = 1 is accepted for non-principal
// characters) and k <= 8; NonconvergenceError when the tolerance needs a
// cutoff beyond the table.
SeriesValue evaluate_series(const SeriesContext& ctx, ComplexPoint s, unsigned k);

/// F^{(j)}(s) for j = 0..k with M = max(1, sup_j (|F^{(j)}(s)| / j!)^{1/j}).
struct DerivativeBundle {
  unsigned k = 0;
  std::vector<std::complex<double>> values;
  std::vector<double> certificates;
  std::uint64_t cutoff = 0;
  double M = 1;
};

DerivativeBundle make_bundle(std::vector<std::complex<double>> values);
DerivativeBundle evaluate_bundle(const SeriesContext& ctx, ComplexPoint s, unsigned k);

struct LogDerivative {
  std::complex<double> value; // (F'/F)^{(k-1)}(s)
  double bound = 0;           // (k!/2) (2M / min(|F(s)|, 1))^k
};

// Needs bundle.k >= 1. Throws ZeroDenominatorError when |F(s)| < zero_floor.
LogDerivative faa_log_derivative(const DerivativeBundle& bundle, double zero_floor = 1e-12);

// (F'/F)^{(m)} for m = 0..F.size()-2 from F' = G F differentiated m times;
// an independent path to the same values as faa_log_derivative.
std::vector<std::complex<double>> log_derivative_recursion(const std::vector<std::complex<double>>& F);

// Number of ways to order a multiset with a_j copies of j: (sum a)! / prod a_j!.
std::uint64_t composition_multiplicity(const std::vector<unsigned>& a);
// All (a_1, ..., a_k) with a_1 + 2 a_2 + ... + k a_k = k.
std::vector<std::vector<unsigned>> partition_tuples(unsigned k);
// sum over partition tuples of their multiplicities; equals 2^{k-1}.
std::uint64_t ordered_partition_count(unsigned k);

struct L1Row {
  double x = 0;
  double t = 0;
  double sigma = 0;
  double log_abs_L = 0;
  double prime_sum = 0;
  double residual = 0;
  double certificate = 0; // bound on the error in log_abs_L
};

struct L1Report {
  std::vector<L1Row> rows;
  double sup = 0;             // max residual
  double sup_certified = 0;   // max residual + certificate
};

// log |L_y(s, f)| from the Euler product over y < p <= table limit, with a
// bound on the contribution of larger primes.
double log_abs_euler_product(const MultiplicativeFunction& f, double y, ComplexPoint s,
                             const ArithmeticTables& tables, double* certificate = nullptr);

// Residuals |log|L_y(1 + 1/log x + it, f)| - sum_{y < p <= x} Re(f(p) p^{-it}) / p|.
L1Report l1_residual(const MultiplicativeFunction& f, double y, const std::vector<double>& x_grid,
                     const std::vector<double>& t_grid, const ArithmeticTables& tables);

struct MonitorGrid {
  std::vector<double> sigmas;
  std::vector<double> ts;
  static MonitorGrid coarse();
  static MonitorGrid refined();
};

struct MonitorRow {
  double sigma = 0;
  double t = 0;
  double y = 0;
  double lhs = 0;
  double rhs = 0;
  double ratio = 0;
  double certificate = 0;
};

struct MonitorReport {
  std::string name;
  std::vector<MonitorRow> rows;
  double sup_ratio = 0;
  double min_ratio = 0;
  bool finite = true;
};

struct MonitorOptions {
  unsigned k = 0;
  double y = 0;         // 0: y = q V_t at each point
  double epsilon = 1.0; // threshold in |t| >= epsilon / log y
  double tolerance = 1e-6;
};

// Lemma-shaped bound monitors. lhs/rhs ratios are reported, the implied
// constants are not asserted.
//  lchil1: |L_y^{(k)}(s) - (-1)^k k! delta rho / (s-1)^{k+1}| vs k! (log(y q V_t))^{k+1} / log y
//  lchil2: |L_y(s)| at y = q V_t; rows with rhs = L_y(1, chi) for real non-principal chi
//          and |t| <= 1 / log y, rhs = 1 otherwise
//  lchil3: |(L'/L)^{(k-1)}(s) + delta (-1)^{k-1} (k-1)! / (s-1)^k|
//          vs (k log(q V_t) / (delta + (1 - delta) |L_{q V_t}(s)|))^k
MonitorReport monitor_lchil1(const DirichletCharacter& chi, const MonitorGrid& grid, const MonitorOptions& options,
                             const ArithmeticTables& tables);
MonitorReport monitor_lchil2(const DirichletCharacter& chi, const MonitorGrid& grid, const MonitorOptions& options,
                             const ArithmeticTables& tables);
MonitorReport monitor_lchil3(const DirichletCharacter& chi, const MonitorGrid& grid, const MonitorOptions& options,
                             const ArithmeticTables& tables);

// L_y(1, chi) for a non-principal character.
SeriesValue sifted_l_at_one(const DirichletCharacter& chi, double y, const ArithmeticTables& tables,
                            double tolerance = 1e-9);

} // namespace pntap
