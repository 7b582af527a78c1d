#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pntap/arith.hpp"
#include "pntap/characters.hpp"

namespace pntap {

/// A multiplicative function with values in the closed unit disc, given by
/// its values on prime powers. f(1) = 1 and f(mn) = f(m) f(n) for coprime m, n.
class MultiplicativeFunction {
public:
  using Evaluator = std::function<std::complex<double>(std::uint64_t p, unsigned k)>;

  MultiplicativeFunction(Evaluator at_prime_power, bool completely_multiplicative, std::string label);

  // Throws DomainError if the value leaves the unit disc.
  std::complex<double> at_prime_power(std::uint64_t p, unsigned k) const;
  std::complex<double> at_prime(std::uint64_t p) const { return at_prime_power(p, 1); }
  std::complex<double> operator()(const Factorization& f) const;
  std::complex<double> operator()(std::uint64_t n) const { return (*this)(factorize(n)); }
  std::complex<double> operator()(std::uint64_t n, const ArithmeticTables& tables) const;

  bool completely_multiplicative() const { return complete_; }
  const std::string& label() const { return label_; }

  // Set when the function is exactly a Dirichlet character.
  const std::optional<DirichletCharacter>& character() const { return character_; }

  static MultiplicativeFunction one();
  static MultiplicativeFunction mobius();
  static MultiplicativeFunction character(const DirichletCharacter& chi);
  // n -> n^{it} = e^{it log n}
  static MultiplicativeFunction twist(double t);
  // Completely multiplicative with f(p) uniform in the unit disc, determined by (seed, p).
  static MultiplicativeFunction random(std::uint64_t seed);

  MultiplicativeFunction conjugate() const;
  MultiplicativeFunction operator*(const MultiplicativeFunction& other) const;

  // Names: "one", "mu", "chi<q>_<index>", "nit<t>", "rand<seed>", a leading
  // "~" for the conjugate, and "*" between factors, e.g. "mu*nit-2.5".
  static MultiplicativeFunction parse(const std::string& name);

private:
  Evaluator eval_;
  bool complete_;
  std::string label_;
  std::optional<DirichletCharacter> character_;
};

struct DistanceValue {
  std::string f_label;
  std::string g_label;
  double y = 1;
  double x = 1;
  double squared = 0;
  double value = 0;
};

// D(f, g; y, x)^2 = sum_{y < p <= x} (1 - Re f(p) conj(g(p))) / p.
DistanceValue distance(const MultiplicativeFunction& f, const MultiplicativeFunction& g, double y, double x,
                       const ArithmeticTables& tables);

struct TriangleCheck {
  double lhs = 0;   // D(1, f) + D(1, g)
  double rhs = 0;   // D(1, fg)
  double slack = 0; // lhs - rhs
};

TriangleCheck triangle_check(const MultiplicativeFunction& f, const MultiplicativeFunction& g, double y, double x,
                             const ArithmeticTables& tables);

struct FuzzRecord {
  std::uint64_t seed_f = 0;
  std::uint64_t seed_g = 0;
  double slack = 0;
};

// `count` random pairs derived from `seed`.
std::vector<FuzzRecord> triangle_fuzz(std::size_t count, std::uint64_t seed, double y, double x,
                                      const ArithmeticTables& tables);

// D^2(chi(n), mu(n) n^{it}; y, x) = sum_{y < p <= x} (1 + Re chi(p) p^{-it}) / p.
double squared_distance_chi_mu_twist(const DirichletCharacter& chi, double t, double y, double x,
                                     const ArithmeticTables& tables);

// sum_{y < p <= x} 1/p
double prime_reciprocal_sum(double y, double x, const ArithmeticTables& tables);

} // namespace pntap
