#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace pntap {

// A value of a Dirichlet character held exactly: zero, or the root of unity
// e^{2 pi i exponent / order}.
struct CharValue {
  bool zero = false;
  std::uint64_t exponent = 0;
  std::uint64_t order = 1;

  bool is_one() const { return !zero && exponent == 0; }
  bool is_real() const { return zero || (2 * exponent) % order == 0; }
  // -1, 0 or 1; throws DomainError for non-real values.
  int as_int() const;
  std::complex<double> to_complex() const;
};

class DirichletCharacter;

/// The unit group (Z/qZ)^* written as a product of cyclic groups.
///
/// One cyclic factor per odd prime power p^e (generated by the smallest
/// primitive root), and for 2^e: nothing when e = 1, <-1> when e = 2, and
/// <-1> x <5> when e >= 3. Each factor keeps a discrete-log table over the
/// residues of its prime power.
class CharacterGroup : public std::enable_shared_from_this<CharacterGroup> {
public:
  enum class Kind { cyclic, two_sign, two_five };
  struct Component {
    Kind kind = Kind::cyclic;
    std::uint64_t prime = 0;
    unsigned prime_exponent = 0;
    std::uint64_t modulus = 1;   // p^e
    std::uint64_t generator = 1; // residue mod `modulus`
    std::uint64_t order = 1;
    std::uint64_t lift = 1;      // unit mod q: generator here, 1 on every other component
    std::vector<std::uint32_t> dlog; // residue mod `modulus` -> log; kNoLog for non-units
  };
  static constexpr std::uint32_t kNoLog = 0xffffffffu;

  static std::shared_ptr<const CharacterGroup> build(std::uint64_t q);

  std::uint64_t modulus() const { return q_; }
  // phi(q) = number of characters.
  std::uint64_t size() const { return size_; }
  // Least common multiple of the cyclic orders; all values are L-th roots of unity.
  std::uint64_t exponent() const { return exponent_; }
  std::span<const Component> components() const { return components_; }

  // Discrete logs of n per component; false when gcd(n, q) > 1.
  bool discrete_log(std::uint64_t n, std::span<std::uint64_t> out) const;

  DirichletCharacter character(std::uint64_t index) const;
  DirichletCharacter from_exponents(std::vector<std::uint64_t> exponents) const;
  DirichletCharacter principal() const;
  std::vector<DirichletCharacter> characters() const;
  std::vector<DirichletCharacter> real_characters() const;

private:
  CharacterGroup() = default;

  std::uint64_t q_ = 1;
  std::uint64_t size_ = 1;
  std::uint64_t exponent_ = 1;
  std::vector<Component> components_;
};

inline std::shared_ptr<const CharacterGroup> build_group(std::uint64_t q) { return CharacterGroup::build(q); }

/// A character mod q, identified by its exponent vector: chi(g_j) = e^{2 pi i b_j / ord_j}.
class DirichletCharacter {
public:
  std::uint64_t modulus() const { return group_->modulus(); }
  const CharacterGroup& group() const { return *group_; }
  std::shared_ptr<const CharacterGroup> group_ptr() const { return group_; }
  std::span<const std::uint64_t> exponents() const { return exponents_; }
  // Mixed-radix index within the group; index 0 is principal.
  std::uint64_t index() const;

  CharValue value(std::uint64_t n) const;
  std::complex<double> operator()(std::uint64_t n) const { return value(n).to_complex(); }

  std::uint64_t order() const { return order_; }
  bool is_principal() const { return order_ == 1; }
  bool is_real() const { return order_ <= 2; }
  bool is_primitive() const { return conductor_ == modulus(); }
  std::uint64_t conductor() const { return conductor_; }
  // delta(chi): 1 for the principal character, 0 otherwise.
  int delta() const { return is_principal() ? 1 : 0; }

  // The primitive character mod conductor() that agrees with this one on
  // integers coprime to modulus().
  DirichletCharacter primitive_part() const;
  DirichletCharacter conjugate() const;
  // Product of two characters of the same modulus.
  DirichletCharacter operator*(const DirichletCharacter& other) const;

  // chi(0), ..., chi(q-1) in binary64.
  std::vector<std::complex<double>> value_table() const;
  // chi(0), ..., chi(q-1) for a real character.
  std::vector<int> real_value_table() const;

  std::string label() const;

private:
  friend class CharacterGroup;
  DirichletCharacter(std::shared_ptr<const CharacterGroup> group, std::vector<std::uint64_t> exponents);

  std::shared_ptr<const CharacterGroup> group_;
  std::vector<std::uint64_t> exponents_;
  std::uint64_t order_ = 1;
  std::uint64_t conductor_ = 1;
};

// sum_chi chi(a) conj(chi(b)) over all characters mod q, in exact integer
// arithmetic. Throws DomainError unless gcd(a, q) = gcd(b, q) = 1.
std::int64_t orthogonality_sum(std::uint64_t q, std::uint64_t a, std::uint64_t b);

// Number of real characters mod q.
std::uint64_t real_character_census(std::uint64_t q);

// Number theory helpers shared with other modules.
std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b);
std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod);
std::uint64_t euler_phi(std::uint64_t n);

} // namespace pntap
