#include "pntap/characters.hpp"

#include <algorithm>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "pntap/arith.hpp"
#include "pntap/error.hpp"

namespace pntap {

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
  if (mod == 1) return 0;
  unsigned __int128 result = 1, b = base % mod;
  while (exp) {
    if (exp & 1) result = result * b % mod;
    b = b * b % mod;
    exp >>= 1;
  }
  return static_cast<std::uint64_t>(result);
}

std::uint64_t euler_phi(std::uint64_t n) {
  std::uint64_t phi = n;
  for (const auto& [p, k] : factorize(n).factors) phi = phi / p * (p - 1);
  return phi;
}

namespace {

std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t m) {
  __int128 old_r = static_cast<__int128>(a % m), r = m, old_s = 1, s = 0;
  while (r != 0) {
    __int128 quot = old_r / r;
    __int128 tmp = old_r - quot * r;
    old_r = r;
    r = tmp;
    tmp = old_s - quot * s;
    old_s = s;
    s = tmp;
  }
  if (old_r != 1) throw std::logic_error("inverse_mod: not invertible");
  __int128 mm = m;
  return static_cast<std::uint64_t>(((old_s % mm) + mm) % mm);
}

// n = residue (mod m) and n = 1 (mod cofactor), with gcd(m, cofactor) = 1.
std::uint64_t crt_with_one(std::uint64_t residue, std::uint64_t m, std::uint64_t cofactor) {
  if (cofactor == 1) return residue % m;
  if (m == 1) return 1 % cofactor;
  unsigned __int128 need = (residue % m + m - 1) % m; // residue - 1 mod m
  unsigned __int128 t = need * inverse_mod(cofactor % m, m) % m;
  return static_cast<std::uint64_t>((1 + t * cofactor) % (static_cast<unsigned __int128>(m) * cofactor));
}

std::uint64_t smallest_primitive_root(std::uint64_t p, unsigned e) {
  std::uint64_t m = 1;
  for (unsigned i = 0; i < e; ++i) m *= p;
  const std::uint64_t order = m / p * (p - 1);
  std::vector<std::uint64_t> order_primes;
  for (const auto& f : factorize(order).factors) order_primes.push_back(f.p);
  for (std::uint64_t g = 2; g < m; ++g) {
    if (g % p == 0) continue;
    bool generates = true;
    for (std::uint64_t r : order_primes)
      if (pow_mod(g, order / r, m) == 1) {
        generates = false;
        break;
      }
    if (generates) return g;
  }
  return 1; // m = 2: the trivial group
}

unsigned valuation(std::uint64_t n, std::uint64_t p) {
  unsigned v = 0;
  while (n && n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

} // namespace

int CharValue::as_int() const {
  if (zero) return 0;
  if (exponent == 0) return 1;
  if (2 * exponent == order) return -1;
  throw DomainError("character value is not real");
}

std::complex<double> CharValue::to_complex() const {
  if (zero) return {0.0, 0.0};
  if (exponent == 0) return {1.0, 0.0};
  // Exact quarter turns avoid spurious 1e-17 components.
  if (4 * exponent == order) return {0.0, 1.0};
  if (2 * exponent == order) return {-1.0, 0.0};
  if (4 * exponent == 3 * order) return {0.0, -1.0};
  double angle = 2.0 * std::numbers::pi * static_cast<double>(exponent) / static_cast<double>(order);
  return std::polar(1.0, angle);
}

std::shared_ptr<const CharacterGroup> CharacterGroup::build(std::uint64_t q) {
  if (q < 1) throw DomainError("character group: modulus must be positive");
  if (q > 10'000'000) throw DomainError("character group: modulus above 10^7");
  std::shared_ptr<CharacterGroup> g(new CharacterGroup());
  g->q_ = q;
  const auto fac = factorize(q);
  for (const auto& [p, e] : fac.factors) {
    std::uint64_t m = 1;
    for (unsigned i = 0; i < e; ++i) m *= p;
    const std::uint64_t cofactor = q / m;
    if (p == 2) {
      if (e == 1) continue;
      Component sign{Kind::two_sign, 2, e, m, m - 1, 2, 0, std::vector<std::uint32_t>(m, kNoLog)};
      sign.lift = crt_with_one(m - 1, m, cofactor);
      if (e == 2) {
        sign.dlog[1] = 0;
        sign.dlog[3] = 1;
        g->components_.push_back(std::move(sign));
        continue;
      }
      Component five{Kind::two_five, 2, e, m, 5, m / 4, 0, std::vector<std::uint32_t>(m, kNoLog)};
      five.lift = crt_with_one(5, m, cofactor);
      std::uint64_t x = 1;
      for (std::uint64_t k = 0; k < five.order; ++k) {
        five.dlog[x] = static_cast<std::uint32_t>(k);
        five.dlog[m - x] = static_cast<std::uint32_t>(k);
        sign.dlog[x] = 0;
        sign.dlog[m - x] = 1;
        x = x * 5 % m;
      }
      g->components_.push_back(std::move(sign));
      g->components_.push_back(std::move(five));
      continue;
    }
    Component c{Kind::cyclic, p, e, m, smallest_primitive_root(p, e), m / p * (p - 1), 0,
                std::vector<std::uint32_t>(m, kNoLog)};
    c.lift = crt_with_one(c.generator, m, cofactor);
    std::uint64_t x = 1;
    for (std::uint64_t k = 0; k < c.order; ++k) {
      c.dlog[x] = static_cast<std::uint32_t>(k);
      x = x * c.generator % m;
    }
    g->components_.push_back(std::move(c));
  }
  for (const auto& c : g->components_) {
    g->size_ *= c.order;
    g->exponent_ = std::lcm(g->exponent_, c.order);
  }
  return g;
}

bool CharacterGroup::discrete_log(std::uint64_t n, std::span<std::uint64_t> out) const {
  if (gcd_u64(n % q_, q_) != 1 && q_ != 1) return false;
  for (std::size_t j = 0; j < components_.size(); ++j) {
    std::uint32_t l = components_[j].dlog[n % components_[j].modulus];
    if (l == kNoLog) return false;
    out[j] = l;
  }
  return true;
}

DirichletCharacter CharacterGroup::character(std::uint64_t index) const {
  if (index >= size_) throw RangeError("character index out of range");
  std::vector<std::uint64_t> b(components_.size());
  for (std::size_t j = 0; j < components_.size(); ++j) {
    b[j] = index % components_[j].order;
    index /= components_[j].order;
  }
  return DirichletCharacter(shared_from_this(), std::move(b));
}

DirichletCharacter CharacterGroup::from_exponents(std::vector<std::uint64_t> exponents) const {
  if (exponents.size() != components_.size()) throw DomainError("exponent vector has wrong length");
  for (std::size_t j = 0; j < components_.size(); ++j) exponents[j] %= components_[j].order;
  return DirichletCharacter(shared_from_this(), std::move(exponents));
}

DirichletCharacter CharacterGroup::principal() const { return character(0); }

std::vector<DirichletCharacter> CharacterGroup::characters() const {
  std::vector<DirichletCharacter> all;
  all.reserve(size_);
  for (std::uint64_t i = 0; i < size_; ++i) all.push_back(character(i));
  return all;
}

std::vector<DirichletCharacter> CharacterGroup::real_characters() const {
  // Real characters have b_j in {0, ord_j / 2}: enumerate those choices directly.
  std::vector<std::size_t> even;
  for (std::size_t j = 0; j < components_.size(); ++j)
    if (components_[j].order % 2 == 0) even.push_back(j);
  std::vector<DirichletCharacter> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << even.size()); ++mask) {
    std::vector<std::uint64_t> b(components_.size(), 0);
    for (std::size_t i = 0; i < even.size(); ++i)
      if (mask >> i & 1) b[even[i]] = components_[even[i]].order / 2;
    out.push_back(DirichletCharacter(shared_from_this(), std::move(b)));
  }
  std::sort(out.begin(), out.end(),
            [](const DirichletCharacter& a, const DirichletCharacter& b) { return a.index() < b.index(); });
  return out;
}

DirichletCharacter::DirichletCharacter(std::shared_ptr<const CharacterGroup> group,
                                       std::vector<std::uint64_t> exponents)
    : group_(std::move(group)), exponents_(std::move(exponents)) {
  const auto comps = group_->components();
  order_ = 1;
  for (std::size_t j = 0; j < comps.size(); ++j)
    order_ = std::lcm(order_, comps[j].order / std::gcd(exponents_[j], comps[j].order));

  // Conductor, one prime power at a time.
  conductor_ = 1;
  for (std::size_t j = 0; j < comps.size(); ++j) {
    const auto& c = comps[j];
    unsigned f = 0;
    if (c.kind == CharacterGroup::Kind::two_sign) {
      // The 5-component, when present, immediately follows the sign component.
      const bool has_five = j + 1 < comps.size() && comps[j + 1].kind == CharacterGroup::Kind::two_five;
      const std::uint64_t b_sign = exponents_[j];
      const std::uint64_t b_five = has_five ? exponents_[j + 1] : 0;
      if (b_five != 0)
        f = c.prime_exponent - valuation(b_five, 2);
      else if (b_sign != 0)
        f = 2;
      if (has_five) ++j;
    } else if (exponents_[j] != 0) {
      unsigned v = std::min(valuation(exponents_[j], c.prime), c.prime_exponent - 1);
      f = c.prime_exponent - v;
    }
    for (unsigned i = 0; i < f; ++i) conductor_ *= c.prime;
  }
}

std::uint64_t DirichletCharacter::index() const {
  const auto comps = group_->components();
  std::uint64_t idx = 0;
  for (std::size_t j = comps.size(); j-- > 0;) idx = idx * comps[j].order + exponents_[j];
  return idx;
}

CharValue DirichletCharacter::value(std::uint64_t n) const {
  const auto& g = *group_;
  const std::uint64_t L = g.exponent();
  const auto comps = g.components();
  if (g.modulus() == 1) return {false, 0, L};
  if (gcd_u64(n % g.modulus(), g.modulus()) != 1) return {true, 0, L};
  unsigned __int128 acc = 0;
  for (std::size_t j = 0; j < comps.size(); ++j) {
    std::uint32_t l = comps[j].dlog[n % comps[j].modulus];
    acc += static_cast<unsigned __int128>(exponents_[j]) * l % comps[j].order * (L / comps[j].order);
  }
  return {false, static_cast<std::uint64_t>(acc % L), L};
}

DirichletCharacter DirichletCharacter::primitive_part() const {
  auto target = CharacterGroup::build(conductor_);
  const std::uint64_t q = modulus();
  const std::uint64_t L = group_->exponent();
  // Part of q supported on primes not dividing the conductor.
  std::uint64_t outside = q;
  for (const auto& [p, k] : factorize(conductor_).factors)
    while (outside % p == 0) outside /= p;
  std::vector<std::uint64_t> b;
  for (const auto& c : target->components()) {
    // A unit mod q reducing to this generator mod the conductor.
    std::uint64_t n = crt_with_one(c.lift, conductor_, outside);
    CharValue v = value(n);
    if (v.zero) throw std::logic_error("primitive_part: lifted generator is not a unit");
    unsigned __int128 scaled = static_cast<unsigned __int128>(v.exponent) * c.order;
    if (scaled % L != 0) throw std::logic_error("primitive_part: character does not factor through conductor");
    b.push_back(static_cast<std::uint64_t>(scaled / L));
  }
  return target->from_exponents(std::move(b));
}

DirichletCharacter DirichletCharacter::conjugate() const {
  const auto comps = group_->components();
  std::vector<std::uint64_t> b(exponents_.size());
  for (std::size_t j = 0; j < b.size(); ++j) b[j] = (comps[j].order - exponents_[j]) % comps[j].order;
  return DirichletCharacter(group_, std::move(b));
}

DirichletCharacter DirichletCharacter::operator*(const DirichletCharacter& other) const {
  if (other.modulus() != modulus()) throw DomainError("character product needs equal moduli");
  const auto comps = group_->components();
  std::vector<std::uint64_t> b(exponents_.size());
  for (std::size_t j = 0; j < b.size(); ++j) b[j] = (exponents_[j] + other.exponents_[j]) % comps[j].order;
  return DirichletCharacter(group_, std::move(b));
}

std::vector<std::complex<double>> DirichletCharacter::value_table() const {
  std::vector<std::complex<double>> t(modulus());
  for (std::uint64_t n = 0; n < modulus(); ++n) t[n] = value(n).to_complex();
  return t;
}

std::vector<int> DirichletCharacter::real_value_table() const {
  if (!is_real()) throw DomainError("real_value_table: character is not real");
  std::vector<int> t(modulus());
  for (std::uint64_t n = 0; n < modulus(); ++n) t[n] = value(n).as_int();
  return t;
}

std::string DirichletCharacter::label() const {
  return "chi" + std::to_string(modulus()) + "_" + std::to_string(index());
}

std::int64_t orthogonality_sum(std::uint64_t q, std::uint64_t a, std::uint64_t b) {
  if (gcd_u64(a % q, q) != 1 && q != 1) throw DomainError("orthogonality_sum: gcd(a, q) > 1");
  if (gcd_u64(b % q, q) != 1 && q != 1) throw DomainError("orthogonality_sum: gcd(b, q) > 1");
  auto g = CharacterGroup::build(q);
  const auto comps = g->components();
  std::vector<std::uint64_t> la(comps.size()), lb(comps.size());
  g->discrete_log(a, la);
  g->discrete_log(b, lb);
  // The sum over the product group factors into one geometric sum per cyclic
  // component: sum_{k < ord} zeta_ord^{k d} is ord when d = 0 (mod ord), else 0.
  std::int64_t total = 1;
  for (std::size_t j = 0; j < comps.size(); ++j) {
    if ((la[j] + comps[j].order - lb[j]) % comps[j].order != 0) return 0;
    total *= static_cast<std::int64_t>(comps[j].order);
  }
  return total;
}

std::uint64_t real_character_census(std::uint64_t q) { return CharacterGroup::build(q)->real_characters().size(); }

} // namespace pntap
