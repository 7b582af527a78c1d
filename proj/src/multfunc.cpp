#include "pntap/multfunc.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "pntap/error.hpp"
#include "pntap/parallel.hpp"

namespace pntap {

namespace {

constexpr double kDiscSlack = 1e-12;
constexpr std::uint64_t kPrimeBlock = 4096;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

double unit_interval(std::uint64_t h) { return static_cast<double>(h >> 11) * 0x1.0p-53; }

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

template <typename T>
T parse_number(const std::string& text, const std::string& name) {
  T value{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) throw DomainError("unknown function name: " + name);
  return value;
}

// Sum of term(p) over primes in (y, x], in fixed blocks of the prime list.
template <typename Term>
double prime_sum(double y, double x, const ArithmeticTables& tables, Term&& term) {
  if (!(y >= 1) || !(x >= y)) throw DomainError("need 1 <= y <= x");
  if (x > static_cast<double>(tables.limit())) throw RangeError("x beyond table limit");
  auto primes = tables.primes_in(y, x);
  return block_sum<double>(0, primes.size(), kPrimeBlock, [&](std::uint64_t lo, std::uint64_t hi) {
    compensated_sum<double> s;
    for (std::uint64_t i = lo; i < hi; ++i) s += term(static_cast<std::uint64_t>(primes[i]));
    return s.get();
  });
}

std::string conjugate_label(const std::string& label) {
  std::string out;
  for (const auto& part : split(label, '*')) {
    if (!out.empty()) out += '*';
    out += part.starts_with('~') ? part.substr(1) : "~" + part;
  }
  return out;
}

} // namespace

MultiplicativeFunction::MultiplicativeFunction(Evaluator at_prime_power, bool completely_multiplicative,
                                               std::string label)
    : eval_(std::move(at_prime_power)), complete_(completely_multiplicative), label_(std::move(label)) {}

std::complex<double> MultiplicativeFunction::at_prime_power(std::uint64_t p, unsigned k) const {
  auto v = eval_(p, k);
  if (!(std::norm(v) <= (1 + kDiscSlack) * (1 + kDiscSlack)))
    throw DomainError("multiplicative function " + label_ + " left the unit disc");
  return v;
}

std::complex<double> MultiplicativeFunction::operator()(const Factorization& f) const {
  std::complex<double> v = 1;
  for (const auto& [p, k] : f.factors) v *= at_prime_power(p, k);
  return v;
}

std::complex<double> MultiplicativeFunction::operator()(std::uint64_t n, const ArithmeticTables& tables) const {
  std::complex<double> v = 1;
  while (n > 1) {
    std::uint64_t p = tables.smallest_prime_factor(n);
    unsigned k = 0;
    while (n % p == 0) {
      n /= p;
      ++k;
    }
    v *= at_prime_power(p, k);
  }
  return v;
}

MultiplicativeFunction MultiplicativeFunction::one() {
  MultiplicativeFunction f([](std::uint64_t, unsigned) { return std::complex<double>(1); }, true, "one");
  f.character_ = build_group(1)->principal();
  return f;
}

MultiplicativeFunction MultiplicativeFunction::mobius() {
  return {[](std::uint64_t, unsigned k) { return std::complex<double>(k == 1 ? -1 : 0); }, false, "mu"};
}

MultiplicativeFunction MultiplicativeFunction::character(const DirichletCharacter& chi) {
  MultiplicativeFunction f(
      [chi](std::uint64_t p, unsigned k) {
        CharValue v = chi.value(p);
        if (v.zero) return std::complex<double>(0);
        v.exponent = static_cast<std::uint64_t>(static_cast<unsigned __int128>(v.exponent) * k % v.order);
        return v.to_complex();
      },
      true, chi.label());
  f.character_ = chi;
  return f;
}

MultiplicativeFunction MultiplicativeFunction::twist(double t) {
  std::ostringstream name;
  name.precision(17);
  name << "nit" << t;
  return {[t](std::uint64_t p, unsigned k) { return std::polar(1.0, t * k * std::log(static_cast<double>(p))); },
          true, name.str()};
}

MultiplicativeFunction MultiplicativeFunction::random(std::uint64_t seed) {
  const std::uint64_t key = splitmix64(seed);
  return {[key](std::uint64_t p, unsigned k) {
            std::uint64_t h = splitmix64(key ^ splitmix64(p));
            double r = std::sqrt(unit_interval(h));
            double theta = 2 * std::numbers::pi * unit_interval(splitmix64(h));
            auto v = std::polar(r, theta);
            return k == 1 ? v : std::pow(v, static_cast<int>(k));
          },
          true, "rand" + std::to_string(seed)};
}

MultiplicativeFunction MultiplicativeFunction::conjugate() const {
  auto eval = eval_;
  MultiplicativeFunction f([eval](std::uint64_t p, unsigned k) { return std::conj(eval(p, k)); }, complete_,
                           conjugate_label(label_));
  if (character_) f.character_ = character_->conjugate();
  return f;
}

MultiplicativeFunction MultiplicativeFunction::operator*(const MultiplicativeFunction& other) const {
  auto a = eval_, b = other.eval_;
  MultiplicativeFunction f([a, b](std::uint64_t p, unsigned k) { return a(p, k) * b(p, k); },
                           complete_ && other.complete_, label_ + "*" + other.label_);
  if (character_ && other.character_) {
    if (character_->modulus() == 1)
      f.character_ = other.character_;
    else if (other.character_->modulus() == 1)
      f.character_ = character_;
    else if (character_->modulus() == other.character_->modulus())
      f.character_ = *character_ * *other.character_;
  }
  return f;
}

MultiplicativeFunction MultiplicativeFunction::parse(const std::string& name) {
  std::optional<MultiplicativeFunction> result;
  for (const auto& raw : split(name, '*')) {
    std::string token = raw;
    bool conj = false;
    while (token.starts_with('~')) {
      conj = !conj;
      token.erase(0, 1);
    }
    std::optional<MultiplicativeFunction> f;
    if (token == "one") {
      f = one();
    } else if (token == "mu") {
      f = mobius();
    } else if (token.starts_with("chi")) {
      auto parts = split(token.substr(3), '_');
      if (parts.size() != 2) throw DomainError("unknown function name: " + name);
      auto q = parse_number<std::uint64_t>(parts[0], name);
      auto index = parse_number<std::uint64_t>(parts[1], name);
      if (q == 0) throw DomainError("character modulus must be positive");
      f = character(build_group(q)->character(index));
    } else if (token.starts_with("nit")) {
      f = twist(parse_number<double>(token.substr(3), name));
    } else if (token.starts_with("rand")) {
      f = random(parse_number<std::uint64_t>(token.substr(4), name));
    } else {
      throw DomainError("unknown function name: " + name);
    }
    if (conj) f = f->conjugate();
    result = result ? *result * *f : *f;
  }
  if (!result) throw DomainError("empty function name");
  return *result;
}

DistanceValue distance(const MultiplicativeFunction& f, const MultiplicativeFunction& g, double y, double x,
                       const ArithmeticTables& tables) {
  double sq = prime_sum(y, x, tables, [&](std::uint64_t p) {
    return (1 - (f.at_prime(p) * std::conj(g.at_prime(p))).real()) / static_cast<double>(p);
  });
  // Terms are nonnegative up to rounding of Re f conj(g) near 1.
  sq = std::max(sq, 0.0);
  return {f.label(), g.label(), y, x, sq, std::sqrt(sq)};
}

TriangleCheck triangle_check(const MultiplicativeFunction& f, const MultiplicativeFunction& g, double y, double x,
                             const ArithmeticTables& tables) {
  auto unit = MultiplicativeFunction::one();
  TriangleCheck r;
  r.lhs = distance(unit, f, y, x, tables).value + distance(unit, g, y, x, tables).value;
  r.rhs = distance(unit, f * g, y, x, tables).value;
  r.slack = r.lhs - r.rhs;
  return r;
}

std::vector<FuzzRecord> triangle_fuzz(std::size_t count, std::uint64_t seed, double y, double x,
                                      const ArithmeticTables& tables) {
  std::vector<FuzzRecord> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i].seed_f = splitmix64(seed + 2 * i);
    out[i].seed_g = splitmix64(seed + 2 * i + 1);
    auto f = MultiplicativeFunction::random(out[i].seed_f);
    auto g = MultiplicativeFunction::random(out[i].seed_g);
    out[i].slack = triangle_check(f, g, y, x, tables).slack;
  }
  return out;
}

double squared_distance_chi_mu_twist(const DirichletCharacter& chi, double t, double y, double x,
                                     const ArithmeticTables& tables) {
  double sq = prime_sum(y, x, tables, [&](std::uint64_t p) {
    auto v = chi(p) * std::polar(1.0, -t * std::log(static_cast<double>(p)));
    return (1 + v.real()) / static_cast<double>(p);
  });
  return std::max(sq, 0.0);
}

double prime_reciprocal_sum(double y, double x, const ArithmeticTables& tables) {
  return prime_sum(y, x, tables, [](std::uint64_t p) { return 1.0 / static_cast<double>(p); });
}

} // namespace pntap
