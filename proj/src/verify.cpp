#include "pntap/verify.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <json.hpp>
#include <sstream>

#include "pntap/characters.hpp"
#include "pntap/dirichlet_series.hpp"
#include "pntap/error.hpp"
#include "pntap/expsums.hpp"
#include "pntap/multfunc.hpp"
#include "pntap/parallel.hpp"
#include "pntap/pnt_ap.hpp"
#include "pntap/siegel.hpp"
#include "pntap/sieve_weights.hpp"

namespace pntap {

namespace {

// Monitors report fitted constants and trends; everything else gates the exit code.
const std::map<std::string, CheckKind>& manifest() {
  static const std::map<std::string, CheckKind> m{
      {"arith.psi_values", CheckKind::monitor},
      {"distance.chi_mu_twist", CheckKind::monitor},
      {"series.lchil1", CheckKind::monitor},
      {"series.lchil2", CheckKind::monitor},
      {"series.lchil3", CheckKind::monitor},
      {"expsums.chinit", CheckKind::monitor},
      {"sieve.mean_value", CheckKind::monitor},
      {"siegel.scaling", CheckKind::monitor},
      {"siegel.triple_shape", CheckKind::monitor},
      {"pnt-ap.error_profile", CheckKind::monitor},
      {"pnt-ap.lambda_chi_trend", CheckKind::monitor},
  };
  return m;
}

std::string num(double v) { return format_number(v); }
std::string num(std::uint64_t v) { return std::to_string(v); }
std::string num(std::int64_t v) { return std::to_string(v); }
std::string num(int v) { return std::to_string(v); }
std::string num(unsigned v) { return std::to_string(v); }

class Builder {
public:
  explicit Builder(std::string suite) { report_.suite = std::move(suite); }

  // Runs fn, which returns pass/fail and fills the detail; exceptions fail the check.
  void check(const std::string& name, const std::function<bool(std::string&)>& fn) {
    Check c;
    c.id = report_.suite + "." + name;
    c.kind = check_kind(c.id);
    try {
      c.pass = fn(c.detail);
    } catch (const std::exception& e) {
      c.pass = false;
      c.detail = std::string("error: ") + e.what();
    }
    if (c.kind == CheckKind::monitor) c.pass = true;
    report_.checks.push_back(std::move(c));
  }

  ReportTable& table(std::string name, std::vector<std::string> columns) {
    report_.tables.push_back({std::move(name), std::move(columns), {}});
    return report_.tables.back();
  }

  SuiteReport take() { return std::move(report_); }

private:
  SuiteReport report_;
};

std::uint64_t cap(std::uint64_t want, const ArithmeticTables& tables) { return std::min(want, tables.limit()); }

// --- arith ---------------------------------------------------------------

SuiteReport arith_suite(const VerifyConfig&, const ArithmeticTables& tables) {
  Builder b("arith");
  const std::uint64_t n_max = cap(1000000, tables);
  b.check("sieve_exactness", [&](std::string& detail) {
    constexpr std::uint64_t block = 1 << 14;
    const std::uint64_t blocks = (n_max + block - 1) / block;
    std::vector<std::uint64_t> bad(blocks, 0), first(blocks, 0);
    parallel_for(blocks, [&](std::size_t i) {
      std::uint64_t lo = 1 + i * block, hi = std::min(n_max, lo + block - 1);
      for (std::uint64_t n = lo; n <= hi; ++n) {
        Factorization f = factorize(n);
        int mu = 1;
        std::uint64_t phi = 1;
        for (const auto& [p, k] : f.factors) {
          mu = k > 1 ? 0 : -mu;
          phi *= p - 1;
          for (unsigned j = 1; j < k; ++j) phi *= p;
        }
        std::optional<PrimePower> lambda;
        if (f.factors.size() == 1) lambda = f.factors[0];
        std::uint64_t spf = f.factors.empty() ? kInfinitePrime : f.factors.front().p;
        std::uint64_t gpf = f.factors.empty() ? 1 : f.factors.back().p;
        auto tf = tables.factorize(n);
        bool ok = tables.mobius(n) == mu && tables.totient(n) == phi && tables.mangoldt(n) == lambda &&
                  tables.smallest_prime_factor(n) == spf && tables.greatest_prime_factor(n) == gpf &&
                  tau_r(tf, 2) == tau_r(f, 2) && tau_r(tf, 3) == tau_r(f, 3) && tau_r(tf, 4) == tau_r(f, 4);
        if (!ok) {
          if (!bad[i]) first[i] = n;
          ++bad[i];
        }
      }
    });
    std::uint64_t total = 0, first_bad = 0;
    for (std::size_t i = 0; i < blocks; ++i) {
      if (bad[i] && !first_bad) first_bad = first[i];
      total += bad[i];
    }
    detail = "n <= " + num(n_max) + ", mismatches " + num(total) + (total ? ", first " + num(first_bad) : "");
    return total == 0;
  });
  b.check("psi_theta_identity", [&](std::string& detail) {
    double worst = 0;
    for (double x : {10.0, 1e3, 12345.6, 1e5, static_cast<double>(n_max)}) {
      if (x > static_cast<double>(tables.limit())) continue;
      compensated_sum<double> s;
      for (int k = 1; std::pow(x, 1.0 / k) >= 2; ++k) s += theta_sum(std::floor(std::pow(x, 1.0 / k) + 1e-9), tables);
      double psi = chebyshev_psi(x, tables);
      worst = std::max(worst, std::abs(psi - s.get()) / std::max(psi, 1.0));
    }
    detail = "max relative " + num(worst);
    return worst <= 1e-12;
  });
  auto& t = b.table("psi", {"x", "psi", "psi_over_x"});
  b.check("psi_values", [&](std::string& detail) {
    for (double x = 10; x <= static_cast<double>(tables.limit()); x *= 10) {
      double psi = chebyshev_psi(x, tables);
      t.rows.push_back({num(x), num(psi), num(psi / x)});
    }
    detail = num(static_cast<std::uint64_t>(t.rows.size())) + " rows";
    return true;
  });
  return b.take();
}

// --- characters ----------------------------------------------------------

SuiteReport characters_suite(const VerifyConfig&, const ArithmeticTables& tables) {
  Builder b("characters");
  const std::uint64_t q_max = std::min<std::uint64_t>(500, tables.limit());
  struct PerQ {
    bool count = true, real = true, orth = true, conductor = true;
    std::uint64_t real_count = 0;
  };
  std::vector<PerQ> per(q_max + 1);
  parallel_for(q_max, [&](std::size_t i) {
    const std::uint64_t q = i + 1;
    auto& r = per[q];
    auto group = build_group(q);
    auto chars = group->characters();
    r.count = chars.size() == tables.totient(q);
    r.real_count = group->real_characters().size();
    r.real = r.real_count <= 2 * tau_r(q, 2);
    std::vector<std::uint64_t> units;
    for (std::uint64_t n = 1; n <= q; ++n)
      if (gcd_u64(n, q) == 1) units.push_back(n % q);
    const auto phi = static_cast<std::int64_t>(units.size());
    for (auto u : units) {
      if (orthogonality_sum(q, 1, u) != (u % q == 1 % q ? phi : 0)) r.orth = false;
      if (orthogonality_sum(q, u, u) != phi) r.orth = false;
    }
    for (const auto& chi : chars) {
      // Each value of a character of order d is taken phi/d times on the units.
      std::vector<std::uint64_t> hist(chi.order(), 0);
      auto prim = chi.primitive_part();
      for (auto u : units) {
        auto v = chi.value(u);
        auto w = prim.value(u);
        ++hist[v.exponent * chi.order() / v.order % chi.order()];
        if (w.zero || v.zero ||
            static_cast<unsigned __int128>(v.exponent) * w.order != static_cast<unsigned __int128>(w.exponent) * v.order)
          r.conductor = false;
      }
      for (auto h : hist)
        if (h * chi.order() != units.size()) r.orth = false;
    }
  });
  auto summarize = [&](auto member, const char* what) {
    return [&, member, what](std::string& detail) {
      std::uint64_t bad = 0, first = 0;
      for (std::uint64_t q = 1; q <= q_max; ++q)
        if (!(per[q].*member)) {
          if (!bad) first = q;
          ++bad;
        }
      detail = std::string(what) + " for q <= " + num(q_max) + ": " + num(bad) + " failures" +
               (bad ? ", first q = " + num(first) : "");
      return bad == 0;
    };
  };
  b.check("count_is_phi", summarize(&PerQ::count, "character count = phi(q)"));
  b.check("orthogonality", summarize(&PerQ::orth, "exact orthogonality"));
  b.check("real_count", summarize(&PerQ::real, "real characters <= 2 tau_2(q)"));
  b.check("primitive_part", summarize(&PerQ::conductor, "chi = primitive part on units"));
  auto& t = b.table("real_census", {"q", "real_characters", "bound"});
  for (std::uint64_t q = 1; q <= std::min<std::uint64_t>(q_max, 60); ++q)
    t.rows.push_back({num(q), num(per[q].real_count), num(2 * tau_r(q, 2))});
  return b.take();
}

// --- distance ------------------------------------------------------------

SuiteReport distance_suite(const VerifyConfig& config, const ArithmeticTables& tables) {
  Builder b("distance");
  const double x = static_cast<double>(cap(100000, tables));
  auto& fuzz = b.table("triangle_fuzz", {"seed_f", "seed_g", "slack"});
  b.check("triangle_fuzz", [&](std::string& detail) {
    auto records = triangle_fuzz(1000, config.seed, 2, x, tables);
    double worst = INFINITY;
    for (const auto& r : records) {
      fuzz.rows.push_back({num(r.seed_f), num(r.seed_g), num(r.slack)});
      worst = std::min(worst, r.slack);
    }
    detail = "1000 pairs, y = 2, x = " + num(x) + ", min slack " + num(worst);
    return worst >= -1e-12;
  });
  auto& structured = b.table("triangle_structured", {"f", "g", "slack"});
  b.check("triangle_structured", [&](std::string& detail) {
    std::vector<MultiplicativeFunction> fs{MultiplicativeFunction::mobius()};
    for (std::uint64_t q = 1; q <= 12; ++q)
      for (const auto& chi : build_group(q)->characters()) fs.push_back(MultiplicativeFunction::character(chi));
    for (double t : {1.0, -1.0, 5.0, -5.0}) fs.push_back(MultiplicativeFunction::twist(t));
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < fs.size(); ++i)
      for (std::size_t j = i; j < fs.size(); ++j) pairs.emplace_back(i, j);
    std::vector<double> slack(pairs.size());
    parallel_for(pairs.size(), [&](std::size_t k) {
      slack[k] = triangle_check(fs[pairs[k].first], fs[pairs[k].second], 2, x, tables).slack;
    });
    double worst = INFINITY;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      structured.rows.push_back({fs[pairs[k].first].label(), fs[pairs[k].second].label(), num(slack[k])});
      worst = std::min(worst, slack[k]);
    }
    detail = num(static_cast<std::uint64_t>(pairs.size())) + " pairs, min slack " + num(worst);
    return worst >= -1e-12;
  });
  auto& twist = b.table("chi_mu_twist", {"chi", "t", "y", "x", "D2"});
  b.check("chi_mu_twist", [&](std::string& detail) {
    for (std::uint64_t q : {3u, 4u, 5u})
      for (const auto& chi : build_group(q)->characters())
        for (double t : {0.0, 1.0, 5.0}) {
          double d2 = squared_distance_chi_mu_twist(chi, t, 10, x, tables);
          twist.rows.push_back({chi.label(), num(t), "10", num(x), num(d2)});
        }
    detail = num(static_cast<std::uint64_t>(twist.rows.size())) + " rows";
    return true;
  });
  return b.take();
}

// --- series --------------------------------------------------------------

SuiteReport series_suite(const VerifyConfig& config, const ArithmeticTables& tables) {
  Builder b("series");
  std::vector<MultiplicativeFunction> fs{MultiplicativeFunction::mobius()};
  for (std::uint64_t q : {3u, 4u, 5u})
    for (const auto& chi : build_group(q)->characters()) fs.push_back(MultiplicativeFunction::character(chi));
  std::vector<double> xs, xs_fine;
  for (double e = 2; e <= 6; e += 1)
    if (std::pow(10.0, e) <= static_cast<double>(tables.limit())) xs.push_back(std::pow(10.0, e));
  for (double e = 2; e <= 6; e += 0.5)
    if (std::pow(10.0, e) <= static_cast<double>(tables.limit())) xs_fine.push_back(std::pow(10.0, e));
  const std::vector<double> ts{0, 1, -1, 5, -5};
  const std::vector<double> ts_fine{0, 0.5, -0.5, 1, -1, 2, -2, 3, -3, 5, -5};

  double coarse_sup = 0, coarse_cert = 0, fine_sup = 0;
  auto& l1 = b.table("l1", {"f", "y", "x", "t", "sigma", "log_abs_L", "prime_sum", "residual", "certificate"});
  b.check("l1_ceiling", [&](std::string& detail) {
    for (const auto& f : fs)
      for (double y : {2.0, 10.0}) {
        auto r = l1_residual(f, y, xs, ts, tables);
        for (const auto& row : r.rows)
          l1.rows.push_back({f.label(), num(y), num(row.x), num(row.t), num(row.sigma), num(row.log_abs_L),
                             num(row.prime_sum), num(row.residual), num(row.certificate)});
        coarse_sup = std::max(coarse_sup, r.sup);
        coarse_cert = std::max(coarse_cert, r.sup_certified);
      }
    detail = "sup " + num(coarse_sup) + ", sup + certificate " + num(coarse_cert) + " (ceiling 3)";
    return coarse_cert <= 3.0;
  });
  b.check("l1_stability", [&](std::string& detail) {
    for (const auto& f : fs)
      for (double y : {2.0, 10.0}) fine_sup = std::max(fine_sup, l1_residual(f, y, xs_fine, ts_fine, tables).sup);
    detail = "refined sup " + num(fine_sup) + ", coarse sup " + num(coarse_sup);
    return fine_sup <= 2 * coarse_sup;
  });

  b.check("ordered_partitions", [&](std::string& detail) {
    for (unsigned k = 1; k <= 20; ++k)
      if (ordered_partition_count(k) != (std::uint64_t{1} << (k - 1))) {
        detail = "mismatch at k = " + num(k);
        return false;
      }
    detail = "2^{k-1} for k <= 20";
    return true;
  });
  auto& faa = b.table("faa", {"sigma", "k", "faa_re", "faa_im", "recursion_re", "recursion_im", "relative", "bound"});
  b.check("faa_vs_recursion", [&](std::string& detail) {
    SeriesOptions so;
    so.cutoff = cap(100000, tables);
    SeriesContext ctx(MultiplicativeFunction::mobius(), 2, tables, so);
    double worst = 0;
    bool within = true;
    for (double sigma : {1.1, 1.5, 2.0}) {
      auto bundle = evaluate_bundle(ctx, {sigma, 0}, 5);
      auto G = log_derivative_recursion(bundle.values);
      for (unsigned k = 1; k <= 5; ++k) {
        std::vector<std::complex<double>> sub(bundle.values.begin(), bundle.values.begin() + k + 1);
        auto r = faa_log_derivative(make_bundle(sub));
        double rel = std::abs(r.value - G[k - 1]) / std::max(std::abs(G[k - 1]), 1e-300);
        worst = std::max(worst, rel);
        within = within && std::abs(r.value) <= r.bound;
        faa.rows.push_back({num(sigma), num(k), num(r.value.real()), num(r.value.imag()), num(G[k - 1].real()),
                            num(G[k - 1].imag()), num(rel), num(r.bound)});
      }
    }
    detail = "L_2(s, mu) truncated at n <= " + num(*so.cutoff) + ", max relative " + num(worst) +
             (within ? ", within ceiling" : ", ceiling violated");
    return worst <= 1e-8 && within;
  });

  MonitorOptions mo;
  mo.k = 1;
  mo.tolerance = std::max(config.tolerance, 1e-6);
  for (const char* name : {"lchil1", "lchil2", "lchil3"}) {
    auto& t = b.table(name, {"chi", "sigma", "t", "y", "lhs", "rhs", "ratio", "certificate"});
    b.check(name, [&, name](std::string& detail) {
      double sup = 0;
      for (std::uint64_t q : {3u, 4u, 5u})
        for (const auto& chi : build_group(q)->characters()) {
          MonitorReport r;
          std::string n = name;
          if (n == "lchil1") r = monitor_lchil1(chi, MonitorGrid::coarse(), mo, tables);
          if (n == "lchil2") r = monitor_lchil2(chi, MonitorGrid::coarse(), mo, tables);
          if (n == "lchil3") r = monitor_lchil3(chi, MonitorGrid::coarse(), mo, tables);
          for (const auto& row : r.rows)
            t.rows.push_back({chi.label(), num(row.sigma), num(row.t), num(row.y), num(row.lhs), num(row.rhs),
                              num(row.ratio), num(row.certificate)});
          sup = std::max(sup, r.sup_ratio);
        }
      detail = "sup ratio " + num(sup);
      return true;
    });
  }
  return b.take();
}

// --- expsums -------------------------------------------------------------

SuiteReport expsums_suite(const VerifyConfig& config, const ArithmeticTables& tables) {
  Builder b("expsums");
  struct Sample {
    double t, u;
    std::uint64_t N;
    ExpSumResult r;
  };
  std::vector<Sample> samples;
  for (double t = 10; t <= config.tmax * (1 + 1e-9); t *= 10)
    for (std::uint64_t N = 2; static_cast<double>(N) <= std::min(t * t, 1e6); N *= 2)
      for (double u : {0.0, 0.5, 1.0}) samples.push_back({t, u, N, {}});
  parallel_for(samples.size(), [&](std::size_t i) { samples[i].r = dyadic_exp_sum({samples[i].N, samples[i].u, samples[i].t}); });

  auto& scan = b.table("nit_scan", {"N", "t", "u", "abs_sum", "ceiling", "margin", "phase_warning"});
  for (const auto& s : samples) {
    double a = std::abs(s.r.value);
    scan.rows.push_back({num(s.N), num(s.t), num(s.u), num(a), num(s.r.ceiling), num(s.r.ceiling - a),
                         s.r.phase_warning ? "1" : "0"});
  }
  b.check("trivial_bound", [&](std::string& detail) {
    std::uint64_t bad = 0;
    for (const auto& s : samples) bad += std::abs(s.r.value) > static_cast<double>(s.N) * (1 + 1e-12);
    detail = num(static_cast<std::uint64_t>(samples.size())) + " samples, " + num(bad) + " above N";
    return bad == 0;
  });
  b.check("nit_ceiling", [&](std::string& detail) {
    std::uint64_t bad = 0;
    std::string first;
    for (const auto& s : samples)
      if (std::abs(s.r.value) > s.r.ceiling) {
        if (!bad)
          first = ", first (t, N, u) = (" + num(s.t) + ", " + num(s.N) + ", " + num(s.u) + ") with |sum| - ceiling = " +
                  num(std::abs(s.r.value) - s.r.ceiling);
        ++bad;
      }
    detail = num(static_cast<std::uint64_t>(samples.size())) + " samples, " + num(bad) + " above the ceiling" + first;
    return bad == 0;
  });
  b.check("prefix_recombination", [&](std::string& detail) {
    double worst = 0;
    for (double t : {100.0, 1e3, 1e5})
      for (std::uint64_t N : {10000u, 123457u})
        for (double u : {0.0, 0.5, 1.0}) {
          auto a = prefix_exp_sum(N, u, t), c = prefix_exp_sum_dyadic(N, u, t);
          worst = std::max(worst, std::abs(a - c) / static_cast<double>(N));
        }
    detail = "max |direct - dyadic| / N = " + num(worst);
    return worst <= 1e-8;
  });
  auto& chinit = b.table("chinit", {"chi", "t", "x", "y", "abs_value", "discrepancy", "error_shape", "ratio",
                                    "secondary_shape", "hypothesis"});
  b.check("chinit", [&](std::string& detail) {
    const double x = static_cast<double>(cap(1000000, tables));
    double sup = 0;
    for (std::uint64_t q : {3u, 5u})
      for (const auto& chi : build_group(q)->characters())
        for (double t : {0.0, 2.0, 20.0})
          for (double y : {2.0, 10.0}) {
            auto r = sifted_character_sum(chi, t, x, y, tables);
            chinit.rows.push_back({chi.label(), num(t), num(x), num(y), num(std::abs(r.value)), num(r.discrepancy),
                                   num(r.error_shape), num(r.ratio), num(r.secondary_shape),
                                   r.hypothesis ? "1" : "0"});
            sup = std::max(sup, r.ratio);
          }
    detail = "sup ratio " + num(sup);
    return true;
  });
  return b.take();
}

// --- sieve ---------------------------------------------------------------

SuiteReport sieve_suite(const VerifyConfig&, const ArithmeticTables& tables) {
  Builder b("sieve");
  const std::uint64_t n_max = cap(100000, tables);
  auto& t = b.table("sandwich", {"y", "u", "nmax", "sifted", "violations", "min_minus", "max_plus"});
  b.check("sandwich", [&](std::string& detail) {
    std::uint64_t bad = 0;
    for (double y : {5.0, 10.0, 30.0})
      for (double u : {2.0, 3.0, 4.0}) {
        auto w = build_weights(y, u, tables);
        auto r = sandwich_check(w, n_max, tables);
        t.rows.push_back({num(y), num(u), num(n_max), num(r.sifted), num(r.violations), num(r.min_minus),
                          num(r.max_plus)});
        bad += r.violations;
      }
    detail = "9 configurations, n <= " + num(n_max) + ", " + num(bad) + " violations";
    return bad == 0;
  });
  auto& mv = b.table("mean_value", {"y", "u", "g", "sign", "sum", "product", "ratio", "deviation", "fitted_c"});
  b.check("mean_value", [&](std::string& detail) {
    double worst_c = 0;
    for (double y : {10.0, 30.0})
      for (double u : {2.0, 3.0, 4.0, 6.0}) {
        auto w = build_weights(y, u, tables);
        for (const char* g : {"one", "inverse_p"})
          for (int sign : {+1, -1}) {
            auto r = mean_value(
                w,
                [g](std::uint64_t p) { return std::string(g) == "one" ? 1.0 : 1.0 / static_cast<double>(p); },
                sign);
            mv.rows.push_back({num(y), num(u), g, num(sign), num(r.sum), num(r.product), num(r.ratio),
                               num(r.deviation), num(r.fitted_c)});
            worst_c = std::max(worst_c, r.fitted_c);
          }
      }
    detail = "max fitted C in |ratio - 1| <= C e^{-u}: " + num(worst_c);
    return true;
  });
  return b.take();
}

// --- siegel --------------------------------------------------------------

SuiteReport siegel_suite(const VerifyConfig& config, const ArithmeticTables& tables) {
  Builder b("siegel");
  auto& scan_table = b.table("scan", {"conductor", "index", "parity", "L1", "certificate", "sqrt_q_L1",
                                      "q_0.1_L1", "q_0.5_L1"});
  SiegelScan scan;
  b.check("positivity", [&](std::string& detail) {
    scan = siegel_scan(config.qmax, config.tolerance, tables);
    for (const auto& r : scan.rows)
      scan_table.rows.push_back({num(r.conductor), num(r.index), r.even ? "even" : "odd", num(r.L),
                                 num(r.certificate), num(r.sqrt_q_L), num(r.q_eps_01_L), num(r.q_eps_05_L)});
    detail = num(static_cast<std::uint64_t>(scan.rows.size())) + " characters with conductor <= " + num(config.qmax);
    return scan.all_positive && !scan.rows.empty();
  });
  b.check("sqrt_q_floor", [&](std::string& detail) {
    detail = "min sqrt(q) L(1, chi) = " + num(scan.min_sqrt_q_L) + " at conductor " + num(scan.argmin_conductor) +
             " (floor 0.4)";
    return !scan.rows.empty() && scan.min_sqrt_q_L >= 0.4;
  });
  b.check("scaling", [&](std::string& detail) {
    detail = "min q^0.1 L(1, chi) = " + num(scan.min_q_eps_01_L);
    return true;
  });

  b.check("zerol1_hypothesis", [&](std::string& detail) {
    std::vector<DirichletCharacter> chars;
    for (std::uint64_t q = 3; q <= 50; ++q)
      for (auto& chi : real_primitive_characters(q)) chars.push_back(chi);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < chars.size(); ++i)
      for (std::size_t j = i; j < chars.size(); ++j) pairs.emplace_back(i, j);
    const std::uint64_t n_max = cap(10000, tables);
    std::vector<char> ok(pairs.size(), 1);
    parallel_for(pairs.size(), [&](std::size_t k) {
      ok[k] = zerol1_hypothesis_check(chars[pairs[k].first], chars[pairs[k].second], n_max, tables).pass;
    });
    std::uint64_t bad = std::count(ok.begin(), ok.end(), 0);
    detail = num(static_cast<std::uint64_t>(pairs.size())) + " pairs with conductors <= 50, n <= " + num(n_max) +
             ", " + num(bad) + " failures";
    return bad == 0;
  });
  auto& conv = b.table("convolution", {"q1", "q2", "x", "pair_sum", "pair_bound", "triple_sum", "triple_asserted",
                                       "triple_bound", "fitted_c"});
  b.check("pair_sum_bound", [&](std::string& detail) {
    bool all = true;
    auto c3 = real_primitive_characters(3), c4 = real_primitive_characters(4), c5 = real_primitive_characters(5);
    std::vector<std::pair<DirichletCharacter, DirichletCharacter>> pairs{
        {c3[0], c3[0]}, {c3[0], c4[0]}, {c4[0], c5[0]}};
    for (auto& [a, c] : pairs)
      for (double x : {1e2, 1e4, 1e6}) {
        if (x > static_cast<double>(tables.limit())) continue;
        auto r = convolution_partial_sums(a, c, x, tables);
        conv.rows.push_back({num(a.modulus()), num(c.modulus()), num(x), num(r.pair_sum), num(r.pair_bound),
                             num(r.triple_sum), r.triple_asserted ? "1" : "0", num(r.triple_bound),
                             num(r.fitted_c)});
        all = all && r.ok();
      }
    detail = num(static_cast<std::uint64_t>(conv.rows.size())) + " rows";
    return all;
  });
  b.check("triple_shape", [&](std::string& detail) {
    double worst = 0;
    for (const auto& row : conv.rows) worst = std::max(worst, std::stod(row[8]));
    detail = "max fitted C in |sum f| <= C q^{4/3} x^{2/3} log x: " + num(worst);
    return true;
  });

  b.check("gamma_0", [&](std::string& detail) {
    double g = eta_constants(0).gamma_eta;
    double err = std::abs(g - 0.57721566490153286061);
    detail = "gamma_0 = " + num(g) + ", |gamma_0 - Euler-Mascheroni| = " + num(err);
    return err <= 1e-6;
  });
  auto& ps = b.table("partial_sums", {"eta", "B", "residual_inverse", "residual_log", "bound"});
  b.check("partial_sum_identities", [&](std::string& detail) {
    bool all = true;
    for (double eta : {0.0, 0.01, 0.05})
      for (std::uint64_t B : {10u, 100u, 1000u, 10000u, 100000u}) {
        auto r = partial_sum_identity_check(eta, B);
        ps.rows.push_back({num(eta), num(B), num(r.residual_inverse), num(r.residual_log), num(r.bound)});
        all = all && r.ok();
      }
    detail = "eta in {0, 0.01, 0.05}, B <= 1e5";
    return all;
  });
  return b.take();
}

// --- pnt-ap --------------------------------------------------------------

SuiteReport pnt_ap_suite(const VerifyConfig& config, const ArithmeticTables& tables) {
  Builder b("pnt-ap");
  const double lim = static_cast<double>(tables.limit());
  const double x_top = std::min(1e7, lim);
  b.check("reconciliation", [&](std::string& detail) {
    double worst = 0;
    std::vector<double> xs;
    for (double x : {1e3, 1e5, 1e7})
      if (x <= lim) xs.push_back(x);
    for (std::uint64_t q = 1; q <= 50; ++q)
      for (double x : xs) worst = std::max(worst, reconcile(x, q, tables).relative);
    detail = "q <= 50, " + num(static_cast<std::uint64_t>(xs.size())) + " x values, max relative " + num(worst);
    return worst <= 1e-9;
  });
  b.check("orthogonality", [&](std::string& detail) {
    bool all = true;
    double worst = 0;
    for (auto [q, x] : {std::pair<std::uint64_t, double>{3, 100}, {12, 1e5}, {7, 1e4}})
      for (std::uint64_t a = 1; a < q; ++a) {
        if (gcd_u64(a, q) != 1) continue;
        auto c = orthogonality_decomposition(std::min(x, lim), q, a, tables);
        all = all && c.ok();
        worst = std::max(worst, c.residual);
      }
    detail = "max residual " + num(worst);
    return all;
  });
  auto& prof = b.table("profile", {"q", "a", "x", "psi", "main", "error", "normalized", "fitted_cA"});
  ErrorProfile profile;
  std::vector<double> grid;
  for (double x : {1e5, 1e6, 1e7})
    if (x <= lim) grid.push_back(x);
  b.check("error_profile", [&](std::string& detail) {
    profile = theorem_error_profile({3, 4, 5, 7, 12}, grid, tables);
    for (const auto& row : profile.rows) {
      const auto& r = row.result;
      prof.rows.push_back({num(r.q), num(r.a), num(r.x), num(r.psi), num(r.main), num(r.error), num(r.normalized),
                           num(row.fitted_cA)});
    }
    detail = num(static_cast<std::uint64_t>(profile.rows.size())) + " rows";
    return true;
  });
  b.check("normalized_error", [&](std::string& detail) {
    double worst = 0;
    for (auto [q, x, v] : profile.max_normalized)
      if (x == x_top) worst = std::max(worst, v);
    detail = "q in {3, 4, 5, 7, 12}, x = " + num(x_top) + ", max_a normalized error " + num(worst) + " (ceiling 0.02)";
    return !profile.max_normalized.empty() && worst <= 0.02;
  });
  b.check("psi_sweep", [&](std::string& detail) {
    auto s = psi_sweep(1e4, x_top, tables);
    detail = "sup |psi(x) - x| / x on [1e4, " + num(x_top) + "] = " + num(s.max_relative) + " at x = " + num(s.argmax);
    return s.max_relative <= 0.05;
  });
  b.check("eta_positive", [&](std::string& detail) {
    const std::uint64_t q_max = std::min<std::uint64_t>(500, tables.limit());
    std::vector<double> eta(q_max + 1, 1);
    parallel_for(q_max, [&](std::size_t i) {
      auto e = eta_q(i + 1, tables, std::max(config.tolerance, 1e-6));
      eta[i + 1] = e ? *e : 1;
    });
    double lo = *std::min_element(eta.begin() + 1, eta.end());
    detail = "min eta(q) for q <= " + num(q_max) + " = " + num(lo);
    return lo > 0;
  });
  auto& trend = b.table("lambda_chi", {"chi", "x", "re_sum", "im_sum", "normalized"});
  b.check("lambda_chi_trend", [&](std::string& detail) {
    std::vector<double> xs;
    for (double x : {1e4, 1e5, 1e6})
      if (x <= lim) xs.push_back(x);
    auto chi = real_primitive_characters(3)[0];
    auto p = lambda_chi_profile(chi, xs, {1, 2, 3}, tables);
    bool decreasing = true;
    for (std::size_t i = 0; i < p.points.size(); ++i) {
      trend.rows.push_back({p.label, num(p.points[i].x), num(p.points[i].sum.real()), num(p.points[i].sum.imag()),
                            num(p.points[i].normalized)});
      if (i && p.points[i].normalized >= p.points[i - 1].normalized) decreasing = false;
    }
    detail = std::string("|sum Lambda_chi| / x ") + (decreasing ? "decreasing" : "not decreasing") + ", M(chi) = " +
             num(p.M);
    return true;
  });
  return b.take();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

} // namespace

bool SuiteReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass || c.kind == CheckKind::monitor; });
}

CheckKind check_kind(const std::string& id) {
  auto it = manifest().find(id);
  return it == manifest().end() ? CheckKind::hard : it->second;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"arith", "characters", "distance", "series",
                                              "expsums", "sieve", "siegel", "pnt-ap"};
  return names;
}

SuiteReport run_suite(const std::string& suite, const VerifyConfig& config, const ArithmeticTables& tables) {
  if (suite == "arith") return arith_suite(config, tables);
  if (suite == "characters") return characters_suite(config, tables);
  if (suite == "distance") return distance_suite(config, tables);
  if (suite == "series") return series_suite(config, tables);
  if (suite == "expsums") return expsums_suite(config, tables);
  if (suite == "sieve") return sieve_suite(config, tables);
  if (suite == "siegel") return siegel_suite(config, tables);
  if (suite == "pnt-ap") return pnt_ap_suite(config, tables);
  throw DomainError("unknown suite: " + suite);
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void write_table(const ReportTable& table, const std::filesystem::path& path, ReportFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CacheError("cannot write " + path.string());
  write_table(table, out, format);
}

void write_table(const ReportTable& table, std::ostream& out, ReportFormat format) {
  if (format == ReportFormat::csv) {
    for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << csv_field(table.columns[i]);
    out << '\n';
    for (const auto& row : table.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_field(row[i]);
      out << '\n';
    }
    return;
  }
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj;
    for (std::size_t i = 0; i < row.size() && i < table.columns.size(); ++i) obj[table.columns[i]] = row[i];
    rows.push_back(obj);
  }
  out << rows.dump(1) << '\n';
}

void write_report(const SuiteReport& report, const std::filesystem::path& dir, ReportFormat format) {
  std::filesystem::create_directories(dir);
  const std::string ext = format == ReportFormat::csv ? ".csv" : ".json";
  ReportTable checks{"checks", {"check", "kind", "status", "detail"}, {}};
  for (const auto& c : report.checks)
    checks.rows.push_back({c.id, c.kind == CheckKind::hard ? "hard" : "monitor",
                           c.kind == CheckKind::monitor ? "MONITOR" : (c.pass ? "PASS" : "FAIL"), c.detail});
  write_table(checks, dir / (report.suite + "_checks" + ext), format);
  for (const auto& t : report.tables) write_table(t, dir / (report.suite + "_" + t.name + ext), format);
}

} // namespace pntap
