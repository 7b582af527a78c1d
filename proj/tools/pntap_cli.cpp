#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "pntap/arith.hpp"
#include "pntap/characters.hpp"
#include "pntap/dirichlet_series.hpp"
#include "pntap/error.hpp"
#include "pntap/expsums.hpp"
#include "pntap/multfunc.hpp"
#include "pntap/parallel.hpp"
#include "pntap/pnt_ap.hpp"
#include "pntap/siegel.hpp"
#include "pntap/sieve_weights.hpp"
#include "pntap/verify.hpp"

using namespace pntap;

namespace {

enum Exit { kPass = 0, kHardFailure = 1, kUsage = 2, kResource = 3 };

struct Globals {
  std::string limit = "1e6";
  std::string table_cache;
  std::uint64_t seed = 1;
  unsigned jobs = 0;
  std::string format = "csv";
  std::string out;
};

// Accepts "1000000", "1e6", "10^6".
std::uint64_t parse_count(const std::string& text, const std::string& what) {
  double v = 0;
  auto caret = text.find('^');
  try {
    std::size_t used = 0;
    if (caret != std::string::npos) {
      v = std::pow(std::stod(text.substr(0, caret)), std::stod(text.substr(caret + 1), &used));
      used += caret + 1;
    } else {
      v = std::stod(text, &used);
    }
    if (used != text.size()) throw std::invalid_argument(text);
  } catch (const std::exception&) {
    throw DomainError(what + ": not a number: " + text);
  }
  if (!(v >= 1) || v > 1.8e19 || v != std::floor(v)) throw DomainError(what + " must be a positive integer");
  return static_cast<std::uint64_t>(v);
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(static_cast<double>(parse_count(item, "list entry")));
  if (out.empty()) throw DomainError("empty list: " + text);
  return out;
}

ReportFormat report_format(const Globals& g) {
  if (g.format == "csv") return ReportFormat::csv;
  if (g.format == "json") return ReportFormat::json;
  throw DomainError("unknown format: " + g.format);
}

ArithmeticTables tables_for(const Globals& g, std::uint64_t at_least = 0) {
  std::uint64_t limit = std::max(parse_count(g.limit, "--limit"), at_least);
  return load_or_build_tables(limit, g.table_cache);
}

void emit(const ReportTable& table, const std::string& path, ReportFormat format) {
  if (path.empty() || path == "-")
    write_table(table, std::cout, format);
  else
    write_table(table, path, format);
}

std::string num(double v) { return format_number(v); }
std::string num(std::uint64_t v) { return std::to_string(v); }

int print_checks(const std::vector<SuiteReport>& reports) {
  bool ok = true;
  for (const auto& r : reports) {
    for (const auto& c : r.checks) {
      const char* status = c.kind == CheckKind::monitor ? "MONITOR" : (c.pass ? "PASS" : "FAIL");
      std::cout << status << ' ' << c.id << ": " << c.detail << '\n';
    }
    ok = ok && r.passed();
  }
  return ok ? kPass : kHardFailure;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks for prime number theorem estimates in arithmetic progressions"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "Read options from a key=value file; flags override it");
  Globals g;
  app.add_option("--limit", g.limit, "Arithmetic table limit")->capture_default_str();
  app.add_option("--table-cache", g.table_cache, "Binary table cache path");
  app.add_option("--seed", g.seed, "Seed for random multiplicative functions")->capture_default_str();
  app.add_option("--jobs", g.jobs, "Worker threads (0 = hardware concurrency)");
  app.add_option("--format", g.format, "Report format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.add_option("--out", g.out, "Report directory");

  // verify
  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  std::string suite;
  VerifyConfig vc;
  double tmax = vc.tmax;
  std::uint64_t qmax = vc.qmax;
  double tolerance = vc.tolerance;
  verify->add_option("suite", suite, "arith, characters, distance, series, expsums, sieve, siegel, pnt-ap or all")
      ->required();
  verify->add_option("--tmax", tmax, "Largest t in the exponential sum scan")->capture_default_str();
  verify->add_option("--qmax", qmax, "Largest conductor in the Siegel scan")->capture_default_str();
  verify->add_option("--tol", tolerance, "Tolerance for L-values")->capture_default_str();

  // characters list
  auto* characters = app.add_subcommand("characters", "Dirichlet characters");
  auto* char_list = characters->add_subcommand("list", "List the characters mod q");
  characters->require_subcommand(1);
  std::uint64_t modulus = 0;
  bool real_only = false, as_json = false;
  char_list->add_option("--modulus", modulus)->required()->check(CLI::PositiveNumber);
  char_list->add_flag("--real-only", real_only);
  char_list->add_flag("--json", as_json);

  // distance, triangle-fuzz
  auto* dist = app.add_subcommand("distance", "Pretentious distance D(f, g; y, x)");
  std::string f_name, g_name;
  double y = 2, x = 1e5;
  dist->add_option("--f", f_name)->required();
  dist->add_option("--g", g_name)->required();
  dist->add_option("--y", y)->capture_default_str();
  dist->add_option("--x", x)->capture_default_str();

  auto* fuzz = app.add_subcommand("triangle-fuzz", "Triangle inequality on random pairs");
  std::size_t count = 1000;
  std::string csv;
  fuzz->add_option("--count", count)->capture_default_str();
  fuzz->add_option("--x", x)->capture_default_str();
  fuzz->add_option("--csv", csv, "Output path (stdout if omitted)");

  // series eval, monitor
  auto* series = app.add_subcommand("series", "Dirichlet series");
  series->require_subcommand(1);
  auto* series_eval = series->add_subcommand("eval", "Evaluate L_y^{(k)}(s, f)");
  double sigma = 2, t = 0;
  unsigned k = 0;
  series_eval->add_option("--f", f_name)->required();
  series_eval->add_option("--y", y, "Sifting bound; 1.5 <= y < 2 means no sifting")->capture_default_str();
  series_eval->add_option("--sigma", sigma)->capture_default_str();
  series_eval->add_option("--t", t)->capture_default_str();
  series_eval->add_option("--k", k)->capture_default_str();
  series_eval->add_option("--tol", tolerance)->capture_default_str();

  auto* monitor = app.add_subcommand("monitor", "Bound monitors");
  std::string monitor_name;
  std::uint64_t q = 3;
  monitor->add_option("name", monitor_name)->required()->check(CLI::IsMember({"l1", "lchil1", "lchil2", "lchil3"}));
  monitor->add_option("--q", q)->capture_default_str()->check(CLI::PositiveNumber);
  monitor->add_option("--csv", csv);

  // expsum
  auto* expsum = app.add_subcommand("expsum", "Exponential sums");
  expsum->require_subcommand(1);
  auto* nit_scan = expsum->add_subcommand("nit-scan", "Dyadic sums against the ceiling");
  double tmin = 10;
  std::size_t samples = 6;
  nit_scan->add_option("--tmin", tmin)->capture_default_str();
  nit_scan->add_option("--tmax", tmax)->capture_default_str();
  nit_scan->add_option("--samples", samples, "Number of t values, log-spaced")->capture_default_str();
  nit_scan->add_option("--csv", csv);
  auto* chinit = expsum->add_subcommand("chinit", "Sifted character sum");
  std::uint64_t chi_index = 1;
  chinit->add_option("--q", q)->required();
  chinit->add_option("--chi-index", chi_index)->capture_default_str();
  chinit->add_option("--t", t)->capture_default_str();
  chinit->add_option("--x", x)->capture_default_str();
  chinit->add_option("--y", y)->capture_default_str();

  // sieve verify
  auto* sieve = app.add_subcommand("sieve", "Sieve weights");
  sieve->require_subcommand(1);
  auto* sieve_verify = sieve->add_subcommand("verify", "Sandwich check for the truncated weights");
  double u = 3;
  std::uint64_t nmax = 100000;
  sieve_verify->add_option("--y", y)->required();
  sieve_verify->add_option("--u", u)->required();
  sieve_verify->add_option("--nmax", nmax)->capture_default_str();
  sieve_verify->add_option("--csv", csv);

  // siegel
  auto* siegel = app.add_subcommand("siegel", "Real characters at s = 1");
  siegel->require_subcommand(1);
  auto* siegel_scan_cmd = siegel->add_subcommand("scan", "L(1, chi) for real primitive characters");
  siegel_scan_cmd->add_option("--qmax", qmax)->capture_default_str();
  siegel_scan_cmd->add_option("--tol", tolerance)->capture_default_str();
  siegel_scan_cmd->add_option("--csv", csv);
  auto* zerol1 = siegel->add_subcommand("zerol1-check", "0 <= (1 * f)(n) <= tau_4(n)");
  std::uint64_t q1 = 3, q2 = 4;
  nmax = 10000;
  zerol1->add_option("--q1", q1)->required();
  zerol1->add_option("--q2", q2)->required();
  zerol1->add_option("--nmax", nmax)->capture_default_str();

  // pnt-ap, eta
  auto* pnt = app.add_subcommand("pnt-ap", "psi(x; q, a)");
  std::uint64_t a = 1;
  pnt->add_option("--q", q);
  pnt->add_option("--a", a);
  pnt->add_option("--x", x);
  auto* profile = pnt->add_subcommand("profile", "Error profile over (q, a, x)");
  std::string q_set = "3,4,5,7,12", x_grid = "1e5,1e6";
  profile->add_option("--q-set", q_set)->capture_default_str();
  profile->add_option("--x-grid", x_grid)->capture_default_str();
  profile->add_option("--csv", csv);

  auto* eta = app.add_subcommand("eta", "eta(q) = min L_q(1, chi) / log(3q)");
  eta->add_option("--q", q)->required();
  eta->add_option("--tol", tolerance)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  try {
    if (g.jobs) set_thread_count(g.jobs);
    const auto format = report_format(g);

    if (*verify) {
      vc.limit = parse_count(g.limit, "--limit");
      vc.seed = g.seed;
      vc.tmax = tmax;
      vc.qmax = qmax;
      vc.tolerance = tolerance;
      std::vector<std::string> names;
      if (suite == "all")
        names = suite_names();
      else
        names.push_back(suite);
      for (const auto& n : names)
        if (std::find(suite_names().begin(), suite_names().end(), n) == suite_names().end())
          throw DomainError("unknown suite: " + n);
      auto tables = tables_for(g);
      std::vector<SuiteReport> reports;
      for (const auto& n : names) {
        reports.push_back(run_suite(n, vc, tables));
        if (!g.out.empty()) write_report(reports.back(), g.out, format);
      }
      return print_checks(reports);
    }

    if (*char_list) {
      auto group = build_group(modulus);
      auto chars = real_only ? group->real_characters() : group->characters();
      if (as_json) {
        nlohmann::ordered_json out = nlohmann::ordered_json::array();
        for (const auto& chi : chars) {
          nlohmann::ordered_json rec;
          rec["label"] = chi.label();
          rec["index"] = chi.index();
          rec["exponents"] = std::vector<std::uint64_t>(chi.exponents().begin(), chi.exponents().end());
          rec["order"] = chi.order();
          rec["conductor"] = chi.conductor();
          rec["principal"] = chi.is_principal();
          rec["real"] = chi.is_real();
          rec["primitive"] = chi.is_primitive();
          out.push_back(rec);
        }
        std::cout << out.dump(1) << '\n';
      } else {
        ReportTable tbl{"characters", {"label", "index", "exponents", "order", "conductor", "principal", "real", "primitive"}, {}};
        for (const auto& chi : chars) {
          std::string ex;
          for (auto e : chi.exponents()) ex += (ex.empty() ? "" : " ") + std::to_string(e);
          tbl.rows.push_back({chi.label(), num(chi.index()), ex, num(chi.order()), num(chi.conductor()),
                              chi.is_principal() ? "1" : "0", chi.is_real() ? "1" : "0",
                              chi.is_primitive() ? "1" : "0"});
        }
        emit(tbl, "", ReportFormat::csv);
      }
      return kPass;
    }

    if (*dist) {
      auto tables = tables_for(g, static_cast<std::uint64_t>(x));
      auto d = distance(MultiplicativeFunction::parse(f_name), MultiplicativeFunction::parse(g_name), y, x, tables);
      std::cout << "D(" << d.f_label << ", " << d.g_label << "; " << num(y) << ", " << num(x) << ") = " << num(d.value)
                << "\nD^2 = " << num(d.squared) << '\n';
      return kPass;
    }

    if (*fuzz) {
      auto tables = tables_for(g, static_cast<std::uint64_t>(x));
      auto records = triangle_fuzz(count, g.seed, 2, x, tables);
      ReportTable tbl{"triangle_fuzz", {"seed_f", "seed_g", "slack"}, {}};
      double worst = INFINITY;
      for (const auto& r : records) {
        tbl.rows.push_back({num(r.seed_f), num(r.seed_g), num(r.slack)});
        worst = std::min(worst, r.slack);
      }
      emit(tbl, csv, format);
      std::cerr << "min slack " << num(worst) << '\n';
      return worst >= -1e-12 ? kPass : kHardFailure;
    }

    if (*series_eval) {
      auto tables = tables_for(g);
      SeriesOptions so;
      so.tolerance = tolerance;
      SeriesContext ctx(MultiplicativeFunction::parse(f_name), y, tables, so);
      auto v = evaluate_series(ctx, {sigma, t}, k);
      std::cout << "value " << num(v.value.real()) << ' ' << num(v.value.imag()) << "i\ncertificate "
                << num(v.certificate) << "\ncutoff " << v.cutoff << '\n';
      return kPass;
    }

    if (*monitor) {
      auto tables = tables_for(g);
      ReportTable tbl;
      if (monitor_name == "l1") {
        tbl = {"l1", {"f", "y", "x", "t", "sigma", "log_abs_L", "prime_sum", "residual", "certificate"}, {}};
        std::vector<double> xs;
        for (double e = 2; e <= 6 && std::pow(10.0, e) <= static_cast<double>(tables.limit()); ++e)
          xs.push_back(std::pow(10.0, e));
        for (const auto& chi : build_group(q)->characters()) {
          auto f = MultiplicativeFunction::character(chi);
          for (double yy : {2.0, 10.0})
            for (const auto& row : l1_residual(f, yy, xs, {0, 1, -1, 5, -5}, tables).rows)
              tbl.rows.push_back({f.label(), num(yy), num(row.x), num(row.t), num(row.sigma), num(row.log_abs_L),
                                  num(row.prime_sum), num(row.residual), num(row.certificate)});
        }
      } else {
        tbl = {monitor_name, {"chi", "sigma", "t", "y", "lhs", "rhs", "ratio", "certificate"}, {}};
        MonitorOptions mo;
        mo.k = 1;
        mo.tolerance = tolerance;
        for (const auto& chi : build_group(q)->characters()) {
          MonitorReport r;
          if (monitor_name == "lchil1") r = monitor_lchil1(chi, MonitorGrid::coarse(), mo, tables);
          if (monitor_name == "lchil2") r = monitor_lchil2(chi, MonitorGrid::coarse(), mo, tables);
          if (monitor_name == "lchil3") r = monitor_lchil3(chi, MonitorGrid::coarse(), mo, tables);
          for (const auto& row : r.rows)
            tbl.rows.push_back({chi.label(), num(row.sigma), num(row.t), num(row.y), num(row.lhs), num(row.rhs),
                                num(row.ratio), num(row.certificate)});
        }
      }
      emit(tbl, csv, format);
      return kPass;
    }

    if (*nit_scan) {
      if (!(tmin > 1) || !(tmax >= tmin) || samples == 0) throw DomainError("need 1 < tmin <= tmax and samples >= 1");
      ReportTable tbl{"nit_scan", {"N", "t", "u", "abs_sum", "ceiling", "margin", "phase_warning"}, {}};
      bool ok = true;
      for (std::size_t i = 0; i < samples; ++i) {
        double tt = samples == 1 ? tmin : tmin * std::pow(tmax / tmin, static_cast<double>(i) / (samples - 1));
        for (std::uint64_t N = 2; static_cast<double>(N) <= std::min(tt * tt, 1e6); N *= 2)
          for (double uu : {0.0, 0.5, 1.0}) {
            auto r = dyadic_exp_sum({N, uu, tt});
            double abs = std::abs(r.value);
            ok = ok && abs <= r.ceiling;
            tbl.rows.push_back({num(N), num(tt), num(uu), num(abs), num(r.ceiling), num(r.ceiling - abs),
                                r.phase_warning ? "1" : "0"});
          }
      }
      emit(tbl, csv, format);
      return ok ? kPass : kHardFailure;
    }

    if (*chinit) {
      auto tables = tables_for(g, static_cast<std::uint64_t>(x));
      auto chi = build_group(q)->character(chi_index);
      auto r = sifted_character_sum(chi, t, x, y, tables);
      std::cout << "value " << num(r.value.real()) << ' ' << num(r.value.imag()) << "i\nmain_term "
                << num(r.main_term.real()) << ' ' << num(r.main_term.imag()) << "i\ndiscrepancy "
                << num(r.discrepancy) << "\nerror_shape " << num(r.error_shape) << "\nratio " << num(r.ratio)
                << "\nsecondary_shape " << num(r.secondary_shape) << "\nhypothesis " << (r.hypothesis ? 1 : 0)
                << '\n';
      return kPass;
    }

    if (*sieve_verify) {
      auto tables = tables_for(g, nmax);
      auto w = build_weights(y, u, tables);
      auto r = sandwich_check(w, nmax, tables);
      ReportTable tbl{"weights", {"sign", "d", "lambda"}, {}};
      for (int sign : {+1, -1})
        for (const auto& term : w.terms(sign))
          tbl.rows.push_back({sign > 0 ? "+" : "-", num(term.d), std::to_string(term.value)});
      if (!csv.empty()) write_table(tbl, csv, format);
      std::cout << "D " << num(w.D) << "\nterms+ " << w.lambda_plus.size() << "\nterms- " << w.lambda_minus.size()
                << "\nsifted " << r.sifted << "\nviolations " << r.violations << '\n';
      if (r.first_violation) std::cout << "first_violation " << *r.first_violation << '\n';
      return r.ok() ? kPass : kHardFailure;
    }

    if (*siegel_scan_cmd) {
      auto tables = tables_for(g);
      auto s = siegel_scan(qmax, tolerance, tables);
      ReportTable tbl{"scan", {"conductor", "index", "parity", "L1", "certificate", "sqrt_q_L1", "q_0.1_L1", "q_0.5_L1"}, {}};
      for (const auto& r : s.rows)
        tbl.rows.push_back({num(r.conductor), num(r.index), r.even ? "even" : "odd", num(r.L), num(r.certificate),
                            num(r.sqrt_q_L), num(r.q_eps_01_L), num(r.q_eps_05_L)});
      emit(tbl, csv, format);
      std::cerr << s.rows.size() << " characters, min sqrt(q) L(1, chi) " << num(s.min_sqrt_q_L) << " at conductor "
                << s.argmin_conductor << '\n';
      return s.all_positive ? kPass : kHardFailure;
    }

    if (*zerol1) {
      auto tables = tables_for(g, nmax);
      auto c1 = real_primitive_characters(q1), c2 = real_primitive_characters(q2);
      if (c1.empty() || c2.empty()) throw DomainError("no real primitive character for that conductor");
      bool ok = true;
      for (const auto& a1 : c1)
        for (const auto& a2 : c2) {
          auto r = zerol1_hypothesis_check(a1, a2, nmax, tables);
          std::cout << a1.label() << ' ' << a2.label() << ' ' << (r.pass ? "PASS" : "FAIL");
          if (r.counterexample) std::cout << " n = " << *r.counterexample;
          std::cout << '\n';
          ok = ok && r.pass;
        }
      return ok ? kPass : kHardFailure;
    }

    if (*profile) {
      auto xs = parse_list(x_grid);
      auto tables = tables_for(g, static_cast<std::uint64_t>(*std::max_element(xs.begin(), xs.end())));
      std::vector<std::uint64_t> qs;
      for (double v : parse_list(q_set)) qs.push_back(static_cast<std::uint64_t>(v));
      auto p = theorem_error_profile(qs, xs, tables);
      ReportTable tbl{"profile", {"q", "a", "x", "psi", "main", "error", "normalized", "fitted_cA"}, {}};
      for (const auto& row : p.rows) {
        const auto& r = row.result;
        tbl.rows.push_back({num(r.q), num(r.a), num(r.x), num(r.psi), num(r.main), num(r.error), num(r.normalized),
                            num(row.fitted_cA)});
      }
      emit(tbl, csv, format);
      return kPass;
    }

    if (*pnt) {
      if (pnt->count("--q") == 0 || pnt->count("--a") == 0 || pnt->count("--x") == 0)
        throw DomainError("pnt-ap needs --q, --a and --x");
      auto tables = tables_for(g, static_cast<std::uint64_t>(x));
      auto r = psi_ap(x, q, a, tables);
      std::cout << "psi " << num(r.psi) << "\nmain " << num(r.main) << "\nerror " << num(r.error) << "\nnormalized "
                << num(r.normalized) << '\n';
      return kPass;
    }

    if (*eta) {
      auto tables = tables_for(g);
      auto e = eta_q(q, tables, tolerance);
      if (e)
        std::cout << "eta " << num(*e) << '\n';
      else
        std::cout << "eta undefined (no real non-principal character mod " << q << ")\n";
      return kPass;
    }
  } catch (const CapacityError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kResource;
  } catch (const CacheError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kResource;
  } catch (const NonconvergenceError& e) {
    std::cerr << "error: " << e.what() << " (best certificate " << num(e.best_certificate()) << ")\n";
    return kResource;
  } catch (const std::bad_alloc&) {
    std::cerr << "error: out of memory\n";
    return kResource;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
