#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <sstream>
#include <sys/wait.h>

#include "pntap/arith.hpp"
#include "pntap/parallel.hpp"
#include "pntap/verify.hpp"

using namespace pntap;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

// All named hard checks of a report must pass.
Outcome checks(const SuiteReport& report, std::initializer_list<const char*> ids) {
  Outcome o;
  for (const char* id : ids) {
    auto it = std::find_if(report.checks.begin(), report.checks.end(), [&](const Check& c) { return c.id == id; });
    if (it == report.checks.end()) {
      o.pass = false;
      o.detail += std::string(o.detail.empty() ? "" : "; ") + id + ": missing";
      continue;
    }
    o.pass = o.pass && it->pass;
    o.detail += (o.detail.empty() ? "" : "; ") + it->detail;
  }
  return o;
}

std::map<std::string, std::string> read_tree(const fs::path& dir) {
  std::map<std::string, std::string> out;
  if (!fs::exists(dir)) return out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    out[fs::relative(e.path(), dir).string()] = {std::istreambuf_iterator<char>(in), {}};
  }
  return out;
}

struct CliRun {
  int exit_code = -1;
  double seconds = 0;
  std::map<std::string, std::string> files;
};

CliRun run_cli(const std::string& args, const fs::path& dir) {
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::string cmd = std::string(PNTAP_CLI) + " " + args + " --out " + dir.string() + " > " + (dir / "stdout.txt").string();
  CliRun r;
  auto start = Clock::now();
  int status = std::system(cmd.c_str());
  r.seconds = seconds_since(start);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.files = read_tree(dir);
  return r;
}

int failures = 0;

void report(int n, const std::string& name, const Outcome& o) {
  if (!o.pass) ++failures;
  std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << n << " (" << name << "): " << o.detail << std::endl;
}

} // namespace

int main() {
  const fs::path work = fs::temp_directory_path() / ("pntap_acceptance_" + std::to_string(::getpid()));
  VerifyConfig config;

  // 1: tables and the trial-division comparison, single-threaded.
  set_thread_count(1);
  auto start = Clock::now();
  auto tables = build_tables(1000000);
  auto arith = run_suite("arith", config, tables);
  double t1 = seconds_since(start);
  {
    auto o = checks(arith, {"arith.sieve_exactness"});
    o.detail += "; " + format_number(t1) + " s single-threaded (limit 10 s)";
    o.pass = o.pass && t1 <= 10;
    report(1, "sieve exactness", o);
  }
  set_thread_count(0);

  report(2, "character algebra",
         checks(run_suite("characters", config, tables),
                {"characters.count_is_phi", "characters.orthogonality", "characters.real_count",
                 "characters.primitive_part"}));
  report(3, "pretentious distance",
         checks(run_suite("distance", config, tables), {"distance.triangle_fuzz", "distance.triangle_structured"}));
  auto series = run_suite("series", config, tables);
  report(4, "l1 residual", checks(series, {"series.l1_ceiling", "series.l1_stability"}));
  report(5, "nit ceiling", checks(run_suite("expsums", config, tables), {"expsums.nit_ceiling"}));
  report(6, "sieve sandwich", checks(run_suite("sieve", config, tables), {"sieve.sandwich"}));
  report(7, "Faa di Bruno layer", checks(series, {"series.ordered_partitions", "series.faa_vs_recursion"}));
  report(8, "Siegel scan",
         checks(run_suite("siegel", config, tables),
                {"siegel.positivity", "siegel.sqrt_q_floor", "siegel.zerol1_hypothesis", "siegel.gamma_0",
                 "siegel.partial_sum_identities"}));

  {
    VerifyConfig big = config;
    big.limit = 10000000;
    auto tables7 = build_tables(big.limit);
    report(9, "psi in progressions",
           checks(run_suite("pnt-ap", big, tables7),
                  {"pnt-ap.reconciliation", "pnt-ap.normalized_error", "pnt-ap.psi_sweep"}));
  }

  {
    auto a = run_cli("verify all --limit 1e6", work / "a");
    auto b = run_cli("verify all --limit 1e6 --jobs 2", work / "b");
    auto c = run_cli("verify all --limit 1e7", work / "c");
    Outcome o;
    bool clean_exit = a.exit_code <= 1 && b.exit_code <= 1 && c.exit_code <= 1;
    bool same = !a.files.empty() && a.files == b.files;
    o.pass = clean_exit && same && a.seconds <= 300 && b.seconds <= 300 && c.seconds <= 1800;
    std::ostringstream d;
    d << a.files.size() << " report files " << (same ? "byte-identical" : "DIFFER") << " across two runs; "
      << "1e6 runs " << format_number(a.seconds) << " s and " << format_number(b.seconds) << " s (limit 300 s), "
      << "1e7 run " << format_number(c.seconds) << " s (limit 1800 s); exit codes " << a.exit_code << ", "
      << b.exit_code << ", " << c.exit_code;
    o.detail = d.str();
    report(10, "determinism and runtime", o);
  }
  fs::remove_all(work);

  std::cout << (10 - failures) << "/10 criteria passed" << std::endl;
  return failures == 0 ? 0 : 1;
}
