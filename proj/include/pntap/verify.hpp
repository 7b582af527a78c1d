#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "pntap/arith.hpp"

namespace pntap {

enum class CheckKind { hard, monitor };

struct Check {
  std::string id;
  CheckKind kind = CheckKind::hard;
  bool pass = true;
  std::string detail;
};

struct ReportTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

struct SuiteReport {
  std::string suite;
  std::vector<Check> checks;
  std::vector<ReportTable> tables;
  // Monitors never fail a suite.
  bool passed() const;
};

struct VerifyConfig {
  std::uint64_t limit = 1000000;
  std::uint64_t seed = 1;
  double tmax = 1e6;
  std::uint64_t qmax = 3000;
  double tolerance = 1e-6;
};

// Classification of every check id; anything not listed is a hard assertion.
CheckKind check_kind(const std::string& id);

const std::vector<std::string>& suite_names();

// Throws DomainError for an unknown suite. Exceptions raised by a check are
// recorded as a failure of that check.
SuiteReport run_suite(const std::string& suite, const VerifyConfig& config, const ArithmeticTables& tables);

enum class ReportFormat { csv, json };

// Shortest round-trip decimal form, so reports are byte-stable.
std::string format_number(double v);

// Writes <suite>_checks and one file per table into dir.
void write_report(const SuiteReport& report, const std::filesystem::path& dir, ReportFormat format);
void write_table(const ReportTable& table, const std::filesystem::path& path, ReportFormat format);
void write_table(const ReportTable& table, std::ostream& out, ReportFormat format);

} // namespace pntap
