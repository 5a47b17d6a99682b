#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace uecomp {

struct ReportRow {
  std::string condition;
  int64_t n = 0;
  uint64_t pairs_checked = 0;
  uint64_t violations = 0;
  double worst_margin = 0.0;  // smallest slack seen; negative means violated
  bool vacuous = false;
  std::string note;
};

struct VerificationReport {
  std::vector<ReportRow> rows;

  bool all_pass() const;
  const ReportRow* row(const std::string& condition) const;
};

struct CsvMetadata {
  std::string tool_version;
  std::string config_hash;
  uint64_t seed = 0;
};

// Header row, data rows, then a trailing '#' metadata comment block.
void write_report_csv(std::ostream& os, const VerificationReport& report,
                      const CsvMetadata& meta);

std::string format_double(double v);

}  // namespace uecomp
