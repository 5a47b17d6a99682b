#include "uecomp/report.hpp"

#include <cstdio>
#include <ostream>

namespace uecomp {

bool VerificationReport::all_pass() const {
  for (const ReportRow& r : rows)
    if (r.violations > 0) return false;
  return true;
}

const ReportRow* VerificationReport::row(const std::string& condition) const {
  for (const ReportRow& r : rows)
    if (r.condition == condition) return &r;
  return nullptr;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void write_report_csv(std::ostream& os, const VerificationReport& report,
                      const CsvMetadata& meta) {
  os << "condition,n,pairs_checked,violations,worst_margin,vacuous,note\n";
  for (const ReportRow& r : report.rows) {
    os << r.condition << ',' << r.n << ',' << r.pairs_checked << ','
       << r.violations << ',' << format_double(r.worst_margin) << ','
       << (r.vacuous ? 1 : 0) << ',' << r.note << '\n';
  }
  os << "# tool_version=" << meta.tool_version << '\n';
  os << "# config_hash=" << meta.config_hash << '\n';
  os << "# seed=" << meta.seed << '\n';
}

}  // namespace uecomp
