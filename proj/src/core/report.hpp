#ifndef LIISS_CORE_REPORT_HPP
#define LIISS_CORE_REPORT_HPP

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace liiss {

// One checked sample: lhs is the quantity under test, rhs the admissible
// bound, margin = rhs - lhs (negative means violated).
struct ReportRow {
  size_t index = 0;
  double time = 0;
  double lhs = 0;
  double rhs = 0;
  double margin = 0;
  bool violated = false;
};

struct Report {
  std::string title;
  std::vector<ReportRow> rows;
  std::map<std::string, double> metrics;

  size_t violation_count() const;
  // Smallest margin across all rows (0 when the report has no rows).
  double worst_margin() const;
  bool passed() const { return violation_count() == 0; }

  void add(size_t index, double time, double lhs, double rhs, double slack = 0.0);

  // Violations only, one per line: index, time, lhs, rhs, margin.
  std::string to_text() const;
};

}  // namespace liiss

#endif
