#include "core/report.hpp"

#include <cstdio>
#include <limits>

namespace liiss {

size_t Report::violation_count() const {
  size_t n = 0;
  for (const auto& r : rows)
    if (r.violated) ++n;
  return n;
}

double Report::worst_margin() const {
  if (rows.empty()) return 0.0;
  double w = std::numeric_limits<double>::infinity();
  for (const auto& r : rows)
    if (r.margin < w) w = r.margin;
  return w;
}

void Report::add(size_t index, double time, double lhs, double rhs, double slack) {
  ReportRow row;
  row.index = index;
  row.time = time;
  row.lhs = lhs;
  row.rhs = rhs;
  row.margin = rhs - lhs;
  row.violated = lhs > rhs + slack;
  rows.push_back(row);
}

std::string Report::to_text() const {
  std::string out;
  out += title;
  if (!title.empty()) out += "\n";
  char buf[256];
  std::snprintf(buf, sizeof(buf), "violations=%zu worst_margin=%.17g\n",
                violation_count(), worst_margin());
  out += buf;
  for (const auto& r : rows) {
    if (!r.violated) continue;
    std::snprintf(buf, sizeof(buf), "%zu %.17g %.17g %.17g %.17g\n", r.index,
                  r.time, r.lhs, r.rhs, r.margin);
    out += buf;
  }
  return out;
}

}  // namespace liiss
