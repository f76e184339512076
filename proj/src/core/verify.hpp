#ifndef LIISS_CORE_VERIFY_HPP
#define LIISS_CORE_VERIFY_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace liiss {

struct CriterionResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0;
};

struct AcceptanceOptions {
  std::uint64_t seed = 0x5EED;
  // Test hook: force the named criterion to fail so failure reporting can be
  // exercised end to end.
  std::string corrupt;
};

// Names of the acceptance criteria in execution order.
std::span<const char* const> acceptance_criterion_names();

// Runs the full acceptance suite. Deterministic for a fixed seed.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts = {});

// One line per criterion ("PASS <name> ... <detail>") plus a summary line.
std::string format_results(std::span<const CriterionResult> results);

bool all_passed(std::span<const CriterionResult> results);

}  // namespace liiss

#endif
