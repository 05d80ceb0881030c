#pragma once

#include <array>
#include <string>
#include <vector>

#include "decor/model.hpp"

namespace decor {

struct LawCheck {
  std::string name;
  std::string equation;
  bool expect_holds = true;
  bool skipped = false;
  std::string note;
  std::string dual;  // duality-semantic: name of the partner law
  CheckResult result;

  bool ok() const { return skipped || result.holds == expect_holds; }
};

// One scenario of the handler nesting comparison. Variants, in order:
// try f catch (i => g | j => h); try (try f catch i => g) catch j => h;
// try f catch i => (try g catch j => h).
struct NestingCase {
  std::string scenario;
  std::array<std::string, 3> got, expected;
  bool ok() const { return got == expected; }
};

struct SuiteReport {
  std::string suite;
  std::vector<LawCheck> laws;
  std::vector<NestingCase> nesting;
  std::size_t points = 0;
  bool ok() const;
};

// states-seven, states-laws, exceptions-laws, nesting-matrix, duality-semantic.
const std::vector<std::string>& suite_ids();

// Builds the built-in theory over m's index set and runs the suite; throws
// SuiteUnknown, FlavorViolation or BadParams (too few indices).
SuiteReport verify_law_suite(const FiniteModel& m, const std::string& suite);

}  // namespace decor
