#pragma once

#include <functional>
#include <string>
#include <vector>

namespace wavext {

struct SuiteResult {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// Registered suite names, in execution order.
std::vector<std::string> selftest_suites();

/// Runs one suite; unknown names throw std::invalid_argument.
SuiteResult run_selftest_suite(const std::string& name);

/// Runs every suite, reporting each result as it completes.
std::vector<SuiteResult> run_selftests(const std::function<void(const SuiteResult&)>& on_result = {});

}  // namespace wavext
