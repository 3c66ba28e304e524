#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace densitrace::verify {

struct SuiteOptions {
  std::size_t n = 10;
  double p = 0.25;
  std::uint64_t seed = 1;
  std::size_t trials = 100;
  std::size_t traces = 50000;
  std::size_t instances = 10;
};

std::vector<std::string> suite_names();
bool known_suite(const std::string& name);
bool suite_needs_seed(const std::string& name);

/// Runs one identity suite, printing a line per case and a final verdict.
/// Returns true iff every assertion held.
bool run_suite(const std::string& name, const SuiteOptions& options, std::ostream& out);

}  // namespace densitrace::verify
