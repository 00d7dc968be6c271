#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dsm::verify {

struct SuiteReport {
  std::string suite;
  int cases = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string note;
};

struct SweepOptions {
  std::uint64_t seed = 1;
  int cases = 0;  // 0 selects the suite default
};

// Seeded random sweeps over the library's identities, one suite per
// identity family.  Deterministic for a fixed seed.
const std::vector<std::string>& suite_names();
SuiteReport run_suite(const std::string& name, const SweepOptions& options = {});
std::vector<SuiteReport> run_all(const SweepOptions& options = {});

}  // namespace dsm::verify
