#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace qlab {

/// Options for the invariant suite. Tolerances are looked up by check name,
/// falling back to the "all" key and then to the built-in default, so a
/// single --tol all=0 forces every comparison to be exact.
struct VerifyOptions {
  std::uint64_t seed = 20240901;
  int budget = 400;
  std::map<std::string, double> tolerances;

  double tol(const std::string& key, double fallback) const;
};

struct CheckResult {
  std::string module;
  std::string name;
  bool pass = false;
  std::string detail;  // witness values, one line
};

/// Runs every module's invariant checks with seeded sampling.
std::vector<CheckResult> run_verification(const VerifyOptions& opts);

}  // namespace qlab
