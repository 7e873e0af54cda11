#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hyper/io.hpp"
#include "hyper/parallel.hpp"

namespace hyper {

struct CriterionResult {
  int id = 0;
  std::string name;
  std::string computes;  // one-line description of the checked identity
  bool passed = false;
  std::string summary;   // headline numbers against their tolerance
  json details;
  double seconds = 0.0;  // wall clock; kept out of the JSON report
};

struct VerifyOptions {
  std::vector<std::string> only;  // criterion names or ids; empty runs all
  std::uint64_t seed = 20240607;
  std::string inject_fault;       // "" or "plancherel"
  Exec exec = Exec::parallel;
};

struct VerifyReport {
  std::uint64_t seed = 0;
  std::string inject_fault;
  std::vector<CriterionResult> results;

  bool all_passed() const;
  std::vector<std::string> failing() const;
  /// Deterministic report: no timings.
  json to_json() const;
};

struct CriterionInfo {
  int id;
  std::string name;
  std::string computes;
};
const std::vector<CriterionInfo>& criteria();

/// Resolves a name or a decimal id. Throws std::invalid_argument when unknown.
int criterion_id(const std::string& key);

/// Runs the selected criteria in id order. Criterion 14 reruns every other
/// selected criterion (or the seeded ones when it runs alone) and compares
/// the serialized reports byte for byte.
VerifyReport run_verify(const VerifyOptions& opt);

}  // namespace hyper
