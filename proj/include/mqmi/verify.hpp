#pragma once

// Batch checks over seeded random states.
//
// `run_property_suite` evaluates proven claims; any failure is an error.
// `scan_conjectures` evaluates open claims; violations are findings and never
// make the scan fail. Both are deterministic for a given config: trial t uses
// seed mix_seed(config.seed, t) and results are reduced in trial order.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mqmi/json_io.hpp"
#include "mqmi/kernels.hpp"
#include "mqmi/states.hpp"

namespace mqmi {

enum class SampleMix {
  standard,    // half Haar pure, half induced mixed with rank 2 or full
  pure_only,
  mixed_only,  // rank 2 or full
};

struct SuiteConfig {
  int n = 3;  // parties
  int d = 2;  // local dimension
  int samples = 100;
  std::uint64_t seed = 1;
  double tol = kDefaultTol;
  std::vector<std::string> properties;  // empty selects every property
  int kraus_rank = 2;
  SampleMix mix = SampleMix::standard;
  Execution exec = Execution::parallel;

  /// Throws DimensionError for an unusable config.
  void check() const;
  std::vector<int> dims() const { return std::vector<int>(n, d); }
};

struct Witness {
  int trial = -1;  // -1 for enumerated (non-random) witnesses
  StateSpec state;
  std::uint64_t aux_seed = 0;  // drives channels, unitaries and partner states
  double residual = 0.0;
};

struct PropertyResult {
  std::string name;
  std::string description;
  bool control = false;  // conjecture scans: a proven case run alongside
  double threshold = 0.0;
  int trials = 0;
  int failures = 0;
  /// Smallest margin seen; a trial fails when its margin < -threshold.
  std::optional<double> worst_residual;
  std::optional<Witness> worst;  // trial with the smallest margin
  std::vector<Witness> witnesses;
};

/// M_1 and M_{n-1} of one mixed trial; recorded by scans without any assertion.
struct EndGap {
  int trial = 0;
  double m1 = 0.0;
  double mn1 = 0.0;
  double gap() const { return m1 - mn1; }
};

struct ViolationReport {
  std::string mode;  // "properties" or "conjectures"
  SuiteConfig config;
  std::vector<PropertyResult> results;
  std::vector<std::vector<double>> pure_profiles;  // scans only
  std::vector<EndGap> mixed_end_gaps;              // scans only

  int total_failures() const;
  const PropertyResult* find(const std::string& name) const;
  Json to_json() const;
  std::string to_text() const;
};

/// Names accepted in SuiteConfig::properties.
std::vector<std::string> property_names();
std::vector<std::string> conjecture_names(int n);

ViolationReport run_property_suite(const SuiteConfig& config);
ViolationReport scan_conjectures(const SuiteConfig& config);

/// Rebuilds the trial behind a witness and recomputes its margin.
double reevaluate_witness(const std::string& property, const Witness& witness,
                          const SuiteConfig& config);

/// Spec of trial `t` under `config`, with the trial's auxiliary seed.
std::pair<StateSpec, std::uint64_t> trial_spec(const SuiteConfig& config, int t);

}  // namespace mqmi
