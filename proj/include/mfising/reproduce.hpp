#pragma once

// Scenario reproduction: simulate a dataset at a named parameter triple, fit
// it with every kernel, and compare diagnostics against the reference values
// published for that scenario.

#include "mfising/dataset.hpp"
#include "mfising/diagnostics.hpp"
#include "mfising/io.hpp"
#include "mfising/samplers.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace mfising {

// Published reference values: 95% interval widths and coverage from the
// 100-replication study, and Gelman-Rubin statistics for K at 5000 draws.
struct ScenarioSpec {
  std::string name;
  Theta theta;
  Vec3 ref_width;
  Vec3 ref_coverage;
  double ref_psrf_hybrid = 0.0;
  double ref_psrf_amh = 0.0;
  double ref_psrf_rmahmc = 0.0;
};

[[nodiscard]] const std::vector<ScenarioSpec>& scenarios();
/// Throws DomainError listing valid names.
[[nodiscard]] const ScenarioSpec& find_scenario(const std::string& name);

struct ReproduceOptions {
  int N = 300;
  int M = 1000;
  std::size_t chains = 4;
  std::uint64_t seed = 7;
  std::uint64_t stream = 0;
  SamplerConfig sampler;  // kernel is set per run
  PriorSpec prior;
  GridSpec grid;
  double level = 0.95;
  std::vector<Kernel> kernels{Kernel::kAmh, Kernel::kRmahmc, Kernel::kHybrid};
  unsigned workers = 0;
};

struct KernelRun {
  Kernel kernel = Kernel::kHybrid;
  std::vector<Chain> chains;
  DiagnosticsReport report;
};

struct Check {
  std::string name;
  double value = 0.0;
  std::string rule;  // e.g. "<= 1.05"
  bool pass = false;
};

struct ScenarioResult {
  ScenarioSpec spec;
  ReproduceOptions options;
  Dataset data;
  std::vector<Theta> starts;
  std::vector<KernelRun> runs;
  double tv_hybrid_mean = 0.0;        // density_compare(truth, hybrid posterior mean)
  Interval b_interval;                // level interval of E[m] over pooled hybrid draws
  double b_true = 0.0;
  std::size_t hybrid_pmf_peaks = 0;   // local maxima of the pmf at the hybrid mean
  std::vector<Check> checks;

  [[nodiscard]] const KernelRun* run(Kernel k) const;
  [[nodiscard]] bool all_pass() const;
};

/// Number of strict local maxima of a pmf over its index range.
[[nodiscard]] std::size_t count_local_maxima(const std::vector<double>& pmf);

[[nodiscard]] ScenarioResult reproduce_scenario(const std::string& name, const ReproduceOptions& opts = {});

/// Manifest JSON: resolved config, per-kernel diagnostics, checks vs reference.
[[nodiscard]] io::json manifest_json(const ScenarioResult& r);

/// Writes dataset.{csv,json}, chain_<kernel>_<c>.csv, density.csv,
/// b_trace.csv and manifest.json under `dir`.
void write_bundle(const ScenarioResult& r, const std::filesystem::path& dir);

}  // namespace mfising
