// Copyright 2026 EQUAL Contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "equal/annealer.hpp"
#include "equal/metrics.hpp"
#include "equal/mitigate.hpp"
#include "equal/topology.hpp"

namespace equal {

struct BenchmarkSpec {
    enum class Kind { chimera, sk, file };
    Kind kind = Kind::chimera;
    int m = 2;             // chimera grid dimension
    int n = 0;             // sk node count
    std::string path;      // model file
    uint64_t seed = 0;
    bool couplers_only = false;
    std::vector<int> mask;
};

struct GroundTruthSpec {
    enum class Kind { exact, estimate };
    Kind kind = Kind::estimate;
    EstimateEffort effort;
};

/// One experiment: a benchmark instance, a device, a mitigation scheme and
/// the trial budget. scheme_name keeps the config-language spelling
/// ("sqc_only") while scheme holds the canonical value.
struct ExperimentConfig {
    BenchmarkSpec benchmark;
    DeviceModel device;
    Scheme scheme = Scheme::baseline;
    std::string scheme_name = "baseline";
    std::optional<int> m;
    std::optional<int> k_gauges;
    long total_trials = 20000;
    std::vector<long> checkpoints;
    uint64_t master_seed = 0;
    GroundTruthSpec ground_truth;
    std::string output_dir = ".";
    int threads = 1;
    std::optional<int> perturbation_bits;
    PerturbationSign perturbation_sign = PerturbationSign::positive;
};

/// Config rejection carrying every violated field, not just the first.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(std::vector<std::string> violations);
    const std::vector<std::string>& violations() const { return violations_; }

  private:
    std::vector<std::string> violations_;
};

ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Returns every constraint violation in the config (empty means valid).
std::vector<std::string> validate_config(const ExperimentConfig& config);

/// Resolved-config echo embedded in every result file: the science
/// parameters sufficient to re-run the experiment. Output location and
/// thread count are intentionally excluded (they do not affect results).
std::string config_echo_json(const ExperimentConfig& config);

/// Applies the EQUAL_SEED environment override to master_seed, if set.
/// Returns true when an override was applied.
bool apply_env_seed(ExperimentConfig& config);

IsingModel materialize_benchmark(const BenchmarkSpec& spec);
GroundTruth resolve_ground_truth(const IsingModel& model, const GroundTruthSpec& spec,
                                 uint64_t master_seed);

struct RunOutput {
    MitigationResult result;
    ErReport report;
    std::string result_json;
    std::string result_path;
    std::optional<std::string> curve_csv;
    std::optional<std::string> curve_path;
};

/// Executes the configured scheme end to end, writes the result JSON (and
/// the curve CSV when checkpoints are configured) under output_dir and
/// returns both. When a baseline result file is supplied, its instance and
/// device pairing is checked and the relative ER is filled in.
RunOutput cmd_run(const ExperimentConfig& config,
                  const std::optional<std::string>& baseline_result_path = std::nullopt);

struct GenOutput {
    std::string model_path;
    std::string stats_text;
};

/// Writes a model file for the benchmark spec; optionally also writes the
/// underlying graph (sk benchmarks) in the graph file format.
GenOutput cmd_gen(const BenchmarkSpec& spec, const std::string& out_path,
                  const std::optional<std::string>& graph_out_path = std::nullopt);

/// Precision profile: for each b in bits_list the benchmark is quantized at
/// b bits and run as a baseline on a device with a b-bit DAC; each ER is
/// reported relative to an untruncated (53-bit) run. Returns CSV
/// "bits,relative_er".
std::string cmd_profile_precision(const ExperimentConfig& base, const std::vector<int>& bits_list,
                                  long trials, uint64_t seed);

/// Ensemble-count sweep at a fixed total budget. Returns CSV "m,er".
std::string cmd_sweep_ensembles(const ExperimentConfig& base, const std::vector<int>& m_list,
                                long total_trials);

struct ReportOutput {
    std::string csv;
    std::string pretty;
};

/// Joins result files by instance seed and summarizes per-scheme absolute
/// and relative ER. All schemes must cover the same instance set; orphans
/// are listed in the error.
ReportOutput cmd_report(const std::vector<std::string>& result_paths);

}  // namespace equal
