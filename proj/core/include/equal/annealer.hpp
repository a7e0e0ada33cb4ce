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
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "equal/ising.hpp"
#include "equal/precision.hpp"
#include "equal/rng.hpp"

namespace equal {

/// Simulated annealer hardware description.
///
/// The device quantizes coefficients on a b-bit grid within `ranges` and
/// corrupts each programmed coefficient with a FIXED Gaussian draw
/// (sigma_h / sigma_j). The draw is a pure function of the programmed
/// coefficients and device_seed, so re-programming the identical QMI
/// reproduces the identical corruption: that fixed deviation is the
/// systematic bias. Any coefficient change, however small, re-keys the draw
/// and yields an independent bias.
///
/// Annealing time is modeled as a Metropolis sweep budget with a geometric
/// inverse-temperature ramp. trial_correlation is the probability that a
/// trial starts from the previous trial's final state instead of a fresh
/// random one (a short inter-sample-delay proxy).
struct DeviceModel {
    int bits = 8;
    DeviceRanges ranges;
    double sigma_h = 0.03;
    double sigma_j = 0.03;
    int sweeps = 200;
    double beta_start = 0.1;
    double beta_end = 5.0;
    double trial_correlation = 0.0;
    uint64_t device_seed = 0;

    void validate() const;
    bool operator==(const DeviceModel&) const = default;
};

/// A QMI as the device will actually anneal it: the intended (quantized)
/// model plus the corrupted Hamiltonian after programming errors.
/// bias_fingerprint identifies the (coefficients, device_seed) pair that
/// keyed the corruption.
struct ProgrammedQmi {
    Qmi intended;
    IsingModel corrupted;
    uint64_t bias_fingerprint = 0;
    DeviceModel device;
};

/// Canonical 64-bit hash of (n, h entries, J entries). Identifies a QMI's
/// coefficient set irrespective of the device.
uint64_t qmi_coefficient_hash(const IsingModel& model);

/// Programs a QMI onto the device, drawing the fixed corruption.
/// Throws std::invalid_argument if the QMI's bits/ranges do not match the
/// device.
ProgrammedQmi program(const DeviceModel& device, const Qmi& qmi);

/// Runs `trials` anneals on the corrupted Hamiltonian and records each
/// trial's final configuration scored against `true_model` (the original,
/// uncorrupted, unquantized problem). Deterministic per
/// (pq, trials, trial_seed).
SampleSet sample(const ProgrammedQmi& pq, long trials, uint64_t trial_seed,
                 const IsingModel& true_model);

/// Best-energy-so-far at each checkpoint over the identical trial stream
/// sample() would execute. Checkpoints must be positive, strictly ascending
/// and end at trial_budget.
std::vector<std::pair<long, double>> run_trials_curve(const ProgrammedQmi& pq, long trial_budget,
                                                      const std::vector<long>& checkpoints,
                                                      uint64_t trial_seed,
                                                      const IsingModel& true_model);

/// Geometric interpolation from beta_start to beta_end over `sweeps` values.
std::vector<double> geometric_betas(double beta_start, double beta_end, int sweeps);

/// One Metropolis anneal over the given schedule, in place. `fields` is
/// scratch space; z must already hold the start configuration. Site updates
/// are sequential (0..n-1) and each visit consumes exactly one uniform draw.
void anneal_once(const CompiledModel& model, std::span<const double> betas, SpinConfig& z,
                 std::vector<double>& fields, rng::Engine& eng);

namespace detail {

/// Shared trial loop: sample() and run_trials_curve() both consume this
/// stream, which is what makes their outputs prefix-consistent.
void for_each_trial(const ProgrammedQmi& pq, long trials, uint64_t trial_seed,
                    const IsingModel& true_model,
                    const std::function<void(const SpinConfig&, double)>& per_trial);

}  // namespace detail

// Device config file format: JSON
//   {"bits": int, "h_max": v, "j_max": v, "sigma_h": v, "sigma_j": v,
//    "sweeps": int, "beta": [v, v], "trial_correlation": v,
//    "device_seed": int}
DeviceModel device_from_json(const std::string& text);
std::string device_to_json(const DeviceModel& device);

}  // namespace equal
