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
#include <string>
#include <vector>

#include "equal/annealer.hpp"
#include "equal/ising.hpp"
#include "equal/precision.hpp"
#include "equal/rng.hpp"

namespace equal {

enum class Scheme { baseline, equal, sqc, equal_plus, srt };

std::string to_string(Scheme scheme);
Scheme scheme_from_string(const std::string& name);

/// How perturbation deltas are signed. The default applies +r to every
/// coefficient position; the random mode draws an independent sign per
/// position (a constant positive shift of all h terms biases the ensemble
/// toward one spin direction, so the alternative is kept behind a flag).
enum class PerturbationSign { positive, random_per_coefficient };

struct EnsembleOptions {
    PerturbationSign sign = PerturbationSign::positive;
};

/// An ensemble of QMIs: member 0 is the unperturbed original, members 1..m-1
/// are sub-precision perturbations of it, all sharing member 0's
/// normalization scale. trials_per_member is assigned when the ensemble is
/// scheduled onto a trial budget.
struct Ensemble {
    std::vector<Qmi> members;
    std::vector<double> perturbation_magnitudes;  // r per member, 0 for member 0
    long trials_per_member = 0;
};

/// Draws the perturbation magnitude r uniformly from [2^-(b+1), 2^-b] — the
/// window just below the device's representable precision. Applied to a
/// coefficient class it is scaled by that class's range, so the shift is at
/// most one DAC grid step.
double perturbation_magnitude(int bits, rng::Engine& eng);

/// Builds the m-member ensemble for `original`. Member 0 is
/// quantize(normalize(original)); member k adds r_k (scaled per coefficient
/// class, clamped into range) to every coefficient position present in the
/// original and re-quantizes. The sparsity pattern is never changed and no
/// member is re-normalized.
Ensemble make_ensemble(const IsingModel& original, int m, int bits, const DeviceRanges& ranges,
                       uint64_t master_seed, const EnsembleOptions& options = {});

namespace detail {

/// One perturbed ensemble member; exposed so tests can force r.
Qmi perturbed_member(const IsingModel& normalized, double scale_applied, double r, int bits,
                     const DeviceRanges& ranges, PerturbationSign sign, rng::Engine& eng);

}  // namespace detail

struct MitigationResult {
    SpinConfig best_config;
    double best_energy = 0.0;
    std::vector<std::pair<int, double>> per_member_best;  // (member index, energy)
    Scheme scheme = Scheme::baseline;
    long trials_used = 0;
    double wall_time = 0.0;  // seconds; excluded from determinism comparisons
};

struct RunOptions {
    int threads = 1;
    /// Precision assumed when generating perturbations; defaults to the
    /// device's bits. Varying it while the device stays fixed reproduces the
    /// perturbation-window sensitivity experiment.
    std::optional<int> perturbation_bits;
    PerturbationSign sign = PerturbationSign::positive;
};

/// Per-member raw sampling data, for tests and curve generation.
struct SchemeTrace {
    std::vector<SampleSet> member_samples;
    std::vector<long> member_trials;
    /// Per-trial energies in trial order, concatenated member by member;
    /// filled only when collect_trial_energies is set.
    std::vector<std::vector<double>> member_trial_energies;
    bool collect_trial_energies = false;
};

/// All trials on the single quantized original QMI.
MitigationResult run_baseline(const IsingModel& original, const DeviceModel& device,
                              long total_trials, uint64_t master_seed,
                              const RunOptions& options = {}, SchemeTrace* trace = nullptr);

/// Splits the budget equally over the ensemble (remainder to member 0),
/// samples every member and returns the lowest-energy outcome across all of
/// them; outcomes are always scored against `original`. m == 1 degenerates
/// to the baseline split.
MitigationResult run_equal(const IsingModel& original, const DeviceModel& device, int m,
                           long total_trials, uint64_t master_seed,
                           const RunOptions& options = {}, SchemeTrace* trace = nullptr);

/// run_equal's sampling followed by greedy single-flip descent on every
/// distinct outcome of every member; on identical seeds the result energy is
/// never above run_equal's.
MitigationResult run_equal_plus(const IsingModel& original, const DeviceModel& device, int m,
                                long total_trials, uint64_t master_seed,
                                const RunOptions& options = {}, SchemeTrace* trace = nullptr);

/// Baseline sampling plus greedy single-flip descent on every distinct
/// outcome (the post-processing scheme standalone).
MitigationResult run_sqc(const IsingModel& original, const DeviceModel& device, long total_trials,
                         uint64_t master_seed, const RunOptions& options = {},
                         SchemeTrace* trace = nullptr);

/// Spin-reversal transform scheme: the budget is split across k gauges
/// (gauge 0 is the identity, so k == 1 reduces to the baseline). Each gauged
/// QMI is programmed separately — changing coefficient signs re-keys the
/// systematic bias — and outcomes are un-gauged before scoring.
MitigationResult run_srt(const IsingModel& original, const DeviceModel& device, int k_gauges,
                         long total_trials, uint64_t master_seed,
                         const RunOptions& options = {}, SchemeTrace* trace = nullptr);

/// Greedy descent over Hamming-distance-1 neighbours: repeatedly flips the
/// qubit with the most negative energy delta (ties to the lowest index)
/// until no flip improves. Returns a 1-flip local minimum whose energy never
/// exceeds the input's.
SpinConfig sqc(const IsingModel& model, const SpinConfig& z);
SpinConfig sqc(const CompiledModel& model, SpinConfig z);

/// Gauge transform: h_i -> g_i h_i, J_ij -> g_i g_j J_ij, offset unchanged.
/// Preserves the energy spectrum; srt_untransform maps outcomes back via
/// z_i -> g_i z_i.
IsingModel srt_transform(const IsingModel& model, const SpinConfig& gauge);
SpinConfig srt_untransform(const SpinConfig& gauge, const SpinConfig& z);

}  // namespace equal
