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
#include <utility>
#include <vector>

#include "equal/ising.hpp"

namespace equal {

enum class GroundMethod { exact_enumeration, multistart_descent };

std::string to_string(GroundMethod method);

/// Ground-state energy reference. certified is true only for exhaustive
/// enumeration; a multistart estimate is a best-known value.
struct GroundTruth {
    double energy = 0.0;
    GroundMethod method = GroundMethod::exact_enumeration;
    bool certified = false;
};

/// Energy Residual: |e_min - ground|. Zero exactly when the solution attains
/// the ground reference.
double energy_residual(double e_min, const GroundTruth& ground);

/// Certified global minimum by full 2^n enumeration (Gray-code single-flip
/// walk; the returned energy is recomputed from the argmin configuration so
/// no delta drift accumulates). Guarded to n <= 26; larger models must use
/// estimate_ground.
GroundTruth exact_ground(const IsingModel& model);

struct EstimateEffort {
    int restarts = 64;
    int sweeps = 0;  // 0 picks 20*n, clamped to at least 200
    double beta_start = 0.1;
    double beta_end = 10.0;
};

/// Multistart estimate: independent long-schedule noiseless anneals, each
/// polished by greedy single-flip descent; returns the minimum over
/// restarts. Deterministic per seed, and restart streams are
/// prefix-consistent, so increasing the effort never worsens the estimate.
GroundTruth estimate_ground(const IsingModel& model, const EstimateEffort& effort, uint64_t seed);

struct HistogramBin {
    double lower = 0.0;
    double upper = 0.0;
    long count = 0;
};

/// Equal-width histogram over [min, max] sample energies, multiplicities
/// respected. Total count equals the trial count.
std::vector<HistogramBin> energy_histogram(const SampleSet& samples, int bins);

/// scheme_er / baseline_er, or nullopt when the baseline solved exactly
/// (baseline_er == 0) and the ratio would be meaningless.
std::optional<double> relative_er(double scheme_er, double baseline_er);

/// Energy Residual report for one scheme run.
struct ErReport {
    double e_min = 0.0;
    GroundTruth e_global;
    double er = 0.0;
    std::optional<double> relative_er;
    std::optional<std::vector<std::pair<long, double>>> curve;  // (trials, er)
};

std::string er_report_to_json(const ErReport& report);

/// CSV with header "trials,er".
std::string curve_to_csv(const std::vector<std::pair<long, double>>& curve);

/// Locale-independent shortest-round-trip formatting, '.' decimal point.
std::string format_double(double v);

}  // namespace equal
