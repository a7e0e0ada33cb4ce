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

#include <utility>

#include "equal/ising.hpp"

namespace equal {

/// Admissible coefficient magnitudes on the device: |h_i| <= h_max,
/// |J_ij| <= j_max.
struct DeviceRanges {
    double h_max = 2.0;
    double j_max = 1.0;

    void validate() const;
    bool operator==(const DeviceRanges&) const = default;
};

/// Quantum machine instruction: a model whose coefficients all sit on the
/// device's b-bit grid inside the device ranges. scale_applied records the
/// normalization factor that mapped the user's model onto the device.
struct Qmi {
    IsingModel model;
    int bits = 8;
    DeviceRanges ranges;
    double scale_applied = 1.0;
};

/// Tie rule used when snapping to the DAC grid. Nearest-level with
/// half-away-from-zero ties is the default; the floor mode exists for
/// sensitivity checks only.
enum class RoundingMode { nearest_half_away, floor_toward_zero };

/// Scales the model by s = 1 / max(max|h|/h_max, max|J|/j_max, 1) so every
/// coefficient fits the device ranges; returns the scaled model and s.
/// Only ever scales down (s <= 1); the argmin set is preserved.
std::pair<IsingModel, double> normalize(const IsingModel& model, const DeviceRanges& ranges);

/// Snaps one coefficient to the b-bit grid of the given range. The grid step
/// is range * 2^-bits. Exposed for direct testing.
double quantize_value(double x, double range, int bits,
                      RoundingMode mode = RoundingMode::nearest_half_away);

/// Snaps every h to the h grid and every J to the J grid; the offset is
/// untouched. Idempotent. Requires the model to be normalized: a coefficient
/// outside its range throws std::invalid_argument.
Qmi quantize(const IsingModel& model, int bits, const DeviceRanges& ranges,
             RoundingMode mode = RoundingMode::nearest_half_away);

/// Largest per-coefficient snap distance max|Q_b(x) - x| over the model.
double quantization_error(const IsingModel& model, int bits, const DeviceRanges& ranges,
                          RoundingMode mode = RoundingMode::nearest_half_away);

}  // namespace equal
