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

#include "equal/precision.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace equal {

namespace {

// Slack for range checks: normalization can land a coefficient one ulp past
// the boundary.
constexpr double kRangeSlack = 1e-12;

void check_bits(int bits) {
    if (bits < 1 || bits > 53) {
        throw std::invalid_argument("quantize: bits must be in [1, 53], got " +
                                    std::to_string(bits));
    }
}

double snap(double x, double range, int bits, RoundingMode mode) {
    if (std::abs(x) > range * (1.0 + kRangeSlack)) {
        throw std::invalid_argument("quantize: coefficient " + std::to_string(x) +
                                    " exceeds device range " + std::to_string(range) +
                                    "; normalize first");
    }
    const double step = std::ldexp(range, -bits);
    double k = (mode == RoundingMode::nearest_half_away) ? std::round(x / step)
                                                         : std::trunc(x / step);
    const double k_max = std::ldexp(1.0, bits);  // |k| <= 2^bits keeps |q| <= range
    k = std::clamp(k, -k_max, k_max);
    return k * step;
}

}  // namespace

void DeviceRanges::validate() const {
    if (!(h_max > 0.0) || !(j_max > 0.0)) {
        throw std::invalid_argument("DeviceRanges: h_max and j_max must be strictly positive");
    }
}

std::pair<IsingModel, double> normalize(const IsingModel& model, const DeviceRanges& ranges) {
    ranges.validate();
    double ratio = 1.0;
    for (const auto& [i, v] : model.h) {
        (void)i;
        ratio = std::max(ratio, std::abs(v) / ranges.h_max);
    }
    for (const auto& [ij, v] : model.j) {
        (void)ij;
        ratio = std::max(ratio, std::abs(v) / ranges.j_max);
    }
    if (ratio == 1.0) return {model, 1.0};
    const double s = 1.0 / ratio;
    return {scale(model, s), s};
}

double quantize_value(double x, double range, int bits, RoundingMode mode) {
    check_bits(bits);
    if (!(range > 0.0)) throw std::invalid_argument("quantize_value: range must be positive");
    return snap(x, range, bits, mode);
}

Qmi quantize(const IsingModel& model, int bits, const DeviceRanges& ranges, RoundingMode mode) {
    check_bits(bits);
    ranges.validate();
    Qmi q;
    q.model = model;
    q.bits = bits;
    q.ranges = ranges;
    for (auto& [i, v] : q.model.h) {
        (void)i;
        v = snap(v, ranges.h_max, bits, mode);
    }
    for (auto& [ij, v] : q.model.j) {
        (void)ij;
        v = snap(v, ranges.j_max, bits, mode);
    }
    return q;
}

double quantization_error(const IsingModel& model, int bits, const DeviceRanges& ranges,
                          RoundingMode mode) {
    check_bits(bits);
    ranges.validate();
    double worst = 0.0;
    for (const auto& [i, v] : model.h) {
        (void)i;
        worst = std::max(worst, std::abs(snap(v, ranges.h_max, bits, mode) - v));
    }
    for (const auto& [ij, v] : model.j) {
        (void)ij;
        worst = std::max(worst, std::abs(snap(v, ranges.j_max, bits, mode) - v));
    }
    return worst;
}

}  // namespace equal
