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

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace equal::rng {

using Engine = std::mt19937_64;

/// SplitMix64 finalizer. Used to whiten seeds and to derive independent
/// sub-streams; every (seed, stream) pair maps to a well-mixed 64-bit value.
inline uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Derive a sub-seed for an independent stream. Reproducible and
/// order-free: derive(s, k) does not depend on any other derive call,
/// which is what makes parallel execution bit-identical to serial.
inline uint64_t derive(uint64_t seed, uint64_t stream) {
    return mix64(seed ^ mix64(stream));
}

inline uint64_t derive(uint64_t seed, uint64_t a, uint64_t b) {
    return derive(derive(seed, a), b);
}

inline Engine make_engine(uint64_t seed) {
    return Engine(mix64(seed));
}

/// Uniform double in [0, 1), 53 significant bits.
inline double uniform01(Engine& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

inline double uniform(Engine& eng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(eng);
}

/// Standard normal via Box-Muller. Consumes exactly two engine draws per
/// call; std::normal_distribution is avoided because its draw sequence is
/// implementation-defined and we require bit-reproducible streams.
inline double normal(Engine& eng) {
    double u1 = 1.0 - uniform01(eng);  // (0, 1], keeps log() finite
    double u2 = uniform01(eng);
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
}

inline int8_t random_spin(Engine& eng) {
    return (eng() >> 32) & 1 ? int8_t{1} : int8_t{-1};
}

}  // namespace equal::rng
