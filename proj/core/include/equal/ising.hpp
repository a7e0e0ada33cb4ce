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
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace equal {

/// One spin assignment, entries in {-1, +1}.
struct SpinConfig {
    std::vector<int8_t> spins;

    SpinConfig() = default;
    explicit SpinConfig(std::vector<int8_t> s) : spins(std::move(s)) {}

    int size() const { return static_cast<int>(spins.size()); }
    int8_t operator[](int i) const { return spins[static_cast<size_t>(i)]; }
    int8_t& operator[](int i) { return spins[static_cast<size_t>(i)]; }
    bool operator==(const SpinConfig&) const = default;
};

/// Returns a copy of z with spin i negated.
SpinConfig flipped(SpinConfig z, int i);

/// Sparse Ising Hamiltonian
///
///   E(z) = offset + sum_i h_i z_i + sum_{i<j} J_ij z_i z_j,   z_i in {-1,+1}.
///
/// Coefficients are stored sparsely; an absent entry is exactly zero.
/// Coupler keys are strictly ordered pairs (i < j), stored once and treated
/// symmetrically. Instances are immutable by convention once built and are
/// safe to share across threads.
struct IsingModel {
    int n = 0;
    std::map<int, double> h;
    std::map<std::pair<int, int>, double> j;
    double offset = 0.0;

    /// Throws std::invalid_argument on out-of-range indices, self-couplings
    /// or reversed coupler keys.
    void validate() const;

    bool operator==(const IsingModel&) const = default;
};

/// Exact energy of z under the model. Throws on length mismatch.
double energy(const IsingModel& model, const SpinConfig& z);

/// Local field vector f with f_k = h_k + sum_j J_kj z_j (J symmetric).
std::vector<double> local_fields(const IsingModel& model, const SpinConfig& z);

/// Energy change from flipping spin i, given up-to-date local fields:
/// delta = -2 * z_i * f_i. The caller owns field maintenance; after a flip
/// only the fields of i's neighbours change.
double flip_delta(const IsingModel& model, const SpinConfig& z,
                  std::span<const double> fields, int i);

/// Multiplies every coefficient and the offset by s > 0. Energy ordering,
/// and hence the argmin set, is preserved.
IsingModel scale(const IsingModel& model, double s);

/// Coefficient-wise sum of two models on the same qubit count.
IsingModel add(const IsingModel& a, const IsingModel& b);

/// Dense adjacency form for hot loops (annealing sweeps, greedy descent,
/// enumeration). Built once per run from the sparse model.
struct CompiledModel {
    int n = 0;
    double offset = 0.0;
    std::vector<double> h;           // dense linear terms
    std::vector<int> nbr_offset;     // CSR over neighbours, size n+1
    std::vector<int> nbr_index;
    std::vector<double> nbr_weight;
    std::vector<std::pair<std::pair<int, int>, double>> edges;
};

CompiledModel compile(const IsingModel& model);
double energy(const CompiledModel& model, const SpinConfig& z);
void compute_fields(const CompiledModel& model, const SpinConfig& z,
                    std::vector<double>& out);

/// Multiset of outcomes from a batch of trials on one QMI. Identical spin
/// configurations are collapsed into a multiplicity count; entries keep
/// first-seen order. Energies are always measured against the true problem
/// Hamiltonian, never against the device's corrupted one.
struct SampleSet {
    struct Entry {
        SpinConfig config;
        double energy = 0.0;
        long multiplicity = 0;
    };
    std::vector<Entry> entries;
    uint64_t model_id = 0;

    long total_trials() const;
    /// Lowest-energy entry, first-seen tie-break. Throws if empty.
    const Entry& best() const;
};

/// Single-writer accumulator for a SampleSet.
class SampleSetBuilder {
  public:
    explicit SampleSetBuilder(uint64_t model_id);
    void add(const SpinConfig& z, double energy);
    SampleSet take();

  private:
    SampleSet set_;
    std::map<std::vector<int8_t>, size_t> index_;
};

/// Merges two sets from the same QMI, recombining multiplicities.
SampleSet merge(const SampleSet& a, const SampleSet& b);

// Model file format: JSON object
//   {"n": int, "h": [[i, v], ...], "j": [[i, j, v], ...], "offset": v}
// with 0-based indices, coupler keys i < j, duplicates rejected.
IsingModel model_from_json(const std::string& text);
std::string model_to_json(const IsingModel& model);
IsingModel load_model(const std::string& path);
void save_model(const IsingModel& model, const std::string& path);

std::string sample_set_to_json(const SampleSet& set);

}  // namespace equal
