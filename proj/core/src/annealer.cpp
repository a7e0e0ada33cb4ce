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

#include "equal/annealer.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace equal {

namespace {

constexpr uint64_t kFnvOffset = 0xcbf29ce484222325ull;
constexpr uint64_t kFnvPrime = 0x100000001b3ull;

void fnv_mix(uint64_t& hash, uint64_t word) {
    for (int shift = 0; shift < 64; shift += 8) {
        hash ^= (word >> shift) & 0xffull;
        hash *= kFnvPrime;
    }
}

}  // namespace

void DeviceModel::validate() const {
    ranges.validate();
    if (bits < 1 || bits > 53) throw std::invalid_argument("DeviceModel: bits must be in [1, 53]");
    if (sigma_h < 0.0 || sigma_j < 0.0) {
        throw std::invalid_argument("DeviceModel: sigma_h and sigma_j must be non-negative");
    }
    if (sweeps < 1) throw std::invalid_argument("DeviceModel: sweeps must be >= 1");
    if (!(beta_start > 0.0) || !(beta_end >= beta_start)) {
        throw std::invalid_argument("DeviceModel: need 0 < beta_start <= beta_end");
    }
    if (trial_correlation < 0.0 || trial_correlation > 1.0) {
        throw std::invalid_argument("DeviceModel: trial_correlation must be in [0, 1]");
    }
}

uint64_t qmi_coefficient_hash(const IsingModel& model) {
    uint64_t hash = kFnvOffset;
    fnv_mix(hash, static_cast<uint64_t>(model.n));
    for (const auto& [i, v] : model.h) {
        fnv_mix(hash, static_cast<uint64_t>(i));
        fnv_mix(hash, std::bit_cast<uint64_t>(v));
    }
    for (const auto& [ij, v] : model.j) {
        fnv_mix(hash, static_cast<uint64_t>(ij.first));
        fnv_mix(hash, static_cast<uint64_t>(ij.second));
        fnv_mix(hash, std::bit_cast<uint64_t>(v));
    }
    return hash;
}

ProgrammedQmi program(const DeviceModel& device, const Qmi& qmi) {
    device.validate();
    if (qmi.bits != device.bits || !(qmi.ranges == device.ranges)) {
        throw std::invalid_argument(
            "program: QMI precision/ranges do not match the device (qmi bits " +
            std::to_string(qmi.bits) + ", device bits " + std::to_string(device.bits) + ")");
    }
    ProgrammedQmi pq;
    pq.intended = qmi;
    pq.device = device;
    const uint64_t coeff_hash = qmi_coefficient_hash(qmi.model);
    pq.bias_fingerprint = rng::derive(coeff_hash, device.device_seed);

    auto eng = rng::make_engine(pq.bias_fingerprint);
    pq.corrupted = qmi.model;
    for (auto& [i, v] : pq.corrupted.h) {
        (void)i;
        v += device.sigma_h * rng::normal(eng);
    }
    for (auto& [ij, v] : pq.corrupted.j) {
        (void)ij;
        v += device.sigma_j * rng::normal(eng);
    }
    return pq;
}

std::vector<double> geometric_betas(double beta_start, double beta_end, int sweeps) {
    if (sweeps < 1) throw std::invalid_argument("geometric_betas: sweeps must be >= 1");
    if (!(beta_start > 0.0) || !(beta_end >= beta_start)) {
        throw std::invalid_argument("geometric_betas: need 0 < beta_start <= beta_end");
    }
    std::vector<double> betas(static_cast<size_t>(sweeps));
    if (sweeps == 1) {
        betas[0] = beta_end;
        return betas;
    }
    const double ratio = beta_end / beta_start;
    for (int s = 0; s < sweeps; ++s) {
        betas[static_cast<size_t>(s)] =
            beta_start * std::pow(ratio, static_cast<double>(s) / (sweeps - 1));
    }
    return betas;
}

void anneal_once(const CompiledModel& model, std::span<const double> betas, SpinConfig& z,
                 std::vector<double>& fields, rng::Engine& eng) {
    compute_fields(model, z, fields);
    const int n = model.n;
    for (double beta : betas) {
        for (int i = 0; i < n; ++i) {
            const double delta = -2.0 * z[i] * fields[static_cast<size_t>(i)];
            const double u = rng::uniform01(eng);
            if (delta <= 0.0 || u < std::exp(-beta * delta)) {
                z[i] = static_cast<int8_t>(-z[i]);
                const double two_zi = 2.0 * z[i];
                for (int k = model.nbr_offset[static_cast<size_t>(i)];
                     k < model.nbr_offset[static_cast<size_t>(i) + 1]; ++k) {
                    fields[static_cast<size_t>(model.nbr_index[static_cast<size_t>(k)])] +=
                        model.nbr_weight[static_cast<size_t>(k)] * two_zi;
                }
            }
        }
    }
}

namespace detail {

void for_each_trial(const ProgrammedQmi& pq, long trials, uint64_t trial_seed,
                    const IsingModel& true_model,
                    const std::function<void(const SpinConfig&, double)>& per_trial) {
    if (trials < 1) throw std::invalid_argument("sample: trials must be >= 1");
    if (true_model.n != pq.corrupted.n) {
        throw std::invalid_argument("sample: true model has n=" + std::to_string(true_model.n) +
                                    " but QMI has n=" + std::to_string(pq.corrupted.n));
    }
    const CompiledModel run_model = compile(pq.corrupted);
    const CompiledModel score_model = compile(true_model);
    const auto betas =
        geometric_betas(pq.device.beta_start, pq.device.beta_end, pq.device.sweeps);
    const double rho = pq.device.trial_correlation;

    auto eng = rng::make_engine(trial_seed);
    SpinConfig z;
    z.spins.resize(static_cast<size_t>(run_model.n));
    std::vector<double> fields(static_cast<size_t>(run_model.n));

    for (long t = 0; t < trials; ++t) {
        const bool reuse = t > 0 && rho > 0.0 && rng::uniform01(eng) < rho;
        if (!reuse) {
            for (auto& s : z.spins) s = rng::random_spin(eng);
        }
        anneal_once(run_model, betas, z, fields, eng);
        per_trial(z, energy(score_model, z));
    }
}

}  // namespace detail

SampleSet sample(const ProgrammedQmi& pq, long trials, uint64_t trial_seed,
                 const IsingModel& true_model) {
    SampleSetBuilder builder(qmi_coefficient_hash(pq.intended.model));
    detail::for_each_trial(pq, trials, trial_seed, true_model,
                           [&](const SpinConfig& z, double e) { builder.add(z, e); });
    return builder.take();
}

std::vector<std::pair<long, double>> run_trials_curve(const ProgrammedQmi& pq, long trial_budget,
                                                      const std::vector<long>& checkpoints,
                                                      uint64_t trial_seed,
                                                      const IsingModel& true_model) {
    if (checkpoints.empty()) throw std::invalid_argument("run_trials_curve: no checkpoints");
    long prev = 0;
    for (long c : checkpoints) {
        if (c <= prev) {
            throw std::invalid_argument(
                "run_trials_curve: checkpoints must be positive and strictly ascending");
        }
        prev = c;
    }
    if (checkpoints.back() != trial_budget) {
        throw std::invalid_argument("run_trials_curve: last checkpoint must equal the budget");
    }

    std::vector<std::pair<long, double>> curve;
    curve.reserve(checkpoints.size());
    double best = std::numeric_limits<double>::infinity();
    long done = 0;
    size_t next = 0;
    detail::for_each_trial(pq, trial_budget, trial_seed, true_model,
                           [&](const SpinConfig&, double e) {
                               best = std::min(best, e);
                               ++done;
                               if (next < checkpoints.size() && done == checkpoints[next]) {
                                   curve.emplace_back(done, best);
                                   ++next;
                               }
                           });
    return curve;
}

// ---------------------------------------------------------------------------
// Device config I/O

namespace {

using json = nlohmann::ordered_json;

}  // namespace

DeviceModel device_from_json(const std::string& text) {
    json v;
    try {
        v = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("device: invalid JSON: ") + e.what());
    }
    if (!v.is_object()) throw std::invalid_argument("device: expected a JSON object");
    DeviceModel d;
    if (v.contains("bits")) d.bits = v["bits"].get<int>();
    if (v.contains("h_max")) d.ranges.h_max = v["h_max"].get<double>();
    if (v.contains("j_max")) d.ranges.j_max = v["j_max"].get<double>();
    if (v.contains("sigma_h")) d.sigma_h = v["sigma_h"].get<double>();
    if (v.contains("sigma_j")) d.sigma_j = v["sigma_j"].get<double>();
    if (v.contains("sweeps")) d.sweeps = v["sweeps"].get<int>();
    if (v.contains("beta")) {
        const auto& beta = v["beta"];
        if (!beta.is_array() || beta.size() != 2) {
            throw std::invalid_argument("device: \"beta\" must be [beta_start, beta_end]");
        }
        d.beta_start = beta[0].get<double>();
        d.beta_end = beta[1].get<double>();
    }
    if (v.contains("trial_correlation")) d.trial_correlation = v["trial_correlation"].get<double>();
    if (v.contains("device_seed")) d.device_seed = v["device_seed"].get<uint64_t>();
    d.validate();
    return d;
}

std::string device_to_json(const DeviceModel& device) {
    json out;
    out["bits"] = device.bits;
    out["h_max"] = device.ranges.h_max;
    out["j_max"] = device.ranges.j_max;
    out["sigma_h"] = device.sigma_h;
    out["sigma_j"] = device.sigma_j;
    out["sweeps"] = device.sweeps;
    out["beta"] = json::array({device.beta_start, device.beta_end});
    out["trial_correlation"] = device.trial_correlation;
    out["device_seed"] = device.device_seed;
    return out.dump(2) + "\n";
}

}  // namespace equal
