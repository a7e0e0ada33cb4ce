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

#include "equal/metrics.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "equal/annealer.hpp"
#include "equal/mitigate.hpp"
#include "equal/rng.hpp"
#include "json.hpp"

namespace equal {

namespace {

constexpr uint64_t kSaltRestart = 0x72737472ull;

}  // namespace

std::string to_string(GroundMethod method) {
    switch (method) {
        case GroundMethod::exact_enumeration: return "exact_enumeration";
        case GroundMethod::multistart_descent: return "multistart_descent";
    }
    throw std::logic_error("to_string: unknown ground method");
}

double energy_residual(double e_min, const GroundTruth& ground) {
    return std::abs(e_min - ground.energy);
}

GroundTruth exact_ground(const IsingModel& model) {
    model.validate();
    if (model.n > 26) {
        throw std::invalid_argument("exact_ground: n=" + std::to_string(model.n) +
                                    " exceeds the enumeration guard (26); use estimate_ground");
    }
    const CompiledModel cm = compile(model);
    SpinConfig z;
    z.spins.assign(static_cast<size_t>(model.n), int8_t{1});
    std::vector<double> fields;
    compute_fields(cm, z, fields);

    double e = energy(cm, z);
    double best = e;
    SpinConfig best_z = z;

    // Gray-code walk: step t flips bit countr_zero(t), visiting all 2^n
    // configurations with one flip each.
    const uint64_t total = 1ull << model.n;
    for (uint64_t t = 1; t < total; ++t) {
        const int i = std::countr_zero(t);
        e += -2.0 * z[i] * fields[static_cast<size_t>(i)];
        z[i] = static_cast<int8_t>(-z[i]);
        const double two_zi = 2.0 * z[i];
        for (int k = cm.nbr_offset[static_cast<size_t>(i)];
             k < cm.nbr_offset[static_cast<size_t>(i) + 1]; ++k) {
            fields[static_cast<size_t>(cm.nbr_index[static_cast<size_t>(k)])] +=
                cm.nbr_weight[static_cast<size_t>(k)] * two_zi;
        }
        if (e < best) {
            best = e;
            best_z = z;
        }
    }
    return {energy(cm, best_z), GroundMethod::exact_enumeration, true};
}

GroundTruth estimate_ground(const IsingModel& model, const EstimateEffort& effort, uint64_t seed) {
    model.validate();
    if (effort.restarts < 1) {
        throw std::invalid_argument("estimate_ground: restarts must be >= 1");
    }
    const int sweeps = effort.sweeps > 0 ? effort.sweeps : std::max(200, 20 * model.n);
    const CompiledModel cm = compile(model);
    const auto betas = geometric_betas(effort.beta_start, effort.beta_end, sweeps);

    double best = std::numeric_limits<double>::infinity();
    SpinConfig z;
    z.spins.resize(static_cast<size_t>(model.n));
    std::vector<double> fields(static_cast<size_t>(model.n));
    for (int r = 0; r < effort.restarts; ++r) {
        auto eng = rng::make_engine(rng::derive(seed, kSaltRestart, static_cast<uint64_t>(r)));
        for (auto& s : z.spins) s = rng::random_spin(eng);
        anneal_once(cm, betas, z, fields, eng);
        const SpinConfig polished = sqc(cm, z);
        best = std::min(best, energy(cm, polished));
    }
    return {best, GroundMethod::multistart_descent, false};
}

std::vector<HistogramBin> energy_histogram(const SampleSet& samples, int bins) {
    if (bins < 1) throw std::invalid_argument("energy_histogram: bins must be >= 1");
    if (samples.entries.empty()) {
        throw std::invalid_argument("energy_histogram: empty sample set");
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& e : samples.entries) {
        lo = std::min(lo, e.energy);
        hi = std::max(hi, e.energy);
    }
    const double width = (hi - lo) / bins;
    std::vector<HistogramBin> out(static_cast<size_t>(bins));
    for (int b = 0; b < bins; ++b) {
        out[static_cast<size_t>(b)].lower = lo + b * width;
        out[static_cast<size_t>(b)].upper = lo + (b + 1) * width;
    }
    for (const auto& e : samples.entries) {
        int b = width > 0.0 ? static_cast<int>((e.energy - lo) / width) : 0;
        b = std::clamp(b, 0, bins - 1);
        out[static_cast<size_t>(b)].count += e.multiplicity;
    }
    return out;
}

std::optional<double> relative_er(double scheme_er, double baseline_er) {
    if (scheme_er < 0.0 || baseline_er < 0.0) {
        throw std::invalid_argument("relative_er: residuals must be non-negative");
    }
    if (baseline_er == 0.0) return std::nullopt;
    return scheme_er / baseline_er;
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

using json = nlohmann::ordered_json;

}  // namespace

std::string er_report_to_json(const ErReport& report) {
    json out;
    out["e_min"] = report.e_min;
    out["e_global"] = {{"energy", report.e_global.energy},
                       {"method", to_string(report.e_global.method)},
                       {"certified", report.e_global.certified}};
    out["er"] = report.er;
    if (report.relative_er) {
        out["relative_er"] = *report.relative_er;
    } else {
        out["relative_er"] = nullptr;
    }
    if (report.curve) {
        json curve = json::array();
        for (const auto& [trials, er] : *report.curve) curve.push_back(json::array({trials, er}));
        out["curve"] = std::move(curve);
    }
    return out.dump(2) + "\n";
}

std::string curve_to_csv(const std::vector<std::pair<long, double>>& curve) {
    std::string out = "trials,er\n";
    for (const auto& [trials, er] : curve) {
        out += std::to_string(trials);
        out += ',';
        out += format_double(er);
        out += '\n';
    }
    return out;
}

}  // namespace equal
