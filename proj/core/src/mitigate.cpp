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

#include "equal/mitigate.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace equal {

namespace {

constexpr uint64_t kSaltTrials = 0x7472696cull;   // per-member trial streams
constexpr uint64_t kSaltPerturb = 0x70727462ull;  // per-member perturbation draws
constexpr uint64_t kSaltGauge = 0x67616765ull;    // per-gauge sign vectors

double clamp_range(double v, double range) { return std::clamp(v, -range, range); }

}  // namespace

std::string to_string(Scheme scheme) {
    switch (scheme) {
        case Scheme::baseline: return "baseline";
        case Scheme::equal: return "equal";
        case Scheme::sqc: return "sqc";
        case Scheme::equal_plus: return "equal_plus";
        case Scheme::srt: return "srt";
    }
    throw std::logic_error("to_string: unknown scheme");
}

Scheme scheme_from_string(const std::string& name) {
    if (name == "baseline") return Scheme::baseline;
    if (name == "equal") return Scheme::equal;
    if (name == "sqc" || name == "sqc_only") return Scheme::sqc;
    if (name == "equal_plus") return Scheme::equal_plus;
    if (name == "srt") return Scheme::srt;
    throw std::invalid_argument("unknown scheme \"" + name + "\"");
}

double perturbation_magnitude(int bits, rng::Engine& eng) {
    if (bits < 1) throw std::invalid_argument("perturbation_magnitude: bits must be >= 1");
    const double lo = std::ldexp(1.0, -(bits + 1));
    const double hi = std::ldexp(1.0, -bits);
    return rng::uniform(eng, lo, hi);
}

namespace detail {

Qmi perturbed_member(const IsingModel& normalized, double scale_applied, double r, int bits,
                     const DeviceRanges& ranges, PerturbationSign sign, rng::Engine& eng) {
    IsingModel perturbed = normalized;
    auto delta_sign = [&]() {
        return sign == PerturbationSign::random_per_coefficient
                   ? static_cast<double>(rng::random_spin(eng))
                   : 1.0;
    };
    for (auto& [i, v] : perturbed.h) {
        (void)i;
        v = clamp_range(v + delta_sign() * r * ranges.h_max, ranges.h_max);
    }
    for (auto& [ij, v] : perturbed.j) {
        (void)ij;
        v = clamp_range(v + delta_sign() * r * ranges.j_max, ranges.j_max);
    }
    Qmi q = quantize(perturbed, bits, ranges);
    q.scale_applied = scale_applied;
    return q;
}

}  // namespace detail

Ensemble make_ensemble(const IsingModel& original, int m, int bits, const DeviceRanges& ranges,
                       uint64_t master_seed, const EnsembleOptions& options) {
    if (m < 2) {
        throw std::invalid_argument("make_ensemble: need at least 2 members, got " +
                                    std::to_string(m));
    }
    auto [normalized, s] = normalize(original, ranges);

    Ensemble ensemble;
    ensemble.members.reserve(static_cast<size_t>(m));
    Qmi original_qmi = quantize(normalized, bits, ranges);
    original_qmi.scale_applied = s;
    ensemble.members.push_back(std::move(original_qmi));
    ensemble.perturbation_magnitudes.push_back(0.0);

    for (int k = 1; k < m; ++k) {
        auto eng = rng::make_engine(
            rng::derive(master_seed, kSaltPerturb, static_cast<uint64_t>(k)));
        const double r = perturbation_magnitude(bits, eng);
        ensemble.members.push_back(
            detail::perturbed_member(normalized, s, r, bits, ranges, options.sign, eng));
        ensemble.perturbation_magnitudes.push_back(r);
    }
    return ensemble;
}

SpinConfig sqc(const CompiledModel& model, SpinConfig z) {
    if (z.size() != model.n) {
        throw std::invalid_argument("sqc: spin configuration has length " +
                                    std::to_string(z.size()) + " but model has n=" +
                                    std::to_string(model.n));
    }
    std::vector<double> fields;
    compute_fields(model, z, fields);
    while (true) {
        int best_i = -1;
        double best_delta = 0.0;
        for (int i = 0; i < model.n; ++i) {
            const double delta = -2.0 * z[i] * fields[static_cast<size_t>(i)];
            if (delta < best_delta) {
                best_delta = delta;
                best_i = i;
            }
        }
        if (best_i < 0) break;
        z[best_i] = static_cast<int8_t>(-z[best_i]);
        const double two_zi = 2.0 * z[best_i];
        for (int k = model.nbr_offset[static_cast<size_t>(best_i)];
             k < model.nbr_offset[static_cast<size_t>(best_i) + 1]; ++k) {
            fields[static_cast<size_t>(model.nbr_index[static_cast<size_t>(k)])] +=
                model.nbr_weight[static_cast<size_t>(k)] * two_zi;
        }
    }
    return z;
}

SpinConfig sqc(const IsingModel& model, const SpinConfig& z) {
    return sqc(compile(model), z);
}

IsingModel srt_transform(const IsingModel& model, const SpinConfig& gauge) {
    if (gauge.size() != model.n) {
        throw std::invalid_argument("srt_transform: gauge has length " +
                                    std::to_string(gauge.size()) + " but model has n=" +
                                    std::to_string(model.n));
    }
    for (int8_t g : gauge.spins) {
        if (g != 1 && g != -1) {
            throw std::invalid_argument("srt_transform: gauge entries must be -1 or +1");
        }
    }
    IsingModel out = model;
    for (auto& [i, v] : out.h) v *= gauge[i];
    for (auto& [ij, v] : out.j) v *= gauge[ij.first] * gauge[ij.second];
    return out;
}

SpinConfig srt_untransform(const SpinConfig& gauge, const SpinConfig& z) {
    if (gauge.size() != z.size()) {
        throw std::invalid_argument("srt_untransform: gauge and configuration lengths differ");
    }
    SpinConfig out = z;
    for (int i = 0; i < out.size(); ++i) {
        out[i] = static_cast<int8_t>(gauge[i] * z[i]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Scheme execution

namespace {

struct MemberJob {
    Qmi qmi;
    long trials = 0;
    uint64_t trial_seed = 0;
    std::optional<SpinConfig> gauge;  // set for SRT members
};

struct MemberOutcome {
    SampleSet samples;                  // un-gauged, scored against the original
    std::vector<double> trial_energies; // filled when requested
};

/// Equal split with the remainder assigned to member 0, preserving the
/// never-worse containment of the original QMI.
std::vector<long> split_trials(long total, int members) {
    if (total < 1) throw std::invalid_argument("run: total_trials must be >= 1");
    if (members < 1) throw std::invalid_argument("run: need at least one member");
    if (total < members) {
        throw std::invalid_argument("run: total_trials (" + std::to_string(total) +
                                    ") must be >= the member count (" +
                                    std::to_string(members) + ")");
    }
    const long per = total / members;
    const long rem = total % members;
    std::vector<long> out(static_cast<size_t>(members), per);
    out[0] += rem;
    return out;
}

MemberOutcome run_member(const DeviceModel& device, const MemberJob& job,
                         const IsingModel& original, bool collect_energies) {
    const ProgrammedQmi pq = program(device, job.qmi);
    MemberOutcome out;
    if (collect_energies) out.trial_energies.reserve(static_cast<size_t>(job.trials));

    if (!job.gauge) {
        SampleSetBuilder builder(qmi_coefficient_hash(pq.intended.model));
        detail::for_each_trial(pq, job.trials, job.trial_seed, original,
                               [&](const SpinConfig& z, double e) {
                                   builder.add(z, e);
                                   if (collect_energies) out.trial_energies.push_back(e);
                               });
        out.samples = builder.take();
        return out;
    }

    // Gauged member: anneal in gauge space against the gauged original
    // (energies agree exactly with the un-gauged scoring), then map outcomes
    // back so the recorded sample set lives in the problem's own space.
    const IsingModel gauged_original = srt_transform(original, *job.gauge);
    SampleSetBuilder builder(qmi_coefficient_hash(pq.intended.model));
    detail::for_each_trial(pq, job.trials, job.trial_seed, gauged_original,
                           [&](const SpinConfig& z, double e) {
                               builder.add(srt_untransform(*job.gauge, z), e);
                               if (collect_energies) out.trial_energies.push_back(e);
                           });
    out.samples = builder.take();
    return out;
}

MitigationResult run_scheme(const IsingModel& original, const DeviceModel& device,
                            std::vector<MemberJob> jobs, Scheme scheme, bool apply_sqc,
                            const RunOptions& options, SchemeTrace* trace) {
    const auto t0 = std::chrono::steady_clock::now();
    device.validate();
    original.validate();

    const int member_count = static_cast<int>(jobs.size());
    std::vector<MemberOutcome> outcomes(jobs.size());
    const bool collect = trace != nullptr && trace->collect_trial_energies;

    const int threads = std::max(1, options.threads);
    if (threads == 1 || member_count == 1) {
        for (size_t k = 0; k < jobs.size(); ++k) {
            outcomes[k] = run_member(device, jobs[k], original, collect);
        }
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::thread> pool;
        const int used = std::min<int>(threads, member_count);
        pool.reserve(static_cast<size_t>(used));
        for (int t = 0; t < used; ++t) {
            pool.emplace_back([&]() {
                while (true) {
                    const size_t k = next.fetch_add(1);
                    if (k >= jobs.size()) return;
                    outcomes[k] = run_member(device, jobs[k], original, collect);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    const CompiledModel score_model = compile(original);
    MitigationResult result;
    result.scheme = scheme;
    result.per_member_best.reserve(jobs.size());

    // Deterministic merge order: (energy, member index, outcome index).
    // Strict < with members and outcomes visited in index order realizes the
    // tie-break, so the result is identical regardless of thread count.
    double global_best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < member_count; ++k) {
        const auto& samples = outcomes[static_cast<size_t>(k)].samples;
        double member_best = std::numeric_limits<double>::infinity();
        for (const auto& entry : samples.entries) {
            SpinConfig corrected;
            const SpinConfig* candidate = &entry.config;
            double e = entry.energy;
            if (apply_sqc) {
                corrected = sqc(score_model, entry.config);
                e = energy(score_model, corrected);
                candidate = &corrected;
            }
            member_best = std::min(member_best, e);
            if (e < global_best) {
                global_best = e;
                result.best_config = *candidate;
            }
        }
        result.per_member_best.emplace_back(k, member_best);
        result.trials_used += jobs[static_cast<size_t>(k)].trials;
        if (trace) {
            trace->member_samples.push_back(samples);
            trace->member_trials.push_back(jobs[static_cast<size_t>(k)].trials);
            if (collect) {
                trace->member_trial_energies.push_back(
                    std::move(outcomes[static_cast<size_t>(k)].trial_energies));
            }
        }
    }
    result.best_energy = global_best;

    result.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

std::vector<MemberJob> baseline_jobs(const IsingModel& original, const DeviceModel& device,
                                     long total_trials, uint64_t master_seed) {
    auto [normalized, s] = normalize(original, device.ranges);
    Qmi qmi = quantize(normalized, device.bits, device.ranges);
    qmi.scale_applied = s;
    MemberJob job;
    job.qmi = std::move(qmi);
    job.trials = total_trials;
    job.trial_seed = rng::derive(master_seed, kSaltTrials, 0);
    return {std::move(job)};
}

std::vector<MemberJob> ensemble_jobs(const IsingModel& original, const DeviceModel& device, int m,
                                     long total_trials, uint64_t master_seed,
                                     const RunOptions& options) {
    if (m < 1) throw std::invalid_argument("run_equal: m must be >= 1");
    if (m == 1) return baseline_jobs(original, device, total_trials, master_seed);

    const int bits = options.perturbation_bits.value_or(device.bits);
    EnsembleOptions ens_options;
    ens_options.sign = options.sign;
    Ensemble ensemble = make_ensemble(original, m, bits, device.ranges, master_seed, ens_options);
    const auto trials = split_trials(total_trials, m);
    ensemble.trials_per_member = total_trials / m;

    // Perturbations may have been drawn for a profiled precision differing
    // from the device's; re-snap members onto the device grid in that case.
    std::vector<MemberJob> jobs(static_cast<size_t>(m));
    for (int k = 0; k < m; ++k) {
        Qmi member = ensemble.members[static_cast<size_t>(k)];
        if (member.bits != device.bits) {
            const double s = member.scale_applied;
            member = quantize(member.model, device.bits, device.ranges);
            member.scale_applied = s;
        }
        jobs[static_cast<size_t>(k)].qmi = std::move(member);
        jobs[static_cast<size_t>(k)].trials = trials[static_cast<size_t>(k)];
        jobs[static_cast<size_t>(k)].trial_seed =
            rng::derive(master_seed, kSaltTrials, static_cast<uint64_t>(k));
    }
    return jobs;
}

}  // namespace

MitigationResult run_baseline(const IsingModel& original, const DeviceModel& device,
                              long total_trials, uint64_t master_seed, const RunOptions& options,
                              SchemeTrace* trace) {
    return run_scheme(original, device, baseline_jobs(original, device, total_trials, master_seed),
                      Scheme::baseline, /*apply_sqc=*/false, options, trace);
}

MitigationResult run_sqc(const IsingModel& original, const DeviceModel& device, long total_trials,
                         uint64_t master_seed, const RunOptions& options, SchemeTrace* trace) {
    return run_scheme(original, device, baseline_jobs(original, device, total_trials, master_seed),
                      Scheme::sqc, /*apply_sqc=*/true, options, trace);
}

MitigationResult run_equal(const IsingModel& original, const DeviceModel& device, int m,
                           long total_trials, uint64_t master_seed, const RunOptions& options,
                           SchemeTrace* trace) {
    return run_scheme(original, device,
                      ensemble_jobs(original, device, m, total_trials, master_seed, options),
                      Scheme::equal, /*apply_sqc=*/false, options, trace);
}

MitigationResult run_equal_plus(const IsingModel& original, const DeviceModel& device, int m,
                                long total_trials, uint64_t master_seed,
                                const RunOptions& options, SchemeTrace* trace) {
    return run_scheme(original, device,
                      ensemble_jobs(original, device, m, total_trials, master_seed, options),
                      Scheme::equal_plus, /*apply_sqc=*/true, options, trace);
}

MitigationResult run_srt(const IsingModel& original, const DeviceModel& device, int k_gauges,
                         long total_trials, uint64_t master_seed, const RunOptions& options,
                         SchemeTrace* trace) {
    if (k_gauges < 1) throw std::invalid_argument("run_srt: k_gauges must be >= 1");
    auto base = baseline_jobs(original, device, total_trials, master_seed);
    const Qmi& original_qmi = base.front().qmi;

    const auto trials = split_trials(total_trials, k_gauges);
    std::vector<MemberJob> jobs(static_cast<size_t>(k_gauges));
    for (int k = 0; k < k_gauges; ++k) {
        SpinConfig gauge;
        gauge.spins.assign(static_cast<size_t>(original.n), int8_t{1});
        if (k > 0) {
            auto eng = rng::make_engine(
                rng::derive(master_seed, kSaltGauge, static_cast<uint64_t>(k)));
            for (auto& g : gauge.spins) g = rng::random_spin(eng);
        }
        Qmi gauged = original_qmi;
        gauged.model = srt_transform(original_qmi.model, gauge);
        jobs[static_cast<size_t>(k)].qmi = std::move(gauged);
        jobs[static_cast<size_t>(k)].trials = trials[static_cast<size_t>(k)];
        jobs[static_cast<size_t>(k)].trial_seed =
            rng::derive(master_seed, kSaltTrials, static_cast<uint64_t>(k));
        jobs[static_cast<size_t>(k)].gauge = std::move(gauge);
    }
    return run_scheme(original, device, std::move(jobs), Scheme::srt, /*apply_sqc=*/false,
                      options, trace);
}

}  // namespace equal
