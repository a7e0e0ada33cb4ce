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

#include "equal/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace equal {

namespace {

using json = nlohmann::ordered_json;

constexpr uint64_t kSaltGround = 0x67726e64ull;

std::string join_violations(const std::vector<std::string>& violations) {
    std::string out = "invalid configuration:";
    for (const auto& v : violations) {
        out += "\n  - ";
        out += v;
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << text;
    if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> violations)
    : std::runtime_error(join_violations(violations)), violations_(std::move(violations)) {}

// ---------------------------------------------------------------------------
// Config parsing

namespace {

const std::set<std::string> kTopLevelKeys = {
    "benchmark",   "device",      "scheme",          "m",
    "k_gauges",    "total_trials", "checkpoints",    "master_seed",
    "ground_truth", "output_dir",  "threads",        "perturbation_bits",
    "perturbation_sign"};

BenchmarkSpec parse_benchmark(const json& v, std::vector<std::string>& violations) {
    BenchmarkSpec spec;
    if (!v.is_object()) {
        violations.push_back("benchmark: expected an object");
        return spec;
    }
    const std::string kind = v.value("kind", std::string());
    if (kind == "chimera") {
        spec.kind = BenchmarkSpec::Kind::chimera;
        if (!v.contains("m") || !v["m"].is_number_integer()) {
            violations.push_back("benchmark.m: required integer for chimera benchmarks");
        } else {
            spec.m = v["m"].get<int>();
        }
    } else if (kind == "sk") {
        spec.kind = BenchmarkSpec::Kind::sk;
        if (!v.contains("n") || !v["n"].is_number_integer()) {
            violations.push_back("benchmark.n: required integer for sk benchmarks");
        } else {
            spec.n = v["n"].get<int>();
        }
    } else if (kind == "file") {
        spec.kind = BenchmarkSpec::Kind::file;
        if (!v.contains("path") || !v["path"].is_string()) {
            violations.push_back("benchmark.path: required string for file benchmarks");
        } else {
            spec.path = v["path"].get<std::string>();
        }
    } else {
        violations.push_back("benchmark.kind: must be one of \"chimera\", \"sk\", \"file\"");
    }
    if (v.contains("seed")) spec.seed = v["seed"].get<uint64_t>();
    if (v.contains("couplers_only")) spec.couplers_only = v["couplers_only"].get<bool>();
    if (v.contains("mask")) {
        for (const auto& e : v["mask"]) spec.mask.push_back(e.get<int>());
    }
    return spec;
}

GroundTruthSpec parse_ground_truth(const json& v, std::vector<std::string>& violations) {
    GroundTruthSpec spec;
    if (!v.is_object()) {
        violations.push_back("ground_truth: expected an object");
        return spec;
    }
    const std::string kind = v.value("kind", std::string());
    if (kind == "exact") {
        spec.kind = GroundTruthSpec::Kind::exact;
    } else if (kind == "estimate") {
        spec.kind = GroundTruthSpec::Kind::estimate;
        if (v.contains("restarts")) spec.effort.restarts = v["restarts"].get<int>();
        if (v.contains("sweeps")) spec.effort.sweeps = v["sweeps"].get<int>();
    } else {
        violations.push_back("ground_truth.kind: must be \"exact\" or \"estimate\"");
    }
    return spec;
}

}  // namespace

ExperimentConfig config_from_json(const std::string& text) {
    json v;
    try {
        v = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError({std::string("invalid JSON: ") + e.what()});
    }
    if (!v.is_object()) throw ConfigError({"config: expected a JSON object"});

    std::vector<std::string> violations;
    for (const auto& [key, value] : v.items()) {
        (void)value;
        if (!kTopLevelKeys.contains(key)) violations.push_back("unknown field \"" + key + "\"");
    }

    ExperimentConfig config;
    if (v.contains("benchmark")) {
        config.benchmark = parse_benchmark(v["benchmark"], violations);
    } else {
        violations.push_back("benchmark: required");
    }
    if (v.contains("device")) {
        try {
            config.device = device_from_json(v["device"].dump());
        } catch (const std::exception& e) {
            violations.push_back(std::string("device: ") + e.what());
        }
    }
    if (v.contains("scheme")) {
        config.scheme_name = v["scheme"].get<std::string>();
        try {
            config.scheme = scheme_from_string(config.scheme_name);
        } catch (const std::exception& e) {
            violations.push_back(std::string("scheme: ") + e.what());
        }
    } else {
        violations.push_back("scheme: required");
    }
    if (v.contains("m")) config.m = v["m"].get<int>();
    if (v.contains("k_gauges")) config.k_gauges = v["k_gauges"].get<int>();
    if (v.contains("total_trials")) {
        config.total_trials = v["total_trials"].get<long>();
    } else {
        violations.push_back("total_trials: required");
    }
    if (v.contains("checkpoints")) {
        for (const auto& e : v["checkpoints"]) config.checkpoints.push_back(e.get<long>());
    }
    if (v.contains("master_seed")) config.master_seed = v["master_seed"].get<uint64_t>();
    if (v.contains("ground_truth")) {
        config.ground_truth = parse_ground_truth(v["ground_truth"], violations);
    }
    if (v.contains("output_dir")) config.output_dir = v["output_dir"].get<std::string>();
    if (v.contains("threads")) config.threads = v["threads"].get<int>();
    if (v.contains("perturbation_bits")) {
        config.perturbation_bits = v["perturbation_bits"].get<int>();
    }
    if (v.contains("perturbation_sign")) {
        const std::string sign = v["perturbation_sign"].get<std::string>();
        if (sign == "positive") {
            config.perturbation_sign = PerturbationSign::positive;
        } else if (sign == "random") {
            config.perturbation_sign = PerturbationSign::random_per_coefficient;
        } else {
            violations.push_back("perturbation_sign: must be \"positive\" or \"random\"");
        }
    }

    auto more = validate_config(config);
    violations.insert(violations.end(), more.begin(), more.end());
    if (!violations.empty()) throw ConfigError(std::move(violations));
    return config;
}

ExperimentConfig load_config(const std::string& path) {
    return config_from_json(read_file(path));
}

std::vector<std::string> validate_config(const ExperimentConfig& config) {
    std::vector<std::string> violations;

    switch (config.benchmark.kind) {
        case BenchmarkSpec::Kind::chimera:
            if (config.benchmark.m < 1) violations.push_back("benchmark.m: must be >= 1");
            break;
        case BenchmarkSpec::Kind::sk:
            if (config.benchmark.n < 2) violations.push_back("benchmark.n: must be >= 2");
            if (!config.benchmark.mask.empty()) {
                violations.push_back("benchmark.mask: only supported for chimera benchmarks");
            }
            break;
        case BenchmarkSpec::Kind::file:
            if (config.benchmark.path.empty()) {
                violations.push_back("benchmark.path: must be non-empty");
            }
            if (!config.benchmark.mask.empty()) {
                violations.push_back("benchmark.mask: only supported for chimera benchmarks");
            }
            break;
    }

    try {
        config.device.validate();
    } catch (const std::exception& e) {
        violations.push_back(std::string("device: ") + e.what());
    }

    if (config.scheme == Scheme::equal || config.scheme == Scheme::equal_plus) {
        if (!config.m) {
            violations.push_back("m: required for equal/equal_plus schemes");
        } else if (*config.m < 1) {
            violations.push_back("m: must be >= 1");
        }
    }
    if (config.scheme == Scheme::srt) {
        if (!config.k_gauges) {
            violations.push_back("k_gauges: required for the srt scheme");
        } else if (*config.k_gauges < 1) {
            violations.push_back("k_gauges: must be >= 1");
        }
    }
    if (config.total_trials < 1) violations.push_back("total_trials: must be >= 1");
    if (!config.checkpoints.empty()) {
        long prev = 0;
        bool ascending = true;
        for (long c : config.checkpoints) {
            if (c <= prev) ascending = false;
            prev = c;
        }
        if (!ascending) {
            violations.push_back("checkpoints: must be positive and strictly ascending");
        } else if (config.checkpoints.back() != config.total_trials) {
            violations.push_back("checkpoints: last entry must equal total_trials");
        }
    }
    if (config.ground_truth.kind == GroundTruthSpec::Kind::estimate &&
        config.ground_truth.effort.restarts < 1) {
        violations.push_back("ground_truth.restarts: must be >= 1");
    }
    if (config.threads < 1) violations.push_back("threads: must be >= 1");
    if (config.perturbation_bits && (*config.perturbation_bits < 1 || *config.perturbation_bits > 53)) {
        violations.push_back("perturbation_bits: must be in [1, 53]");
    }
    return violations;
}

namespace {

json benchmark_echo(const BenchmarkSpec& spec) {
    json out;
    switch (spec.kind) {
        case BenchmarkSpec::Kind::chimera:
            out["kind"] = "chimera";
            out["m"] = spec.m;
            break;
        case BenchmarkSpec::Kind::sk:
            out["kind"] = "sk";
            out["n"] = spec.n;
            break;
        case BenchmarkSpec::Kind::file:
            out["kind"] = "file";
            out["path"] = spec.path;
            break;
    }
    out["seed"] = spec.seed;
    out["couplers_only"] = spec.couplers_only;
    out["mask"] = spec.mask;
    return out;
}

json config_echo_value(const ExperimentConfig& config) {
    json out;
    out["benchmark"] = benchmark_echo(config.benchmark);
    out["device"] = json::parse(device_to_json(config.device));
    out["scheme"] = config.scheme_name;
    if (config.m) out["m"] = *config.m;
    if (config.k_gauges) out["k_gauges"] = *config.k_gauges;
    out["total_trials"] = config.total_trials;
    if (!config.checkpoints.empty()) out["checkpoints"] = config.checkpoints;
    out["master_seed"] = config.master_seed;
    json ground;
    if (config.ground_truth.kind == GroundTruthSpec::Kind::exact) {
        ground["kind"] = "exact";
    } else {
        ground["kind"] = "estimate";
        ground["restarts"] = config.ground_truth.effort.restarts;
        ground["sweeps"] = config.ground_truth.effort.sweeps;
    }
    out["ground_truth"] = std::move(ground);
    if (config.perturbation_bits) out["perturbation_bits"] = *config.perturbation_bits;
    out["perturbation_sign"] =
        config.perturbation_sign == PerturbationSign::positive ? "positive" : "random";
    return out;
}

}  // namespace

std::string config_echo_json(const ExperimentConfig& config) {
    return config_echo_value(config).dump(2) + "\n";
}

bool apply_env_seed(ExperimentConfig& config) {
    const char* env = std::getenv("EQUAL_SEED");
    if (env == nullptr || *env == '\0') return false;
    char* end = nullptr;
    const unsigned long long value = std::strtoull(env, &end, 10);
    if (end == nullptr || *end != '\0') {
        throw ConfigError({"EQUAL_SEED: must be a non-negative integer, got \"" +
                           std::string(env) + "\""});
    }
    config.master_seed = static_cast<uint64_t>(value);
    return true;
}

IsingModel materialize_benchmark(const BenchmarkSpec& spec) {
    switch (spec.kind) {
        case BenchmarkSpec::Kind::chimera: {
            ChimeraInstanceOptions options;
            options.couplers_only = spec.couplers_only;
            options.masked_nodes = spec.mask;
            return random_chimera_instance(ChimeraSpec{spec.m}, spec.seed, options);
        }
        case BenchmarkSpec::Kind::sk:
            return cast_maxcut(sk_maxcut_graph(spec.n, spec.seed));
        case BenchmarkSpec::Kind::file:
            return load_model(spec.path);
    }
    throw std::logic_error("materialize_benchmark: unknown benchmark kind");
}

GroundTruth resolve_ground_truth(const IsingModel& model, const GroundTruthSpec& spec,
                                 uint64_t master_seed) {
    if (spec.kind == GroundTruthSpec::Kind::exact) return exact_ground(model);
    return estimate_ground(model, spec.effort, rng::derive(master_seed, kSaltGround));
}

// ---------------------------------------------------------------------------
// run

namespace {

MitigationResult dispatch_scheme(const ExperimentConfig& config, const IsingModel& model,
                                 SchemeTrace* trace) {
    RunOptions options;
    options.threads = config.threads;
    options.perturbation_bits = config.perturbation_bits;
    options.sign = config.perturbation_sign;
    switch (config.scheme) {
        case Scheme::baseline:
            return run_baseline(model, config.device, config.total_trials, config.master_seed,
                                options, trace);
        case Scheme::sqc:
            return run_sqc(model, config.device, config.total_trials, config.master_seed, options,
                           trace);
        case Scheme::equal:
            return run_equal(model, config.device, config.m.value(), config.total_trials,
                             config.master_seed, options, trace);
        case Scheme::equal_plus:
            return run_equal_plus(model, config.device, config.m.value(), config.total_trials,
                                  config.master_seed, options, trace);
        case Scheme::srt:
            return run_srt(model, config.device, config.k_gauges.value(), config.total_trials,
                           config.master_seed, options, trace);
    }
    throw std::logic_error("dispatch_scheme: unknown scheme");
}

struct ParsedResult {
    std::string scheme;
    double er = 0.0;
    json config_echo;
};

ParsedResult parse_result_file(const std::string& path) {
    json v;
    try {
        v = json::parse(read_file(path));
    } catch (const std::exception& e) {
        throw std::runtime_error("result file " + path + ": " + e.what());
    }
    if (!v.is_object() || !v.contains("scheme") || !v.contains("er") || !v.contains("config")) {
        throw std::runtime_error("result file " + path +
                                 ": missing required fields (scheme, er, config)");
    }
    ParsedResult out;
    out.scheme = v["scheme"].get<std::string>();
    out.er = v["er"].get<double>();
    out.config_echo = v["config"];
    return out;
}

std::vector<std::pair<long, double>> curve_from_trace(const SchemeTrace& trace,
                                                      const std::vector<long>& checkpoints,
                                                      const GroundTruth& ground) {
    std::vector<std::pair<long, double>> curve;
    curve.reserve(checkpoints.size());
    double best = std::numeric_limits<double>::infinity();
    long done = 0;
    size_t next = 0;
    for (const auto& energies : trace.member_trial_energies) {
        for (double e : energies) {
            best = std::min(best, e);
            ++done;
            if (next < checkpoints.size() && done == checkpoints[next]) {
                curve.emplace_back(done, std::abs(best - ground.energy));
                ++next;
            }
        }
    }
    return curve;
}

}  // namespace

RunOutput cmd_run(const ExperimentConfig& config,
                  const std::optional<std::string>& baseline_result_path) {
    auto violations = validate_config(config);
    if (!violations.empty()) throw ConfigError(std::move(violations));

    const IsingModel model = materialize_benchmark(config.benchmark);
    const GroundTruth ground =
        resolve_ground_truth(model, config.ground_truth, config.master_seed);

    SchemeTrace trace;
    trace.collect_trial_energies = !config.checkpoints.empty();
    SchemeTrace* trace_ptr = trace.collect_trial_energies ? &trace : nullptr;

    RunOutput out;
    out.result = dispatch_scheme(config, model, trace_ptr);

    out.report.e_min = out.result.best_energy;
    out.report.e_global = ground;
    out.report.er = energy_residual(out.result.best_energy, ground);

    if (baseline_result_path) {
        const ParsedResult baseline = parse_result_file(*baseline_result_path);
        const json own_echo = json::parse(config_echo_json(config));
        std::vector<std::string> mismatches;
        if (baseline.config_echo.value("benchmark", json()) != own_echo["benchmark"]) {
            mismatches.push_back("--baseline: benchmark (instance/seed) differs from this run");
        }
        if (baseline.config_echo.value("device", json()) != own_echo["device"]) {
            mismatches.push_back("--baseline: device differs from this run");
        }
        if (baseline.scheme != "baseline") {
            mismatches.push_back("--baseline: result file holds scheme \"" + baseline.scheme +
                                 "\", expected \"baseline\"");
        }
        if (!mismatches.empty()) throw ConfigError(std::move(mismatches));
        out.report.relative_er = relative_er(out.report.er, baseline.er);
    }

    if (!config.checkpoints.empty()) {
        out.report.curve = curve_from_trace(trace, config.checkpoints, ground);
    }

    json result;
    result["scheme"] = to_string(out.result.scheme);
    result["e_min"] = out.result.best_energy;
    json best_config = json::array();
    for (int8_t s : out.result.best_config.spins) best_config.push_back(static_cast<int>(s));
    result["best_config"] = std::move(best_config);
    result["e_global"] = {{"energy", ground.energy},
                          {"method", to_string(ground.method)},
                          {"certified", ground.certified}};
    result["er"] = out.report.er;
    if (out.report.relative_er) {
        result["relative_er"] = *out.report.relative_er;
    } else {
        result["relative_er"] = nullptr;
    }
    json member_best = json::array();
    for (const auto& [k, e] : out.result.per_member_best) {
        member_best.push_back(json::array({k, e}));
    }
    result["per_member_best"] = std::move(member_best);
    result["trials_used"] = out.result.trials_used;
    result["wall_time"] = out.result.wall_time;
    result["config"] = config_echo_value(config);
    out.result_json = result.dump(2) + "\n";

    namespace fs = std::filesystem;
    fs::create_directories(config.output_dir);
    const std::string stem = to_string(out.result.scheme) + "_seed" +
                             std::to_string(config.benchmark.seed);
    out.result_path = (fs::path(config.output_dir) / ("result_" + stem + ".json")).string();
    write_file(out.result_path, out.result_json);

    if (out.report.curve) {
        out.curve_csv = curve_to_csv(*out.report.curve);
        out.curve_path = (fs::path(config.output_dir) / ("curve_" + stem + ".csv")).string();
        write_file(*out.curve_path, *out.curve_csv);
    }
    return out;
}

// ---------------------------------------------------------------------------
// gen

GenOutput cmd_gen(const BenchmarkSpec& spec, const std::string& out_path,
                  const std::optional<std::string>& graph_out_path) {
    const IsingModel model = materialize_benchmark(spec);
    save_model(model, out_path);

    if (graph_out_path) {
        if (spec.kind != BenchmarkSpec::Kind::sk) {
            throw ConfigError({"--graph-out: only sk benchmarks carry a source graph"});
        }
        save_graph(sk_maxcut_graph(spec.n, spec.seed), *graph_out_path);
    }

    double sum = 0.0, sum_sq = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    long count = 0;
    auto absorb = [&](double v) {
        sum += v;
        sum_sq += v * v;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        ++count;
    };
    for (const auto& [i, v] : model.h) {
        (void)i;
        absorb(v);
    }
    for (const auto& [ij, v] : model.j) {
        (void)ij;
        absorb(v);
    }
    std::ostringstream stats;
    stats << "n=" << model.n << " linear_terms=" << model.h.size()
          << " couplers=" << model.j.size() << " offset=" << format_double(model.offset);
    if (count > 0) {
        const double mean = sum / count;
        const double var = std::max(0.0, sum_sq / count - mean * mean);
        stats << " coeff_mean=" << format_double(mean)
              << " coeff_std=" << format_double(std::sqrt(var))
              << " coeff_min=" << format_double(lo) << " coeff_max=" << format_double(hi);
    }
    GenOutput out;
    out.model_path = out_path;
    out.stats_text = stats.str();
    return out;
}

// ---------------------------------------------------------------------------
// profile-precision / sweep-ensembles

std::string cmd_profile_precision(const ExperimentConfig& base, const std::vector<int>& bits_list,
                                  long trials, uint64_t seed) {
    if (bits_list.empty()) throw ConfigError({"--bits: at least one precision required"});
    for (int b : bits_list) {
        if (b < 1 || b > 53) throw ConfigError({"--bits: values must be in [1, 53]"});
    }
    if (trials < 1) throw ConfigError({"--trials: must be >= 1"});

    const IsingModel model = materialize_benchmark(base.benchmark);
    const GroundTruth ground = resolve_ground_truth(model, base.ground_truth, seed);
    RunOptions options;
    options.threads = base.threads;

    auto baseline_er_at_bits = [&](int bits) {
        DeviceModel device = base.device;
        device.bits = bits;
        const MitigationResult r = run_baseline(model, device, trials, seed, options);
        return energy_residual(r.best_energy, ground);
    };

    const double reference_er = baseline_er_at_bits(53);
    std::string csv = "bits,relative_er\n";
    for (int b : bits_list) {
        const double er = baseline_er_at_bits(b);
        const auto rel = relative_er(er, reference_er);
        csv += std::to_string(b);
        csv += ',';
        if (rel) csv += format_double(*rel);
        csv += '\n';
    }
    return csv;
}

std::string cmd_sweep_ensembles(const ExperimentConfig& base, const std::vector<int>& m_list,
                                long total_trials) {
    if (m_list.empty()) throw ConfigError({"--m-list: at least one ensemble size required"});
    for (int m : m_list) {
        if (m < 1) throw ConfigError({"--m-list: values must be >= 1"});
    }
    if (total_trials < 1) throw ConfigError({"--total-trials: must be >= 1"});

    const IsingModel model = materialize_benchmark(base.benchmark);
    const GroundTruth ground =
        resolve_ground_truth(model, base.ground_truth, base.master_seed);
    RunOptions options;
    options.threads = base.threads;
    options.perturbation_bits = base.perturbation_bits;
    options.sign = base.perturbation_sign;

    std::string csv = "m,er\n";
    for (int m : m_list) {
        const MitigationResult r =
            m == 1 ? run_baseline(model, base.device, total_trials, base.master_seed, options)
                   : run_equal(model, base.device, m, total_trials, base.master_seed, options);
        csv += std::to_string(m);
        csv += ',';
        csv += format_double(energy_residual(r.best_energy, ground));
        csv += '\n';
    }
    return csv;
}

// ---------------------------------------------------------------------------
// report

ReportOutput cmd_report(const std::vector<std::string>& result_paths) {
    if (result_paths.empty()) throw ConfigError({"report: at least one result file required"});

    // scheme -> instance seed -> er
    std::map<std::string, std::map<uint64_t, double>> by_scheme;
    for (const auto& path : result_paths) {
        const ParsedResult r = parse_result_file(path);
        uint64_t seed = 0;
        if (r.config_echo.is_object() && r.config_echo.contains("benchmark") &&
            r.config_echo["benchmark"].contains("seed")) {
            seed = r.config_echo["benchmark"]["seed"].get<uint64_t>();
        } else {
            throw std::runtime_error("result file " + path + ": missing config.benchmark.seed");
        }
        auto [it, inserted] = by_scheme[r.scheme].emplace(seed, r.er);
        if (!inserted && it->second != r.er) {
            throw ConfigError({"report: conflicting results for scheme \"" + r.scheme +
                               "\", instance seed " + std::to_string(seed)});
        }
    }

    // Every scheme must cover the same instance set.
    std::set<uint64_t> all_seeds;
    for (const auto& [scheme, rows] : by_scheme) {
        (void)scheme;
        for (const auto& [seed, er] : rows) {
            (void)er;
            all_seeds.insert(seed);
        }
    }
    std::vector<std::string> orphans;
    for (const auto& [scheme, rows] : by_scheme) {
        for (uint64_t seed : all_seeds) {
            if (!rows.contains(seed)) {
                orphans.push_back("scheme \"" + scheme + "\" missing instance seed " +
                                  std::to_string(seed));
            }
        }
    }
    if (!orphans.empty()) {
        orphans.insert(orphans.begin(), "report: instance sets do not match across schemes");
        throw ConfigError(std::move(orphans));
    }

    const bool have_baseline = by_scheme.contains("baseline");
    std::vector<std::string> scheme_order;
    if (have_baseline) scheme_order.push_back("baseline");
    for (const auto& [scheme, rows] : by_scheme) {
        (void)rows;
        if (scheme != "baseline") scheme_order.push_back(scheme);
    }

    struct Stats {
        long count = 0;
        double mean = 0.0;
        double min = std::numeric_limits<double>::infinity();
        double max = -std::numeric_limits<double>::infinity();
        void absorb(double v) {
            ++count;
            mean += v;
            min = std::min(min, v);
            max = std::max(max, v);
        }
        void finish() {
            if (count > 0) mean /= count;
        }
    };

    std::string csv =
        "scheme,instances,mean_er,min_er,max_er,mean_relative_er,min_relative_er,max_relative_er\n";
    std::ostringstream pretty;
    pretty << "scheme        instances  mean_er      mean_rel_er\n";
    for (const auto& scheme : scheme_order) {
        const auto& rows = by_scheme[scheme];
        Stats er_stats, rel_stats;
        for (const auto& [seed, er] : rows) {
            er_stats.absorb(er);
            if (have_baseline) {
                const double baseline_er = by_scheme["baseline"].at(seed);
                if (const auto rel = relative_er(er, baseline_er)) rel_stats.absorb(*rel);
            }
        }
        er_stats.finish();
        rel_stats.finish();

        csv += scheme;
        csv += ',' + std::to_string(er_stats.count);
        csv += ',' + format_double(er_stats.mean);
        csv += ',' + format_double(er_stats.min);
        csv += ',' + format_double(er_stats.max);
        if (rel_stats.count > 0) {
            csv += ',' + format_double(rel_stats.mean);
            csv += ',' + format_double(rel_stats.min);
            csv += ',' + format_double(rel_stats.max);
        } else {
            csv += ",,,";
        }
        csv += '\n';

        pretty << scheme;
        for (size_t pad = scheme.size(); pad < 14; ++pad) pretty << ' ';
        std::string count_col = std::to_string(er_stats.count);
        pretty << count_col;
        for (size_t pad = count_col.size(); pad < 11; ++pad) pretty << ' ';
        std::string mean_col = format_double(er_stats.mean);
        pretty << mean_col;
        for (size_t pad = mean_col.size(); pad < 13; ++pad) pretty << ' ';
        pretty << (rel_stats.count > 0 ? format_double(rel_stats.mean) : std::string("-")) << '\n';
    }

    return {csv, pretty.str()};
}

}  // namespace equal
