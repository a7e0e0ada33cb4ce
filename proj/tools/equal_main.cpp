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

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "equal/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

std::vector<int> parse_int_list(const std::string& text, const std::string& flag) {
    std::vector<int> out;
    std::string token;
    std::istringstream in(text);
    while (std::getline(in, token, ',')) {
        try {
            out.push_back(std::stoi(token));
        } catch (const std::exception&) {
            throw equal::ConfigError({flag + ": cannot parse \"" + token + "\" as an integer"});
        }
    }
    return out;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << text;
}

struct RunFlags {
    std::string config_path;
    std::optional<std::string> baseline;
    std::optional<std::string> scheme;
    std::optional<long> total_trials;
    std::optional<uint64_t> master_seed;
    std::optional<int> m;
    std::optional<int> k_gauges;
    std::optional<int> threads;
    std::optional<std::string> output_dir;
};

equal::ExperimentConfig resolve_run_config(const RunFlags& flags) {
    equal::ExperimentConfig config = equal::load_config(flags.config_path);
    if (flags.scheme) {
        config.scheme_name = *flags.scheme;
        config.scheme = equal::scheme_from_string(*flags.scheme);
    }
    if (flags.total_trials) config.total_trials = *flags.total_trials;
    if (flags.master_seed) config.master_seed = *flags.master_seed;
    if (flags.m) config.m = *flags.m;
    if (flags.k_gauges) config.k_gauges = *flags.k_gauges;
    if (flags.threads) config.threads = *flags.threads;
    if (flags.output_dir) config.output_dir = *flags.output_dir;
    equal::apply_env_seed(config);
    auto violations = equal::validate_config(config);
    if (!violations.empty()) throw equal::ConfigError(std::move(violations));
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"equal - annealer emulation and ensemble error mitigation"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a benchmark instance (model file)");
    std::string gen_family;
    gen->add_option("family", gen_family, "chimera | sk")->required();
    int gen_m = 2;
    int gen_n = 0;
    uint64_t gen_seed = 0;
    std::string gen_out;
    std::string gen_graph_out;
    std::string gen_mask;
    bool gen_couplers_only = false;
    gen->add_option("--m", gen_m, "chimera grid dimension");
    gen->add_option("--n", gen_n, "sk node count");
    gen->add_option("--seed", gen_seed, "instance seed");
    gen->add_option("--out", gen_out, "model file to write")->required();
    gen->add_option("--graph-out", gen_graph_out, "also write the source graph (sk only)");
    gen->add_option("--mask", gen_mask, "comma-separated dead qubits (chimera only)");
    gen->add_flag("--couplers-only", gen_couplers_only, "suppress linear terms (chimera only)");

    // run
    auto* run = app.add_subcommand("run", "execute a configured scheme end to end");
    RunFlags run_flags;
    run->add_option("--config", run_flags.config_path, "experiment config JSON")->required();
    std::string run_baseline, run_scheme, run_output_dir;
    long run_trials = -1;
    long long run_seed = -1;
    int run_m = -1, run_k = -1, run_threads = -1;
    run->add_option("--baseline", run_baseline, "baseline result JSON for relative ER");
    run->add_option("--scheme", run_scheme, "override config scheme");
    run->add_option("--total-trials", run_trials, "override total trials");
    run->add_option("--master-seed", run_seed, "override master seed");
    run->add_option("--m", run_m, "override ensemble size");
    run->add_option("--k-gauges", run_k, "override gauge count");
    run->add_option("--threads", run_threads, "override worker threads");
    run->add_option("--output-dir", run_output_dir, "override output directory");

    // profile-precision
    auto* profile = app.add_subcommand("profile-precision",
                                       "ER of truncated QMIs relative to an untruncated run");
    std::string profile_config, profile_bits = "2,3,4,5,6,7,8,9,10,11,12,13,14,15,16";
    std::string profile_out;
    long profile_trials = 2000;
    long long profile_seed = -1;
    profile->add_option("--config", profile_config, "experiment config JSON")->required();
    profile->add_option("--bits", profile_bits, "comma-separated precision list");
    profile->add_option("--trials", profile_trials, "trials per precision");
    profile->add_option("--seed", profile_seed, "master seed (default: config master_seed)");
    profile->add_option("--out", profile_out, "CSV path (default: stdout)");

    // sweep-ensembles
    auto* sweep = app.add_subcommand("sweep-ensembles", "EQUAL ER at fixed budget across m");
    std::string sweep_config, sweep_m_list = "1,2,10,50";
    std::string sweep_out;
    long sweep_trials = -1;
    sweep->add_option("--config", sweep_config, "experiment config JSON")->required();
    sweep->add_option("--m-list", sweep_m_list, "comma-separated ensemble sizes");
    sweep->add_option("--total-trials", sweep_trials, "budget (default: config total_trials)");
    sweep->add_option("--out", sweep_out, "CSV path (default: stdout)");

    // report
    auto* report = app.add_subcommand("report", "join result files and summarize per scheme");
    std::vector<std::string> report_files;
    std::string report_out = "report.csv";
    report->add_option("files", report_files, "result JSON files")->required();
    report->add_option("--out", report_out, "summary CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*gen) {
            equal::BenchmarkSpec spec;
            if (gen_family == "chimera") {
                spec.kind = equal::BenchmarkSpec::Kind::chimera;
                spec.m = gen_m;
                if (!gen_mask.empty()) spec.mask = parse_int_list(gen_mask, "--mask");
                spec.couplers_only = gen_couplers_only;
            } else if (gen_family == "sk") {
                spec.kind = equal::BenchmarkSpec::Kind::sk;
                spec.n = gen_n;
                if (!gen_mask.empty() || gen_couplers_only) {
                    throw equal::ConfigError(
                        {"--mask/--couplers-only: only supported for chimera"});
                }
            } else {
                throw equal::ConfigError({"family: must be \"chimera\" or \"sk\""});
            }
            spec.seed = gen_seed;
            std::optional<std::string> graph_out;
            if (!gen_graph_out.empty()) graph_out = gen_graph_out;
            const auto out = equal::cmd_gen(spec, gen_out, graph_out);
            std::cout << out.stats_text << "\n" << "wrote " << out.model_path << "\n";
        } else if (*run) {
            if (run->count("--baseline")) run_flags.baseline = run_baseline;
            if (run->count("--scheme")) run_flags.scheme = run_scheme;
            if (run->count("--total-trials")) run_flags.total_trials = run_trials;
            if (run->count("--master-seed")) {
                run_flags.master_seed = static_cast<uint64_t>(run_seed);
            }
            if (run->count("--m")) run_flags.m = run_m;
            if (run->count("--k-gauges")) run_flags.k_gauges = run_k;
            if (run->count("--threads")) run_flags.threads = run_threads;
            if (run->count("--output-dir")) run_flags.output_dir = run_output_dir;

            const auto config = resolve_run_config(run_flags);
            const auto out = equal::cmd_run(config, run_flags.baseline);
            std::cout << "scheme=" << equal::to_string(out.result.scheme)
                      << " e_min=" << equal::format_double(out.report.e_min)
                      << " e_global=" << equal::format_double(out.report.e_global.energy)
                      << " er=" << equal::format_double(out.report.er);
            if (out.report.relative_er) {
                std::cout << " relative_er=" << equal::format_double(*out.report.relative_er);
            }
            std::cout << " wall_time=" << equal::format_double(out.result.wall_time) << "\n"
                      << "wrote " << out.result_path << "\n";
            if (out.curve_path) std::cout << "wrote " << *out.curve_path << "\n";
        } else if (*profile) {
            auto config = equal::load_config(profile_config);
            equal::apply_env_seed(config);
            const uint64_t seed =
                profile_seed >= 0 ? static_cast<uint64_t>(profile_seed) : config.master_seed;
            const auto csv = equal::cmd_profile_precision(
                config, parse_int_list(profile_bits, "--bits"), profile_trials, seed);
            if (profile_out.empty()) {
                std::cout << csv;
            } else {
                write_text(profile_out, csv);
                std::cout << "wrote " << profile_out << "\n";
            }
        } else if (*sweep) {
            auto config = equal::load_config(sweep_config);
            equal::apply_env_seed(config);
            const long budget = sweep_trials > 0 ? sweep_trials : config.total_trials;
            const auto csv = equal::cmd_sweep_ensembles(
                config, parse_int_list(sweep_m_list, "--m-list"), budget);
            if (sweep_out.empty()) {
                std::cout << csv;
            } else {
                write_text(sweep_out, csv);
                std::cout << "wrote " << sweep_out << "\n";
            }
        } else if (*report) {
            const auto out = equal::cmd_report(report_files);
            std::cout << out.pretty;
            write_text(report_out, out.csv);
            std::cout << "wrote " << report_out << "\n";
        }
    } catch (const equal::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}
