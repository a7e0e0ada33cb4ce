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

#include "equal/ising.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace equal {

namespace {

void check_length(int z_len, int n, const char* op) {
    if (z_len != n) {
        throw std::invalid_argument(std::string(op) + ": spin configuration has length " +
                                    std::to_string(z_len) + " but model has n=" +
                                    std::to_string(n));
    }
}

}  // namespace

SpinConfig flipped(SpinConfig z, int i) {
    if (i < 0 || i >= z.size()) {
        throw std::out_of_range("flipped: index " + std::to_string(i) + " out of range");
    }
    z[i] = static_cast<int8_t>(-z[i]);
    return z;
}

void IsingModel::validate() const {
    if (n < 1) throw std::invalid_argument("IsingModel: n must be positive");
    for (const auto& [i, v] : h) {
        (void)v;
        if (i < 0 || i >= n) {
            throw std::invalid_argument("IsingModel: linear index " + std::to_string(i) +
                                        " out of range [0, " + std::to_string(n) + ")");
        }
    }
    for (const auto& [ij, v] : j) {
        (void)v;
        const auto [a, b] = ij;
        if (a < 0 || b < 0 || a >= n || b >= n) {
            throw std::invalid_argument("IsingModel: coupler (" + std::to_string(a) + ", " +
                                        std::to_string(b) + ") out of range");
        }
        if (a >= b) {
            throw std::invalid_argument("IsingModel: coupler keys must satisfy i < j, got (" +
                                        std::to_string(a) + ", " + std::to_string(b) + ")");
        }
    }
}

double energy(const IsingModel& model, const SpinConfig& z) {
    check_length(z.size(), model.n, "energy");
    double e = model.offset;
    for (const auto& [i, v] : model.h) e += v * z[i];
    for (const auto& [ij, v] : model.j) e += v * z[ij.first] * z[ij.second];
    return e;
}

std::vector<double> local_fields(const IsingModel& model, const SpinConfig& z) {
    check_length(z.size(), model.n, "local_fields");
    std::vector<double> f(static_cast<size_t>(model.n), 0.0);
    for (const auto& [i, v] : model.h) f[static_cast<size_t>(i)] += v;
    for (const auto& [ij, v] : model.j) {
        f[static_cast<size_t>(ij.first)] += v * z[ij.second];
        f[static_cast<size_t>(ij.second)] += v * z[ij.first];
    }
    return f;
}

double flip_delta(const IsingModel& model, const SpinConfig& z,
                  std::span<const double> fields, int i) {
    check_length(z.size(), model.n, "flip_delta");
    if (i < 0 || i >= model.n) {
        throw std::out_of_range("flip_delta: index " + std::to_string(i) + " out of range [0, " +
                                std::to_string(model.n) + ")");
    }
    if (static_cast<int>(fields.size()) != model.n) {
        throw std::invalid_argument("flip_delta: field vector has wrong length");
    }
    return -2.0 * z[i] * fields[static_cast<size_t>(i)];
}

IsingModel scale(const IsingModel& model, double s) {
    if (!(s > 0.0) || !std::isfinite(s)) {
        throw std::invalid_argument("scale: factor must be a positive finite real");
    }
    IsingModel out = model;
    for (auto& [i, v] : out.h) v *= s;
    for (auto& [ij, v] : out.j) v *= s;
    out.offset *= s;
    return out;
}

IsingModel add(const IsingModel& a, const IsingModel& b) {
    if (a.n != b.n) throw std::invalid_argument("add: models have different qubit counts");
    IsingModel out = a;
    for (const auto& [i, v] : b.h) out.h[i] += v;
    for (const auto& [ij, v] : b.j) out.j[ij] += v;
    out.offset += b.offset;
    return out;
}

CompiledModel compile(const IsingModel& model) {
    model.validate();
    CompiledModel cm;
    cm.n = model.n;
    cm.offset = model.offset;
    cm.h.assign(static_cast<size_t>(model.n), 0.0);
    for (const auto& [i, v] : model.h) cm.h[static_cast<size_t>(i)] = v;

    std::vector<int> degree(static_cast<size_t>(model.n), 0);
    for (const auto& [ij, v] : model.j) {
        (void)v;
        ++degree[static_cast<size_t>(ij.first)];
        ++degree[static_cast<size_t>(ij.second)];
    }
    cm.nbr_offset.assign(static_cast<size_t>(model.n) + 1, 0);
    for (int i = 0; i < model.n; ++i) {
        cm.nbr_offset[static_cast<size_t>(i) + 1] =
            cm.nbr_offset[static_cast<size_t>(i)] + degree[static_cast<size_t>(i)];
    }
    cm.nbr_index.resize(static_cast<size_t>(cm.nbr_offset.back()));
    cm.nbr_weight.resize(static_cast<size_t>(cm.nbr_offset.back()));
    std::vector<int> cursor(cm.nbr_offset.begin(), cm.nbr_offset.end() - 1);
    cm.edges.reserve(model.j.size());
    for (const auto& [ij, v] : model.j) {
        const auto [a, b] = ij;
        cm.nbr_index[static_cast<size_t>(cursor[static_cast<size_t>(a)])] = b;
        cm.nbr_weight[static_cast<size_t>(cursor[static_cast<size_t>(a)]++)] = v;
        cm.nbr_index[static_cast<size_t>(cursor[static_cast<size_t>(b)])] = a;
        cm.nbr_weight[static_cast<size_t>(cursor[static_cast<size_t>(b)]++)] = v;
        cm.edges.emplace_back(ij, v);
    }
    return cm;
}

double energy(const CompiledModel& model, const SpinConfig& z) {
    check_length(z.size(), model.n, "energy");
    double e = model.offset;
    for (int i = 0; i < model.n; ++i) e += model.h[static_cast<size_t>(i)] * z[i];
    for (const auto& [ij, v] : model.edges) e += v * z[ij.first] * z[ij.second];
    return e;
}

void compute_fields(const CompiledModel& model, const SpinConfig& z, std::vector<double>& out) {
    check_length(z.size(), model.n, "compute_fields");
    out.assign(model.h.begin(), model.h.end());
    for (const auto& [ij, v] : model.edges) {
        out[static_cast<size_t>(ij.first)] += v * z[ij.second];
        out[static_cast<size_t>(ij.second)] += v * z[ij.first];
    }
}

long SampleSet::total_trials() const {
    long total = 0;
    for (const auto& e : entries) total += e.multiplicity;
    return total;
}

const SampleSet::Entry& SampleSet::best() const {
    if (entries.empty()) throw std::runtime_error("SampleSet::best: empty sample set");
    const Entry* b = &entries.front();
    for (const auto& e : entries) {
        if (e.energy < b->energy) b = &e;
    }
    return *b;
}

SampleSetBuilder::SampleSetBuilder(uint64_t model_id) { set_.model_id = model_id; }

void SampleSetBuilder::add(const SpinConfig& z, double energy) {
    auto [it, inserted] = index_.try_emplace(z.spins, set_.entries.size());
    if (inserted) {
        set_.entries.push_back({z, energy, 1});
    } else {
        ++set_.entries[it->second].multiplicity;
    }
}

SampleSet SampleSetBuilder::take() {
    index_.clear();
    return std::move(set_);
}

SampleSet merge(const SampleSet& a, const SampleSet& b) {
    if (a.model_id != b.model_id) {
        throw std::invalid_argument("merge: sample sets come from different QMIs");
    }
    SampleSetBuilder builder(a.model_id);
    for (const auto* set : {&a, &b}) {
        for (const auto& e : set->entries) {
            for (long k = 0; k < e.multiplicity; ++k) builder.add(e.config, e.energy);
        }
    }
    return builder.take();
}

// ---------------------------------------------------------------------------
// JSON I/O

namespace {

using json = nlohmann::ordered_json;

json model_to_json_value(const IsingModel& model) {
    json out;
    out["n"] = model.n;
    json h = json::array();
    for (const auto& [i, v] : model.h) h.push_back(json::array({i, v}));
    json j = json::array();
    for (const auto& [ij, v] : model.j) j.push_back(json::array({ij.first, ij.second, v}));
    out["h"] = std::move(h);
    out["j"] = std::move(j);
    out["offset"] = model.offset;
    return out;
}

IsingModel model_from_json_value(const json& v) {
    if (!v.is_object()) throw std::invalid_argument("model: expected a JSON object");
    IsingModel model;
    if (!v.contains("n") || !v["n"].is_number_integer()) {
        throw std::invalid_argument("model: missing integer field \"n\"");
    }
    model.n = v["n"].get<int>();
    if (v.contains("offset")) model.offset = v["offset"].get<double>();
    if (v.contains("h")) {
        for (const auto& entry : v["h"]) {
            if (!entry.is_array() || entry.size() != 2) {
                throw std::invalid_argument("model: \"h\" entries must be [index, value]");
            }
            int i = entry[0].get<int>();
            double val = entry[1].get<double>();
            if (!model.h.emplace(i, val).second) {
                throw std::invalid_argument("model: duplicate linear index " + std::to_string(i));
            }
        }
    }
    if (v.contains("j")) {
        for (const auto& entry : v["j"]) {
            if (!entry.is_array() || entry.size() != 3) {
                throw std::invalid_argument("model: \"j\" entries must be [i, j, value]");
            }
            int a = entry[0].get<int>();
            int b = entry[1].get<int>();
            double val = entry[2].get<double>();
            if (!model.j.emplace(std::make_pair(a, b), val).second) {
                throw std::invalid_argument("model: duplicate coupler (" + std::to_string(a) +
                                            ", " + std::to_string(b) + ")");
            }
        }
    }
    model.validate();
    return model;
}

}  // namespace

IsingModel model_from_json(const std::string& text) {
    json v;
    try {
        v = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("model: invalid JSON: ") + e.what());
    }
    return model_from_json_value(v);
}

std::string model_to_json(const IsingModel& model) {
    return model_to_json_value(model).dump(2) + "\n";
}

IsingModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_model: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return model_from_json(buf.str());
}

void save_model(const IsingModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_model: cannot open " + path);
    out << model_to_json(model);
    if (!out) throw std::runtime_error("save_model: write failed for " + path);
}

std::string sample_set_to_json(const SampleSet& set) {
    json out;
    out["model_id"] = set.model_id;
    json entries = json::array();
    for (const auto& e : set.entries) {
        json spins = json::array();
        for (int8_t s : e.config.spins) spins.push_back(static_cast<int>(s));
        entries.push_back(json::array({std::move(spins), e.energy, e.multiplicity}));
    }
    out["entries"] = std::move(entries);
    return out.dump() + "\n";
}

}  // namespace equal
