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

#include "equal/topology.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "equal/rng.hpp"
#include "json.hpp"

namespace equal {

namespace {

constexpr uint64_t kSaltLinear = 0x686c696eull;    // linear-term stream
constexpr uint64_t kSaltCoupler = 0x6a637068ull;   // coupler stream

}  // namespace

void Graph::validate() const {
    if (node_count < 1) throw std::invalid_argument("Graph: node_count must be positive");
    std::set<std::pair<int, int>> seen;
    for (const auto& [a, b, w] : edges) {
        (void)w;
        if (a < 0 || b < 0 || a >= node_count || b >= node_count) {
            throw std::invalid_argument("Graph: edge (" + std::to_string(a) + ", " +
                                        std::to_string(b) + ") out of range");
        }
        if (a >= b) {
            throw std::invalid_argument("Graph: edge keys must satisfy i < j, got (" +
                                        std::to_string(a) + ", " + std::to_string(b) + ")");
        }
        if (!seen.emplace(a, b).second) {
            throw std::invalid_argument("Graph: duplicate edge (" + std::to_string(a) + ", " +
                                        std::to_string(b) + ")");
        }
    }
}

Graph chimera_graph(const ChimeraSpec& spec) {
    if (spec.m < 1) throw std::invalid_argument("chimera_graph: grid dimension m must be >= 1");
    const int m = spec.m;
    Graph g;
    g.node_count = 8 * m * m;
    auto cell_base = [m](int row, int col) { return 8 * (row * m + col); };
    for (int row = 0; row < m; ++row) {
        for (int col = 0; col < m; ++col) {
            const int base = cell_base(row, col);
            for (int l = 0; l < 4; ++l) {
                for (int r = 4; r < 8; ++r) {
                    g.edges.emplace_back(base + l, base + r, 1.0);
                }
            }
            if (row + 1 < m) {
                const int below = cell_base(row + 1, col);
                for (int l = 0; l < 4; ++l) g.edges.emplace_back(base + l, below + l, 1.0);
            }
            if (col + 1 < m) {
                const int right = cell_base(row, col + 1);
                for (int r = 4; r < 8; ++r) g.edges.emplace_back(base + r, right + r, 1.0);
            }
        }
    }
    std::sort(g.edges.begin(), g.edges.end());
    return g;
}

IsingModel random_chimera_instance(const ChimeraSpec& spec, uint64_t seed,
                                   const ChimeraInstanceOptions& options) {
    Graph g = chimera_graph(spec);
    IsingModel model;
    model.n = g.node_count;

    auto h_eng = rng::make_engine(rng::derive(seed, kSaltLinear));
    for (int i = 0; i < g.node_count; ++i) {
        double v = rng::normal(h_eng);
        if (!options.couplers_only) model.h[i] = v;
    }
    auto j_eng = rng::make_engine(rng::derive(seed, kSaltCoupler));
    for (const auto& [a, b, w] : g.edges) {
        (void)w;
        model.j[{a, b}] = rng::normal(j_eng);
    }

    for (int dead : options.masked_nodes) {
        if (dead < 0 || dead >= model.n) {
            throw std::invalid_argument("random_chimera_instance: masked node " +
                                        std::to_string(dead) + " out of range");
        }
        model.h.erase(dead);
        for (auto it = model.j.begin(); it != model.j.end();) {
            if (it->first.first == dead || it->first.second == dead) {
                it = model.j.erase(it);
            } else {
                ++it;
            }
        }
    }
    return model;
}

Graph sk_maxcut_graph(int n, uint64_t seed) {
    if (n < 2) throw std::invalid_argument("sk_maxcut_graph: need at least 2 nodes");
    Graph g;
    g.node_count = n;
    auto eng = rng::make_engine(rng::derive(seed, kSaltCoupler));
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            g.edges.emplace_back(i, j, rng::normal(eng));
        }
    }
    return g;
}

IsingModel cast_maxcut(const Graph& g) {
    g.validate();
    IsingModel model;
    model.n = g.node_count;
    double total_weight = 0.0;
    for (const auto& [a, b, w] : g.edges) {
        model.j[{a, b}] = w / 2.0;
        total_weight += w;
    }
    model.offset = -total_weight / 2.0;
    return model;
}

double cut_value(const Graph& g, const SpinConfig& z) {
    if (z.size() != g.node_count) {
        throw std::invalid_argument("cut_value: spin configuration has length " +
                                    std::to_string(z.size()) + " but graph has " +
                                    std::to_string(g.node_count) + " nodes");
    }
    double cut = 0.0;
    for (const auto& [a, b, w] : g.edges) {
        cut += w * (1.0 - z[a] * z[b]) / 2.0;
    }
    return cut;
}

namespace {

using json = nlohmann::ordered_json;

}  // namespace

Graph graph_from_json(const std::string& text) {
    json v;
    try {
        v = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("graph: invalid JSON: ") + e.what());
    }
    if (!v.is_object() || !v.contains("n") || !v["n"].is_number_integer()) {
        throw std::invalid_argument("graph: expected object with integer field \"n\"");
    }
    Graph g;
    g.node_count = v["n"].get<int>();
    if (v.contains("edges")) {
        for (const auto& e : v["edges"]) {
            if (!e.is_array() || e.size() != 3) {
                throw std::invalid_argument("graph: \"edges\" entries must be [i, j, w]");
            }
            g.edges.emplace_back(e[0].get<int>(), e[1].get<int>(), e[2].get<double>());
        }
    }
    g.validate();
    return g;
}

std::string graph_to_json(const Graph& g) {
    json out;
    out["n"] = g.node_count;
    json edges = json::array();
    for (const auto& [a, b, w] : g.edges) edges.push_back(json::array({a, b, w}));
    out["edges"] = std::move(edges);
    return out.dump(2) + "\n";
}

Graph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_graph: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return graph_from_json(buf.str());
}

void save_graph(const Graph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_graph: cannot open " + path);
    out << graph_to_json(g);
    if (!out) throw std::runtime_error("save_graph: write failed for " + path);
}

}  // namespace equal
