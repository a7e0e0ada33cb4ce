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
#include <string>
#include <tuple>
#include <vector>

#include "equal/ising.hpp"

namespace equal {

/// Undirected weighted graph; edge keys are (i, j) with i < j, no duplicates
/// or self-loops. Edges are kept sorted.
struct Graph {
    int node_count = 0;
    std::vector<std::tuple<int, int, double>> edges;

    void validate() const;
    bool operator==(const Graph&) const = default;
};

/// Chimera C_m: an m x m grid of K_{4,4} unit cells (two shores of 4).
/// Total qubits 8*m^2, couplers 16*m^2 + 8*m*(m-1).
struct ChimeraSpec {
    int m = 1;
};

/// Builds the C_m connectivity graph. Within a cell, indices 0-3 form the
/// left shore and 4-7 the right shore; intra-cell edges are the complete
/// bipartite L x R set. Like-indexed left-shore qubits are coupled between
/// row-adjacent cells and like-indexed right-shore qubits between
/// column-adjacent cells. All weights are 1.
Graph chimera_graph(const ChimeraSpec& spec);

struct ChimeraInstanceOptions {
    bool couplers_only = false;      // suppress linear terms
    std::vector<int> masked_nodes;   // dead qubits: drop incident coefficients
};

/// Random benchmark instance on the C_m graph: every linear term and every
/// coupler on a Chimera edge drawn i.i.d. standard normal, offset 0.
/// Deterministic per seed; the mask is applied after generation so surviving
/// coefficients match the unmasked instance for the same seed.
IsingModel random_chimera_instance(const ChimeraSpec& spec, uint64_t seed,
                                   const ChimeraInstanceOptions& options = {});

/// Complete graph on n nodes with i.i.d. standard normal edge weights
/// (Sherrington-Kirkpatrick family), used as a Max-Cut benchmark.
Graph sk_maxcut_graph(int n, uint64_t seed);

/// Casts weighted Max-Cut to an Ising model: h = 0, J_ij = w_ij / 2,
/// offset = -sum(w_ij) / 2, so that energy(model, z) == -cut(g, z) exactly.
IsingModel cast_maxcut(const Graph& g);

/// Cut value sum_{(i,j) in E} w_ij * (1 - z_i z_j) / 2.
double cut_value(const Graph& g, const SpinConfig& z);

// Graph file format: JSON {"n": int, "edges": [[i, j, w], ...]}.
Graph graph_from_json(const std::string& text);
std::string graph_to_json(const Graph& g);
Graph load_graph(const std::string& path);
void save_graph(const Graph& g, const std::string& path);

}  // namespace equal
