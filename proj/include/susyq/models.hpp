#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "susyq/susycore.hpp"

namespace susyq {

// ---------------------------------------------------------------------------
// Simple undirected graph, 1-based vertices, edges stored as (u, v) with
// u < v, sorted and duplicate-free.
// ---------------------------------------------------------------------------
struct Graph {
    int n_vertices = 0;
    std::vector<std::pair<int, int>> edges;

    static Graph from_edges(int n_vertices, std::vector<std::pair<int, int>> edges);

    // adjacency_masks()[i-1] has bit j-1 set iff {i, j} is an edge.
    std::vector<std::uint32_t> adjacency_masks() const;
    std::size_t n_edges() const { return edges.size(); }
};

class GraphParseError : public std::invalid_argument {
public:
    GraphParseError(int line, const std::string& msg)
        : std::invalid_argument("line " + std::to_string(line) + ": " + msg), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// Edge-list format: first nonblank line = vertex count, then "u v" per line
// (1-based); '#' starts a comment.
Graph load_graph(const std::string& text);
Graph load_graph_file(const std::string& path);
std::string graph_to_text(const Graph& g);

// ---------------------------------------------------------------------------
// Fermion hard-core model on a graph: Q = sum_i a_i† P_i with
// P_i = prod_{j ~ i} (1 - n_j); the Hilbert space is spanned by the
// independent sets of the graph.
// ---------------------------------------------------------------------------
SusyModel hardcore_model(const Graph& g, int max_vertices = 20);

// The neighbor-vacancy projector P_i for one vertex.
SparseOperator hardcore_vertex_projector(const Graph& g, int vertex);

// All independent sets as basis states, ascending index order.
std::vector<BasisState> independent_sets(const Graph& g, int enumeration_guard = 24);

// sum over independent sets of (-1)^|s|, empty set included with +1; equals
// the hard-core model's Witten index.
long long independence_euler_characteristic(const Graph& g, int enumeration_guard = 24);

// ---------------------------------------------------------------------------
// Supersymmetric SYK: Q = i sum_{i1<...<iq} C_{i1...iq} a†_{i1}...a†_{iq},
// P = I. q must be odd so that Q is fermionic.
// ---------------------------------------------------------------------------
struct SykCoupling {
    int n_modes = 0;
    int q = 3;
    // Ascending index tuples only; antisymmetry is implicit in storage.
    std::vector<std::pair<std::vector<int>, Complex>> table;
    std::optional<std::uint64_t> seed;
};

// Independent complex Gaussian entry per ascending tuple, unit variance.
SykCoupling random_syk_coupling(int n_modes, int q, std::uint64_t seed);

SusyModel syk_model(const SykCoupling& coupling);

// Diagonal unitary exp(2 pi i r N^ / q), N^ = sum_i n_i; generates the Z_q
// symmetry whose chemical potential enters the refined index.
SparseOperator zq_symmetry_operator(int n_modes, int q, double r);

// e^{i N pi (r/q - 1/2)} [2 sin(pi r / q)]^N
Complex syk_refined_index_closed_form(int n_modes, int q, double r);

// ---------------------------------------------------------------------------
// Generic ansatz Q = sum_i a_i† B_i for bosonic B_i. The assembled model may
// fail nilpotency; the report says so rather than throwing.
// ---------------------------------------------------------------------------
struct AnsatzResult {
    SusyModel model;
    ValidationReport report;
};
AnsatzResult ansatz_supercharge(int n_modes, const std::vector<SparseOperator>& b_ops);

// Recover the graph a hardcore model was built from (stored in labels).
Graph graph_from_labels(const SusyModel& model);

}  // namespace susyq
