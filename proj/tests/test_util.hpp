#pragma once

#include <vector>

#include "susyq/models.hpp"
#include "susyq/rng.hpp"

namespace susyq::testutil {

// Erdos-Renyi graph with edge probability p, deterministic in seed.
inline Graph random_graph(int n, double p, std::uint64_t seed) {
    SplitMix64 gen(seed);
    std::vector<std::pair<int, int>> edges;
    for (int u = 1; u <= n; ++u) {
        for (int v = u + 1; v <= n; ++v) {
            if (gen.uniform() < p) edges.emplace_back(u, v);
        }
    }
    return Graph::from_edges(n, std::move(edges));
}

inline Graph k2() { return Graph::from_edges(2, {{1, 2}}); }
inline Graph k3() { return Graph::from_edges(3, {{1, 2}, {2, 3}, {1, 3}}); }
inline Graph path3() { return Graph::from_edges(3, {{1, 2}, {2, 3}}); }
inline Graph empty_graph(int n) { return Graph::from_edges(n, {}); }

// Random dense-ish sparse operator with entries in the unit disc.
inline SparseOperator random_operator(Index dim, std::uint64_t seed, int per_col = 4) {
    SplitMix64 gen(seed);
    std::vector<Eigen::Triplet<Complex>> t;
    for (Index c = 0; c < dim; ++c) {
        for (int k = 0; k < per_col; ++k) {
            const Index r = static_cast<Index>(gen.next() % static_cast<std::uint64_t>(dim));
            t.emplace_back(r, c, Complex(2.0 * gen.uniform() - 1.0, 2.0 * gen.uniform() - 1.0));
        }
    }
    return SparseOperator::from_triplets(dim, t);
}

inline SparseOperator random_hermitian(Index dim, std::uint64_t seed) {
    const SparseOperator a = random_operator(dim, seed);
    return scale(Complex(0.5, 0.0), add(a, a.adjoint()));
}

}  // namespace susyq::testutil
