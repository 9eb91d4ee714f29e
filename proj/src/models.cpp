#include "susyq/models.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "susyq/rng.hpp"

namespace susyq {

// --------------------------------------------------------------------------
// Graph
// --------------------------------------------------------------------------

Graph Graph::from_edges(int n_vertices, std::vector<std::pair<int, int>> edges) {
    if (n_vertices < 0) throw std::invalid_argument("Graph: negative vertex count");
    std::set<std::pair<int, int>> seen;
    for (auto& [u, v] : edges) {
        if (u == v) throw std::invalid_argument("Graph: self-loop at vertex " + std::to_string(u));
        if (u > v) std::swap(u, v);
        if (u < 1 || v > n_vertices) {
            throw std::invalid_argument("Graph: edge (" + std::to_string(u) + ", " + std::to_string(v) +
                                        ") out of range");
        }
        if (!seen.insert({u, v}).second) {
            throw std::invalid_argument("Graph: duplicate edge (" + std::to_string(u) + ", " +
                                        std::to_string(v) + ")");
        }
    }
    Graph g;
    g.n_vertices = n_vertices;
    g.edges.assign(seen.begin(), seen.end());
    return g;
}

std::vector<std::uint32_t> Graph::adjacency_masks() const {
    std::vector<std::uint32_t> adj(static_cast<std::size_t>(n_vertices), 0u);
    for (const auto& [u, v] : edges) {
        adj[static_cast<std::size_t>(u - 1)] |= 1u << (v - 1);
        adj[static_cast<std::size_t>(v - 1)] |= 1u << (u - 1);
    }
    return adj;
}

Graph load_graph(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    int n_vertices = -1;
    std::vector<std::pair<int, int>> edges;
    std::set<std::pair<int, int>> seen;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        std::string line = (hash == std::string::npos) ? raw : raw.substr(0, hash);
        std::istringstream ls(line);
        if (n_vertices < 0) {
            std::string tok;
            if (!(ls >> tok)) continue;  // blank or comment-only line
            try {
                std::size_t pos = 0;
                n_vertices = std::stoi(tok, &pos);
                if (pos != tok.size()) throw std::invalid_argument("");
            } catch (const std::exception&) {
                throw GraphParseError(line_no, "expected vertex count, got '" + tok + "'");
            }
            if (n_vertices < 0) throw GraphParseError(line_no, "vertex count must be nonnegative");
            std::string extra;
            if (ls >> extra) throw GraphParseError(line_no, "trailing tokens after vertex count");
            continue;
        }
        int u = 0, v = 0;
        if (!(ls >> u)) continue;  // blank line
        if (!(ls >> v)) throw GraphParseError(line_no, "expected 'u v' edge line");
        std::string extra;
        if (ls >> extra) throw GraphParseError(line_no, "trailing tokens after edge");
        if (u == v) throw GraphParseError(line_no, "self-loop at vertex " + std::to_string(u));
        if (u > v) std::swap(u, v);
        if (u < 1 || v > n_vertices) throw GraphParseError(line_no, "vertex index out of range");
        if (!seen.insert({u, v}).second) throw GraphParseError(line_no, "duplicate edge");
        edges.emplace_back(u, v);
    }
    if (n_vertices < 0) throw GraphParseError(line_no, "missing vertex count");
    return Graph::from_edges(n_vertices, std::move(edges));
}

Graph load_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open graph file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_graph(ss.str());
}

std::string graph_to_text(const Graph& g) {
    std::ostringstream os;
    os << g.n_vertices << "\n";
    for (const auto& [u, v] : g.edges) os << u << " " << v << "\n";
    return os.str();
}

// --------------------------------------------------------------------------
// Hard-core model
// --------------------------------------------------------------------------

SparseOperator hardcore_vertex_projector(const Graph& g, int vertex) {
    if (vertex < 1 || vertex > g.n_vertices) throw std::invalid_argument("vertex out of range");
    const int n = g.n_vertices;
    const std::uint64_t dim = std::uint64_t(1) << n;
    const std::uint32_t nbr = g.adjacency_masks()[static_cast<std::size_t>(vertex - 1)];
    Eigen::VectorXcd d = Eigen::VectorXcd::Zero(static_cast<Index>(dim));
    for (std::uint64_t s = 0; s < dim; ++s) {
        if ((s & nbr) == 0) d[static_cast<Index>(s)] = Complex(1.0, 0.0);
    }
    return SparseOperator::diagonal(d, OpParity::Bosonic);
}

SusyModel hardcore_model(const Graph& g, int max_vertices) {
    if (g.n_vertices < 1) throw std::invalid_argument("hardcore_model: graph must have at least one vertex");
    if (g.n_vertices > max_vertices) {
        throw std::invalid_argument("hardcore_model: " + std::to_string(g.n_vertices) +
                                    " vertices exceeds limit " + std::to_string(max_vertices));
    }
    const int n = g.n_vertices;
    const std::uint64_t dim = std::uint64_t(1) << n;
    const auto adj = g.adjacency_masks();

    // Q = sum_i a_i† P_i: from independent-set-compatible column s, create at
    // vertex i when i and all its neighbors are empty; JW string over j < i.
    std::vector<Eigen::Triplet<Complex>> tq;
    for (std::uint64_t s = 0; s < dim; ++s) {
        for (int i = 1; i <= n; ++i) {
            const std::uint64_t bit = std::uint64_t(1) << (i - 1);
            if (s & bit) continue;
            if (s & adj[static_cast<std::size_t>(i - 1)]) continue;  // P_i kills the state
            const double sign = (std::popcount(s & (bit - 1)) % 2 == 0) ? 1.0 : -1.0;
            tq.emplace_back(static_cast<Index>(s | bit), static_cast<Index>(s), Complex(sign, 0.0));
        }
    }

    std::vector<Eigen::Triplet<Complex>> tp;
    for (std::uint64_t s = 0; s < dim; ++s) {
        bool independent = true;
        for (int i = 1; i <= n && independent; ++i) {
            const std::uint64_t bit = std::uint64_t(1) << (i - 1);
            if ((s & bit) && (s & adj[static_cast<std::size_t>(i - 1)])) independent = false;
        }
        if (independent) tp.emplace_back(static_cast<Index>(s), static_cast<Index>(s), Complex(1.0, 0.0));
    }

    SusyModel model;
    model.n_modes = n;
    model.supercharge = SparseOperator::from_triplets(static_cast<Index>(dim), tq, OpParity::Fermionic);
    model.projector = SparseOperator::from_triplets(static_cast<Index>(dim), tp, OpParity::Bosonic);
    model.labels["family"] = "hardcore";
    model.labels["graph"] = graph_to_text(g);
    return model;
}

std::vector<BasisState> independent_sets(const Graph& g, int enumeration_guard) {
    if (g.n_vertices > enumeration_guard) {
        throw std::invalid_argument("independent_sets: vertex count exceeds enumeration guard " +
                                    std::to_string(enumeration_guard));
    }
    const int n = g.n_vertices;
    const std::uint64_t dim = std::uint64_t(1) << n;
    const auto adj = g.adjacency_masks();
    std::vector<BasisState> out;
    for (std::uint64_t s = 0; s < dim; ++s) {
        bool independent = true;
        for (int i = 1; i <= n && independent; ++i) {
            const std::uint64_t bit = std::uint64_t(1) << (i - 1);
            if ((s & bit) && (s & adj[static_cast<std::size_t>(i - 1)])) independent = false;
        }
        if (independent) out.push_back(BasisState{s, n});
    }
    return out;
}

long long independence_euler_characteristic(const Graph& g, int enumeration_guard) {
    long long chi = 0;
    for (const BasisState& s : independent_sets(g, enumeration_guard)) chi += s.parity();
    return chi;
}

// --------------------------------------------------------------------------
// SYK
// --------------------------------------------------------------------------

namespace {

// Visit ascending q-tuples over {1..n} in lexicographic order.
template <typename F>
void for_each_tuple(int n, int q, F&& visit) {
    if (q > n) return;
    std::vector<int> idx(static_cast<std::size_t>(q));
    for (int i = 0; i < q; ++i) idx[static_cast<std::size_t>(i)] = i + 1;
    while (true) {
        visit(idx);
        int k = q - 1;
        while (k >= 0 && idx[static_cast<std::size_t>(k)] == n - (q - 1 - k)) --k;
        if (k < 0) break;
        ++idx[static_cast<std::size_t>(k)];
        for (int j = k + 1; j < q; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
}

}  // namespace

SykCoupling random_syk_coupling(int n_modes, int q, std::uint64_t seed) {
    if (n_modes < 1 || n_modes > 24) throw std::invalid_argument("random_syk_coupling: mode count out of range");
    if (q < 3) throw std::invalid_argument("random_syk_coupling: q must be >= 3");
    SykCoupling c;
    c.n_modes = n_modes;
    c.q = q;
    c.seed = seed;
    SplitMix64 gen(seed);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for_each_tuple(n_modes, q, [&](const std::vector<int>& idx) {
        const double re = gen.normal() * inv_sqrt2;
        const double im = gen.normal() * inv_sqrt2;
        c.table.emplace_back(idx, Complex(re, im));
    });
    return c;
}

SusyModel syk_model(const SykCoupling& coupling) {
    const int n = coupling.n_modes;
    const int q = coupling.q;
    if (q % 2 == 0) {
        throw std::invalid_argument(
            "syk_model: q must be odd; an even product of creation operators is bosonic and cannot "
            "serve as a supercharge");
    }
    if (q < 3) throw std::invalid_argument("syk_model: q must be >= 3");
    const std::uint64_t dim = std::uint64_t(1) << n;

    std::vector<Eigen::Triplet<Complex>> t;
    for (const auto& [idx, value] : coupling.table) {
        if (value == Complex(0.0, 0.0)) continue;
        if (static_cast<int>(idx.size()) != q) throw std::invalid_argument("syk_model: tuple arity != q");
        std::uint64_t mask = 0;
        int prev = 0;
        for (int i : idx) {
            if (i <= prev || i > n) throw std::invalid_argument("syk_model: tuple indices must be ascending in [1, N]");
            prev = i;
            mask |= std::uint64_t(1) << (i - 1);
        }
        // a†_{i1} ... a†_{iq} acting on |s>: apply rightmost first.
        for (std::uint64_t s = 0; s < dim; ++s) {
            if (s & mask) continue;
            std::uint64_t cur = s;
            int sign = 1;
            for (auto it = idx.rbegin(); it != idx.rend(); ++it) {
                const std::uint64_t bit = std::uint64_t(1) << (*it - 1);
                if (std::popcount(cur & (bit - 1)) % 2 != 0) sign = -sign;
                cur |= bit;
            }
            t.emplace_back(static_cast<Index>(s | mask), static_cast<Index>(s),
                           Complex(0.0, 1.0) * value * static_cast<double>(sign));
        }
    }

    SusyModel model;
    model.n_modes = n;
    model.supercharge = SparseOperator::from_triplets(static_cast<Index>(dim), t, OpParity::Fermionic);
    model.projector = SparseOperator::identity(static_cast<Index>(dim));
    model.labels["family"] = "syk";
    model.labels["q"] = std::to_string(q);
    if (coupling.seed) model.labels["seed"] = std::to_string(*coupling.seed);
    if (q > n) model.labels["warning"] = "q exceeds mode count; supercharge is identically zero";
    return model;
}

SparseOperator zq_symmetry_operator(int n_modes, int q, double r) {
    if (q < 2) throw std::invalid_argument("zq_symmetry_operator: q must be >= 2");
    const std::uint64_t dim = std::uint64_t(1) << n_modes;
    const double theta = 2.0 * std::numbers::pi * r / static_cast<double>(q);
    Eigen::VectorXcd d(static_cast<Index>(dim));
    for (std::uint64_t s = 0; s < dim; ++s) {
        d[static_cast<Index>(s)] = std::exp(Complex(0.0, theta * std::popcount(s)));
    }
    return SparseOperator::diagonal(d, OpParity::Bosonic);
}

Complex syk_refined_index_closed_form(int n_modes, int q, double r) {
    if (q < 2) throw std::invalid_argument("syk_refined_index_closed_form: q must be >= 2");
    const double x = std::numbers::pi * r / static_cast<double>(q);
    const Complex phase = std::exp(Complex(0.0, n_modes * std::numbers::pi * (r / q - 0.5)));
    return phase * std::pow(2.0 * std::sin(x), n_modes);
}

// --------------------------------------------------------------------------
// Ansatz
// --------------------------------------------------------------------------

AnsatzResult ansatz_supercharge(int n_modes, const std::vector<SparseOperator>& b_ops) {
    if (static_cast<int>(b_ops.size()) != n_modes) {
        throw std::invalid_argument("ansatz_supercharge: need exactly one B_i per mode");
    }
    const Index dim = Index(1) << n_modes;
    SparseOperator q = SparseOperator::zero(dim, OpParity::Fermionic);
    for (int i = 1; i <= n_modes; ++i) {
        const SparseOperator& b = b_ops[static_cast<std::size_t>(i - 1)];
        if (b.dim() != dim) throw std::invalid_argument("ansatz_supercharge: B dimension mismatch");
        const double res = parity_relation_residual(b, OpParity::Bosonic);
        if (res > 1e-10 * std::max(1.0, b.max_abs())) {
            throw std::invalid_argument("ansatz_supercharge: B_" + std::to_string(i) +
                                        " is not bosonic (residual " + std::to_string(res) + ")");
        }
        q = add(q, mul(jw_creation(i, n_modes), b));
    }
    AnsatzResult out;
    out.model.n_modes = n_modes;
    out.model.supercharge = q.with_tag(OpParity::Fermionic);
    out.model.projector = SparseOperator::identity(dim);
    out.model.labels["family"] = "ansatz";
    out.report = validate(out.model);
    return out;
}

Graph graph_from_labels(const SusyModel& model) {
    const auto it = model.labels.find("graph");
    if (it == model.labels.end()) {
        throw std::invalid_argument("model does not carry a hardcore graph label");
    }
    return load_graph(it->second);
}

}  // namespace susyq
