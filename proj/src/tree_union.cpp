#include "cbggm/tree_union.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>
#include <unordered_map>

namespace cbggm {

namespace {

// Determinant by fraction-free Bareiss elimination: every intermediate value
// is an exact integer (a minor of the input), so no rationals appear.
BigInt bareiss_determinant(std::vector<std::vector<BigInt>> m) {
    const int n = static_cast<int>(m.size());
    if (n == 0) return 1;
    BigInt prev = 1;
    int sign = 1;
    for (int k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            int swap_row = -1;
            for (int i = k + 1; i < n; ++i) {
                if (m[i][k] != 0) {
                    swap_row = i;
                    break;
                }
            }
            if (swap_row == -1) return 0;
            std::swap(m[k], m[swap_row]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j) {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

// Laplacian of a weighted multigraph with row/column `drop` removed.
std::vector<std::vector<BigInt>> laplacian_minor(const WeightedMultigraph& wg, int drop) {
    const int n = wg.vertex_count;
    std::vector<std::vector<BigInt>> lap(n, std::vector<BigInt>(n, 0));
    for (const WeightedEdge& e : wg.edges) {
        lap[e.u][e.u] += e.weight;
        lap[e.v][e.v] += e.weight;
        lap[e.u][e.v] -= e.weight;
        lap[e.v][e.u] -= e.weight;
    }
    std::vector<std::vector<BigInt>> minor;
    minor.reserve(n - 1);
    for (int i = 0; i < n; ++i) {
        if (i == drop) continue;
        std::vector<BigInt> row;
        row.reserve(n - 1);
        for (int j = 0; j < n; ++j) {
            if (j == drop) continue;
            row.push_back(lap[i][j]);
        }
        minor.push_back(std::move(row));
    }
    return minor;
}

WeightedMultigraph to_weighted(const Graph& g) {
    WeightedMultigraph wg;
    wg.vertex_count = g.vertex_count();
    g.for_each_edge([&](Edge e) { wg.edges.push_back({e.i, e.j, 1}); });
    return wg;
}

// Quotient of `whole` by the connected components induced by `contracted`
// (a subgraph of `whole`). Each surviving edge carries the number of its
// pre-images; self-loops are dropped.
WeightedMultigraph quotient_by_components(const Graph& whole, const Graph& contracted) {
    const int n = whole.vertex_count();
    std::vector<int> comp(n, -1);
    int comp_count = 0;
    for (int start = 0; start < n; ++start) {
        if (comp[start] != -1) continue;
        comp[start] = comp_count;
        std::vector<int> stack{start};
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            for (int u = 0; u < n; ++u) {
                if (u == v || comp[u] != -1) continue;
                if (contracted.has_edge(std::min(u, v), std::max(u, v))) {
                    comp[u] = comp_count;
                    stack.push_back(u);
                }
            }
        }
        ++comp_count;
    }

    std::map<std::pair<int, int>, long long> weight;
    whole.for_each_edge([&](Edge e) {
        const int a = comp[e.i];
        const int b = comp[e.j];
        if (a == b) return;  // internal to a contracted component
        weight[{std::min(a, b), std::max(a, b)}] += 1;
    });

    WeightedMultigraph wg;
    wg.vertex_count = comp_count;
    for (const auto& [key, w] : weight) wg.edges.push_back({key.first, key.second, w});
    return wg;
}

bool connected_on_all_vertices(int n, const std::vector<Edge>& edges, std::uint32_t mask) {
    // Union-find over the selected edges.
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    int components = n;
    for (std::size_t t = 0; t < edges.size(); ++t) {
        if (!(mask & (std::uint32_t{1} << t))) continue;
        const int a = find(edges[t].i);
        const int b = find(edges[t].j);
        if (a != b) {
            parent[a] = b;
            --components;
        }
    }
    return components == 1;
}

BigInt tree_count_of_subset(int n, const std::vector<Edge>& edges, std::uint32_t mask) {
    WeightedMultigraph wg;
    wg.vertex_count = n;
    for (std::size_t t = 0; t < edges.size(); ++t) {
        if (mask & (std::uint32_t{1} << t)) wg.edges.push_back({edges[t].i, edges[t].j, 1});
    }
    return weighted_tree_enumerator(wg);
}

struct UnionCountSolver {
    int n;
    int k;
    std::vector<Edge> edges;
    std::unordered_map<std::uint32_t, BigInt> memo;

    BigInt solve(std::uint32_t mask) {
        const auto it = memo.find(mask);
        if (it != memo.end()) return it->second;
        const BigInt trees = tree_count_of_subset(n, edges, mask);
        BigInt result = 0;
        if (trees >= k) {
            result = binomial(trees, k);
            // Subtract unions that land strictly inside this subgraph: every
            // union of spanning trees is connected and spans all vertices.
            for (std::uint32_t sub = (mask - 1) & mask; sub != 0; sub = (sub - 1) & mask) {
                if (connected_on_all_vertices(n, edges, sub)) result -= solve(sub);
            }
        }
        memo.emplace(mask, result);
        return result;
    }
};

}  // namespace

BigInt binomial(const BigInt& n, int k) {
    if (k < 0 || n < k) return 0;
    BigInt result = 1;
    for (int t = 1; t <= k; ++t) {
        result *= n - (t - 1);
        result /= t;
    }
    return result;
}

BigInt count_spanning_trees(const Graph& g) { return weighted_tree_enumerator(to_weighted(g)); }

BigInt weighted_tree_enumerator(const WeightedMultigraph& wg) {
    if (wg.vertex_count < 1) throw std::invalid_argument("weighted_tree_enumerator: empty graph");
    for (const WeightedEdge& e : wg.edges) {
        if (e.weight < 1) throw std::invalid_argument("weighted_tree_enumerator: weights must be >= 1");
        if (e.u == e.v) throw std::invalid_argument("weighted_tree_enumerator: self-loop");
    }
    if (wg.vertex_count == 1) return 1;
    return bareiss_determinant(laplacian_minor(wg, 0));
}

WeightedMultigraph contract_edge(const Graph& g, Edge e) {
    if (!g.has_edge(e)) throw std::invalid_argument("contract_edge: edge not present");
    Graph just_e(g.vertex_count());
    just_e.set_edge(e);
    return quotient_by_components(g, just_e);
}

BigInt count_union_equivalent_trees(const Graph& g, const SpanningTree& t0) {
    if (g.vertex_count() != t0.vertex_count())
        throw std::invalid_argument("count_union_equivalent_trees: vertex count mismatch");
    if (!g.connected()) throw std::invalid_argument("count_union_equivalent_trees: g must be connected");
    const Graph g_prime = g | t0.to_graph();
    // Edges of g' missing from g are forced into every solution tree;
    // contract their components and count weighted trees of the quotient.
    Graph extra = g_prime;
    g.for_each_edge([&](Edge e) { extra.set_edge(e, false); });
    return weighted_tree_enumerator(quotient_by_components(g_prime, extra));
}

BigInt count_trees_containing_edge(const Graph& g, Edge e) {
    if (!g.connected()) return 0;
    return weighted_tree_enumerator(contract_edge(g, e));
}

BigInt count_union_representations(const Graph& g, int k, int max_edges) {
    if (k < 1) throw std::invalid_argument("count_union_representations: need k >= 1");
    const int m = g.edge_count();
    if (m > max_edges || m > 31)
        throw cap_exceeded("count_union_representations: " + std::to_string(m) +
                           " edges exceed the cap of " + std::to_string(std::min(max_edges, 31)));
    if (!g.connected()) return 0;
    UnionCountSolver solver{g.vertex_count(), k, g.edges(), {}};
    return solver.solve((std::uint32_t{1} << m) - 1);
}

double UnionRatioBounds::lower_value() const { return lower.convert_to<double>(); }

double UnionRatioBounds::upper_value() const {
    return upper_numerator.convert_to<double>() / upper_denominator.convert_to<double>();
}

std::optional<double> UnionRatioBounds::exact_value() const {
    if (!exact_numerator || !exact_denominator) return std::nullopt;
    return exact_numerator->convert_to<double>() / exact_denominator->convert_to<double>();
}

UnionRatioBounds union_ratio_bounds(const Graph& g, const std::vector<SpanningTree>& trees,
                                    const SpanningTree& t0, int max_edges) {
    const int n = g.vertex_count();
    const int k = static_cast<int>(trees.size());
    if (k < 1 || k > 8)
        throw std::invalid_argument("union_ratio_bounds: need 1 <= k <= 8 trees");
    Graph union_of_trees(n);
    for (const SpanningTree& t : trees) union_of_trees |= t.to_graph();
    if (union_of_trees != g)
        throw std::invalid_argument("union_ratio_bounds: g must equal the union of the trees");

    UnionRatioBounds out;
    out.lower = count_union_equivalent_trees(g, t0);

    const Graph g_prime = g | t0.to_graph();
    BigInt min_tau_e = -1;
    g_prime.for_each_edge([&](Edge e) {
        const BigInt tau_e = count_trees_containing_edge(g_prime, e);
        if (min_tau_e < 0 || tau_e < min_tau_e) min_tau_e = tau_e;
    });
    BigInt complete_trees = 1;  // |tau(K_n)| = n^{n-2}
    for (int t = 0; t < n - 2; ++t) complete_trees *= n;
    out.upper_numerator = min_tau_e * boost::multiprecision::pow(complete_trees, k);

    // The ordering of the trees is free; take the permutation with the
    // largest telescoping product.
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    BigInt best = 1;
    bool first = true;
    do {
        BigInt prod = 1;
        Graph partial_union = trees[perm[0]].to_graph();
        for (int j = 1; j < k; ++j) {
            prod *= count_union_equivalent_trees(partial_union, trees[perm[j]]);
            partial_union |= trees[perm[j]].to_graph();
        }
        if (first || prod > best) {
            best = prod;
            first = false;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    out.upper_denominator = best;

    if (g_prime.edge_count() <= max_edges) {
        out.exact_numerator = count_union_representations(g_prime, k + 1, max_edges);
        out.exact_denominator = count_union_representations(g, k, max_edges);
    }
    return out;
}

std::vector<BoundsExperimentRow> bounds_experiment(int n, int k, int replicates, Rng& rng,
                                                   int max_edges) {
    std::vector<BoundsExperimentRow> rows;
    rows.reserve(replicates);
    for (int rep = 0; rep < replicates; ++rep) {
        // The lower bound's injection argument needs the extra tree to leave
        // g; with t0 inside g the bound can exceed the exact ratio. Draw
        // instances until t0 adds an edge (impossible when g is complete, so
        // those unions are redrawn as well).
        std::vector<SpanningTree> trees;
        Graph g(n);
        std::optional<SpanningTree> t0;
        while (!t0) {
            trees.clear();
            g = Graph(n);
            for (int t = 0; t < k; ++t) {
                // k distinct trees, so that g is a union of k trees proper.
                SpanningTree tree = random_spanning_tree(n, rng);
                while (std::find(trees.begin(), trees.end(), tree) != trees.end())
                    tree = random_spanning_tree(n, rng);
                g |= tree.to_graph();
                trees.push_back(std::move(tree));
            }
            if (g == Graph::complete(n)) continue;
            SpanningTree candidate = random_spanning_tree(n, rng);
            if ((g | candidate.to_graph()) != g) t0 = std::move(candidate);
        }
        const UnionRatioBounds bounds = union_ratio_bounds(g, trees, *t0, max_edges);
        BoundsExperimentRow row;
        row.replicate = rep;
        row.lower = bounds.lower_value();
        row.upper = bounds.upper_value();
        row.exact = bounds.exact_value();
        // A zero exact denominator cannot occur: g is a union of k trees by
        // construction, so Y(g, k) >= 1.
        rows.push_back(row);
    }
    return rows;
}

void write_bounds_csv(std::ostream& out, const std::vector<BoundsExperimentRow>& rows) {
    out << "replicate,lower,exact,upper,log10_lower,log10_exact,log10_upper\n";
    const auto log10_or_empty = [](double v) {
        return v > 0.0 ? std::to_string(std::log10(v)) : std::string();
    };
    for (const BoundsExperimentRow& row : rows) {
        out << row.replicate << ',' << row.lower << ',';
        if (row.exact) out << *row.exact;
        out << ',' << row.upper << ',' << log10_or_empty(row.lower) << ',';
        if (row.exact) out << log10_or_empty(*row.exact);
        out << ',' << log10_or_empty(row.upper) << '\n';
    }
}

}  // namespace cbggm
