#include "cbggm/cycle_basis.hpp"

#include <algorithm>

namespace cbggm {

FundamentalCycleBasis::FundamentalCycleBasis(SpanningTree tree) : tree_(std::move(tree)) {
    const int n = tree_.vertex_count();
    const Graph tree_graph = tree_.to_graph();
    const std::vector<int> parent = tree_.parents(0);

    std::vector<int> depth(n, 0);
    for (int v = 1; v < n; ++v) {
        int d = 0;
        for (int w = v; w != 0; w = parent[w]) ++d;
        depth[v] = d;
    }

    generator_index_.assign(tree_graph.max_edges(), -1);
    cycles_.reserve(static_cast<std::size_t>(n - 1) * (n - 2) / 2);
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            if (tree_graph.has_edge(a, b)) continue;
            Graph cycle(n);
            cycle.set_edge(a, b);
            // Walk both endpoints up to their lowest common ancestor.
            int x = a, y = b;
            while (depth[x] > depth[y]) {
                cycle.flip_edge(Edge{x, parent[x]});
                x = parent[x];
            }
            while (depth[y] > depth[x]) {
                cycle.flip_edge(Edge{y, parent[y]});
                y = parent[y];
            }
            while (x != y) {
                cycle.flip_edge(Edge{x, parent[x]});
                cycle.flip_edge(Edge{y, parent[y]});
                x = parent[x];
                y = parent[y];
            }
            generator_index_[edge_index(a, b, n)] = static_cast<int>(cycles_.size());
            cycles_.push_back(std::move(cycle));
            generators_.push_back(Edge{a, b});
        }
    }
}

int FundamentalCycleBasis::cycle_of_generator(Edge e) const {
    if (e.j >= vertex_count()) throw std::invalid_argument("cycle_of_generator: vertex out of range");
    return generator_index_[edge_index(e.i, e.j, vertex_count())];
}

std::optional<Bits> FundamentalCycleBasis::decompose(const Graph& g) const {
    if (g.vertex_count() != vertex_count())
        throw std::invalid_argument("decompose: vertex count mismatch");
    Bits coords(size());
    Graph residual = g;
    for (int k = 0; k < size(); ++k) {
        if (g.has_edge(generators_[k])) {
            coords.set(k);
            residual ^= cycles_[k];
        }
    }
    if (residual.bits().any()) return std::nullopt;
    return coords;
}

Graph FundamentalCycleBasis::reconstruct(const Bits& coords) const {
    if (static_cast<int>(coords.size()) != size())
        throw std::invalid_argument("reconstruct: coordinate length mismatch");
    Graph g(vertex_count());
    coords.for_each_set([&](std::size_t k) { g ^= cycles_[k]; });
    return g;
}

}  // namespace cbggm
