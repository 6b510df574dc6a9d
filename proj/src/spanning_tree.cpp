#include "cbggm/spanning_tree.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <queue>
#include <sstream>

#include <boost/random/uniform_int_distribution.hpp>

namespace cbggm {

namespace {

// Disjoint-set forest used for the acyclicity check.
struct UnionFind {
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[a] = b;
        return true;
    }
    std::vector<int> parent;
};

}  // namespace

SpanningTree::SpanningTree(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
    if (n < 1) throw std::invalid_argument("SpanningTree: need n >= 1");
    if (static_cast<int>(edges_.size()) != n - 1)
        throw std::invalid_argument("SpanningTree: need exactly n-1 edges");
    UnionFind uf(n);
    for (const Edge& e : edges_) {
        if (e.j >= n) throw std::invalid_argument("SpanningTree: vertex out of range");
        if (!uf.unite(e.i, e.j)) throw std::invalid_argument("SpanningTree: edges contain a cycle");
    }
    std::sort(edges_.begin(), edges_.end());
}

Graph SpanningTree::to_graph() const { return Graph::from_edges(n_, edges_); }

std::vector<int> SpanningTree::parents(int root) const {
    if (root < 0 || root >= n_) throw std::invalid_argument("SpanningTree::parents: bad root");
    std::vector<std::vector<int>> adj(n_);
    for (const Edge& e : edges_) {
        adj[e.i].push_back(e.j);
        adj[e.j].push_back(e.i);
    }
    std::vector<int> parent(n_, -1);
    parent[root] = root;
    std::queue<int> q;
    q.push(root);
    while (!q.empty()) {
        const int v = q.front();
        q.pop();
        for (int u : adj[v]) {
            if (parent[u] == -1) {
                parent[u] = v;
                q.push(u);
            }
        }
    }
    return parent;
}

SpanningTree star_tree(int n, int root) {
    if (n < 2) throw std::invalid_argument("star_tree: need n >= 2");
    if (root < 0 || root >= n) throw std::invalid_argument("star_tree: root out of range");
    std::vector<Edge> edges;
    edges.reserve(n - 1);
    for (int v = 0; v < n; ++v)
        if (v != root) edges.emplace_back(root, v);
    return SpanningTree(n, std::move(edges));
}

SpanningTree random_spanning_tree(int n, Rng& rng) {
    if (n < 2) throw std::invalid_argument("random_spanning_tree: need n >= 2");
    if (n == 2) return SpanningTree(2, {Edge{0, 1}});

    // Decode a uniform Pruefer sequence of length n-2.
    boost::random::uniform_int_distribution<int> pick(0, n - 1);
    std::vector<int> seq(n - 2);
    for (int& s : seq) s = pick(rng);

    std::vector<int> degree(n, 1);
    for (int s : seq) ++degree[s];

    std::vector<Edge> edges;
    edges.reserve(n - 1);
    std::priority_queue<int, std::vector<int>, std::greater<>> leaves;
    for (int v = 0; v < n; ++v)
        if (degree[v] == 1) leaves.push(v);
    for (int s : seq) {
        const int leaf = leaves.top();
        leaves.pop();
        edges.emplace_back(leaf, s);
        if (--degree[s] == 1) leaves.push(s);
    }
    const int a = leaves.top();
    leaves.pop();
    const int b = leaves.top();
    edges.emplace_back(a, b);
    return SpanningTree(n, std::move(edges));
}

void write_edge_list(std::ostream& out, const SpanningTree& tree) {
    for (const Edge& e : tree.edges()) out << e.i << ' ' << e.j << '\n';
}

SpanningTree read_tree_edge_list(std::istream& in, int n) {
    std::vector<Edge> edges;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        int i = -1, j = -1;
        if (!(ss >> i >> j)) throw std::runtime_error("tree edge list: expected 'i j' per line");
        edges.emplace_back(i, j);
    }
    return SpanningTree(n, std::move(edges));
}

}  // namespace cbggm
