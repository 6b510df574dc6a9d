#include "cbggm/graph.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace cbggm {

int edge_index(int i, int j, int n) {
    if (i < 0 || i >= j || j >= n)
        throw std::invalid_argument("edge_index: need 0 <= i < j < n");
    return i * n - i * (i + 1) / 2 + (j - i - 1);
}

Edge edge_at(int index, int n) {
    if (index < 0 || index >= n * (n - 1) / 2)
        throw std::invalid_argument("edge_at: index out of range");
    int i = 0;
    int row = n - 1;  // number of pairs with first vertex i
    while (index >= row) {
        index -= row;
        ++i;
        --row;
    }
    return Edge{i, i + 1 + index};
}

Graph::Graph(int n) : n_(n), bits_(static_cast<std::size_t>(n) * (n - 1) / 2) {
    if (n < 1) throw std::invalid_argument("Graph: need n >= 1");
}

Graph Graph::complete(int n) {
    Graph g(n);
    for (int idx = 0; idx < g.max_edges(); ++idx) g.bits_.set(idx);
    return g;
}

Graph Graph::from_bits(int n, Bits bits) {
    Graph g(n);
    if (bits.size() != g.bits_.size())
        throw std::invalid_argument("Graph::from_bits: wrong bit-vector length");
    g.bits_ = std::move(bits);
    return g;
}

Graph Graph::from_edges(int n, const std::vector<Edge>& edges) {
    Graph g(n);
    for (const Edge& e : edges) g.set_edge(e);
    return g;
}

int Graph::degree(int v) const {
    if (v < 0 || v >= n_) throw std::invalid_argument("Graph::degree: vertex out of range");
    int d = 0;
    for (int u = 0; u < n_; ++u)
        if (u != v && has_edge(std::min(u, v), std::max(u, v))) ++d;
    return d;
}

std::vector<int> Graph::degrees() const {
    std::vector<int> deg(n_, 0);
    for_each_edge([&](Edge e) {
        ++deg[e.i];
        ++deg[e.j];
    });
    return deg;
}

std::vector<Edge> Graph::edges() const {
    std::vector<Edge> out;
    out.reserve(bits_.count());
    for_each_edge([&](Edge e) { out.push_back(e); });
    return out;
}

Graph& Graph::operator^=(const Graph& other) {
    if (n_ != other.n_) throw std::invalid_argument("Graph: vertex count mismatch");
    bits_ ^= other.bits_;
    return *this;
}

Graph& Graph::operator|=(const Graph& other) {
    if (n_ != other.n_) throw std::invalid_argument("Graph: vertex count mismatch");
    bits_ |= other.bits_;
    return *this;
}

bool Graph::is_subgraph_of(const Graph& other) const {
    if (n_ != other.n_) throw std::invalid_argument("Graph: vertex count mismatch");
    return bits_.is_subset_of(other.bits_);
}

bool Graph::connected() const {
    if (n_ == 1) return true;
    std::vector<int> stack{0};
    std::vector<char> seen(n_, 0);
    seen[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int u = 0; u < n_; ++u) {
            if (u == v || seen[u]) continue;
            if (has_edge(std::min(u, v), std::max(u, v))) {
                seen[u] = 1;
                ++reached;
                stack.push_back(u);
            }
        }
    }
    return reached == n_;
}

bool is_cycle_space_member(const Graph& g) {
    for (int d : g.degrees())
        if (d % 2 != 0) return false;
    return true;
}

CycleSpaceProjection project_to_cycle_space(const Graph& g) {
    std::vector<int> odd;
    const std::vector<int> deg = g.degrees();
    for (int v = 0; v < g.vertex_count(); ++v)
        if (deg[v] % 2 != 0) odd.push_back(v);
    // The handshake lemma makes the number of odd-degree vertices even.
    const int k = static_cast<int>(odd.size());
    Graph member = g;
    for (int t = 0; t < k / 2; ++t) member.flip_edge(odd[t], odd[k / 2 + t]);
    return CycleSpaceProjection{std::move(member), k / 2};
}

BigInt cycle_space_cardinality(int n) {
    if (n < 1) throw std::invalid_argument("cycle_space_cardinality: need n >= 1");
    return BigInt(1) << (static_cast<unsigned>(n - 1) * (n - 2) / 2);
}

void write_adjacency_csv(std::ostream& out, const Graph& g) {
    const int n = g.vertex_count();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (j) out << ',';
            out << (i != j && g.has_edge(std::min(i, j), std::max(i, j)) ? 1 : 0);
        }
        out << '\n';
    }
}

Graph read_adjacency_csv(std::istream& in) {
    std::vector<std::vector<int>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<int> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            if (cell == "0") {
                row.push_back(0);
            } else if (cell == "1") {
                row.push_back(1);
            } else {
                throw std::runtime_error("adjacency CSV: cell must be 0 or 1, got '" + cell + "'");
            }
        }
        rows.push_back(std::move(row));
    }
    const int n = static_cast<int>(rows.size());
    if (n < 1) throw std::runtime_error("adjacency CSV: empty input");
    for (const auto& row : rows)
        if (static_cast<int>(row.size()) != n)
            throw std::runtime_error("adjacency CSV: matrix is not square");
    Graph g(n);
    for (int i = 0; i < n; ++i) {
        if (rows[i][i] != 0) throw std::runtime_error("adjacency CSV: nonzero diagonal");
        for (int j = i + 1; j < n; ++j) {
            if (rows[i][j] != rows[j][i]) throw std::runtime_error("adjacency CSV: not symmetric");
            if (rows[i][j]) g.set_edge(i, j);
        }
    }
    return g;
}

void write_edge_list(std::ostream& out, const Graph& g) {
    g.for_each_edge([&](Edge e) { out << e.i << ' ' << e.j << '\n'; });
}

Graph read_edge_list(std::istream& in, int n) {
    Graph g(n);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        int i = -1, j = -1;
        if (!(ss >> i >> j)) throw std::runtime_error("edge list: expected 'i j' per line");
        if (i < 0 || j < 0 || i >= n || j >= n || i == j)
            throw std::runtime_error("edge list: invalid edge");
        g.set_edge(std::min(i, j), std::max(i, j));
    }
    return g;
}

}  // namespace cbggm
