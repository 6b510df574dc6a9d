#pragma once

#include <compare>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "cbggm/bits.hpp"

namespace cbggm {

using BigInt = boost::multiprecision::cpp_int;

// Unordered vertex pair, normalized so that i < j.
struct Edge {
    int i = 0;
    int j = 0;

    Edge() = default;
    Edge(int a, int b) : i(a < b ? a : b), j(a < b ? b : a) {
        if (a == b) throw std::invalid_argument("Edge: self-loop");
        if (a < 0 || b < 0) throw std::invalid_argument("Edge: negative vertex");
    }

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Position of the pair (i, j), i < j < n, in lexicographic order over all
// n(n-1)/2 unordered pairs.
int edge_index(int i, int j, int n);
Edge edge_at(int index, int n);

// A simple undirected graph on n labelled vertices, stored as one bit per
// unordered pair in lexicographic order. Together with edgewise XOR this is
// the GF(2) vector space of graphs; loops and multi-edges are not
// representable.
class Graph {
  public:
    explicit Graph(int n);
    static Graph complete(int n);
    static Graph from_bits(int n, Bits bits);
    static Graph from_edges(int n, const std::vector<Edge>& edges);

    int vertex_count() const { return n_; }
    int max_edges() const { return n_ * (n_ - 1) / 2; }
    int edge_count() const { return static_cast<int>(bits_.count()); }

    bool has_edge(int i, int j) const { return bits_.test(edge_index(i, j, n_)); }
    bool has_edge(Edge e) const { return has_edge(e.i, e.j); }
    void set_edge(int i, int j, bool present = true) { bits_.set(edge_index(i, j, n_), present); }
    void set_edge(Edge e, bool present = true) { set_edge(e.i, e.j, present); }
    void flip_edge(int i, int j) { bits_.flip(edge_index(i, j, n_)); }
    void flip_edge(Edge e) { flip_edge(e.i, e.j); }

    int degree(int v) const;
    std::vector<int> degrees() const;
    std::vector<Edge> edges() const;

    // Calls f(Edge) for every present edge in lexicographic order.
    template <class F>
    void for_each_edge(F&& f) const {
        bits_.for_each_set([&](std::size_t idx) { f(edge_at(static_cast<int>(idx), n_)); });
    }

    // GF(2) addition: an edge is present in the sum iff it is present in
    // exactly one operand.
    Graph& operator^=(const Graph& other);
    friend Graph operator^(Graph a, const Graph& b) { return a ^= b; }

    // Edge union (not a vector-space operation; used by the spanning-tree
    // union machinery).
    Graph& operator|=(const Graph& other);
    friend Graph operator|(Graph a, const Graph& b) { return a |= b; }

    friend bool operator==(const Graph&, const Graph&) = default;
    friend auto operator<=>(const Graph&, const Graph&) = default;

    bool is_subgraph_of(const Graph& other) const;
    bool connected() const;  // over all n vertices

    const Bits& bits() const { return bits_; }

  private:
    int n_ = 1;
    Bits bits_;
};

struct GraphHash {
    std::size_t operator()(const Graph& g) const { return g.bits().hash(); }
};

// Veblen's criterion: a graph lies in the cycle space iff every vertex has
// even degree.
bool is_cycle_space_member(const Graph& g);

struct CycleSpaceProjection {
    Graph member;
    int distance;  // number of flipped edges = (#odd-degree vertices)/2
};

// Nearest cycle-space member: pair up the odd-degree vertices v_1..v_k in
// ascending index order as (v_t, v_{k/2+t}) and flip those k/2 edges. No
// member lies strictly closer in Hamming distance.
CycleSpaceProjection project_to_cycle_space(const Graph& g);

// |C_n| = 2^{(n-1)(n-2)/2}
BigInt cycle_space_cardinality(int n);

// Serialization: a full symmetric 0/1 adjacency matrix in CSV, and a compact
// "i j" edge list (one edge per line). Both use the lexicographic edge order.
void write_adjacency_csv(std::ostream& out, const Graph& g);
Graph read_adjacency_csv(std::istream& in);
void write_edge_list(std::ostream& out, const Graph& g);
Graph read_edge_list(std::istream& in, int n);

}  // namespace cbggm
