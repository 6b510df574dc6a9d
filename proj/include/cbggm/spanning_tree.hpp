#pragma once

#include <iosfwd>
#include <vector>

#include "cbggm/graph.hpp"
#include "cbggm/rng.hpp"

namespace cbggm {

// A spanning tree of the complete graph on n labelled vertices: exactly n-1
// edges, connected and acyclic.
class SpanningTree {
  public:
    SpanningTree(int n, std::vector<Edge> edges);

    int vertex_count() const { return n_; }
    const std::vector<Edge>& edges() const { return edges_; }  // lexicographic
    Graph to_graph() const;

    // Parent array of the tree rooted at `root` (parent[root] == root).
    std::vector<int> parents(int root) const;

    friend bool operator==(const SpanningTree&, const SpanningTree&) = default;

  private:
    int n_;
    std::vector<Edge> edges_;
};

// Tree whose edges are (root, v) for every v != root.
SpanningTree star_tree(int n, int root);

// Uniform over all n^{n-2} labelled spanning trees, via the Pruefer-sequence
// bijection.
SpanningTree random_spanning_tree(int n, Rng& rng);

void write_edge_list(std::ostream& out, const SpanningTree& tree);
SpanningTree read_tree_edge_list(std::istream& in, int n);

}  // namespace cbggm
