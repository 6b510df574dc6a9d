#pragma once

#include <optional>
#include <vector>

#include "cbggm/graph.hpp"
#include "cbggm/spanning_tree.hpp"

namespace cbggm {

// Fundamental system of cycles of a spanning tree of the complete graph:
// for each non-tree edge (a, b), the cycle made of (a, b) plus the unique
// tree path between a and b. These (n-1)(n-2)/2 cycles form a basis of the
// cycle space. Basis elements are ordered by the lexicographic order of
// their generating non-tree edge, which fixes the coordinate indexing.
class FundamentalCycleBasis {
  public:
    explicit FundamentalCycleBasis(SpanningTree tree);

    int vertex_count() const { return tree_.vertex_count(); }
    int size() const { return static_cast<int>(cycles_.size()); }
    const SpanningTree& tree() const { return tree_; }
    const Graph& cycle(int k) const { return cycles_.at(k); }
    Edge generator(int k) const { return generators_.at(k); }

    // Basis index of the cycle generated by non-tree edge e; -1 for tree edges.
    int cycle_of_generator(Edge e) const;

    // Coordinates of G over this basis: coordinate k is set iff G contains
    // the generator edge of cycle k. Returns nullopt when the XOR of the
    // selected cycles does not reproduce G, i.e. G is not in the cycle space.
    std::optional<Bits> decompose(const Graph& g) const;

    // XOR of the selected basis cycles; always a cycle-space member.
    Graph reconstruct(const Bits& coords) const;

  private:
    SpanningTree tree_;
    std::vector<Graph> cycles_;
    std::vector<Edge> generators_;
    std::vector<int> generator_index_;  // edge index -> basis index, -1 for tree edges
};

}  // namespace cbggm
