#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "cbggm/cycle_prior.hpp"
#include "cbggm/graph.hpp"
#include "cbggm/rng.hpp"
#include "cbggm/spanning_tree.hpp"

namespace cbggm {

// Multigraph with positive integer edge weights; parallel edges are
// collapsed into one edge with summed weight. Arises as the quotient of a
// graph by contracted components, with weights counting pre-images.
struct WeightedEdge {
    int u = 0;
    int v = 0;
    long long weight = 1;
};

struct WeightedMultigraph {
    int vertex_count = 0;
    std::vector<WeightedEdge> edges;
};

// Exact binomial coefficient.
BigInt binomial(const BigInt& n, int k);

// Kirchhoff count: any cofactor of the Laplacian, evaluated exactly by
// fraction-free (Bareiss) elimination. Returns 0 for disconnected graphs.
BigInt count_spanning_trees(const Graph& g);

// Sum over spanning trees of the product of edge weights (weighted
// Laplacian cofactor).
BigInt weighted_tree_enumerator(const WeightedMultigraph& wg);

// Quotient of g by the edge e with pre-image multiplicities as weights.
WeightedMultigraph contract_edge(const Graph& g, Edge e);

// Number of spanning trees of the complete graph that solve
// union(g, T) == union(g, t0): the weighted tree enumerator of the quotient
// of union(g, t0) by the components of its extra edges.
BigInt count_union_equivalent_trees(const Graph& g, const SpanningTree& t0);

// |{T in tau(g) : e in T}| via the weighted enumerator of g/e.
BigInt count_trees_containing_edge(const Graph& g, Edge e);

// Number of k-subsets of distinct spanning trees of g whose edge union is
// exactly g. Memoized recursion over connected spanning edge-subgraphs;
// refuses when g has more than max_edges edges. Disconnected g gives 0.
BigInt count_union_representations(const Graph& g, int k, int max_edges = 20);

// Bounds on |Y(union(g,t0), k+1)| / |Y(g, k)| for g the union of the given
// k trees. The upper bound is the exact rational
// min_e tau_e(g') * n^{(n-2)k} / max_sigma prod_j lambda(...), maximized
// over all orderings of the trees. The exact ratio is included when both
// counts fit under the DP cap.
struct UnionRatioBounds {
    BigInt lower;
    BigInt upper_numerator;
    BigInt upper_denominator;
    std::optional<BigInt> exact_numerator;    // |Y(g', k+1)|
    std::optional<BigInt> exact_denominator;  // |Y(g, k)|

    double lower_value() const;
    double upper_value() const;
    std::optional<double> exact_value() const;
};

UnionRatioBounds union_ratio_bounds(const Graph& g, const std::vector<SpanningTree>& trees,
                                    const SpanningTree& t0, int max_edges = 20);

struct BoundsExperimentRow {
    int replicate = 0;
    double lower = 0.0;
    double upper = 0.0;
    std::optional<double> exact;
};

// Random instances for the bound-quality comparison: g is a union of k
// uniform spanning trees, t0 a further uniform tree. Missing exact values
// mark replicates over the DP cap.
std::vector<BoundsExperimentRow> bounds_experiment(int n, int k, int replicates, Rng& rng,
                                                   int max_edges = 20);

void write_bounds_csv(std::ostream& out, const std::vector<BoundsExperimentRow>& rows);

}  // namespace cbggm
