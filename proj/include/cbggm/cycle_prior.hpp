#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "cbggm/cycle_basis.hpp"
#include "cbggm/rng.hpp"

namespace cbggm {

// Thrown when an exact computation would require more than the configured
// number of pattern bits; the computation refuses rather than approximates.
class cap_exceeded : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Prior on the cycle space induced by including each basis cycle
// independently with probability p_k. With all p_k = 0.5 the induced
// distribution over cycle-space members is uniform.
class CycleBasisPrior {
  public:
    CycleBasisPrior(FundamentalCycleBasis basis, double p);
    CycleBasisPrior(FundamentalCycleBasis basis, std::vector<double> probs);

    const FundamentalCycleBasis& basis() const { return basis_; }
    const std::vector<double>& probs() const { return probs_; }
    int vertex_count() const { return basis_.vertex_count(); }
    int size() const { return basis_.size(); }

    Bits sample_coords(Rng& rng) const;
    Graph sample(Rng& rng) const;

    // Sum over coordinates of x_k log p_k + (1-x_k) log(1-p_k); -inf when a
    // selected cycle has p_k = 0 (or an unselected one has p_k = 1).
    double log_mass_of_coords(const Bits& coords) const;

    // nullopt signals that g is not a cycle-space member, which is distinct
    // from a member of mass zero (-inf).
    std::optional<double> log_mass(const Graph& g) const;

  private:
    FundamentalCycleBasis basis_;
    std::vector<double> probs_;
};

// Coefficients of prod_k (1-p_k + p_k x): the distribution of the number of
// included cycles. Direct convolution for small inputs, an FFT-based product
// above 64 factors.
std::vector<double> inclusion_count_pmf(const std::vector<double>& probs);

// Marginal inclusion probability of edge e: the odd-coefficient sum of the
// count polynomial over the basis cycles containing e.
double edge_inclusion_probability(const CycleBasisPrior& prior, Edge e);

// Same quantity through the identity (1 - prod_k (1-2 p_k)) / 2; kept as an
// independent cross-check of the convolution route.
double edge_inclusion_probability_closed_form(const CycleBasisPrior& prior, Edge e);

// Exact joint distribution of the inclusion pattern of the edges at a
// vertex. `edges` lists the incident edges covered by at least one basis
// cycle (ascending by the other endpoint); probs[s] is the probability of
// the pattern whose bit t means edges[t] is included.
struct VertexEdgeDistribution {
    int vertex = 0;
    std::vector<Edge> edges;
    std::vector<double> probs;
};

// Folds each covering cycle into an XOR-indexed distribution over the 2^m
// patterns (the quotient-ring product with exponents reduced modulo 2).
// Refuses when m exceeds max_pattern_bits.
VertexEdgeDistribution vertex_joint_edge_distribution(const CycleBasisPrior& prior, int vertex,
                                                      int max_pattern_bits = 24);

// Closed-form degree distribution of a non-root vertex under the star-tree
// basis with common inclusion probability p.
double star_degree_pmf(int n, double p, int k);

struct EdgeCountBounds {
    int lower;
    int upper;
};

// Bounds on |E| of a graph formed by r distinct star-basis cycles:
// r <= |E| <= r + 2 min(r, floor((n-1)/2)).
EdgeCountBounds edge_count_bounds(int n, int included_cycles);

// r distinct indices from {0, .., basis_size-1} by partial Fisher-Yates.
std::vector<int> sample_distinct_cycles(int basis_size, int r, Rng& rng);

}  // namespace cbggm
