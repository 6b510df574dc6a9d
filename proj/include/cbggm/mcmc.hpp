#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "cbggm/cycle_prior.hpp"
#include "cbggm/gwishart.hpp"

namespace cbggm {

// uniform_star: uniform prior over cycle-space members with the triangle
// fast path (tree bookkeeping integrated out). general_tree: explicit
// generating tree, cycle inclusion probabilities, and periodic change-of-
// basis moves.
enum class PriorMode { uniform_star, general_tree };

// Support of the tree prior p(T) in general_tree mode; uniform on either
// support.
enum class TreePriorSupport { star_trees, all_spanning_trees };

struct McmcConfig {
    long iterations = 50000;
    long burn_in = 5000;
    long basis_refresh_period = 100;  // general_tree mode: every l-th move
    long thinning = 10;
    std::uint64_t seed = 1;
    PriorMode mode = PriorMode::uniform_star;
    TreePriorSupport tree_prior = TreePriorSupport::star_trees;
    double cycle_prob = 0.5;          // scalar p (uniform_star forces 0.5)
    std::vector<double> cycle_probs;  // optional per-cycle list (general_tree)
    Estimator estimator = Estimator::exact_laplace;
    int importance_samples = 100000;
    bool start_empty = false;

    void validate() const;
};

struct TraceRow {
    long iteration = 0;
    double log_ml = 0.0;
    int edge_count = 0;
};

struct PosteriorSummary {
    int n = 1;
    Eigen::MatrixXd edge_prob;  // symmetric, zero diagonal
    double mean_edge_count = 0.0;
    long samples_kept = 0;
    double acceptance_rate = 0.0;
    long warnings = 0;
    std::vector<TraceRow> trace;
};

// Edges with sample frequency above the cutoff.
Graph threshold_graph(const Eigen::MatrixXd& edge_prob, double cutoff);
// Median probability graph: cutoff 0.5.
Graph median_probability_graph(const Eigen::MatrixXd& edge_prob);

// Edge frequencies and edge-count mean of a retained sample set.
PosteriorSummary posterior_summaries(const std::vector<Graph>& samples);

// Marginal-likelihood evaluations memoized per graph. Estimators are
// deterministic functions of the graph (the importance estimator draws from
// its own stream once per graph), so cached values stay consistent across a
// run.
class MarginalLikelihoodCache {
  public:
    MarginalLikelihoodCache(Dataset data, GWishartParams params, Estimator kind,
                            int importance_samples, std::uint64_t seed);

    double operator()(const Graph& g);
    std::size_t size() const { return cache_.size(); }

  private:
    Dataset data_;
    GWishartParams params_;
    Estimator kind_;
    int importance_samples_;
    Rng rng_;
    std::unordered_map<Bits, double, BitsHash> cache_;
};

// Uniform over the n(n-1)(n-2)/6 three-edge cycles.
Graph sample_uniform_triangle(int n, Rng& rng);

// Metropolis-Hastings sampler over the cycle space. Flip moves XOR one
// basis cycle onto the state (in uniform_star mode a uniformly random
// triangle, the marginal of uniform star root and uniform basis element);
// change-of-basis moves resample the generating tree and keep the graph.
class CycleSpaceSampler {
  public:
    CycleSpaceSampler(McmcConfig config, Dataset data, GWishartParams params);

    const Graph& graph() const { return graph_; }
    const CycleBasisPrior& prior() const { return prior_; }
    const SpanningTree& tree() const { return prior_.basis().tree(); }
    const Bits& coords() const { return coords_; }
    double log_ml() const { return log_ml_; }
    double log_prior() const { return log_prior_; }
    long warnings() const { return warnings_; }

    // The cycle the next flip move would XOR in.
    Graph propose_cycle_flip();

    // One flip move; true when the proposal was accepted. Estimator failures
    // leave the state unchanged and count as warnings.
    bool mh_step();

    // One change-of-basis move (general_tree mode): resample T from p(T),
    // re-decompose the current graph, accept with the prior mass ratio
    // (always 1 under uniform cycle probabilities).
    bool change_basis();

    // Full run: flip moves with a basis refresh every l-th iteration in
    // general_tree mode, retaining thinned post-burn-in samples.
    PosteriorSummary run();

  private:
    struct Proposal {
        Graph cycle;
        std::vector<int> flipped;  // coordinate indices the flip touches
    };

    Proposal make_proposal();
    double delta_log_prior_of_flip(int coord_index) const;
    void audit_coords();

    McmcConfig config_;
    GWishartParams params_;
    MarginalLikelihoodCache cache_;
    Rng rng_;
    CycleBasisPrior prior_;
    Graph graph_;
    Bits coords_;
    double log_ml_ = 0.0;
    double log_prior_ = 0.0;
    long warnings_ = 0;
};

PosteriorSummary run_mcmc(const McmcConfig& config, const Dataset& data,
                          const GWishartParams& params);

// Independent chains with seeds seed, seed+1, ...; summaries merged by
// weighting each chain by its retained sample count.
PosteriorSummary run_mcmc_chains(const McmcConfig& config, const Dataset& data,
                                 const GWishartParams& params, int chains);

struct ExactPosterior {
    std::vector<Graph> members;  // indexed by star-basis coordinate mask
    std::vector<double> probs;
};

// Enumeration oracle for n <= 5: every cycle-space member scored with the
// same estimator as the chain and normalized.
ExactPosterior exact_posterior_small_n(int n, const Dataset& data, const GWishartParams& params,
                                       Estimator kind, int importance_samples = 100000,
                                       std::uint64_t seed = 1);

}  // namespace cbggm
