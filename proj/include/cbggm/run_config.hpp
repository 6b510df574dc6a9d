#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "cbggm/gwishart.hpp"
#include "cbggm/mcmc.hpp"

namespace cbggm {

// Effective configuration of a CLI run. A JSON config file mirrors the
// command-line flags; flags given on the command line win. The full
// effective configuration (defaults included) is echoed into summary.json.
struct RunConfig {
    std::string input;
    std::string output_dir = ".";
    std::uint64_t seed = 1;
    double delta = 3.0;
    std::string d_matrix;  // empty: identity rate matrix
    std::string prior = "uniform-star";
    double p = 0.5;
    std::vector<double> p_list;
    std::string tree_support = "star";  // "star" or "spanning" (general mode)
    long iterations = 50000;
    long burn_in = 5000;
    long basis_period = 100;
    long thinning = 10;
    std::string estimator = "exact-laplace";
    int importance_samples = 100000;
    double threshold = 0.95;
    int n = 0;  // synthetic analyses and edge-list inputs
    int k = 2;
    int replicates = 20;
    int union_cap = 20;
    int joint_vertex = -1;
    int joint_cap = 24;
    int chains = 1;
    bool center = true;
    bool standardize = false;
    bool start_empty = false;
};

// Applies the named preset; "paper-sec5" selects the long reference run
// (10^6 iterations, 10^5 burn-in, uniform star prior).
void apply_preset(RunConfig& config, const std::string& preset);

// Fills fields from a JSON object, skipping keys the command line already
// set. Unknown keys are an error.
void apply_json(RunConfig& config, const nlohmann::json& file, const std::set<std::string>& skip);

nlohmann::json to_json(const RunConfig& config);

Estimator parse_estimator(const std::string& name);
PriorMode parse_prior_mode(const std::string& name);
TreePriorSupport parse_tree_support(const std::string& name);

McmcConfig make_mcmc_config(const RunConfig& config);

}  // namespace cbggm
