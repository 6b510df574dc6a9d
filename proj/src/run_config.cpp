#include "cbggm/run_config.hpp"

#include <nlohmann/json.hpp>

namespace cbggm {

namespace {

template <class T>
void pick(const nlohmann::json& file, const std::set<std::string>& skip, const char* key,
          T& field) {
    if (!file.contains(key) || skip.contains(key)) return;
    field = file.at(key).get<T>();
}

}  // namespace

void apply_preset(RunConfig& config, const std::string& preset) {
    if (preset == "paper-sec5") {
        config.iterations = 1000000;
        config.burn_in = 100000;
        config.thinning = 10;
        config.prior = "uniform-star";
        config.p = 0.5;
        config.estimator = "exact-laplace";
        return;
    }
    throw std::invalid_argument("unknown preset '" + preset + "'");
}

void apply_json(RunConfig& config, const nlohmann::json& file,
                const std::set<std::string>& skip) {
    static const std::set<std::string> known = {
        "input",      "output_dir",   "seed",       "delta",        "d_matrix",
        "prior",      "p",            "p_list",     "tree_support", "iterations",
        "burn_in",    "basis_period", "thinning",   "estimator",    "importance_samples",
        "threshold",  "n",            "k",          "replicates",   "union_cap",
        "joint_vertex", "joint_cap",  "chains",     "center",       "standardize",
        "start_empty"};
    for (const auto& [key, value] : file.items()) {
        if (!known.contains(key))
            throw std::invalid_argument("config file: unknown key '" + key + "'");
    }
    pick(file, skip, "input", config.input);
    pick(file, skip, "output_dir", config.output_dir);
    pick(file, skip, "seed", config.seed);
    pick(file, skip, "delta", config.delta);
    pick(file, skip, "d_matrix", config.d_matrix);
    pick(file, skip, "prior", config.prior);
    pick(file, skip, "p", config.p);
    pick(file, skip, "p_list", config.p_list);
    pick(file, skip, "tree_support", config.tree_support);
    pick(file, skip, "iterations", config.iterations);
    pick(file, skip, "burn_in", config.burn_in);
    pick(file, skip, "basis_period", config.basis_period);
    pick(file, skip, "thinning", config.thinning);
    pick(file, skip, "estimator", config.estimator);
    pick(file, skip, "importance_samples", config.importance_samples);
    pick(file, skip, "threshold", config.threshold);
    pick(file, skip, "n", config.n);
    pick(file, skip, "k", config.k);
    pick(file, skip, "replicates", config.replicates);
    pick(file, skip, "union_cap", config.union_cap);
    pick(file, skip, "joint_vertex", config.joint_vertex);
    pick(file, skip, "joint_cap", config.joint_cap);
    pick(file, skip, "chains", config.chains);
    pick(file, skip, "center", config.center);
    pick(file, skip, "standardize", config.standardize);
    pick(file, skip, "start_empty", config.start_empty);
}

nlohmann::json to_json(const RunConfig& config) {
    return nlohmann::json{{"input", config.input},
                          {"output_dir", config.output_dir},
                          {"seed", config.seed},
                          {"delta", config.delta},
                          {"d_matrix", config.d_matrix},
                          {"prior", config.prior},
                          {"p", config.p},
                          {"p_list", config.p_list},
                          {"tree_support", config.tree_support},
                          {"iterations", config.iterations},
                          {"burn_in", config.burn_in},
                          {"basis_period", config.basis_period},
                          {"thinning", config.thinning},
                          {"estimator", config.estimator},
                          {"importance_samples", config.importance_samples},
                          {"threshold", config.threshold},
                          {"n", config.n},
                          {"k", config.k},
                          {"replicates", config.replicates},
                          {"union_cap", config.union_cap},
                          {"joint_vertex", config.joint_vertex},
                          {"joint_cap", config.joint_cap},
                          {"chains", config.chains},
                          {"center", config.center},
                          {"standardize", config.standardize},
                          {"start_empty", config.start_empty}};
}

Estimator parse_estimator(const std::string& name) {
    if (name == "exact-laplace") return Estimator::exact_laplace;
    if (name == "laplace") return Estimator::laplace;
    if (name == "oracle") return Estimator::importance;
    throw std::invalid_argument("unknown estimator '" + name +
                                "' (expected exact-laplace, laplace or oracle)");
}

PriorMode parse_prior_mode(const std::string& name) {
    if (name == "uniform-star") return PriorMode::uniform_star;
    if (name == "tree") return PriorMode::general_tree;
    throw std::invalid_argument("unknown prior '" + name + "' (expected uniform-star or tree)");
}

TreePriorSupport parse_tree_support(const std::string& name) {
    if (name == "star") return TreePriorSupport::star_trees;
    if (name == "spanning") return TreePriorSupport::all_spanning_trees;
    throw std::invalid_argument("unknown tree support '" + name +
                                "' (expected star or spanning)");
}

McmcConfig make_mcmc_config(const RunConfig& config) {
    McmcConfig mc;
    mc.iterations = config.iterations;
    mc.burn_in = config.burn_in;
    mc.basis_refresh_period = config.basis_period;
    mc.thinning = config.thinning;
    mc.seed = config.seed;
    mc.mode = parse_prior_mode(config.prior);
    mc.tree_prior = parse_tree_support(config.tree_support);
    mc.cycle_prob = config.p;
    mc.cycle_probs = config.p_list;
    mc.estimator = parse_estimator(config.estimator);
    mc.importance_samples = config.importance_samples;
    mc.start_empty = config.start_empty;
    mc.validate();
    return mc;
}

}  // namespace cbggm
