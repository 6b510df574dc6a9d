#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cbggm/csv.hpp"
#include "cbggm/cycle_prior.hpp"
#include "cbggm/graph.hpp"
#include "cbggm/mcmc.hpp"
#include "cbggm/run_config.hpp"
#include "cbggm/tree_union.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using cbggm::RunConfig;

struct CommonState {
    RunConfig cli_values;  // values as parsed from argv
    std::string config_file;
    std::string preset;
};

// Registers every RunConfig option on a subcommand; option names map to
// config-file keys by s/-/_/.
void add_config_options(CLI::App* cmd, RunConfig& config, CommonState& state) {
    cmd->add_option("--config", state.config_file, "JSON config file mirroring the flags");
    cmd->add_option("--preset", state.preset, "named preset (paper-sec5)");
    cmd->add_option("--input", config.input, "input file");
    cmd->add_option("--output-dir", config.output_dir, "artifact directory");
    cmd->add_option("--seed", config.seed, "rng seed");
    cmd->add_option("--delta", config.delta, "G-Wishart degrees of freedom (> 2)");
    cmd->add_option("--d-matrix", config.d_matrix, "rate matrix CSV (default identity)");
    cmd->add_option("--prior", config.prior, "uniform-star or tree");
    cmd->add_option("--p", config.p, "cycle inclusion probability");
    cmd->add_option("--p-list", config.p_list, "per-cycle inclusion probabilities");
    cmd->add_option("--tree-support", config.tree_support, "star or spanning (tree prior)");
    cmd->add_option("--iterations", config.iterations, "MCMC iterations");
    cmd->add_option("--burn-in", config.burn_in, "burn-in iterations");
    cmd->add_option("--basis-period", config.basis_period, "iterations between basis moves");
    cmd->add_option("--thin", config.thinning, "thinning stride");
    cmd->add_option("--estimator", config.estimator, "exact-laplace, laplace or oracle");
    cmd->add_option("--importance-samples", config.importance_samples,
                    "samples per oracle estimate");
    cmd->add_option("--threshold", config.threshold, "inclusion cutoff for the threshold graph");
    cmd->add_option("--n", config.n, "vertex count for synthetic analyses / edge lists");
    cmd->add_option("--k", config.k, "spanning tree count");
    cmd->add_option("--replicates", config.replicates, "experiment replicates");
    cmd->add_option("--union-cap", config.union_cap, "edge cap for the union-count recursion");
    cmd->add_option("--joint-vertex", config.joint_vertex,
                    "vertex for the joint edge distribution report");
    cmd->add_option("--joint-cap", config.joint_cap, "pattern-bit cap for the joint report");
    cmd->add_option("--chains", config.chains, "parallel MCMC chains");
    cmd->add_flag("--center,!--no-center", config.center, "center data columns");
    cmd->add_flag("--standardize", config.standardize, "scale data columns to unit sd");
    cmd->add_flag("--start-empty", config.start_empty, "start the chain at the empty graph");
}

// defaults -> preset -> config file -> explicit flags.
RunConfig resolve_config(CLI::App* cmd, const CommonState& state) {
    RunConfig final_config;
    if (!state.preset.empty()) cbggm::apply_preset(final_config, state.preset);
    if (!state.config_file.empty()) {
        std::ifstream in(state.config_file);
        if (!in) throw std::runtime_error("cannot open config file '" + state.config_file + "'");
        nlohmann::json file_json;
        in >> file_json;
        cbggm::apply_json(final_config, file_json, {});
    }
    // Explicit flags win: re-apply just the provided keys on top.
    const nlohmann::json cli_json = cbggm::to_json(state.cli_values);
    nlohmann::json provided;
    for (const CLI::Option* opt : cmd->get_options()) {
        if (opt->count() == 0) continue;
        std::string key = opt->get_name();
        if (key.rfind("--", 0) == 0) key = key.substr(2);
        for (char& c : key) {
            if (c == '-') c = '_';
        }
        if (key == "thin") key = "thinning";
        if (cli_json.contains(key)) provided[key] = cli_json.at(key);
    }
    cbggm::apply_json(final_config, provided, {});
    return final_config;
}

Eigen::MatrixXd load_rate_matrix(const RunConfig& config, int n) {
    if (config.d_matrix.empty()) return Eigen::MatrixXd::Identity(n, n);
    std::ifstream in(config.d_matrix);
    if (!in) throw std::runtime_error("cannot open rate matrix '" + config.d_matrix + "'");
    Eigen::MatrixXd rate = cbggm::read_matrix_csv(in);
    if (rate.rows() != n)
        throw std::runtime_error("rate matrix dimension " + std::to_string(rate.rows()) +
                                 " does not match n = " + std::to_string(n));
    return rate;
}

cbggm::Graph load_graph(const RunConfig& config) {
    if (config.input.empty()) throw std::invalid_argument("--input is required");
    std::ifstream in(config.input);
    if (!in) throw std::runtime_error("cannot open input '" + config.input + "'");
    if (config.n > 0) return cbggm::read_edge_list(in, config.n);
    return cbggm::read_adjacency_csv(in);
}

std::ofstream open_artifact(const RunConfig& config, const std::string& name) {
    std::filesystem::create_directories(config.output_dir);
    const std::filesystem::path path = std::filesystem::path(config.output_dir) / name;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write artifact '" + path.string() + "'");
    return out;
}

void write_summary(const RunConfig& config, const std::string& command,
                   std::chrono::steady_clock::time_point started, nlohmann::json extra) {
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    nlohmann::json summary{{"command", command},
                           {"version", kVersion},
                           {"seed", config.seed},
                           {"wall_time_seconds", seconds},
                           {"config", cbggm::to_json(config)}};
    summary.update(extra);
    auto out = open_artifact(config, "summary.json");
    out << summary.dump(2) << '\n';
}

cbggm::CycleBasisPrior build_prior(const RunConfig& config, cbggm::Rng& rng) {
    if (config.n < 2) throw std::invalid_argument("prior-summary needs --n >= 2");
    const cbggm::PriorMode mode = cbggm::parse_prior_mode(config.prior);
    cbggm::SpanningTree tree = mode == cbggm::PriorMode::uniform_star
                                   ? cbggm::star_tree(config.n, 0)
                                   : cbggm::random_spanning_tree(config.n, rng);
    cbggm::FundamentalCycleBasis basis(std::move(tree));
    if (!config.p_list.empty()) return cbggm::CycleBasisPrior(std::move(basis), config.p_list);
    return cbggm::CycleBasisPrior(std::move(basis), config.p);
}

int run_prior_summary(const RunConfig& config) {
    const auto started = std::chrono::steady_clock::now();
    cbggm::Rng rng = cbggm::make_rng(config.seed);
    const cbggm::CycleBasisPrior prior = build_prior(config, rng);
    const int n = config.n;

    {
        Eigen::MatrixXd probs = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                probs(i, j) = probs(j, i) = edge_inclusion_probability(prior, cbggm::Edge{i, j});
        auto out = open_artifact(config, "prior_edge_probs.csv");
        cbggm::write_matrix_csv(out, probs);
    }

    const bool scalar_star = config.p_list.empty() && config.prior == "uniform-star";
    if (scalar_star) {
        auto out = open_artifact(config, "degree_pmf.csv");
        out << "degree,probability\n";
        std::ostringstream buf;
        buf.precision(17);
        for (int k = 0; k < n; ++k)
            buf << k << ',' << cbggm::star_degree_pmf(n, config.p, k) << '\n';
        out << buf.str();
    }

    {
        auto out = open_artifact(config, "edge_count_bounds.csv");
        out << "included_cycles,lower,upper\n";
        for (int r = 0; r <= prior.size(); ++r) {
            const auto bounds = cbggm::edge_count_bounds(n, r);
            out << r << ',' << bounds.lower << ',' << bounds.upper << '\n';
        }
    }

    nlohmann::json extra{{"basis_size", prior.size()}, {"degree_pmf_emitted", scalar_star}};
    if (config.joint_vertex >= 0) {
        const cbggm::VertexEdgeDistribution joint =
            cbggm::vertex_joint_edge_distribution(prior, config.joint_vertex, config.joint_cap);
        auto out = open_artifact(
            config, "joint_vertex_" + std::to_string(config.joint_vertex) + ".csv");
        for (std::size_t t = 0; t < joint.edges.size(); ++t)
            out << "e_" << joint.edges[t].i << '_' << joint.edges[t].j << ',';
        out << "probability\n";
        std::ostringstream buf;
        buf.precision(17);
        for (std::size_t pattern = 0; pattern < joint.probs.size(); ++pattern) {
            for (std::size_t t = 0; t < joint.edges.size(); ++t)
                buf << ((pattern >> t) & 1) << ',';
            buf << joint.probs[pattern] << '\n';
        }
        out << buf.str();
        extra["joint_vertex_edges"] = joint.edges.size();
    }

    write_summary(config, "prior-summary", started, extra);
    return 0;
}

int run_mcmc_command(const RunConfig& config) {
    const auto started = std::chrono::steady_clock::now();
    if (config.input.empty()) throw std::invalid_argument("--input is required");
    std::ifstream in(config.input);
    if (!in) throw std::runtime_error("cannot open input '" + config.input + "'");
    const cbggm::Dataset data = cbggm::ingest_csv(in, config.center, config.standardize);
    const int n = data.variable_count();

    const cbggm::GWishartParams params(config.delta, load_rate_matrix(config, n));
    const cbggm::McmcConfig mcmc_config = cbggm::make_mcmc_config(config);
    const cbggm::PosteriorSummary summary =
        cbggm::run_mcmc_chains(mcmc_config, data, params, config.chains);

    {
        auto out = open_artifact(config, "edge_probs.csv");
        cbggm::write_matrix_csv(out, summary.edge_prob);
    }
    {
        auto out = open_artifact(config, "median_graph.csv");
        cbggm::write_adjacency_csv(out, cbggm::median_probability_graph(summary.edge_prob));
    }
    {
        auto out = open_artifact(config, "threshold_graph.csv");
        cbggm::write_adjacency_csv(out,
                                   cbggm::threshold_graph(summary.edge_prob, config.threshold));
    }
    {
        auto out = open_artifact(config, "trace.csv");
        out << "iteration,log_ml,edge_count\n";
        std::ostringstream buf;
        buf.precision(17);
        for (const cbggm::TraceRow& row : summary.trace)
            buf << row.iteration << ',' << row.log_ml << ',' << row.edge_count << '\n';
        out << buf.str();
    }

    write_summary(config, "mcmc-run", started,
                  nlohmann::json{{"observations", data.num_observations},
                                 {"variables", n},
                                 {"acceptance_rate", summary.acceptance_rate},
                                 {"samples_kept", summary.samples_kept},
                                 {"mean_edge_count", summary.mean_edge_count},
                                 {"warnings", summary.warnings}});
    return 0;
}

int run_project(const RunConfig& config) {
    const auto started = std::chrono::steady_clock::now();
    const cbggm::Graph g = load_graph(config);
    const cbggm::CycleSpaceProjection projection = cbggm::project_to_cycle_space(g);
    {
        auto out = open_artifact(config, "projected.csv");
        cbggm::write_adjacency_csv(out, projection.member);
    }
    {
        auto out = open_artifact(config, "projected_edges.txt");
        cbggm::write_edge_list(out, projection.member);
    }
    write_summary(config, "project", started,
                  nlohmann::json{{"vertices", g.vertex_count()},
                                 {"input_edges", g.edge_count()},
                                 {"flip_distance", projection.distance},
                                 {"already_member", projection.distance == 0}});
    return 0;
}

int run_tree_union(const RunConfig& config, const std::string& t0_path) {
    const auto started = std::chrono::steady_clock::now();
    const cbggm::Graph g = load_graph(config);
    if (!g.connected())
        throw std::invalid_argument("tree-union: the input graph must be connected");

    nlohmann::json extra{{"vertices", g.vertex_count()},
                         {"edges", g.edge_count()},
                         {"k", config.k}};
    extra["spanning_trees"] = cbggm::count_spanning_trees(g).str();
    try {
        extra["union_representations"] =
            cbggm::count_union_representations(g, config.k, config.union_cap).str();
    } catch (const cbggm::cap_exceeded& err) {
        extra["union_representations_error"] = err.what();
    }

    {
        auto out = open_artifact(config, "trees_containing_edge.csv");
        out << "i,j,count\n";
        g.for_each_edge([&](cbggm::Edge e) {
            out << e.i << ',' << e.j << ',' << cbggm::count_trees_containing_edge(g, e).str()
                << '\n';
        });
    }

    if (!t0_path.empty()) {
        std::ifstream t0_in(t0_path);
        if (!t0_in) throw std::runtime_error("cannot open tree file '" + t0_path + "'");
        const cbggm::SpanningTree t0 = cbggm::read_tree_edge_list(t0_in, g.vertex_count());
        extra["union_equivalent_trees"] = cbggm::count_union_equivalent_trees(g, t0).str();
    }

    write_summary(config, "tree-union", started, extra);
    return 0;
}

int run_bounds_experiment(const RunConfig& config) {
    const auto started = std::chrono::steady_clock::now();
    if (config.n < 3) throw std::invalid_argument("bounds-experiment needs --n >= 3");
    if (config.k < 1 || config.k > 8)
        throw std::invalid_argument("bounds-experiment needs 1 <= --k <= 8");
    cbggm::Rng rng = cbggm::make_rng(config.seed);
    const auto rows =
        cbggm::bounds_experiment(config.n, config.k, config.replicates, rng, config.union_cap);
    {
        auto out = open_artifact(config, "bounds.csv");
        cbggm::write_bounds_csv(out, rows);
    }
    int missing = 0;
    for (const auto& row : rows)
        if (!row.exact) ++missing;
    write_summary(config, "bounds-experiment", started,
                  nlohmann::json{{"replicates", config.replicates},
                                 {"n", config.n},
                                 {"k", config.k},
                                 {"missing_exact_values", missing}});
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayesian Gaussian graphical model inference on the cycle space"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    struct Sub {
        CLI::App* cmd = nullptr;
        CommonState state;
    };
    std::map<std::string, Sub> subs;
    subs["prior-summary"].cmd =
        app.add_subcommand("prior-summary", "analytic reports for a cycle-basis prior");
    subs["mcmc-run"].cmd = app.add_subcommand("mcmc-run", "posterior sampling from a data CSV");
    subs["project"].cmd = app.add_subcommand("project", "nearest cycle-space member of a graph");
    subs["tree-union"].cmd =
        app.add_subcommand("tree-union", "spanning-tree union counts for a graph");
    subs["bounds-experiment"].cmd =
        app.add_subcommand("bounds-experiment", "ratio-bound quality table");

    std::string t0_path;
    for (auto& [name, sub] : subs) add_config_options(sub.cmd, sub.state.cli_values, sub.state);
    subs["tree-union"].cmd->add_option("--t0", t0_path,
                                       "spanning tree edge list for the union count");

    CLI11_PARSE(app, argc, argv);

    try {
        for (auto& [name, sub] : subs) {
            if (!sub.cmd->parsed()) continue;
            const RunConfig config = resolve_config(sub.cmd, sub.state);
            if (name == "prior-summary") return run_prior_summary(config);
            if (name == "mcmc-run") return run_mcmc_command(config);
            if (name == "project") return run_project(config);
            if (name == "tree-union") return run_tree_union(config, t0_path);
            if (name == "bounds-experiment") return run_bounds_experiment(config);
        }
    } catch (const cbggm::cap_exceeded& err) {
        std::cerr << "error (cap exceeded): " << err.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& err) {
        std::cerr << "error (invalid argument): " << err.what() << '\n';
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 4;
    }
    return 0;
}
