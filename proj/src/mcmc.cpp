#include "cbggm/mcmc.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <iostream>

#include <boost/random/uniform_01.hpp>
#include <boost/random/uniform_int_distribution.hpp>

namespace cbggm {

namespace {

constexpr std::uint64_t kCacheSeedSalt = 0xd1b54a32d192ed03ull;
constexpr long kAuditPeriod = 1000;

SpanningTree sample_tree(int n, TreePriorSupport support, Rng& rng) {
    if (support == TreePriorSupport::star_trees) {
        boost::random::uniform_int_distribution<int> pick(0, n - 1);
        return star_tree(n, pick(rng));
    }
    return random_spanning_tree(n, rng);
}

std::vector<double> effective_probs(const McmcConfig& config, int basis_size) {
    if (config.mode == PriorMode::uniform_star) return std::vector<double>(basis_size, 0.5);
    if (!config.cycle_probs.empty()) {
        if (static_cast<int>(config.cycle_probs.size()) != basis_size)
            throw std::invalid_argument("McmcConfig: cycle_probs length must equal the basis size");
        return config.cycle_probs;
    }
    return std::vector<double>(basis_size, config.cycle_prob);
}

}  // namespace

void McmcConfig::validate() const {
    if (iterations < 1) throw std::invalid_argument("McmcConfig: need iterations >= 1");
    if (burn_in < 0 || burn_in >= iterations)
        throw std::invalid_argument("McmcConfig: need 0 <= burn_in < iterations");
    if (basis_refresh_period < 1) throw std::invalid_argument("McmcConfig: need l >= 1");
    if (thinning < 1) throw std::invalid_argument("McmcConfig: need thinning >= 1");
    if (!(cycle_prob >= 0.0 && cycle_prob <= 1.0))
        throw std::invalid_argument("McmcConfig: cycle_prob must lie in [0, 1]");
}

Graph threshold_graph(const Eigen::MatrixXd& edge_prob, double cutoff) {
    const int n = static_cast<int>(edge_prob.rows());
    Graph g(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (edge_prob(i, j) > cutoff) g.set_edge(i, j);
    return g;
}

Graph median_probability_graph(const Eigen::MatrixXd& edge_prob) {
    return threshold_graph(edge_prob, 0.5);
}

PosteriorSummary posterior_summaries(const std::vector<Graph>& samples) {
    if (samples.empty()) throw std::invalid_argument("posterior_summaries: no samples");
    const int n = samples.front().vertex_count();
    PosteriorSummary summary;
    summary.n = n;
    summary.edge_prob = Eigen::MatrixXd::Zero(n, n);
    double edge_total = 0.0;
    for (const Graph& g : samples) {
        if (g.vertex_count() != n)
            throw std::invalid_argument("posterior_summaries: mixed vertex counts");
        g.for_each_edge([&](Edge e) {
            summary.edge_prob(e.i, e.j) += 1.0;
            summary.edge_prob(e.j, e.i) += 1.0;
        });
        edge_total += g.edge_count();
    }
    summary.edge_prob /= static_cast<double>(samples.size());
    summary.mean_edge_count = edge_total / static_cast<double>(samples.size());
    summary.samples_kept = static_cast<long>(samples.size());
    return summary;
}

MarginalLikelihoodCache::MarginalLikelihoodCache(Dataset data, GWishartParams params,
                                                 Estimator kind, int importance_samples,
                                                 std::uint64_t seed)
    : data_(std::move(data)),
      params_(std::move(params)),
      kind_(kind),
      importance_samples_(importance_samples),
      rng_(make_rng(seed)) {}

double MarginalLikelihoodCache::operator()(const Graph& g) {
    const auto it = cache_.find(g.bits());
    if (it != cache_.end()) return it->second;
    EstimatorOptions options;
    options.kind = kind_;
    options.importance_samples = importance_samples_;
    options.rng = &rng_;
    const double value = log_marginal_likelihood(g, data_, params_, options);
    cache_.emplace(g.bits(), value);
    return value;
}

Graph sample_uniform_triangle(int n, Rng& rng) {
    if (n < 3) throw std::invalid_argument("sample_uniform_triangle: need n >= 3");
    boost::random::uniform_int_distribution<int> first(0, n - 1);
    boost::random::uniform_int_distribution<int> second(0, n - 2);
    boost::random::uniform_int_distribution<int> third(0, n - 3);
    const int a = first(rng);
    int b = second(rng);
    if (b >= a) ++b;
    int c = third(rng);
    if (c >= std::min(a, b)) ++c;
    if (c >= std::max(a, b)) ++c;
    Graph triangle(n);
    triangle.set_edge(Edge{a, b});
    triangle.set_edge(Edge{b, c});
    triangle.set_edge(Edge{a, c});
    return triangle;
}

CycleSpaceSampler::CycleSpaceSampler(McmcConfig config, Dataset data, GWishartParams params)
    : config_(std::move(config)),
      params_(params),
      cache_(std::move(data), std::move(params), config_.estimator, config_.importance_samples,
             config_.seed ^ kCacheSeedSalt),
      rng_(make_rng(config_.seed)),
      prior_([&] {
          config_.validate();
          const int n = params_.rate.rows();
          if (n < 3) throw std::invalid_argument("CycleSpaceSampler: need n >= 3");
          // In uniform_star mode the tree prior is integrated out of the
          // proposal; coordinates are tracked against the root-0 star basis.
          const SpanningTree tree = config_.mode == PriorMode::uniform_star
                                        ? star_tree(n, 0)
                                        : sample_tree(n, config_.tree_prior, rng_);
          FundamentalCycleBasis basis(tree);
          std::vector<double> probs = effective_probs(config_, basis.size());
          return CycleBasisPrior(std::move(basis), std::move(probs));
      }()),
      graph_(prior_.vertex_count()),
      coords_(prior_.size()) {
    if (!config_.start_empty) {
        coords_ = prior_.sample_coords(rng_);
        graph_ = prior_.basis().reconstruct(coords_);
    }
    log_ml_ = cache_(graph_);
    log_prior_ = prior_.log_mass_of_coords(coords_);
}

double CycleSpaceSampler::delta_log_prior_of_flip(int coord_index) const {
    const double p = prior_.probs()[coord_index];
    return coords_.test(coord_index) ? std::log1p(-p) - std::log(p)
                                     : std::log(p) - std::log1p(-p);
}

CycleSpaceSampler::Proposal CycleSpaceSampler::make_proposal() {
    if (config_.mode == PriorMode::uniform_star) {
        // A triangle through the root is one basis element; any other
        // triangle is the XOR of the three root triangles over its edges.
        Graph triangle = sample_uniform_triangle(prior_.vertex_count(), rng_);
        std::vector<int> flipped;
        triangle.for_each_edge([&](Edge e) {
            const int k = prior_.basis().cycle_of_generator(e);
            if (k >= 0) flipped.push_back(k);
        });
        return Proposal{std::move(triangle), std::move(flipped)};
    }
    boost::random::uniform_int_distribution<int> pick(0, prior_.size() - 1);
    const int k = pick(rng_);
    return Proposal{prior_.basis().cycle(k), {k}};
}

Graph CycleSpaceSampler::propose_cycle_flip() { return make_proposal().cycle; }

bool CycleSpaceSampler::mh_step() {
    const Proposal move = make_proposal();
    const Graph proposal = graph_ ^ move.cycle;

    double proposal_log_ml = 0.0;
    try {
        proposal_log_ml = cache_(proposal);
    } catch (const std::exception& err) {
        ++warnings_;
        std::cerr << "mh_step: estimator failure, step skipped: " << err.what() << '\n';
        return false;
    }

    double delta_prior = 0.0;
    for (int k : move.flipped) delta_prior += delta_log_prior_of_flip(k);

    const double log_alpha = (proposal_log_ml - log_ml_) + delta_prior;
    boost::random::uniform_01<double> unif;
    if (std::log(unif(rng_)) > log_alpha) return false;

    graph_ = proposal;
    log_ml_ = proposal_log_ml;
    for (int k : move.flipped) coords_.flip(k);
    log_prior_ += delta_prior;
    return true;
}

bool CycleSpaceSampler::change_basis() {
    if (config_.mode != PriorMode::general_tree)
        throw std::logic_error("change_basis: requires general_tree mode");
    const int n = prior_.vertex_count();
    FundamentalCycleBasis basis(sample_tree(n, config_.tree_prior, rng_));
    std::vector<double> probs = effective_probs(config_, basis.size());
    CycleBasisPrior candidate(std::move(basis), std::move(probs));

    const std::optional<Bits> new_coords = candidate.basis().decompose(graph_);
    if (!new_coords)
        throw std::logic_error("change_basis: cycle-space member failed to decompose");
    const double new_log_prior = candidate.log_mass_of_coords(*new_coords);

    // p(T') / p(T) = 1 on a uniform support, so the ratio reduces to the
    // prior masses of the same graph under the two bases.
    const double log_alpha = new_log_prior - log_prior_;
    boost::random::uniform_01<double> unif;
    if (std::log(unif(rng_)) > log_alpha) return false;

    prior_ = std::move(candidate);
    coords_ = *new_coords;
    log_prior_ = new_log_prior;
    return true;
}

void CycleSpaceSampler::audit_coords() {
    if (prior_.basis().reconstruct(coords_) != graph_) {
        ++warnings_;
        std::cerr << "mcmc: incremental coordinates diverged from the state; resynchronized\n";
        const std::optional<Bits> fixed = prior_.basis().decompose(graph_);
        if (fixed) coords_ = *fixed;
    }
}

PosteriorSummary CycleSpaceSampler::run() {
    std::vector<Graph> samples;
    std::vector<TraceRow> trace;
    const long expected =
        (config_.iterations - config_.burn_in + config_.thinning - 1) / config_.thinning;
    samples.reserve(expected);
    trace.reserve(expected);

    long accepted = 0;
    for (long j = 1; j <= config_.iterations; ++j) {
        const bool basis_move =
            config_.mode == PriorMode::general_tree && j % config_.basis_refresh_period == 0;
        accepted += basis_move ? change_basis() : mh_step();

        if (j % kAuditPeriod == 0) audit_coords();

        if (j > config_.burn_in && (j - config_.burn_in) % config_.thinning == 0) {
            if (!is_cycle_space_member(graph_)) {
                ++warnings_;
                std::cerr << "mcmc: retained state left the cycle space\n";
            }
            samples.push_back(graph_);
            trace.push_back(TraceRow{j, log_ml_, graph_.edge_count()});
        }
    }

    PosteriorSummary summary = posterior_summaries(samples);
    summary.acceptance_rate = static_cast<double>(accepted) / config_.iterations;
    summary.warnings = warnings_;
    summary.trace = std::move(trace);
    return summary;
}

PosteriorSummary run_mcmc(const McmcConfig& config, const Dataset& data,
                          const GWishartParams& params) {
    CycleSpaceSampler sampler(config, data, params);
    return sampler.run();
}

PosteriorSummary run_mcmc_chains(const McmcConfig& config, const Dataset& data,
                                 const GWishartParams& params, int chains) {
    if (chains < 1) throw std::invalid_argument("run_mcmc_chains: need chains >= 1");
    if (chains == 1) return run_mcmc(config, data, params);

    std::vector<std::future<PosteriorSummary>> futures;
    futures.reserve(chains);
    for (int c = 0; c < chains; ++c) {
        McmcConfig chain_config = config;
        chain_config.seed = config.seed + static_cast<std::uint64_t>(c);
        futures.push_back(std::async(std::launch::async, [chain_config, &data, &params] {
            return run_mcmc(chain_config, data, params);
        }));
    }

    PosteriorSummary merged;
    double weight_total = 0.0;
    for (auto& future : futures) {
        PosteriorSummary part = future.get();
        const double w = static_cast<double>(part.samples_kept);
        if (merged.samples_kept == 0) {
            merged = part;
            merged.edge_prob *= w;
            merged.mean_edge_count *= w;
            merged.acceptance_rate *= w;
        } else {
            merged.edge_prob += w * part.edge_prob;
            merged.mean_edge_count += w * part.mean_edge_count;
            merged.acceptance_rate += w * part.acceptance_rate;
            merged.samples_kept += part.samples_kept;
            merged.warnings += part.warnings;
            merged.trace.insert(merged.trace.end(), part.trace.begin(), part.trace.end());
        }
        weight_total += w;
    }
    merged.edge_prob /= weight_total;
    merged.mean_edge_count /= weight_total;
    merged.acceptance_rate /= weight_total;
    return merged;
}

ExactPosterior exact_posterior_small_n(int n, const Dataset& data, const GWishartParams& params,
                                       Estimator kind, int importance_samples,
                                       std::uint64_t seed) {
    if (n < 3 || n > 5) throw std::invalid_argument("exact_posterior_small_n: need 3 <= n <= 5");
    const FundamentalCycleBasis basis(star_tree(n, 0));
    const int r = basis.size();
    Rng rng = make_rng(seed ^ kCacheSeedSalt);

    ExactPosterior out;
    const std::size_t count = std::size_t{1} << r;
    out.members.reserve(count);
    std::vector<double> log_scores;
    log_scores.reserve(count);
    for (std::size_t mask = 0; mask < count; ++mask) {
        Bits coords(r);
        for (int k = 0; k < r; ++k)
            if (mask & (std::size_t{1} << k)) coords.set(k);
        Graph member = basis.reconstruct(coords);
        EstimatorOptions options;
        options.kind = kind;
        options.importance_samples = importance_samples;
        options.rng = &rng;
        log_scores.push_back(log_marginal_likelihood(member, data, params, options));
        out.members.push_back(std::move(member));
    }

    const double shift = *std::max_element(log_scores.begin(), log_scores.end());
    double total = 0.0;
    for (double ls : log_scores) total += std::exp(ls - shift);
    out.probs.resize(count);
    for (std::size_t mask = 0; mask < count; ++mask)
        out.probs[mask] = std::exp(log_scores[mask] - shift) / total;
    return out;
}

}  // namespace cbggm
