#include "cbggm/cycle_prior.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include <boost/random/uniform_01.hpp>
#include <boost/random/uniform_int_distribution.hpp>

namespace cbggm {

namespace {

void validate_probability(double p) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("cycle inclusion probability must lie in [0, 1]");
}

void fft(std::vector<std::complex<double>>& a, bool invert) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = 2.0 * std::numbers::pi / static_cast<double>(len) * (invert ? -1.0 : 1.0);
        const std::complex<double> step(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const auto u = a[i + k];
                const auto v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= step;
            }
        }
    }
    if (invert) {
        for (auto& x : a) x /= static_cast<double>(n);
    }
}

// Probabilities of the cycles that contain the given edge.
std::vector<double> covering_probs(const CycleBasisPrior& prior, Edge e) {
    if (e.j >= prior.vertex_count())
        throw std::invalid_argument("edge_inclusion_probability: vertex out of range");
    std::vector<double> probs;
    for (int k = 0; k < prior.size(); ++k) {
        if (prior.basis().cycle(k).has_edge(e)) probs.push_back(prior.probs()[k]);
    }
    return probs;
}

}  // namespace

CycleBasisPrior::CycleBasisPrior(FundamentalCycleBasis basis, double p)
    : basis_(std::move(basis)), probs_(basis_.size(), p) {
    validate_probability(p);
}

CycleBasisPrior::CycleBasisPrior(FundamentalCycleBasis basis, std::vector<double> probs)
    : basis_(std::move(basis)), probs_(std::move(probs)) {
    if (static_cast<int>(probs_.size()) != basis_.size())
        throw std::invalid_argument("CycleBasisPrior: need one probability per basis cycle");
    for (double p : probs_) validate_probability(p);
}

Bits CycleBasisPrior::sample_coords(Rng& rng) const {
    boost::random::uniform_01<double> unif;
    Bits coords(size());
    for (int k = 0; k < size(); ++k) {
        if (unif(rng) < probs_[k]) coords.set(k);
    }
    return coords;
}

Graph CycleBasisPrior::sample(Rng& rng) const { return basis_.reconstruct(sample_coords(rng)); }

double CycleBasisPrior::log_mass_of_coords(const Bits& coords) const {
    if (static_cast<int>(coords.size()) != size())
        throw std::invalid_argument("log_mass_of_coords: coordinate length mismatch");
    double total = 0.0;
    for (int k = 0; k < size(); ++k) {
        // log(0) = -inf signals a forbidden configuration without throwing.
        total += coords.test(k) ? std::log(probs_[k]) : std::log1p(-probs_[k]);
    }
    return total;
}

std::optional<double> CycleBasisPrior::log_mass(const Graph& g) const {
    const std::optional<Bits> coords = basis_.decompose(g);
    if (!coords) return std::nullopt;
    return log_mass_of_coords(*coords);
}

std::vector<double> inclusion_count_pmf(const std::vector<double>& probs) {
    for (double p : probs) validate_probability(p);
    const std::size_t r = probs.size();
    if (r <= 64) {
        std::vector<double> coeff{1.0};
        coeff.reserve(r + 1);
        for (double p : probs) {
            coeff.push_back(0.0);
            for (std::size_t k = coeff.size() - 1; k >= 1; --k)
                coeff[k] = coeff[k] * (1.0 - p) + coeff[k - 1] * p;
            coeff[0] *= 1.0 - p;
        }
        return coeff;
    }

    // Large products: evaluate prod_k (1-p_k + p_k w^j) at the roots of unity
    // and transform back.
    std::size_t len = 1;
    while (len < r + 1) len <<= 1;
    std::vector<std::complex<double>> vals(len);
    for (std::size_t j = 0; j < len; ++j) {
        const double ang = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(len);
        const std::complex<double> w(std::cos(ang), std::sin(ang));
        std::complex<double> prod(1.0, 0.0);
        for (double p : probs) prod *= std::complex<double>(1.0 - p, 0.0) + p * w;
        vals[j] = prod;
    }
    fft(vals, /*invert=*/true);
    std::vector<double> coeff(r + 1);
    for (std::size_t k = 0; k <= r; ++k) coeff[k] = std::clamp(vals[k].real(), 0.0, 1.0);
    return coeff;
}

double edge_inclusion_probability(const CycleBasisPrior& prior, Edge e) {
    const std::vector<double> probs = covering_probs(prior, e);
    if (probs.empty()) return 0.0;
    const std::vector<double> pmf = inclusion_count_pmf(probs);
    double odd = 0.0;
    for (std::size_t k = 1; k < pmf.size(); k += 2) odd += pmf[k];
    return odd;
}

double edge_inclusion_probability_closed_form(const CycleBasisPrior& prior, Edge e) {
    const std::vector<double> probs = covering_probs(prior, e);
    if (probs.empty()) return 0.0;
    double prod = 1.0;
    for (double p : probs) prod *= 1.0 - 2.0 * p;
    return 0.5 * (1.0 - prod);
}

VertexEdgeDistribution vertex_joint_edge_distribution(const CycleBasisPrior& prior, int vertex,
                                                      int max_pattern_bits) {
    const int n = prior.vertex_count();
    if (vertex < 0 || vertex >= n)
        throw std::invalid_argument("vertex_joint_edge_distribution: vertex out of range");

    // Cycles through the vertex, each with its two incident edges.
    struct CoveringCycle {
        double p;
        Edge a, b;
    };
    std::vector<CoveringCycle> covering;
    std::vector<Edge> edges;
    for (int k = 0; k < prior.size(); ++k) {
        const Graph& cycle = prior.basis().cycle(k);
        std::vector<Edge> at_vertex;
        cycle.for_each_edge([&](Edge e) {
            if (e.i == vertex || e.j == vertex) at_vertex.push_back(e);
        });
        if (at_vertex.empty()) continue;
        // A simple cycle meets a vertex in exactly two edges.
        covering.push_back({prior.probs()[k], at_vertex[0], at_vertex[1]});
        edges.push_back(at_vertex[0]);
        edges.push_back(at_vertex[1]);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    const int m = static_cast<int>(edges.size());
    if (m > max_pattern_bits)
        throw cap_exceeded("vertex_joint_edge_distribution: 2^" + std::to_string(m) +
                           " patterns exceed the " + std::to_string(max_pattern_bits) + "-bit cap");

    const std::size_t patterns = std::size_t{1} << m;
    std::vector<double> dist(patterns, 0.0);
    dist[0] = 1.0;

    auto bit_of = [&](Edge e) {
        const auto it = std::lower_bound(edges.begin(), edges.end(), e);
        return static_cast<std::size_t>(it - edges.begin());
    };

    // Fold one cycle at a time: dist <- (1-p) dist + p shift(dist, mask).
    // XOR-shifting by the cycle's two incident edges realizes the reduction
    // of exponents modulo 2.
    for (const CoveringCycle& c : covering) {
        const std::size_t mask = (std::size_t{1} << bit_of(c.a)) | (std::size_t{1} << bit_of(c.b));
        const std::size_t rep = mask & ~(mask - 1);  // lowest set bit picks pair representatives
        for (std::size_t x = 0; x < patterns; ++x) {
            if (x & rep) continue;
            const std::size_t y = x ^ mask;
            const double u = dist[x];
            const double v = dist[y];
            dist[x] = (1.0 - c.p) * u + c.p * v;
            dist[y] = (1.0 - c.p) * v + c.p * u;
        }
    }

    return VertexEdgeDistribution{vertex, std::move(edges), std::move(dist)};
}

double star_degree_pmf(int n, double p, int k) {
    if (n < 2) throw std::invalid_argument("star_degree_pmf: need n >= 2");
    validate_probability(p);
    if (k < 0) throw std::invalid_argument("star_degree_pmf: need k >= 0");
    if (k == 0) return std::pow(1.0 - p, n - 2);
    if (k % 2 != 0 || k >= n) return 0.0;

    // Pascal triangle keeps the binomials exact in doubles at these sizes.
    std::vector<double> binom(n - 1, 0.0);
    binom[0] = 1.0;
    for (int row = 1; row <= n - 2; ++row)
        for (int j = row; j >= 1; --j) binom[j] += binom[j - 1];

    double total = 0.0;
    for (int j = k - 1; j <= k; ++j) {
        if (j > n - 2) continue;
        total += binom[j] * std::pow(p, j) * std::pow(1.0 - p, n - 2 - j);
    }
    return total;
}

EdgeCountBounds edge_count_bounds(int n, int included_cycles) {
    if (n < 2) throw std::invalid_argument("edge_count_bounds: need n >= 2");
    const int basis_size = (n - 1) * (n - 2) / 2;
    if (included_cycles < 0 || included_cycles > basis_size)
        throw std::invalid_argument("edge_count_bounds: cycle count out of range");
    const int m = (n - 1) / 2;
    return EdgeCountBounds{included_cycles, included_cycles + 2 * std::min(included_cycles, m)};
}

std::vector<int> sample_distinct_cycles(int basis_size, int r, Rng& rng) {
    if (r < 0 || r > basis_size)
        throw std::invalid_argument("sample_distinct_cycles: r out of range");
    std::vector<int> pool(basis_size);
    for (int k = 0; k < basis_size; ++k) pool[k] = k;
    for (int t = 0; t < r; ++t) {
        boost::random::uniform_int_distribution<int> pick(t, basis_size - 1);
        std::swap(pool[t], pool[pick(rng)]);
    }
    pool.resize(r);
    return pool;
}

}  // namespace cbggm
