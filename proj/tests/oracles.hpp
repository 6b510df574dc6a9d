#pragma once

// Test-only oracles: brute-force enumerations, quadrature rules and helpers
// that stay independent of the library code paths they check.

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/random/normal_distribution.hpp>

#include "cbggm/graph.hpp"
#include "cbggm/gwishart.hpp"
#include "cbggm/rng.hpp"

namespace oracles {

using cbggm::Edge;
using cbggm::Graph;

// Every labelled graph on n vertices (2^{n(n-1)/2} of them); keep n small.
inline std::vector<Graph> all_graphs(int n) {
    const int m = n * (n - 1) / 2;
    std::vector<Graph> graphs;
    graphs.reserve(std::size_t{1} << m);
    for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
        cbggm::Bits bits(m);
        for (int b = 0; b < m; ++b)
            if (mask & (std::size_t{1} << b)) bits.set(b);
        graphs.push_back(Graph::from_bits(n, std::move(bits)));
    }
    return graphs;
}

inline std::vector<Graph> all_cycle_space_members(int n) {
    std::vector<Graph> members;
    for (const Graph& g : all_graphs(n))
        if (cbggm::is_cycle_space_member(g)) members.push_back(g);
    return members;
}

// All spanning trees of g by filtering edge subsets of size n-1.
inline std::vector<Graph> all_spanning_trees_of(const Graph& g) {
    const std::vector<Edge> edges = g.edges();
    const int m = static_cast<int>(edges.size());
    const int n = g.vertex_count();
    std::vector<Graph> trees;
    if (m < n - 1) return trees;
    std::vector<int> take(n - 1);
    std::iota(take.begin(), take.end(), 0);
    const auto is_tree = [&](const std::vector<int>& idx) {
        std::vector<int> parent(n);
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](int x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (int t : idx) {
            const int a = find(edges[t].i);
            const int b = find(edges[t].j);
            if (a == b) return false;
            parent[a] = b;
        }
        return true;
    };
    // Iterate over all (n-1)-subsets of the edge list.
    while (true) {
        if (is_tree(take)) {
            Graph tree(n);
            for (int t : take) tree.set_edge(edges[t]);
            trees.push_back(std::move(tree));
        }
        int pos = n - 2;
        while (pos >= 0 && take[pos] == m - (n - 1) + pos) --pos;
        if (pos < 0) break;
        ++take[pos];
        for (int t = pos + 1; t < n - 1; ++t) take[t] = take[t - 1] + 1;
    }
    return trees;
}

inline double chi_squared_critical(int df, double level = 0.99) {
    return boost::math::quantile(boost::math::chi_squared(df), level);
}

inline double chi_squared_statistic(const std::vector<long>& counts, double total_draws) {
    const double expected = total_draws / static_cast<double>(counts.size());
    double stat = 0.0;
    for (long c : counts) {
        const double d = c - expected;
        stat += d * d / expected;
    }
    return stat;
}

inline double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
    double tv = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) tv += std::abs(p[k] - q[k]);
    return 0.5 * tv;
}

// Rows i.i.d. N(0, K^{-1}).
inline Eigen::MatrixXd sample_gaussian_rows(const Eigen::MatrixXd& precision, int rows,
                                            cbggm::Rng& rng) {
    const Eigen::MatrixXd cov =
        precision.llt().solve(Eigen::MatrixXd::Identity(precision.rows(), precision.cols()));
    const Eigen::MatrixXd chol = Eigen::LLT<Eigen::MatrixXd>(cov).matrixL();
    boost::random::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd x(rows, precision.rows());
    Eigen::VectorXd z(precision.rows());
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < precision.rows(); ++j) z(j) = normal(rng);
        x.row(i) = (chol * z).transpose();
    }
    return x;
}

inline cbggm::Dataset dataset_from_rows(const Eigen::MatrixXd& x) {
    Eigen::MatrixXd scatter = x.transpose() * x;
    scatter = 0.5 * (scatter + scatter.transpose()).eval();
    return cbggm::Dataset(static_cast<int>(x.rows()), std::move(scatter));
}

// Gauss-Legendre rule by Golub-Welsch on the Jacobi matrix.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

inline QuadratureRule gauss_legendre(int order) {
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(order, order);
    for (int i = 1; i < order; ++i) {
        const double b = i / std::sqrt(4.0 * i * i - 1.0);
        jacobi(i, i - 1) = jacobi(i - 1, i) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
    QuadratureRule rule;
    for (int i = 0; i < order; ++i) {
        rule.nodes.push_back(es.eigenvalues()(i));
        const double v = es.eigenvectors()(0, i);
        rule.weights.push_back(2.0 * v * v);  // mu0 = 2
    }
    return rule;
}

inline double logsumexp(const std::vector<double>& terms) {
    double shift = -std::numeric_limits<double>::infinity();
    for (double t : terms) shift = std::max(shift, t);
    if (!std::isfinite(shift)) return shift;
    double total = 0.0;
    for (double t : terms) total += std::exp(t - shift);
    return shift + std::log(total);
}

// log of integral_0^inf exp(log_g(k)) dk by the exp-sinh double-exponential
// trapezoid (k = exp((pi/2) sinh t)), accumulated in log space. Handles the
// algebraic endpoint behaviour of the cone integrands.
template <class LogG>
double log_integral_half_line(LogG&& log_g, double h = 0.02, double t_max = 5.0) {
    std::vector<double> terms;
    for (double t = -t_max; t <= t_max + 1e-12; t += h) {
        const double u = 0.5 * std::numbers::pi * std::sinh(t);
        if (u > 690.0) break;  // node beyond representable exp
        const double k = std::exp(u);
        const double log_jacobian = std::log(0.5 * std::numbers::pi * std::cosh(t)) + u;
        const double lg = log_g(k);
        if (std::isfinite(lg)) terms.push_back(lg + log_jacobian + std::log(h));
    }
    return logsumexp(terms);
}

// log of the 1x1 constant integral(k^{(delta-2)/2} e^{-k d / 2} dk).
inline double log_constant_1d_quadrature(double delta, double d) {
    return log_integral_half_line(
        [&](double k) { return 0.5 * (delta - 2.0) * std::log(k) - 0.5 * k * d; });
}

// log of the 2x2 complete-graph constant: nested exp-sinh over the diagonal
// after the substitution k12 = sin(phi) sqrt(k11 k22), Gauss-Legendre in phi.
inline double log_constant_2d_quadrature(double delta, const Eigen::MatrixXd& rate) {
    static const QuadratureRule leg = gauss_legendre(64);
    const double d11 = rate(0, 0), d22 = rate(1, 1), d12 = rate(0, 1);
    const auto log_phi_integral = [&](double s) {
        std::vector<double> terms;
        terms.reserve(leg.nodes.size());
        for (std::size_t c = 0; c < leg.nodes.size(); ++c) {
            const double phi = 0.5 * std::numbers::pi * leg.nodes[c];
            terms.push_back(std::log(leg.weights[c] * 0.5 * std::numbers::pi) +
                            (delta - 1.0) * std::log(std::cos(phi)) - std::sin(phi) * s * d12);
        }
        return logsumexp(terms);
    };
    return log_integral_half_line(
        [&](double k11) {
            return log_integral_half_line(
                [&](double k22) {
                    return 0.5 * (delta - 1.0) * (std::log(k11) + std::log(k22)) -
                           0.5 * (k11 * d11 + k22 * d22) +
                           log_phi_integral(std::sqrt(k11 * k22));
                },
                0.03, 4.6);
        },
        0.03, 4.6);
}

}  // namespace oracles
