#include <map>
#include <set>
#include <sstream>

#include "doctest.h"

#include "cbggm/cycle_basis.hpp"
#include "oracles.hpp"

#include <boost/random/uniform_01.hpp>

using namespace cbggm;

TEST_SUITE("cycle_basis") {

TEST_CASE("star trees") {
    CHECK(star_tree(4, 0).edges() == std::vector<Edge>{{0, 1}, {0, 2}, {0, 3}});
    CHECK(star_tree(2, 0).edges() == std::vector<Edge>{{0, 1}});
    CHECK(star_tree(4, 2).edges() == std::vector<Edge>{{0, 2}, {1, 2}, {2, 3}});
    CHECK_THROWS_AS(star_tree(4, 4), std::invalid_argument);
    CHECK_THROWS_AS(star_tree(4, -1), std::invalid_argument);
}

TEST_CASE("spanning tree validation") {
    CHECK_NOTHROW(SpanningTree(3, {{0, 1}, {1, 2}}));
    CHECK_THROWS_AS(SpanningTree(3, {{0, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(SpanningTree(4, std::vector<Edge>{{0, 1}, {1, 2}, {0, 2}}),
                    std::invalid_argument);
}

TEST_CASE("random spanning trees: n=2 and n=3 frequencies") {
    Rng rng = make_rng(5);
    CHECK(random_spanning_tree(2, rng).edges() == std::vector<Edge>{{0, 1}});

    // Cayley: 3 trees on 3 vertices, each with frequency 1/3.
    std::map<std::vector<Edge>, long> counts;
    const long draws = 30000;
    for (long t = 0; t < draws; ++t) counts[random_spanning_tree(3, rng).edges()] += 1;
    CHECK(counts.size() == 3);
    const double sigma = std::sqrt(draws * (1.0 / 3) * (2.0 / 3));
    for (const auto& [tree, count] : counts)
        CHECK(std::abs(count - draws / 3.0) <= 3.0 * sigma);
}

TEST_CASE("random spanning trees: n=4 uniform by chi-square") {
    Rng rng = make_rng(17);
    std::map<std::vector<Edge>, long> counts;
    const long draws = 64000;
    for (long t = 0; t < draws; ++t) counts[random_spanning_tree(4, rng).edges()] += 1;
    CHECK(counts.size() == 16);  // Cayley 4^2
    std::vector<long> cells;
    for (const auto& [tree, count] : counts) cells.push_back(count);
    CHECK(oracles::chi_squared_statistic(cells, draws) < oracles::chi_squared_critical(15));
}

TEST_CASE("random spanning trees: fixed-edge marginal is 2/n") {
    Rng rng = make_rng(29);
    const int n = 6;
    const long draws = 30000;
    long hits = 0;
    for (long t = 0; t < draws; ++t)
        if (random_spanning_tree(n, rng).to_graph().has_edge(1, 4)) ++hits;
    const double p = 2.0 / n;
    const double sigma = std::sqrt(draws * p * (1 - p));
    CHECK(std::abs(hits - draws * p) <= 3.0 * sigma);
}

TEST_CASE("fundamental cycles of the star tree are the root triangles") {
    const FundamentalCycleBasis basis(star_tree(4, 0));
    REQUIRE(basis.size() == 3);
    CHECK(basis.cycle(0) == Graph::from_edges(4, {{0, 1}, {0, 2}, {1, 2}}));
    CHECK(basis.cycle(1) == Graph::from_edges(4, {{0, 1}, {0, 3}, {1, 3}}));
    CHECK(basis.cycle(2) == Graph::from_edges(4, {{0, 2}, {0, 3}, {2, 3}}));
    CHECK(basis.generator(0) == Edge{1, 2});
    CHECK(basis.generator(1) == Edge{1, 3});
    CHECK(basis.generator(2) == Edge{2, 3});
}

TEST_CASE("fundamental cycles of a path tree") {
    const FundamentalCycleBasis basis(SpanningTree(3, {{0, 1}, {1, 2}}));
    REQUIRE(basis.size() == 1);
    CHECK(basis.cycle(0) == Graph::from_edges(3, {{0, 1}, {1, 2}, {0, 2}}));
}

TEST_CASE("basis structure on random trees") {
    Rng rng = make_rng(31);
    for (int rep = 0; rep < 20; ++rep) {
        const int n = 5 + rep % 3;
        const FundamentalCycleBasis basis(random_spanning_tree(n, rng));
        CHECK(basis.size() == (n - 1) * (n - 2) / 2);
        const Graph tree_graph = basis.tree().to_graph();
        std::set<int> generator_indices;
        for (int k = 0; k < basis.size(); ++k) {
            const Graph& cycle = basis.cycle(k);
            CHECK(is_cycle_space_member(cycle));
            // Exactly one non-tree edge per cycle: its generator.
            int non_tree = 0;
            cycle.for_each_edge([&](Edge e) {
                if (!tree_graph.has_edge(e)) ++non_tree;
            });
            CHECK(non_tree == 1);
            CHECK(cycle.has_edge(basis.generator(k)));
            generator_indices.insert(edge_index(basis.generator(k).i, basis.generator(k).j, n));
        }
        CHECK(static_cast<int>(generator_indices.size()) == basis.size());
    }
}

TEST_CASE("decompose selects the generator coordinates") {
    const FundamentalCycleBasis basis(star_tree(4, 0));
    const Graph four_cycle = Graph::from_edges(4, {{0, 2}, {1, 2}, {0, 3}, {1, 3}});
    const auto coords = basis.decompose(four_cycle);
    REQUIRE(coords.has_value());
    CHECK(coords->test(0));        // generator (1,2)
    CHECK(coords->test(1));        // generator (1,3)
    CHECK_FALSE(coords->test(2));  // generator (2,3)
    CHECK(basis.reconstruct(*coords) == four_cycle);

    const auto zero = basis.decompose(Graph(4));
    REQUIRE(zero.has_value());
    CHECK(zero->none());

    CHECK_FALSE(basis.decompose(Graph::from_edges(4, {{0, 1}})).has_value());
}

TEST_CASE("reconstruct of unit coordinates returns the basis cycle") {
    const FundamentalCycleBasis basis(star_tree(5, 0));
    CHECK(basis.reconstruct(Bits(basis.size())) == Graph(5));
    for (int k = 0; k < basis.size(); ++k) {
        Bits unit(basis.size());
        unit.set(k);
        CHECK(basis.reconstruct(unit) == basis.cycle(k));
    }
    Bits wrong(basis.size() + 1);
    CHECK_THROWS_AS(basis.reconstruct(wrong), std::invalid_argument);
}

TEST_CASE("round trip over all members for n=4,5 and injectivity") {
    Rng rng = make_rng(37);
    for (int n = 4; n <= 5; ++n) {
        const FundamentalCycleBasis basis(random_spanning_tree(n, rng));
        const auto members = oracles::all_cycle_space_members(n);
        std::set<std::string> images;
        for (std::size_t mask = 0; mask < (std::size_t{1} << basis.size()); ++mask) {
            Bits coords(basis.size());
            for (int b = 0; b < basis.size(); ++b)
                if (mask & (std::size_t{1} << b)) coords.set(b);
            const Graph g = basis.reconstruct(coords);
            images.insert(g.bits().to_string());
            const auto back = basis.decompose(g);
            REQUIRE(back.has_value());
            CHECK(*back == coords);
        }
        // Distinct coordinates give distinct graphs, and they cover C_n.
        CHECK(images.size() == members.size());
    }
}

TEST_CASE("membership decides decomposability under every basis") {
    Rng rng = make_rng(41);
    boost::random::uniform_01<double> unif;
    const int n = 6;
    for (int rep = 0; rep < 40; ++rep) {
        Graph g(n);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (unif(rng) < 0.4) g.set_edge(i, j);
        const FundamentalCycleBasis basis(random_spanning_tree(n, rng));
        CHECK(basis.decompose(g).has_value() == is_cycle_space_member(g));
    }
}

TEST_CASE("randomized round trip at n=12") {
    Rng rng = make_rng(43);
    const FundamentalCycleBasis basis(random_spanning_tree(12, rng));
    boost::random::uniform_01<double> unif;
    for (int rep = 0; rep < 30; ++rep) {
        Bits coords(basis.size());
        for (int k = 0; k < basis.size(); ++k)
            if (unif(rng) < 0.5) coords.set(k);
        const Graph g = basis.reconstruct(coords);
        CHECK(is_cycle_space_member(g));
        const auto back = basis.decompose(g);
        REQUIRE(back.has_value());
        CHECK(*back == coords);
    }
}

TEST_CASE("tree edge lists round-trip") {
    Rng rng = make_rng(47);
    const SpanningTree tree = random_spanning_tree(7, rng);
    std::stringstream ss;
    write_edge_list(ss, tree);
    CHECK(read_tree_edge_list(ss, 7) == tree);
}

}  // TEST_SUITE
