#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pmod/errors.hpp"
#include "pmod/family.hpp"
#include "pmod/fixtures.hpp"
#include "pmod/graph.hpp"

#include <algorithm>
#include <limits>
#include <random>

using namespace pmod;

TEST_CASE("usage row normalization") {
    UsageRow row;
    row.entries = {{2, 1.0}, {0, 0.5}, {2, 0.25}, {1, 0.0}};
    row.normalize(3);
    // sorted, merged, zeros dropped
    CHECK(row.entries == std::vector<std::pair<int, double>>{{0, 0.5}, {2, 1.25}});
    CHECK(row.min_positive() == 0.5);
    CHECK(row.usage(2) == 1.25);
    CHECK(row.usage(1) == 0.0);
    CHECK(row.has_edge(0));
    CHECK_FALSE(row.has_edge(1));
    CHECK(row.dot({1.0, 1.0, 2.0}) == doctest::Approx(3.0));
    CHECK(row.dense(3) == std::vector<double>{0.5, 0.0, 1.25});

    UsageRow bad;
    bad.entries = {{0, -1.0}};
    CHECK_THROWS_AS(bad.normalize(3), ParseError);
    UsageRow oob;
    oob.entries = {{5, 1.0}};
    CHECK_THROWS_AS(oob.normalize(3), ParseError);
    UsageRow zero;
    zero.entries = {{0, 0.0}};
    CHECK_THROWS_AS(zero.normalize(3), FamilyEmptyError); // non-triviality
}

TEST_CASE("connect oracle on fixtures") {
    Graph p3 = path_graph(3);
    Family f = Family::connect(p3, "a", "c");
    auto r = f.shortest_object(Density::constant(2, 1.0));
    CHECK(r.value == doctest::Approx(2.0));
    CHECK(r.row.entries == std::vector<std::pair<int, double>>{{0, 1.0}, {1, 1.0}});
    CHECK(f.n_min() == 1.0);

    Graph two;
    two.add_edge("a", "b");
    two.add_edge("c", "d");
    CHECK_THROWS_AS(Family::connect(two, "a", "c").shortest_object(Density::constant(2, 1.0)),
                    FamilyEmptyError);
    CHECK_THROWS_AS(Family::connect(p3, "a", "a"), ParseError);
    CHECK_THROWS_AS(Family::connect(p3, "a", "zz"), ParseError);
}

TEST_CASE("cut oracle on fixtures") {
    Graph p3 = path_graph(3);
    Family f = Family::cut(p3, "a", "c");
    auto r = f.shortest_object(Density({1.0, 0.5}));
    CHECK(r.value == doctest::Approx(0.5));
    CHECK(r.row.entries == std::vector<std::pair<int, double>>{{1, 1.0}});
}

TEST_CASE("spanning tree oracle tie break") {
    Graph t = triangle_graph();
    Family f = Family::spanning_trees(t);
    auto r = f.shortest_object(Density::constant(3, 1.0));
    CHECK(r.value == doctest::Approx(2.0));
    CHECK(r.row.entries.size() == 2);
    CHECK(r.row.entries[0].first == 0); // deterministic by edge id
}

TEST_CASE("enumeration") {
    Graph t = triangle_graph();
    CHECK(Family::spanning_trees(t).enumerate(8).size() == 3);

    Graph one;
    one.add_edge("a", "b");
    auto rows = Family::connect(one, "a", "b").enumerate(8);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].entries == std::vector<std::pair<int, double>>{{0, 1.0}});

    Graph par = parallel_graph(3, 2);
    auto paths = Family::connect(par, "a", "b").enumerate(8);
    CHECK(paths.size() == 3);
    for (const auto& row : paths) CHECK(row.entries.size() == 2);

    // refusal, not truncation
    CHECK_THROWS_AS(Family::spanning_trees(complete_graph(5)).enumerate(20), GuardError);
    CHECK_THROWS_AS(Family::spanning_trees(t).enumerate(2), GuardError);
}

TEST_CASE("explicit families and json") {
    Graph p3 = path_graph(3);
    UsageRow r0, r1;
    r0.entries = {{0, 0.5}, {1, 2.0}};
    r1.entries = {{1, 1.0}};
    Family f = Family::explicit_rows(p3, {r0, r1});
    CHECK(f.n_min() == 0.5);
    CHECK(f.rows().size() == 2);
    auto best = f.shortest_object(Density({1.0, 1.0}));
    CHECK(best.value == doctest::Approx(1.0)); // second row is cheaper

    Family g = Family::from_json(p3, R"({"rows":[
        {"edges":{"a-b":1.0},"label":"left"},
        {"edges":{"b-c":1.0}}]})");
    CHECK(g.rows().size() == 2);
    CHECK(g.rows()[0].label == "left");

    CHECK_THROWS_AS(Family::from_json(p3, R"({"rows":[{"edges":{}}]})"), FamilyEmptyError);
    CHECK_THROWS_AS(Family::from_json(p3, R"({"rows":[{"edges":{"x-y":1.0}}]})"), ParseError);
    CHECK_THROWS_AS(Family::from_json(p3, R"({"rows":[{"edges":{"a-b":-1.0}}]})"), ParseError);
    CHECK_THROWS_AS(Family::from_json(p3, "nope"), ParseError);
    CHECK_THROWS_AS(Family::explicit_rows(p3, {}), FamilyEmptyError);
}

TEST_CASE("family specs") {
    Graph p3 = path_graph(3);
    CHECK(Family::from_spec(p3, "connect:a,c").kind() == FamilyKind::connect);
    CHECK(Family::from_spec(p3, "cut:a,c").kind() == FamilyKind::cut);
    CHECK(Family::from_spec(p3, "spanning-tree").kind() == FamilyKind::spanning_tree);
    Family ex = Family::from_spec(p3, R"(explicit:{"rows":[{"edges":{"a-b":1.0}}]})");
    CHECK(ex.kind() == FamilyKind::explicit_rows);
    CHECK_FALSE(ex.describe().empty());

    CHECK_THROWS_AS(Family::from_spec(p3, "connect:a"), ParseError);
    CHECK_THROWS_AS(Family::from_spec(p3, "walk:a,b"), ParseError);
    CHECK_THROWS_AS(Family::from_spec(p3, ""), ParseError);
}

TEST_CASE("rebind keeps the definition on a reweighted copy") {
    Graph p3 = path_graph(3);
    Family f = Family::connect(p3, "a", "c");
    Graph h = p3.reweighted(Density({5.0, 5.0}));
    Family g = f.rebind(h);
    CHECK(g.kind() == FamilyKind::connect);
    CHECK(&g.graph() == &h);
    CHECK(g.shortest_object(Density::constant(2, 1.0)).value == doctest::Approx(2.0));
}

TEST_CASE("oracle matches enumeration minimum") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> dist(0.0, 2.0);
    Graph g = random_connected_graph(rng, 6, 3);
    Family connect = Family::connect(g, g.label(0), g.label(5));
    Family cut = Family::cut(g, g.label(0), g.label(5));
    Family trees = Family::spanning_trees(g);
    for (const Family* f : {&connect, &cut, &trees}) {
        auto rows = f->enumerate(4096);
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<double> rho;
            for (int e = 0; e < g.edge_count(); ++e) rho.push_back(dist(rng));
            double brute = std::numeric_limits<double>::infinity();
            for (const auto& row : rows) brute = std::min(brute, row.dot(rho));
            auto got = f->shortest_object(Density(rho));
            CHECK(got.value == doctest::Approx(brute).epsilon(1e-10));
        }
    }
}

TEST_CASE("cut oracle equals max flow") {
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> dist(0.1, 2.0);
    for (int trial = 0; trial < 10; ++trial) {
        Graph g = random_connected_graph(rng, 5 + static_cast<int>(rng() % 3), 3);
        Family f = Family::cut(g, g.label(0), g.label(1));
        std::vector<double> rho;
        for (int e = 0; e < g.edge_count(); ++e) rho.push_back(dist(rng));
        double flow = min_cut(g, 0, 1, Density(rho)).value;
        CHECK(f.shortest_object(Density(rho)).value == doctest::Approx(flow).epsilon(1e-10));
    }
}

TEST_CASE("n_min of integer families") {
    Graph par = parallel_graph(2, 3);
    CHECK(Family::connect(par, "a", "b").n_min() == 1.0);
    CHECK(Family::cut(par, "a", "b").n_min() == 1.0);
    CHECK(Family::spanning_trees(triangle_graph()).n_min() == 1.0);
    CHECK(Family::connect(par, "a", "b").min_total_usage() == doctest::Approx(3.0));
}
