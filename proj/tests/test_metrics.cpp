#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pmod/errors.hpp"
#include "pmod/fixtures.hpp"
#include "pmod/metrics.hpp"

#include <cmath>
#include <random>

using namespace pmod;

namespace {

Graph random_weighted(std::mt19937_64& rng, int n, int extra) {
    std::uniform_real_distribution<double> w(0.5, 2.0);
    Graph g;
    for (int v = 0; v < n; ++v) g.add_vertex("v" + std::to_string(v));
    for (int v = 1; v < n; ++v) {
        std::uniform_int_distribution<int> pick(0, v - 1);
        g.add_edge(v, pick(rng), w(rng));
    }
    for (int i = 0; i < extra; ++i) {
        std::uniform_int_distribution<int> pick(0, n - 1);
        int a = pick(rng), b = pick(rng);
        bool seen = a == b;
        for (const Edge& ed : g.edges())
            seen = seen || (std::min(ed.tail, ed.head) == std::min(a, b) &&
                            std::max(ed.tail, ed.head) == std::max(a, b));
        if (!seen) g.add_edge(a, b, w(rng));
    }
    return g;
}

} // namespace

TEST_CASE("path three-point matrix is the degenerate triangle") {
    Graph p3 = path_graph(3);
    for (double p : {1.5, 2.0, 3.0}) {
        auto rep = delta_p_matrix(p3, p);
        REQUIRE(rep.labels == std::vector<std::string>{"a", "b", "c"});
        CHECK(rep.dist[0][1] == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(rep.dist[1][2] == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(rep.dist[0][2] == doctest::Approx(2.0).epsilon(1e-6));
        // the colinear triple is tight, so the worst slack sits at zero
        CHECK(std::abs(rep.worst_triangle_slack) <= 1e-5);
        CHECK(rep.solves == 3);
        CHECK(rep.all_converged);
    }
}

TEST_CASE("delta two is effective resistance") {
    Graph t = triangle_graph();
    auto rep = delta_p_matrix(t, 2.0);
    CHECK(rep.dist[0][1] == doctest::Approx(2.0 / 3.0).epsilon(1e-6));
    CHECK(rep.max_rel_dev_resistance <= 1e-5);

    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 3; ++trial) {
        Graph g = random_weighted(rng, 6, 3);
        auto r = delta_p_matrix(g, 2.0);
        CHECK(r.all_converged);
        CHECK(r.max_rel_dev_resistance <= 1e-5);
        CHECK(r.solves == 15);
    }
}

TEST_CASE("large p approaches hop distance") {
    std::mt19937_64 rng(13);
    Graph g = random_weighted(rng, 5, 2);
    auto rep = delta_p_matrix(g, 50.0);
    // hop >= 2 pairs sit at Mod ~ hop^{1-p} ~ 1e-15 where the relative gap
    // cannot certify in doubles; the distances themselves stay accurate
    CHECK(rep.max_rel_dev_hops <= 0.1);
    CHECK(rep.offdiagonal_positive);
}

TEST_CASE("inverse modulus metric") {
    Graph p3 = path_graph(3);
    auto rep = mod_inverse_metric(p3, 1.5);
    CHECK(rep.kind == "mod_inverse");
    CHECK(rep.dist[0][1] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(rep.dist[0][2] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
    CHECK(rep.offdiagonal_positive);
    CHECK(rep.worst_triangle_slack >= -1e-6);

    // near p = 1 the values land on 1 / min cut
    Graph t = triangle_graph();
    auto near1 = mod_inverse_metric(t, 1.05);
    CHECK(near1.dist[0][1] == doctest::Approx(0.5).epsilon(0.15));
    CHECK(near1.max_rel_dev_inv_mincut <= 0.15);

    CHECK_THROWS_AS(mod_inverse_metric(p3, 2.0), ParseError);
    CHECK_THROWS_AS(mod_inverse_metric(p3, 1.0), ParseError);
    CHECK_THROWS_AS(mod_inverse_metric(p3, 0.5), ParseError);
}

TEST_CASE("triangle inequality and positivity on random graphs") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 4; ++trial) {
        Graph g = random_weighted(rng, 4 + trial, 2);
        for (double p : {1.5, 2.0, 3.0}) {
            auto rep = delta_p_matrix(g, p);
            CHECK(rep.all_converged);
            CHECK(rep.offdiagonal_positive);
            CHECK(rep.worst_triangle_slack >= -1e-6);
            int n = g.vertex_count();
            for (int i = 0; i < n; ++i) {
                CHECK(rep.dist[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] == 0.0);
                for (int j = i + 1; j < n; ++j)
                    CHECK(rep.dist[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] ==
                          doctest::Approx(rep.dist[static_cast<std::size_t>(j)]
                                                  [static_cast<std::size_t>(i)]));
            }
        }
        auto inv = mod_inverse_metric(g, 1.5);
        CHECK(inv.worst_triangle_slack >= -1e-6);
        CHECK(inv.offdiagonal_positive);
    }
}

TEST_CASE("worker count does not change the matrix") {
    std::mt19937_64 rng(19);
    Graph g = random_weighted(rng, 6, 3);
    auto serial = delta_p_matrix(g, 1.5);
    auto threaded = delta_p_matrix(g, 1.5, SolverOptions{}, 4);
    for (std::size_t i = 0; i < serial.dist.size(); ++i)
        for (std::size_t j = 0; j < serial.dist.size(); ++j)
            CHECK(serial.dist[i][j] == threaded.dist[i][j]);
}

TEST_CASE("min cut reciprocal is an ultrametric") {
    Graph t = triangle_graph();
    auto rep = ultrametric_check(t);
    CHECK(rep.pass);
    CHECK(rep.d_mc[0][1] == doctest::Approx(0.5));
    CHECK(rep.worst_slack >= -1e-12);

    Graph p3 = path_graph(3);
    auto prep = ultrametric_check(p3);
    CHECK(prep.pass);
    CHECK(prep.d_mc[0][2] == doctest::Approx(1.0)); // bottleneck edge
    CHECK(prep.worst_slack >= -1e-12);

    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 5; ++trial) {
        Graph g = random_weighted(rng, 5 + trial % 4, 3);
        auto r = ultrametric_check(g);
        CHECK(r.pass);
        CHECK(r.worst_slack >= -1e-12);
    }
}

TEST_CASE("snowflaking breaks the triangle inequality") {
    auto w = anti_snowflake_witness(2.0, 0.1);
    CHECK(w.d_ab == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(w.d_bc == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(w.d_ac == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(w.lhs == doctest::Approx(std::pow(2.0, 1.1)).epsilon(1e-5));
    CHECK(w.rhs == doctest::Approx(2.0).epsilon(1e-5));
    CHECK(w.violated);

    auto w3 = anti_snowflake_witness(3.0, 1.0);
    CHECK(w3.lhs == doctest::Approx(4.0).epsilon(1e-5));
    CHECK(w3.violated);

    auto flat = anti_snowflake_witness(2.0, 0.0);
    CHECK_FALSE(flat.violated); // eps = 0 keeps the degenerate equality

    CHECK_THROWS_AS(anti_snowflake_witness(2.0, -0.5), ParseError);
}
