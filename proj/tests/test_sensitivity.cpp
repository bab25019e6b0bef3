#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pmod/errors.hpp"
#include "pmod/fixtures.hpp"
#include "pmod/sensitivity.hpp"

#include <cmath>

using namespace pmod;

TEST_CASE("gradient matches the series closed form") {
    // Mod = s0 s1 / (s0 + s1), so both partials are 1/4 at unit weights
    Graph p3 = path_graph(3);
    auto rep = gradient_check(Family::connect(p3, "a", "c"), 2.0);
    REQUIRE(rep.entries.size() == 2);
    CHECK(rep.mod == doctest::Approx(0.5).epsilon(1e-8));
    for (const auto& entry : rep.entries) {
        CHECK(entry.analytic == doctest::Approx(0.25).epsilon(1e-6));
        CHECK(entry.fd == doctest::Approx(0.25).epsilon(1e-4));
        CHECK(entry.pass);
    }
    CHECK(rep.pass);
    CHECK(rep.max_rel_dev <= 1e-3);
}

TEST_CASE("gradient on a single saturated edge is one") {
    Graph one;
    one.add_edge("a", "b", 1.7);
    for (double p : {1.5, 2.0, 3.0}) {
        auto rep = gradient_check(Family::connect(one, "a", "b"), p);
        REQUIRE(rep.entries.size() == 1);
        CHECK(rep.entries[0].analytic == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(rep.entries[0].fd == doctest::Approx(1.0).epsilon(1e-3));
        CHECK(rep.pass);
    }
}

TEST_CASE("gradient on parallel strands") {
    Graph par = parallel_graph(3, 2);
    auto rep = gradient_check(Family::connect(par, "a", "b"), 2.0);
    REQUIRE(rep.entries.size() == 6);
    for (const auto& entry : rep.entries)
        CHECK(entry.analytic == doctest::Approx(0.25).epsilon(1e-6));
    CHECK(rep.pass);
    CHECK(rep.max_rel_dev <= 1e-3);
}

TEST_CASE("gradient validation") {
    Graph p3 = path_graph(3);
    Family f = Family::connect(p3, "a", "c");
    CHECK_THROWS_AS(gradient_check(f, 2.0, 0.0), ParseError);
    CHECK_THROWS_AS(gradient_check(f, 2.0, -1e-3), ParseError);
    CHECK_THROWS_AS(gradient_check(f, 2.0, 0.7), ParseError);
    CHECK_THROWS_AS(gradient_check(f, 0.5), ParseError);
    CHECK_THROWS_AS(gradient_check(f, std::nan("")), ParseError);
}

TEST_CASE("sweep follows the series closed forms") {
    Graph p3 = path_graph(3);
    Family f = Family::connect(p3, "a", "c");
    std::vector<double> grid = {0.5, 1.0, 2.0, 4.0};
    auto rep = monotonicity_sweep(f, 2.0, 0, grid);
    REQUIRE(rep.rows.size() == 4);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double s = grid[i];
        CHECK(rep.rows[i].converged);
        CHECK(rep.rows[i].sigma_e == doctest::Approx(s));
        CHECK(rep.rows[i].mod == doctest::Approx(s / (s + 1.0)).epsilon(1e-6));
        CHECK(rep.rows[i].rho_e == doctest::Approx(1.0 / (s + 1.0)).epsilon(1e-5));
        CHECK(rep.rows[i].eta_e == doctest::Approx(1.0).epsilon(1e-5)); // single cut
    }
    CHECK(rep.worst_mod_violation <= rep.slack);
    CHECK(rep.worst_rho_violation <= rep.slack);
    CHECK(rep.worst_eta_violation <= rep.slack);
    CHECK(rep.pass);
    CHECK(rep.edge_key == p3.edge_key(0));
}

TEST_CASE("sweep validation") {
    Graph p3 = path_graph(3);
    Family f = Family::connect(p3, "a", "c");
    CHECK_THROWS_AS(monotonicity_sweep(f, 2.0, -1, {1.0, 2.0}), ParseError);
    CHECK_THROWS_AS(monotonicity_sweep(f, 2.0, 2, {1.0, 2.0}), ParseError);
    CHECK_THROWS_AS(monotonicity_sweep(f, 2.0, 0, {1.0}), ParseError);
    CHECK_THROWS_AS(monotonicity_sweep(f, 2.0, 0, {0.0, 1.0}), ParseError);
    CHECK_THROWS_AS(monotonicity_sweep(f, 2.0, 0, {2.0, 1.0}), ParseError);
}

TEST_CASE("modulus is concave along weight segments") {
    Graph p3 = path_graph(3);
    Family f = Family::connect(p3, "a", "c");
    Density s0 = Density::constant(2, 1.0);

    auto flat = concavity_check(f, 2.0, s0, s0);
    CHECK(flat.pass);
    CHECK(flat.mod0 == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(flat.mod1 == doctest::Approx(0.5).epsilon(1e-6));
    for (double s : flat.slacks) CHECK(std::abs(s) <= 1e-6);

    Density s1(std::vector<double>{4.0, 1.0});
    auto rep = concavity_check(f, 2.0, s0, s1);
    CHECK(rep.pass);
    CHECK(rep.mod1 == doctest::Approx(0.8).epsilon(1e-6));
    CHECK(rep.min_slack >= rep.allowed);
    // interior points sit strictly above the chord for this instance
    CHECK(rep.min_slack > 1e-4);

    CHECK_THROWS_AS(concavity_check(f, 2.0, s0, s1, {0.0, 0.5}), ParseError);
    CHECK_THROWS_AS(concavity_check(f, 2.0, s0, s1, {0.5, 1.0}), ParseError);
}

TEST_CASE("lipschitz bound on weight perturbations") {
    Graph p3 = path_graph(3);
    Family f = Family::connect(p3, "a", "c");
    Density s0 = Density::constant(2, 1.0);
    Density s1(std::vector<double>{2.0, 1.5});
    auto rep = lipschitz_witness(f, 2.0, s0, s1);
    CHECK(rep.lhs == doctest::Approx(6.0 / 7.0 - 0.5).epsilon(1e-5));
    CHECK(rep.bound == doctest::Approx(1.5).epsilon(1e-9)); // n_min = 1
    CHECK(rep.pass);
    CHECK(rep.slack == doctest::Approx(rep.bound - rep.lhs).epsilon(1e-9));

    // indicator rows have unit entries, so the tree bound is just the l1 move
    Graph t = triangle_graph();
    Family trees = Family::spanning_trees(t);
    Density t0 = Density::constant(3, 1.0);
    Density t1(std::vector<double>{1.2, 1.0, 0.8});
    auto trep = lipschitz_witness(trees, 2.0, t0, t1);
    CHECK(trep.bound == doctest::Approx(0.4).epsilon(1e-9));
    CHECK(trep.pass);

    // doubled usage entries shrink the constant to n_min^{-p} = 1/4
    Graph g2;
    g2.add_edge("a", "b");
    g2.add_edge("b", "c");
    UsageRow r1, r2;
    r1.entries = {{0, 2.0}};
    r2.entries = {{1, 2.0}};
    Family doubled = Family::explicit_rows(g2, {r1, r2});
    Density d1(std::vector<double>{1.3, 1.1});
    auto drep = lipschitz_witness(doubled, 2.0, s0, d1);
    CHECK(drep.bound == doctest::Approx(0.25 * 0.4).epsilon(1e-9));
    CHECK(drep.lhs == doctest::Approx(0.1).epsilon(1e-5)); // Mod = (s0 + s1)/4
    CHECK(drep.pass);

    CHECK_THROWS_AS(lipschitz_witness(f, 0.5, s0, s1), ParseError);
}

TEST_CASE("optimal density varies continuously in the weights") {
    Graph p3 = path_graph(3);
    Family f = Family::connect(p3, "a", "c");
    SolverOptions tight;
    tight.rel_tol = 1e-10;
    auto base = solve_modulus(f, 2.0, tight);
    double prev = 1e300;
    for (double h : {1e-1, 1e-2, 1e-3}) {
        Graph g2 = p3.reweighted(Density(std::vector<double>{1.0 + h, 1.0}));
        auto moved = solve_modulus(f.rebind(g2), 2.0, tight);
        double dev = 0.0;
        for (int e = 0; e < 2; ++e)
            dev = std::max(dev, std::abs(moved.rho[e] - base.rho[e]));
        CHECK(dev <= 0.6 * h); // |d rho0 / d s0| = 1/4 at unit weights
        CHECK(dev < prev);
        prev = dev;
    }
}
