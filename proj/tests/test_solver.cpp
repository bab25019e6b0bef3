#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pmod/errors.hpp"
#include "pmod/fixtures.hpp"
#include "pmod/reference.hpp"
#include "pmod/solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace pmod;

namespace {

Family random_explicit(std::mt19937_64& rng, const Graph& g, int max_rows,
                       std::vector<UsageRow>* out_rows = nullptr) {
    std::uniform_real_distribution<double> udist(0.5, 2.0);
    std::uniform_int_distribution<int> kdist(2, max_rows);
    int m = g.edge_count();
    std::vector<UsageRow> rows;
    int K = kdist(rng);
    for (int k = 0; k < K; ++k) {
        UsageRow row;
        for (int e = 0; e < m; ++e)
            if (rng() % 2 == 0) row.entries.push_back({e, udist(rng)});
        if (row.entries.empty()) row.entries.push_back({static_cast<int>(rng() % m), udist(rng)});
        row.normalize(m);
        rows.push_back(std::move(row));
    }
    if (out_rows) *out_rows = rows;
    return Family::explicit_rows(g, std::move(rows));
}

} // namespace

TEST_CASE("parallel path closed form") {
    for (int k : {2, 3})
        for (int ell : {2, 3}) {
            Graph g = parallel_graph(k, ell);
            Family f = Family::connect(g, "a", "b");
            for (double p : {1.5, 2.0, 3.0}) {
                ModulusSolution sol = solve(f, p);
                CHECK(sol.converged);
                CHECK(sol.value ==
                      doctest::Approx(k / std::pow(double(ell), p - 1.0)).epsilon(1e-5));
            }
        }
}

TEST_CASE("weighted series circuit") {
    // two resistors in series: Mod_2 = s1 s2/(s1+s2), rho*(ab) = s2/(s1+s2)
    Graph g = path_graph(3, {2.0, 3.0});
    Family f = Family::connect(g, "a", "c");
    SolverOptions tight;
    tight.rel_tol = 1e-10;
    ModulusSolution sol = solve(f, 2.0, tight);
    CHECK(sol.value == doctest::Approx(6.0 / 5.0).epsilon(1e-8));
    CHECK(sol.rho[0] == doctest::Approx(3.0 / 5.0).epsilon(1e-5));
    CHECK(sol.rho[1] == doctest::Approx(2.0 / 5.0).epsilon(1e-5));
    CHECK(sol.eta[0] == doctest::Approx(1.0).epsilon(1e-5)); // unit flow everywhere
    CHECK(sol.lower <= sol.value);
    CHECK(sol.value <= sol.upper);
}

TEST_CASE("p3 sharpness values") {
    Graph g = path_graph(3);
    Family f = Family::connect(g, "a", "c");
    for (double p : {1.5, 2.0, 3.0, 5.0}) {
        ModulusSolution sol = solve(f, p);
        CHECK(sol.value == doctest::Approx(std::pow(2.0, 1.0 - p)).epsilon(1e-6));
    }
}

TEST_CASE("p=1 endpoints") {
    Graph par = parallel_graph(3, 2);
    CHECK(solve(Family::connect(par, "a", "b"), 1.0).value == doctest::Approx(3.0));

    Graph p3 = path_graph(3);
    CHECK(solve(Family::connect(p3, "a", "c"), 1.0).value == doctest::Approx(1.0));
    // cut family: blocker is paths, Mod_1 = shortest sigma-path
    CHECK(solve(Family::cut(p3, "a", "c"), 1.0).value == doctest::Approx(2.0));

    // explicit rows {(1,0),(0,1)} on sigma=(2,3): single blocker vertex (1,1)
    Graph w = path_graph(3, {2.0, 3.0});
    UsageRow r0, r1;
    r0.entries = {{0, 1.0}};
    r1.entries = {{1, 1.0}};
    ModulusSolution sol = solve(Family::explicit_rows(w, {r0, r1}), 1.0);
    CHECK(sol.value == doctest::Approx(5.0));
    REQUIRE(sol.blocker_vertex.has_value());
    CHECK(sol.blocker_vertex->dense(2) == std::vector<double>{1.0, 1.0});

    CHECK_THROWS_AS(solve(Family::spanning_trees(triangle_graph()), 1.0), UnsupportedError);
}

TEST_CASE("p=inf endpoints") {
    Graph par = parallel_graph(3, 2);
    double inf = std::numeric_limits<double>::infinity();
    CHECK(solve(Family::connect(par, "a", "b"), inf).value == 0.5);

    Graph one;
    one.add_edge("a", "b", 2.0);
    CHECK(solve(Family::connect(one, "a", "b"), inf).value == doctest::Approx(2.0));

    Graph p3 = path_graph(3);
    CHECK(solve(Family::cut(p3, "a", "c"), inf).value == doctest::Approx(1.0));
}

TEST_CASE("p validation and conditioning warnings") {
    Graph p3 = path_graph(3);
    Family f = Family::connect(p3, "a", "c");
    CHECK_THROWS_AS(solve(f, 0.5), ParseError);
    CHECK_THROWS_AS(solve(f, std::nan("")), ParseError);
    CHECK_FALSE(solve(f, 1.05).warnings.empty());
    CHECK_FALSE(solve(f, 30.0).warnings.empty());
    CHECK(solve(f, 2.0).warnings.empty());
}

TEST_CASE("certificates on random connect instances") {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 6; ++i) {
        Graph g = random_connected_graph(rng, 4 + static_cast<int>(rng() % 3), 3, true);
        Family f = Family::connect(g, g.label(0), g.label(1));
        Density sig = g.sigma();
        double sigma_min = *std::min_element(sig.values.begin(), sig.values.end());
        for (double p : {1.5, 2.0, 3.0}) {
            ModulusSolution sol = solve(f, p);
            REQUIRE(sol.converged);
            CHECK((sol.upper - sol.lower) / sol.upper <= 1e-6);
            CHECK(sol.admissibility >= 1.0 - 1e-10);
            // rho* never exceeds 1/N_min (unique extremal density bound)
            for (int e = 0; e < g.edge_count(); ++e) {
                CHECK(sol.rho[e] >= 0.0);
                CHECK(sol.rho[e] <= 1.0 / f.n_min() + 1e-8);
            }
            // Hoelder chain: sum rho* eta* == 1 at optimality
            double dot = 0.0;
            for (int e = 0; e < g.edge_count(); ++e) dot += sol.rho[e] * sol.eta[e];
            CHECK(dot == doctest::Approx(1.0).epsilon(1e-5));
            // pmf is a distribution over the active rows
            double total = 0.0;
            for (double w : sol.pmf) {
                CHECK(w >= 0.0);
                total += w;
            }
            CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
            CHECK(sol.lambda_l1 == doctest::Approx(p * sol.value).epsilon(1e-4));
            CHECK(sol.quasi_radius ==
                  doctest::Approx(clarkson_radius(sol.upper, std::max(sol.lower, 0.0), p,
                                                  sigma_min))
                      .epsilon(1e-12));
        }
    }
}

TEST_CASE("matches interior point reference on explicit families") {
    std::mt19937_64 rng(32);
    for (int i = 0; i < 4; ++i) {
        std::uniform_real_distribution<double> wdist(0.5, 2.0);
        std::vector<double> w;
        int m = 3 + static_cast<int>(rng() % 3);
        for (int e = 0; e < m; ++e) w.push_back(wdist(rng));
        Graph g = path_graph(m + 1, w);
        std::vector<UsageRow> rows;
        Family f = random_explicit(rng, g, 5, &rows);
        for (double p : {1.5, 2.0, 3.0}) {
            ModulusSolution sol = solve(f, p);
            BarrierResult ref = barrier_modulus(rows, g.sigma().values, p, 1e-11);
            CHECK(sol.value == doctest::Approx(ref.value).epsilon(1e-6));
        }
    }
}

TEST_CASE("monotone under added rows and subadditive") {
    std::mt19937_64 rng(33);
    Graph g = path_graph(5);
    for (int trial = 0; trial < 8; ++trial) {
        std::vector<UsageRow> rows1, rows2;
        random_explicit(rng, g, 4, &rows1);
        random_explicit(rng, g, 4, &rows2);
        std::vector<UsageRow> both = rows1;
        both.insert(both.end(), rows2.begin(), rows2.end());
        double p = 1.5 + (trial % 3);
        double m1 = solve(Family::explicit_rows(g, rows1), p).value;
        double m2 = solve(Family::explicit_rows(g, rows2), p).value;
        double mu = solve(Family::explicit_rows(g, both), p).value;
        CHECK(mu >= m1 - 2e-6 * std::max(mu, 1.0)); // more constraints, larger modulus
        CHECK(mu <= m1 + m2 + 2e-6 * std::max(mu, 1.0));
    }
}

TEST_CASE("p interpolation monotonicity") {
    std::vector<double> grid = {1.25, 1.5, 2.0, 3.0, 5.0};
    std::mt19937_64 rng(34);
    Graph rnd = random_connected_graph(rng, 5, 3);
    struct Case {
        const Graph& g;
        std::string a, b;
    };
    Graph tri = triangle_graph();
    Graph par = parallel_graph(2, 2);
    std::vector<Case> cases = {{tri, "a", "b"}, {par, "a", "b"}, {rnd, rnd.label(0), rnd.label(4)}};
    for (const auto& c : cases) {
        Family f = Family::connect(c.g, c.a, c.b);
        double sigma_total = c.g.sigma_total();
        double prev_dec = std::numeric_limits<double>::infinity();
        double prev_inc = 0.0;
        for (double p : grid) {
            double mod = solve(f, p).value;
            double dec = std::pow(f.n_min(), p) * mod;
            double inc = std::pow(mod / sigma_total, 1.0 / p);
            CHECK(dec <= prev_dec * (1.0 + 1e-5));
            CHECK(inc >= prev_inc * (1.0 - 1e-5));
            prev_dec = dec;
            prev_inc = inc;
        }
    }
}

TEST_CASE("large p tracks the hop count") {
    Graph par = parallel_graph(2, 3);
    Family f = Family::connect(par, "a", "b");
    double mod = solve(f, 50.0).value;
    CHECK(std::pow(mod, 1.0 / 50.0) == doctest::Approx(1.0 / 3.0).epsilon(0.05));
}

TEST_CASE("iteration caps flag non-convergence with valid bounds") {
    Graph par = parallel_graph(3, 2);
    Family f = Family::connect(par, "a", "b");
    SolverOptions opts;
    opts.max_outer = 1;
    ModulusSolution sol = solve_modulus(f, 1.5, opts);
    CHECK_FALSE(sol.converged);
    CHECK_FALSE(sol.warnings.empty());
    CHECK(sol.lower <= sol.upper);
    CHECK(sol.upper >= 0.0);
    ModulusSolution full = solve(f, 1.5);
    CHECK(sol.lower <= full.value * (1.0 + 1e-9));
    CHECK(sol.upper >= full.value * (1.0 - 1e-9));
}

TEST_CASE("energy helper") {
    Graph g = path_graph(3, {2.0, 3.0});
    Density rho({0.5, 2.0});
    CHECK(energy(g, 2.0, rho) == doctest::Approx(2.0 * 0.25 + 3.0 * 4.0));
    CHECK(energy(g, 1.0, rho) == doctest::Approx(2.0 * 0.5 + 3.0 * 2.0));
    CHECK(conjugate_exponent(2.0) == 2.0);
    CHECK(conjugate_exponent(3.0) == doctest::Approx(1.5));
}
