#include "pmod/fixtures.hpp"

#include "pmod/errors.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <set>
#include <string>

namespace pmod {

namespace {

std::string vertex_name(int i) {
    if (i < 26) return std::string(1, static_cast<char>('a' + i));
    return "v" + std::to_string(i);
}

std::vector<int> letter_vertices(Graph& g, int n) {
    std::vector<int> ids;
    for (int i = 0; i < n; ++i) ids.push_back(g.add_vertex(vertex_name(i)));
    return ids;
}

} // namespace

Graph parallel_graph(int k, int ell) {
    if (k < 1 || ell < 1) throw ParseError("parallel graph needs k >= 1 and ell >= 1");
    Graph g;
    int a = g.add_vertex("a");
    int b = g.add_vertex("b");
    for (int i = 0; i < k; ++i) {
        int prev = a;
        for (int j = 1; j < ell; ++j) {
            int v = g.add_vertex("p" + std::to_string(i) + "_" + std::to_string(j));
            g.add_edge(prev, v, 1.0);
            prev = v;
        }
        g.add_edge(prev, b, 1.0);
    }
    return g;
}

Graph path_graph(int n, const std::vector<double>& weights) {
    if (n < 1) throw ParseError("path graph needs at least one vertex");
    if (!weights.empty() && static_cast<int>(weights.size()) != n - 1)
        throw ParseError("path graph expects n-1 weights");
    Graph g;
    auto ids = letter_vertices(g, n);
    for (int i = 0; i + 1 < n; ++i)
        g.add_edge(ids[i], ids[i + 1], weights.empty() ? 1.0 : weights[i]);
    return g;
}

Graph triangle_graph(const std::vector<double>& weights) {
    if (!weights.empty() && weights.size() != 3)
        throw ParseError("triangle expects three weights");
    Graph g;
    auto ids = letter_vertices(g, 3);
    g.add_edge(ids[0], ids[1], weights.empty() ? 1.0 : weights[0]);
    g.add_edge(ids[1], ids[2], weights.empty() ? 1.0 : weights[1]);
    g.add_edge(ids[0], ids[2], weights.empty() ? 1.0 : weights[2]);
    return g;
}

Graph complete_graph(int n) {
    if (n < 2) throw ParseError("complete graph needs at least two vertices");
    Graph g;
    auto ids = letter_vertices(g, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) g.add_edge(ids[i], ids[j], 1.0);
    return g;
}

Graph cycle_graph(int n) {
    if (n < 3) throw ParseError("cycle graph needs at least three vertices");
    Graph g;
    auto ids = letter_vertices(g, n);
    for (int i = 0; i < n; ++i) g.add_edge(ids[i], ids[(i + 1) % n], 1.0);
    return g;
}

Graph random_connected_graph(std::mt19937_64& rng, int n, int extra, bool weighted,
                             double wlo, double whi) {
    if (n < 2) throw ParseError("random graph needs at least two vertices");
    if (extra < 0) throw ParseError("random graph chord count must be nonnegative");
    if (weighted && !(0.0 < wlo && wlo <= whi))
        throw ParseError("random graph weight range must satisfy 0 < wlo <= whi");

    std::uniform_real_distribution<double> wdist(wlo, whi);
    auto weight = [&] { return weighted ? wdist(rng) : 1.0; };

    Graph g;
    auto ids = letter_vertices(g, n);
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);

    std::set<std::pair<int, int>> used;
    for (int i = 1; i < n; ++i) {
        std::uniform_int_distribution<int> pick(0, i - 1);
        int u = order[static_cast<std::size_t>(pick(rng))];
        int v = order[static_cast<std::size_t>(i)];
        g.add_edge(ids[std::min(u, v)], ids[std::max(u, v)], weight());
        used.insert({std::min(u, v), std::max(u, v)});
    }

    std::vector<std::pair<int, int>> chords;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (!used.count({i, j})) chords.push_back({i, j});
    std::shuffle(chords.begin(), chords.end(), rng);
    for (int c = 0; c < extra && c < static_cast<int>(chords.size()); ++c)
        g.add_edge(ids[chords[c].first], ids[chords[c].second], weight());
    return g;
}

namespace {

int pair_index(int i, int j, int n) { // i < j
    return i * n - i * (i + 1) / 2 + (j - i - 1);
}

std::uint32_t canonical_mask(std::uint32_t mask, int n,
                             const std::vector<std::vector<int>>& perms) {
    std::uint32_t best = mask;
    for (const auto& perm : perms) {
        std::uint32_t remapped = 0;
        for (int i = 0, idx = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j, ++idx)
                if (mask & (1u << idx)) {
                    int pi = perm[static_cast<std::size_t>(i)];
                    int pj = perm[static_cast<std::size_t>(j)];
                    remapped |= 1u << pair_index(std::min(pi, pj), std::max(pi, pj), n);
                }
        best = std::min(best, remapped);
    }
    return best;
}

} // namespace

std::vector<Graph> connected_graphs_up_to_iso(int n) {
    if (n < 1 || n > 7)
        throw GuardError("isomorphism-class enumeration is limited to 1..7 vertices");

    // Grow classes one vertex at a time: every connected graph has a
    // non-cut vertex, so it arises from a smaller class plus one vertex
    // attached to a nonempty subset.
    std::vector<std::uint32_t> masks = {0u}; // single vertex
    for (int size = 2; size <= n; ++size) {
        std::vector<std::vector<int>> perms;
        std::vector<int> perm(static_cast<std::size_t>(size));
        std::iota(perm.begin(), perm.end(), 0);
        do {
            perms.push_back(perm);
        } while (std::next_permutation(perm.begin(), perm.end()));

        std::set<std::uint32_t> next;
        int newv = size - 1;
        for (std::uint32_t base : masks) {
            // Pair indices of existing edges shift when n grows.
            std::uint32_t lifted = 0;
            for (int i = 0, idx = 0; i < size - 1; ++i)
                for (int j = i + 1; j < size - 1; ++j, ++idx)
                    if (base & (1u << idx)) lifted |= 1u << pair_index(i, j, size);
            for (std::uint32_t att = 1; att < (1u << newv); ++att) {
                std::uint32_t cand = lifted;
                for (int i = 0; i < newv; ++i)
                    if (att & (1u << i)) cand |= 1u << pair_index(i, newv, size);
                next.insert(canonical_mask(cand, size, perms));
            }
        }
        masks.assign(next.begin(), next.end());
    }

    std::vector<Graph> out;
    for (std::uint32_t mask : masks) {
        Graph g;
        auto ids = letter_vertices(g, n);
        for (int i = 0, idx = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j, ++idx)
                if (mask & (1u << idx)) g.add_edge(ids[i], ids[j], 1.0);
        out.push_back(std::move(g));
    }
    return out;
}

} // namespace pmod
