#pragma once

#include "pmod/graph.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace pmod {

// k internally disjoint paths of ell unit edges each between vertices a, b.
Graph parallel_graph(int k, int ell);

// Path v0 - v1 - ... - v_{n-1}; labels "a", "b", "c", ... for n <= 26.
Graph path_graph(int n, const std::vector<double>& weights = {});

Graph triangle_graph(const std::vector<double>& weights = {});
Graph complete_graph(int n);
Graph cycle_graph(int n);

// Connected simple graph: random spanning tree plus `extra` distinct chords
// (fewer when the complete graph runs out).  Weighted draws are uniform in
// [wlo, whi]; unweighted graphs get weight 1.
Graph random_connected_graph(std::mt19937_64& rng, int n, int extra, bool weighted = false,
                             double wlo = 0.5, double whi = 2.0);

// One representative per isomorphism class of connected simple graphs on n
// unlabeled vertices (n <= 7 guard; counts 1, 1, 2, 6, 21, 112, 853).
std::vector<Graph> connected_graphs_up_to_iso(int n);

} // namespace pmod
