#pragma once

#include "pmod/family.hpp"

#include <string>
#include <vector>

namespace pmod {

enum class VertexProvenance { enumerated, analytic_cut, feasible_partition };

struct BlockerVertex {
    std::vector<double> coords; // length m, >= 0
    VertexProvenance provenance = VertexProvenance::enumerated;
    std::string label;
};

const char* provenance_name(VertexProvenance p);

// All extreme points of {x >= 0 : N x >= 1} by basic-feasible-solution
// enumeration over m-subsets of the m + |Gamma| constraints.  Guards:
// m <= 12 edges and |Gamma| <= 20 objects (the family is enumerated first
// for oracle-backed kinds).  Vertices deduplicated at 1e-9.
std::vector<BlockerVertex> enumerate_blocker_vertices(const Family& f);

struct FeasiblePartition {
    std::vector<int> part_of; // vertex -> part index 0..part_count-1
    int part_count = 0;
    std::vector<int> cut_edges;  // edges whose ends lie in different parts
    std::vector<double> coords;  // 1_{E_P} / (part_count - 1)
    std::string label;           // parts joined by '|'
};

// All vertex partitions into >= 2 parts, every part inducing a connected
// subgraph.  Guard: n <= 10.
std::vector<FeasiblePartition> enumerate_feasible_partitions(const Graph& g);

// The blocking family bound to `target` (a graph with the same topology,
// typically carrying the dual weights): minimal cuts for connect, paths for
// cut, feasible partitions for spanning trees, enumerated polytope vertices
// for explicit rows.
Family blocker_family(const Family& f, const Graph& target);

} // namespace pmod
