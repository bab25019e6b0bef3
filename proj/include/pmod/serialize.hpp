#pragma once

#include "pmod/blocker.hpp"
#include "pmod/duality.hpp"
#include "pmod/graph.hpp"
#include "pmod/metrics.hpp"
#include "pmod/sensitivity.hpp"
#include "pmod/solver.hpp"
#include "pmod/stochastic.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace pmod {

// Finite doubles stay numbers; infinities become the strings "inf"/"-inf"
// so reports stay valid JSON.
nlohmann::json json_number(double x);

nlohmann::json graph_json(const Graph& g);
nlohmann::json solution_json(const ModulusSolution& sol, const Graph& g);
nlohmann::json duality_json(const DualityProductReport& rep, const Graph& g);
nlohmann::json endpoint_duality_json(const EndpointDualityReport& rep, const Graph& g);

// Enumerated blocker vertices with provenance plus per-vertex admissibility
// residuals min_gamma ell_x(gamma) - 1 measured by the family oracle.
nlohmann::json blocker_json(const Family& f, const std::vector<BlockerVertex>& vertices);

nlohmann::json metric_json(const MetricReport& rep);
nlohmann::json ultrametric_json(const UltrametricReport& rep);
nlohmann::json snowflake_json(const SnowflakeWitness& w);

nlohmann::json gradient_json(const GradientReport& rep);
nlohmann::json sweep_json(const SweepReport& rep);
nlohmann::json concavity_json(const ConcavityReport& rep);
nlohmann::json lipschitz_json(const LipschitzReport& rep);

nlohmann::json monte_carlo_json(const MonteCarloReport& rep, bool include_trials = false);

std::string metric_csv(const MetricReport& rep);
std::string sweep_csv(const SweepReport& rep);

// 2-space indent plus trailing newline.
std::string dump_report(const nlohmann::json& j);

} // namespace pmod
