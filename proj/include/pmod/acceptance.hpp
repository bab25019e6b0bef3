#pragma once

#include "json.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace pmod {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    double seconds = 0.0;
    std::string detail;
};

struct AcceptanceReport {
    std::vector<CriterionResult> criteria;
    bool pass = true;
    double seconds = 0.0;
};

// Runs the full acceptance suite (nine criteria with pinned tolerances and
// fixed seeds).  When `progress` is set, one "pass"/"FAIL" line per
// criterion is streamed as results arrive.
AcceptanceReport run_acceptance(std::ostream* progress = nullptr, int jobs = 1);

nlohmann::json acceptance_json(const AcceptanceReport& rep);

} // namespace pmod
